use std::process::Command;

use ssiso_cli::run;

fn isg(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("isg").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["ssgraph", "build", "--p", "101", "--ell", "2", "--format", "json"], 0),
        (&["ssgraph", "build", "--p", "4", "--ell", "2"], 2),
        (&["ssgraph", "build", "--p", "101", "--ell", "4"], 2),
        (&["ssgraph", "spectra", "--p", "101", "--format", "dot"], 2),
        (&["ssgraph", "sspoly", "--p", "47"], 0),
        (&["quat", "rigidity", "--p", "103"], 0),
        (&["quat", "theta", "--p", "103", "--class", "99"], 2),
        (&["proto", "hash", "--p", "101", "--hex", "zz"], 2),
        (&["proto", "hash", "--p", "101"], 2),
        (&["latgen", "witness", "--t", "3"], 0),
        (&["latgen", "witness", "--x", "1"], 2),
        (&["accept", "--only", "99"], 2),
        (&["frobnicate"], 2),
        (&["--help"], 0),
    ];
    for (args, want) in cases {
        assert_eq!(isg(args).0, *want, "{args:?}");
    }
}

#[test]
fn graph_json_round_trips() {
    let (code, out, _) = isg(&["ssgraph", "build", "--p", "101", "--ell", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let g = ssiso::ssgraph::SsGraph::from_json_str(&out).unwrap();
    assert_eq!(g.len(), 9);
    assert_eq!(g, ssiso::ssgraph::build_graph(101, 2).unwrap());
}

#[test]
fn rigidity_message() {
    let (code, out, _) = isg(&["quat", "rigidity", "--p", "103"]);
    assert_eq!(code, 0);
    assert!(out.contains("all non-paired thetas distinct"));
}

#[test]
fn theta_csv_and_classes_json_parse_back() {
    let (_, csv, _) = isg(&["quat", "theta", "--p", "103", "--class", "2", "--n", "20"]);
    let t = ssiso::quat::ThetaSeries::from_csv(&csv).unwrap();
    assert_eq!(t.precision(), 20);
    let (_, js, _) = isg(&["quat", "classes", "--p", "103", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    assert_eq!(v["h"], 9);
    let o = ssiso::quat::QuatLattice::from_json_str(&v["classes"][2]["left_order"].to_string()).unwrap();
    assert!(o.is_order());
}

#[test]
fn hash_forms_agree() {
    let a = isg(&["proto", "hash", "--p", "101", "--hex", "a1"]).1;
    let b = isg(&["proto", "hash", "--p", "101", "--bits", "10100001"]).1;
    assert_eq!(a, b);
    assert_eq!(isg(&["proto", "hash", "--p", "101", "--bits", ""]).1.trim(), "0");
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("isg-out-{}.txt", std::process::id()));
    let (code, out, _) = isg(&["ssgraph", "sspoly", "--p", "101", "--out", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text.trim(), "x(x-3)(x-21)(x-57)(x-59)(x-64)(x-66)(x^2+27x+54)");
}

/// Seeds: flag beats environment beats default.
#[test]
fn seed_precedence() {
    let demo = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_isg"));
        c.args(["proto", "sidh-demo"]).env_remove("ISG_SEED");
        if let Some(e) = env {
            c.env("ISG_SEED", e);
        }
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        let o = c.output().unwrap();
        assert!(o.status.success());
        String::from_utf8(o.stdout).unwrap()
    };
    let default = demo(None, None);
    let seeded = |s: &str| demo(None, Some(s));
    assert_eq!(default, seeded(&ssiso_cli::DEFAULT_SEED.to_string()));
    assert_eq!(demo(Some("9"), None), seeded("9"));
    assert_eq!(demo(Some("9"), Some("4")), seeded("4"));
    assert_ne!(seeded("9"), seeded("4"));
}

#[test]
fn threads_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_isg"))
        .args(["-v", "ssgraph", "build", "--p", "103"])
        .env("ISG_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().contains("threads 2"));
}
