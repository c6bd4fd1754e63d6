//! The fuzz targets' properties, run over the fuzz seed corpora and over
//! random strings on the stable toolchain.

use std::path::Path;

use proptest::prelude::*;
use ssiso::curve::Curve;
use ssiso::ff::{FieldCtx, FieldElem};
use ssiso::latgen::parse_norms;
use ssiso::proto::hex_to_bits;
use ssiso::quat::{parse_rational, QuatLattice, ThetaSeries};
use ssiso::ssgraph::{parse_factored, SsGraph};

/// Each parser's round-trip property; returns whether the input parsed.
fn check(target: &str, s: &str) -> bool {
    match target {
        "field_text" => {
            let mut any = false;
            for ctx in [FieldCtx::fp2(101).unwrap(), FieldCtx::ext(7, 3).unwrap()] {
                if let Ok(x) = FieldElem::parse(&ctx, s) {
                    assert_eq!(FieldElem::parse(&ctx, &x.to_string()).unwrap(), x);
                    any = true;
                }
            }
            any
        }
        "curve_json" => Curve::from_json_str(s)
            .map(|e| {
                let text = serde_json::to_string(&e.to_json()).unwrap();
                assert_eq!(Curve::from_json_str(&text).unwrap(), e);
            })
            .is_ok(),
        "graph_json" => SsGraph::from_json_str(s)
            .map(|g| {
                let text = serde_json::to_string(&g.to_json()).unwrap();
                assert_eq!(SsGraph::from_json_str(&text).unwrap(), g);
                let _ = g.validate();
            })
            .is_ok(),
        "lattice_json" => QuatLattice::from_json_str(s)
            .map(|l| {
                let text = serde_json::to_string(&l.to_json()).unwrap();
                assert_eq!(QuatLattice::from_json_str(&text).unwrap(), l);
            })
            .is_ok(),
        "rational" => parse_rational(s)
            .map(|x| assert_eq!(parse_rational(&format!("{}/{}", x.numer(), x.denom())).unwrap(), x))
            .is_ok(),
        "theta_csv" => ThetaSeries::from_csv(s)
            .map(|t| assert_eq!(ThetaSeries::from_csv(&t.to_csv()).unwrap(), t))
            .is_ok(),
        "hex_message" => hex_to_bits(s).map(|b| assert_eq!(b.len() % 8, 0)).is_ok(),
        "norm_list" => parse_norms(s)
            .map(|v| {
                let text: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                assert_eq!(parse_norms(&text.join(",")).unwrap(), v);
            })
            .is_ok(),
        "factored_poly" => [2u64, 37, 101]
            .iter()
            .filter_map(|&p| parse_factored(p, s).ok().map(|f| assert!(f.iter().flatten().all(|&c| c < p))))
            .count()
            > 0,
        _ => panic!("unknown target {target}"),
    }
}

const TARGETS: [&str; 9] = [
    "field_text",
    "curve_json",
    "graph_json",
    "lattice_json",
    "rational",
    "theta_csv",
    "hex_message",
    "norm_list",
    "factored_poly",
];

#[test]
fn seed_corpora_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    for t in TARGETS {
        let dir = root.join(t);
        let mut n = 0;
        for entry in std::fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())) {
            let path = entry.unwrap().path();
            let text = std::fs::read_to_string(&path).unwrap();
            assert!(check(t, &text), "seed {} does not parse", path.display());
            n += 1;
        }
        assert!(n > 0, "no seeds for {t}");
    }
}

#[test]
fn malformed_inputs_are_errors() {
    for (t, s) in [
        ("field_text", "101"),
        ("field_text", "u^"),
        ("curve_json", r#"{"p":101,"a":"0","b":"0"}"#),
        ("curve_json", r#"{"p":4,"a":"1","b":"1"}"#),
        ("graph_json", r#"{"p":101,"ell":2,"vertices":[],"edges":[[0,0,1]]}"#),
        ("lattice_json", r#"{"p":103,"basis":[["1/0","0","0","0"]]}"#),
        ("rational", "1/0"),
        ("rational", "--1"),
        ("theta_csv", "0,2\n"),
        ("hex_message", "0xg0"),
        ("norm_list", "0,2"),
        ("norm_list", ""),
        ("factored_poly", "(x^2+"),
    ] {
        assert!(!check(t, s), "{t} accepted {s:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn arbitrary_text_never_panics(t in 0usize..TARGETS.len(), s in "\\PC{0,60}") {
        check(TARGETS[t], &s);
    }

    #[test]
    fn structured_text_never_panics(t in 0usize..TARGETS.len(), s in "[-+0-9a-fux^*/(), {}\\[\\]\":#\\n]{0,60}") {
        check(TARGETS[t], &s);
    }
}
