use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use ssiso::latgen::{e8, generated_by_norms, local_witness_2, local_witness_p, parse_norms, ZLattice};
use ssiso::proto::{cgl_hash, hex_to_bits, sidh_run, sidh_setup_seeded, SIDH_SEED};
use ssiso::quat::{brandt, brandt_identities, class_set, theta_rigidity, theta_series, MAX_NMAX};
use ssiso::ssgraph::{build_graph, essential_automorphisms, frobenius_involution, spectral_report, ss_polynomial};
use ssiso::Error;

use crate::accept;
use crate::selftest::ff_selftest;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "isg", version, about = "Supersingular isogeny graphs from curves and from quaternion ideals")]
struct Cli {
    /// Seed for randomized procedures.
    #[arg(long, env = "ISG_SEED", default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, env = "ISG_THREADS", default_value_t = 0, global = true)]
    threads: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Finite field checks.
    #[command(subcommand)]
    Ff(FfCmd),
    /// Supersingular j-invariants and 𝒢(p, ℓ).
    #[command(subcommand)]
    Ssgraph(SsCmd),
    /// Quaternion ideal classes, Brandt matrices, theta series.
    #[command(subcommand)]
    Quat(QuatCmd),
    /// Lattice generation by prescribed norms.
    #[command(subcommand)]
    Latgen(LatCmd),
    /// CGL hash and toy SIDH.
    #[command(subcommand)]
    Proto(ProtoCmd),
    /// Run the acceptance criteria.
    Accept {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum FfCmd {
    /// Field axioms, canonical order and text round trips on random elements.
    Selftest {
        #[arg(long, default_value_t = 101)]
        p: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    ell: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum SsCmd {
    Build(GraphArgs),
    Spectra(GraphArgs),
    Sspoly {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    Autos(GraphArgs),
}

#[derive(Subcommand, Debug)]
enum QuatCmd {
    /// Right ideal class representatives of the standard maximal order.
    Classes {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        ell: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// B(n) and the Brandt identities.
    Brandt {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Theta series of O_ℓ(I_i), or of Hom(I_i, I_j) with --with j.
    Theta {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        class: usize,
        #[arg(long)]
        with: Option<usize>,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Equal endomorphism thetas exactly for Frobenius-paired classes.
    Rigidity {
        #[arg(long)]
        p: u64,
        /// Precision; defaults to p.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum LatCmd {
    /// Is the lattice spanned by its vectors with norm in S?
    Check {
        /// Use E8 (Cartan Gram).
        #[arg(long, conflicts_with_all = ["p", "class"])]
        e8: bool,
        /// Left order of a class of the maximal order at p.
        #[arg(long, requires = "class")]
        p: Option<u64>,
        #[arg(long)]
        class: Option<usize>,
        /// Comma-separated norms. Defaults to {2} for E8, else powers of 2 up to the cap.
        #[arg(long)]
        norms: Option<String>,
        #[arg(long, default_value_t = 1024)]
        cap: u64,
    },
    /// The explicit local bases: --t for the hyperbolic one, --x --y --z for
    /// the sum of squares.
    Witness {
        #[arg(long, conflicts_with_all = ["x", "y", "z"])]
        t: Option<i64>,
        #[arg(long, requires_all = ["y", "z"])]
        x: Option<i64>,
        #[arg(long)]
        y: Option<i64>,
        #[arg(long)]
        z: Option<i64>,
    },
}

#[derive(Subcommand, Debug)]
enum ProtoCmd {
    /// CGL hash of a message given as hex (big-endian bits) or a bit string.
    Hash {
        #[arg(long)]
        p: u64,
        #[arg(long, conflicts_with = "bits", required_unless_present = "bits")]
        hex: Option<String>,
        #[arg(long)]
        bits: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// One exchange with secrets drawn from --seed.
    SidhDemo {
        #[arg(long, default_value_t = 2)]
        la: u64,
        #[arg(long, default_value_t = 4)]
        ra: u32,
        #[arg(long, default_value_t = 3)]
        lb: u64,
        #[arg(long, default_value_t = 3)]
        rb: u32,
    },
}

enum Failure {
    Usage(String),
    Verify(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<String, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit
/// code: 0 on success, 1 when a verification fails, 2 on usage errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    if cli.threads > 0 {
        // a second initialization in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let (result, text) = match dispatch(&cli) {
        Ok(s) => (0, s),
        Err(Failure::Verify(s)) => (1, s),
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return 2;
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return match e {
                Error::Parameter(_) | Error::Parse(_) => 2,
                _ => 1,
            };
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return 1;
    }
    if cli.verbose > 0 {
        let _ = writeln!(stderr, "seed {} threads {}", cli.seed, rayon::current_num_threads());
    }
    result
}

fn dispatch(cli: &Cli) -> Out {
    match &cli.cmd {
        Cmd::Ff(FfCmd::Selftest { p, format }) => selftest(*p, cli.seed, *format),
        Cmd::Ssgraph(c) => ssgraph(c),
        Cmd::Quat(c) => quat(c),
        Cmd::Latgen(c) => latgen(c),
        Cmd::Proto(c) => proto(c, cli.seed),
        Cmd::Accept { only } => accept_cmd(only),
    }
}

fn unsupported(f: Format) -> Failure {
    Failure::Usage(format!("format {f:?} is not available for this command").to_lowercase())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn verified(ok: bool, text: String) -> Out {
    if ok {
        Ok(text)
    } else {
        Err(Failure::Verify(text))
    }
}

fn selftest(p: u64, seed: u64, format: Format) -> Out {
    let checks = ff_selftest(p, seed)?;
    let ok = checks.iter().all(|c| c.1);
    let text = match format {
        Format::Json => {
            pretty(&json!({"p": p, "checks": checks.iter().map(|(n, pass)| json!({"name": n, "pass": pass})).collect::<Vec<_>>()}))
        }
        Format::Text => checks.iter().map(|(n, pass)| format!("{} {n}\n", if *pass { "ok  " } else { "FAIL" })).collect(),
        f => return Err(unsupported(f)),
    };
    verified(ok, text)
}

fn ssgraph(c: &SsCmd) -> Out {
    match c {
        SsCmd::Build(a) => {
            let g = build_graph(a.p, a.ell)?;
            Ok(match a.format {
                Format::Json => pretty(&to_value(&g.to_json())),
                Format::Dot => g.to_dot(),
                Format::Csv => {
                    let mut s = String::from("from,to,multiplicity\n");
                    for (i, row) in g.adj.iter().enumerate() {
                        for (k, &m) in row.iter().enumerate().filter(|x| *x.1 > 0) {
                            let _ = writeln!(s, "{},{},{m}", g.vertices[i], g.vertices[k]);
                        }
                    }
                    s
                }
                Format::Text => {
                    let mut s = format!("G({},{}): {} vertices, {} loops\n", g.p, g.ell, g.len(), g.loop_count());
                    for (i, row) in g.adj.iter().enumerate() {
                        let nbrs: Vec<String> = row
                            .iter()
                            .enumerate()
                            .flat_map(|(k, &m)| std::iter::repeat_n(g.vertices[k].to_string(), m as usize))
                            .collect();
                        let _ = writeln!(s, "{} (2w={}): {}", g.vertices[i], g.w2[i], nbrs.join(" "));
                    }
                    s
                }
            })
        }
        SsCmd::Spectra(a) => {
            let g = build_graph(a.p, a.ell)?;
            let r = spectral_report(&g)?;
            let ok = r.trivial_mult == 1 && r.is_ramanujan() && !r.has_minus_trivial;
            let text = match a.format {
                Format::Json => pretty(&to_value(&r)),
                Format::Text => {
                    let ev: Vec<String> = r.eigenvalues.iter().map(|x| format!("{x:.6}")).collect();
                    format!(
                        "eigenvalues: {}\nmultiplicity of {}: {}\nmax nontrivial |λ| = {:.6} (bound {:.6})\n-{} present: {}\nRamanujan: {}\n",
                        ev.join(" "),
                        a.ell + 1,
                        r.trivial_mult,
                        r.max_nontrivial_abs,
                        r.ramanujan_bound,
                        a.ell + 1,
                        r.has_minus_trivial,
                        if ok { "yes" } else { "no" }
                    )
                }
                f => return Err(unsupported(f)),
            };
            verified(ok, text)
        }
        SsCmd::Sspoly { p, format } => {
            let s = ss_polynomial(*p)?;
            Ok(match format {
                Format::Json => pretty(&json!({"p": p, "degree": s.degree(), "coeffs": s.coeffs, "factored": s.to_string()})),
                Format::Text => format!("{s}\n"),
                f => return Err(unsupported(*f)),
            })
        }
        SsCmd::Autos(a) => {
            let g = build_graph(a.p, a.ell)?;
            let r = essential_automorphisms(&g)?;
            let fr = frobenius_involution(&g)?;
            let mut expect = vec![(0..g.len()).collect::<Vec<_>>(), fr];
            expect.sort();
            expect.dedup();
            let id_fr = r.elements == expect;
            Ok(match a.format {
                Format::Json => {
                    let mut v = to_value(&r);
                    v["identity_and_frobenius_only"] = json!(id_fr);
                    pretty(&v)
                }
                Format::Text => format!(
                    "|Aut^ess G({},{})| = {}\ngenerators: {:?}\nexactly {{Id, Fr}}: {}\n",
                    a.p, a.ell, r.order, r.generators, id_fr
                ),
                f => return Err(unsupported(f)),
            })
        }
    }
}

fn q_str(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn quat(c: &QuatCmd) -> Out {
    match c {
        QuatCmd::Classes { p, ell, format } => {
            let cs = class_set(*p, *ell)?;
            let mass: BigRational = cs.w2.iter().map(|&w| BigRational::new(BigInt::from(1), BigInt::from(w))).sum();
            Ok(match format {
                Format::Json => pretty(&json!({
                    "p": p,
                    "h": cs.len(),
                    "mass": q_str(&mass),
                    "classes": (0..cs.len()).map(|i| json!({
                        "norm": cs.norms[i].to_string(),
                        "w2": cs.w2[i],
                        "frobenius": cs.frobenius[i],
                        "ideal": to_value(&cs.ideals[i].to_json()),
                        "left_order": to_value(&cs.left_orders[i].to_json()),
                    })).collect::<Vec<_>>(),
                })),
                Format::Text => {
                    let mut s = format!("p = {p}: {} classes, mass {}\n", cs.len(), q_str(&mass));
                    for i in 0..cs.len() {
                        let _ = writeln!(s, "{i}: norm {} 2w={} [I]->[IP]: {}", cs.norms[i], cs.w2[i], cs.frobenius[i]);
                    }
                    s
                }
                f => return Err(unsupported(*f)),
            })
        }
        QuatCmd::Brandt { p, n, format } => {
            let n_max = (*n).max(27).max(*p as usize);
            if n_max > MAX_NMAX {
                return Err(Failure::Usage(format!("B(n) is computed up to n = {MAX_NMAX}")));
            }
            let set = brandt(*p, n_max)?;
            let rep = brandt_identities(&set)?;
            let b = set.b(*n);
            let text = match format {
                Format::Json => pretty(&json!({"p": p, "n": n, "h": set.h(), "matrix": b, "identities": to_value(&rep.checks)})),
                Format::Text => {
                    let mut s = format!("B({n}) at p = {p}:\n");
                    for row in b.iter() {
                        let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                        let _ = writeln!(s, "  {}", r.join(" "));
                    }
                    for c in &rep.checks {
                        let _ = writeln!(s, "{} {}", if c.pass { "ok  " } else { "FAIL" }, c.name);
                    }
                    s
                }
                Format::Csv => {
                    let mut s = String::new();
                    for row in b.iter() {
                        let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                        let _ = writeln!(s, "{}", r.join(","));
                    }
                    s
                }
                Format::Dot => return Err(unsupported(*format)),
            };
            verified(rep.all_pass(), text)
        }
        QuatCmd::Theta { p, class, with, n, format } => {
            let cs = class_set(*p, 2)?;
            let h = cs.len();
            if *class >= h || with.is_some_and(|j| j >= h) {
                return Err(Failure::Usage(format!("class index out of range: there are {h} classes")));
            }
            let t = match with {
                None => theta_series(&cs.left_orders[*class], &BigRational::from_integer(BigInt::from(1)), *n)?,
                Some(j) => {
                    let (l, c) = cs.hom_lattice(*class, *j)?;
                    theta_series(&l, &c, *n)?
                }
            };
            Ok(match format {
                Format::Csv => t.to_csv(),
                Format::Json => pretty(&json!({"p": p, "normalization": q_str(&t.normalization), "coeffs": t.coeffs})),
                Format::Text => {
                    let r: Vec<String> = t.coeffs.iter().map(|x| x.to_string()).collect();
                    format!("{}\n", r.join(" "))
                }
                Format::Dot => return Err(unsupported(*format)),
            })
        }
        QuatCmd::Rigidity { p, n, format } => {
            let r = theta_rigidity(*p, n.unwrap_or(*p as usize))?;
            let text = match *format {
                Format::Json => pretty(&to_value(&r)),
                Format::Text => {
                    let mut s = format!(
                        "p = {}: {} classes, precision {}, Frobenius pairs {:?}\n",
                        r.p, r.classes, r.precision, r.paired
                    );
                    if r.passes() {
                        s.push_str("paired classes have equal thetas\nall non-paired thetas distinct\n");
                    } else {
                        let _ = writeln!(s, "violations: {:?}", r.violations);
                    }
                    if !r.unseparated_by_powers_of_two.is_empty() {
                        let _ = writeln!(s, "not separated by coefficients at 2^k: {:?}", r.unseparated_by_powers_of_two);
                    }
                    s
                }
                f => return Err(unsupported(f)),
            };
            verified(r.passes(), text)
        }
    }
}

fn latgen(c: &LatCmd) -> Out {
    match c {
        LatCmd::Check { e8: use_e8, p, class, norms, cap } => {
            let (name, l) = match (use_e8, p, class) {
                (true, _, _) => ("E8".to_string(), e8()?),
                (false, Some(p), Some(i)) => {
                    let cs = class_set(*p, 2)?;
                    let o = cs
                        .left_orders
                        .get(*i)
                        .ok_or_else(|| Failure::Usage(format!("class index out of range: there are {} classes", cs.len())))?;
                    (format!("left order of class {i} at p = {p}"), ZLattice::from_order(o)?)
                }
                _ => return Err(Failure::Usage("give --e8 or both --p and --class".into())),
            };
            let s = match norms {
                Some(t) => parse_norms(t)?,
                None if *use_e8 => vec![2],
                None => std::iter::successors(Some(1u64), |x| x.checked_mul(2)).take_while(|x| x <= cap).collect(),
            };
            let r = generated_by_norms(&l, &s, *cap)?;
            let mut v = to_value(&r);
            v["lattice"] = json!(name);
            if !r.generated {
                v["note"] = json!("not generated up to the cap; inconclusive");
            }
            Ok(pretty(&v))
        }
        LatCmd::Witness { t, x, y, z } => {
            let (w, expect) = match (t, x, y, z) {
                (Some(t), None, None, None) => (local_witness_2(*t), "1".to_string()),
                (None, Some(x), Some(y), Some(z)) => (local_witness_p(*x, *y, *z), (2 * z).to_string()),
                _ => return Err(Failure::Usage("give --t, or all of --x --y --z".into())),
            };
            let ok = w.rows_ok && w.det == expect;
            let mut v = to_value(&w);
            v["expected_det"] = json!(expect);
            verified(ok, pretty(&v))
        }
    }
}

fn proto(c: &ProtoCmd, seed: u64) -> Out {
    match c {
        ProtoCmd::Hash { p, hex, bits, format } => {
            let b = match (hex, bits) {
                (Some(h), _) => hex_to_bits(h)?,
                (None, Some(s)) => {
                    if !s.bytes().all(|c| c == b'0' || c == b'1') {
                        return Err(Failure::Usage("--bits takes a string of 0 and 1".into()));
                    }
                    s.bytes().map(|c| c == b'1').collect()
                }
                (None, None) => unreachable!("clap requires one of --hex and --bits"),
            };
            let j = cgl_hash(*p, &b)?;
            Ok(match format {
                Format::Text => format!("{j}\n"),
                Format::Json => {
                    let bs: String = b.iter().map(|&x| if x { '1' } else { '0' }).collect();
                    pretty(&json!({"p": p, "bits": bs, "j": j.to_string()}))
                }
                f => return Err(unsupported(*f)),
            })
        }
        ProtoCmd::SidhDemo { la, ra, lb, rb } => {
            let prm = sidh_setup_seeded(*la, *ra, *lb, *rb, SIDH_SEED)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = accept::random_secret(&mut rng, *la, *ra);
            let b = accept::random_secret(&mut rng, *lb, *rb);
            let o = sidh_run(&prm, a, b)?;
            let text = format!(
                "p = {} = {la}^{ra}·{lb}^{rb}·{} - 1\nbase curve j = {}\nalice secret {a:?}, public j = {}\nbob secret {b:?}, public j = {}\nshared j (alice) = {}\nshared j (bob) = {}\nshared j (direct) = {}\nagree: {}\n",
                prm.p,
                prm.f,
                prm.curve.j_invariant(),
                o.public_a,
                o.public_b,
                o.j_alice,
                o.j_bob,
                o.j_direct,
                o.agree()
            );
            verified(o.agree(), text)
        }
    }
}

fn accept_cmd(only: &[u32]) -> Out {
    let ids: Vec<u32> = if only.is_empty() { accept::CRITERIA.iter().map(|c| c.0).collect() } else { only.to_vec() };
    let mut s = String::new();
    let mut ok = true;
    for id in ids {
        let o = accept::run(id).ok_or_else(|| Failure::Usage(format!("no acceptance criterion {id}")))?;
        ok &= o.pass;
        let _ = writeln!(s, "{}", o.line());
    }
    let _ = writeln!(s, "{}", if ok { "all criteria pass" } else { "some criteria FAIL" });
    verified(ok, s)
}
