use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use ssiso::curve::{canonical_model, is_supersingular};
use ssiso::ff::{FieldCtx, FieldElem};
use ssiso::proto::{cgl_distribution, cgl_hash, cgl_init, cgl_step, sidh_run, sidh_setup, Walker};
use ssiso::ssgraph::enumerate_ss;

#[derive(Deserialize)]
struct Fixture {
    p: u64,
    vectors: Vec<Vector>,
}

#[derive(Deserialize)]
struct Vector {
    bits: String,
    path: Vec<String>,
}

fn bits(s: &str) -> Vec<bool> {
    s.bytes().map(|b| b == b'1').collect()
}

fn check_fixture(text: &str) {
    let fx: Fixture = serde_json::from_str(text).unwrap();
    let ctx = FieldCtx::fp2(fx.p).unwrap();
    for v in &fx.vectors {
        let mut s = cgl_init(fx.p).unwrap();
        let expect: Vec<FieldElem> = v.path.iter().map(|t| FieldElem::parse(&ctx, t).unwrap()).collect();
        assert_eq!(s.j(), expect[0]);
        for (k, b) in bits(&v.bits).into_iter().enumerate() {
            s = cgl_step(&s, b).unwrap();
            assert_eq!(s.j(), expect[k + 1], "p = {}, message {:?}, step {}", fx.p, v.bits, k + 1);
        }
        assert_eq!(cgl_hash(fx.p, &bits(&v.bits)).unwrap(), *expect.last().unwrap());
    }
}

#[test]
fn oracle_vectors_p101() {
    check_fixture(include_str!("fixtures/cgl_p101.json"));
}

#[test]
fn oracle_vectors_p103() {
    check_fixture(include_str!("fixtures/cgl_p103.json"));
}

#[test]
fn length_12_messages_reach_every_vertex() {
    let d = cgl_distribution(101, 12).unwrap();
    assert_eq!(d.buckets.len(), enumerate_ss(101).unwrap().len());
    assert_eq!(d.buckets.values().sum::<u64>(), 4096);
    assert!(d.max_min_ratio < 4.0, "{d:?}");
}

#[test]
fn sidh_three_way_agreement() {
    let prm = sidh_setup(2, 4, 3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut secret = |ell: i64, n: i64| loop {
        let (m, k) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if m % ell != 0 || k % ell != 0 {
            return (m, k);
        }
    };
    let mut shared = std::collections::BTreeSet::new();
    for _ in 0..20 {
        let (a, b) = (secret(2, 16), secret(3, 27));
        let o = sidh_run(&prm, a, b).unwrap();
        assert!(o.agree(), "{a:?} {b:?}: {o:?}");
        assert!(is_supersingular(&canonical_model(&o.j_alice).unwrap()).unwrap());
        shared.insert(o.j_alice);
    }
    // the secrets actually steer the exchange
    assert!(shared.len() > 5, "{shared:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn walks_resume(m1 in prop::collection::vec(any::<bool>(), 0..10), m2 in prop::collection::vec(any::<bool>(), 0..10)) {
        let mut w = Walker::new();
        let mid = w.walk(&cgl_init(101).unwrap(), &m1).unwrap();
        let resumed = w.walk(&mid, &m2).unwrap();
        let whole: Vec<bool> = m1.iter().chain(&m2).copied().collect();
        prop_assert_eq!(resumed.j(), cgl_hash(101, &whole).unwrap());
        prop_assert_eq!(resumed.steps as usize, whole.len());
    }
}
