use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssiso::ff::{Embedding, FieldCtx, FieldElem};
use ssiso::Result;

const SAMPLES: usize = 200;

/// Named pass/fail checks of F_{p^2} and its embedding into F_{p^4}.
pub fn ff_selftest(p: u64, seed: u64) -> Result<Vec<(String, bool)>> {
    let f = FieldCtx::fp2(p)?;
    let big = FieldCtx::ext(p, 4)?;
    let emb = Embedding::new(&f, &big)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<(FieldElem, FieldElem, FieldElem)> = (0..SAMPLES)
        .map(|_| (FieldElem::random(&f, &mut rng), FieldElem::random(&f, &mut rng), FieldElem::random(&f, &mut rng)))
        .collect();
    let q1 = p * p - 1;
    let all = |pred: &dyn Fn(&FieldElem, &FieldElem, &FieldElem) -> bool| sample.iter().all(|(a, b, c)| pred(a, b, c));
    let mut out = vec![
        ("distributivity", all(&|a, b, c| (a + b) * c == a * c + b * c)),
        ("associativity", all(&|a, b, c| (a * b) * c == a * (b * c))),
        ("inverses", all(&|a, _, _| a.is_zero() || (a * a.inv().expect("nonzero")).is_one())),
        ("a^(q-1) = 1", all(&|a, _, _| a.is_zero() || a.pow(q1).is_one())),
        ("square roots of squares", all(&|a, _, _| a.square().sqrt().is_some_and(|r| r.square() == a.square()))),
        ("Frobenius is a ring involution", all(&|a, b, _| {
            (a * b).frobenius() == a.frobenius() * b.frobenius() && a.frobenius().frobenius() == *a
        })),
        ("text round trip", all(&|a, _, _| FieldElem::parse(&f, &a.to_string()).is_ok_and(|x| x == *a))),
        ("embedding into F_p^4 is a homomorphism", all(&|a, b, _| {
            emb.lift(&(a * b)) == emb.lift(a) * emb.lift(b) && emb.lift(&(a + b)) == emb.lift(a) + emb.lift(b)
        })),
        ("embedding descends", all(&|a, _, _| emb.descend(&emb.lift(a)).is_some_and(|x| x == *a))),
    ]
    .into_iter()
    .map(|(n, ok)| (n.to_string(), ok))
    .collect::<Vec<_>>();
    let n = (p * p).min(5000);
    let increasing = (1..n).all(|i| FieldElem::nth(&f, i - 1) < FieldElem::nth(&f, i));
    out.push(("canonical order follows the index".to_string(), increasing));
    Ok(out)
}
