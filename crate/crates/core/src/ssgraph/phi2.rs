use crate::ff::{FieldElem, Poly};

// Φ₂(X, Y) = X^3 + Y^3 - X^2 Y^2 + 1488 (X^2 Y + X Y^2) - 162000 (X^2 + Y^2)
//          + 40773375 X Y + 8748000000 (X + Y) - 157464000000000
const C_XY2: i64 = 1488;
const C_SQ: i64 = -162_000;
const C_XY: i64 = 40_773_375;
const C_LIN: i64 = 8_748_000_000;
const C_0: i64 = -157_464_000_000_000;

fn k(j: &FieldElem, n: i64) -> FieldElem {
    FieldElem::from_i64(j.ctx(), n)
}

/// Φ₂(j1, j2).
pub fn phi2_eval(j1: &FieldElem, j2: &FieldElem) -> FieldElem {
    let (a2, b2) = (j1.square(), j2.square());
    &a2 * j1 + &b2 * j2 - &a2 * &b2
        + (&a2 * j2 + j1 * &b2) * k(j1, C_XY2)
        + (&a2 + &b2) * k(j1, C_SQ)
        + j1 * j2 * k(j1, C_XY)
        + (j1 + j2) * k(j1, C_LIN)
        + k(j1, C_0)
}

/// Φ₂(j, Y) as a monic cubic in Y.
fn phi2_in_y(j: &FieldElem) -> Poly {
    let j2 = j.square();
    let c0 = &j2 * j + &j2 * k(j, C_SQ) + j * k(j, C_LIN) + k(j, C_0);
    let c1 = &j2 * k(j, C_XY2) + j * k(j, C_XY) + k(j, C_LIN);
    let c2 = -&j2 + j * k(j, C_XY2) + k(j, C_SQ);
    Poly::from_coeffs(j.ctx(), &[c0, c1, c2, FieldElem::one(j.ctx())])
}

/// The roots of Φ₂(j, Y) with multiplicity, sorted.
pub fn phi2_neighbors(j: &FieldElem) -> Vec<FieldElem> {
    let mut out = Vec::new();
    for (r, m) in phi2_in_y(j).roots_with_multiplicity() {
        out.extend(std::iter::repeat_n(r, m));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldCtx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symmetric() {
        let f = FieldCtx::fp2(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let a = FieldElem::random(&f, &mut rng);
            let b = FieldElem::random(&f, &mut rng);
            assert_eq!(phi2_eval(&a, &b), phi2_eval(&b, &a));
            assert_eq!(phi2_in_y(&a).eval(&b), phi2_eval(&a, &b));
        }
    }

    #[test]
    fn zero_at_101() {
        let f = FieldCtx::fp2(101).unwrap();
        let n = phi2_neighbors(&FieldElem::zero(&f));
        assert_eq!(n, vec![FieldElem::from_u64(&f, 66); 3]);
    }

    #[test]
    fn matches_two_isogenies() {
        for p in [101u64, 103] {
            for j in super::super::enumerate_ss(p).unwrap() {
                let mut v = super::super::two_isogenous_js(&j).unwrap();
                v.sort();
                assert_eq!(phi2_neighbors(&j), v, "p = {p}, j = {j}");
            }
        }
    }
}
