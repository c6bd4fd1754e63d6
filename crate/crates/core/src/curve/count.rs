use rayon::prelude::*;

use super::Curve;
use crate::error::{Error, Result};
use crate::ff::FieldElem;

const MAX_FIELD: u64 = 10_000_000;

/// #E(F_q) including the point at infinity, by a sweep over x with the
/// quadratic character of x^3 + ax + b.
pub fn count_points(e: &Curve) -> Result<u64> {
    let ctx = e.ctx();
    let q = ctx.size().filter(|&q| q <= MAX_FIELD).ok_or_else(|| {
        Error::Capacity(format!("point count over a field of size {} exceeds 10^7", ctx.order()))
    })?;
    let p = ctx.characteristic();
    match (ctx.degree(), ctx.quad_c()) {
        (1, _) => Ok(count_quadratic(p, 0, [e.a().coeffs()[0], 0], [e.b().coeffs()[0], 0], 1)),
        (2, Some(c)) => {
            let a = e.a().coeffs();
            let b = e.b().coeffs();
            Ok(count_quadratic(p, c, [a[0], a[1]], [b[0], b[1]], p))
        }
        _ => {
            let affine: u64 = FieldElem::all(ctx)?
                .map(|x| (1 + e.rhs(&x).quadratic_character() as i64) as u64)
                .sum();
            debug_assert!(affine <= 2 * q);
            Ok(affine + 1)
        }
    }
}

/// Sweep over F_p[u]/(u^2 - c) (or F_p when `x1_range == 1`). The character
/// of z in F_{p^2} is the Legendre symbol of its norm z0^2 - c z1^2.
fn count_quadratic(p: u64, c: u64, a: [u64; 2], b: [u64; 2], x1_range: u64) -> u64 {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for t in 1..p {
        chi[(t * t % p) as usize] = 1;
    }
    let affine: i64 = (0..x1_range)
        .into_par_iter()
        .map(|x1| {
            let mut acc = 0i64;
            for x0 in 0..p {
                // x^2
                let s0 = (x0 * x0 + c * (x1 * x1 % p)) % p;
                let s1 = 2 * x0 % p * x1 % p;
                // x^3 + a x + b
                let f0 = (s0 * x0 % p + c * (s1 * x1 % p) % p + a[0] * x0 % p + c * (a[1] * x1 % p) % p + b[0]) % p;
                let f1 = (s0 * x1 % p + s1 * x0 % p + a[0] * x1 % p + a[1] * x0 % p + b[1]) % p;
                let norm = if x1_range == 1 { f0 } else { (f0 * f0 % p + p - c * (f1 * f1 % p) % p) % p };
                acc += 1 + chi[norm as usize] as i64;
            }
            acc
        })
        .sum();
    affine as u64 + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldCtx;

    fn naive(e: &Curve) -> u64 {
        let mut n = 1;
        for x in crate::ff::enumerate_field(e.ctx()).unwrap() {
            for y in crate::ff::enumerate_field(e.ctx()).unwrap() {
                if y.square() == e.rhs(&x) {
                    n += 1;
                }
            }
        }
        n
    }

    fn curve(ctx: &crate::ff::Ctx, a: &[u64], b: &[u64]) -> Curve {
        Curve::new(FieldElem::from_coeffs(ctx, a).unwrap(), FieldElem::from_coeffs(ctx, b).unwrap()).unwrap()
    }

    #[test]
    fn spec_counts() {
        let f = FieldCtx::prime(103).unwrap();
        assert_eq!(count_points(&curve(&f, &[1], &[0])).unwrap(), 104);
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(count_points(&curve(&f5, &[0], &[1])).unwrap(), 6);
    }

    #[test]
    fn fast_path_matches_naive() {
        for p in [5u64, 7, 13] {
            let f = FieldCtx::fp2(p).unwrap();
            for (a, b) in [([1, 0], [0, 0]), ([2, 1], [3, 4]), ([0, 0], [1, 2]), ([4, 3], [0, 1])] {
                let Ok(e) = Curve::new(FieldElem::from_coeffs(&f, &a).unwrap(), FieldElem::from_coeffs(&f, &b).unwrap())
                else {
                    continue;
                };
                assert_eq!(count_points(&e).unwrap(), naive(&e), "p={p} {e:?}");
            }
        }
        // generic path over a degree-4 field against the fast path's Hasse window
        let f = FieldCtx::ext(5, 4).unwrap();
        let e = Curve::new(FieldElem::one(&f), FieldElem::from_u64(&f, 2)).unwrap();
        let n = count_points(&e).unwrap() as f64;
        assert!((n - 626.0).abs() <= 2.0 * 25.0);
    }

    #[test]
    fn capacity_error() {
        let f = FieldCtx::fp2(10007).unwrap();
        let e = curve(&f, &[1, 0], &[0, 0]);
        assert!(matches!(count_points(&e), Err(Error::Capacity(_))));
    }
}
