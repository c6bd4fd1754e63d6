use super::{count_points, Curve};
use crate::arith::inv_mod;
use crate::error::{internal, param, Error, Result};
use crate::ff::{Ctx, Embedding, FieldCtx, FieldElem, Poly};

/// A short Weierstrass model with the given j-invariant.
///
/// For j outside {0, 1728} this is y^2 + xy = x^3 - 36/(j - 1728) x - 1/(j - 1728)
/// brought to short form via c4 and c6.
pub fn curve_from_j(j: &FieldElem) -> Result<Curve> {
    let ctx = j.ctx();
    if ctx.characteristic() < 5 {
        return Err(param!("characteristic must be at least 5"));
    }
    let e = if j.is_zero() {
        Curve::new(FieldElem::zero(ctx), FieldElem::one(ctx))?
    } else if *j == FieldElem::from_u64(ctx, 1728) {
        Curve::new(FieldElem::one(ctx), FieldElem::zero(ctx))?
    } else {
        let t_inv = (j - FieldElem::from_u64(ctx, 1728)).inv().expect("j != 1728");
        let a4 = -(t_inv.scale(36));
        let a6 = -&t_inv;
        // a1 = 1, a2 = a3 = 0: b2 = 1, b4 = 2 a4, b6 = 4 a6
        let c4 = FieldElem::one(ctx) - a4.scale(48);
        let c6 = -FieldElem::one(ctx) + a4.scale(72) - a6.scale(864);
        Curve::new(-c4.scale(27), -c6.scale(54)).map_err(|e| internal!("curve_from_j: {e}"))?
    };
    if e.j_invariant() != *j {
        return Err(internal!("curve_from_j produced j = {} instead of {j}", e.j_invariant()));
    }
    Ok(e)
}

/// H_p(t) = sum_{i=0}^{m} C(m, i)^2 t^i with m = (p - 1)/2.
pub fn hasse_polynomial(ctx: &Ctx) -> Poly {
    let p = ctx.characteristic();
    let m = (p - 1) / 2;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    let mut binom = 1u64;
    for i in 0..=m {
        if i > 0 {
            binom = binom * ((m - i + 1) % p) % p * inv_mod(i, p).expect("i < p") % p;
        }
        coeffs.push(binom * binom % p);
    }
    Poly::from_u64s(ctx, &coeffs)
}

/// j(lambda) = 2^8 (lambda^2 - lambda + 1)^3 / (lambda^2 (lambda - 1)^2).
pub fn lambda_to_j(lambda: &FieldElem) -> Option<FieldElem> {
    let one = FieldElem::one(lambda.ctx());
    let l2 = lambda.square();
    let num = &l2 - lambda + &one;
    let num3 = num.square() * &num;
    let den = &l2 * (lambda - &one).square();
    Some(num3.scale(256) * den.inv()?)
}

/// The curve base-changed to the canonical F_{p^2}, if given over F_p.
fn over_fp2(e: &Curve) -> Result<Curve> {
    let ctx = e.ctx();
    match ctx.degree() {
        2 => Ok(e.clone()),
        1 => {
            let f = FieldCtx::fp2(ctx.characteristic())?;
            let lift = |x: &FieldElem| FieldElem::from_u64(&f, x.coeffs()[0]);
            Curve::new(lift(e.a()), lift(e.b()))
        }
        d => Err(param!("supersingularity test expects a curve over F_p or F_p^2, got degree {d}")),
    }
}

/// Legendre-form test: lambda is a cross-ratio of the roots of the cubic and
/// E is supersingular iff H_p(lambda) = 0.
fn legendre_criterion(e: &Curve) -> Result<bool> {
    let ctx = e.ctx();
    let cubic = e.rhs_poly();
    let roots = cubic.roots();
    let (roots, hasse) = match roots.len() {
        3 => (roots, hasse_polynomial(ctx)),
        n => {
            let deg = if n == 1 { 4 } else { 6 };
            let big = FieldCtx::ext(ctx.characteristic(), deg)?;
            let emb = Embedding::new(ctx, &big)?;
            let lifted = e.lift(&emb).rhs_poly();
            (lifted.roots(), hasse_polynomial(&big))
        }
    };
    if roots.len() != 3 {
        return Err(internal!("cubic of {e:?} did not split over the splitting field"));
    }
    let lambda = (&roots[2] - &roots[0]) * (&roots[1] - &roots[0]).inv().expect("distinct roots");
    Ok(hasse.eval(&lambda).is_zero())
}

/// Trace criterion: #E(F_{p^2}) = p^2 + 1 - A with A = 0 mod p.
fn trace_criterion(e: &Curve) -> Result<bool> {
    let p = e.characteristic() as i128;
    let n = count_points(e)? as i128;
    let a = p * p + 1 - n;
    Ok(a % p == 0)
}

/// Supersingularity by the Hasse invariant of a Legendre form, confirmed by
/// the trace of Frobenius over F_{p^2}. The two must agree.
pub fn is_supersingular(e: &Curve) -> Result<bool> {
    let e2 = over_fp2(e)?;
    let by_lambda = legendre_criterion(&e2)?;
    let by_trace = trace_criterion(&e2)?;
    if by_lambda != by_trace {
        return Err(internal!("supersingularity criteria disagree for {e:?}: Hasse {by_lambda}, trace {by_trace}"));
    }
    Ok(by_lambda)
}

/// The model of j over F_{p^2} with (p + 1)^2 points, i.e. Frobenius squared
/// acting as [-p].
///
/// Among the twists (d^2 a, d^3 b) of `curve_from_j(j)` whose point count is
/// (p + 1)^2, returns the one with the smallest (a, b), comparing a first in
/// the canonical field order. Which twists qualify depends only on whether d
/// is a square, so one point count decides it.
pub fn canonical_model(j: &FieldElem) -> Result<Curve> {
    let ctx = j.ctx();
    if ctx.degree() != 2 || ctx.quad_c().is_none() {
        return Err(param!("canonical models live over the canonical F_p^2"));
    }
    let p = ctx.characteristic() as u128;
    let q = p * p;
    let target = (p + 1) * (p + 1);
    let e0 = curve_from_j(j)?;
    let n0 = count_points(&e0)? as u128;
    let chi_target: i8 = if n0 == target {
        1
    } else if 2 * q + 2 - n0 == target {
        -1
    } else {
        return Err(Error::NotSupersingular(format!("j = {j}: no twist has (p+1)^2 points")));
    };
    let size = ctx.size().expect("small field");
    if !e0.a().is_zero() {
        let a_inv = e0.a().inv().expect("a != 0");
        for idx in 1..size {
            let a1 = FieldElem::nth(ctx, idx);
            let e = &a1 * &a_inv;
            let Some(d) = e.sqrt() else { continue };
            if d.quadratic_character() != chi_target {
                continue;
            }
            let b_plus = e0.b() * &e * &d;
            let b_minus = -&b_plus;
            let b1 = if b_minus < b_plus { b_minus } else { b_plus };
            return Curve::new(a1, b1);
        }
    } else {
        let b_inv = e0.b().inv().expect("j = 0 model has b != 0");
        let third = (ctx.order() - 1u32) / 3u32;
        for idx in 1..size {
            let b1 = FieldElem::nth(ctx, idx);
            let e = &b1 * &b_inv;
            if e.pow_big(&third).is_one() && e.quadratic_character() == chi_target {
                return Curve::new(FieldElem::zero(ctx), b1);
            }
        }
    }
    Err(internal!("no scaling reached the qualifying twist class"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp2(p: u64) -> Ctx {
        FieldCtx::fp2(p).unwrap()
    }

    #[test]
    fn special_models() {
        let f = fp2(103);
        let e = curve_from_j(&FieldElem::from_u64(&f, 1728)).unwrap();
        assert_eq!((e.a().clone(), e.b().clone()), (FieldElem::one(&f), FieldElem::zero(&f)));
        let g = FieldCtx::prime(5).unwrap();
        let e = curve_from_j(&FieldElem::zero(&g)).unwrap();
        assert_eq!((e.a().clone(), e.b().clone()), (FieldElem::zero(&g), FieldElem::one(&g)));
    }

    #[test]
    fn curve_from_j_round_trips() {
        let g = FieldCtx::prime(13).unwrap();
        for j in 0..13 {
            let j = FieldElem::from_u64(&g, j);
            assert_eq!(curve_from_j(&j).unwrap().j_invariant(), j);
        }
        let f = fp2(101);
        for idx in (0..101 * 101).step_by(37) {
            let j = FieldElem::nth(&f, idx);
            assert_eq!(curve_from_j(&j).unwrap().j_invariant(), j);
        }
    }

    #[test]
    fn supersingularity_examples() {
        let f = fp2(103);
        assert!(is_supersingular(&curve_from_j(&FieldElem::from_u64(&f, 1728)).unwrap()).unwrap());
        let f5 = fp2(5);
        assert!(is_supersingular(&curve_from_j(&FieldElem::zero(&f5)).unwrap()).unwrap());
        let f = fp2(101);
        assert!(!is_supersingular(&curve_from_j(&FieldElem::one(&f)).unwrap()).unwrap());
        // over F_p input
        let g = FieldCtx::prime(103).unwrap();
        let e = Curve::new(FieldElem::one(&g), FieldElem::zero(&g)).unwrap();
        assert!(is_supersingular(&e).unwrap());
    }

    #[test]
    fn both_criteria_agree_on_every_j() {
        // exercises the F_{p^4} and F_{p^6} branches too
        let f = fp2(23);
        let mut ss = 0;
        for idx in 0..23 * 23 {
            let j = FieldElem::nth(&f, idx);
            if is_supersingular(&curve_from_j(&j).unwrap()).unwrap() {
                ss += 1;
            }
        }
        // 23 = 11 mod 12: h = 1 + 2
        assert_eq!(ss, 3);
    }

    #[test]
    fn hasse_polynomial_small() {
        let g = FieldCtx::prime(7).unwrap();
        // m = 3: 1 + 9t + 9t^2 + t^3
        assert_eq!(hasse_polynomial(&g), Poly::from_u64s(&g, &[1, 2, 2, 1]));
    }

    #[test]
    fn canonical_model_properties() {
        let f = fp2(103);
        let e = canonical_model(&FieldElem::from_u64(&f, 1728)).unwrap();
        assert_eq!(count_points(&e).unwrap(), 104 * 104);
        assert_eq!(e.j_invariant(), FieldElem::from_u64(&f, 1728));
        let again = canonical_model(&e.j_invariant()).unwrap();
        assert_eq!(again, e);
        let g = fp2(101);
        assert!(matches!(canonical_model(&FieldElem::one(&g)), Err(Error::NotSupersingular(_))));
        let e0 = canonical_model(&FieldElem::zero(&g)).unwrap();
        assert_eq!(count_points(&e0).unwrap(), 102 * 102);
    }

    #[test]
    fn canonical_model_is_minimal_among_qualifying_twists() {
        // brute force over every d at p = 23 for the three supersingular j
        let f = fp2(23);
        for idx in 0..23 * 23 {
            let j = FieldElem::nth(&f, idx);
            let Ok(model) = canonical_model(&j) else { continue };
            let e0 = curve_from_j(&j).unwrap();
            let mut best: Option<(FieldElem, FieldElem)> = None;
            for didx in 1..23 * 23 {
                let d = FieldElem::nth(&f, didx);
                let t = e0.scaled(&d).unwrap();
                if count_points(&t).unwrap() == 24 * 24 {
                    let key = (t.a().clone(), t.b().clone());
                    if best.as_ref().is_none_or(|b| key < *b) {
                        best = Some(key);
                    }
                }
            }
            assert_eq!(best.unwrap(), (model.a().clone(), model.b().clone()));
        }
    }
}
