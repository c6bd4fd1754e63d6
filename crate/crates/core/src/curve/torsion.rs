use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::velu::descend_poly;
use super::{Curve, Kernel, Point};
use crate::arith::{is_prime, mult_order};
use crate::error::{internal, param, Result};
use crate::ff::{Ctx, Embedding, FieldCtx, Poly};

const SAMPLE_CAP: usize = 10_000;
const MAX_ELL: u64 = 13;

/// The three points (α, 0) of order 2, sorted by x.
pub fn two_torsion(e: &Curve) -> Result<Vec<Point>> {
    let roots = e.rhs_poly().roots();
    if roots.len() != 3 {
        return Err(param!("2-torsion of {e:?} is not rational; the model is not canonical"));
    }
    let zero = crate::ff::FieldElem::zero(e.ctx());
    Ok(roots.into_iter().map(|x| Point::affine(x, zero.clone())).collect())
}

/// E[ℓ] realized over the smallest F_{p^{2k}} containing it.
#[derive(Clone, Debug)]
pub struct TorsionGroup {
    pub ell: u64,
    pub field: Ctx,
    /// `None` when E[ℓ] is already rational over the curve's own field.
    pub embedding: Option<Embedding>,
    /// The curve over `field`.
    pub curve: Curve,
    pub basis: [Point; 2],
    /// All ℓ^2 points, sorted, starting with the point at infinity.
    pub points: Vec<Point>,
}

/// E[ℓ] for a canonical model over F_{p^2} and an odd prime ℓ ≤ 13.
///
/// Frobenius squared acts as [-p], so E[ℓ] is rational over F_{p^{2k}} with
/// k the order of -p mod ℓ, and E(F_{p^{2k}}) ≅ (Z/n)^2 with
/// n = p^k - (-1)^k. Points of order ℓ come from random points times the
/// prime-to-ℓ cofactor, followed by ℓ-power reduction.
pub fn torsion_points(e: &Curve, ell: u64) -> Result<TorsionGroup> {
    let ctx = e.ctx();
    let p = ctx.characteristic();
    if ell == 2 || !is_prime(ell) || ell > MAX_ELL || ell == p {
        return Err(param!("torsion_points needs an odd prime ℓ ≤ {MAX_ELL} different from p, got {ell}"));
    }
    if ctx.degree() != 2 || ctx.quad_c().is_none() {
        return Err(param!("torsion_points expects a curve over the canonical F_p^2"));
    }
    let minus_p = (ell - p % ell) % ell;
    let k = mult_order(minus_p, ell).expect("ℓ does not divide p");
    let (field, embedding, curve) = if k == 1 {
        (ctx.clone(), None, e.clone())
    } else {
        let big = FieldCtx::ext(p, 2 * k as usize)?;
        let emb = Embedding::new(ctx, &big)?;
        let lifted = e.lift(&emb);
        (big, Some(emb), lifted)
    };
    let sign = if k.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let n = BigInt::from(p).pow(k as u32) - sign;
    let order = &n * &n;
    let ellb = BigInt::from(ell);
    let mut cofactor = order.clone();
    while (&cofactor % &ellb).is_zero() {
        cofactor /= &ellb;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x746f_7273 ^ ell);
    let reduce = |rng: &mut ChaCha8Rng| -> Result<Option<Point>> {
        let pt = curve.random_point(rng);
        if !curve.mul_big(&order, &pt).is_infinity() {
            return Err(param!("group order over F_{{p^{}}} is not (p^{k} - (-1)^{k})^2; model is not canonical", 2 * k));
        }
        let mut q = curve.mul_big(&cofactor, &pt);
        if q.is_infinity() {
            return Ok(None);
        }
        loop {
            let r = curve.mul(ell as i64, &q);
            if r.is_infinity() {
                return Ok(Some(q));
            }
            q = r;
        }
    };
    let mut first: Option<Point> = None;
    let mut span: Vec<Point> = Vec::new();
    for _ in 0..SAMPLE_CAP {
        let Some(q) = reduce(&mut rng)? else { continue };
        match &first {
            None => {
                span = multiples(&curve, &q, ell);
                first = Some(q);
            }
            Some(p1) => {
                if span.contains(&q) {
                    continue;
                }
                let basis = [p1.clone(), q];
                let points = span_all(&curve, &basis, ell);
                return Ok(TorsionGroup { ell, field, embedding, curve, basis, points });
            }
        }
    }
    Err(internal!("no basis of E[{ell}] after {SAMPLE_CAP} samples"))
}

/// 0, P, 2P, ..., (ℓ-1)P.
fn multiples(e: &Curve, p: &Point, ell: u64) -> Vec<Point> {
    let mut out = vec![Point::Infinity];
    for _ in 1..ell {
        let next = e.add(out.last().expect("nonempty"), p);
        out.push(next);
    }
    out
}

fn span_all(e: &Curve, basis: &[Point; 2], ell: u64) -> Vec<Point> {
    let col = multiples(e, &basis[1], ell);
    let mut out = Vec::with_capacity((ell * ell) as usize);
    for a in multiples(e, &basis[0], ell) {
        for c in &col {
            out.push(e.add(&a, c));
        }
    }
    out.sort();
    out
}

/// One cyclic subgroup of order ℓ.
#[derive(Clone, Debug)]
pub struct Subgroup {
    /// Smallest nonzero point of the subgroup, over the torsion field.
    pub generator: Point,
    /// The ℓ - 1 nonzero points, sorted.
    pub points: Vec<Point>,
    /// Kernel polynomial over the curve's own field.
    pub kernel: Kernel,
}

/// The ℓ + 1 subgroups of order ℓ, sorted by kernel polynomial
/// (coefficients from the top degree down, canonical order).
pub fn subgroups(e: &Curve, ell: u64) -> Result<Vec<Subgroup>> {
    if ell == 2 {
        return Ok(two_torsion(e)?
            .into_iter()
            .map(|t| Subgroup {
                kernel: Kernel::two_torsion(t.x().expect("affine")),
                generator: t.clone(),
                points: vec![t],
            })
            .collect());
    }
    let tg = torsion_points(e, ell)?;
    let mut seen: Vec<Point> = Vec::new();
    let mut out = Vec::new();
    for p in tg.points.iter().filter(|p| !p.is_infinity()) {
        if seen.contains(p) {
            continue;
        }
        let mut pts: Vec<Point> = multiples(&tg.curve, p, ell).into_iter().skip(1).collect();
        pts.sort();
        seen.extend(pts.iter().cloned());
        let mut xs: Vec<_> = pts.iter().map(|q| q.x().expect("affine").clone()).collect();
        xs.sort();
        xs.dedup();
        let big_poly = Poly::from_roots(&tg.field, &xs);
        let poly = match &tg.embedding {
            None => big_poly,
            Some(emb) => descend_poly(&big_poly, emb)
                .ok_or_else(|| internal!("kernel polynomial of a subgroup of E[{ell}] is not over F_p^2"))?,
        };
        out.push(Subgroup { generator: pts[0].clone(), points: pts, kernel: Kernel { ell, poly } });
    }
    if out.len() as u64 != ell + 1 {
        return Err(internal!("found {} subgroups of order {ell}", out.len()));
    }
    out.sort_by(|a, b| {
        let ka: Vec<_> = a.kernel.poly.coeffs().into_iter().rev().collect();
        let kb: Vec<_> = b.kernel.poly.coeffs().into_iter().rev().collect();
        ka.cmp(&kb)
    });
    Ok(out)
}

pub fn subgroups_of_order(e: &Curve, ell: u64) -> Result<Vec<Kernel>> {
    Ok(subgroups(e, ell)?.into_iter().map(|s| s.kernel).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{canonical_model, is_supersingular, velu};
    use crate::ff::FieldElem;

    fn fp2(p: u64) -> Ctx {
        FieldCtx::fp2(p).unwrap()
    }

    #[test]
    fn two_torsion_of_1728() {
        let f = fp2(103);
        let e = canonical_model(&FieldElem::from_u64(&f, 1728)).unwrap();
        let t = two_torsion(&e).unwrap();
        assert_eq!(t.len(), 3);
        for pt in &t {
            assert!(e.contains(pt));
            assert!(e.double(pt).is_infinity());
        }
        let g = fp2(101);
        let e66 = canonical_model(&FieldElem::from_u64(&g, 66)).unwrap();
        for pt in two_torsion(&e66).unwrap() {
            assert!(e66.rhs(pt.x().unwrap()).is_zero());
        }
    }

    #[test]
    fn three_torsion_over_degree_four() {
        let f = fp2(103);
        let e = canonical_model(&FieldElem::from_u64(&f, 1728)).unwrap();
        let tg = torsion_points(&e, 3).unwrap();
        assert_eq!(tg.field.degree(), 4);
        assert_eq!(tg.points.len(), 9);
        assert!(tg.points[0].is_infinity());
        for pt in &tg.points {
            assert!(tg.curve.contains(pt));
            assert!(tg.curve.mul(3, pt).is_infinity());
        }
    }

    #[test]
    fn subgroups_partition_torsion() {
        let f = fp2(101);
        for (j, ell) in [(66u64, 3u64), (0, 3), (21, 5), (3, 7)] {
            let e = canonical_model(&FieldElem::from_u64(&f, j)).unwrap();
            let tg = torsion_points(&e, ell).unwrap();
            let subs = subgroups(&e, ell).unwrap();
            assert_eq!(subs.len() as u64, ell + 1);
            let mut all: Vec<Point> = subs.iter().flat_map(|s| s.points.clone()).collect();
            all.sort();
            let nonzero: Vec<Point> = tg.points.iter().filter(|p| !p.is_infinity()).cloned().collect();
            assert_eq!(all, nonzero);
            for s in &subs {
                assert_eq!(s.kernel.poly.degree(), Some((ell as usize - 1) / 2));
                let phi = velu(&e, &s.kernel).unwrap();
                assert_eq!(phi.degree, ell);
                assert!(is_supersingular(&phi.codomain).unwrap());
            }
        }
    }

    #[test]
    fn dual_returns_to_domain() {
        let f = fp2(103);
        let e = canonical_model(&FieldElem::from_u64(&f, 1728)).unwrap();
        let tg = torsion_points(&e, 3).unwrap();
        let emb = tg.embedding.clone().unwrap();
        for s in subgroups(&e, 3).unwrap() {
            let phi = velu(&e, &s.kernel).unwrap();
            let big = phi.lift(&emb);
            let mut xs: Vec<FieldElem> = tg
                .points
                .iter()
                .map(|p| big.eval(p))
                .filter(|p| !p.is_infinity())
                .map(|p| {
                    assert!(big.codomain.contains(&p));
                    p.x().unwrap().clone()
                })
                .collect();
            xs.sort();
            xs.dedup();
            assert_eq!(xs.len(), 1);
            let k = descend_poly(&Poly::from_roots(&tg.field, &xs), &emb).unwrap();
            let back = velu(&phi.codomain, &Kernel { ell: 3, poly: k }).unwrap();
            assert_eq!(back.codomain.j_invariant(), e.j_invariant());
            // the composite kills all of E[3]
            for p in &tg.points {
                let img = back.lift(&emb).eval(&big.eval(p));
                assert!(img.is_infinity());
            }
        }
    }
}
