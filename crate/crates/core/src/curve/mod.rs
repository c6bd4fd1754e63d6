//! Short Weierstrass curves y^2 = x^3 + ax + b over a field context.

mod count;
mod model;
mod torsion;
mod velu;

pub use count::count_points;
pub use model::{canonical_model, curve_from_j, hasse_polynomial, is_supersingular, lambda_to_j};
pub use torsion::{subgroups, subgroups_of_order, torsion_points, two_torsion, Subgroup, TorsionGroup};
pub use velu::{division_polynomial, velu, Isogeny, IsogenyJson, Kernel};

use std::fmt;

use num_bigint::{BigInt, Sign};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::ff::{Ctx, Embedding, FieldCtx, FieldElem, Poly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    a: FieldElem,
    b: FieldElem,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: FieldElem, y: FieldElem },
}

impl Point {
    pub fn affine(x: FieldElem, y: FieldElem) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&FieldElem> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&FieldElem> {
        match self {
            Point::Infinity => None,
            Point::Affine { y, .. } => Some(y),
        }
    }
}

/// Infinity first, then affine points by (x, y) in canonical order.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Point::Infinity, Point::Infinity) => std::cmp::Ordering::Equal,
            (Point::Infinity, _) => std::cmp::Ordering::Less,
            (_, Point::Infinity) => std::cmp::Ordering::Greater,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1).cmp(&(x2, y2)),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

impl Curve {
    pub fn new(a: FieldElem, b: FieldElem) -> Result<Self> {
        if !a.same_ctx(&b) {
            return Err(param!("curve coefficients from different fields"));
        }
        let p = a.ctx().characteristic();
        if p < 5 {
            return Err(param!("short Weierstrass models need characteristic > 3, got {p}"));
        }
        let c = Curve { a, b };
        if c.discriminant_core().is_zero() {
            return Err(param!("singular curve: 4a^3 + 27b^2 = 0"));
        }
        Ok(c)
    }

    pub fn a(&self) -> &FieldElem {
        &self.a
    }

    pub fn b(&self) -> &FieldElem {
        &self.b
    }

    pub fn ctx(&self) -> &Ctx {
        self.a.ctx()
    }

    pub fn characteristic(&self) -> u64 {
        self.ctx().characteristic()
    }

    /// 4a^3 + 27b^2.
    fn discriminant_core(&self) -> FieldElem {
        (self.a.square() * &self.a).scale(4) + self.b.square().scale(27)
    }

    /// j = 1728 * 4a^3 / (4a^3 + 27b^2).
    pub fn j_invariant(&self) -> FieldElem {
        let four_a3 = (self.a.square() * &self.a).scale(4);
        let den = self.discriminant_core();
        four_a3.scale(1728) * den.inv().expect("nonsingular curve")
    }

    /// x^3 + ax + b.
    pub fn rhs(&self, x: &FieldElem) -> FieldElem {
        x.square() * x + &self.a * x + &self.b
    }

    pub fn rhs_poly(&self) -> Poly {
        let ctx = self.ctx();
        Poly::from_coeffs(ctx, &[self.b.clone(), self.a.clone(), FieldElem::zero(ctx), FieldElem::one(ctx)])
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => x.same_ctx(&self.a) && y.same_ctx(&self.a) && y.square() == self.rhs(x),
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::affine(x.clone(), -y),
        }
    }

    /// Chord-tangent addition.
    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return Point::Infinity;
            }
            // tangent: (3x^2 + a) / 2y
            (x1.square().scale(3) + &self.a) * y1.scale(2).inv().expect("y != 0")
        } else {
            (y2 - y1) * (x2 - x1).inv().expect("distinct x")
        };
        let x3 = slope.square() - x1 - x2;
        let y3 = slope * (x1 - &x3) - y1;
        Point::affine(x3, y3)
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.neg(q))
    }

    /// [n]P by double-and-add; negative n uses the negation map.
    pub fn mul(&self, n: i64, p: &Point) -> Point {
        self.mul_big(&BigInt::from(n), p)
    }

    pub fn mul_big(&self, n: &BigInt, p: &Point) -> Point {
        let base = if n.sign() == Sign::Minus { self.neg(p) } else { p.clone() };
        let mag = n.magnitude();
        let mut acc = Point::Infinity;
        for i in (0..mag.bits()).rev() {
            acc = self.double(&acc);
            if mag.bit(i) {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }

    /// Order of a point, given a multiple `bound` of it.
    pub fn order_dividing(&self, p: &Point, bound: &BigInt) -> BigInt {
        use num_traits::ToPrimitive;
        let mut n = bound.clone();
        let primes = crate::arith::factor(bound.to_u64().expect("bound fits u64"));
        for (q, _) in primes {
            let qb = BigInt::from(q);
            while (&n % &qb).sign() == Sign::NoSign && self.mul_big(&(&n / &qb), p).is_infinity() {
                n /= &qb;
            }
        }
        n
    }

    /// A random affine point (rejection sampling on x).
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        loop {
            let x = FieldElem::random(self.ctx(), rng);
            let f = self.rhs(&x);
            if let Some(y) = f.sqrt() {
                let y = if rng.gen_bool(0.5) { -y } else { y };
                return Point::affine(x, y);
            }
        }
    }

    /// The model (d^2 a, d^3 b), isomorphic over F(sqrt d).
    pub fn scaled(&self, d: &FieldElem) -> Result<Curve> {
        let d2 = d.square();
        let d3 = &d2 * d;
        Curve::new(&self.a * &d2, &self.b * &d3)
    }

    /// Base change to a larger field.
    pub fn lift(&self, emb: &Embedding) -> Curve {
        Curve { a: emb.lift(&self.a), b: emb.lift(&self.b) }
    }

    /// Inverse of [`Curve::lift`] when both coefficients descend.
    pub fn descend(&self, emb: &Embedding) -> Result<Curve> {
        let a = emb.descend(&self.a);
        let b = emb.descend(&self.b);
        match (a, b) {
            (Some(a), Some(b)) => Curve::new(a, b),
            _ => Err(Error::Internal("curve coefficients do not descend to F_{p^2}".into())),
        }
    }

    pub fn lift_point(&self, emb: &Embedding, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::affine(emb.lift(x), emb.lift(y)),
        }
    }

    /// All u with (target.a, target.b) = (u^2 a, u^3 b), sorted canonically.
    /// The isomorphism is (x, y) -> (u x, u^{3/2} y).
    pub fn isomorphism_scalings(&self, target: &Curve) -> Vec<FieldElem> {
        let ctx = self.ctx();
        let mut out = if !self.a.is_zero() && !self.b.is_zero() {
            if target.a.is_zero() || target.b.is_zero() {
                return vec![];
            }
            let ra = &target.a * self.a.inv().expect("nonzero");
            let rb = &target.b * self.b.inv().expect("nonzero");
            vec![rb * ra.inv().expect("nonzero")]
        } else if self.b.is_zero() {
            if !target.b.is_zero() || target.a.is_zero() {
                return vec![];
            }
            (&target.a * self.a.inv().expect("nonzero")).sqrts()
        } else {
            if !target.a.is_zero() || target.b.is_zero() {
                return vec![];
            }
            let r = &target.b * self.b.inv().expect("nonzero");
            let x = Poly::x(ctx);
            x.mul(&x).mul(&x).sub(&Poly::constant(&r)).roots()
        };
        out.retain(|u| {
            let u2 = u.square();
            &self.a * &u2 == target.a && &self.b * (&u2 * u) == target.b
        });
        out.sort();
        out
    }
}

/// Serialized form `{"p": .., "a": "..", "b": ".."}` over the canonical F_{p^2}.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CurveJson {
    pub p: u64,
    pub a: String,
    pub b: String,
}

impl Curve {
    pub fn to_json(&self) -> CurveJson {
        CurveJson { p: self.characteristic(), a: self.a.to_string(), b: self.b.to_string() }
    }

    /// Parses the JSON form into a curve over the canonical F_{p^2}.
    pub fn from_json_str(s: &str) -> Result<Curve> {
        let raw: CurveJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let ctx = FieldCtx::fp2(raw.p).map_err(|e| Error::Parse(e.to_string()))?;
        let a = FieldElem::parse(&ctx, &raw.a)?;
        let b = FieldElem::parse(&ctx, &raw.b)?;
        Curve::new(a, b).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(ctx: &Ctx, a: i64, b: i64) -> Curve {
        Curve::new(FieldElem::from_i64(ctx, a), FieldElem::from_i64(ctx, b)).unwrap()
    }

    #[test]
    fn j_invariant_examples() {
        let f = FieldCtx::fp2(103).unwrap();
        assert_eq!(curve(&f, 1, 0).j_invariant(), FieldElem::from_u64(&f, 1728));
        assert!(curve(&f, 0, 1).j_invariant().is_zero());
        let g = FieldCtx::prime(101).unwrap();
        // independent evaluation with integers mod 101
        let p = 101i64;
        let num = 1728 * 4 * 8 % p;
        let den = (4 * 8 + 27 * 9) % p;
        let inv = crate::arith::inv_mod(den as u64, p as u64).unwrap() as i64;
        assert_eq!(curve(&g, 2, 3).j_invariant(), FieldElem::from_i64(&g, num * inv % p));
    }

    #[test]
    fn singular_rejected() {
        let f = FieldCtx::fp2(101).unwrap();
        // 4(-3)^3 + 27(2)^2 = 0
        assert!(Curve::new(FieldElem::from_i64(&f, -3), FieldElem::from_i64(&f, 2)).is_err());
    }

    #[test]
    fn group_law_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = FieldCtx::fp2(101).unwrap();
        for (a, b) in [(1, 0), (0, 1), (2, 3), (5, 17)] {
            let e = curve(&f, a, b);
            for _ in 0..30 {
                let p = e.random_point(&mut rng);
                let q = e.random_point(&mut rng);
                let r = e.random_point(&mut rng);
                assert!(e.contains(&p));
                assert_eq!(e.add(&p, &Point::Infinity), p);
                assert!(e.add(&p, &e.neg(&p)).is_infinity());
                assert_eq!(e.add(&e.add(&p, &q), &r), e.add(&p, &e.add(&q, &r)));
                assert_eq!(e.add(&p, &q), e.add(&q, &p));
                assert!(e.contains(&e.add(&p, &q)));
                assert_eq!(e.mul(-3, &p), e.neg(&e.mul(3, &p)));
            }
        }
    }

    #[test]
    fn supersingular_over_fp_annihilated_by_p_plus_one() {
        let f = FieldCtx::prime(103).unwrap();
        let e = curve(&f, 1, 0);
        // exhaustive orders: every point order divides 104
        let mut max_order = 1u64;
        for x in crate::ff::enumerate_field(&f).unwrap() {
            if let Some(y) = e.rhs(&x).sqrt() {
                let p = Point::affine(x, y);
                let mut q = p.clone();
                let mut k = 1u64;
                while !q.is_infinity() {
                    q = e.add(&q, &p);
                    k += 1;
                }
                assert_eq!(104 % k, 0);
                max_order = max_order.max(k);
                assert!(e.mul(104, &p).is_infinity());
            }
        }
        assert!(max_order > 2);
    }

    #[test]
    fn curve_json_round_trip() {
        let f = FieldCtx::fp2(101).unwrap();
        let e = Curve::new(FieldElem::from_coeffs(&f, &[3, 7]).unwrap(), FieldElem::from_u64(&f, 9)).unwrap();
        let s = serde_json::to_string(&e.to_json()).unwrap();
        assert_eq!(s, r#"{"p":101,"a":"7*u+3","b":"9"}"#);
        assert_eq!(Curve::from_json_str(&s).unwrap(), e);
        assert!(Curve::from_json_str(r#"{"p":101,"a":"0","b":"0"}"#).is_err());
        assert!(Curve::from_json_str(r#"{"p":100,"a":"1","b":"0"}"#).is_err());
    }

    #[test]
    fn isomorphism_scalings_cover_automorphisms() {
        let f = FieldCtx::fp2(103).unwrap();
        let e = curve(&f, 1, 0);
        // Aut(y^2 = x^3 + x) acts on x by +-1
        let us = e.isomorphism_scalings(&e);
        assert_eq!(us, vec![FieldElem::one(&f), FieldElem::from_i64(&f, -1)]);
        let g = FieldCtx::fp2(101).unwrap();
        let e0 = curve(&g, 0, 1);
        assert_eq!(e0.isomorphism_scalings(&e0).len(), 3);
    }
}
