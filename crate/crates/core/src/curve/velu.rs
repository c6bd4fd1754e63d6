use serde::{Deserialize, Serialize};

use super::{Curve, CurveJson, Point};
use crate::arith::is_prime;
use crate::error::{param, Result};
use crate::ff::{Embedding, FieldElem, Poly};

/// A subgroup of prime order ℓ described by its kernel polynomial: the monic
/// polynomial vanishing on the x-coordinates of its nonzero points
/// (degree 1 for ℓ = 2, degree (ℓ - 1)/2 otherwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub ell: u64,
    pub poly: Poly,
}

impl Kernel {
    pub fn two_torsion(x0: &FieldElem) -> Self {
        Kernel { ell: 2, poly: Poly::from_roots(x0.ctx(), std::slice::from_ref(x0)) }
    }

    fn expected_degree(&self) -> usize {
        if self.ell == 2 {
            1
        } else {
            (self.ell as usize - 1) / 2
        }
    }
}

/// Division polynomials in x alone: f_n = psi_n for odd n and psi_n / 2y
/// for even n.
pub fn division_polynomial(e: &Curve, n: usize) -> Poly {
    let ctx = e.ctx();
    let a = e.a();
    let b = e.b();
    let f = e.rhs_poly();
    let f2_16 = f.mul(&f).scale(&FieldElem::from_u64(ctx, 16));
    let mut fs: Vec<Poly> = vec![
        Poly::zero(ctx),
        Poly::one(ctx),
        Poly::one(ctx),
        Poly::from_coeffs(
            ctx,
            &[-a.square(), b.scale(12), a.scale(6), FieldElem::zero(ctx), FieldElem::from_u64(ctx, 3)],
        ),
        Poly::from_coeffs(
            ctx,
            &[
                -(b.square().scale(16) + (a.square() * a).scale(2)),
                -(a * b).scale(8),
                -a.square().scale(10),
                b.scale(40),
                a.scale(10),
                FieldElem::zero(ctx),
                FieldElem::from_u64(ctx, 2),
            ],
        ),
    ];
    for k in 5..=n {
        let m = k / 2;
        let next = if k % 2 == 1 {
            let t1 = fs[m + 2].mul(&fs[m]).mul(&fs[m]).mul(&fs[m]);
            let t2 = fs[m - 1].mul(&fs[m + 1]).mul(&fs[m + 1]).mul(&fs[m + 1]);
            if m % 2 == 0 {
                f2_16.mul(&t1).sub(&t2)
            } else {
                t1.sub(&f2_16.mul(&t2))
            }
        } else {
            let t1 = fs[m + 2].mul(&fs[m - 1]).mul(&fs[m - 1]);
            let t2 = fs[m - 2].mul(&fs[m + 1]).mul(&fs[m + 1]);
            fs[m].mul(&t1.sub(&t2))
        };
        fs.push(next);
    }
    fs.swap_remove(n)
}

/// A separable isogeny with x- and y-maps
/// (x, y) -> (x_num/x_den (x), y * y_num/y_den (x)).
#[derive(Clone, Debug)]
pub struct Isogeny {
    pub domain: Curve,
    pub codomain: Curve,
    pub degree: u64,
    pub kernel: Kernel,
    pub x_num: Poly,
    pub x_den: Poly,
    pub y_num: Poly,
    pub y_den: Poly,
}

/// Vélu's construction from a kernel polynomial.
pub fn velu(e: &Curve, kernel: &Kernel) -> Result<Isogeny> {
    let ctx = e.ctx();
    let ell = kernel.ell;
    if !is_prime(ell) {
        return Err(param!("kernel order {ell} is not prime"));
    }
    let psi = &kernel.poly;
    if !psi.ctx().same(ctx) {
        return Err(param!("kernel polynomial over a different field"));
    }
    let d = kernel.expected_degree();
    if psi.degree() != Some(d) || !psi.leading().is_some_and(|c| c.is_one()) {
        return Err(param!("kernel polynomial must be monic of degree {d}"));
    }
    let a = e.a();
    let b = e.b();
    let f = e.rhs_poly();
    let fp = f.derivative();
    let x = Poly::x(ctx);

    if ell == 2 {
        let x0 = -psi.coeff(0);
        if !e.rhs(&x0).is_zero() {
            return Err(param!("({x0}, 0) is not a 2-torsion point of {e:?}"));
        }
        let v = fp.eval(&x0);
        let w = &x0 * &v;
        let codomain = Curve::new(a - v.scale(5), b - w.scale(7))?;
        let x_num = x.mul(psi).add(&Poly::constant(&v));
        let y_num = psi.mul(psi).sub(&Poly::constant(&v));
        return Ok(Isogeny {
            domain: e.clone(),
            codomain,
            degree: 2,
            kernel: kernel.clone(),
            x_num,
            x_den: psi.clone(),
            y_num,
            y_den: psi.mul(psi),
        });
    }

    if !division_polynomial(e, ell as usize).rem(psi).is_zero() {
        return Err(param!("kernel polynomial does not divide the {ell}-division polynomial"));
    }
    // power sums of the kernel x-coordinates from the elementary symmetric ones
    let esym = |k: usize| -> FieldElem {
        if k > d {
            return FieldElem::zero(ctx);
        }
        let c = psi.coeff(d - k);
        if k % 2 == 1 {
            -c
        } else {
            c
        }
    };
    let (e1, e2, e3) = (esym(1), esym(2), esym(3));
    let p1 = e1.clone();
    let p2 = &e1 * &p1 - e2.scale(2);
    let p3 = &e1 * &p2 - &e2 * &p1 + e3.scale(3);
    let dd = d as u64;
    let v = p2.scale(6) + a.scale(2 * dd);
    let w = p3.scale(10) + (a * &p1).scale(6) + b.scale(4 * dd);
    let codomain = Curve::new(a - v.scale(5), b - w.scale(7))?;

    let two = FieldElem::from_u64(ctx, 2);
    let four = FieldElem::from_u64(ctx, 4);
    let dpsi = psi.derivative();
    let ddpsi = dpsi.derivative();
    let lin = x.scale(&FieldElem::from_u64(ctx, ell)).sub(&Poly::constant(&e1.scale(2)));
    let psi2 = psi.mul(psi);
    let x_num = lin
        .mul(&psi2)
        .sub(&fp.mul(&dpsi).mul(psi).scale(&two))
        .add(&f.mul(&dpsi.mul(&dpsi).sub(&psi.mul(&ddpsi))).scale(&four));
    let y_num = x_num.derivative().mul(psi).sub(&x_num.mul(&dpsi).scale(&two));
    Ok(Isogeny {
        domain: e.clone(),
        codomain,
        degree: ell,
        kernel: kernel.clone(),
        x_num,
        x_den: psi2.clone(),
        y_num,
        y_den: psi2.mul(psi),
    })
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct IsogenyJson {
    pub domain: CurveJson,
    pub codomain: CurveJson,
    pub degree: u64,
    pub kernel_x: Vec<String>,
}

impl Isogeny {
    pub fn eval(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => {
                let Some(dx) = self.x_den.eval(x).inv() else {
                    return Point::Infinity;
                };
                let dy = self.y_den.eval(x).inv().expect("same zeros as x_den");
                Point::affine(self.x_num.eval(x) * dx, y * self.y_num.eval(x) * dy)
            }
        }
    }

    /// Kernel x-coordinates rational over the domain's field, sorted.
    pub fn kernel_x(&self) -> Vec<FieldElem> {
        self.kernel.poly.roots()
    }

    /// Base change along an embedding of fields.
    pub fn lift(&self, emb: &Embedding) -> Isogeny {
        let lp = |p: &Poly| lift_poly(p, emb);
        Isogeny {
            domain: self.domain.lift(emb),
            codomain: self.codomain.lift(emb),
            degree: self.degree,
            kernel: Kernel { ell: self.kernel.ell, poly: lp(&self.kernel.poly) },
            x_num: lp(&self.x_num),
            x_den: lp(&self.x_den),
            y_num: lp(&self.y_num),
            y_den: lp(&self.y_den),
        }
    }

    pub fn to_json(&self) -> IsogenyJson {
        IsogenyJson {
            domain: self.domain.to_json(),
            codomain: self.codomain.to_json(),
            degree: self.degree,
            kernel_x: self.kernel_x().iter().map(|x| x.to_string()).collect(),
        }
    }
}

pub(crate) fn lift_poly(p: &Poly, emb: &Embedding) -> Poly {
    let cs: Vec<FieldElem> = p.coeffs().iter().map(|c| emb.lift(c)).collect();
    Poly::from_coeffs(emb.big(), &cs)
}

pub(crate) fn descend_poly(p: &Poly, emb: &Embedding) -> Option<Poly> {
    let cs: Option<Vec<FieldElem>> = p.coeffs().iter().map(|c| emb.descend(c)).collect();
    Some(Poly::from_coeffs(emb.small(), &cs?))
}
