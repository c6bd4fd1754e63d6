//! Dense univariate polynomials over a [`FieldCtx`], with root finding by
//! equal-degree splitting.

use std::fmt;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Coeffs, Ctx, FieldElem};
use crate::arith::{self, inv_mod};

/// Coefficients low-to-high, no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    ctx: Ctx,
    c: Vec<Coeffs>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.c == other.c
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..self.c.len())
            .rev()
            .map(|i| format!("({})*x^{}", self.coeff(i), i))
            .collect();
        write!(f, "{}", if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}

impl Poly {
    fn from_raw(ctx: &Ctx, mut c: Vec<Coeffs>) -> Self {
        while c.last().is_some_and(|x| x.iter().all(|&v| v == 0)) {
            c.pop();
        }
        Poly { ctx: ctx.clone(), c }
    }

    pub fn zero(ctx: &Ctx) -> Self {
        Poly { ctx: ctx.clone(), c: vec![] }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(&FieldElem::one(ctx))
    }

    pub fn x(ctx: &Ctx) -> Self {
        Self::from_raw(ctx, vec![ctx.zero_raw(), ctx.one_raw()])
    }

    pub fn constant(a: &FieldElem) -> Self {
        Self::from_raw(a.ctx(), vec![a.c.clone()])
    }

    pub fn from_coeffs(ctx: &Ctx, coeffs: &[FieldElem]) -> Self {
        for a in coeffs {
            assert!(a.ctx().same(ctx), "coefficient from a different field");
        }
        Self::from_raw(ctx, coeffs.iter().map(|a| a.c.clone()).collect())
    }

    /// Polynomial with prime-field coefficients given as residues.
    pub fn from_u64s(ctx: &Ctx, coeffs: &[u64]) -> Self {
        let c = coeffs
            .iter()
            .map(|&v| {
                let mut r = ctx.zero_raw();
                r[0] = v % ctx.p;
                r
            })
            .collect();
        Self::from_raw(ctx, c)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(ctx: &Ctx, roots: &[FieldElem]) -> Self {
        roots.iter().fold(Self::one(ctx), |acc, r| {
            acc.mul(&Self::from_coeffs(ctx, &[-r, FieldElem::one(ctx)]))
        })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        match self.c.get(i) {
            Some(c) => FieldElem::from_raw(&self.ctx, c.clone()),
            None => FieldElem::zero(&self.ctx),
        }
    }

    pub fn coeffs(&self) -> Vec<FieldElem> {
        (0..self.c.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.degree().map(|d| self.coeff(d))
    }

    pub fn add(&self, other: &Self) -> Self {
        let ctx = &self.ctx;
        let n = self.c.len().max(other.c.len());
        let zero = ctx.zero_raw();
        let c = (0..n)
            .map(|i| ctx.add_raw(self.c.get(i).unwrap_or(&zero), other.c.get(i).unwrap_or(&zero)))
            .collect();
        Self::from_raw(ctx, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(&self.ctx, self.c.iter().map(|x| self.ctx.neg_raw(x)).collect())
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        Self::from_raw(&self.ctx, self.c.iter().map(|x| self.ctx.mul_raw(x, &k.c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.ctx.same(&other.ctx), "polynomials over different fields");
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let ctx = &self.ctx;
        let mut out = vec![ctx.zero_raw(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.iter().all(|&v| v == 0) {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                let t = ctx.mul_raw(a, b);
                out[i + j] = ctx.add_raw(&out[i + j], &t);
            }
        }
        Self::from_raw(ctx, out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let ctx = &self.ctx;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = ctx.inv_raw(&divisor.c[dd]).expect("nonzero leading coefficient");
        let mut rem = self.c.clone();
        if rem.len() <= dd {
            return (Self::zero(ctx), self.clone());
        }
        let mut quot = vec![ctx.zero_raw(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].iter().all(|&v| v == 0) {
                continue;
            }
            let t = ctx.mul_raw(&rem[k], &lead_inv);
            for (i, d) in divisor.c.iter().enumerate() {
                let prod = ctx.mul_raw(&t, d);
                rem[k - dd + i] = ctx.sub_raw(&rem[k - dd + i], &prod);
            }
            quot[k - dd] = t;
        }
        rem.truncate(dd);
        (Self::from_raw(ctx, quot), Self::from_raw(ctx, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero")),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let ctx = &self.ctx;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| ctx.scale_raw(x, i as u64 % ctx.p))
            .collect();
        Self::from_raw(ctx, c)
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        assert!(self.ctx.same(x.ctx()), "evaluation point from a different field");
        let ctx = &self.ctx;
        let mut acc = ctx.zero_raw();
        for c in self.c.iter().rev() {
            acc = ctx.add_raw(&ctx.mul_raw(&acc, &x.c), c);
        }
        FieldElem::from_raw(ctx, acc)
    }

    /// `self^exp mod modulus`.
    pub fn powmod(&self, exp: &BigUint, modulus: &Self) -> Self {
        let base = self.rem(modulus);
        let mut acc = Self::one(&self.ctx).rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus);
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Distinct roots in the coefficient field, sorted canonically.
    pub fn roots(&self) -> Vec<FieldElem> {
        let Some(d) = self.degree() else {
            panic!("roots of the zero polynomial");
        };
        if d == 0 {
            return vec![];
        }
        let f = self.monic();
        let x = Self::x(&self.ctx);
        let xq = x.powmod(self.ctx.order(), &f);
        let g = f.gcd(&xq.sub(&x));
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_f1e1d);
        split_linear(&g, &mut rng, &mut out);
        out.sort();
        out
    }

    /// Roots with multiplicities, sorted canonically.
    pub fn roots_with_multiplicity(&self) -> Vec<(FieldElem, usize)> {
        self.roots()
            .into_iter()
            .map(|r| {
                let lin = Self::from_coeffs(&self.ctx, &[-&r, FieldElem::one(&self.ctx)]);
                let mut q = self.clone();
                let mut mult = 0;
                loop {
                    let (qq, rr) = q.divrem(&lin);
                    if !rr.is_zero() {
                        break;
                    }
                    q = qq;
                    mult += 1;
                }
                (r, mult)
            })
            .collect()
    }
}

/// Splits a squarefree product of distinct linear factors into its roots.
fn split_linear(g: &Poly, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElem>) {
    let ctx = g.ctx.clone();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(-g.coeff(0));
        }
        Some(d) => {
            let half = (ctx.order() - 1u32) >> 1;
            loop {
                let delta = FieldElem::random(&ctx, rng);
                let shift = Poly::from_coeffs(&ctx, &[delta, FieldElem::one(&ctx)]);
                let h = shift.powmod(&half, g).sub(&Poly::one(&ctx));
                let f1 = g.gcd(&h);
                let k = f1.degree().unwrap_or(0);
                if f1.is_zero() || k == 0 || k == d {
                    continue;
                }
                let f2 = g.divrem(&f1).0;
                split_linear(&f1, rng, out);
                split_linear(&f2, rng, out);
                return;
            }
        }
    }
}

/// Rabin's test for a monic polynomial with prime-field coefficients.
pub(crate) fn is_irreducible_over_prime(base: &Ctx, monic: &[u64]) -> bool {
    debug_assert_eq!(base.degree(), 1);
    let n = monic.len() - 1;
    if n == 1 {
        return true;
    }
    if monic[0] == 0 {
        return false;
    }
    let f = Poly::from_u64s(base, monic);
    let x = Poly::x(base);
    let p = BigUint::from(base.characteristic());
    // x^(p^k) mod f for k = 0..=n
    let mut powers = vec![x.clone()];
    for k in 1..=n {
        let next = powers[k - 1].powmod(&p, &f);
        powers.push(next);
    }
    if powers[n] != x.rem(&f) {
        return false;
    }
    arith::factor(n as u64).into_iter().all(|(r, _)| {
        let k = n / r as usize;
        f.gcd(&powers[k].sub(&x)).degree() == Some(0)
    })
}

/// Inverse of `a` modulo a monic polynomial over F_p, by extended Euclid.
pub(crate) fn inv_mod_poly(p: u64, a: &[u64], modulus: &[u64]) -> Option<Vec<u64>> {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    fn sub_scaled_shift(p: u64, a: &mut Vec<u64>, b: &[u64], k: u64, shift: usize) {
        if a.len() < b.len() + shift {
            a.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            a[i + shift] = (a[i + shift] + p - k * bi % p) % p;
        }
    }
    let m = modulus.len() - 1;
    let mut r0: Vec<u64> = modulus.to_vec();
    let mut r1: Vec<u64> = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<u64> = vec![];
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // r0 = q r1 + r, s0 - q s1
        let mut q: Vec<u64> = vec![0; r0.len().saturating_sub(r1.len()) + 1];
        let lead_inv = inv_mod(*r1.last()?, p)?;
        let mut r = r0.clone();
        while r.len() >= r1.len() && !r.is_empty() {
            let shift = r.len() - r1.len();
            let k = r.last().copied()? * lead_inv % p;
            q[shift] = k;
            sub_scaled_shift(p, &mut r, &r1, k, shift);
            trim(&mut r);
        }
        let mut s = s0.clone();
        for (shift, &k) in q.iter().enumerate() {
            if k != 0 {
                sub_scaled_shift(p, &mut s, &s1, k, shift);
            }
        }
        trim(&mut s);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod(r0[0], p)?;
    let mut out: Vec<u64> = s0.iter().map(|&v| v * c % p).collect();
    out.resize(m, 0);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{enumerate_field, FieldCtx};

    #[test]
    fn roots_match_exhaustive_search() {
        let f = FieldCtx::fp2(31).unwrap();
        let all = enumerate_field(&f).unwrap();
        for seed in 0..20u64 {
            let coeffs: Vec<FieldElem> = (0..6).map(|i| FieldElem::nth(&f, (seed * 131 + i * 977) % 961)).collect();
            let mut poly = Poly::from_coeffs(&f, &coeffs);
            poly = poly.add(&Poly::from_roots(&f, &[FieldElem::nth(&f, seed * 7), FieldElem::nth(&f, seed * 7)]));
            if poly.degree().unwrap_or(0) == 0 {
                continue;
            }
            let brute: Vec<FieldElem> = all.iter().filter(|x| poly.eval(x).is_zero()).cloned().collect();
            assert_eq!(poly.roots(), brute);
        }
    }

    #[test]
    fn multiplicities() {
        let f = FieldCtx::fp2(101).unwrap();
        let a = FieldElem::from_u64(&f, 66);
        let b = FieldElem::generator(&f);
        let poly = Poly::from_roots(&f, &[a.clone(), a.clone(), a.clone(), b.clone()]);
        let mut expected = vec![(a, 3), (b, 1)];
        expected.sort();
        assert_eq!(poly.roots_with_multiplicity(), expected);
    }

    #[test]
    fn inverse_in_extension() {
        let f = FieldCtx::ext(5, 4).unwrap();
        for i in 1..625 {
            let a = FieldElem::nth(&f, i);
            assert!((&a * a.inv().unwrap()).is_one());
        }
    }
}
