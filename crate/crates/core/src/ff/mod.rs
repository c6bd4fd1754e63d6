//! Exact arithmetic in F_p, F_{p^2} and extensions F_{p^m}.
//!
//! A [`FieldCtx`] fixes p and a monic irreducible modulus; a [`FieldElem`]
//! is a coefficient vector (constant term first) reduced modulo p and the
//! modulus. Elements carry their context and arithmetic between different
//! contexts panics.
//!
//! The canonical total order compares coefficients from the highest power
//! of the generator down to the constant term, each as an integer in
//! `[0, p)`. For F_{p^2} = F_p[u]/(u^2 - c) this is "u-coefficient first,
//! then constant".

mod poly;
mod text;

pub use poly::Poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use smallvec::SmallVec;

use crate::arith::{self, inv_mod};
use crate::error::{param, Result};

pub(crate) type Coeffs = SmallVec<[u64; 2]>;

/// Largest supported characteristic; keeps every product of two reduced
/// residues plus a reduced residue inside `u64`.
pub const MAX_P: u64 = (1 << 31) - 1;

#[derive(Debug)]
pub struct FieldCtx {
    p: u64,
    degree: usize,
    /// Monic, low-to-high, length `degree + 1`.
    modulus: Vec<u64>,
    order: BigUint,
    two_adicity: u64,
    odd_part: BigUint,
    nonresidue: Coeffs,
    /// `c` when the modulus is `u^2 - c`.
    quad_c: Option<u64>,
}

pub type Ctx = Arc<FieldCtx>;

fn check_char(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(param!("characteristic {p} is not an odd prime"));
    }
    if p > MAX_P {
        return Err(param!("characteristic {p} exceeds 2^31 - 1"));
    }
    Ok(())
}

impl FieldCtx {
    /// The canonical F_{p^2}: modulus `u^2 + 1` when p = 3 (mod 4), else
    /// `u^2 - c` with c the smallest positive quadratic nonresidue.
    pub fn fp2(p: u64) -> Result<Ctx> {
        check_char(p)?;
        let c = if p % 4 == 3 {
            p - 1
        } else {
            (2..p).find(|&c| arith::legendre(c as i64, p) == -1).expect("nonresidue exists")
        };
        Ok(Self::with_modulus(p, vec![(p - c) % p, 0, 1]))
    }

    /// F_{p^m} with modulus the first monic irreducible of degree m in the
    /// lexicographic order on coefficient sequences, constant term fastest.
    pub fn ext(p: u64, m: usize) -> Result<Ctx> {
        check_char(p)?;
        if m == 0 {
            return Err(param!("extension degree must be at least 1"));
        }
        if m > 64 {
            return Err(param!("extension degree {m} too large"));
        }
        if m == 1 {
            return Ok(Self::with_modulus(p, vec![0, 1]));
        }
        let base = Self::with_modulus(p, vec![0, 1]);
        let mut low = vec![0u64; m];
        loop {
            let mut cand = low.clone();
            cand.push(1);
            if poly::is_irreducible_over_prime(&base, &cand) {
                return Ok(Self::with_modulus(p, cand));
            }
            // odometer, constant term fastest
            let mut i = 0;
            loop {
                low[i] += 1;
                if low[i] < p {
                    break;
                }
                low[i] = 0;
                i += 1;
                if i == m {
                    unreachable!("irreducible polynomials of every degree exist");
                }
            }
        }
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Ctx> {
        Self::ext(p, 1)
    }

    fn with_modulus(p: u64, modulus: Vec<u64>) -> Ctx {
        let degree = modulus.len() - 1;
        let order = BigUint::from(p).pow(degree as u32);
        let mut odd_part = &order - 1u32;
        let mut two_adicity = 0;
        while (&odd_part % 2u32).is_zero() {
            odd_part >>= 1;
            two_adicity += 1;
        }
        let quad_c = (degree == 2 && modulus[1] == 0).then(|| (p - modulus[0]) % p);
        let mut ctx = FieldCtx {
            p,
            degree,
            modulus,
            order,
            two_adicity,
            odd_part,
            nonresidue: Coeffs::new(),
            quad_c,
        };
        ctx.nonresidue = ctx.find_nonresidue();
        Arc::new(ctx)
    }

    /// Linear scan in canonical order starting at 2.
    fn find_nonresidue(&self) -> Coeffs {
        let half = (&self.order - 1u32) >> 1;
        let mut idx = 2u64;
        loop {
            let c = self.index_to_coeffs(idx);
            let e = self.pow_raw(&c, &half);
            if !self.is_one_raw(&e) {
                return c;
            }
            idx += 1;
        }
    }

    /// The `idx`-th element in canonical order (for indices below p^m).
    fn index_to_coeffs(&self, mut idx: u64) -> Coeffs {
        let mut c = Coeffs::from_elem(0, self.degree);
        for slot in c.iter_mut() {
            *slot = idx % self.p;
            idx /= self.p;
        }
        c
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field size p^m.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// `c` when the modulus is `u^2 - c`.
    pub fn quad_c(&self) -> Option<u64> {
        self.quad_c
    }

    /// Field size as `u64` when it fits.
    pub fn size(&self) -> Option<u64> {
        u64::try_from(&self.order).ok()
    }

    pub fn same(&self, other: &FieldCtx) -> bool {
        std::ptr::eq(self, other) || (self.p == other.p && self.modulus == other.modulus)
    }

    // raw coefficient arithmetic -----------------------------------------

    pub(crate) fn zero_raw(&self) -> Coeffs {
        Coeffs::from_elem(0, self.degree)
    }

    pub(crate) fn one_raw(&self) -> Coeffs {
        let mut c = self.zero_raw();
        c[0] = 1;
        c
    }

    pub(crate) fn is_one_raw(&self, a: &[u64]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&x| x == 0)
    }

    pub(crate) fn add_raw(&self, a: &[u64], b: &[u64]) -> Coeffs {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            })
            .collect()
    }

    pub(crate) fn sub_raw(&self, a: &[u64], b: &[u64]) -> Coeffs {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| if x >= y { x - y } else { x + self.p - y })
            .collect()
    }

    pub(crate) fn neg_raw(&self, a: &[u64]) -> Coeffs {
        a.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect()
    }

    pub(crate) fn scale_raw(&self, a: &[u64], k: u64) -> Coeffs {
        a.iter().map(|&x| x * k % self.p).collect()
    }

    pub(crate) fn mul_raw(&self, a: &[u64], b: &[u64]) -> Coeffs {
        let p = self.p;
        match self.degree {
            1 => smallvec::smallvec![a[0] * b[0] % p],
            2 => {
                if let Some(c) = self.quad_c {
                    let hi = a[1] * b[1] % p;
                    let r0 = (a[0] * b[0] + c * hi) % p;
                    let r1 = (a[0] * b[1] % p + a[1] * b[0]) % p;
                    smallvec::smallvec![r0, r1]
                } else {
                    self.mul_generic(a, b)
                }
            }
            _ => self.mul_generic(a, b),
        }
    }

    fn mul_generic(&self, a: &[u64], b: &[u64]) -> Coeffs {
        let p = self.p;
        let m = self.degree;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (m..prod.len()).rev() {
            let t = prod[k];
            if t == 0 {
                continue;
            }
            for (i, &mi) in self.modulus[..m].iter().enumerate() {
                // subtract t * mi * x^(k-m+i)
                let idx = k - m + i;
                prod[idx] = (prod[idx] + p - t * mi % p) % p;
            }
            prod[k] = 0;
        }
        prod.truncate(m);
        Coeffs::from_vec(prod)
    }

    pub(crate) fn square_raw(&self, a: &[u64]) -> Coeffs {
        self.mul_raw(a, a)
    }

    pub(crate) fn inv_raw(&self, a: &[u64]) -> Option<Coeffs> {
        let p = self.p;
        match (self.degree, self.quad_c) {
            (1, _) => inv_mod(a[0], p).map(|x| smallvec::smallvec![x]),
            (2, Some(c)) => {
                let norm = (a[0] * a[0] % p + p - c * (a[1] * a[1] % p) % p) % p;
                let ni = inv_mod(norm, p)?;
                Some(smallvec::smallvec![a[0] * ni % p, (p - a[1]) % p * ni % p])
            }
            _ => poly::inv_mod_poly(p, a, &self.modulus).map(Coeffs::from_vec),
        }
    }

    pub(crate) fn pow_raw(&self, a: &[u64], exp: &BigUint) -> Coeffs {
        let mut acc = self.one_raw();
        for i in (0..exp.bits()).rev() {
            acc = self.square_raw(&acc);
            if exp.bit(i) {
                acc = self.mul_raw(&acc, a);
            }
        }
        acc
    }

    pub(crate) fn pow_u64_raw(&self, a: &[u64], mut exp: u64) -> Coeffs {
        let mut acc = self.one_raw();
        let mut base = Coeffs::from_slice(a);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            base = self.square_raw(&base);
            exp >>= 1;
        }
        acc
    }

    /// Quadratic character: 1 for nonzero squares, -1 for nonsquares, 0 at 0.
    pub(crate) fn chi_raw(&self, a: &[u64]) -> i8 {
        if a.iter().all(|&x| x == 0) {
            return 0;
        }
        let p = self.p;
        match (self.degree, self.quad_c) {
            (1, _) => arith::legendre(a[0] as i64, p),
            (2, Some(c)) => {
                // the norm map to F_p detects squares
                let norm = (a[0] * a[0] % p + p - c * (a[1] * a[1] % p) % p) % p;
                arith::legendre(norm as i64, p)
            }
            _ => {
                let half = (&self.order - 1u32) >> 1;
                if self.is_one_raw(&self.pow_raw(a, &half)) {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn cmp_raw(a: &[u64], b: &[u64]) -> Ordering {
        a.iter().rev().cmp(b.iter().rev())
    }
}

/// An element of a finite field context.
#[derive(Clone)]
pub struct FieldElem {
    ctx: Ctx,
    c: Coeffs,
}

impl FieldElem {
    pub(crate) fn from_raw(ctx: &Ctx, c: Coeffs) -> Self {
        debug_assert_eq!(c.len(), ctx.degree);
        FieldElem { ctx: ctx.clone(), c }
    }

    pub fn zero(ctx: &Ctx) -> Self {
        Self::from_raw(ctx, ctx.zero_raw())
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::from_raw(ctx, ctx.one_raw())
    }

    pub fn from_u64(ctx: &Ctx, n: u64) -> Self {
        let mut c = ctx.zero_raw();
        c[0] = n % ctx.p;
        Self::from_raw(ctx, c)
    }

    pub fn from_i64(ctx: &Ctx, n: i64) -> Self {
        Self::from_u64(ctx, n.rem_euclid(ctx.p as i64) as u64)
    }

    /// Element with the given coefficients (constant term first); missing
    /// high coefficients are zero, extra ones are rejected.
    pub fn from_coeffs(ctx: &Ctx, coeffs: &[u64]) -> Result<Self> {
        if coeffs.len() > ctx.degree {
            return Err(param!("{} coefficients for a degree-{} field", coeffs.len(), ctx.degree));
        }
        let mut c = ctx.zero_raw();
        for (slot, &x) in c.iter_mut().zip(coeffs) {
            *slot = x % ctx.p;
        }
        Ok(Self::from_raw(ctx, c))
    }

    /// The generator `u` of the extension (equals 0 in a prime field).
    pub fn generator(ctx: &Ctx) -> Self {
        if ctx.degree == 1 {
            // x mod x
            return Self::zero(ctx);
        }
        let mut c = ctx.zero_raw();
        c[1] = 1;
        Self::from_raw(ctx, c)
    }

    /// The `idx`-th element of the field in canonical order.
    pub fn nth(ctx: &Ctx, idx: u64) -> Self {
        Self::from_raw(ctx, ctx.index_to_coeffs(idx))
    }

    /// Iterates every field element in canonical order.
    pub fn all(ctx: &Ctx) -> Result<impl Iterator<Item = FieldElem> + '_> {
        let n = ctx
            .size()
            .ok_or_else(|| param!("field too large to enumerate"))?;
        Ok((0..n).map(move |i| Self::nth(ctx, i)))
    }

    pub fn random<R: rand::Rng + ?Sized>(ctx: &Ctx, rng: &mut R) -> Self {
        let c = (0..ctx.degree).map(|_| rng.gen_range(0..ctx.p)).collect();
        Self::from_raw(ctx, c)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.ctx.is_one_raw(&self.c)
    }

    /// The value as a residue mod p when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.c[1..].iter().all(|&x| x == 0).then_some(self.c[0])
    }

    fn check(&self, other: &FieldElem) {
        assert!(
            self.ctx.same(&other.ctx),
            "arithmetic between elements of different field contexts"
        );
    }

    pub fn same_ctx(&self, other: &FieldElem) -> bool {
        self.ctx.same(&other.ctx)
    }

    pub fn square(&self) -> Self {
        Self::from_raw(&self.ctx, self.ctx.square_raw(&self.c))
    }

    pub fn inv(&self) -> Option<Self> {
        self.ctx.inv_raw(&self.c).map(|c| Self::from_raw(&self.ctx, c))
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self::from_raw(&self.ctx, self.ctx.pow_u64_raw(&self.c, exp))
    }

    pub fn pow_big(&self, exp: &BigUint) -> Self {
        Self::from_raw(&self.ctx, self.ctx.pow_raw(&self.c, exp))
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::from_raw(&self.ctx, self.ctx.scale_raw(&self.c, k % self.ctx.p))
    }

    /// x^p.
    pub fn frobenius(&self) -> Self {
        self.pow(self.ctx.p)
    }

    /// 1, -1 or 0 according to whether the element is a nonzero square.
    pub fn quadratic_character(&self) -> i8 {
        self.ctx.chi_raw(&self.c)
    }

    pub fn is_square(&self) -> bool {
        self.quadratic_character() >= 0
    }

    /// Square root by Tonelli-Shanks in the multiplicative group of order
    /// p^m - 1. Returns the smaller root of {r, -r} in canonical order.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.quadratic_character() != 1 {
            return None;
        }
        let ctx = &self.ctx;
        let z = &ctx.nonresidue;
        let mut m = ctx.two_adicity;
        let mut c = ctx.pow_raw(z, &ctx.odd_part);
        let mut t = ctx.pow_raw(&self.c, &ctx.odd_part);
        let half = (&ctx.odd_part + 1u32) >> 1;
        let mut r = ctx.pow_raw(&self.c, &half);
        while !ctx.is_one_raw(&t) {
            let mut i = 0;
            let mut tt = t.clone();
            while !ctx.is_one_raw(&tt) {
                tt = ctx.square_raw(&tt);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = ctx.square_raw(&b);
            }
            m = i;
            c = ctx.square_raw(&b);
            t = ctx.mul_raw(&t, &c);
            r = ctx.mul_raw(&r, &b);
        }
        let root = Self::from_raw(ctx, r);
        let neg = -&root;
        Some(if neg < root { neg } else { root })
    }

    /// Both square roots (equal when the input is 0).
    pub fn sqrts(&self) -> Vec<Self> {
        match self.sqrt() {
            None => vec![],
            Some(r) if r.is_zero() => vec![r],
            Some(r) => {
                let n = -&r;
                vec![r, n]
            }
        }
    }

    /// Canonical-order comparison; mismatched contexts are an error.
    pub fn cmp_canonical(&self, other: &Self) -> Result<Ordering> {
        if !self.ctx.same(&other.ctx) {
            return Err(param!("comparison between different field contexts"));
        }
        Ok(FieldCtx::cmp_raw(&self.c, &other.c))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.c == other.c
    }
}

impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.p.hash(state);
        self.c.hash(state);
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check(other);
        FieldCtx::cmp_raw(&self.c, &other.c)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $raw:ident, $assign_tr:ident, $assign:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.check(rhs);
                FieldElem::from_raw(&self.ctx, self.ctx.$raw(&self.c, &rhs.c))
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                (&self).$method(rhs)
            }
        }
        impl $tr<FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$method(&rhs)
            }
        }
        impl $assign_tr<&FieldElem> for FieldElem {
            fn $assign(&mut self, rhs: &FieldElem) {
                self.check(rhs);
                self.c = self.ctx.$raw(&self.c, &rhs.c);
            }
        }
        impl $assign_tr<FieldElem> for FieldElem {
            fn $assign(&mut self, rhs: FieldElem) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

binop!(Add, add, add_raw, AddAssign, add_assign);
binop!(Sub, sub, sub_raw, SubAssign, sub_assign);
binop!(Mul, mul, mul_raw, MulAssign, mul_assign);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::from_raw(&self.ctx, self.ctx.neg_raw(&self.c))
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

/// Embedding of the canonical F_{p^2} into an even-degree extension.
///
/// The generator `u` (with `u^2 = c`) maps to the smaller square root of
/// `c` in the target field.
#[derive(Clone, Debug)]
pub struct Embedding {
    small: Ctx,
    big: Ctx,
    image_u: FieldElem,
    /// coordinate where `image_u` has a nonzero non-constant coefficient
    pivot: usize,
}

impl Embedding {
    pub fn new(small: &Ctx, big: &Ctx) -> Result<Self> {
        if small.p != big.p || small.degree != 2 || !big.degree.is_multiple_of(2) {
            return Err(param!("no embedding of degree {} into degree {}", small.degree, big.degree));
        }
        let c = small
            .quad_c
            .ok_or_else(|| param!("embedding source must have modulus u^2 - c"))?;
        let image_u = FieldElem::from_u64(big, c)
            .sqrt()
            .ok_or_else(|| param!("u^2 = c has no root in the target field"))?;
        let pivot = (1..big.degree)
            .find(|&i| image_u.c[i] != 0)
            .ok_or_else(|| param!("square root of c lies in the prime field"))?;
        Ok(Embedding { small: small.clone(), big: big.clone(), image_u, pivot })
    }

    pub fn small(&self) -> &Ctx {
        &self.small
    }

    pub fn big(&self) -> &Ctx {
        &self.big
    }

    pub fn lift(&self, x: &FieldElem) -> FieldElem {
        assert!(x.ctx.same(&self.small));
        let a = FieldElem::from_u64(&self.big, x.c[1]);
        let b = FieldElem::from_u64(&self.big, x.c[0]);
        &a * &self.image_u + b
    }

    /// Inverse of [`Embedding::lift`] on its image; `None` outside it.
    pub fn descend(&self, y: &FieldElem) -> Option<FieldElem> {
        assert!(y.ctx.same(&self.big));
        let p = self.big.p;
        let a = y.c[self.pivot] * inv_mod(self.image_u.c[self.pivot], p)? % p;
        let b = (y.c[0] + p - a * self.image_u.c[0] % p) % p;
        let x = FieldElem::from_raw(&self.small, smallvec::smallvec![b, a]);
        (self.lift(&x) == *y).then_some(x)
    }
}

/// All elements of a small field, sorted canonically. Used by tests and
/// exhaustive checks.
pub fn enumerate_field(ctx: &Ctx) -> Result<Vec<FieldElem>> {
    let size = ctx.size().filter(|&s| s <= 10_000_000).ok_or_else(|| {
        crate::error::Error::Capacity("field has more than 10^7 elements".into())
    })?;
    Ok((0..size).map(|i| FieldElem::nth(ctx, i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn squares_mod(p: u64) -> Vec<bool> {
        let mut sq = vec![false; p as usize];
        for x in 0..p {
            sq[(x * x % p) as usize] = true;
        }
        sq
    }

    #[test]
    fn fp2_moduli() {
        assert_eq!(FieldCtx::fp2(103).unwrap().modulus(), &[1, 0, 1]);
        // exhaustive square table: 2 is the first nonresidue mod 101
        let sq = squares_mod(101);
        let first = (1..101).find(|&c| !sq[c as usize]).unwrap();
        assert_eq!(first, 2);
        assert_eq!(FieldCtx::fp2(101).unwrap().modulus(), &[99, 0, 1]);
        assert!(FieldCtx::fp2(4).is_err());
        assert!(FieldCtx::fp2(2).is_err());
        assert!(FieldCtx::fp2(91).is_err());
    }

    #[test]
    fn ext_moduli() {
        assert_eq!(FieldCtx::ext(5, 1).unwrap().modulus(), &[0, 1]);
        // x^2 + 1 has no root mod 3; x^2 + c for c = 0 is reducible
        assert_eq!(FieldCtx::ext(3, 2).unwrap().modulus(), &[1, 0, 1]);
        let f = FieldCtx::ext(5, 4).unwrap();
        let m = f.modulus().to_vec();
        assert_eq!(m.len(), 5);
        // brute force: no factor of degree 1 or 2
        let f5 = FieldCtx::prime(5).unwrap();
        let target = Poly::from_u64s(&f5, &m);
        for a in 0..5u64 {
            for b in 0..5u64 {
                let q = Poly::from_u64s(&f5, &[b, a, 1]);
                assert!(!target.rem(&q).is_zero());
                assert!(!target.rem(&Poly::from_u64s(&f5, &[a, 1])).is_zero());
            }
        }
        // every earlier candidate is reducible
        let mut found_earlier_irreducible = false;
        for idx in 0..5u64.pow(4) {
            let mut c: Vec<u64> = (0..4).map(|k| idx / 5u64.pow(k) % 5).collect();
            if c == m[..4] {
                break;
            }
            c.push(1);
            if poly::is_irreducible_over_prime(&f5, &c) {
                found_earlier_irreducible = true;
            }
        }
        assert!(!found_earlier_irreducible);
    }

    #[test]
    fn sqrt_examples() {
        let f = FieldCtx::fp2(101).unwrap();
        assert!(FieldElem::zero(&f).sqrt().unwrap().is_zero());
        assert_eq!(FieldElem::from_u64(&f, 4).sqrt().unwrap(), FieldElem::from_u64(&f, 2));
        let u = FieldElem::generator(&f);
        let exp = (101u64 * 101 - 1) / 2;
        let euler = u.pow(exp);
        let r = u.sqrt();
        assert_eq!(r.is_some(), euler.is_one());
        // exhaustive check
        let roots = enumerate_field(&f).unwrap().into_iter().filter(|x| x.square() == u).count();
        assert_eq!(roots > 0, r.is_some());
        if let Some(r) = r {
            assert_eq!(r.square(), u);
        }
    }

    #[test]
    fn canonical_order_f9() {
        let f = FieldCtx::fp2(3).unwrap();
        let mut all = enumerate_field(&f).unwrap();
        all.reverse();
        all.sort();
        let text: Vec<String> = all.iter().map(|x| x.to_string()).collect();
        assert_eq!(text, ["0", "1", "2", "1*u+0", "1*u+1", "1*u+2", "2*u+0", "2*u+1", "2*u+2"]);
        let zero = FieldElem::zero(&f);
        let one = FieldElem::one(&f);
        assert_eq!(zero.cmp_canonical(&one).unwrap(), Ordering::Less);
        let u = FieldElem::generator(&f);
        assert_eq!(u.cmp_canonical(&FieldElem::from_u64(&f, 2)).unwrap(), Ordering::Greater);
        let g = FieldCtx::fp2(5).unwrap();
        assert!(zero.cmp_canonical(&FieldElem::zero(&g)).is_err());
    }

    #[test]
    #[should_panic(expected = "different field contexts")]
    fn cross_ctx_arithmetic_panics() {
        let a = FieldElem::one(&FieldCtx::fp2(5).unwrap());
        let b = FieldElem::one(&FieldCtx::fp2(7).unwrap());
        let _ = a + b;
    }

    #[test]
    fn frobenius_examples() {
        let f = FieldCtx::fp2(101).unwrap();
        let u = FieldElem::generator(&f);
        assert_eq!(crate::arith::pow_mod(2, 50, 101), 100);
        assert_eq!(u.frobenius(), -&u);
        let a = FieldElem::from_u64(&f, 17);
        assert_eq!(a.frobenius(), a);
    }

    #[test]
    fn field_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ctx in [
            FieldCtx::fp2(101).unwrap(),
            FieldCtx::fp2(103).unwrap(),
            FieldCtx::ext(7, 4).unwrap(),
            FieldCtx::ext(13, 3).unwrap(),
            FieldCtx::prime(31).unwrap(),
        ] {
            let qm = ctx.order().clone();
            for _ in 0..1000 {
                let a = FieldElem::random(&ctx, &mut rng);
                let b = FieldElem::random(&ctx, &mut rng);
                let c = FieldElem::random(&ctx, &mut rng);
                assert_eq!((&a * &b) * &c, &a * (&b * &c));
                assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
                if !a.is_zero() {
                    assert!((&a * a.inv().unwrap()).is_one());
                    // exponent-based inversion as cross-check
                    assert_eq!(a.inv().unwrap(), a.pow_big(&(&qm - 2u32)));
                }
                assert_eq!(a.pow_big(&qm), a);
                let s = a.square();
                let r = s.sqrt().unwrap();
                assert!(r == a || r == -&a);
            }
        }
    }

    #[test]
    fn total_order_small_fields() {
        for p in [3u64, 5, 7] {
            let f = FieldCtx::fp2(p).unwrap();
            let all = enumerate_field(&f).unwrap();
            for x in &all {
                for y in &all {
                    let xy = x.cmp(y);
                    assert_eq!(xy, y.cmp(x).reverse());
                    assert_eq!(xy == Ordering::Equal, x == y);
                    for z in &all {
                        if xy == Ordering::Less && y < z {
                            assert!(x < z);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_round_trip() {
        let small = FieldCtx::fp2(103).unwrap();
        let big = FieldCtx::ext(103, 4).unwrap();
        let e = Embedding::new(&small, &big).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = FieldElem::random(&small, &mut rng);
            let b = FieldElem::random(&small, &mut rng);
            assert_eq!(e.lift(&(&a * &b)), e.lift(&a) * e.lift(&b));
            assert_eq!(e.descend(&e.lift(&a)).unwrap(), a);
        }
        let gen = FieldElem::generator(&big);
        assert!(e.descend(&gen).is_none());
    }
}
