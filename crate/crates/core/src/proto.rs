//! The CGL hash on 𝒢(p, 2) and a toy SIDH exchange.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::is_prime;
use crate::curve::{canonical_model, two_torsion, velu, Curve, Kernel, Point};
use crate::error::{internal, param, Error, Result};
use crate::ff::{FieldElem, Poly};
use crate::ssgraph::seed_ss_j;

/// Position of a CGL walk: the current canonical curve, the marked 2-torsion
/// point generating the kernel of the way back, and the number of steps taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkState {
    pub curve: Curve,
    pub marked: Point,
    pub steps: u64,
}

impl WalkState {
    pub fn j(&self) -> FieldElem {
        self.curve.j_invariant()
    }
}

pub fn cgl_init(p: u64) -> Result<WalkState> {
    let curve = canonical_model(&seed_ss_j(p)?)?;
    let marked = two_torsion(&curve)?.swap_remove(0);
    Ok(WalkState { curve, marked, steps: 0 })
}

/// One step, renormalizing through `canon` (j ↦ canonical model).
fn step_with(state: &WalkState, bit: bool, canon: &mut dyn FnMut(&FieldElem) -> Result<Curve>) -> Result<WalkState> {
    let e = &state.curve;
    let marked = &state.marked;
    if !e.contains(marked) || marked.is_infinity() || !e.double(marked).is_infinity() {
        return Err(internal!("walk state corrupted: marked point {marked:?} is not 2-torsion on {e:?}"));
    }
    let others: Vec<Point> = two_torsion(e)?.into_iter().filter(|t| t != marked).collect();
    if others.len() != 2 {
        return Err(internal!("walk state corrupted: marked point is not among the 2-torsion of {e:?}"));
    }
    let q = &others[bit as usize];
    let phi = velu(e, &Kernel::two_torsion(q.x().expect("affine")))?;
    let image = phi.eval(marked);
    let target = canon(&phi.codomain.j_invariant())?;
    // any of the scalings works: ±1 fixes 2-torsion, and the extra
    // automorphisms at j = 0, 1728 only relabel it
    let u = phi
        .codomain
        .isomorphism_scalings(&target)
        .into_iter()
        .next()
        .ok_or_else(|| internal!("codomain is not isomorphic to its canonical model"))?;
    let x = image.x().ok_or_else(|| internal!("the marked point fell into the kernel"))?;
    let marked = Point::affine(&u * x, FieldElem::zero(e.ctx()));
    Ok(WalkState { curve: target, marked, steps: state.steps + 1 })
}

pub fn cgl_step(state: &WalkState, bit: bool) -> Result<WalkState> {
    step_with(state, bit, &mut |j| canonical_model(j))
}

/// Memoizes canonical models, which dominate the cost of a step.
#[derive(Default)]
pub struct Walker {
    models: HashMap<FieldElem, Curve>,
}

impl Walker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn step(&mut self, state: &WalkState, bit: bool) -> Result<WalkState> {
        let models = &mut self.models;
        step_with(state, bit, &mut |j| {
            if let Some(c) = models.get(j) {
                return Ok(c.clone());
            }
            let c = canonical_model(j)?;
            models.insert(j.clone(), c.clone());
            Ok(c)
        })
    }

    pub fn walk(&mut self, state: &WalkState, bits: &[bool]) -> Result<WalkState> {
        let mut s = state.clone();
        for &b in bits {
            s = self.step(&s, b)?;
        }
        Ok(s)
    }
}

pub fn cgl_hash(p: u64, bits: &[bool]) -> Result<FieldElem> {
    Ok(Walker::new().walk(&cgl_init(p)?, bits)?.j())
}

/// Big-endian bit expansion of a hex string (two digits per byte).
pub fn hex_to_bits(hex: &str) -> Result<Vec<bool>> {
    let hex = hex.trim();
    let hex = hex.strip_prefix("0x").unwrap_or(hex);
    if !hex.len().is_multiple_of(2) {
        return Err(Error::Parse("hex message must have an even number of digits".into()));
    }
    let mut bits = Vec::with_capacity(hex.len() * 4);
    for c in hex.chars() {
        let d = c.to_digit(16).ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))?;
        bits.extend((0..4).rev().map(|k| d >> k & 1 == 1));
    }
    Ok(bits)
}

/// Hash counts of all 2^len messages of length `len`, keyed by j.
#[derive(Clone, Debug, Serialize)]
pub struct Distribution {
    pub p: u64,
    pub len: u32,
    pub buckets: BTreeMap<String, u64>,
    pub max_min_ratio: f64,
}

pub fn cgl_distribution(p: u64, len: u32) -> Result<Distribution> {
    if len > 20 {
        return Err(Error::Capacity("distribution runs are capped at 2^20 messages".into()));
    }
    let mut walker = Walker::new();
    let mut counts: HashMap<FieldElem, u64> = HashMap::new();
    // depth-first so shared prefixes are walked once
    let mut stack = vec![cgl_init(p)?];
    while let Some(s) = stack.pop() {
        if s.steps == len as u64 {
            *counts.entry(s.j()).or_default() += 1;
            continue;
        }
        stack.push(walker.step(&s, true)?);
        stack.push(walker.step(&s, false)?);
    }
    let max = counts.values().copied().max().unwrap_or(0);
    let min = counts.values().copied().min().unwrap_or(0);
    let buckets = counts.into_iter().map(|(j, c)| (j.to_string(), c)).collect();
    Ok(Distribution { p, len, buckets, max_min_ratio: max as f64 / min.max(1) as f64 })
}

/// Public parameters of the toy exchange.
#[derive(Clone, Debug)]
pub struct SidhParams {
    pub p: u64,
    pub ell_a: u64,
    pub r_a: u32,
    pub ell_b: u64,
    pub r_b: u32,
    pub f: u64,
    pub seed: u64,
    pub curve: Curve,
    pub basis_a: (Point, Point),
    pub basis_b: (Point, Point),
}

pub const SIDH_SEED: u64 = 0x5eed;
const SAMPLE_CAP: usize = 10_000;

fn checked_pow(ell: u64, r: u32) -> Result<u64> {
    ell.checked_pow(r).filter(|&n| n < 1 << 31).ok_or_else(|| param!("{ell}^{r} is too large"))
}

/// Exact order ℓ^r test, given ℓ^r·P = 0 is already known or being checked.
fn has_order(e: &Curve, pt: &Point, ell: u64, r: u32) -> bool {
    let n = ell.pow(r) as i64;
    r > 0 && e.mul(n, pt).is_infinity() && !e.mul(n / ell as i64, pt).is_infinity()
}

/// A basis of E[ℓ^r] by cofactor sampling: P of exact order ℓ^r, then Q of
/// exact order ℓ^r whose ℓ^{r-1} multiple lies outside ⟨ℓ^{r-1}P⟩.
fn torsion_basis(e: &Curve, p: u64, ell: u64, r: u32, rng: &mut ChaCha8Rng) -> Result<(Point, Point)> {
    let n = ell.pow(r);
    let cofactor = BigInt::from((p + 1) / n);
    let sample = |rng: &mut ChaCha8Rng| {
        for _ in 0..SAMPLE_CAP {
            let pt = e.mul_big(&cofactor, &e.random_point(rng));
            if has_order(e, &pt, ell, r) {
                return Ok(pt);
            }
        }
        Err(internal!("no point of order {ell}^{r} after {SAMPLE_CAP} samples"))
    };
    let pa = sample(rng)?;
    let low = n / ell;
    let pa_low = e.mul(low as i64, &pa);
    for _ in 0..SAMPLE_CAP {
        let qa = sample(rng)?;
        let qa_low = e.mul(low as i64, &qa);
        if (0..ell).all(|k| e.mul(k as i64, &pa_low) != qa_low) {
            return Ok((pa, qa));
        }
    }
    Err(internal!("no independent partner for the {ell}^{r} basis"))
}

pub fn sidh_setup(ell_a: u64, r_a: u32, ell_b: u64, r_b: u32) -> Result<SidhParams> {
    sidh_setup_seeded(ell_a, r_a, ell_b, r_b, SIDH_SEED)
}

pub fn sidh_setup_seeded(ell_a: u64, r_a: u32, ell_b: u64, r_b: u32, seed: u64) -> Result<SidhParams> {
    if !is_prime(ell_a) || !is_prime(ell_b) || ell_a == ell_b {
        return Err(param!("ℓ_A = {ell_a} and ℓ_B = {ell_b} must be distinct primes"));
    }
    if r_a == 0 || r_b == 0 {
        return Err(param!("exponents must be positive"));
    }
    let base = checked_pow(ell_a, r_a)?
        .checked_mul(checked_pow(ell_b, r_b)?)
        .filter(|&n| n < 1 << 31)
        .ok_or_else(|| param!("ℓ_A^r_A·ℓ_B^r_B is too large"))?;
    let (f, p) = (1..=20u64)
        .map(|f| (f, base * f - 1))
        .find(|&(_, p)| (5..1 << 31).contains(&p) && is_prime(p))
        .ok_or_else(|| param!("no f ≤ 20 makes {base}·f - 1 prime"))?;
    let curve = canonical_model(&seed_ss_j(p)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis_a = torsion_basis(&curve, p, ell_a, r_a, &mut rng)?;
    let basis_b = torsion_basis(&curve, p, ell_b, r_b, &mut rng)?;
    Ok(SidhParams { p, ell_a, r_a, ell_b, r_b, f, seed, curve, basis_a, basis_b })
}

/// Kernel polynomial of ⟨s⟩ for s of prime order ℓ.
fn prime_kernel(e: &Curve, s: &Point, ell: u64) -> Result<Kernel> {
    let mut xs = Vec::new();
    let mut t = s.clone();
    for _ in 0..ell.div_ceil(2).max(1) {
        let x = t.x().ok_or_else(|| internal!("kernel generator has order below {ell}"))?;
        if !xs.contains(x) {
            xs.push(x.clone());
        }
        t = e.add(&t, s);
    }
    xs.sort();
    Ok(Kernel { ell, poly: Poly::from_roots(e.ctx(), &xs) })
}

/// Quotient of E by the cyclic group ⟨g⟩ of order ∏ ℓ^r (primes taken in
/// the given order), as a chain of prime-degree Vélu steps. The points in
/// `carry` are pushed through the chain.
pub fn cyclic_quotient(e: &Curve, g: &Point, order: &[(u64, u32)], carry: &[Point]) -> Result<(Curve, Vec<Point>)> {
    let mut e = e.clone();
    let mut g = g.clone();
    let mut carry = carry.to_vec();
    let mut remaining: u64 = order.iter().map(|&(l, r)| l.pow(r)).product();
    for &(ell, r) in order {
        for _ in 0..r {
            let s = e.mul((remaining / ell) as i64, &g);
            if s.is_infinity() {
                return Err(param!("kernel generator has order below the requested {remaining}"));
            }
            let phi = velu(&e, &prime_kernel(&e, &s, ell)?)?;
            g = phi.eval(&g);
            carry = carry.iter().map(|pt| phi.eval(pt)).collect();
            e = phi.codomain;
            remaining /= ell;
        }
    }
    if !g.is_infinity() {
        return Err(internal!("kernel generator survived its own quotient"));
    }
    Ok((e, carry))
}

fn secret_point(e: &Curve, basis: &(Point, Point), (m, n): (i64, i64), ell: u64, r: u32) -> Result<Point> {
    let pt = e.add(&e.mul(m, &basis.0), &e.mul(n, &basis.1));
    if !has_order(e, &pt, ell, r) {
        return Err(param!("secret ({m}, {n}) does not give a kernel of order {ell}^{r}"));
    }
    Ok(pt)
}

/// Both parties' views of one exchange plus the direct quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidhOutcome {
    pub j_alice: FieldElem,
    pub j_bob: FieldElem,
    pub j_direct: FieldElem,
    pub public_a: FieldElem,
    pub public_b: FieldElem,
}

impl SidhOutcome {
    pub fn agree(&self) -> bool {
        self.j_alice == self.j_bob && self.j_bob == self.j_direct
    }
}

pub fn sidh_exchange(prm: &SidhParams, alice: (i64, i64), bob: (i64, i64)) -> Result<(FieldElem, FieldElem)> {
    let o = sidh_run(prm, alice, bob)?;
    Ok((o.j_alice, o.j_bob))
}

/// The full protocol: each side quotients by its secret kernel and
/// publishes the image of the other side's basis; each then quotients the
/// other's public curve. Also computes E/(H_A + H_B) in one chain.
pub fn sidh_run(prm: &SidhParams, alice: (i64, i64), bob: (i64, i64)) -> Result<SidhOutcome> {
    let e = &prm.curve;
    let (la, ra, lb, rb) = (prm.ell_a, prm.r_a, prm.ell_b, prm.r_b);
    let ka = secret_point(e, &prm.basis_a, alice, la, ra)?;
    let kb = secret_point(e, &prm.basis_b, bob, lb, rb)?;

    let (ea, pub_a) = cyclic_quotient(e, &ka, &[(la, ra)], &[prm.basis_b.0.clone(), prm.basis_b.1.clone()])?;
    let (eb, pub_b) = cyclic_quotient(e, &kb, &[(lb, rb)], &[prm.basis_a.0.clone(), prm.basis_a.1.clone()])?;

    let ka2 = secret_point(&eb, &(pub_b[0].clone(), pub_b[1].clone()), alice, la, ra)?;
    let (eab, _) = cyclic_quotient(&eb, &ka2, &[(la, ra)], &[])?;
    let kb2 = secret_point(&ea, &(pub_a[0].clone(), pub_a[1].clone()), bob, lb, rb)?;
    let (eba, _) = cyclic_quotient(&ea, &kb2, &[(lb, rb)], &[])?;

    // H_A + H_B is cyclic of order ℓ_A^r_A·ℓ_B^r_B
    let (direct, _) = cyclic_quotient(e, &e.add(&ka, &kb), &[(lb, rb), (la, ra)], &[])?;
    Ok(SidhOutcome {
        j_alice: eab.j_invariant(),
        j_bob: eba.j_invariant(),
        j_direct: direct.j_invariant(),
        public_a: ea.j_invariant(),
        public_b: eb.j_invariant(),
    })
}
