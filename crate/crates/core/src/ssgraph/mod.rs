//! Supersingular j-invariants over F_{p^2} and the isogeny graphs 𝒢(p, ℓ).

mod autos;
mod graph;
mod io;
mod phi2;
mod sspoly;

pub use autos::{essential_automorphisms, AutReport};
pub use graph::{build_graph, frobenius_involution, spectral_report, spine, SpectralReport, SsGraph};
pub use io::{GraphJson, VertexJson};
pub use phi2::{phi2_eval, phi2_neighbors};
pub use sspoly::{parse_factored, ss_polynomial, SsPolynomial};

use std::collections::{BTreeSet, VecDeque};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::arith::legendre;
use crate::curve::{canonical_model, curve_from_j, hasse_polynomial, lambda_to_j, velu, Curve, Kernel};
use crate::error::{internal, param, Result};
use crate::ff::{Ctx, FieldCtx, FieldElem};

/// h = ⌊p/12⌋ + {0, 1, 1, 2} for p ≡ {1, 5, 7, 11} mod 12, and 1 for p ≤ 3.
pub fn class_number(p: u64) -> u64 {
    if p <= 3 {
        return 1;
    }
    p / 12
        + match p % 12 {
            1 => 0,
            5 | 7 => 1,
            11 => 2,
            _ => 0,
        }
}

/// Integer j-invariants of the class-number-one orders of discriminant -D.
const CM_TABLE: [(i64, i128); 6] = [
    (7, -3375),
    (11, -32768),
    (19, -884736),
    (43, -884736000),
    (67, -147197952000),
    (163, -262537412640768000),
];

fn mod_p(n: i128, p: u64) -> u64 {
    n.rem_euclid(p as i128) as u64
}

/// A supersingular j-invariant: 0 for p ≡ 2 mod 3, 1728 for p ≡ 3 mod 4,
/// otherwise the reduction of a CM j-invariant for a field in which p is
/// inert, falling back to a root of the Hasse polynomial.
pub fn seed_ss_j(p: u64) -> Result<FieldElem> {
    let ctx = FieldCtx::fp2(p)?;
    if p < 5 {
        return Err(param!("p must be at least 5"));
    }
    if p % 3 == 2 {
        return Ok(FieldElem::zero(&ctx));
    }
    if p % 4 == 3 {
        return Ok(FieldElem::from_u64(&ctx, 1728));
    }
    for (d, j) in CM_TABLE {
        if legendre(-d, p) == -1 {
            return Ok(FieldElem::from_u64(&ctx, mod_p(j, p)));
        }
    }
    hasse_roots_js(&ctx)?
        .into_iter()
        .next()
        .ok_or_else(|| internal!("Hasse polynomial has no root in F_{p}^2"))
}

/// 2w_j = #Aut(E(j)) for p > 3.
pub fn aut_weight(j: &FieldElem) -> u32 {
    if j.is_zero() {
        6
    } else if *j == FieldElem::from_u64(j.ctx(), 1728) {
        4
    } else {
        2
    }
}

/// {j(λ) : H_p(λ) = 0}, sorted.
fn hasse_roots_js(ctx: &Ctx) -> Result<Vec<FieldElem>> {
    let mut js = BTreeSet::new();
    for lambda in hasse_polynomial(ctx).roots() {
        let j = lambda_to_j(&lambda).ok_or_else(|| internal!("Hasse root λ ∈ {{0, 1}}"))?;
        js.insert(j);
    }
    Ok(js.into_iter().collect())
}

/// j-invariants 2-isogenous to j, with multiplicity.
pub(crate) fn two_isogenous_js(j: &FieldElem) -> Result<Vec<FieldElem>> {
    let e = curve_from_j(j)?;
    let roots = e.rhs_poly().roots();
    if roots.len() != 3 {
        return Err(internal!("2-torsion of the model for j = {j} is not rational"));
    }
    roots
        .iter()
        .map(|x0| Ok(velu(&e, &Kernel::two_torsion(x0))?.codomain.j_invariant()))
        .collect()
}

/// The supersingular locus in characteristic p, sorted canonically, with
/// weights and (lazily) canonical models.
#[derive(Debug)]
pub struct SsSet {
    pub p: u64,
    pub ctx: Ctx,
    pub js: Vec<FieldElem>,
    pub w2: Vec<u32>,
    models: OnceLock<Vec<Curve>>,
}

impl SsSet {
    pub fn new(p: u64) -> Result<Self> {
        let js = enumerate_ss(p)?;
        let ctx = js[0].ctx().clone();
        let w2 = js.iter().map(aut_weight).collect();
        Ok(SsSet { p, ctx, js, w2, models: OnceLock::new() })
    }

    pub fn len(&self) -> usize {
        self.js.len()
    }

    pub fn is_empty(&self) -> bool {
        self.js.is_empty()
    }

    pub fn index_of(&self, j: &FieldElem) -> Option<usize> {
        self.js.binary_search(j).ok()
    }

    /// Canonical models with (p + 1)^2 points, one per vertex.
    pub fn models(&self) -> Result<&[Curve]> {
        if self.models.get().is_none() {
            let computed = self.js.par_iter().map(canonical_model).collect::<Result<Vec<_>>>()?;
            let _ = self.models.set(computed);
        }
        Ok(self.models.get().expect("initialized above"))
    }

    pub fn graph(&self, ell: u64) -> Result<SsGraph> {
        graph::build_from_set(self, ell)
    }
}

/// All supersingular j-invariants in F_{p^2}, sorted canonically.
///
/// Found by breadth-first search under 2-isogenies from [`seed_ss_j`], and
/// independently as j(λ) over the roots λ of the Hasse polynomial. Both sets
/// and the class number must agree.
pub fn enumerate_ss(p: u64) -> Result<Vec<FieldElem>> {
    let seed = seed_ss_j(p)?;
    let ctx = seed.ctx().clone();
    let mut seen: BTreeSet<FieldElem> = BTreeSet::new();
    let mut queue = VecDeque::from([seed.clone()]);
    seen.insert(seed);
    while let Some(j) = queue.pop_front() {
        for n in two_isogenous_js(&j)? {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    let by_bfs: Vec<FieldElem> = seen.into_iter().collect();
    let by_hasse = hasse_roots_js(&ctx)?;
    if by_bfs != by_hasse {
        return Err(internal!(
            "p = {p}: 2-isogeny search found {} j-invariants, Hasse roots give {}",
            by_bfs.len(),
            by_hasse.len()
        ));
    }
    let h = class_number(p);
    if by_bfs.len() as u64 != h {
        return Err(internal!("p = {p}: found {} supersingular j, class number formula says {h}", by_bfs.len()));
    }
    Ok(by_bfs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::is_supersingular;

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(101), 9);
        assert_eq!(class_number(11), 2);
        assert_eq!(class_number(37), 3);
        assert_eq!(class_number(103), 9);
        assert_eq!(class_number(2), 1);
        assert_eq!(class_number(3), 1);
    }

    #[test]
    fn seeds() {
        assert_eq!(seed_ss_j(103).unwrap().to_string(), "80");
        assert_eq!(seed_ss_j(5).unwrap().to_string(), "0");
        let j = seed_ss_j(13).unwrap();
        assert_eq!(j.to_string(), "5");
        assert!(is_supersingular(&curve_from_j(&j).unwrap()).unwrap());
        for p in crate::arith::primes_in(5, 400).into_iter().filter(|p| p % 12 == 1) {
            let j = seed_ss_j(p).unwrap();
            assert!(is_supersingular(&curve_from_j(&j).unwrap()).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn enumerations() {
        let js: Vec<String> = enumerate_ss(47).unwrap().iter().map(|j| j.to_string()).collect();
        let mut expect: Vec<String> = [0u64, 1728 % 47, 9, 10, 44].iter().map(|v| v.to_string()).collect();
        expect.sort_by_key(|s| s.parse::<u64>().unwrap());
        assert_eq!(js, expect);
        let s101 = enumerate_ss(101).unwrap();
        assert_eq!(s101.len(), 9);
        let f = s101[0].ctx().clone();
        let quad: Vec<_> = s101.iter().filter(|j| j.coeffs()[1] != 0).collect();
        assert_eq!(quad.len(), 2);
        for a in quad {
            // roots of x^2 + 27x + 54
            assert!((a.square() + a.scale(27) + FieldElem::from_u64(&f, 54)).is_zero());
        }
    }

    #[test]
    fn models_are_cached_and_canonical() {
        let s = SsSet::new(59).unwrap();
        let m = s.models().unwrap();
        assert_eq!(m.len(), s.len());
        for (e, j) in m.iter().zip(&s.js) {
            assert_eq!(e.j_invariant(), *j);
        }
        assert!(std::ptr::eq(m, s.models().unwrap()));
    }
}
