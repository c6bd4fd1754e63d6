use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::{class_number, SsSet};
use crate::arith::is_prime;
use crate::curve::{subgroups_of_order, velu};
use crate::error::{internal, param, Result};
use crate::ff::FieldElem;

/// The directed multigraph 𝒢(p, ℓ). `adj[i][k]` counts the subgroups of
/// order ℓ of E(j_i) with quotient isomorphic to E(j_k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsGraph {
    pub p: u64,
    pub ell: u64,
    pub vertices: Vec<FieldElem>,
    /// 2w_j = #Aut(E(j)).
    pub w2: Vec<u32>,
    pub adj: Vec<Vec<u32>>,
}

pub fn build_graph(p: u64, ell: u64) -> Result<SsGraph> {
    SsSet::new(p)?.graph(ell)
}

pub(crate) fn build_from_set(set: &SsSet, ell: u64) -> Result<SsGraph> {
    let p = set.p;
    if !is_prime(ell) || ell == p || ell > 13 {
        return Err(param!("ℓ = {ell} must be a prime ≤ 13 different from p"));
    }
    let models = set.models()?;
    let rows: Result<Vec<Vec<u32>>> = models
        .par_iter()
        .map(|e| {
            let mut row = vec![0u32; set.len()];
            for kernel in subgroups_of_order(e, ell)? {
                let j = velu(e, &kernel)?.codomain.j_invariant();
                let k = set.index_of(&j).ok_or_else(|| internal!("codomain j = {j} is not a known vertex"))?;
                row[k] += 1;
            }
            Ok(row)
        })
        .collect();
    let g = SsGraph { p, ell, vertices: set.js.clone(), w2: set.w2.clone(), adj: rows? };
    g.validate()?;
    Ok(g)
}

impl SsGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, j: &FieldElem) -> Option<usize> {
        self.vertices.binary_search(j).ok()
    }

    /// Number of loops, i.e. the trace of the adjacency matrix.
    pub fn loop_count(&self) -> u64 {
        (0..self.len()).map(|i| self.adj[i][i] as u64).sum()
    }

    /// Row sums ℓ + 1, weighted symmetry, weights in {2, 4, 6}, vertex count
    /// equal to the class number, and connectedness.
    pub fn validate(&self) -> Result<()> {
        let h = self.len();
        if h as u64 != class_number(self.p) {
            return Err(internal!("{h} vertices but class number {}", class_number(self.p)));
        }
        if self.w2.iter().any(|w| ![2, 4, 6].contains(w)) {
            return Err(internal!("automorphism weight outside {{2, 4, 6}}"));
        }
        for i in 0..h {
            let s: u64 = self.adj[i].iter().map(|&a| a as u64).sum();
            if s != self.ell + 1 {
                return Err(internal!("row {i} sums to {s}, expected {}", self.ell + 1));
            }
            for k in 0..h {
                if self.adj[i][k] * self.w2[k] != self.adj[k][i] * self.w2[i] {
                    return Err(internal!("weighted symmetry fails at ({i}, {k})"));
                }
            }
        }
        let mut seen = vec![false; h];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for k in 0..h {
                if self.adj[i][k] > 0 && !seen[k] {
                    seen[k] = true;
                    stack.push(k);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(internal!("graph is not connected"));
        }
        Ok(())
    }
}

/// Indices of vertices with j in F_p.
pub fn spine(g: &SsGraph) -> Vec<usize> {
    (0..g.len()).filter(|&i| g.vertices[i].frobenius() == g.vertices[i]).collect()
}

/// π(i) = index of j_i^p; checked to be an involutive graph automorphism.
pub fn frobenius_involution(g: &SsGraph) -> Result<Vec<usize>> {
    let pi = g
        .vertices
        .iter()
        .map(|j| g.index_of(&j.frobenius()).ok_or_else(|| internal!("j^p missing for j = {j}")))
        .collect::<Result<Vec<usize>>>()?;
    for i in 0..g.len() {
        if pi[pi[i]] != i {
            return Err(internal!("Frobenius is not an involution at {i}"));
        }
        for k in 0..g.len() {
            if g.adj[pi[i]][pi[k]] != g.adj[i][k] {
                return Err(internal!("Frobenius does not preserve the edge ({i}, {k})"));
            }
        }
    }
    Ok(pi)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    pub trivial_mult: usize,
    pub max_nontrivial_abs: f64,
    pub has_minus_trivial: bool,
    /// 2√ℓ.
    pub ramanujan_bound: f64,
}

impl SpectralReport {
    pub fn is_ramanujan(&self) -> bool {
        self.max_nontrivial_abs <= self.ramanujan_bound + 1e-9
    }
}

/// Spectrum of D^{-1/2} A D^{1/2} with D = diag(2w), which is symmetric by
/// the weighted symmetry of A.
pub fn spectral_report(g: &SsGraph) -> Result<SpectralReport> {
    let h = g.len();
    let m = DMatrix::from_fn(h, h, |i, k| {
        g.adj[i][k] as f64 * (g.w2[k] as f64).sqrt() / (g.w2[i] as f64).sqrt()
    });
    let asym = (&m - m.transpose()).abs().max();
    if asym > 1e-12 {
        return Err(internal!("symmetrized adjacency is off by {asym}"));
    }
    let eig = SymmetricEigen::new(m);
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let top = (g.ell + 1) as f64;
    let trivial_mult = eigenvalues.iter().filter(|&&l| (l - top).abs() < 1e-9).count();
    let has_minus_trivial = eigenvalues.iter().any(|&l| (l + top).abs() < 1e-9);
    let mut rest: Vec<f64> = eigenvalues.clone();
    // drop one copy of the trivial eigenvalue
    if let Some(pos) = rest.iter().position(|&l| (l - top).abs() < 1e-9) {
        rest.remove(pos);
    }
    let max_nontrivial_abs = rest.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    Ok(SpectralReport {
        eigenvalues,
        trivial_mult,
        max_nontrivial_abs,
        has_minus_trivial,
        ramanujan_bound: 2.0 * (g.ell as f64).sqrt(),
    })
}
