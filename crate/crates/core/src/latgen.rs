//! Certificates that a lattice is spanned by its vectors of prescribed
//! norms, and the local witness matrices for even unimodular lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::enumerate;
use crate::error::{internal, param, Result};
use crate::intmat::{det, det_i64, hnf, smith_diagonal, to_big, IMat};
use crate::quat::QuatLattice;

/// ℤⁿ with the form Q(v) = vᵀGv / divisor, divisor ∈ {1, 2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZLattice {
    gram: Vec<Vec<i64>>,
    divisor: i64,
}

impl ZLattice {
    /// Checks symmetry, positive leading minors, and integrality of Q.
    pub fn new(gram: Vec<Vec<i64>>, divisor: i64) -> Result<ZLattice> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(param!("Gram matrix must be square and nonempty"));
        }
        if !(divisor == 1 || divisor == 2) {
            return Err(param!("divisor must be 1 or 2"));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(param!("Gram matrix is not symmetric"));
                }
            }
            if gram[i][i] % divisor != 0 {
                return Err(param!("form is not integral"));
            }
        }
        for k in 1..=n {
            let minor: Vec<Vec<i64>> = gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            if !det_i64(&minor).is_positive() {
                return Err(param!("Gram matrix is not positive definite"));
            }
        }
        Ok(ZLattice { gram, divisor })
    }

    /// The order with Q = Nm, in its normal-form basis.
    pub fn from_order(o: &QuatLattice) -> Result<ZLattice> {
        ZLattice::new(o.integral_gram(&BigRational::one())?, 2)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// det of the Gram matrix of Q's bilinear form scaled by the divisor,
    /// i.e. det(G) / divisorⁿ when exact.
    pub fn det(&self) -> BigRational {
        BigRational::new(det_i64(&self.gram), BigInt::from(self.divisor).pow(self.rank() as u32))
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        let n = self.rank();
        let s: i128 = (0..n)
            .map(|i| (0..n).map(|j| self.gram[i][j] as i128 * v[i] as i128 * v[j] as i128).sum::<i128>())
            .sum();
        (s / self.divisor as i128) as i64
    }

    /// All v with Q(v) = s, sorted lexicographically.
    pub fn vectors_of_norm(&self, s: u64) -> Result<Vec<Vec<i64>>> {
        if s == 0 {
            return Ok(vec![]);
        }
        let target = s as i64 * self.divisor;
        let mut out = Vec::new();
        enumerate::for_each_short(&self.gram, target, |x, v| {
            if v == target {
                out.push(x.to_vec());
            }
        })?;
        out.sort();
        Ok(out)
    }
}

/// [ℤⁿ : span(vectors)] from the Smith form; `None` when the span has
/// lower rank.
pub fn span_index(n: usize, vectors: &[Vec<i64>]) -> Option<BigInt> {
    if vectors.is_empty() {
        return None;
    }
    let d = smith_diagonal(&to_big(vectors));
    (d.len() == n).then(|| d.iter().product())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileStep {
    pub norm: u64,
    pub vectors: usize,
    /// Index of the span of every vector with norm in S up to this one;
    /// `None` while rank-deficient.
    pub index: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub generated: bool,
    pub index_profile: Vec<ProfileStep>,
    /// A subset of the vectors whose span already has index 1 (or the
    /// final index, when not generated).
    pub witness: Vec<Vec<i64>>,
}

/// Span of the vectors of norm s ∈ S, s ≤ cap. A `false` answer at a
/// finite cap is inconclusive.
pub fn generated_by_norms(l: &ZLattice, norms: &[u64], cap: u64) -> Result<GenerationReport> {
    let mut s: Vec<u64> = norms.iter().copied().filter(|&s| s >= 1 && s <= cap).collect();
    s.sort();
    s.dedup();
    if s.is_empty() {
        return Err(param!("no norm of S lies in [1, {cap}]"));
    }
    let n = l.rank();
    let mut basis: IMat = vec![];
    let mut witness: Vec<Vec<i64>> = vec![];
    let mut profile = Vec::new();
    let done = |b: &IMat| b.len() == n && (0..n).all(|i| b[i][i].is_one());
    for &norm in &s {
        let vs = l.vectors_of_norm(norm)?;
        for v in &vs {
            if done(&basis) {
                break;
            }
            let mut rows = basis.clone();
            rows.push(v.iter().map(|&x| BigInt::from(x)).collect());
            let next = hnf(&rows);
            if next != basis {
                basis = next;
                witness.push(v.clone());
            }
        }
        let index = (basis.len() == n).then(|| det(&basis).abs().to_string());
        profile.push(ProfileStep { norm, vectors: vs.len(), index });
    }
    let generated = done(&basis);
    if generated && span_index(n, &witness) != Some(BigInt::one()) {
        return Err(internal!("witness does not re-verify"));
    }
    Ok(GenerationReport { generated, index_profile: profile, witness })
}

/// The E8 root lattice from its Cartan matrix: a chain of seven nodes
/// with the eighth attached to the third.
pub fn e8() -> Result<ZLattice> {
    let mut g = vec![vec![0i64; 8]; 8];
    for i in 0..8 {
        g[i][i] = 2;
    }
    let mut edge = |a: usize, b: usize| {
        g[a][b] = -1;
        g[b][a] = -1;
    };
    for i in 0..6 {
        edge(i, i + 1);
    }
    edge(2, 7);
    let l = ZLattice::new(g, 1)?;
    if !l.det().is_one() || l.gram.iter().enumerate().any(|(i, r)| r[i] % 2 != 0) {
        return Err(internal!("E8 Gram is not even unimodular"));
    }
    Ok(l)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub matrix: Vec<Vec<i64>>,
    pub det: String,
    pub row_norms: Vec<i64>,
    pub rows_ok: bool,
}

/// Rows of norm 2t for 2x₁x₂ + 2x₃x₄ + 2x₅x₆ + 2x₇x₈; determinant 1.
pub fn local_witness_2(t: i64) -> WitnessCheck {
    let mut m = vec![vec![0i64; 8]; 8];
    for (i, row) in m.iter_mut().enumerate().take(7) {
        if i < 6 {
            row[i] = 1;
        }
        row[6] = 1;
        row[7] = t;
    }
    m[7][0] = 1;
    m[7][1] = t;
    m[7][7] = 1;
    let norm = |r: &[i64]| 2 * (r[0] * r[1] + r[2] * r[3] + r[4] * r[5] + r[6] * r[7]);
    let row_norms: Vec<i64> = m.iter().map(|r| norm(r)).collect();
    let rows_ok = row_norms.iter().all(|&v| v == 2 * t);
    WitnessCheck { det: det_i64(&m).to_string(), matrix: m, row_norms, rows_ok }
}

/// Rows of norm x² + y² + z² + 1 for the sum of eight squares; the
/// determinant is 2z.
pub fn local_witness_p(x: i64, y: i64, z: i64) -> WitnessCheck {
    let mut m = vec![vec![0i64; 8]; 8];
    for (i, row) in m.iter_mut().enumerate().take(6) {
        row[5] = x;
        row[6] = y;
        row[7] = z;
        match i {
            0 => row[0] = 1,
            1 => row[0] = -1,
            _ => row[i - 1] = 1,
        }
    }
    for (k, row) in m.iter_mut().enumerate().skip(6) {
        row[0] = x;
        row[1] = y;
        row[2] = z;
        row[k - 1] = 1;
    }
    let row_norms: Vec<i64> = m.iter().map(|r| r.iter().map(|v| v * v).sum()).collect();
    let s = x * x + y * y + z * z + 1;
    let rows_ok = row_norms.iter().all(|&v| v == s);
    WitnessCheck { det: det_i64(&m).to_string(), matrix: m, row_norms, rows_ok }
}

/// Parses a comma-separated list of positive norms such as "2,4,6".
pub fn parse_norms(s: &str) -> Result<Vec<u64>> {
    let out: Result<Vec<u64>> = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<u64>() {
                Ok(v) if (1..=1 << 40).contains(&v) => Ok(v),
                _ => Err(crate::error::Error::Parse(format!("bad norm {t:?}"))),
            }
        })
        .collect();
    let out = out?;
    if out.is_empty() || out.len() > 64 {
        return Err(crate::error::Error::Parse("expected between 1 and 64 norms".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> ZLattice {
        ZLattice::new((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(), 1).unwrap()
    }

    /// Cofactor expansion, kept separate from the Bareiss routine.
    fn leibniz(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0] as i128;
        }
        (0..n)
            .map(|c| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &v)| v).collect()).collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] as i128 * leibniz(&minor)
            })
            .sum()
    }

    #[test]
    fn span_indices() {
        let e: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| i64::from(i == j)).collect()).collect();
        assert_eq!(span_index(4, &e), Some(BigInt::one()));
        let twice: Vec<Vec<i64>> = e.iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect();
        assert_eq!(span_index(4, &twice), Some(BigInt::from(16)));
        let doubled: Vec<Vec<i64>> = e.iter().chain(e.iter()).cloned().collect();
        assert_eq!(span_index(4, &doubled), Some(BigInt::one()));
        assert_eq!(span_index(4, &e[..3]), None);
    }

    #[test]
    fn vector_counts() {
        let z4 = identity(4);
        assert_eq!(z4.vectors_of_norm(3).unwrap().len(), 32);
        assert!(z4.vectors_of_norm(0).unwrap().is_empty());
        let e = e8().unwrap();
        assert_eq!(e.vectors_of_norm(2).unwrap().len(), 240);
        assert!(e.vectors_of_norm(1).unwrap().is_empty());
        // θ_E8 = 1 + 240 Σ σ₃(m) q^m
        assert_eq!(e.vectors_of_norm(4).unwrap().len(), 240 * 9);
    }

    #[test]
    fn generation() {
        let r = generated_by_norms(&identity(4), &[3], 3).unwrap();
        assert!(r.generated);
        assert_eq!(span_index(4, &r.witness), Some(BigInt::one()));
        let e = e8().unwrap();
        for s in [2, 4, 6, 8, 10] {
            let r = generated_by_norms(&e, &[s], s).unwrap();
            assert!(r.generated, "s = {s}");
            assert!(r.witness.iter().all(|v| e.norm(v) == s as i64));
        }
        // the norm-2 vectors of ℤ⁴ span D4, of index 2
        let r = generated_by_norms(&identity(4), &[2], 2).unwrap();
        assert!(!r.generated);
        assert_eq!(r.index_profile[0].index.as_deref(), Some("2"));
    }

    #[test]
    fn witness_matrices() {
        for t in [-5, 0, 1, 7] {
            let w = local_witness_2(t);
            assert_eq!(w.det, "1");
            assert_eq!(leibniz(&w.matrix), 1);
            assert!(w.rows_ok);
        }
        assert_eq!(local_witness_p(0, 0, 1).det, "2");
        assert_eq!(local_witness_p(1, 2, 3).det, "6");
        assert_eq!(local_witness_p(0, 0, 0).det, "0");
        let w = local_witness_p(4, -3, 5);
        assert_eq!(leibniz(&w.matrix), 10);
        assert!(w.rows_ok);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ZLattice::new(vec![vec![1, 2], vec![2, 1]], 1).is_err());
        assert!(ZLattice::new(vec![vec![1, 0], vec![1, 1]], 1).is_err());
        assert!(ZLattice::new(vec![vec![1]], 2).is_err());
        assert!(parse_norms("2,,4").is_err());
        assert_eq!(parse_norms(" 2, 4").unwrap(), vec![2, 4]);
    }
}
