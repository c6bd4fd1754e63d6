use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lattice::parse_rational;
use super::QuatLattice;
use crate::enumerate;
use crate::error::{param, Error, Result};

/// r(n) = #{v : normalization·Nm(v) = n} for 0 ≤ n ≤ N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    pub normalization: BigRational,
    pub coeffs: Vec<u64>,
}

impl ThetaSeries {
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `# normalization a/b`, a `n,r` header, then one row per coefficient.
    pub fn to_csv(&self) -> String {
        let mut s = format!("# normalization {}/{}\nn,r\n", self.normalization.numer(), self.normalization.denom());
        for (n, r) in self.coeffs.iter().enumerate() {
            let _ = writeln!(s, "{n},{r}");
        }
        s
    }

    /// Parses [`ThetaSeries::to_csv`] output. Rows must run 0, 1, 2, ...
    /// and r(0) must be 1; a missing normalization line means 1.
    pub fn from_csv(text: &str) -> Result<ThetaSeries> {
        let mut normalization = BigRational::one();
        let mut coeffs = Vec::new();
        let mut header_seen = false;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("normalization") {
                    normalization = parse_rational(v.trim())?;
                    if !normalization.is_positive() {
                        return Err(Error::Parse("normalization must be positive".into()));
                    }
                }
                continue;
            }
            if line == "n,r" && !header_seen && coeffs.is_empty() {
                header_seen = true;
                continue;
            }
            let (n, r) = line.split_once(',').ok_or_else(|| Error::Parse(format!("bad row {line:?}")))?;
            let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad index in {line:?}")))?;
            let r: u64 = r.trim().parse().map_err(|_| Error::Parse(format!("bad count in {line:?}")))?;
            if n != coeffs.len() {
                return Err(Error::Parse(format!("expected row {}, found {n}", coeffs.len())));
            }
            coeffs.push(r);
        }
        if coeffs.first() != Some(&1) {
            return Err(Error::Parse("theta series must start with r(0) = 1".into()));
        }
        Ok(ThetaSeries { normalization, coeffs })
    }
}

/// Smallest positive integer c making c·G integral with even diagonal.
fn integral_scale(l: &QuatLattice) -> BigInt {
    let mut c = BigInt::one();
    let two = BigRational::from_integer(BigInt::from(2));
    for (r, row) in l.gram().iter().enumerate() {
        for (s, x) in row.iter().enumerate() {
            c = c.lcm(x.denom());
            if r == s {
                c = c.lcm((x / &two).denom());
            }
        }
    }
    c
}

/// Every nonzero v in L with Nm(v) ≤ bound, as (coordinates, Nm(v)),
/// sorted lexicographically by coordinates.
pub fn short_vectors(l: &QuatLattice, bound: &BigRational) -> Result<Vec<(Vec<i64>, BigRational)>> {
    if !bound.is_positive() {
        return Ok(vec![]);
    }
    let c = integral_scale(l);
    let cq = BigRational::from_integer(c.clone());
    let gram = l.integral_gram(&cq)?;
    let b = (bound * &cq * BigRational::from_integer(BigInt::from(2))).floor().to_integer();
    let b = b.to_i64().ok_or_else(|| Error::Capacity("norm bound exceeds 64 bits".into()))?;
    let scale = BigRational::from_integer(c * 2);
    Ok(enumerate::short_vectors(&gram, b)?
        .into_iter()
        .map(|(x, v)| (x, BigRational::from_integer(BigInt::from(v)) / &scale))
        .collect())
}

/// Theta series of c·Nm on L to precision N. Errors when c·Nm is not
/// integral on L.
pub fn theta_series(l: &QuatLattice, normalization: &BigRational, n: usize) -> Result<ThetaSeries> {
    if !normalization.is_positive() {
        return Err(param!("theta normalization must be positive"));
    }
    let gram = l.integral_gram(normalization)?;
    let counts = enumerate::value_counts(&gram, 2 * n as i64)?;
    let coeffs = (0..=n).map(|m| counts[2 * m]).collect();
    debug_assert!(counts.iter().skip(1).step_by(2).all(Zero::is_zero));
    Ok(ThetaSeries { normalization: normalization.clone(), coeffs })
}

#[cfg(test)]
mod tests {
    use super::super::bp_inf;
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn units_of_the_standard_order() {
        let (alg, o) = bp_inf(103).unwrap();
        let sv = short_vectors(&o, &q(1)).unwrap();
        assert_eq!(sv.len(), 4);
        for w in [[1, 0, 0, 0], [-1, 0, 0, 0], [0, 1, 0, 0], [0, -1, 0, 0]] {
            assert!(sv.iter().any(|(x, _)| o.combo(x) == alg.from_ints(w)));
        }
        assert!(sv.iter().all(|(_, n)| *n == q(1)));
        let t = theta_series(&o, &q(1), 30).unwrap();
        assert_eq!(t.coeffs[0], 1);
        assert_eq!(t.coeffs[1], 4);
        assert!(theta_series(&o, &BigRational::new(BigInt::one(), BigInt::from(2)), 5).is_err());
    }

    #[test]
    fn basis_change_invariance() {
        let (alg, o) = bp_inf(103).unwrap();
        // a different basis of the same lattice: unimodular combinations
        let b = o.basis_elems();
        let alt = vec![b[0].clone(), &b[1] + &b[0], &(&b[2] + &b[1]) + &b[1], &b[3] - &b[2]];
        let o2 = QuatLattice::from_generators(&alg, &alt).unwrap();
        assert_eq!(o2, o);
        let t1 = theta_series(&o, &q(1), 60).unwrap();
        // enumerate directly in the skewed basis, bypassing the normal form
        let g: Vec<Vec<i64>> = QuatLattice::gram_of(&alt).iter().map(|r| r.iter().map(|x| x.to_integer().to_i64().unwrap()).collect()).collect();
        let counts = enumerate::value_counts(&g, 120).unwrap();
        let t2: Vec<u64> = (0..=60).map(|m| counts[2 * m]).collect();
        assert_eq!(t1.coeffs, t2);
        assert_eq!(short_vectors(&o, &q(60)).unwrap().len() as u64, t1.coeffs[1..].iter().sum::<u64>());
    }

    #[test]
    fn csv_round_trip() {
        let (_, o) = bp_inf(11).unwrap();
        let t = theta_series(&o, &q(1), 12).unwrap();
        assert_eq!(ThetaSeries::from_csv(&t.to_csv()).unwrap(), t);
        assert!(ThetaSeries::from_csv("n,r\n1,4\n").is_err());
        assert!(ThetaSeries::from_csv("0,1\n2,4\n").is_err());
        assert!(ThetaSeries::from_csv("# normalization 0/1\n0,1\n").is_err());
    }
}
