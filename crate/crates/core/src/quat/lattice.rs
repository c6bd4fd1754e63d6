use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Quat, QuatAlg};
use crate::error::{internal, param, Error, Result};
use crate::intmat::{clear_denominators, det, hnf, q_from_int, q_inverse, q_transpose, IMat, QMat};

/// A full-rank lattice in B: rows of `basis`/`den` in 1, i, j, k
/// coordinates. The integer rows are in Hermite normal form and
/// gcd(entries, den) = 1, so equal lattices compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatLattice {
    alg: QuatAlg,
    basis: IMat,
    den: BigInt,
    /// G[r][s] = Tr(v_r v̄_s).
    gram: QMat,
}

impl QuatLattice {
    pub fn from_generators(alg: &QuatAlg, gens: &[Quat]) -> Result<QuatLattice> {
        if gens.is_empty() {
            return Err(param!("a lattice needs generators"));
        }
        let rows: QMat = gens.iter().map(|g| g.c.to_vec()).collect();
        let (m, d) = clear_denominators(&rows);
        Self::from_integer_rows(alg, &m, &d)
    }

    /// The lattice spanned by rows/den.
    pub fn from_integer_rows(alg: &QuatAlg, rows: &[Vec<BigInt>], den: &BigInt) -> Result<QuatLattice> {
        if den.is_zero() || rows.iter().any(|r| r.len() != 4) {
            return Err(param!("lattice rows must have 4 entries and a nonzero denominator"));
        }
        let mut basis = hnf(rows);
        if basis.len() != 4 {
            return Err(param!("generators span rank {} instead of 4", basis.len()));
        }
        let mut den = den.abs();
        let mut g = den.clone();
        for r in &basis {
            for x in r {
                g = g.gcd(x);
            }
        }
        if !g.is_one() {
            for r in basis.iter_mut() {
                for x in r.iter_mut() {
                    *x = &*x / &g;
                }
            }
            den = &den / &g;
        }
        let elems: Vec<Quat> = basis.iter().map(|r| alg.from_scaled(r, &den)).collect();
        let gram = Self::gram_of(&elems);
        Ok(QuatLattice { alg: *alg, basis, den, gram })
    }

    /// Tr(x_r x̄_s) for a list of elements.
    pub fn gram_of(elems: &[Quat]) -> QMat {
        elems.iter().map(|a| elems.iter().map(|b| (a * &b.conj()).trace()).collect()).collect()
    }

    pub fn alg(&self) -> &QuatAlg {
        &self.alg
    }

    pub fn rows(&self) -> &IMat {
        &self.basis
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn basis_elems(&self) -> Vec<Quat> {
        self.basis.iter().map(|r| self.alg.from_scaled(r, &self.den)).collect()
    }

    pub fn gram(&self) -> &QMat {
        &self.gram
    }

    pub fn gram_det(&self) -> BigRational {
        let (m, d) = clear_denominators(&self.gram);
        BigRational::new(det(&m), d.pow(4))
    }

    /// Rational basis matrix.
    fn qbasis(&self) -> QMat {
        self.basis.iter().map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect()).collect()
    }

    /// The element Σ x_r v_r.
    pub fn combo(&self, x: &[i64]) -> Quat {
        let row: Vec<BigInt> = (0..4)
            .map(|s| (0..4).fold(BigInt::zero(), |acc, r| acc + BigInt::from(x[r]) * &self.basis[r][s]))
            .collect();
        self.alg.from_scaled(&row, &self.den)
    }

    /// Coordinates of `a` in this basis, when `a` lies in the lattice.
    pub fn coords(&self, a: &Quat) -> Option<Vec<BigInt>> {
        let inv = q_inverse(&self.qbasis())?;
        let mut out = Vec::with_capacity(4);
        for s in 0..4 {
            let v = (0..4).fold(BigRational::zero(), |acc, r| acc + &a.c[r] * &inv[r][s]);
            if !v.is_integer() {
                return None;
            }
            out.push(v.to_integer());
        }
        Some(out)
    }

    pub fn contains(&self, a: &Quat) -> bool {
        self.coords(a).is_some()
    }

    pub fn contains_lattice(&self, other: &QuatLattice) -> bool {
        other.basis_elems().iter().all(|b| self.contains(b))
    }

    /// The lattice spanned by all products of basis elements.
    pub fn mul(&self, other: &QuatLattice) -> Result<QuatLattice> {
        let a = self.basis_elems();
        let b = other.basis_elems();
        let prods: Vec<Quat> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Self::from_generators(&self.alg, &prods)
    }

    pub fn conj(&self) -> QuatLattice {
        let c: Vec<Quat> = self.basis_elems().iter().map(Quat::conj).collect();
        Self::from_generators(&self.alg, &c).expect("conjugation keeps full rank")
    }

    pub fn left_mul(&self, a: &Quat) -> Result<QuatLattice> {
        let c: Vec<Quat> = self.basis_elems().iter().map(|b| a * b).collect();
        Self::from_generators(&self.alg, &c)
    }

    pub fn right_mul(&self, a: &Quat) -> Result<QuatLattice> {
        let c: Vec<Quat> = self.basis_elems().iter().map(|b| b * a).collect();
        Self::from_generators(&self.alg, &c)
    }

    pub fn scale(&self, s: &BigRational) -> Result<QuatLattice> {
        let c: Vec<Quat> = self.basis_elems().iter().map(|b| b.scale(s)).collect();
        Self::from_generators(&self.alg, &c)
    }

    pub fn sum(&self, other: &QuatLattice) -> QuatLattice {
        let mut g = self.basis_elems();
        g.extend(other.basis_elems());
        Self::from_generators(&self.alg, &g).expect("sum of full-rank lattices has full rank")
    }

    /// The coordinate dual {y : ⟨x, y⟩ ∈ ℤ for x in L} for the standard
    /// dot product on 1, i, j, k coordinates.
    fn dual(&self) -> QuatLattice {
        let inv = q_inverse(&self.qbasis()).expect("basis has full rank");
        let d = q_transpose(&inv);
        let gens: Vec<Quat> = d.into_iter().map(|r| self.alg.elem([r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()])).collect();
        Self::from_generators(&self.alg, &gens).expect("dual has full rank")
    }

    pub fn intersect(&self, other: &QuatLattice) -> QuatLattice {
        self.dual().sum(&other.dual()).dual()
    }

    /// Reduced norm of the lattice: the positive generator of the
    /// fractional ideal spanned by all Nm(x), x in L.
    pub fn norm(&self) -> BigRational {
        let mut vals = Vec::new();
        for r in 0..4 {
            vals.push(&self.gram[r][r] / BigRational::from_integer(BigInt::from(2)));
            for s in r + 1..4 {
                vals.push(self.gram[r][s].clone());
            }
        }
        rational_gcd(&vals)
    }

    /// [other : self] for self ⊆ other, as a rational in general.
    pub fn index_in(&self, other: &QuatLattice) -> BigRational {
        let a = BigRational::new(det(&self.basis).abs(), self.den.pow(4));
        let b = BigRational::new(det(&other.basis).abs(), other.den.pow(4));
        a / b
    }

    /// Whether the lattice contains 1 and is closed under multiplication.
    pub fn is_order(&self) -> bool {
        if !self.contains(&self.alg.one()) {
            return false;
        }
        let b = self.basis_elems();
        b.iter().all(|x| b.iter().all(|y| self.contains(&(x * y))))
    }

    /// The integer matrix c·G; its half is the Gram matrix of the form
    /// c·Nm. Errors unless c·Nm is integral on the lattice.
    pub fn integral_gram(&self, c: &BigRational) -> Result<Vec<Vec<i64>>> {
        let mut out = vec![vec![0i64; 4]; 4];
        for r in 0..4 {
            for s in 0..4 {
                let v = &self.gram[r][s] * c;
                if !v.is_integer() || (r == s && v.to_integer().is_odd()) {
                    return Err(param!("the form {c}·Nm is not integral on this lattice"));
                }
                out[r][s] = v
                    .to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::Capacity("Gram entry exceeds 64 bits".into()))?;
            }
        }
        Ok(out)
    }

    /// Matrix of x ↦ x·a in this basis; errors unless L·a ⊆ L.
    pub fn right_action(&self, a: &Quat) -> Result<IMat> {
        self.basis_elems()
            .iter()
            .map(|b| self.coords(&(b * a)).ok_or_else(|| internal!("lattice is not stable under right multiplication by {a}")))
            .collect()
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            p: self.alg.p,
            basis: self
                .basis
                .iter()
                .map(|r| r.iter().map(|x| fmt_rational(&BigRational::new(x.clone(), self.den.clone()))).collect())
                .collect(),
        }
    }

    /// Parses a 4×4 row-major matrix of "num/den" strings over B_{p,∞}.
    pub fn from_json_str(s: &str) -> Result<QuatLattice> {
        let raw: LatticeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let (alg, _) = super::bp_inf(raw.p).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.basis.len() != 4 || raw.basis.iter().any(|r| r.len() != 4) {
            return Err(Error::Parse("basis must be 4×4".into()));
        }
        let rows: QMat = raw
            .basis
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let (m, d) = clear_denominators(&rows);
        Self::from_integer_rows(&alg, &m, &d).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn rational_basis(&self) -> QMat {
        q_from_int(&self.basis).into_iter().map(|r| r.into_iter().map(|x| x / BigRational::from_integer(self.den.clone())).collect()).collect()
    }
}

/// Serialized lattice: rows in 1, i, j, k coordinates.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct LatticeJson {
    pub p: u64,
    pub basis: Vec<Vec<String>>,
}

pub(crate) fn rational_gcd(vals: &[BigRational]) -> BigRational {
    let mut d = BigInt::one();
    for v in vals {
        d = d.lcm(v.denom());
    }
    let mut g = BigInt::zero();
    for v in vals {
        g = g.gcd(&(v * BigRational::from_integer(d.clone())).to_integer());
    }
    BigRational::new(g, d)
}

fn fmt_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// "num/den" or a bare integer, at most 200 digits in each part.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let parse = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        // the cap is per component so that n/d output always parses back
        if digits.is_empty() || digits.len() > 200 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    let (n, d) = (parse(n)?, parse(d)?);
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::super::bp_inf;
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn order_basics() {
        let (alg, o) = bp_inf(103).unwrap();
        assert!(o.is_order());
        assert_eq!(o.norm(), q(1));
        assert_eq!(o.mul(&o).unwrap(), o);
        assert_eq!(o.conj(), o);
        let z4 = QuatLattice::from_generators(&alg, &[alg.one(), alg.from_ints([0, 1, 0, 0]), alg.from_ints([0, 0, 1, 0]), alg.from_ints([0, 0, 0, 1])]).unwrap();
        assert!(o.contains_lattice(&z4));
        assert_eq!(z4.index_in(&o), q(4));
        assert_eq!(o.intersect(&z4), z4);
        assert_eq!(o.sum(&z4), o);
        let two = o.scale(&q(2)).unwrap();
        assert_eq!(two.index_in(&o), q(16));
        assert_eq!(two.norm(), q(4));
    }

    #[test]
    fn json_round_trip() {
        let (_, o) = bp_inf(103).unwrap();
        let text = serde_json::to_string(&o.to_json()).unwrap();
        assert_eq!(QuatLattice::from_json_str(&text).unwrap(), o);
        assert!(QuatLattice::from_json_str(r#"{"p":103,"basis":[["1/0","0","0","0"]]}"#).is_err());
        assert!(QuatLattice::from_json_str(r#"{"p":101,"basis":[]}"#).is_err());
        assert_eq!(parse_rational("-6/4").unwrap(), BigRational::new(BigInt::from(-3), BigInt::from(2)));
        assert!(parse_rational("1/-").is_err());
    }
}
