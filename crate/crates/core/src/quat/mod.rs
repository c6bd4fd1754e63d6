//! The quaternion side of the Deuring correspondence: B_{p,∞}, its standard
//! maximal order for p ≡ 3 mod 4, right ideal classes, theta series and
//! Brandt matrices.

mod brandt;
mod ideals;
mod lattice;
mod theta;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::is_prime;
use crate::error::{param, Result};

pub use brandt::{
    brandt, brandt_identities, eisenstein_coefficients, find_permutation, min_nonint_endo, theta_rigidity, BrandtReport,
    BrandtSet, Check, IntMatrix, RigidityReport, MAX_NMAX,
};
pub use ideals::{
    class_set, hom_lattice, ideal_equiv, left_order, reduce_ideal, right_ideals_of_norm, sub_ideals, two_sided_p,
    ClassSet,
};
pub use lattice::parse_rational;
pub use lattice::{LatticeJson, QuatLattice};
pub use theta::{short_vectors, theta_series, ThetaSeries};

/// The algebra (α, β / ℚ): i² = α, j² = β, k = ij = −ji.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuatAlg {
    pub p: u64,
    pub alpha: i64,
    pub beta: i64,
}

/// x0 + x1·i + x2·j + x3·k with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quat {
    pub alg: QuatAlg,
    pub c: [BigRational; 4],
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuatAlg {
    pub fn elem(&self, c: [BigRational; 4]) -> Quat {
        Quat { alg: *self, c }
    }

    pub fn from_ints(&self, c: [i64; 4]) -> Quat {
        self.elem(c.map(q))
    }

    /// x/d for integer coordinates x.
    pub fn from_scaled(&self, x: &[BigInt], d: &BigInt) -> Quat {
        self.elem(std::array::from_fn(|r| BigRational::new(x[r].clone(), d.clone())))
    }

    pub fn zero(&self) -> Quat {
        self.from_ints([0; 4])
    }

    pub fn one(&self) -> Quat {
        self.from_ints([1, 0, 0, 0])
    }
}

impl Quat {
    pub fn conj(&self) -> Quat {
        let [a, b, c, d] = &self.c;
        self.alg.elem([a.clone(), -b, -c, -d])
    }

    /// Reduced norm x·x̄ = a² − αb² − βc² + αβd².
    pub fn norm(&self) -> BigRational {
        let (al, be) = (q(self.alg.alpha), q(self.alg.beta));
        let [a, b, c, d] = &self.c;
        a * a - &al * b * b - &be * c * c + &al * &be * d * d
    }

    /// Reduced trace x + x̄ = 2a.
    pub fn trace(&self) -> BigRational {
        &self.c[0] * q(2)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn inverse(&self) -> Option<Quat> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let inv = n.recip();
        Some(self.conj().scale(&inv))
    }

    pub fn scale(&self, s: &BigRational) -> Quat {
        self.alg.elem(std::array::from_fn(|r| &self.c[r] * s))
    }

    pub fn is_integral_scalar(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero) && self.c[0].is_integer()
    }
}

impl Mul for &Quat {
    type Output = Quat;
    fn mul(self, o: &Quat) -> Quat {
        debug_assert_eq!(self.alg, o.alg);
        let (al, be) = (q(self.alg.alpha), q(self.alg.beta));
        let [a1, b1, c1, d1] = &self.c;
        let [a2, b2, c2, d2] = &o.c;
        let ab = &al * &be;
        self.alg.elem([
            a1 * a2 + &al * b1 * b2 + &be * c1 * c2 - &ab * d1 * d2,
            a1 * b2 + b1 * a2 - &be * c1 * d2 + &be * d1 * c2,
            a1 * c2 + c1 * a2 + &al * b1 * d2 - &al * d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2,
        ])
    }
}

impl Add for &Quat {
    type Output = Quat;
    fn add(self, o: &Quat) -> Quat {
        self.alg.elem(std::array::from_fn(|r| &self.c[r] + &o.c[r]))
    }
}

impl Sub for &Quat {
    type Output = Quat;
    fn sub(self, o: &Quat) -> Quat {
        self.alg.elem(std::array::from_fn(|r| &self.c[r] - &o.c[r]))
    }
}

impl Neg for &Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        self.alg.elem(std::array::from_fn(|r| -&self.c[r]))
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut first = true;
        for (c, n) in self.c.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if n.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{n}")?;
            } else {
                write!(f, "({c}){n}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// B_{p,∞} = (−1, −p) for p ≡ 3 mod 4 with the maximal order
/// ℤ + ℤi + ℤ(i+j)/2 + ℤ(1+k)/2.
pub fn bp_inf(p: u64) -> Result<(QuatAlg, QuatLattice)> {
    if !is_prime(p) || p % 4 != 3 {
        return Err(param!("the quaternion side needs a prime p ≡ 3 mod 4, got {p}"));
    }
    let alg = QuatAlg { p, alpha: -1, beta: -(p as i64) };
    let h = BigRational::new(BigInt::one(), BigInt::from(2));
    let z = BigRational::zero();
    let gens = [
        alg.one(),
        alg.from_ints([0, 1, 0, 0]),
        alg.elem([z.clone(), h.clone(), h.clone(), z.clone()]),
        alg.elem([h.clone(), z.clone(), z, h]),
    ];
    let order = QuatLattice::from_generators(&alg, &gens)?;
    Ok((alg, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_elem(alg: &QuatAlg, rng: &mut ChaCha8Rng) -> Quat {
        alg.elem(std::array::from_fn(|_| BigRational::new(BigInt::from(rng.gen_range(-20..=20)), BigInt::from(rng.gen_range(1..=4)))))
    }

    #[test]
    fn order_gram_matches_closed_form() {
        let (_, o) = bp_inf(103).unwrap();
        let want = [[2, 0, 0, 1], [0, 2, 1, 0], [0, 1, 52, 0], [1, 0, 0, 52]];
        // the HNF basis differs from the textbook one, so compare invariants
        assert_eq!(o.gram_det(), q(103 * 103));
        let std = QuatLattice::gram_of(&bp_std_basis(103));
        for r in 0..4 {
            for s in 0..4 {
                assert_eq!(std[r][s], q(want[r][s]));
            }
        }
        assert!(bp_inf(101).is_err());
        assert!(bp_inf(7).is_ok());
    }

    fn bp_std_basis(p: u64) -> Vec<Quat> {
        let alg = QuatAlg { p, alpha: -1, beta: -(p as i64) };
        let h = |x: i64| BigRational::new(BigInt::from(x), BigInt::from(2));
        vec![
            alg.one(),
            alg.from_ints([0, 1, 0, 0]),
            alg.elem([h(0), h(1), h(1), h(0)]),
            alg.elem([h(1), h(0), h(0), h(1)]),
        ]
    }

    #[test]
    fn norm_form_and_identities() {
        let (alg, _) = bp_inf(103).unwrap();
        let x = alg.from_ints([1, 2, 3, 4]);
        assert_eq!(x.norm(), q(1 + 4 + 103 * 9 + 103 * 16));
        assert_eq!(alg.from_ints([0, 1, 0, 0]).norm(), q(1));
        assert_eq!(alg.from_ints([0, 0, 1, 0]).norm(), q(103));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = random_elem(&alg, &mut rng);
            let b = random_elem(&alg, &mut rng);
            assert_eq!((&a * &b).norm(), a.norm() * b.norm());
            assert_eq!((&a * &b).conj(), &b.conj() * &a.conj());
            assert_eq!(&a + &a.conj(), alg.one().scale(&a.trace()));
            assert_eq!(&a * &a.conj(), alg.one().scale(&a.norm()));
        }
        let (i, j) = (alg.from_ints([0, 1, 0, 0]), alg.from_ints([0, 0, 1, 0]));
        assert_eq!(&i * &j, alg.from_ints([0, 0, 0, 1]));
        assert_eq!(&j * &i, alg.from_ints([0, 0, 0, -1]));
        assert_eq!(&j * &j, alg.from_ints([-103, 0, 0, 0]));
    }
}
