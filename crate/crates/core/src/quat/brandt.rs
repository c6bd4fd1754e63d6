use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use super::{class_set, theta_series, ClassSet, QuatLattice};
use crate::arith::is_square;
use crate::error::{internal, param, Error, Result};
use crate::ssgraph::{build_graph, enumerate_ss};

pub type IntMatrix = Vec<Vec<u64>>;

/// Brandt matrices B(1..=n_max) of one class set, with the Hom thetas
/// they come from.
#[derive(Clone, Debug)]
pub struct BrandtSet {
    pub classes: ClassSet,
    pub n_max: usize,
    /// theta[i][j][n] = r_ij(n) for the Hom lattice of (I_i, I_j).
    pub theta: Vec<Vec<Vec<u64>>>,
    mats: Vec<IntMatrix>,
}

impl BrandtSet {
    pub fn p(&self) -> u64 {
        self.classes.p
    }

    pub fn h(&self) -> usize {
        self.classes.len()
    }

    /// B(n) for 1 ≤ n ≤ n_max.
    pub fn b(&self, n: usize) -> &IntMatrix {
        &self.mats[n - 1]
    }
}

/// Upper bound on n_max; large enough to reach B(p) at desk-scale p.
pub const MAX_NMAX: usize = 1000;

/// B(n)_ij = r_ij(n)/(2w_j) for 1 ≤ n ≤ n_max.
pub fn brandt(p: u64, n_max: usize) -> Result<BrandtSet> {
    if n_max == 0 || n_max > MAX_NMAX {
        return Err(param!("n_max = {n_max} must lie in 1..={MAX_NMAX}"));
    }
    let classes = class_set(p, 2)?;
    let h = classes.len();
    let pairs: Vec<(usize, usize)> = (0..h).flat_map(|i| (0..h).map(move |j| (i, j))).collect();
    let flat: Vec<Vec<u64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (l, c) = classes.hom_lattice(i, j)?;
            Ok(theta_series(&l, &c, n_max)?.coeffs)
        })
        .collect::<Result<_>>()?;
    let theta: Vec<Vec<Vec<u64>>> = flat.chunks(h).map(|c| c.to_vec()).collect();
    let mut mats = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut m = vec![vec![0u64; h]; h];
        for i in 0..h {
            for j in 0..h {
                let r = theta[i][j][n];
                let w = classes.w2[j] as u64;
                if !r.is_multiple_of(w) {
                    return Err(internal!("B({n})[{i}][{j}] = {r}/{w} is not an integer"));
                }
                m[i][j] = r / w;
                if theta[i][j][n] != theta[j][i][n] {
                    return Err(internal!("Hom thetas of ({i}, {j}) and ({j}, {i}) differ at n = {n}"));
                }
            }
        }
        mats.push(m);
    }
    Ok(BrandtSet { classes, n_max, theta, mats })
}

fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let h = a.len();
    (0..h).map(|i| (0..h).map(|j| (0..h).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn identity(h: usize) -> IntMatrix {
    (0..h).map(|i| (0..h).map(|j| u64::from(i == j)).collect()).collect()
}

fn trace(a: &IntMatrix) -> u64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// One named identity check.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BrandtReport {
    pub p: u64,
    pub checks: Vec<Check>,
}

impl BrandtReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(Check { name: name.to_string(), pass, detail });
    }
}

/// Multiplicativity, the ℓ-power recurrence for ℓ ∈ {2, 3}, and the
/// behaviour of B(p) against the Frobenius pairing and the spine.
pub fn brandt_identities(set: &BrandtSet) -> Result<BrandtReport> {
    let p = set.p();
    let h = set.h();
    if set.n_max < (p as usize).max(27) {
        return Err(param!("identities need B(n) up to max(27, p) = {}", (p as usize).max(27)));
    }
    let mut rep = BrandtReport { p, checks: vec![] };
    let id = identity(h);
    rep.push("B(1) = I", *set.b(1) == id, String::new());
    for ell in [2u64, 3] {
        if ell == p {
            continue;
        }
        let rows_ok = set.b(ell as usize).iter().all(|r| r.iter().sum::<u64>() == ell + 1);
        rep.push(&format!("rows of B({ell}) sum to {}", ell + 1), rows_ok, String::new());
        for a in 1..=2u32 {
            let (hi, mid, lo) = (ell.pow(a + 1) as usize, ell.pow(a) as usize, ell.pow(a - 1) as usize);
            let prod = matmul(set.b(ell as usize), set.b(mid));
            let ok = (0..h).all(|i| (0..h).all(|j| prod[i][j] == set.b(hi)[i][j] + ell * set.b(lo)[i][j]));
            rep.push(&format!("B({hi}) = B({ell})B({mid}) - {ell}B({lo})"), ok, String::new());
        }
    }
    rep.push("B(2)B(3) = B(6)", matmul(set.b(2), set.b(3)) == *set.b(6), String::new());
    let bp = set.b(p as usize);
    let is_perm = bp.iter().all(|r| r.iter().sum::<u64>() == 1 && r.iter().all(|&x| x <= 1));
    rep.push("B(p) is a permutation matrix", is_perm, String::new());
    rep.push("B(p)^2 = I", matmul(bp, bp) == id, String::new());
    let frob_ok = (0..h).all(|i| bp[i][set.classes.frobenius[i]] == 1);
    rep.push("B(p) is the pairing [I] -> [IP]", frob_ok, format!("{:?}", set.classes.frobenius));
    let spine = enumerate_ss(p)?.iter().filter(|j| j.as_prime_field().is_some()).count() as u64;
    rep.push("Tr B(p) = spine size", trace(bp) == spine, format!("trace {} spine {spine}", trace(bp)));
    let loops = build_graph(p, 2)?.loop_count();
    rep.push("Tr B(2) = loops of G(p,2)", trace(set.b(2)) == loops, format!("trace {} loops {loops}", trace(set.b(2))));
    let sym = (1..=set.n_max).all(|n| {
        let b = set.b(n);
        (0..h).all(|i| (0..h).all(|j| set.classes.w2[j] as u64 * b[i][j] == set.classes.w2[i] as u64 * b[j][i]))
    });
    rep.push("2w_j B(n)_ij = 2w_i B(n)_ji", sym, String::new());
    Ok(rep)
}

/// π with a[i][k] = b[π(i)][π(k)] for all i, k, if one exists.
pub fn find_permutation(a: &[Vec<u64>], b: &[Vec<u64>]) -> Option<Vec<usize>> {
    let h = a.len();
    if b.len() != h {
        return None;
    }
    let inv = |m: &[Vec<u64>], i: usize| {
        let mut row = m[i].clone();
        row.sort();
        let mut col: Vec<u64> = (0..h).map(|k| m[k][i]).collect();
        col.sort();
        (m[i][i], row, col)
    };
    let ia: Vec<_> = (0..h).map(|i| inv(a, i)).collect();
    let ib: Vec<_> = (0..h).map(|i| inv(b, i)).collect();
    let mut perm = vec![usize::MAX; h];
    let mut used = vec![false; h];
    fn go(
        i: usize,
        a: &[Vec<u64>],
        b: &[Vec<u64>],
        ia: &[(u64, Vec<u64>, Vec<u64>)],
        ib: &[(u64, Vec<u64>, Vec<u64>)],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == a.len() {
            return true;
        }
        for t in 0..a.len() {
            if used[t] || ia[i] != ib[t] {
                continue;
            }
            if (0..i).any(|k| a[i][k] != b[t][perm[k]] || a[k][i] != b[perm[k]][t]) {
                continue;
            }
            perm[i] = t;
            used[t] = true;
            if go(i + 1, a, b, ia, ib, perm, used) {
                return true;
            }
            used[t] = false;
        }
        false
    }
    go(0, a, b, &ia, &ib, &mut perm, &mut used).then_some(perm)
}

/// Coefficients 0..=m_max of Σ_j Θ_{1j}/(2w_j), as exact rationals.
pub fn eisenstein_coefficients(set: &BrandtSet, m_max: usize) -> Result<Vec<BigRational>> {
    if m_max > set.n_max {
        return Err(param!("need Hom thetas to precision {m_max}"));
    }
    Ok((0..=m_max)
        .map(|m| {
            (0..set.h())
                .map(|j| BigRational::new(BigInt::from(set.theta[0][j][m]), BigInt::from(set.classes.w2[j])))
                .sum()
        })
        .collect())
}

/// Least n ≥ 1 at which the order has more elements of norm n than ℤ does.
pub fn min_nonint_endo(order: &QuatLattice) -> Result<u64> {
    let cap = 4 * order.alg().p as usize;
    let mut n = 16usize.min(cap);
    loop {
        let t = theta_series(order, &BigRational::one(), n)?;
        for (m, &r) in t.coeffs.iter().enumerate().skip(1) {
            let rz = if is_square(m as u64) { 2 } else { 0 };
            if r > rz {
                return Ok(m as u64);
            }
        }
        if n >= cap {
            return Err(internal!("no non-integral element of norm ≤ {cap}"));
        }
        n = (2 * n).min(cap);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RigidityReport {
    pub p: u64,
    pub precision: usize,
    pub classes: usize,
    /// Unordered pairs i < j swapped by [I] ↦ [IP].
    pub paired: Vec<(usize, usize)>,
    /// Pairs contradicting "equal thetas iff equal or paired".
    pub violations: Vec<(usize, usize)>,
    /// Non-paired pairs not separated by the coefficients at 2^k alone.
    pub unseparated_by_powers_of_two: Vec<(usize, usize)>,
}

impl RigidityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares the endomorphism thetas Θ(O_ℓ(I_i)) to precision N.
pub fn theta_rigidity(p: u64, n: usize) -> Result<RigidityReport> {
    if n < p as usize {
        return Err(param!("precision {n} must be at least p = {p}"));
    }
    let classes = class_set(p, 2)?;
    let thetas: Vec<Vec<u64>> = classes
        .left_orders
        .par_iter()
        .map(|o| theta_series(o, &BigRational::one(), n).map(|t| t.coeffs))
        .collect::<Result<_, Error>>()?;
    let h = classes.len();
    let powers: Vec<usize> = std::iter::successors(Some(1usize), |&x| Some(x * 2)).take_while(|&x| x <= n).collect();
    let mut rep = RigidityReport {
        p,
        precision: n,
        classes: h,
        paired: vec![],
        violations: vec![],
        unseparated_by_powers_of_two: vec![],
    };
    for i in 0..h {
        for j in i + 1..h {
            let paired = classes.frobenius[i] == j;
            if paired {
                rep.paired.push((i, j));
            }
            if (thetas[i] == thetas[j]) != paired {
                rep.violations.push((i, j));
            }
            if !paired && powers.iter().all(|&m| thetas[i][m] == thetas[j][m]) {
                rep.unseparated_by_powers_of_two.push((i, j));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sigma_prime_to;

    #[test]
    fn brandt_at_103() {
        let set = brandt(103, 103).unwrap();
        let rep = brandt_identities(&set).unwrap();
        assert!(rep.all_pass(), "{rep:#?}");
        let e = eisenstein_coefficients(&set, 30).unwrap();
        assert_eq!(e[0], BigRational::new(BigInt::from(17), BigInt::from(4)));
        for (m, c) in e.iter().enumerate().skip(1) {
            assert_eq!(*c, BigRational::from_integer(BigInt::from(sigma_prime_to(m as u64, 103))));
        }
        for ell in [2usize, 3] {
            let g = build_graph(103, ell as u64).unwrap();
            let adj: Vec<Vec<u64>> = g.adj.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
            assert!(find_permutation(set.b(ell), &adj).is_some());
        }
    }

    #[test]
    fn min_norms() {
        let c = class_set(103, 2).unwrap();
        // O contains i; 103 ≡ 1 mod 3 so no order contains ω
        assert_eq!(min_nonint_endo(&c.order).unwrap(), 1);
        let ones = c.left_orders.iter().filter(|o| min_nonint_endo(o).unwrap() == 1).count();
        assert_eq!(ones, 1);
        let c = class_set(107, 2).unwrap();
        let ones = c.left_orders.iter().filter(|o| min_nonint_endo(o).unwrap() == 1).count();
        assert_eq!(ones, 2);
    }

    #[test]
    fn rigidity_small() {
        let r = theta_rigidity(103, 103).unwrap();
        assert!(r.passes(), "{r:?}");
        // 9 classes, 5 on the spine
        assert_eq!(r.paired.len(), 2);
        assert!(theta_rigidity(11, 11).unwrap().passes());
    }
}
