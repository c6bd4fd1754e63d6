//! Small exact integer and rational matrix routines: Hermite and Smith
//! normal forms, Bareiss determinants, rational inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;
pub type QMat = Vec<Vec<BigRational>>;

pub fn to_big(rows: &[Vec<i64>]) -> IMat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Row-style Hermite normal form: the nonzero rows of an upper echelon
/// basis of the row lattice, pivots positive, entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>]) -> IMat {
    let Some(ncols) = rows.first().map(|r| r.len()) else { return vec![] };
    let mut m: IMat = rows.to_vec();
    let mut prow = 0;
    for c in 0..ncols {
        if prow == m.len() {
            break;
        }
        // gcd-eliminate column c below prow
        loop {
            let mut best: Option<usize> = None;
            for r in prow..m.len() {
                if !m[r][c].is_zero() && best.is_none_or(|b| m[r][c].abs() < m[b][c].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            m.swap(prow, b);
            let mut done = true;
            for r in prow + 1..m.len() {
                if m[r][c].is_zero() {
                    continue;
                }
                let q = m[r][c].div_floor(&m[prow][c]);
                for k in c..ncols {
                    let t = &q * &m[prow][k];
                    m[r][k] -= t;
                }
                if !m[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[prow][c].is_zero() {
            continue;
        }
        if m[prow][c].is_negative() {
            for k in c..ncols {
                m[prow][k] = -&m[prow][k];
            }
        }
        for r in 0..prow {
            let q = m[r][c].div_floor(&m[prow][c]);
            if !q.is_zero() {
                for k in c..ncols {
                    let t = &q * &m[prow][k];
                    m[r][k] -= t;
                }
            }
        }
        prow += 1;
    }
    m.truncate(prow);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// Elementary divisors of the row lattice (Smith normal form diagonal),
/// ascending; its length is the rank.
pub fn smith_diagonal(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m = hnf(rows);
    let n = m.len();
    if n == 0 {
        return vec![];
    }
    let ncols = m[0].len();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // move the smallest nonzero entry of the trailing block to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for r in t..n {
                for c in t..ncols {
                    if !m[r][c].is_zero() && best.is_none_or(|(br, bc)| m[r][c].abs() < m[br][bc].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else { return diag };
            m.swap(t, br);
            for row in m.iter_mut() {
                row.swap(t, bc);
            }
            let piv = m[t][t].clone();
            let mut clean = true;
            for r in t + 1..n {
                let q = m[r][t].div_floor(&piv);
                if !q.is_zero() {
                    for k in t..ncols {
                        let v = &q * &m[t][k];
                        m[r][k] -= v;
                    }
                }
                clean &= m[r][t].is_zero();
            }
            for c in t + 1..ncols {
                let q = m[t][c].div_floor(&piv);
                if !q.is_zero() {
                    for row in m.iter_mut().skip(t) {
                        let v = &q * &row[t];
                        row[c] -= v;
                    }
                }
                clean &= m[t][c].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold any entry not divisible by the pivot into row t
            let bad = (t + 1..n).find(|&r| (t + 1..ncols).any(|c| !(&m[r][c] % &piv).is_zero()));
            match bad {
                Some(r) => {
                    for k in t..ncols {
                        let v = m[r][k].clone();
                        m[t][k] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
    }
    diag
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: IMat = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn det_i64(a: &[Vec<i64>]) -> BigInt {
    det(&to_big(a))
}

pub fn q_from_int(a: &[Vec<BigInt>]) -> QMat {
    a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

pub fn q_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(BigRational::zero(), |acc, t| acc + &a[i][t] * &b[t][j])).collect())
        .collect()
}

pub fn q_transpose(a: &QMat) -> QMat {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

/// Inverse by Gauss-Jordan; `None` when singular.
pub fn q_inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut m: QMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, piv);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..2 * n {
                    let v = &f * &m[c][k];
                    m[r][k] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Common denominator of a rational matrix and the scaled integer matrix.
pub fn clear_denominators(a: &QMat) -> (IMat, BigInt) {
    let mut d = BigInt::one();
    for r in a {
        for x in r {
            d = d.lcm(x.denom());
        }
    }
    let m = a
        .iter()
        .map(|r| r.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect())
        .collect();
    (m, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_basic() {
        let h = hnf(&b(&[&[2, 4], &[3, 1], &[5, 5]]));
        // (3,1) - (2,4) = (1,-3) and the determinant is 10
        assert_eq!(h, b(&[&[1, 7], &[0, 10]]));
        assert_eq!(hnf(&b(&[&[0, 0]])), IMat::new());
        // duplicates collapse
        assert_eq!(hnf(&b(&[&[1, 0], &[0, 1], &[1, 0]])), b(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn smith_and_det() {
        assert_eq!(smith_diagonal(&b(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), vec![2u32, 6, 12].into_iter().map(BigInt::from).collect::<Vec<_>>());
        assert_eq!(det(&b(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), BigInt::from(-144));
        assert_eq!(det(&b(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(smith_diagonal(&b(&[&[2, 0], &[0, 2], &[2, 2]])), vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(smith_diagonal(&b(&[&[1, 1]])).len(), 1);
    }

    #[test]
    fn rational_inverse() {
        let a = q_from_int(&b(&[&[2, 1], &[1, 1]]));
        let inv = q_inverse(&a).unwrap();
        let id = q_mul(&a, &inv);
        assert_eq!(id, q_from_int(&b(&[&[1, 0], &[0, 1]])));
        assert!(q_inverse(&q_from_int(&b(&[&[1, 2], &[2, 4]]))).is_none());
    }
}
