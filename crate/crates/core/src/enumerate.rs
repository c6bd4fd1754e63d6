//! Fincke–Pohst enumeration of short vectors of a positive-definite
//! integral Gram matrix.

use crate::error::{internal, Error, Result};

/// Candidate budget shared by every enumeration.
pub const MAX_CANDIDATES: u64 = 100_000_000;

/// Calls `visit(x, xᵀGx)` for every nonzero integer vector with
/// `xᵀGx ≤ bound`, returning the number visited. Visit order is
/// deterministic but not sorted.
pub fn for_each_short<F: FnMut(&[i64], i64)>(gram: &[Vec<i64>], bound: i64, mut visit: F) -> Result<u64> {
    let n = gram.len();
    if n == 0 || bound <= 0 {
        return Ok(0);
    }
    let q = decompose(gram)?;
    let mut st = State { gram, q: &q, bound, x: vec![0; n], candidates: 0, visited: 0 };
    st.descend(n - 1, bound as f64, &mut visit)?;
    Ok(st.visited)
}

/// All nonzero vectors with `xᵀGx ≤ bound`, sorted lexicographically, each
/// with its value.
pub fn short_vectors(gram: &[Vec<i64>], bound: i64) -> Result<Vec<(Vec<i64>, i64)>> {
    let mut out = Vec::new();
    for_each_short(gram, bound, |x, v| out.push((x.to_vec(), v)))?;
    out.sort();
    Ok(out)
}

/// Counts r(m) = #{x : xᵀGx = m} for 0 ≤ m ≤ bound, with r(0) = 1.
pub fn value_counts(gram: &[Vec<i64>], bound: i64) -> Result<Vec<u64>> {
    let mut r = vec![0u64; bound.max(0) as usize + 1];
    r[0] = 1;
    for_each_short(gram, bound, |_, v| r[v as usize] += 1)?;
    Ok(r)
}

/// The square-completion q with xᵀGx = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)².
fn decompose(gram: &[Vec<i64>]) -> Result<Vec<Vec<f64>>> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(internal!("Gram matrix is not square"));
    }
    let mut q = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            if gram[i][j] != gram[j][i] {
                return Err(internal!("Gram matrix is not symmetric"));
            }
            q[i][j] = gram[i][j] as f64;
        }
    }
    for i in 0..n {
        for k in 0..i {
            let t = q[k][i];
            q[i][i] -= q[k][k] * t * t;
        }
        if q[i][i] <= 0.0 {
            return Err(internal!("Gram matrix is not positive definite"));
        }
        for j in i + 1..n {
            for k in 0..i {
                let t = q[k][k] * q[k][i] * q[k][j];
                q[i][j] -= t;
            }
            q[i][j] /= q[i][i];
        }
    }
    Ok(q)
}

struct State<'a> {
    gram: &'a [Vec<i64>],
    q: &'a [Vec<f64>],
    bound: i64,
    x: Vec<i64>,
    candidates: u64,
    visited: u64,
}

impl State<'_> {
    fn exact(&self) -> i64 {
        let n = self.x.len();
        let mut s: i128 = 0;
        for i in 0..n {
            if self.x[i] == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for j in 0..n {
                row += self.gram[i][j] as i128 * self.x[j] as i128;
            }
            s += row * self.x[i] as i128;
        }
        s.clamp(i64::MIN as i128, i64::MAX as i128) as i64
    }

    fn descend<F: FnMut(&[i64], i64)>(&mut self, i: usize, rem: f64, visit: &mut F) -> Result<()> {
        let n = self.x.len();
        let c: f64 = -(i + 1..n).map(|j| self.q[i][j] * self.x[j] as f64).sum::<f64>();
        // slack keeps rounding from dropping boundary vectors; the exact
        // recheck at the leaves removes any surplus
        let slack = 1e-7 * (1.0 + self.bound as f64);
        let r = ((rem + slack).max(0.0) / self.q[i][i]).sqrt();
        let lo = (c - r).ceil() as i64;
        let hi = (c + r).floor() as i64;
        for xi in lo..=hi {
            self.candidates += 1;
            if self.candidates > MAX_CANDIDATES {
                return Err(Error::Capacity(format!("enumeration exceeded {MAX_CANDIDATES} candidates")));
            }
            let d = xi as f64 - c;
            let t = self.q[i][i] * d * d;
            if t > rem + slack {
                continue;
            }
            self.x[i] = xi;
            if i == 0 {
                if self.x.iter().any(|&v| v != 0) {
                    let v = self.exact();
                    if v <= self.bound {
                        self.visited += 1;
                        visit(&self.x, v);
                    }
                }
            } else {
                self.descend(i - 1, rem - t, visit)?;
            }
        }
        self.x[i] = 0;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> Vec<Vec<i64>> {
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
    }

    fn brute(gram: &[Vec<i64>], bound: i64, box_: i64) -> Vec<u64> {
        let n = gram.len();
        let mut r = vec![0u64; bound as usize + 1];
        let side = (2 * box_ + 1) as usize;
        for idx in 0..side.pow(n as u32) {
            let mut t = idx;
            let x: Vec<i64> = (0..n)
                .map(|_| {
                    let v = (t % side) as i64 - box_;
                    t /= side;
                    v
                })
                .collect();
            let v: i64 = (0..n).map(|i| (0..n).map(|j| gram[i][j] * x[i] * x[j]).sum::<i64>()).sum();
            if v <= bound {
                r[v as usize] += 1;
            }
        }
        r
    }

    #[test]
    fn z4_counts_match_sums_of_squares() {
        let r = value_counts(&identity(4), 10).unwrap();
        // Jacobi: r_4(n) = 8 σ(n) for odd n
        assert_eq!(&r[..6], &[1, 8, 24, 32, 24, 48]);
        assert_eq!(r, brute(&identity(4), 10, 4));
    }

    #[test]
    fn skewed_gram_matches_brute_force() {
        let g = vec![vec![4, 3, 1], vec![3, 6, 2], vec![1, 2, 8]];
        assert_eq!(value_counts(&g, 30).unwrap(), brute(&g, 30, 6));
        let sv = short_vectors(&g, 4).unwrap();
        assert!(sv.windows(2).all(|w| w[0] < w[1]));
        assert!(sv.iter().all(|(_, v)| *v <= 4));
    }

    #[test]
    fn rejects_indefinite() {
        assert!(value_counts(&[vec![1, 2], vec![2, 1]], 5).is_err());
    }
}
