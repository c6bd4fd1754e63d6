use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{bp_inf, short_vectors, theta_series, Quat, QuatAlg, QuatLattice};
use crate::arith::is_prime;
use crate::error::{internal, param, Result};
use crate::ssgraph::class_number;

fn q(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn residues(m: &[Vec<BigInt>], ell: u64) -> Vec<Vec<u64>> {
    let l = BigInt::from(ell);
    m.iter().map(|r| r.iter().map(|x| x.mod_floor(&l).to_u64().expect("residue fits")).collect()).collect()
}

/// Two-dimensional subspaces of F_ℓ⁴ in reduced row echelon form.
fn planes(ell: u64) -> Vec<[[u64; 4]; 2]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            let free1: Vec<usize> = (a + 1..4).filter(|&c| c != b).collect();
            let free2: Vec<usize> = (b + 1..4).collect();
            let nfree = free1.len() + free2.len();
            for idx in 0..ell.pow(nfree as u32) {
                let mut t = idx;
                let mut r1 = [0u64; 4];
                let mut r2 = [0u64; 4];
                r1[a] = 1;
                r2[b] = 1;
                for &c in free1.iter() {
                    r1[c] = t % ell;
                    t /= ell;
                }
                for &c in free2.iter() {
                    r2[c] = t % ell;
                    t /= ell;
                }
                out.push([r1, r2]);
            }
        }
    }
    out
}

fn pivot(row: &[u64; 4]) -> usize {
    row.iter().position(|&x| x != 0).expect("echelon rows are nonzero")
}

fn in_plane(plane: &[[u64; 4]; 2], u: &[u64; 4], ell: u64) -> bool {
    let (a, b) = (pivot(&plane[0]), pivot(&plane[1]));
    (0..4).all(|t| {
        let v = (u[t] + ell * ell - (u[a] * plane[0][t]) % ell - (u[b] * plane[1][t]) % ell) % ell;
        v == 0
    })
}

/// The sublattices J with ℓI ⊂ J ⊂ I, [I : J] = ℓ², and J·O ⊆ J, found as
/// the O-stable planes of I/ℓI. There are exactly ℓ + 1 of them.
pub fn sub_ideals(i: &QuatLattice, o: &QuatLattice, ell: u64) -> Result<Vec<QuatLattice>> {
    if !is_prime(ell) || ell > 13 || ell == i.alg().p {
        return Err(param!("ℓ = {ell} must be a prime ≤ 13 different from p"));
    }
    let actions: Vec<Vec<Vec<u64>>> =
        o.basis_elems().iter().map(|b| i.right_action(b).map(|m| residues(&m, ell))).collect::<Result<_>>()?;
    let basis = i.basis_elems();
    let lift = |w: &[u64; 4]| -> Quat {
        let mut acc = i.alg().zero();
        for (r, &x) in w.iter().enumerate() {
            acc = &acc + &basis[r].scale(&q(x));
        }
        acc
    };
    let target = i.norm() * q(ell);
    let mut out = Vec::new();
    for plane in planes(ell) {
        let stable = plane.iter().all(|w| {
            actions.iter().all(|m| {
                let u: [u64; 4] = std::array::from_fn(|t| (0..4).map(|r| w[r] * m[r][t]).sum::<u64>() % ell);
                in_plane(&plane, &u, ell)
            })
        });
        if !stable {
            continue;
        }
        let mut gens: Vec<Quat> = plane.iter().map(lift).collect();
        gens.extend(basis.iter().map(|b| b.scale(&q(ell))));
        let j = QuatLattice::from_generators(i.alg(), &gens)?;
        if j.norm() != target {
            return Err(internal!("stable plane lifts to norm {} instead of {target}", j.norm()));
        }
        out.push(j);
    }
    if out.len() as u64 != ell + 1 {
        return Err(internal!("found {} sub-ideals of index ℓ² for ℓ = {ell}, expected {}", out.len(), ell + 1));
    }
    Ok(out)
}

/// Right O-ideals of reduced norm ℓ.
pub fn right_ideals_of_norm(o: &QuatLattice, ell: u64) -> Result<Vec<QuatLattice>> {
    sub_ideals(o, o, ell)
}

/// I ~ J iff I·J̄ holds an element of norm Nm(I)·Nm(J).
pub fn ideal_equiv(i: &QuatLattice, j: &QuatLattice) -> Result<bool> {
    let m = i.mul(&j.conj())?;
    let target = i.norm() * j.norm();
    Ok(short_vectors(&m, &target)?.iter().any(|(_, n)| *n == target))
}

/// (ᾱ/Nm I)·I for a shortest α in I: the integral ideal of least norm in
/// the class of I.
pub fn reduce_ideal(i: &QuatLattice) -> Result<QuatLattice> {
    let n = i.norm();
    let mut bound = n.clone();
    let alpha = loop {
        let sv = short_vectors(i, &bound)?;
        if let Some(min) = sv.iter().map(|(_, m)| m.clone()).min() {
            let (x, _) = sv.into_iter().find(|(_, m)| *m == min).expect("minimum is attained");
            break i.combo(&x);
        }
        bound *= q(2);
    };
    i.left_mul(&alpha.conj().scale(&n.recip()))
}

/// {b : bI ⊆ I}, computed as the intersection of the lattices I·v⁻¹ over
/// a basis v of I, then checked against I·Ī/Nm(I).
pub fn left_order(i: &QuatLattice) -> Result<QuatLattice> {
    let basis = i.basis_elems();
    let mut acc: Option<QuatLattice> = None;
    for v in &basis {
        let inv = v.inverse().ok_or_else(|| internal!("zero basis vector"))?;
        let l = i.right_mul(&inv)?;
        acc = Some(match acc {
            None => l,
            Some(a) => a.intersect(&l),
        });
    }
    let o = acc.expect("four basis vectors");
    let p = i.alg().p;
    if !o.is_order() || o.gram_det() != q(p * p) {
        return Err(internal!("left order is not a maximal order (Gram determinant {})", o.gram_det()));
    }
    let alt = i.mul(&i.conj())?.scale(&i.norm().recip())?;
    if alt != o {
        return Err(internal!("stabilizer and I·Ī/Nm(I) disagree"));
    }
    Ok(o)
}

/// Null space of a square matrix over F_p, as row vectors.
fn kernel_mod(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let pm = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| crate::arith::pow_mod(a, p - 2, p);
    // columns of m act on column vectors x: solve m x = 0
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..n {
        let Some(r) = (row..n).find(|&r| a[r][c] != 0) else { continue };
        a.swap(row, r);
        let iv = inv(a[row][c]);
        for x in a[row].iter_mut() {
            *x = pm(*x, iv);
        }
        for r in 0..n {
            if r != row && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..n {
                    let t = pm(f, a[row][k]);
                    a[r][k] = (a[r][k] + p - t) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u64; n];
            x[f] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = (p - a[r][f]) % p;
            }
            x
        })
        .collect()
}

/// The two-sided ideal of norm p: pO plus the radical of the trace form
/// on O/pO.
pub fn two_sided_p(o: &QuatLattice) -> Result<QuatLattice> {
    let alg = *o.alg();
    let p = alg.p;
    let g = o.integral_gram(&BigRational::one())?;
    let gm: Vec<Vec<u64>> = g.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()).collect();
    let radical = kernel_mod(&gm, p);
    if radical.len() != 2 {
        return Err(internal!("trace form mod p has a radical of dimension {}", radical.len()));
    }
    let basis = o.basis_elems();
    let mut gens: Vec<Quat> = radical
        .iter()
        .map(|x| x.iter().zip(&basis).fold(alg.zero(), |acc, (&c, b)| &acc + &b.scale(&q(c))))
        .collect();
    gens.extend(basis.iter().map(|b| b.scale(&q(p))));
    let pp = QuatLattice::from_generators(&alg, &gens)?;
    if pp.mul(&pp)? != o.scale(&q(p))? {
        return Err(internal!("P·P is not pO"));
    }
    if pp.norm() != q(p) || !pp.contains_lattice(&o.mul(&pp)?) {
        return Err(internal!("P is not a two-sided ideal of norm p"));
    }
    if left_order(&pp)? != *o {
        return Err(internal!("left order of P is not O"));
    }
    Ok(pp)
}

/// Hom(E_i, E_j) as the lattice I_j·Ī_i with the form Nm/(Nm I_i·Nm I_j).
pub fn hom_lattice(ii: &QuatLattice, ij: &QuatLattice) -> Result<(QuatLattice, BigRational)> {
    let l = ij.mul(&ii.conj())?;
    let c = (ii.norm() * ij.norm()).recip();
    let g = l.integral_gram(&c).map_err(|e| internal!("hom lattice form is not integral: {e}"))?;
    let p = l.alg().p as i64;
    let d = crate::intmat::det_i64(&g);
    if d != BigInt::from(p * p) {
        return Err(internal!("hom lattice has Gram determinant {d}, expected p²"));
    }
    Ok((l, c))
}

/// Right ideal class representatives of the standard maximal order and
/// the data attached to each class.
#[derive(Clone, Debug)]
pub struct ClassSet {
    pub p: u64,
    pub alg: QuatAlg,
    pub order: QuatLattice,
    /// Reduced representatives; the first is O itself.
    pub ideals: Vec<QuatLattice>,
    pub norms: Vec<BigInt>,
    pub left_orders: Vec<QuatLattice>,
    /// Unit counts #O_ℓ(I)^× = 2w.
    pub w2: Vec<u32>,
    /// The two-sided ideal P of norm p.
    pub two_sided: QuatLattice,
    /// [I] ↦ [I·P].
    pub frobenius: Vec<usize>,
}

impl ClassSet {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// Index of the class of a right O-ideal.
    pub fn class_of(&self, j: &QuatLattice) -> Result<usize> {
        let mut hit = None;
        for (k, r) in self.ideals.iter().enumerate() {
            if ideal_equiv(r, j)? {
                if hit.is_some() {
                    return Err(internal!("ideal is equivalent to two representatives"));
                }
                hit = Some(k);
            }
        }
        hit.ok_or_else(|| internal!("ideal matches no class representative"))
    }

    pub fn hom_lattice(&self, i: usize, j: usize) -> Result<(QuatLattice, BigRational)> {
        hom_lattice(&self.ideals[i], &self.ideals[j])
    }
}

/// Breadth-first search over ℓ-neighbours from O, keeping one reduced
/// ideal per class, until the class number is reached.
pub fn class_set(p: u64, ell: u64) -> Result<ClassSet> {
    let (alg, o) = bp_inf(p)?;
    let h = class_number(p) as usize;
    let max_depth = 2 * ((p as f64).ln() / (ell as f64).ln()).ceil() as usize + 10;
    let mut reps = vec![o.clone()];
    let mut frontier = vec![o.clone()];
    let mut depth = 0;
    while reps.len() < h {
        depth += 1;
        if depth > max_depth || frontier.is_empty() {
            return Err(internal!("class search stalled at {} of {h} classes", reps.len()));
        }
        let mut next = Vec::new();
        for i in &frontier {
            for j in sub_ideals(i, &o, ell)? {
                let r = reduce_ideal(&j)?;
                let mut known = false;
                for s in &reps {
                    if ideal_equiv(s, &r)? {
                        known = true;
                        break;
                    }
                }
                if !known {
                    reps.push(r.clone());
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    if reps.len() != h {
        return Err(internal!("found {} classes, class number is {h}", reps.len()));
    }
    let norms = reps
        .iter()
        .map(|r| {
            let n = r.norm();
            if n.is_integer() {
                Ok(n.to_integer())
            } else {
                Err(internal!("representative has non-integral norm {n}"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let left_orders = reps.iter().map(left_order).collect::<Result<Vec<_>>>()?;
    let w2 = left_orders
        .iter()
        .map(|lo| {
            let units = theta_series(lo, &BigRational::one(), 1)?.coeffs[1];
            if [2, 4, 6].contains(&units) {
                Ok(units as u32)
            } else {
                Err(internal!("left order has {units} units"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let two_sided = two_sided_p(&o)?;
    let mut set = ClassSet { p, alg, order: o, ideals: reps, norms, left_orders, w2, two_sided, frobenius: vec![] };
    let frob = (0..set.len())
        .map(|i| set.class_of(&set.ideals[i].mul(&set.two_sided)?))
        .collect::<Result<Vec<_>>>()?;
    if (0..frob.len()).any(|i| frob[frob[i]] != i) {
        return Err(internal!("[I] ↦ [IP] is not an involution"));
    }
    set.frobenius = frob;
    Ok(set)
}
