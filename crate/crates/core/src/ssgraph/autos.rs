use std::collections::BTreeSet;

use super::SsGraph;
use crate::error::{Error, Result};

const MAX_VERTICES: usize = 40;
const MAX_GROUP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AutReport {
    pub order: usize,
    /// Every automorphism, sorted; the identity comes first.
    pub elements: Vec<Vec<usize>>,
    /// A generating set picked greedily from `elements`.
    pub generators: Vec<Vec<usize>>,
}

/// Vertex permutations π with A[π(i)][π(k)] = A[i][k] for all i, k, by
/// backtracking with pruning on per-vertex invariants.
pub fn essential_automorphisms(g: &SsGraph) -> Result<AutReport> {
    let h = g.len();
    if h > MAX_VERTICES {
        return Err(Error::Capacity(format!("automorphism search limited to {MAX_VERTICES} vertices, graph has {h}")));
    }
    let invariant = |i: usize| {
        let mut row = g.adj[i].clone();
        row.sort();
        let mut col: Vec<u32> = (0..h).map(|k| g.adj[k][i]).collect();
        col.sort();
        (g.w2[i], g.adj[i][i], row, col)
    };
    let inv: Vec<_> = (0..h).map(invariant).collect();
    let mut elements = Vec::new();
    let mut perm = vec![usize::MAX; h];
    let mut used = vec![false; h];
    search(g, &inv, 0, &mut perm, &mut used, &mut elements)?;
    elements.sort();
    let generators = pick_generators(&elements);
    Ok(AutReport { order: elements.len(), elements, generators })
}

fn search<T: PartialEq>(
    g: &SsGraph,
    inv: &[T],
    i: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let h = g.len();
    if i == h {
        out.push(perm.clone());
        if out.len() > MAX_GROUP {
            return Err(Error::Capacity("automorphism group too large to list".into()));
        }
        return Ok(());
    }
    for t in 0..h {
        if used[t] || inv[t] != inv[i] {
            continue;
        }
        let consistent = (0..i).all(|k| g.adj[t][perm[k]] == g.adj[i][k] && g.adj[perm[k]][t] == g.adj[k][i])
            && g.adj[t][t] == g.adj[i][i];
        if !consistent {
            continue;
        }
        perm[i] = t;
        used[t] = true;
        search(g, inv, i + 1, perm, used, out)?;
        used[t] = false;
        perm[i] = usize::MAX;
    }
    Ok(())
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn closure(gens: &[Vec<usize>], h: usize) -> BTreeSet<Vec<usize>> {
    let id: Vec<usize> = (0..h).collect();
    let mut set = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = compose(s, &x);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

fn pick_generators(elements: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let Some(h) = elements.first().map(|e| e.len()) else { return vec![] };
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut span = closure(&gens, h);
    for e in elements {
        if !span.contains(e) {
            gens.push(e.clone());
            span = closure(&gens, h);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::super::{build_graph, frobenius_involution};
    use super::*;

    #[test]
    fn p101_is_identity_and_frobenius() {
        let g = build_graph(101, 2).unwrap();
        let r = essential_automorphisms(&g).unwrap();
        let id: Vec<usize> = (0..g.len()).collect();
        assert_eq!(r.elements[0], id);
        assert!(r.elements.contains(&frobenius_involution(&g).unwrap()));
        assert_eq!(r.order, 2);
        assert_eq!(r.generators.len(), 1);
    }
}
