use ssiso::arith::primes_in;
use ssiso::ssgraph::{
    build_graph, class_number, enumerate_ss, frobenius_involution, phi2_neighbors, spectral_report, SsSet,
};

#[test]
fn two_enumerations_agree_up_to_500() {
    for p in primes_in(5, 500) {
        assert_eq!(enumerate_ss(p).unwrap().len() as u64, class_number(p), "p = {p}");
    }
}

#[test]
fn graphs_up_to_300() {
    for p in primes_in(5, 300) {
        let set = SsSet::new(p).unwrap();
        for ell in [2u64, 3] {
            if ell == p {
                continue;
            }
            let g = set.graph(ell).unwrap();
            frobenius_involution(&g).unwrap();
            let r = spectral_report(&g).unwrap();
            assert_eq!(r.trivial_mult, 1, "p = {p}, ell = {ell}");
            assert!(r.is_ramanujan(), "p = {p}, ell = {ell}");
            assert!(!r.has_minus_trivial);
            if ell == 2 {
                for (i, j) in g.vertices.iter().enumerate() {
                    let mut row = Vec::new();
                    for (k, &m) in g.adj[i].iter().enumerate() {
                        row.extend(std::iter::repeat_n(g.vertices[k].clone(), m as usize));
                    }
                    assert_eq!(row, phi2_neighbors(j), "p = {p}");
                }
            }
        }
    }
}

#[test]
fn larger_ell_graphs() {
    for ell in [5u64, 7, 13] {
        let g = build_graph(103, ell).unwrap();
        assert!(spectral_report(&g).unwrap().is_ramanujan());
    }
}
