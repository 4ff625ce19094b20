//! Heisenberg group structure against direct oracles: centres from the
//! commutator formula, Weyl relations from permutation and diagonal matrices.

use std::sync::Arc;

use heisenrig::caps::Caps;
use heisenrig::character::{certify_frobenius, is_nondegenerate, Pairing};
use heisenrig::heisenberg::HeisenbergGroup;
use heisenrig::ring::build_ring;
use heisenrig::schrodinger::{pi, verify_homomorphism, verify_weyl, CheckMode, Representation};

fn group(spec: &str, n: usize, b: Vec<Vec<usize>>) -> Arc<HeisenbergGroup> {
    let ring = build_ring(spec).unwrap();
    let ch = certify_frobenius(&ring).generating.unwrap();
    HeisenbergGroup::new(Pairing::new(&ring, n, b).unwrap(), ch).unwrap()
}

/// `(x, y, k)` is central iff `eps(beta(y', x) - beta(y, x')) = 1` for all `(x', y')`.
fn oracle_centre_size(g: &HeisenbergGroup) -> usize {
    let d = g.module().size();
    let p = g.pairing();
    let ch = g.character();
    let ring = g.ring();
    let central_xy = (0..d)
        .flat_map(|x| (0..d).map(move |y| (x, y)))
        .filter(|&(x, y)| {
            (0..d).all(|x2| (0..d).all(|y2| ch.log(ring.sub_idx(p.eval(y2, x), p.eval(y, x2))) == 0))
        })
        .count();
    central_xy * g.central_order() as usize
}

#[test]
fn centre_matches_commutator_oracle() {
    let cases = [
        ("Z/4", 1, vec![vec![1]]),
        ("Z/4", 1, vec![vec![2]]),
        ("Z/4", 1, vec![vec![0]]),
        ("Z/6", 1, vec![vec![1]]),
        ("Z/2", 2, vec![vec![1, 0], vec![0, 0]]),
        ("Z/2", 2, vec![vec![1, 1], vec![0, 1]]),
        ("F2[t]/(t^2)", 1, vec![vec![2]]),
    ];
    for (spec, n, b) in cases {
        let g = group(spec, n, b.clone());
        let centre = g.centre(1 << 16).unwrap();
        assert_eq!(centre.len(), oracle_centre_size(&g), "{spec} {b:?}");
        let nd = is_nondegenerate(g.pairing(), g.character());
        assert_eq!(g.centre_is_mu(1 << 16).unwrap(), nd, "{spec} {b:?}");
    }
}

#[test]
fn group_axioms_hold() {
    for spec in ["Z/2", "Z/4", "F2[t]/(t^2+t+1)"] {
        let g = group(spec, 1, vec![vec![1]]);
        assert!(g.verify_axioms(1 << 16, 0).passed(), "{spec}");
        assert_eq!(g.generated_order(1 << 16).unwrap(), g.order(), "{spec}");
    }
}

#[test]
fn weyl_relation_entrywise() {
    let g = group("Z/4", 1, vec![vec![1]]);
    let cert = verify_weyl(&g, &Caps::default());
    assert_eq!((cert.mode, cert.pairs_checked, cert.violations.len()), (CheckMode::Exhaustive, 16, 0));
    // pi(x, 0, 1) pi(0, y, 1) = eps(beta(y, x)) pi(0, y, 1) pi(x, 0, 1), checked on one nonzero entry per row
    for x in 0..4 {
        for y in 0..4 {
            let lhs = pi(&g, &g.from_x(x)).mul(&pi(&g, &g.from_y(y))).unwrap();
            let rhs = pi(&g, &g.from_y(y)).mul(&pi(&g, &g.from_x(x))).unwrap();
            let scalar = g.character().eval(g.pairing().eval(y, x));
            assert_eq!(lhs, rhs.scale(&scalar));
        }
    }
}

#[test]
fn schrodinger_is_a_homomorphism() {
    for (spec, n, b) in [("Z/4", 1, vec![vec![1]]), ("Z/2", 2, vec![vec![1, 1], vec![0, 1]])] {
        let g = group(spec, n, b);
        let cert = verify_homomorphism(&Representation::schrodinger(&g), &Caps::default(), 0);
        assert_eq!(cert.mode, CheckMode::Exhaustive);
        assert_eq!(cert.pairs_checked, g.order() * g.order());
        assert!(cert.passed(), "{spec}");
    }
}
