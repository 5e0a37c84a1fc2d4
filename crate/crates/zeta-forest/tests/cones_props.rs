//! Cones, their forest dictionaries, conical and Mordell-Tornheim reductions.

mod common;

use common::{forest, q, word};
use zeta_forest::enumerate::forests_up_to_size;
use zeta_forest::{
    czv_reduce, czv_reduce_shuffle_words, debinarize, is_convergent_forest, is_tree_like,
    mt_reduce, phi, poset_of_cone, psi, second_representing_matrix, Cone, LinComb, MzvExpr, Q,
};

fn c1() -> Cone {
    Cone::new(
        vec![vec![1, 1, 1], vec![0, 1, 0], vec![0, 0, 1]],
        vec![2, 1, 1],
    )
    .unwrap()
}

fn c2() -> Cone {
    Cone::new(
        vec![
            vec![1, 1, 1, 1, 1],
            vec![0, 1, 0, 0, 1],
            vec![0, 0, 1, 0, 0],
            vec![0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 1],
        ],
        vec![4, 2, 1, 1, 1],
    )
    .unwrap()
}

fn c3() -> Cone {
    Cone::new(
        vec![
            vec![1, 1, 1, 1, 1, 1, 1],
            vec![0, 1, 1, 1, 1, 1, 1],
            vec![0, 0, 1, 0, 0, 0, 0],
            vec![0, 0, 0, 1, 0, 0, 0],
            vec![0, 0, 0, 0, 1, 1, 1],
            vec![0, 0, 0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 0, 0, 1],
        ],
        vec![5, 2, 1, 2, 2, 1, 1],
    )
    .unwrap()
}

#[test]
fn the_three_reference_cones_are_tree_like_and_maximal() {
    for (name, cone) in [("C1", c1()), ("C2", c2()), ("C3", c3())] {
        assert!(cone.is_unimodular(), "{name} is unimodular");
        assert!(cone.is_maximal(), "{name} has independent rows");
        assert!(is_tree_like(&cone).unwrap(), "{name} is tree-like");
    }
}

#[test]
fn psi_reads_the_forests_off_the_reference_cones() {
    assert_eq!(psi(&c1()).unwrap(), forest("2(1,1)"));
    assert_eq!(psi(&c2()).unwrap(), forest("4(1,1,2(1))"));
    assert_eq!(psi(&c3()).unwrap(), forest("5(2(1,2,2(1,1)))"));
}

#[test]
fn phi_and_psi_are_mutually_inverse_on_small_forests() {
    for f in forests_up_to_size(4, 3) {
        if f.is_empty() {
            continue;
        }
        let cone = phi(&f).unwrap();
        assert!(cone.is_unimodular());
        assert!(cone.is_maximal());
        assert!(is_tree_like(&cone).unwrap(), "phi({f}) is tree-like");
        assert_eq!(psi(&cone).unwrap(), f, "psi retracts phi on {f}");
        // The Hasse matrix of the cone has one mark per forest edge.
        let covers = second_representing_matrix(&cone).unwrap();
        let marks: usize = covers
            .iter()
            .map(|row| row.iter().filter(|&&b| b == 1).count())
            .sum();
        let edges = f.size() - f.trees().len();
        assert_eq!(marks, edges, "covers of phi({f})");
        // And the order relation it induces is exactly reachability.
        let relation = poset_of_cone(&cone).unwrap();
        let reflexive: usize = (0..cone.dim()).filter(|&i| relation[i][i]).count();
        assert_eq!(reflexive, cone.dim());
    }
}

#[test]
fn conical_reduction_golden_values() {
    let r1 = czv_reduce(&c1()).unwrap();
    assert_eq!(r1.to_string(), "2 * zeta(2,1,1)");

    let r2 = czv_reduce(&c2()).unwrap();
    let expected = MzvExpr::new(LinComb::from_terms(vec![
        (word("[4,1,1,2,1]"), q(2)),
        (word("[4,1,2,1,1]"), q(6)),
        (word("[4,2,1,1,1]"), q(12)),
    ]))
    .unwrap();
    assert_eq!(r2, expected);

    let r3 = czv_reduce(&c3()).unwrap();
    let expected = MzvExpr::new(LinComb::from_terms(vec![
        (word("[5,2,1,2,2,1,1]"), q(8)),
        (word("[5,2,1,3,1,1,1]"), q(16)),
        (word("[5,2,1,2,1,1,2]"), q(2)),
        (word("[5,2,1,2,1,2,1]"), q(4)),
        (word("[5,2,2,2,1,1,1]"), q(48)),
        (word("[5,2,2,1,2,1,1]"), q(28)),
        (word("[5,2,2,1,1,1,2]"), q(8)),
        (word("[5,2,2,1,1,2,1]"), q(16)),
        (word("[5,2,3,1,1,1,1]"), q(80)),
    ]))
    .unwrap();
    assert_eq!(r3, expected);

    // Weight is conserved: every zeta argument list sums to the cone weight.
    for (cone, weight) in [(c1(), 4u64), (c2(), 9), (c3(), 14)] {
        let reduced = czv_reduce(&cone).unwrap();
        for (w, _) in reduced.comb().iter() {
            assert_eq!(w.weight(), weight);
        }
    }
}

#[test]
fn the_two_conical_routes_agree_after_debinarisation() {
    for cone in [c1(), c2(), c3()] {
        let route_a = czv_reduce(&cone).unwrap();
        let route_b = czv_reduce_shuffle_words(&cone)
            .unwrap()
            .try_map_basis(|w| debinarize(w))
            .unwrap();
        assert_eq!(route_a.comb(), &route_b);
    }
}

#[test]
fn the_two_routes_agree_on_every_small_convergent_forest() {
    for f in forests_up_to_size(4, 3) {
        if f.is_empty() || !is_convergent_forest(&f, false) {
            continue;
        }
        let cone = phi(&f).unwrap();
        let route_a = czv_reduce(&cone).unwrap();
        let route_b = czv_reduce_shuffle_words(&cone)
            .unwrap()
            .try_map_basis(|w| debinarize(w))
            .unwrap();
        assert_eq!(route_a.comb(), &route_b, "forest {f}");
    }
}

#[test]
fn cone_json_round_trips() {
    for cone in [c1(), c2(), c3()] {
        let text = serde_json::to_string(&cone.to_json_value()).unwrap();
        assert_eq!(Cone::from_json(&text).unwrap(), cone);
    }
}

#[test]
fn mzv_expr_json_round_trips() {
    for cone in [c1(), c2(), c3()] {
        let expr = czv_reduce(&cone).unwrap();
        let text = serde_json::to_string(&expr.to_json_value()).unwrap();
        assert_eq!(MzvExpr::from_json(&text).unwrap(), expr);
    }
}

#[test]
fn mordell_tornheim_reduction_recovers_the_euler_product() {
    // MT(2,2 | 0) factorises as zeta(2)^2; the reduction must deliver the
    // stuffle expansion 2 zeta(2,2) + 4 zeta(3,1), which equals zeta(2)^2 by
    // Euler's zeta(4) = 4 zeta(3,1).
    let reduction = mt_reduce(&[2, 2], 0).unwrap();
    let expr = reduction.zeta_expr().unwrap();
    let expected = MzvExpr::new(LinComb::from_terms(vec![
        (word("[2,2]"), q(2)),
        (word("[3,1]"), q(4)),
    ]))
    .unwrap();
    assert_eq!(expr, expected);
}

#[test]
fn mordell_tornheim_weight_and_permutation_bookkeeping() {
    for (s, s0) in [
        (vec![1u64, 1], 2u64),
        (vec![2, 1], 1),
        (vec![3, 0, 1], 2),
        (vec![1, 1, 1], 1),
        (vec![2, 2, 2], 0),
    ] {
        let reduction = mt_reduce(&s, s0).unwrap();
        let weight: u64 = s.iter().sum::<u64>() + s0;
        for (w, _) in reduction.binary_words().iter() {
            assert_eq!(w.len() as u64, weight, "MT({s:?} | {s0})");
        }
        // The recorded permutation really sorts the input ascending.
        let sorted: Vec<u64> = reduction
            .permutation()
            .iter()
            .map(|&i| s[i])
            .collect();
        assert_eq!(sorted, reduction.sorted_exponents());
        let mut resorted = s.clone();
        resorted.sort_unstable();
        assert_eq!(resorted, reduction.sorted_exponents());
    }
}

#[test]
fn mordell_tornheim_rejections() {
    // Divergent by the partial-sum criterion.
    assert!(matches!(
        mt_reduce(&[1, 2], 0),
        Err(zeta_forest::Error::Divergent(_))
    ));
    // Two zero exponents cannot be cancelled one at a time. (With s0 = 3 the
    // partial-sum criterion passes, so the zero count is what trips.)
    assert!(matches!(
        mt_reduce(&[0, 0, 3], 3),
        Err(zeta_forest::Error::Unsupported(_))
    ));
    // Empty exponent lists are meaningless.
    assert!(mt_reduce(&[], 2).is_err());
}

#[test]
fn divergent_cones_are_refused() {
    // A cone whose forest has a root decorated 1 cannot be reduced.
    let divergent = Cone::new(
        vec![vec![1, 1], vec![0, 1]],
        vec![1, 2],
    )
    .unwrap();
    assert!(is_tree_like(&divergent).unwrap());
    assert!(matches!(
        czv_reduce(&divergent),
        Err(zeta_forest::Error::Divergent(_))
    ));
    assert!(matches!(
        czv_reduce_shuffle_words(&divergent),
        Err(zeta_forest::Error::Divergent(_))
    ));
}
