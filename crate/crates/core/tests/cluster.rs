mod support;

use qq_core::cluster::{denominator_vector, enumerate_cluster_variables, CVar, Seed};
use qq_core::laurent::Laurent;
use qq_core::quiver::{positive_roots, DynkinQuiver, DynkinType};

fn x(i: usize) -> Laurent<CVar> {
    Laurent::var(CVar::X(i))
}

fn big_x(i: usize) -> Laurent<CVar> {
    Laurent::var(CVar::Frozen(i))
}

#[test]
fn a2_ice_quiver() {
    let q = DynkinQuiver::new(DynkinType::A, 2, &[(1, 2)]).unwrap();
    let mut arrows = Seed::initial(&q).arrows();
    arrows.sort();
    let mut expected = vec![((1, 0), (1, 1)), ((2, 0), (2, 1)), ((2, 0), (1, 0)), ((2, 1), (1, 1)), ((1, 1), (2, 0))];
    expected.sort();
    assert_eq!(arrows, expected);
}

#[test]
fn a2_cluster_variables() {
    let q = DynkinQuiver::new(DynkinType::A, 2, &[(1, 2)]).unwrap();
    let t = enumerate_cluster_variables(&q).unwrap();
    assert!(t.anomalies.is_empty());
    assert_eq!(t.len(), 5);
    // [DERIVED] μ at (2,0): the arrow (1,1) → (2,0) gives X_1; (2,0) → (1,0) and (2,0) → (2,1) give x_1 X_2.
    let expected = (&big_x(1) + &(&x(1) * &big_x(2))).div_exact(&x(2)).unwrap();
    assert_eq!(t.get(&"0,1".parse().unwrap()).unwrap(), &expected);
}

#[test]
fn counts_and_positivity() {
    let mut quivers = support::every_test_quiver();
    quivers.extend(DynkinQuiver::all_orientations(DynkinType::D, 5).unwrap().into_iter().take(4));
    for q in quivers {
        let t = enumerate_cluster_variables(&q).unwrap();
        let roots = positive_roots(&q);
        assert!(t.anomalies.is_empty(), "{}: {:?}", q.label(), t.anomalies);
        assert_eq!(t.len(), roots.len() + q.rank(), "{}", q.label());
        for r in &roots {
            let p = t.get(r).unwrap();
            assert!(p.all_coefficients_positive(), "{} {r}", q.label());
            assert_eq!(denominator_vector(p, q.rank()), r.coeffs().iter().map(|&c| i64::from(c)).collect::<Vec<_>>());
        }
    }
}
