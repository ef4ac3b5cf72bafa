use krl_core::graph_rings::graded_structure;
use krl_core::graphs::{make_standard, BiGraph, Folding, StandardKind};
use krl_core::mvss::exactness_check;
use krl_core::topology::{build_y_poset, compare_with_s, product_cellular_cohomology, pullback_check, OctPoset, Route, DEFAULT_SIMPLEX_BUDGET};

fn c(n: usize) -> BiGraph {
    make_standard(StandardKind::C, n).unwrap()
}

#[test]
fn y_of_c2() {
    let g = c(2);
    let y = build_y_poset(&g).unwrap();
    let k = y.complex(DEFAULT_SIMPLEX_BUDGET).unwrap();
    assert!(k.boundary_squared_zero());
    assert_eq!(k.euler_characteristic(), 6);
    let r = compare_with_s(&g, DEFAULT_SIMPLEX_BUDGET).unwrap();
    assert_eq!(r.route, Route::Simplicial);
    assert_eq!(r.cohomology.ranks(), vec![1, 0, 3, 0, 2]);
    assert!(r.matches && r.torsion_free);
    assert_eq!(graded_structure(&g, None).trimmed_ranks(), vec![1, 3, 2]);
}

#[test]
fn octahedron_is_a_sphere() {
    let k = OctPoset::complex();
    assert_eq!(k.euler_characteristic(), 2);
    assert_eq!(k.integral_cohomology().ranks(), vec![1, 0, 1]);
}

#[test]
fn paths_are_sphere_products() {
    for n in 1..=2 {
        let l = make_standard(StandardKind::L, n).unwrap();
        let r = compare_with_s(&l, DEFAULT_SIMPLEX_BUDGET).unwrap();
        assert_eq!(r.route, Route::Cellular);
        assert_eq!(r.cohomology, product_cellular_cohomology(2 * n));
        assert!(r.matches);
    }
}

#[test]
fn pullbacks_are_subcomplexes() {
    let to_c1 = Folding::from_classes(4, &[vec![0, 2], vec![1, 3]]).unwrap();
    let r = pullback_check(&c(2), &to_c1, DEFAULT_SIMPLEX_BUDGET).unwrap();
    assert!(r.ok() && r.simplices_checked > 0);
    let to_path = Folding::from_classes(4, &[vec![0], vec![1, 3], vec![2]]).unwrap();
    assert!(pullback_check(&c(2), &to_path, DEFAULT_SIMPLEX_BUDGET).unwrap().ok());
}

#[test]
fn budget_is_enforced() {
    assert!(build_y_poset(&c(2)).unwrap().complex(10).is_err());
}

#[test]
fn total_complex_exact_n4() {
    let r = exactness_check(4).unwrap();
    assert!(r.ok, "{:?}", r.triangular_failures);
}
