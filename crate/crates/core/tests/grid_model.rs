mod common;

use common::{free_chain_plus_point, graded_by_intervals, order_of};
use latmod::congruence::{g_congruence, maximum_graded_quotient, DEFAULT_CONGRUENCE_CAP};
use latmod::constructions::{grid_quotient, GridQuotient};
use latmod::properties::{is_distributive, is_graded};

#[test]
fn grid_shape() {
    for k in 0..=6 {
        let g = grid_quotient(k).unwrap();
        let l = &g.lattice;
        assert_eq!(l.size(), GridQuotient::expected_size(k));
        assert_eq!(l.size(), (k + 2) * (k + 5) / 2 - 1);
        assert!(is_graded(l).verdict);
        assert!(is_distributive(l).verdict);
        assert_eq!(l.height(l.top()), 2 * k + 2);
        for x in l.elements() {
            assert_eq!(l.height(x), g.rank_of(x));
        }
        let mut gens = g.x.clone();
        gens.push(g.y);
        assert_eq!(l.sublattice_generated(&gens).len(), l.size());
    }
    assert!(graded_by_intervals(&order_of(&grid_quotient(2).unwrap().lattice)));
}

#[test]
fn elements_below_y() {
    for k in 0..=6 {
        let g = grid_quotient(k).unwrap();
        let l = &g.lattice;
        let mut below: Vec<usize> = l.elements().filter(|&e| l.leq(e, g.y)).collect();
        let mut expected: Vec<usize> = g.x.iter().map(|&x| l.meet(g.y, x)).collect();
        expected.push(g.y);
        expected.sort_unstable();
        expected.dedup();
        below.sort_unstable();
        assert_eq!(below, expected, "k = {k}");
        assert_eq!(below.len(), k + 2);
    }
}

#[test]
fn strict_up_set_of_x0_is_generated() {
    for k in 0..=6 {
        let g = grid_quotient(k).unwrap();
        let l = &g.lattice;
        let x0 = g.x[0];
        let mut gens: Vec<usize> = g.x[1..].to_vec();
        gens.push(l.join(g.y, x0));
        let generated = l.sublattice_generated(&gens);
        let above: Vec<usize> = l.elements().filter(|&e| g.index[e].0 >= 0 && e != x0).collect();
        assert_eq!(generated, above, "k = {k}");
        assert!(above.iter().all(|&e| l.lt(x0, e)));
        let xk = g.x[k];
        assert_eq!(l.join(l.meet(g.y, xk), x0), l.meet(l.join(g.y, x0), xk));
        assert_eq!(g.index[l.join(l.meet(g.y, xk), x0)], (0, k as i64));
    }
}

#[test]
fn free_model_collapses_onto_g1() {
    let free = free_chain_plus_point();
    assert!(!is_graded(&free).verdict);
    let g = g_congruence(&free, DEFAULT_CONGRUENCE_CAP).unwrap();
    // Exactly (y∧x₁)∨x₀ and (y∨x₀)∧x₁ are identified.
    assert_eq!(g.classes().iter().filter(|c| c.len() > 1).collect::<Vec<_>>(), vec![&vec![3, 4]]);
    let q = maximum_graded_quotient(&free, DEFAULT_CONGRUENCE_CAP).unwrap().unwrap();
    assert_eq!(q.lattice.canonical_form(), grid_quotient(1).unwrap().lattice.canonical_form());
}
