mod common;

use detgraph::graph::DEFAULT_ENUM_CAP;
use detgraph::measures::{random_chains, random_connection, random_forms, MeasureSpec};
use detgraph::oracle::{
    compare_measure, compare_polynomial, enumerate_family, tree_count_check, Family,
    DEFAULT_TOLERANCE,
};
use detgraph::polynomials::Polynomial;
use detgraph::{Error, Execution, WeightedGraph};
use std::time::Instant;

const EXEC: Execution = Execution::Parallel;

#[test]
fn family_sizes() {
    let tri = WeightedGraph::triangle();
    let count = |g: &WeightedGraph, f: Family| enumerate_family(g, f, 20, EXEC).unwrap().len();
    assert_eq!(count(&tri, Family::Connected(0)), 3);
    assert_eq!(count(&tri, Family::Connected(1)), 1);
    assert_eq!(count(&tri, Family::Forest(3)), 1);
    assert_eq!(count(&tri, Family::Crsf), 1);
    // K4: removing 2 of 6 edges never isolates a vertex, so all C(6,4) = 15 are unicyclic.
    let k4 = WeightedGraph::complete(4);
    assert_eq!(count(&k4, Family::Connected(0)), 16);
    assert_eq!(count(&k4, Family::Connected(1)), 15);
    assert_eq!(count(&k4, Family::Forest(4)), 1);
    let c4 = WeightedGraph::cycle(4);
    assert_eq!(count(&c4, Family::Forest(2)), 6);
}

#[test]
fn families_have_constant_size() {
    let g = common::random_graph(9, 5);
    for f in [Family::Connected(1), Family::Forest(2), Family::Crsf, Family::Mixed { k: 1, l: 1 }] {
        let expected = f.size(&g).unwrap();
        for s in enumerate_family(&g, f, 20, EXEC).unwrap() {
            assert_eq!(s.len(), expected);
            assert!(f.contains(&g, &s));
        }
    }
}

#[test]
fn cayley_via_tree_count_check() {
    for n in 2..=5 {
        let (count, det) = tree_count_check(&WeightedGraph::complete(n), 20).unwrap();
        assert_eq!(count, n.pow(n as u32 - 2));
        assert!((det - count as f64).abs() < 1e-8);
    }
}

#[test]
fn measures_match_enumeration() {
    for s in 0..10u64 {
        let g = common::random_graph(5 + s as usize % 5, 10 + s);
        let m = g.num_edges();
        let mut specs = vec![
            MeasureSpec::Ust,
            MeasureSpec::ForestK { phi: random_chains(m, 1, 11 + s) },
            MeasureSpec::Crsf { connection: random_connection(m, 12 + s) },
        ];
        if g.betti1() >= 1 {
            specs.push(MeasureSpec::ConnectedK { theta: random_forms(m, 1, 13 + s) });
        }
        for spec in &specs {
            let r = compare_measure(&g, spec, DEFAULT_TOLERANCE, 20, EXEC).unwrap();
            assert!(r.pass, "{} {r:?}", spec.name());
            assert_eq!(r.support_mismatches, 0);
        }
    }
}

#[test]
fn polynomial_examples() {
    let grid = WeightedGraph::grid(3, 3).unwrap();
    let r = compare_polynomial(&grid, &Polynomial::Kirchhoff, 1e-9, 20, EXEC).unwrap();
    assert!(r.pass && r.family_size == 192, "{r:?}");
    let g = common::random_graph(7, 20);
    let q = common::random_charge(g.num_vertices(), 21);
    let r = compare_polynomial(&g, &Polynomial::Psi2 { q }, 1e-9, 20, EXEC).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn reports_serialize() {
    let r = compare_measure(&WeightedGraph::triangle(), &MeasureSpec::Ust, 1e-9, 20, EXEC).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["family_size"], 3);
    assert_eq!(v["pass"], true);
}

#[test]
fn cap_is_enforced() {
    let g = WeightedGraph::grid(4, 4).unwrap();
    assert!(matches!(
        compare_measure(&g, &MeasureSpec::Ust, 1e-9, DEFAULT_ENUM_CAP, EXEC),
        Err(Error::CapExceeded { .. })
    ));
}

#[test]
fn sequential_and_parallel_agree() {
    let g = common::random_graph(10, 30);
    let spec = MeasureSpec::ForestK { phi: random_chains(10, 2, 31) };
    let a = compare_measure(&g, &spec, 1e-9, 20, Execution::Parallel).unwrap();
    let b = compare_measure(&g, &spec, 1e-9, 20, Execution::Sequential).unwrap();
    assert_eq!(a.family_size, b.family_size);
    assert_eq!(a.max_abs_density_err, b.max_abs_density_err);
}

#[test]
fn twenty_edges_within_budget() {
    let g = WeightedGraph::random(12, 20, 40).unwrap();
    let start = Instant::now();
    let r = compare_measure(&g, &MeasureSpec::Ust, 1e-9, 20, EXEC).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(start.elapsed().as_secs_f64() < 60.0);
}
