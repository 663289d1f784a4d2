mod common;

use detgraph::graph::{planar_dual, SubgraphMask};
use detgraph::linalg::{self, CMat, Chain1, Form1, C64};
use detgraph::measures::{
    build_kernel, crsf_weight, cycle_weight, dual_transport, forest_weight,
    forest_weight_omitting, random_chains, random_connection, random_forms, weight, MeasureSpec,
};
use detgraph::oracle::{compare_measure, enumerate_family, Family};
use detgraph::{Edge, Error, Execution, WeightedGraph};
use itertools::Itertools;

const EXEC: Execution = Execution::Parallel;

#[test]
fn ust_kernel_on_triangle() {
    let k = build_kernel(&WeightedGraph::triangle(), &MeasureSpec::Ust).unwrap();
    assert!(k.diagonal().iter().all(|d| (d - 2.0 / 3.0).abs() < 1e-12));
}

#[test]
fn extreme_k_give_point_masses() {
    let g = WeightedGraph::grid(2, 3).unwrap();
    let m = g.num_edges();
    let theta = random_forms(m, g.betti1(), 3);
    let k = build_kernel(&g, &MeasureSpec::ConnectedK { theta }).unwrap();
    assert!(linalg::max_abs(&(k.matrix() - CMat::identity(m, m))) < 1e-10);
    assert_eq!(k.sample(1), (0..m).collect_vec());

    let phi = random_chains(m, g.num_vertices() - 1, 4);
    let k = build_kernel(&g, &MeasureSpec::ForestK { phi }).unwrap();
    assert_eq!(k.rank(), 0);
    assert!(k.sample(1).is_empty());
}

#[test]
fn kernel_ranks() {
    let g = common::random_graph(10, 5);
    let m = g.num_edges();
    let n = g.num_vertices() - 1;
    let ust = build_kernel(&g, &MeasureSpec::Ust).unwrap().rank();
    assert_eq!(ust, n);
    for k in 1..=2 {
        let c = build_kernel(&g, &MeasureSpec::ConnectedK { theta: random_forms(m, k, 6) }).unwrap();
        assert_eq!(c.rank() - ust, k);
        let f = build_kernel(&g, &MeasureSpec::ForestK { phi: random_chains(m, k, 7) }).unwrap();
        assert_eq!(f.rank(), n - k);
    }
    let mixed = MeasureSpec::Mixed {
        phi: random_chains(m, 2, 8),
        theta: random_forms(m, 1, 9),
    };
    assert_eq!(build_kernel(&g, &mixed).unwrap().rank(), n - 1);
    let crsf = MeasureSpec::Crsf { connection: random_connection(m, 10) };
    assert_eq!(build_kernel(&g, &crsf).unwrap().rank(), n + 1);
}

#[test]
fn zero_forms_reproduce_ust() {
    let g = common::random_graph(9, 11);
    let ust = build_kernel(&g, &MeasureSpec::Ust).unwrap();
    for spec in [
        MeasureSpec::ConnectedK { theta: vec![] },
        MeasureSpec::ForestK { phi: vec![] },
        MeasureSpec::Mixed { phi: vec![], theta: vec![] },
    ] {
        let k = build_kernel(&g, &spec).unwrap();
        assert!(linalg::max_abs(&(k.matrix() - ust.matrix())) < 1e-10);
    }
}

#[test]
fn cycle_weight_examples() {
    let g = WeightedGraph::triangle().with_weights(vec![2.0, 3.0, 5.0]).unwrap();
    let t = SubgraphMask::from_edges(&g, &[0, 1]).unwrap();
    assert_eq!(cycle_weight(&g, &t, &[]).unwrap().value, 6.0);
    let full = SubgraphMask::full(&g);
    let w = cycle_weight(&g, &full, &[Form1::unit(3, 0)]).unwrap();
    assert!((w.value - 30.0).abs() < 1e-12);
    assert_eq!(w.topological, 1.0);
    assert!(matches!(
        cycle_weight(&g, &t, &[Form1::unit(3, 0)]),
        Err(Error::WrongBetti { .. })
    ));
}

#[test]
fn cycle_weight_is_basis_independent() {
    // Same subgraph, edges listed in a different order: the greedy tree and
    // hence the cycle basis change.
    let g = common::random_graph(11, 12);
    let perm = (0..g.num_edges()).rev().collect_vec();
    let h = g.permuted(&perm).unwrap();
    let theta = random_forms(g.num_edges(), 2, 13);
    let theta_h = theta
        .iter()
        .map(|t| Form1::from_complex(perm.iter().map(|&p| t.0[p]).collect_vec()))
        .collect_vec();
    for s in enumerate_family(&g, Family::Connected(2), 20, EXEC).unwrap() {
        let image = s.edges().iter().map(|&e| perm.iter().position(|&p| p == e).unwrap()).collect_vec();
        let sh = SubgraphMask::from_edges(&h, &image).unwrap();
        let a = cycle_weight(&g, &s, &theta).unwrap().value;
        let b = cycle_weight(&h, &sh, &theta_h).unwrap().value;
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn forest_weight_examples() {
    let g = WeightedGraph::triangle().with_weights(vec![2.0, 3.0, 5.0]).unwrap();
    let f = SubgraphMask::from_edges(&g, &[0]).unwrap();
    // Components {0,1} and {2}; the cut around {2} meets e₂ with sign +1.
    let w = forest_weight(&g, &f, &[Chain1::unit(3, 1)]).unwrap();
    assert!((w.value - 2.0).abs() < 1e-12);
    let t = SubgraphMask::from_edges(&g, &[1, 2]).unwrap();
    assert!((forest_weight(&g, &t, &[]).unwrap().value - 15.0).abs() < 1e-12);

    let g = common::random_graph(10, 14);
    let phi = random_chains(10, 2, 15);
    for f in enumerate_family(&g, Family::Forest(3), 20, EXEC).unwrap().iter().step_by(3) {
        let w: Vec<f64> = (0..3)
            .map(|o| forest_weight_omitting(&g, f, &phi, o).unwrap().value)
            .collect();
        assert!((w[0] - w[1]).abs() <= 1e-12 * w[0].max(1e-300) && (w[1] - w[2]).abs() <= 1e-12 * w[0].max(1e-300));
    }
}

#[test]
fn crsf_weight_examples() {
    let g = WeightedGraph::triangle();
    let full = SubgraphMask::full(&g);
    let trivial = vec![C64::new(1.0, 0.0); 3];
    assert_eq!(crsf_weight(&g, &full, &trivial).unwrap().value, 0.0);
    let flip = vec![C64::new(-1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
    assert!((crsf_weight(&g, &full, &flip).unwrap().value - 4.0).abs() < 1e-12);
    let bad = vec![C64::new(0.5, 0.0); 3];
    assert!(matches!(crsf_weight(&g, &full, &bad), Err(Error::NonUnitConnection(0))));

    let theta = WeightedGraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
    let h = random_connection(3, 1);
    assert!(matches!(
        crsf_weight(&theta, &SubgraphMask::full(&theta), &h),
        Err(Error::ComponentBettiTooLarge(2))
    ));
}

#[test]
fn crsf_measure_on_triangle_with_pendant() {
    let g = WeightedGraph::new(
        4,
        vec![Edge::new(0, 1), Edge::new(1, 2), Edge::new(2, 0), Edge::new(2, 3)],
        vec![1.0, 2.0, 0.5, 1.5],
    )
    .unwrap();
    let spec = MeasureSpec::Crsf { connection: random_connection(4, 21) };
    let r = compare_measure(&g, &spec, 1e-9, 20, EXEC).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.family_size, 1);

    let g = common::random_graph(10, 22);
    let spec = MeasureSpec::Crsf { connection: random_connection(10, 23) };
    assert!(compare_measure(&g, &spec, 1e-9, 20, EXEC).unwrap().pass);
}

#[test]
fn mixed_measure_support() {
    for s in 0..6u64 {
        let g = common::random_graph(8 + s as usize, 30 + s);
        let m = g.num_edges();
        let (k, l) = (1 + s as usize % 2, 1 + (s as usize / 2) % 2);
        if g.num_vertices() <= k || g.betti1() < l {
            continue;
        }
        let spec = MeasureSpec::Mixed {
            phi: random_chains(m, k, 31 + s),
            theta: random_forms(m, l, 32 + s),
        };
        let r = compare_measure(&g, &spec, 1e-9, 20, EXEC).unwrap();
        assert!(r.pass, "{r:?}");
        let kernel = build_kernel(&g, &spec).unwrap();
        for sample in kernel.sample_batch(s, 1000, EXEC).samples {
            let mask = SubgraphMask::from_edges(&g, &sample).unwrap();
            assert!(spec.admits(&g, &mask));
            assert!(Family::Mixed { k, l }.contains(&g, &mask));
        }
    }
}

#[test]
fn samples_respect_support() {
    let g = common::random_graph(12, 40);
    let m = g.num_edges();
    let specs = [
        MeasureSpec::ConnectedK { theta: random_forms(m, 2, 41) },
        MeasureSpec::ForestK { phi: random_chains(m, 2, 42) },
        MeasureSpec::Crsf { connection: random_connection(m, 43) },
    ];
    for spec in &specs {
        let kernel = build_kernel(&g, spec).unwrap();
        for sample in kernel.sample_batch(5, 1000, EXEC).samples {
            let mask = SubgraphMask::from_edges(&g, &sample).unwrap();
            assert!(spec.admits(&g, &mask), "{} {sample:?}", spec.name());
        }
    }
}

#[test]
fn degenerate_inputs_are_rejected() {
    let g = WeightedGraph::triangle();
    let theta = vec![g.coboundary_forms()[1].clone()];
    assert!(build_kernel(&g, &MeasureSpec::ConnectedK { theta }).unwrap_err().is_degenerate());
    let cycle = Chain1::from_real(&[1.0, 1.0, 1.0]);
    assert!(build_kernel(&g, &MeasureSpec::ForestK { phi: vec![cycle] }).unwrap_err().is_degenerate());
    let short = vec![Form1::zeros(2)];
    assert!(matches!(
        build_kernel(&g, &MeasureSpec::ConnectedK { theta: short }),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(weight(&g, &MeasureSpec::Mixed { phi: vec![], theta: vec![] }, &SubgraphMask::full(&g)).is_err());
}

#[test]
fn planar_duality_of_measures() {
    for (name, g, emb) in common::planar_instances() {
        let g = g.with_weights(common::random_weights(g.num_edges(), 50)).unwrap();
        let (dual, spec) = dual_transport(&g, &emb, &MeasureSpec::Ust).unwrap();
        assert_eq!(spec, MeasureSpec::Ust);
        let kg = build_kernel(&g, &MeasureSpec::Ust).unwrap();
        let kd = build_kernel(&dual.graph, &MeasureSpec::Ust).unwrap();
        // Tree/co-tree duality: the dual UST is the complement process.
        let m = g.num_edges();
        let signless = (0..m).cartesian_product(0..m).map(|(i, j)| {
            (kg.complement().matrix()[(i, j)].norm() - kd.matrix()[(i, j)].norm()).abs()
        });
        assert!(signless.fold(0.0, f64::max) < 1e-10, "{name}");

        if g.num_vertices() > 1 {
            let phi = random_chains(m, 1, 51);
            let spec = MeasureSpec::ForestK { phi };
            let (dual, dspec) = dual_transport(&g, &emb, &spec).unwrap();
            let (_, back) = dual_transport(&dual.graph.inverted_weights(), &dual.embedding, &dspec).unwrap();
            assert_eq!(back, spec, "{name}");
            let kf = build_kernel(&g, &spec).unwrap();
            let kc = build_kernel(&dual.graph, &dspec).unwrap();
            for f in enumerate_family(&g, Family::Forest(2), 20, EXEC).unwrap() {
                let comp = f.complement(&g).edges();
                let a = kf.density(&f.edges()).unwrap();
                let b = kc.density(&comp).unwrap();
                assert!((a - b).abs() < 1e-10, "{name}");
            }
        }
        let d = planar_dual(&g, &emb).unwrap();
        assert_eq!(d.edge_map, (0..g.num_edges()).collect_vec());
    }
}

#[test]
fn measures_are_invariant_under_edge_relabeling() {
    let g = common::random_graph(9, 60);
    let perm = vec![3, 0, 8, 1, 7, 2, 6, 4, 5];
    let h = g.permuted(&perm).unwrap();
    let k1 = build_kernel(&g, &MeasureSpec::Ust).unwrap();
    let k2 = build_kernel(&h, &MeasureSpec::Ust).unwrap();
    for t in (0..9).combinations(k1.rank()).step_by(5) {
        let image = t.iter().map(|&e| perm.iter().position(|&p| p == e).unwrap()).sorted().collect_vec();
        assert!((k1.density(&t).unwrap() - k2.density(&image).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn random_inputs_are_seeded() {
    assert_eq!(random_forms(7, 2, 1), random_forms(7, 2, 1));
    assert_ne!(random_forms(7, 2, 1), random_forms(7, 2, 2));
    for f in random_forms(7, 3, 5) {
        assert!((f.0.norm() - 1.0).abs() < 1e-12);
    }
    assert!(random_connection(5, 3).iter().all(|h| (h.norm() - 1.0).abs() < 1e-12));
}
