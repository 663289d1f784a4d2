#![allow(dead_code)]

use detgraph::graph::{faces_from_drawing, PlanarEmbedding};
use detgraph::WeightedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected graph with `m` edges and between 3 and 7 vertices.
pub fn random_graph(m: usize, seed: u64) -> WeightedGraph {
    let mut r = rng(seed ^ 0x9e37);
    let n = r.random_range(3..=(m + 1).min(7));
    WeightedGraph::random(n, m, seed).unwrap()
}

pub fn random_weights(m: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..m).map(|_| r.random_range(0.3..=3.0)).collect()
}

/// Balanced real vertex charge.
pub fn random_charge(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let mut q: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
    let mean = q.iter().sum::<f64>() / n as f64;
    q.iter_mut().for_each(|v| *v -= mean);
    q
}

fn wheel(rim: usize) -> (WeightedGraph, Vec<(f64, f64)>) {
    let mut pairs = (0..rim).map(|i| (i, (i + 1) % rim)).collect::<Vec<_>>();
    pairs.extend((0..rim).map(|i| (rim, i)));
    let g = WeightedGraph::from_pairs(rim + 1, &pairs).unwrap();
    let mut coords = circle(rim);
    coords.push((0.0, 0.0));
    (g, coords)
}

fn circle(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect()
}

fn grid_coords(rows: usize, cols: usize) -> Vec<(f64, f64)> {
    (0..rows * cols)
        .map(|v| ((v % cols) as f64, (v / cols) as f64))
        .collect()
}

/// Embedded planar graphs with straight-line drawings.
pub fn planar_instances() -> Vec<(&'static str, WeightedGraph, PlanarEmbedding)> {
    let mut out = Vec::new();
    let mut push = |name, g: WeightedGraph, coords: Vec<(f64, f64)>| {
        let emb = faces_from_drawing(&g, &coords).unwrap();
        out.push((name, g, emb));
    };
    push("triangle", WeightedGraph::triangle(), circle(3));
    push("5-cycle", WeightedGraph::cycle(5), circle(5));
    push(
        "K4",
        WeightedGraph::complete(4),
        vec![(0.0, 0.0), (4.0, 0.0), (2.0, 3.0), (2.0, 1.0)],
    );
    push("grid 2x3", WeightedGraph::grid(2, 3).unwrap(), grid_coords(2, 3));
    push("grid 3x3", WeightedGraph::grid(3, 3).unwrap(), grid_coords(3, 3));
    let (w, c) = wheel(5);
    push("wheel 5", w, c);
    out
}
