//! Standalone SVG drawings of a graph with one sampled subgraph.

use std::fmt::Write;

use detgraph::WeightedGraph;
use petgraph::unionfind::UnionFind;

/// Which sampled edges get the thick stroke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Thicken {
    /// Edges surviving iterative leaf pruning.
    #[value(name = "2-core")]
    TwoCore,
    /// Edges lying on some cycle of the sample.
    Cycles,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Layout {
    Circle,
    Grid,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderStyle {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub vertex_radius: f64,
    pub background_stroke: f64,
    pub sample_stroke: f64,
    pub thick_stroke: f64,
    pub background_color: String,
    pub sample_color: String,
    pub thick_color: String,
    pub vertex_color: String,
    pub thicken: Thicken,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            width: 600.0,
            height: 600.0,
            margin: 20.0,
            vertex_radius: 2.5,
            background_stroke: 0.5,
            sample_stroke: 2.0,
            thick_stroke: 5.0,
            background_color: "#d0d0d0".into(),
            sample_color: "#1f3b73".into(),
            thick_color: "#b22222".into(),
            vertex_color: "#000000".into(),
            thicken: Thicken::TwoCore,
        }
    }
}

/// Edges of `sample` that remain after repeatedly deleting degree-one vertices.
pub fn two_core(g: &WeightedGraph, sample: &[usize]) -> Vec<usize> {
    let mut alive: Vec<usize> = sample.to_vec();
    loop {
        let mut degree = vec![0usize; g.num_vertices()];
        for &e in &alive {
            let edge = g.edge(e);
            degree[edge.tail] += 1;
            degree[edge.head] += 1;
        }
        let before = alive.len();
        alive.retain(|&e| {
            let edge = g.edge(e);
            degree[edge.tail] > 1 && degree[edge.head] > 1
        });
        if alive.len() == before {
            return alive;
        }
    }
}

/// Edges of `sample` that are not bridges of the sample.
pub fn cycle_edges(g: &WeightedGraph, sample: &[usize]) -> Vec<usize> {
    sample
        .iter()
        .copied()
        .filter(|&e| {
            let edge = g.edge(e);
            if edge.is_loop() {
                return true;
            }
            let mut uf = UnionFind::new(g.num_vertices());
            for &f in sample.iter().filter(|&&f| f != e) {
                uf.union(g.edge(f).tail, g.edge(f).head);
            }
            uf.equiv(edge.tail, edge.head)
        })
        .collect()
}

pub fn thick_edges(g: &WeightedGraph, sample: &[usize], thicken: Thicken) -> Vec<usize> {
    match thicken {
        Thicken::TwoCore => two_core(g, sample),
        Thicken::Cycles => cycle_edges(g, sample),
        Thicken::None => Vec::new(),
    }
}

/// Unit-square coordinates. Grid layout takes row-major ids with `cols` columns.
pub fn layout(n: usize, layout: Layout, cols: usize) -> Vec<(f64, f64)> {
    match layout {
        Layout::Circle => (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / n as f64;
                (0.5 + 0.5 * a.cos(), 0.5 + 0.5 * a.sin())
            })
            .collect(),
        Layout::Grid => {
            let cols = cols.max(1);
            let rows = n.div_ceil(cols);
            let span = |k: usize| if k > 1 { (k - 1) as f64 } else { 1.0 };
            (0..n)
                .map(|i| ((i % cols) as f64 / span(cols), (i / cols) as f64 / span(rows)))
                .collect()
        }
    }
}

pub fn render_svg(
    g: &WeightedGraph,
    sample: &[usize],
    coords: &[(f64, f64)],
    style: &RenderStyle,
) -> String {
    let inner_w = style.width - 2.0 * style.margin;
    let inner_h = style.height - 2.0 * style.margin;
    let pos = |v: usize| {
        let (x, y) = coords[v];
        (style.margin + x * inner_w, style.margin + y * inner_h)
    };
    let thick = thick_edges(g, sample, style.thicken);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        style.width, style.height, style.width, style.height
    );
    let mut line = |e: usize, color: &str, width: f64, class: &str| {
        let edge = g.edge(e);
        let (x1, y1) = pos(edge.tail);
        let (x2, y2) = pos(edge.head);
        let _ = writeln!(
            out,
            r#"  <line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="{width}" stroke-linecap="round"/>"#
        );
    };
    for e in 0..g.num_edges() {
        line(e, &style.background_color, style.background_stroke, "graph");
    }
    for &e in sample.iter().filter(|e| !thick.contains(e)) {
        line(e, &style.sample_color, style.sample_stroke, "sample");
    }
    for &e in &thick {
        line(e, &style.thick_color, style.thick_stroke, "thick");
    }
    for v in 0..g.num_vertices() {
        let (x, y) = pos(v);
        let _ = writeln!(
            out,
            r#"  <circle cx="{x:.2}" cy="{y:.2}" r="{}" fill="{}"/>"#,
            style.vertex_radius, style.vertex_color
        );
    }
    out.push_str("</svg>\n");
    out
}
