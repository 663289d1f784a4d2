//! Explicit sphere embeddings given by face boundary walks, and planar duals.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{Edge, WeightedGraph};
use crate::error::{Error, Result};

/// An edge traversed forward (tail to head) or backward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

impl Dart {
    pub fn new(edge: usize, forward: bool) -> Self {
        Dart { edge, forward }
    }

    pub fn rev(self) -> Self {
        Dart::new(self.edge, !self.forward)
    }

    fn index(self) -> usize {
        2 * self.edge + usize::from(!self.forward)
    }

    pub fn source(self, g: &WeightedGraph) -> usize {
        let e = g.edge(self.edge);
        if self.forward {
            e.tail
        } else {
            e.head
        }
    }

    pub fn target(self, g: &WeightedGraph) -> usize {
        self.rev().source(g)
    }
}

/// Face walks of a cellular embedding of a connected graph in the sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarEmbedding {
    pub faces: Vec<Vec<Dart>>,
}

impl PlanarEmbedding {
    /// Checks that every dart lies in exactly one closed walk and that Euler's
    /// formula for the sphere holds.
    pub fn validate(&self, g: &WeightedGraph) -> Result<Vec<usize>> {
        let mut face_of = vec![usize::MAX; 2 * g.num_edges()];
        for (f, walk) in self.faces.iter().enumerate() {
            if walk.is_empty() {
                return Err(Error::InvalidEmbedding(format!("face {f} is empty")));
            }
            for (i, d) in walk.iter().enumerate() {
                if d.edge >= g.num_edges() {
                    return Err(Error::EdgeOutOfRange(d.edge));
                }
                if face_of[d.index()] != usize::MAX {
                    return Err(Error::InvalidEmbedding(format!(
                        "dart {:?} appears twice",
                        d
                    )));
                }
                face_of[d.index()] = f;
                let next = walk[(i + 1) % walk.len()];
                if d.target(g) != next.source(g) {
                    return Err(Error::InvalidEmbedding(format!(
                        "face {f} is not a closed walk at position {i}"
                    )));
                }
            }
        }
        if let Some(i) = face_of.iter().position(|&f| f == usize::MAX) {
            return Err(Error::InvalidEmbedding(format!(
                "dart {:?} is in no face",
                Dart::new(i / 2, i % 2 == 0)
            )));
        }
        let euler = g.num_vertices() as i64 - g.num_edges() as i64 + self.faces.len() as i64;
        if euler != 2 {
            return Err(Error::InvalidEmbedding(format!(
                "Euler characteristic {euler}, expected 2"
            )));
        }
        Ok(face_of)
    }

    /// Faces of the dual embedding, one per vertex of `g` (in vertex order),
    /// in the same dart encoding: dart `(e, fwd)` of the dual goes from the
    /// face of the reversed dart to the face of dart `(e, fwd)` of `g`.
    pub fn dual_faces(&self, g: &WeightedGraph) -> Result<Vec<Vec<Dart>>> {
        self.validate(g)?;
        let mut next = vec![Dart::new(0, true); 2 * g.num_edges()];
        for walk in &self.faces {
            for (i, d) in walk.iter().enumerate() {
                next[d.index()] = walk[(i + 1) % walk.len()];
            }
        }
        let mut seen = vec![false; 2 * g.num_edges()];
        let mut out = vec![Vec::new(); g.num_vertices()];
        for e in 0..g.num_edges() {
            for fwd in [true, false] {
                let start = Dart::new(e, fwd);
                if seen[start.index()] {
                    continue;
                }
                // Rotation around the source vertex: d -> next(rev d).
                let mut orbit = Vec::new();
                let mut d = start;
                while !seen[d.index()] {
                    seen[d.index()] = true;
                    orbit.push(d);
                    d = next[d.rev().index()];
                }
                orbit.reverse();
                out[start.source(g)] = orbit;
            }
        }
        Ok(out)
    }
}

/// The dual graph together with its embedding. Edge `i` of the dual is `e_i†`.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub graph: WeightedGraph,
    pub embedding: PlanarEmbedding,
    /// Dual edge index of each primal edge.
    pub edge_map: Vec<usize>,
}

/// Dual graph: one vertex per face, `e†` from the face of the backward dart of
/// `e` to the face of its forward dart, with `x_{e†} = x_e`.
pub fn planar_dual(g: &WeightedGraph, emb: &PlanarEmbedding) -> Result<DualGraph> {
    let face_of = emb.validate(g)?;
    let edges = (0..g.num_edges())
        .map(|e| {
            Edge::new(
                face_of[Dart::new(e, false).index()],
                face_of[Dart::new(e, true).index()],
            )
        })
        .collect_vec();
    let graph = WeightedGraph::new(emb.faces.len(), edges, g.weights().to_vec())?;
    let faces = emb.dual_faces(g)?;
    Ok(DualGraph {
        graph,
        embedding: PlanarEmbedding { faces },
        edge_map: (0..g.num_edges()).collect(),
    })
}

/// Faces of a straight-line planar drawing with vertex positions `coords`.
/// Every face is traced keeping it on the left.
pub fn faces_from_drawing(g: &WeightedGraph, coords: &[(f64, f64)]) -> Result<PlanarEmbedding> {
    if coords.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vertices(),
            found: coords.len(),
        });
    }
    let mut around: Vec<Vec<(f64, Dart)>> = vec![Vec::new(); g.num_vertices()];
    for e in 0..g.num_edges() {
        for fwd in [true, false] {
            let d = Dart::new(e, fwd);
            let (s, t) = (d.source(g), d.target(g));
            if s == t {
                return Err(Error::InvalidEmbedding(
                    "self-loops have no straight-line drawing".into(),
                ));
            }
            let ang = (coords[t].1 - coords[s].1).atan2(coords[t].0 - coords[s].0);
            around[s].push((ang, d));
        }
    }
    let mut pos = vec![(0usize, 0usize); 2 * g.num_edges()];
    for (v, list) in around.iter_mut().enumerate() {
        list.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (i, &(_, d)) in list.iter().enumerate() {
            pos[d.index()] = (v, i);
        }
    }
    // Arriving along d at v, leave by the dart just clockwise of rev(d).
    let next = |d: Dart| {
        let (v, i) = pos[d.rev().index()];
        let list = &around[v];
        list[(i + list.len() - 1) % list.len()].1
    };
    let mut seen = vec![false; 2 * g.num_edges()];
    let mut faces = Vec::new();
    for e in 0..g.num_edges() {
        for fwd in [true, false] {
            let start = Dart::new(e, fwd);
            if seen[start.index()] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            while !seen[d.index()] {
                seen[d.index()] = true;
                walk.push(d);
                d = next(d);
            }
            faces.push(walk);
        }
    }
    let emb = PlanarEmbedding { faces };
    emb.validate(g)?;
    Ok(emb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_embedding() -> PlanarEmbedding {
        PlanarEmbedding {
            faces: vec![
                vec![Dart::new(0, true), Dart::new(1, true), Dart::new(2, true)],
                vec![Dart::new(2, false), Dart::new(1, false), Dart::new(0, false)],
            ],
        }
    }

    #[test]
    fn triangle_dual_is_triple_edge() {
        let g = WeightedGraph::triangle();
        let d = planar_dual(&g, &triangle_embedding()).unwrap();
        assert_eq!(d.graph.num_vertices(), 2);
        assert_eq!(d.graph.num_edges(), 3);
        assert!(d.graph.edges().iter().all(|e| *e == Edge::new(1, 0)));
    }

    #[test]
    fn invalid_embeddings_rejected() {
        let g = WeightedGraph::triangle();
        let mut emb = triangle_embedding();
        emb.faces[1].pop();
        assert!(planar_dual(&g, &emb).is_err());
        let broken = PlanarEmbedding {
            faces: vec![
                vec![Dart::new(0, true), Dart::new(2, true), Dart::new(1, true)],
                vec![Dart::new(2, false), Dart::new(1, false), Dart::new(0, false)],
            ],
        };
        assert!(planar_dual(&g, &broken).is_err());
    }

    #[test]
    fn drawing_of_grid_has_expected_faces() {
        let g = WeightedGraph::grid(3, 3).unwrap();
        let coords = (0..9).map(|v| ((v % 3) as f64, (v / 3) as f64)).collect_vec();
        let emb = faces_from_drawing(&g, &coords).unwrap();
        assert_eq!(emb.faces.len(), 5);
        let d = planar_dual(&g, &emb).unwrap();
        assert_eq!(d.graph.betti1(), g.num_vertices() - 1);
    }

    #[test]
    fn double_dual_reverses_orientation() {
        let g = WeightedGraph::complete(4);
        let coords = [(0.0, 0.0), (4.0, 0.0), (2.0, 3.0), (2.0, 1.0)];
        let emb = faces_from_drawing(&g, &coords).unwrap();
        let d = planar_dual(&g, &emb).unwrap();
        let dd = planar_dual(&d.graph, &d.embedding).unwrap();
        assert_eq!(dd.graph, g.reversed());
    }
}
