//! JSON file formats for graphs, forms and matroids.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::linalg::{CMat, CVec, Chain1, Form1, C64};
use crate::matroid::LinearMatroid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub tail: usize,
    pub head: usize,
    #[serde(default = "unit_weight")]
    pub weight: f64,
}

fn unit_weight() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub num_vertices: usize,
    pub edges: Vec<EdgeJson>,
}

impl GraphJson {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        GraphJson {
            num_vertices: g.num_vertices(),
            edges: g
                .edges()
                .iter()
                .zip(g.weights())
                .map(|(e, &w)| EdgeJson {
                    tail: e.tail,
                    head: e.head,
                    weight: w,
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let edges = self.edges.iter().map(|e| Edge::new(e.tail, e.head)).collect();
        let weights = self.edges.iter().map(|e| e.weight).collect();
        WeightedGraph::new(self.num_vertices, edges, weights)
    }
}

pub type ComplexJson = [f64; 2];

fn to_cvec(v: &[ComplexJson]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&[re, im]| C64::new(re, im)))
}

fn from_cvec(v: &CVec) -> Vec<ComplexJson> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

/// Forms `θ`, chains `φ` and a connection `h`, each optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FormsJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta: Vec<Vec<ComplexJson>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phi: Vec<Vec<ComplexJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Vec<ComplexJson>>,
}

impl FormsJson {
    pub fn theta(&self) -> Vec<Form1> {
        self.theta.iter().map(|v| Form1(to_cvec(v))).collect()
    }

    pub fn phi(&self) -> Vec<Chain1> {
        self.phi.iter().map(|v| Chain1(to_cvec(v))).collect()
    }

    pub fn connection(&self) -> Option<Vec<C64>> {
        self.connection.as_ref().map(|v| to_cvec(v).iter().copied().collect())
    }

    pub fn from_parts(theta: &[Form1], phi: &[Chain1], connection: Option<&[C64]>) -> Self {
        FormsJson {
            theta: theta.iter().map(|f| from_cvec(&f.0)).collect(),
            phi: phi.iter().map(|c| from_cvec(&c.0)).collect(),
            connection: connection.map(|h| h.iter().map(|c| [c.re, c.im]).collect()),
        }
    }
}

/// A measured linear matroid; `R` is row-major with `target_dim` rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub ground_size: usize,
    pub target_dim: usize,
    #[serde(rename = "R")]
    pub r: Vec<Vec<ComplexJson>>,
    pub weights: Vec<f64>,
}

impl MatroidJson {
    pub fn to_matroid(&self) -> Result<LinearMatroid> {
        if self.r.len() != self.target_dim {
            return Err(Error::DimensionMismatch {
                expected: self.target_dim,
                found: self.r.len(),
            });
        }
        if let Some(row) = self.r.iter().find(|row| row.len() != self.ground_size) {
            return Err(Error::DimensionMismatch {
                expected: self.ground_size,
                found: row.len(),
            });
        }
        let m = CMat::from_fn(self.target_dim, self.ground_size, |i, j| {
            let [re, im] = self.r[i][j];
            C64::new(re, im)
        });
        LinearMatroid::from_matrix(m, self.weights.clone())
    }

    pub fn from_matroid(m: &LinearMatroid) -> Self {
        let r = m.matrix();
        MatroidJson {
            ground_size: r.ncols(),
            target_dim: r.nrows(),
            r: (0..r.nrows())
                .map(|i| r.row(i).iter().map(|c| [c.re, c.im]).collect())
                .collect(),
            weights: m.weights().to_vec(),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    read_json::<GraphJson>(path)?.to_graph()
}

pub fn write_graph(path: impl AsRef<Path>, g: &WeightedGraph) -> Result<()> {
    write_json(path, &GraphJson::from_graph(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = WeightedGraph::grid(2, 3).unwrap().with_weights(vec![0.5; 7]).unwrap();
        let text = serde_json::to_string(&GraphJson::from_graph(&g)).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn missing_weight_defaults_to_one() {
        let j: GraphJson =
            serde_json::from_str(r#"{"num_vertices":2,"edges":[{"tail":0,"head":1}]}"#).unwrap();
        assert_eq!(j.to_graph().unwrap().weights(), &[1.0]);
    }

    #[test]
    fn matroid_shape_checked() {
        let j = MatroidJson {
            ground_size: 3,
            target_dim: 1,
            r: vec![vec![[1.0, 0.0], [0.0, 0.0]]],
            weights: vec![1.0; 3],
        };
        assert!(j.to_matroid().is_err());
    }
}
