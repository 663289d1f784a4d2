//! Determinantal measures on constrained random subgraphs of weighted graphs
//! and linear matroids, with the polynomials that serve as their partition
//! functions.
//!
//! Edges of a [`WeightedGraph`] are ordered and oriented once and for all by
//! the input order. Kernels live in the orthonormal basis `ω_e = e*/√x_e`, so
//! DPP marginals are literal matrix entries.

pub mod dpp;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod measures;
pub mod oracle;
pub mod par;
pub mod polynomials;
pub mod rng;

pub use dpp::{ProjectionKernel, SampleBatch};
pub use error::{Error, Result};
pub use graph::{Edge, IntegerChain, IntegerCochain, SubgraphMask, WeightedGraph};
pub use linalg::{Chain1, Form1, Subspace, C64};
pub use matroid::LinearMatroid;
pub use measures::{MeasureSpec, SubgraphWeight};
pub use oracle::OracleReport;
pub use par::Execution;
pub use polynomials::{PolyEval, Polynomial};
