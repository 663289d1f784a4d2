//! Projection determinantal point processes on edge sets.

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64};
use crate::par::{self, Execution};
use crate::rng::{self, Purpose};

const PROJECTION_TOL: f64 = 1e-10;
const PROB_FLOOR: f64 = 1e-14;

/// Hermitian idempotent kernel in the ω basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionKernel {
    matrix: CMat,
    rank: usize,
}

impl ProjectionKernel {
    /// Validates `K = K*`, `K² = K` and reads the rank off the trace.
    pub fn new(matrix: CMat) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.ncols(),
            });
        }
        let herm = linalg::max_abs(&(&matrix - matrix.adjoint()));
        if herm > PROJECTION_TOL {
            return Err(Error::NotAProjection(format!("‖K − K*‖ = {herm:e}")));
        }
        let idem = linalg::max_abs(&(&matrix * &matrix - &matrix));
        if idem > PROJECTION_TOL {
            return Err(Error::NotAProjection(format!("‖K² − K‖ = {idem:e}")));
        }
        let trace = matrix.trace().re;
        let rank = trace.round().max(0.0) as usize;
        Ok(ProjectionKernel { matrix, rank })
    }

    /// Projection on the span of orthonormal columns `q`.
    pub fn from_orthonormal(q: &CMat) -> Self {
        ProjectionKernel {
            matrix: linalg::projector(q),
            rank: q.ncols(),
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.size()).map(|i| self.matrix[(i, i)].re).collect()
    }

    fn principal_minor(&self, idx: &[usize]) -> C64 {
        let sub = CMat::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])]);
        linalg::det(&sub)
    }

    /// `P(X = t) = det K_{t,t}`.
    pub fn density(&self, t: &[usize]) -> Result<f64> {
        if t.len() != self.rank {
            return Err(Error::WrongCardinality {
                expected: self.rank,
                found: t.len(),
            });
        }
        Ok(self.principal_minor(t).re.max(0.0))
    }

    /// `P(edges ⊆ X)`.
    pub fn inclusion_probability(&self, edges: &[usize]) -> f64 {
        self.principal_minor(edges).re.max(0.0)
    }

    /// `E[Π_{e∈X} y_e] = det(I + (diag(y) − I)K)`.
    pub fn generating_function(&self, y: &[f64]) -> Result<f64> {
        let n = self.size();
        if y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: y.len(),
            });
        }
        let mut m = CMat::identity(n, n);
        for i in 0..n {
            let s = C64::new(y[i] - 1.0, 0.0);
            for j in 0..n {
                m[(i, j)] += s * self.matrix[(i, j)];
            }
        }
        Ok(linalg::det(&m).re)
    }

    /// Kernel of the process conditioned on `X ⊆ allowed`: projection on the
    /// restriction of the range to the allowed coordinates. Rows and columns
    /// outside `allowed` are zero.
    pub fn condition_inside(&self, allowed: &FixedBitSet) -> Result<ProjectionKernel> {
        let n = self.size();
        let mut restricted = self.matrix.clone();
        for i in 0..n {
            if !allowed.contains(i) {
                restricted.row_mut(i).fill(C64::new(0.0, 0.0));
            }
        }
        let q = linalg::orthonormalize(&restricted);
        if q.ncols() != self.rank {
            return Err(Error::ImpossibleCondition);
        }
        Ok(ProjectionKernel::from_orthonormal(&q))
    }

    /// Kernel `I − K` of the complementary process.
    pub fn complement(&self) -> ProjectionKernel {
        let n = self.size();
        ProjectionKernel {
            matrix: CMat::identity(n, n) - &self.matrix,
            rank: n - self.rank,
        }
    }

    /// Exact sample by sequential conditioning: draw an item with probability
    /// `K_ii / rank`, pass to the Schur complement, repeat. Returns sorted
    /// edge indices.
    pub fn sample(&self, seed: u64) -> Vec<usize> {
        let mut rng = rng::stream(seed, Purpose::Sampler);
        self.sample_with(&mut rng)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let n = self.size();
        let mut k = self.matrix.clone();
        let mut out = Vec::with_capacity(self.rank);
        let mut probs = vec![0.0; n];
        for _ in 0..self.rank {
            let mut total = 0.0;
            for (i, p) in probs.iter_mut().enumerate() {
                let d = k[(i, i)].re;
                *p = if d > PROB_FLOOR { d } else { 0.0 };
                total += *p;
            }
            if total <= 0.0 {
                break;
            }
            let mut u = rng.random::<f64>() * total;
            let mut pick = n;
            for (i, &p) in probs.iter().enumerate() {
                if p > 0.0 {
                    pick = i;
                    if u < p {
                        break;
                    }
                    u -= p;
                }
            }
            out.push(pick);
            let pivot = k[(pick, pick)];
            let col = k.column(pick).into_owned();
            let row = k.row(pick).into_owned();
            k -= (col * row) / pivot;
            k.row_mut(pick).fill(C64::new(0.0, 0.0));
            k.column_mut(pick).fill(C64::new(0.0, 0.0));
        }
        out.sort_unstable();
        out
    }

    /// Independent samples for seeds `seed, seed+1, …`.
    pub fn sample_batch(&self, seed: u64, count: usize, exec: Execution) -> SampleBatch {
        let samples = par::map_range(exec, count, |i| self.sample(seed.wrapping_add(i as u64)));
        SampleBatch {
            samples,
            seed,
            rank: self.rank,
        }
    }

    pub fn to_json(&self) -> KernelJson {
        KernelJson {
            basis: "omega".into(),
            rank: self.rank,
            matrix: self.matrix.transpose().iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn from_json(j: &KernelJson) -> Result<Self> {
        let n = (j.matrix.len() as f64).sqrt().round() as usize;
        if n * n != j.matrix.len() {
            return Err(Error::InvalidInput("kernel matrix is not square".into()));
        }
        let m = CMat::from_fn(n, n, |i, k| {
            let [re, im] = j.matrix[i * n + k];
            C64::new(re, im)
        });
        ProjectionKernel::new(m)
    }
}

/// Kernel export format; `matrix` holds `n²` entries in row-major order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelJson {
    pub basis: String,
    pub rank: usize,
    pub matrix: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub samples: Vec<Vec<usize>>,
    pub seed: u64,
    pub rank: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_ust() -> ProjectionKernel {
        let third = C64::new(1.0 / 3.0, 0.0);
        let m = CMat::from_fn(3, 3, |i, j| if i == j { third * 2.0 } else { third });
        // Sign pattern of the transfer current for the cyclically oriented triangle.
        let s = CMat::from_fn(3, 3, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(-1.0, 0.0) });
        ProjectionKernel::new(m.component_mul(&s)).unwrap()
    }

    #[test]
    fn trivial_kernels() {
        let z = ProjectionKernel::new(CMat::zeros(4, 4)).unwrap();
        assert!(z.sample(1).is_empty());
        let id = ProjectionKernel::new(CMat::identity(4, 4)).unwrap();
        assert_eq!(id.sample(1), vec![0, 1, 2, 3]);
        assert!(ProjectionKernel::new(CMat::identity(2, 2) * C64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn triangle_probabilities() {
        let k = triangle_ust();
        assert_eq!(k.rank(), 2);
        assert!((k.density(&[0, 1]).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((k.inclusion_probability(&[]) - 1.0).abs() < 1e-15);
        assert!((k.inclusion_probability(&[2]) - 2.0 / 3.0).abs() < 1e-12);
        assert!(k.density(&[0]).is_err());
        let gf = k.generating_function(&[2.0, 1.0, 1.0]).unwrap();
        assert!((gf - (2.0 + 2.0 + 1.0) / 3.0).abs() < 1e-12);
        assert!(k.generating_function(&[0.0; 3]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn conditioning_and_complement() {
        let k = triangle_ust();
        let mut allowed = FixedBitSet::with_capacity(3);
        allowed.insert(0);
        allowed.insert(1);
        let c = k.condition_inside(&allowed).unwrap();
        assert!((c.density(&[0, 1]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(c.sample(3), vec![0, 1]);
        let mut single = FixedBitSet::with_capacity(3);
        single.insert(0);
        assert!(matches!(k.condition_inside(&single), Err(Error::ImpossibleCondition)));
        let comp = k.complement();
        assert_eq!(comp.rank(), 1);
        assert!((comp.density(&[2]).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn samples_are_reproducible() {
        let k = triangle_ust();
        assert_eq!(k.sample(42), k.sample(42));
        let a = k.sample_batch(5, 20, Execution::Parallel);
        let b = k.sample_batch(5, 20, Execution::Sequential);
        assert_eq!(a, b);
        assert!(a.samples.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn json_round_trip() {
        let k = triangle_ust();
        let j = k.to_json();
        assert_eq!(j.matrix.len(), 9);
        assert_eq!(ProjectionKernel::from_json(&j).unwrap(), k);
    }
}
