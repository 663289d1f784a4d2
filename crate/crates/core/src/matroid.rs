//! Measured linear matroids: a representing matrix `R` with columns indexed
//! by the ground set, positive weights, and a basis `𝒵` of `Z = ker R`.
//!
//! Subsets of the ground set are sorted index slices. Signs of minors follow
//! the ground-set order.

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::dpp::ProjectionKernel;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{self, CMat, Chain1, Form1, C64};
use crate::measures::chain_to_omega;
use crate::par::{self, Execution};
use crate::polynomials::cycle_chains;
use crate::rng::{self, Purpose};

const SVD_TOL: f64 = 1e-10;
const CONDITION_WARN: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct LinearMatroid {
    r: CMat,
    x: Vec<f64>,
    kernel: CMat,
    rank: usize,
    sigma_max: f64,
}

fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Orthonormal basis of `ker m` (columns), from the SVD of `m` padded to
/// at least as many rows as columns. `sigma_ref` sets the rank threshold.
fn null_space(m: &CMat, sigma_ref: f64) -> CMat {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    let padded = if rows < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let tol = SVD_TOL * sigma_ref;
    let null_rows = (0..vt.nrows())
        .filter(|&i| svd.singular_values[i] <= tol)
        .collect_vec();
    let mut out = CMat::zeros(cols, null_rows.len());
    for (j, &i) in null_rows.iter().enumerate() {
        out.set_column(j, &vt.row(i).adjoint());
    }
    out
}

fn select_columns(m: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(m.nrows(), idx.len(), |i, j| m[(i, idx[j])])
}

fn select_rows(m: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(idx.len(), m.ncols(), |i, j| m[(idx[i], j)])
}

fn complement(d: usize, t: &[usize]) -> Vec<usize> {
    (0..d).filter(|i| !t.contains(i)).collect()
}

fn least_squares(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.ncols() == 0 {
        return Ok(CMat::zeros(0, b.ncols()));
    }
    // Full column rank is guaranteed by the callers; QR keeps complex
    // solves at working precision.
    let qr = a.clone().qr();
    let rhs = qr.q().adjoint() * b;
    qr.r()
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| Error::InvalidInput("rank-deficient least-squares system".into()))
}

impl LinearMatroid {
    pub fn from_matrix(r: CMat, x: Vec<f64>) -> Result<Self> {
        let d = r.ncols();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len(),
            });
        }
        for (i, &w) in x.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight { edge: i, weight: w });
            }
        }
        let sigma_max = singular_values(&r).into_iter().fold(0.0, f64::max);
        let kernel = if sigma_max == 0.0 {
            CMat::identity(d, d)
        } else {
            null_space(&r, sigma_max)
        };
        let rank = d - kernel.ncols();
        Ok(LinearMatroid {
            r,
            x,
            kernel,
            rank,
            sigma_max,
        })
    }

    /// `rows × d` matrix with standard complex Gaussian entries (real when
    /// `real` is set) and weights uniform in `[0.5, 2]`.
    pub fn random(rows: usize, d: usize, real: bool, seed: u64) -> Self {
        let mut rng = rng::stream(seed, Purpose::Instances);
        let r = CMat::from_fn(rows, d, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if real { 0.0 } else { rng.sample(StandardNormal) };
            C64::new(re, im)
        });
        let x = (0..d).map(|_| rng.random_range(0.5..=2.0)).collect();
        LinearMatroid::from_matrix(r, x).expect("weights are positive")
    }

    /// Circular matroid of `g`, represented by the boundary matrix `∂`.
    pub fn graphic(g: &WeightedGraph) -> Self {
        let b = g.boundary_matrix();
        let r = CMat::from_fn(b.nrows(), b.ncols(), |i, j| C64::new(b[(i, j)] as f64, 0.0));
        LinearMatroid::from_matrix(r, g.weights().to_vec()).expect("graph weights are positive")
    }

    /// Matroid whose kernel is the cut space of `g`: rows of `R` are an
    /// integral cycle basis.
    pub fn cut_space(g: &WeightedGraph) -> Self {
        let cycles = cycle_chains(g);
        let r = CMat::from_fn(cycles.len(), g.num_edges(), |i, j| cycles[i].0[j]);
        LinearMatroid::from_matrix(r, g.weights().to_vec()).expect("graph weights are positive")
    }

    pub fn ground_size(&self) -> usize {
        self.r.ncols()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nullity(&self) -> usize {
        self.kernel.ncols()
    }

    pub fn matrix(&self) -> &CMat {
        &self.r
    }

    pub fn weights(&self) -> &[f64] {
        &self.x
    }

    /// Orthonormal basis of `Z` computed at construction.
    pub fn kernel(&self) -> &CMat {
        &self.kernel
    }

    pub fn with_weights(&self, x: Vec<f64>) -> Result<Self> {
        LinearMatroid::from_matrix(self.r.clone(), x)
    }

    fn monomial(&self, s: &[usize]) -> f64 {
        s.iter().map(|&i| self.x[i]).product()
    }

    fn subset_rank(&self, s: &[usize]) -> usize {
        if self.sigma_max == 0.0 {
            return 0;
        }
        let tol = SVD_TOL * self.sigma_max;
        singular_values(&select_columns(&self.r, s))
            .into_iter()
            .filter(|&v| v > tol)
            .count()
    }

    /// Whether `s` contains a basis.
    pub fn spans(&self, s: &[usize]) -> bool {
        self.subset_rank(s) == self.rank
    }

    pub fn is_basis(&self, t: &[usize]) -> bool {
        t.len() == self.rank && self.subset_rank(t) == self.rank
    }

    fn check_basis(&self, t: &[usize]) -> Result<()> {
        if t.len() != self.rank {
            return Err(Error::WrongCardinality {
                expected: self.rank,
                found: t.len(),
            });
        }
        if t.iter().any(|&i| i >= self.ground_size()) {
            return Err(Error::InvalidInput("ground element out of range".into()));
        }
        if !self.is_basis(t) {
            return Err(Error::NotABasis);
        }
        Ok(())
    }

    /// Members of `𝓑_k`: subsets of size `n + k` containing a basis.
    pub fn family(&self, k: usize, cap: usize, exec: Execution) -> Result<Vec<Vec<usize>>> {
        let d = self.ground_size();
        if d > cap {
            return Err(Error::CapExceeded { size: d, cap });
        }
        if self.rank + k > d {
            return Ok(Vec::new());
        }
        let all = (0..d).combinations(self.rank + k).collect_vec();
        let keep = par::map_slice(exec, &all, |s| self.subset_rank(s) == self.rank);
        let out = all
            .into_iter()
            .zip(keep)
            .filter_map(|(s, k)| k.then_some(s))
            .collect_vec();
        if k == 0 {
            for t in &out {
                let sv = singular_values(&select_columns(&self.r, t));
                let lo = sv.iter().copied().fold(f64::INFINITY, f64::min);
                if lo < CONDITION_WARN * self.sigma_max {
                    log::warn!("basis {t:?} is ill-conditioned (σ_min/σ_max = {:e})", lo / self.sigma_max);
                }
            }
        }
        Ok(out)
    }

    pub fn bases(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        self.family(0, cap, Execution::Parallel)
    }

    /// `𝒵_T`: for each `j ∉ T` (increasing), the kernel vector with
    /// coefficient 1 on `j` and support in `T ∪ {j}`.
    pub fn fundamental_circuit_basis(&self, t: &[usize]) -> Result<CMat> {
        self.check_basis(t)?;
        let d = self.ground_size();
        let rt = select_columns(&self.r, t);
        let others = complement(d, t);
        let rhs = -select_columns(&self.r, &others);
        let c = least_squares(&rt, &rhs)?;
        let mut z = CMat::zeros(d, others.len());
        for (col, &j) in others.iter().enumerate() {
            z[(j, col)] = C64::new(1.0, 0.0);
            for (row, &ti) in t.iter().enumerate() {
                z[(ti, col)] = c[(row, col)];
            }
        }
        Ok(z)
    }

    /// `det(𝒵/𝒵_T)`, the determinant of the change of basis from `𝒵_T` to
    /// `z`, read off the rows of `z` outside `T`.
    pub fn circuit_det(&self, z: &CMat, t: &[usize]) -> Result<C64> {
        self.check_basis(t)?;
        Ok(linalg::det(&select_rows(z, &complement(self.ground_size(), t))))
    }

    /// Same determinant by solving `𝒵_T C = z` explicitly.
    pub fn circuit_det_by_solve(&self, z: &CMat, t: &[usize]) -> Result<C64> {
        let zt = self.fundamental_circuit_basis(t)?;
        Ok(linalg::det(&least_squares(&zt, z)?))
    }

    /// `w(T) = det(DD*)` compressed to `E*_T` in the ω basis, which equals
    /// `x^T det(R_Tᴴ R_T)`.
    pub fn basis_weight(&self, t: &[usize]) -> Result<f64> {
        if t.len() != self.rank {
            return Err(Error::WrongCardinality {
                expected: self.rank,
                found: t.len(),
            });
        }
        let dt = self.d_tilde_rows(t);
        Ok(linalg::det(&(&dt * dt.adjoint())).re.max(0.0))
    }

    /// Rows `T` of `D̃ = X^{1/2} Rᵀ`, the matrix of `D` into ω coordinates.
    fn d_tilde_rows(&self, t: &[usize]) -> CMat {
        CMat::from_fn(t.len(), self.r.nrows(), |i, j| {
            self.r[(j, t[i])] * self.x[t[i]].sqrt()
        })
    }

    fn d_tilde(&self) -> CMat {
        self.d_tilde_rows(&(0..self.ground_size()).collect_vec())
    }

    /// `|det(𝒵/𝒵_T)|² x^T` for the stored kernel basis.
    pub fn density_via_circuits(&self, t: &[usize]) -> Result<f64> {
        self.density_via_circuits_with(&self.kernel, t)
    }

    pub fn density_via_circuits_with(&self, z: &CMat, t: &[usize]) -> Result<f64> {
        Ok(self.circuit_det(z, t)?.norm_sqr() * self.monomial(t))
    }

    /// Projection on `im D` in the ω basis.
    pub fn kernel_matrix(&self) -> ProjectionKernel {
        ProjectionKernel::from_orthonormal(&linalg::orthonormalize(&self.d_tilde()))
    }

    /// Orthonormal basis of `Z_K = Z ∩ E_K`, embedded in the ground set.
    pub fn restricted_kernel(&self, k_set: &[usize]) -> CMat {
        let rk = select_columns(&self.r, k_set);
        let local = if self.sigma_max == 0.0 {
            CMat::identity(k_set.len(), k_set.len())
        } else {
            null_space(&rk, self.sigma_max)
        };
        let mut out = CMat::zeros(self.ground_size(), local.ncols());
        for (i, &e) in k_set.iter().enumerate() {
            out.set_row(e, &local.row(i));
        }
        out
    }

    fn check_family_member(&self, k_set: &[usize]) -> Result<()> {
        if self.subset_rank(k_set) != self.rank {
            return Err(Error::ImpossibleCondition);
        }
        Ok(())
    }

    /// Unnormalized `P(X = T | X ⊆ K) ∝ x^T |det(𝒵^K/𝒵^K_T)|²`.
    pub fn conditional_density(&self, k_set: &[usize], t: &[usize]) -> Result<f64> {
        self.check_family_member(k_set)?;
        if t.iter().any(|e| !k_set.contains(e)) {
            return Ok(0.0);
        }
        self.check_basis(t)?;
        let zk = self.restricted_kernel(k_set);
        let rest = k_set.iter().copied().filter(|e| !t.contains(e)).collect_vec();
        Ok(linalg::det(&select_rows(&zk, &rest)).norm_sqr() * self.monomial(t))
    }

    /// `r(𝒵:𝒵^K)` by the two expressions: the ratio of circuit determinants
    /// at the first basis inside `K`, and a `T`-free block determinant.
    pub fn ratio_constant(&self, z: &CMat, zk: &CMat, k_set: &[usize]) -> Result<(f64, f64)> {
        self.check_family_member(k_set)?;
        let t = k_set
            .iter()
            .copied()
            .combinations(self.rank)
            .find(|t| self.is_basis(t))
            .ok_or(Error::ImpossibleCondition)?;
        let rest = k_set.iter().copied().filter(|e| !t.contains(e)).collect_vec();
        let num = self.circuit_det(z, &t)?.norm_sqr();
        let den = linalg::det(&select_rows(zk, &rest)).norm_sqr();
        let first = num / den;

        // Stack the rows outside K on the coordinates along Z^K; in a basis
        // adapted to Z^K ⊂ Z this is block triangular.
        let outside = complement(self.ground_size(), k_set);
        let q = linalg::orthonormalize(zk);
        let mut stacked = CMat::zeros(outside.len() + q.ncols(), z.ncols());
        stacked.rows_mut(0, outside.len()).copy_from(&select_rows(z, &outside));
        stacked
            .rows_mut(outside.len(), q.ncols())
            .copy_from(&(q.adjoint() * z));
        let second = linalg::det(&stacked).norm_sqr() / linalg::det(&(q.adjoint() * zk)).norm_sqr();
        Ok((first, second))
    }

    /// `B = det(D*D)` on `im D*`.
    pub fn partition_b(&self) -> f64 {
        let dt = self.d_tilde();
        let u = linalg::orthonormalize(&dt.adjoint());
        linalg::gram_det_cols(&(dt * u))
    }

    /// `K(𝒵, x) = x^S ‖J_xγ₁ ∧ … ∧ J_xγ_b‖²`.
    pub fn partition_k(&self, z: &CMat) -> f64 {
        let d = self.ground_size();
        let cols = (0..z.ncols())
            .map(|j| chain_to_omega(&self.x, &Chain1(z.column(j).into_owned())))
            .collect_vec();
        self.monomial(&(0..d).collect_vec()) * gram_of(&cols, d)
    }

    /// `𝒵₀`: the stored kernel basis with its first column scaled so that
    /// `B(1) = K(𝒵₀, 1)`. Returns the basis and the scale factor. With
    /// nullity 0 there is nothing to scale and `B = |det R|² K`.
    pub fn normalized_kernel(&self) -> (CMat, f64) {
        let mut z = self.kernel.clone();
        if z.ncols() == 0 {
            return (z, 1.0);
        }
        let unit = self
            .with_weights(vec![1.0; self.ground_size()])
            .expect("unit weights");
        let s = (unit.partition_b() / unit.partition_k(&z)).sqrt();
        z.column_mut(0).iter_mut().for_each(|c| *c *= s);
        (z, s)
    }

    /// `L^(k) = det((D + ω_θ)*(D + ω_θ))` on `im D* ⊕ ℂ^k`.
    pub fn partition_l(&self, theta: &[Form1]) -> Result<f64> {
        let d = self.ground_size();
        for t in theta {
            if t.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: t.len(),
                });
            }
        }
        let dt = self.d_tilde();
        let u = linalg::orthonormalize(&dt.adjoint());
        let du = dt * u;
        let mut op = CMat::zeros(d, du.ncols() + theta.len());
        op.columns_mut(0, du.ncols()).copy_from(&du);
        for (j, t) in theta.iter().enumerate() {
            op.set_column(du.ncols() + j, &linalg::form_to_omega(&self.x, t));
        }
        Ok(linalg::gram_det_cols(&op))
    }

    /// `‖Λ^k P_{ker D*} ϑ‖²` in the weighted inner product.
    pub fn gram_ker_dstar(&self, theta: &[Form1]) -> f64 {
        let q = linalg::orthonormalize(&self.d_tilde());
        let w = linalg::forms_to_omega(&self.x, theta);
        let pw = &w - &q * (q.adjoint() * &w);
        linalg::gram_det_cols(&pw)
    }

    /// Orthonormal ω-basis of `im D ⊕ Θ`.
    pub fn theorem_basis(&self, theta: &[Form1]) -> Result<CMat> {
        let dt = self.d_tilde();
        let base = linalg::orthonormalize(&dt);
        let mut all = CMat::zeros(self.ground_size(), base.ncols() + theta.len());
        all.columns_mut(0, base.ncols()).copy_from(&base);
        for (j, t) in theta.iter().enumerate() {
            all.set_column(base.ncols() + j, &linalg::form_to_omega(&self.x, t));
        }
        let q = linalg::orthonormalize(&all);
        if q.ncols() != self.rank + theta.len() {
            return Err(Error::RankDeficient {
                expected: self.rank + theta.len(),
                found: q.ncols(),
            });
        }
        Ok(q)
    }

    pub fn theorem_kernel(&self, theta: &[Form1]) -> Result<ProjectionKernel> {
        Ok(ProjectionKernel::from_orthonormal(&self.theorem_basis(theta)?))
    }

    /// `x^K r(𝒵:𝒵^K) |(ϑ, z_K)|²` for `K ∈ 𝓑_k`, `k = |θ|`.
    pub fn theorem_weight(&self, z: &CMat, theta: &[Form1], k_set: &[usize]) -> Result<f64> {
        if k_set.len() != self.rank + theta.len() {
            return Err(Error::WrongCardinality {
                expected: self.rank + theta.len(),
                found: k_set.len(),
            });
        }
        let zk = self.restricted_kernel(k_set);
        let (r, _) = self.ratio_constant(z, &zk, k_set)?;
        let k = theta.len();
        let pairing = CMat::from_fn(k, k, |i, j| {
            linalg::pair(&theta[i], &Chain1(zk.column(j).into_owned()))
        });
        Ok(self.monomial(k_set) * r * linalg::det(&pairing).norm_sqr())
    }

    /// Expands `γ₁ ∧ … ∧ γ_b` over `e_J`, `|J| = b`, and compares each
    /// coefficient with `det(𝒵/𝒵_J^c)` computed by solving.
    pub fn circuit_basis_identity_check(&self, z: &CMat, cap: usize) -> Result<CircuitReport> {
        let d = self.ground_size();
        if d > cap {
            return Err(Error::CapExceeded { size: d, cap });
        }
        let b = z.ncols();
        let subsets = (0..d).combinations(b).collect_vec();
        let errs = par::map_slice(Execution::Parallel, &subsets, |j| {
            let coef = linalg::det(&select_rows(z, j));
            let t = complement(d, j);
            if self.is_basis(&t) {
                let expected = self.circuit_det_by_solve(z, &t).expect("basis");
                ((coef - expected).norm(), 1usize, 0usize)
            } else {
                (coef.norm(), 0, usize::from(coef.norm() > 1e-10))
            }
        });
        Ok(CircuitReport {
            terms: subsets.len(),
            bases: errs.iter().map(|e| e.1).sum(),
            off_support_nonzero: errs.iter().map(|e| e.2).sum(),
            max_abs_discrepancy: errs.iter().map(|e| e.0).fold(0.0, f64::max),
        })
    }
}

fn gram_of(cols: &[linalg::CVec], rows: usize) -> f64 {
    let mut m = CMat::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    linalg::gram_det_cols(&m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircuitReport {
    pub terms: usize,
    pub bases: usize,
    pub off_support_nonzero: usize,
    pub max_abs_discrepancy: f64,
}

/// Real matrix with entries drawn from `f`, as a complex representation.
pub fn real_matrix(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> CMat {
    let m = DMatrix::from_fn(rows, cols, f);
    m.map(|v| C64::new(v, 0.0))
}
