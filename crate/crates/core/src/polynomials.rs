//! Kirchhoff and Symanzik polynomials, their generalizations `C^(k)` and
//! `A^(k)`, and the determinant identities relating them.
//!
//! Polynomials are evaluated, never expanded. Real positive weights are taken
//! from the graph; complex evaluation points go through [`evaluate_at`].

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    cycle_basis, fundamental_cut, spanning_forest, SubgraphMask, WeightedGraph,
};
use crate::linalg::{self, CMat, Chain1, Form1, C64};
use crate::measures::{chain_to_omega, im_d_basis};
use crate::par::{self, Execution};
use crate::rng::{self, Purpose};

#[derive(Clone, Debug, PartialEq)]
pub enum Polynomial {
    /// `T_G = Σ_T x^T`.
    Kirchhoff,
    /// `Ψ⁽¹⁾ = Σ_T x^{E∖T}`.
    Psi1,
    /// `Ψ⁽²⁾ = Σ_{2-forests} |q(V(T))|² x^{E∖F}` for a balanced vertex charge `q`.
    Psi2 { q: Vec<f64> },
    /// `C^(k) = Σ_{K∈C_k} |(ϑ, z_K)|² x^K`.
    Connected { theta: Vec<Form1> },
    /// `A^(k) = Σ_{F∈F_{k+1}} |(φ, b_F)|² x^F`.
    Forest { phi: Vec<Chain1> },
}

impl Polynomial {
    pub fn name(&self) -> &'static str {
        match self {
            Polynomial::Kirchhoff => "T",
            Polynomial::Psi1 => "psi1",
            Polynomial::Psi2 { .. } => "psi2",
            Polynomial::Connected { .. } => "C",
            Polynomial::Forest { .. } => "A",
        }
    }

    /// Total degree; every monomial has this many factors.
    pub fn degree(&self, g: &WeightedGraph) -> usize {
        let n = g.num_vertices() - 1;
        match self {
            Polynomial::Kirchhoff => n,
            Polynomial::Psi1 => g.betti1(),
            Polynomial::Psi2 { .. } => g.betti1() + 1,
            Polynomial::Connected { theta } => n + theta.len(),
            Polynomial::Forest { phi } => n - phi.len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Determinant,
    Enumeration,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyEval {
    pub value: C64,
    pub method: Method,
}

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn monomial_all(g: &WeightedGraph) -> f64 {
    g.weights().iter().product()
}

pub fn kirchhoff_t(g: &WeightedGraph) -> f64 {
    if g.num_vertices() == 1 {
        return 1.0;
    }
    let b = g.reduced_incidence();
    let x = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(g.weights()));
    (b.transpose() * x * &b).determinant()
}

pub fn symanzik_psi1(g: &WeightedGraph) -> f64 {
    monomial_all(g) * kirchhoff_t(&g.inverted_weights())
}

/// Integral cycle basis of the whole graph as chains.
pub fn cycle_chains(g: &WeightedGraph) -> Vec<Chain1> {
    cycle_basis(g, &SubgraphMask::full(g))
        .iter()
        .map(|c| c.to_chain())
        .collect()
}

/// `det(ᵗM X M)` for the cycle matrix `M`, i.e. `‖J_yγ₁ ∧ … ∧ J_yγ_b‖²` at `y = x⁻¹`.
pub fn psi1_via_cycles(g: &WeightedGraph) -> f64 {
    let y = g.inverted_weights();
    let y = y.weights();
    let js = cycle_chains(g).iter().map(|c| linalg::j_x(y, c)).collect_vec();
    linalg::gram_det(y, &js)
}

fn check_balanced(g: &WeightedGraph, q: &[f64]) -> Result<()> {
    if q.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vertices(),
            found: q.len(),
        });
    }
    let sum: f64 = q.iter().sum();
    let scale = q.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
    if sum.abs() > 1e-9 * scale {
        return Err(Error::QNotBalanced(sum));
    }
    Ok(())
}

/// A chain `φ` with `∂φ = q`, routed along the greedy spanning tree.
pub fn flow_chain(g: &WeightedGraph, q: &[f64]) -> Result<Chain1> {
    check_balanced(g, q)?;
    let tree = spanning_forest(g, &SubgraphMask::full(g));
    let n = g.num_vertices();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e in tree.edges() {
        let ed = g.edge(e);
        adj[ed.tail].push((ed.head, e));
        adj[ed.head].push((ed.tail, e));
    }
    let mut order = vec![0];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, e));
                order.push(w);
            }
        }
    }
    let mut subtree = q.to_vec();
    let mut phi = vec![0.0; g.num_edges()];
    for &v in order.iter().rev() {
        if let Some((u, e)) = parent[v] {
            // The tree edge must deliver the subtree charge into v.
            phi[e] = if g.edge(e).head == v { subtree[v] } else { -subtree[v] };
            subtree[u] += subtree[v];
        }
    }
    Ok(Chain1::from_real(&phi))
}

/// `Ψ⁽²⁾ = x^E A^(1)(φ, x⁻¹)` with `∂φ = q`.
pub fn symanzik_psi2(g: &WeightedGraph, q: &[f64]) -> Result<f64> {
    let phi = flow_chain(g, q)?;
    let inv = g.inverted_weights();
    Ok(monomial_all(g) * generalized_a(&inv, &[phi])?)
}

fn check_lens(m: usize, lens: impl Iterator<Item = usize>) -> Result<()> {
    for l in lens {
        if l != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: l,
            });
        }
    }
    Ok(())
}

/// `det Δ_θ` for `Δ_θ = (d ⊕ ω_θ)*(d ⊕ ω_θ)` on `im d* ⊕ ℂ^k`, where `ℂ^k`
/// carries `|V|` times the standard inner product.
pub fn det_delta_theta(g: &WeightedGraph, theta: &[Form1]) -> Result<f64> {
    let (n, m) = (g.num_vertices(), g.num_edges());
    check_lens(m, theta.iter().map(Form1::len))?;
    let x = g.weights();
    // Orthonormal basis of the functions with zero mean.
    let diffs = CMat::from_fn(n, n - 1, |v, j| {
        if v == j + 1 {
            real(1.0)
        } else if v == 0 {
            real(-1.0)
        } else {
            real(0.0)
        }
    });
    let u = linalg::orthonormalize(&diffs);
    let b = g.boundary_matrix();
    let d = CMat::from_fn(m, n, |e, v| real(b[(v, e)] as f64 * x[e].sqrt()));
    let du = d * u;
    let scale = real(1.0 / (n as f64).sqrt());
    let mut op = CMat::zeros(m, du.ncols() + theta.len());
    op.columns_mut(0, du.ncols()).copy_from(&du);
    for (j, t) in theta.iter().enumerate() {
        op.set_column(du.ncols() + j, &(linalg::form_to_omega(x, t) * scale));
    }
    Ok(linalg::gram_det_cols(&op))
}

/// `C^(k) = |V|^{k−1} det Δ_θ`.
pub fn generalized_c(g: &WeightedGraph, theta: &[Form1]) -> Result<f64> {
    let n = g.num_vertices() as f64;
    Ok(n.powi(theta.len() as i32 - 1) * det_delta_theta(g, theta)?)
}

/// `det □_φ`: Gram determinant of `J_xγ₁, …, J_xγ_b, J_xφ₁, …, J_xφ_k` for an
/// integral cycle basis `γ`.
pub fn det_box_phi(g: &WeightedGraph, phi: &[Chain1]) -> Result<f64> {
    check_lens(g.num_edges(), phi.iter().map(Chain1::len))?;
    let x = g.weights();
    let cols = cycle_chains(g)
        .iter()
        .chain(phi)
        .map(|c| chain_to_omega(x, c))
        .collect_vec();
    let mut w = CMat::zeros(g.num_edges(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        w.set_column(j, c);
    }
    Ok(linalg::gram_det_cols(&w))
}

/// `A^(k) = x^E det □_φ`.
pub fn generalized_a(g: &WeightedGraph, phi: &[Chain1]) -> Result<f64> {
    Ok(monomial_all(g) * det_box_phi(g, phi)?)
}

/// Determinant route at the graph's own weights.
pub fn evaluate(g: &WeightedGraph, p: &Polynomial) -> Result<PolyEval> {
    let value = match p {
        Polynomial::Kirchhoff => kirchhoff_t(g),
        Polynomial::Psi1 => symanzik_psi1(g),
        Polynomial::Psi2 { q } => symanzik_psi2(g, q)?,
        Polynomial::Connected { theta } => generalized_c(g, theta)?,
        Polynomial::Forest { phi } => generalized_a(g, phi)?,
    };
    Ok(PolyEval {
        value: real(value),
        method: Method::Determinant,
    })
}

fn real_cols(m: usize, cols: &[Vec<f64>]) -> CMat {
    CMat::from_fn(m, cols.len(), |e, j| real(cols[j][e]))
}

/// `det(Mᴴ diag(x) M) = Σ_{|S| = cols} x^S |det M_S|²` (Cauchy–Binet).
fn cauchy_binet(m: &CMat, x: &[C64]) -> C64 {
    let mut xm = m.clone();
    for (i, &xi) in x.iter().enumerate() {
        xm.row_mut(i).iter_mut().for_each(|c| *c *= xi);
    }
    linalg::det(&(m.adjoint() * xm))
}

/// `Σ_{|S| = cols} x^{E∖S} |det M_S|²` through the bordered matrix
/// `[[diag(x), M], [Mᴴ, 0]]`, avoiding division by `x`.
fn dual_cauchy_binet(m: &CMat, x: &[C64]) -> C64 {
    let (rows, cols) = m.shape();
    let mut big = CMat::zeros(rows + cols, rows + cols);
    for (i, &xi) in x.iter().enumerate() {
        big[(i, i)] = xi;
    }
    big.view_mut((0, rows), (rows, cols)).copy_from(m);
    big.view_mut((rows, 0), (cols, rows)).copy_from(&m.adjoint());
    let sign = if cols % 2 == 0 { 1.0 } else { -1.0 };
    linalg::det(&big) * sign
}

fn cycle_matrix(g: &WeightedGraph, extra: &[Chain1]) -> CMat {
    let chains = cycle_chains(g);
    let mut w = CMat::zeros(g.num_edges(), chains.len() + extra.len());
    for (j, c) in chains.iter().chain(extra).enumerate() {
        w.set_column(j, &c.0);
    }
    w
}

/// Evaluation at an arbitrary complex point `x` (one coordinate per edge).
/// Forms and chains are used as given.
pub fn evaluate_at(g: &WeightedGraph, p: &Polynomial, x: &[C64]) -> Result<C64> {
    let m = g.num_edges();
    if x.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: x.len(),
        });
    }
    let b = g.reduced_incidence();
    let b_cols = (0..b.ncols())
        .map(|j| b.column(j).iter().copied().collect_vec())
        .collect_vec();
    Ok(match p {
        Polynomial::Kirchhoff => cauchy_binet(&real_cols(m, &b_cols), x),
        Polynomial::Psi1 => cauchy_binet(&cycle_matrix(g, &[]), x),
        Polynomial::Psi2 { q } => cauchy_binet(&cycle_matrix(g, &[flow_chain(g, q)?]), x),
        Polynomial::Connected { theta } => {
            check_lens(m, theta.iter().map(Form1::len))?;
            let mut mm = CMat::zeros(m, b_cols.len() + theta.len());
            mm.columns_mut(0, b_cols.len())
                .copy_from(&real_cols(m, &b_cols));
            for (j, t) in theta.iter().enumerate() {
                mm.set_column(b_cols.len() + j, &t.0);
            }
            cauchy_binet(&mm, x)
        }
        Polynomial::Forest { phi } => {
            check_lens(m, phi.iter().map(Chain1::len))?;
            dual_cauchy_binet(&cycle_matrix(g, phi), x)
        }
    })
}

/// Both sides of the two ratio identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub c_over_t: f64,
    pub gram_p_ker_dstar_theta: f64,
    pub a_over_t: f64,
    pub gram_p_im_d_jx_phi: f64,
    pub max_rel_err: f64,
}

/// `‖Λ^k P_{ker d*} ϑ‖²`.
pub fn gram_ker_dstar(g: &WeightedGraph, theta: &[Form1]) -> f64 {
    let x = g.weights();
    let qd = im_d_basis(g);
    let w = linalg::forms_to_omega(x, theta);
    let pw = &w - &qd * (qd.adjoint() * &w);
    linalg::gram_det_cols(&pw)
}

/// `‖Λ^k P_{im d} J_x φ‖²`.
pub fn gram_im_d(g: &WeightedGraph, phi: &[Chain1]) -> f64 {
    let x = g.weights();
    let qd = im_d_basis(g);
    let mut w = CMat::zeros(g.num_edges(), phi.len());
    for (j, c) in phi.iter().enumerate() {
        w.set_column(j, &chain_to_omega(x, c));
    }
    let pw = &qd * (qd.adjoint() * &w);
    linalg::gram_det_cols(&pw)
}

pub fn ratio_identities_check(
    g: &WeightedGraph,
    theta: &[Form1],
    phi: &[Chain1],
) -> Result<RatioReport> {
    let t = kirchhoff_t(g);
    let c_over_t = generalized_c(g, theta)? / t;
    let a_over_t = generalized_a(g, phi)? / t;
    let gc = gram_ker_dstar(g, theta);
    let ga = gram_im_d(g, phi);
    let err = |a: f64, b: f64| {
        if a.abs().max(b.abs()) < 1e-13 {
            0.0
        } else {
            linalg::rel_err(a, b)
        }
    };
    Ok(RatioReport {
        c_over_t,
        gram_p_ker_dstar_theta: gc,
        a_over_t,
        gram_p_im_d_jx_phi: ga,
        max_rel_err: err(c_over_t, gc).max(err(a_over_t, ga)),
    })
}

/// Green function `G_y` for conductances `y = x⁻¹`: inverse of the Laplacian
/// on mean-zero functions, extended by zero on constants.
pub fn green_function(g: &WeightedGraph) -> DMatrix<f64> {
    let n = g.num_vertices();
    let lap = laplacian(g, &g.weights().iter().map(|w| 1.0 / w).collect_vec());
    let j = DMatrix::from_element(n, n, 1.0 / n as f64);
    let inv = (lap + &j)
        .try_inverse()
        .expect("connected graph has invertible regularized Laplacian");
    inv - j
}

fn laplacian(g: &WeightedGraph, conductance: &[f64]) -> DMatrix<f64> {
    let n = g.num_vertices();
    let mut l = DMatrix::zeros(n, n);
    for (e, c) in g.edges().iter().zip(conductance) {
        if e.is_loop() {
            continue;
        }
        l[(e.tail, e.tail)] += c;
        l[(e.head, e.head)] += c;
        l[(e.tail, e.head)] -= c;
        l[(e.head, e.tail)] -= c;
    }
    l
}

/// `⟨q, G_y q⟩`.
pub fn green_height_pairing(g: &WeightedGraph, q: &[f64]) -> Result<f64> {
    check_balanced(g, q)?;
    let qv = nalgebra::DVector::from_column_slice(q);
    Ok(qv.dot(&(green_function(g) * &qv)))
}

/// Same pairing from the Laplacian with vertex `pin` grounded.
pub fn height_pairing_pinned(g: &WeightedGraph, q: &[f64], pin: usize) -> Result<f64> {
    check_balanced(g, q)?;
    let n = g.num_vertices();
    if pin >= n {
        return Err(Error::InvalidInput(format!("pin vertex {pin} out of range")));
    }
    let lap = laplacian(g, &g.weights().iter().map(|w| 1.0 / w).collect_vec());
    let keep = (0..n).filter(|&v| v != pin).collect_vec();
    let red = DMatrix::from_fn(n - 1, n - 1, |i, j| lap[(keep[i], keep[j])]);
    let rhs = nalgebra::DVector::from_iterator(n - 1, keep.iter().map(|&v| q[v]));
    let f = red
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidInput("singular reduced Laplacian".into()))?;
    Ok(rhs.dot(&f))
}

/// `‖J_xγ₁ ∧ … ∧ J_xγ_b ∧ κ₁ ∧ … ∧ κ_{|V|−1}‖` for the integral bases
/// attached to the greedy spanning tree.
pub fn torus_volume(g: &WeightedGraph) -> f64 {
    let x = g.weights();
    let tree = spanning_forest(g, &SubgraphMask::full(g));
    let mut vecs = cycle_chains(g)
        .iter()
        .map(|c| linalg::j_x(x, c))
        .collect_vec();
    for e in tree.edges() {
        vecs.push(fundamental_cut(g, &tree, e).expect("tree edge").to_form());
    }
    linalg::gram_det(x, &vecs).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub trials: usize,
    pub min_modulus: f64,
    pub scale: f64,
    pub failures: usize,
    pub degenerate: bool,
    pub pass: bool,
}

/// Evaluates `eval` at `trials` random points with `Re x_e ∈ [−1,1]` and
/// `Im x_e ∈ (0,1]`. A value below `1e−12 · |P(1,…,1)|` is a failure; a zero
/// polynomial is reported as degenerate.
pub fn stability_spot_check<F>(
    num_vars: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
    eval: F,
) -> StabilityReport
where
    F: Fn(&[C64]) -> C64 + Sync + Send,
{
    let scale = eval(&vec![real(1.0); num_vars]).norm();
    if scale == 0.0 {
        return StabilityReport {
            trials: 0,
            min_modulus: 0.0,
            scale,
            failures: 0,
            degenerate: true,
            pass: false,
        };
    }
    let mut rng = rng::stream(seed, Purpose::Stability);
    let points = (0..trials)
        .map(|_| {
            (0..num_vars)
                .map(|_| {
                    C64::new(
                        rng.random_range(-1.0..=1.0),
                        1.0 - rng.random::<f64>(),
                    )
                })
                .collect_vec()
        })
        .collect_vec();
    let values = par::map_slice(exec, &points, |p| eval(p).norm());
    let min_modulus = values.iter().copied().fold(f64::INFINITY, f64::min);
    let failures = values.iter().filter(|&&v| v < 1e-12 * scale).count();
    StabilityReport {
        trials,
        min_modulus,
        scale,
        failures,
        degenerate: false,
        pass: failures == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let t = WeightedGraph::triangle();
        assert!((kirchhoff_t(&t) - 3.0).abs() < 1e-12);
        assert!((symanzik_psi1(&t) - 3.0).abs() < 1e-12);
        let e = WeightedGraph::path(2).with_weights(vec![2.5]).unwrap();
        assert!((kirchhoff_t(&e) - 2.5).abs() < 1e-12);
        assert!((symanzik_psi1(&WeightedGraph::path(4)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psi2_and_green_on_single_edge() {
        let e = WeightedGraph::path(2).with_weights(vec![3.0]).unwrap();
        assert!((symanzik_psi2(&e, &[1.0, -1.0]).unwrap() - 3.0).abs() < 1e-12);
        assert!((green_height_pairing(&e, &[1.0, -1.0]).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(symanzik_psi2(&e, &[0.0, 0.0]).unwrap(), 0.0);
        assert!(matches!(
            symanzik_psi2(&e, &[1.0, 0.0]),
            Err(Error::QNotBalanced(_))
        ));
    }

    #[test]
    fn flow_has_prescribed_boundary() {
        let g = WeightedGraph::grid(3, 3).unwrap();
        let q = [1.0, -2.0, 0.5, 0.0, 0.0, 0.0, 0.25, 0.25, 0.0];
        let phi = flow_chain(&g, &q).unwrap();
        let b = g.boundary_matrix();
        for (v, &qv) in q.iter().enumerate() {
            let s: f64 = (0..g.num_edges()).map(|e| b[(v, e)] as f64 * phi.0[e].re).sum();
            assert!((s - qv).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_at_i() {
        let t = WeightedGraph::triangle();
        let i = C64::new(0.0, 1.0);
        let v = evaluate_at(&t, &Polynomial::Kirchhoff, &[i, i, i]).unwrap();
        assert!((v - real(-3.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_polynomial_is_degenerate() {
        let r = stability_spot_check(3, 10, 1, Execution::Sequential, |_| real(0.0));
        assert!(r.degenerate && !r.pass);
    }

    #[test]
    fn triangle_c_with_first_coordinate_form() {
        let t = WeightedGraph::triangle();
        let c = generalized_c(&t, &[Form1::unit(3, 0)]).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        assert!((generalized_c(&t, &[]).unwrap() - 3.0).abs() < 1e-12);
        assert!((generalized_a(&t, &[]).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn torus_volume_counts_trees_at_unit_weight() {
        let g = WeightedGraph::complete(4);
        assert!((torus_volume(&g) - 16.0).abs() < 1e-9);
    }
}
