//! The named determinantal measures on spanning subgraphs and the
//! combinatorial weights that define them.

use itertools::Itertools;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dpp::ProjectionKernel;
use crate::error::{Error, Result};
use crate::graph::{
    self, components, coboundary_of_indicator, cycle_basis, PlanarEmbedding, SubgraphMask,
    WeightedGraph,
};
use crate::linalg::{self, pair, CMat, CVec, Chain1, Form1, C64};
use crate::rng::{self, Purpose};

/// Which determinantal measure to build. `k` and `ℓ` are the numbers of
/// supplied chains/forms.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureSpec {
    Ust,
    ConnectedK { theta: Vec<Form1> },
    ForestK { phi: Vec<Chain1> },
    Crsf { connection: Vec<C64> },
    Mixed { phi: Vec<Chain1>, theta: Vec<Form1> },
}

impl MeasureSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MeasureSpec::Ust => "ust",
            MeasureSpec::ConnectedK { .. } => "connected",
            MeasureSpec::ForestK { .. } => "forest",
            MeasureSpec::Crsf { .. } => "crsf",
            MeasureSpec::Mixed { .. } => "mixed",
        }
    }

    /// Size of every subgraph in the support.
    pub fn support_size(&self, g: &WeightedGraph) -> usize {
        let n = g.num_vertices() - 1;
        match self {
            MeasureSpec::Ust => n,
            MeasureSpec::ConnectedK { theta } => n + theta.len(),
            MeasureSpec::ForestK { phi } => n - phi.len(),
            MeasureSpec::Crsf { .. } => n + 1,
            MeasureSpec::Mixed { phi, theta } => n + theta.len() - phi.len(),
        }
    }

    /// Whether `s` satisfies the support constraint of this family.
    pub fn admits(&self, g: &WeightedGraph, s: &SubgraphMask) -> bool {
        if s.len() != self.support_size(g) {
            return false;
        }
        match self {
            MeasureSpec::Ust => s.is_spanning_tree(),
            MeasureSpec::ConnectedK { theta } => s.is_connected() && s.b1() == theta.len(),
            MeasureSpec::ForestK { phi } => s.is_forest() && s.b0() == phi.len() + 1,
            MeasureSpec::Crsf { .. } => is_cycle_rooted(g, s),
            MeasureSpec::Mixed { phi, theta } => {
                let (k, l) = (phi.len(), theta.len());
                s.b0() as i64 - s.b1() as i64 == k as i64 - l as i64 + 1
                    && s.b1() >= l.saturating_sub(k)
                    && s.b1() <= l
            }
        }
    }
}

/// Every component contains exactly one cycle.
pub fn is_cycle_rooted(g: &WeightedGraph, s: &SubgraphMask) -> bool {
    per_component_betti(g, s).iter().all(|&b| b == 1)
}

fn per_component_betti(g: &WeightedGraph, s: &SubgraphMask) -> Vec<usize> {
    let (label, count) = components(g, s);
    let mut verts = vec![0usize; count];
    let mut edges = vec![0usize; count];
    for &l in &label {
        verts[l] += 1;
    }
    for e in s.edges() {
        edges[label[g.edge(e).tail]] += 1;
    }
    (0..count).map(|c| edges[c] + 1 - verts[c]).collect()
}

fn check_forms_len(m: usize, lens: impl Iterator<Item = usize>) -> Result<()> {
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

fn cols_to_mat(cols: &[CVec], rows: usize) -> CMat {
    let mut m = CMat::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// Orthonormal ω-basis of `im d`.
pub fn im_d_basis(g: &WeightedGraph) -> CMat {
    let x = g.weights();
    linalg::orthonormalize(&linalg::forms_to_omega(x, &g.coboundary_forms()))
}

/// ω-coordinates of `J_x c`.
pub fn chain_to_omega(x: &[f64], c: &Chain1) -> CVec {
    linalg::form_to_omega(x, &linalg::j_x(x, c))
}

/// Orthonormal basis of `im d ∩ (J_xΦ)^⊥`.
fn forest_basis(g: &WeightedGraph, phi: &[Chain1]) -> Result<CMat> {
    let x = g.weights();
    let qd = im_d_basis(g);
    let pd = linalg::projector(&qd);
    let u = cols_to_mat(
        &phi.iter().map(|c| &pd * chain_to_omega(x, c)).collect_vec(),
        g.num_edges(),
    );
    let scale = phi
        .iter()
        .map(|c| chain_to_omega(x, c).norm())
        .fold(0.0, f64::max);
    let qu = linalg::orthonormalize(&u);
    if qu.ncols() != phi.len() || (!phi.is_empty() && linalg::max_abs(&u) <= linalg::RANK_TOL * scale) {
        return Err(Error::DegenerateForms(
            "span of Φ meets the cycle space".into(),
        ));
    }
    let coords = linalg::orthonormalize(&(qd.adjoint() * qu));
    Ok(&qd * linalg::complement_basis(&coords))
}

fn with_forms(g: &WeightedGraph, base: CMat, theta: &[Form1]) -> Result<CMat> {
    let x = g.weights();
    let mut all = CMat::zeros(g.num_edges(), base.ncols() + theta.len());
    all.columns_mut(0, base.ncols()).copy_from(&base);
    for (j, t) in theta.iter().enumerate() {
        all.set_column(base.ncols() + j, &linalg::form_to_omega(x, t));
    }
    let q = linalg::orthonormalize(&all);
    if q.ncols() != base.ncols() + theta.len() {
        return Err(Error::DegenerateForms(
            "span of Θ meets the base subspace".into(),
        ));
    }
    Ok(q)
}

/// Columns `d_h 1_v`: `+1` where `v` is the head, `−h_e` where it is the tail.
pub fn covariant_coboundary(g: &WeightedGraph, h: &[C64]) -> CMat {
    let mut m = CMat::zeros(g.num_edges(), g.num_vertices());
    for (i, e) in g.edges().iter().enumerate() {
        m[(i, e.head)] += C64::new(1.0, 0.0);
        m[(i, e.tail)] -= h[i];
    }
    m
}

pub fn check_connection(g: &WeightedGraph, h: &[C64]) -> Result<()> {
    check_forms_len(g.num_edges(), std::iter::once(h.len()))?;
    for (i, c) in h.iter().enumerate() {
        if (c.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnitConnection(i));
        }
    }
    Ok(())
}

/// Orthonormal ω-basis of the range of the kernel of `spec`.
pub fn kernel_basis(g: &WeightedGraph, spec: &MeasureSpec) -> Result<CMat> {
    let m = g.num_edges();
    let x = g.weights();
    match spec {
        MeasureSpec::Ust => Ok(im_d_basis(g)),
        MeasureSpec::ConnectedK { theta } => {
            check_forms_len(m, theta.iter().map(Form1::len))?;
            with_forms(g, im_d_basis(g), theta)
        }
        MeasureSpec::ForestK { phi } => {
            check_forms_len(m, phi.iter().map(Chain1::len))?;
            forest_basis(g, phi)
        }
        MeasureSpec::Mixed { phi, theta } => {
            check_forms_len(m, phi.iter().map(Chain1::len))?;
            check_forms_len(m, theta.iter().map(Form1::len))?;
            with_forms(g, forest_basis(g, phi)?, theta)
        }
        MeasureSpec::Crsf { connection } => {
            check_connection(g, connection)?;
            let mut dh = covariant_coboundary(g, connection);
            for (i, &w) in x.iter().enumerate() {
                let s = w.sqrt();
                dh.row_mut(i).iter_mut().for_each(|c| *c *= s);
            }
            let q = linalg::orthonormalize(&dh);
            if q.ncols() != g.num_vertices() {
                return Err(Error::DegenerateForms(
                    "connection has trivial holonomy on some component".into(),
                ));
            }
            Ok(q)
        }
    }
}

pub fn build_kernel(g: &WeightedGraph, spec: &MeasureSpec) -> Result<ProjectionKernel> {
    Ok(ProjectionKernel::from_orthonormal(&kernel_basis(g, spec)?))
}

/// A weight split into its monomial part `x^S` and topological factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubgraphWeight {
    pub monomial: f64,
    pub topological: f64,
    pub value: f64,
}

impl SubgraphWeight {
    fn new(monomial: f64, topological: f64) -> Self {
        SubgraphWeight {
            monomial,
            topological,
            value: monomial * topological,
        }
    }
}

/// `x^K |det(θ_i(γ_j))|²` with `γ` the fundamental cycles of the greedy
/// spanning tree of `K`.
pub fn cycle_weight(g: &WeightedGraph, k: &SubgraphMask, theta: &[Form1]) -> Result<SubgraphWeight> {
    if !k.is_connected() {
        return Err(Error::NotConnected);
    }
    if k.b1() != theta.len() {
        return Err(Error::WrongBetti {
            expected: theta.len(),
            found: k.b1(),
        });
    }
    let gammas = cycle_basis(g, k).iter().map(|c| c.to_chain()).collect_vec();
    Ok(SubgraphWeight::new(
        g.monomial(k),
        pairing_det(theta, &gammas),
    ))
}

/// `|det(θ_i(c_j))|²`.
pub fn pairing_det(theta: &[Form1], chains: &[Chain1]) -> f64 {
    let n = theta.len();
    let m = CMat::from_fn(n, n, |i, j| pair(&theta[i], &chains[j]));
    linalg::det(&m).norm_sqr()
}

/// `x^F |det((φ_i, κ_j))|²` with `κ_j = δ1_{V(T_j)}` over all trees of `F`
/// except tree `omit` (trees numbered by their smallest vertex).
pub fn forest_weight_omitting(
    g: &WeightedGraph,
    f: &SubgraphMask,
    phi: &[Chain1],
    omit: usize,
) -> Result<SubgraphWeight> {
    if !f.is_forest() {
        return Err(Error::ForestHasCycle);
    }
    if f.b0() != phi.len() + 1 {
        return Err(Error::WrongComponentCount {
            expected: phi.len() + 1,
            found: f.b0(),
        });
    }
    let (label, count) = components(g, f);
    let cuts = (0..count)
        .filter(|&c| c != omit % count)
        .map(|c| {
            let inside = label.iter().map(|&l| l == c).collect_vec();
            coboundary_of_indicator(g, &inside).to_form()
        })
        .collect_vec();
    Ok(SubgraphWeight::new(g.monomial(f), pairing_det(&cuts, phi)))
}

pub fn forest_weight(g: &WeightedGraph, f: &SubgraphMask, phi: &[Chain1]) -> Result<SubgraphWeight> {
    forest_weight_omitting(g, f, phi, f.b0().saturating_sub(1))
}

/// Holonomy of `h` along a chain with coefficients in `{−1,0,1}`.
pub fn holonomy(h: &[C64], cycle: &[i64]) -> C64 {
    cycle
        .iter()
        .zip(h)
        .fold(C64::new(1.0, 0.0), |acc, (&c, &he)| match c {
            1 => acc * he,
            -1 => acc * he.conj(),
            _ => acc,
        })
}

/// `x^S Π_c |1 − hol_h(c)|²` over the cycles of a cycle-rooted forest;
/// zero when some component is a tree.
pub fn crsf_weight(g: &WeightedGraph, s: &SubgraphMask, h: &[C64]) -> Result<SubgraphWeight> {
    check_connection(g, h)?;
    let betti = per_component_betti(g, s);
    if let Some(&b) = betti.iter().find(|&&b| b >= 2) {
        return Err(Error::ComponentBettiTooLarge(b));
    }
    if betti.contains(&0) {
        return Ok(SubgraphWeight::new(g.monomial(s), 0.0));
    }
    let topo = cycle_basis(g, s)
        .iter()
        .map(|c| (C64::new(1.0, 0.0) - holonomy(h, &c.0)).norm_sqr())
        .product();
    Ok(SubgraphWeight::new(g.monomial(s), topo))
}

/// Weight of `s` under `spec` (not available for the mixed family).
pub fn weight(g: &WeightedGraph, spec: &MeasureSpec, s: &SubgraphMask) -> Result<SubgraphWeight> {
    match spec {
        MeasureSpec::Ust => {
            if !s.is_spanning_tree() {
                return Err(Error::NotSpanningTree);
            }
            Ok(SubgraphWeight::new(g.monomial(s), 1.0))
        }
        MeasureSpec::ConnectedK { theta } => cycle_weight(g, s, theta),
        MeasureSpec::ForestK { phi } => forest_weight(g, s, phi),
        MeasureSpec::Crsf { connection } => crsf_weight(g, s, connection),
        MeasureSpec::Mixed { .. } => Err(Error::InvalidInput(
            "no closed-form weight for the mixed family".into(),
        )),
    }
}

/// Dual picture of a measure on a planar graph: a forest measure on `G` with
/// chains `Φ` corresponds to a connected measure on `G†` with forms `Φ♯`
/// (same coefficients, edge `e` read as `e†`) and inverted weights, and
/// conversely. Subgraphs correspond via `S ↦ (S^c)†`.
pub fn dual_transport(
    g: &WeightedGraph,
    emb: &PlanarEmbedding,
    spec: &MeasureSpec,
) -> Result<(graph::DualGraph, MeasureSpec)> {
    let mut dual = graph::planar_dual(g, emb)?;
    dual.graph = dual.graph.inverted_weights();
    let out = match spec {
        MeasureSpec::Ust => MeasureSpec::Ust,
        MeasureSpec::ForestK { phi } => MeasureSpec::ConnectedK {
            theta: phi.iter().map(|c| Form1(c.0.clone())).collect(),
        },
        MeasureSpec::ConnectedK { theta } => MeasureSpec::ForestK {
            phi: theta.iter().map(|t| Chain1(t.0.clone())).collect(),
        },
        _ => {
            return Err(Error::InvalidInput(format!(
                "no planar dual for the {} measure",
                spec.name()
            )))
        }
    };
    Ok((dual, out))
}

fn unit_sphere<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// `k` real forms drawn uniformly from the unit sphere of `Ω¹`.
pub fn random_forms(m: usize, k: usize, seed: u64) -> Vec<Form1> {
    let mut rng = rng::stream(seed, Purpose::Forms);
    (0..k).map(|_| Form1::from_real(&unit_sphere(&mut rng, m))).collect()
}

/// `k` real chains drawn uniformly from the unit sphere of `Ω₁`.
pub fn random_chains(m: usize, k: usize, seed: u64) -> Vec<Chain1> {
    let mut rng = rng::stream(seed, Purpose::Forms);
    (0..k).map(|_| Chain1::from_real(&unit_sphere(&mut rng, m))).collect()
}

/// Connection with independent uniform angles on every edge.
pub fn random_connection(m: usize, seed: u64) -> Vec<C64> {
    let mut rng = rng::stream(seed, Purpose::Connection);
    (0..m)
        .map(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}
