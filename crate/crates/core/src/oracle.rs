//! Brute-force ground truth by exhaustive subset enumeration.

use std::time::Instant;

use itertools::Itertools;
use serde::Serialize;

use crate::dpp::ProjectionKernel;
use crate::error::{Error, Result};
use crate::graph::{components, enumerate_subgraphs, SubgraphMask, WeightedGraph};
use crate::linalg::{self, CMat, Form1, C64};
use crate::matroid::LinearMatroid;
use crate::measures::{self, build_kernel, MeasureSpec};
use crate::par::{self, Execution};
use crate::polynomials::{self, Method, PolyEval, Polynomial};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Normalized probabilities below this are treated as zero when comparing
/// supports; above `SUPPORT_ON` as positive.
const SUPPORT_OFF: f64 = 1e-12;
const SUPPORT_ON: f64 = 1e-9;

/// A family of spanning subgraphs, described by exact `(b₀, b₁)` conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `C_k`: connected, `b₁ = k`.
    Connected(usize),
    /// `F_c`: forests with `c` components.
    Forest(usize),
    /// Cycle-rooted spanning forests: every component has `b₁ = 1`.
    Crsf,
    /// `B_{k,ℓ}`, the support of the mixed measure with `k` chains and `ℓ` forms.
    Mixed { k: usize, l: usize },
}

impl Family {
    pub fn size(&self, g: &WeightedGraph) -> Option<usize> {
        let n = g.num_vertices() as i64 - 1;
        let s = match *self {
            Family::Connected(k) => n + k as i64,
            Family::Forest(c) => n + 1 - c as i64,
            Family::Crsf => n + 1,
            Family::Mixed { k, l } => n + l as i64 - k as i64,
        };
        usize::try_from(s).ok()
    }

    pub fn contains(&self, g: &WeightedGraph, s: &SubgraphMask) -> bool {
        if Some(s.len()) != self.size(g) {
            return false;
        }
        match *self {
            Family::Connected(k) => s.b0() == 1 && s.b1() == k,
            Family::Forest(c) => s.b1() == 0 && s.b0() == c,
            Family::Crsf => measures::is_cycle_rooted(g, s),
            Family::Mixed { k, l } => {
                s.b0() as i64 - s.b1() as i64 == k as i64 - l as i64 + 1
                    && s.b1() + k >= l
                    && s.b1() <= l
            }
        }
    }

    pub fn of_spec(spec: &MeasureSpec) -> Family {
        match spec {
            MeasureSpec::Ust => Family::Connected(0),
            MeasureSpec::ConnectedK { theta } => Family::Connected(theta.len()),
            MeasureSpec::ForestK { phi } => Family::Forest(phi.len() + 1),
            MeasureSpec::Crsf { .. } => Family::Crsf,
            MeasureSpec::Mixed { phi, theta } => Family::Mixed {
                k: phi.len(),
                l: theta.len(),
            },
        }
    }
}

pub fn enumerate_family(
    g: &WeightedGraph,
    family: Family,
    cap: usize,
    exec: Execution,
) -> Result<Vec<SubgraphMask>> {
    match family.size(g) {
        Some(size) => enumerate_subgraphs(g, size, cap, exec, |s| family.contains(g, s)),
        None if g.num_edges() > cap => Err(Error::CapExceeded {
            size: g.num_edges(),
            cap,
        }),
        None => Ok(Vec::new()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub instance: String,
    pub family_size: usize,
    pub max_abs_density_err: f64,
    pub max_rel_poly_err: f64,
    pub support_mismatches: usize,
    pub tolerance: f64,
    pub runtime_ms: f64,
    pub pass: bool,
}

impl OracleReport {
    fn finish(
        instance: String,
        family_size: usize,
        density_err: f64,
        poly_err: f64,
        mismatches: usize,
        tolerance: f64,
        start: Instant,
    ) -> Self {
        OracleReport {
            instance,
            family_size,
            max_abs_density_err: density_err,
            max_rel_poly_err: poly_err,
            support_mismatches: mismatches,
            tolerance,
            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
            pass: mismatches == 0 && density_err <= tolerance && poly_err <= tolerance,
        }
    }
}

struct DensityCheck {
    family_size: usize,
    max_err: f64,
    mismatches: usize,
}

/// Compares `weight(S) / Σ weight` with `kernel.density(S)` over every
/// subset of size `rank`; `weight` returns `None` outside the family.
fn check_densities<F>(kernel: &ProjectionKernel, exec: Execution, weight: F) -> Result<DensityCheck>
where
    F: Fn(&[usize]) -> Result<Option<f64>> + Sync + Send,
{
    let subsets = (0..kernel.size()).combinations(kernel.rank()).collect_vec();
    let rows = par::map_slice(exec, &subsets, |s| -> Result<(Option<f64>, f64)> {
        Ok((weight(s)?, kernel.density(s)?))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let total: f64 = rows.iter().filter_map(|r| r.0).sum();
    if total <= 0.0 {
        return Err(Error::DegenerateForms("all weights vanish".into()));
    }
    let mut max_err: f64 = 0.0;
    let mut mismatches = 0;
    for &(w, dens) in &rows {
        let p = w.unwrap_or(0.0) / total;
        max_err = max_err.max((p - dens).abs());
        if (p > SUPPORT_ON && dens < SUPPORT_OFF) || (dens > SUPPORT_ON && p < SUPPORT_OFF) {
            mismatches += 1;
        }
    }
    Ok(DensityCheck {
        family_size: rows.iter().filter(|r| r.0.is_some()).count(),
        max_err,
        mismatches,
    })
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    Ok(())
}

/// Normalized combinatorial weights against the densities of the built
/// kernel. The mixed family has no closed-form weight; there the report
/// checks the support and that densities sum to one.
pub fn compare_measure(
    g: &WeightedGraph,
    spec: &MeasureSpec,
    tolerance: f64,
    cap: usize,
    exec: Execution,
) -> Result<OracleReport> {
    let start = Instant::now();
    check_cap(g.num_edges(), cap)?;
    let kernel = build_kernel(g, spec)?;
    let family = Family::of_spec(spec);
    let instance = format!(
        "{} on |V|={} |E|={}",
        spec.name(),
        g.num_vertices(),
        g.num_edges()
    );
    if let MeasureSpec::Mixed { .. } = spec {
        let subsets = (0..kernel.size()).combinations(kernel.rank()).collect_vec();
        let dens = par::map_slice(exec, &subsets, |s| {
            let mask = SubgraphMask::from_edges(g, s).expect("in range");
            (family.contains(g, &mask), kernel.density(s).expect("rank-sized"))
        });
        let outside = dens.iter().filter(|d| !d.0 && d.1 > SUPPORT_ON).count();
        let sum: f64 = dens.iter().map(|d| d.1).sum();
        return Ok(OracleReport::finish(
            instance,
            dens.iter().filter(|d| d.0).count(),
            (sum - 1.0).abs(),
            0.0,
            outside,
            tolerance,
            start,
        ));
    }
    let check = check_densities(&kernel, exec, |s| {
        let mask = SubgraphMask::from_edges(g, s)?;
        if !family.contains(g, &mask) {
            return Ok(None);
        }
        Ok(Some(measures::weight(g, spec, &mask)?.value))
    })?;
    Ok(OracleReport::finish(
        instance,
        check.family_size,
        check.max_err,
        0.0,
        check.mismatches,
        tolerance,
        start,
    ))
}

/// The defining sum of `p` at the graph's weights.
pub fn enumerate_polynomial(
    g: &WeightedGraph,
    p: &Polynomial,
    cap: usize,
    exec: Execution,
) -> Result<PolyEval> {
    let sum = |family: Family, term: &(dyn Fn(&SubgraphMask) -> Result<f64> + Sync)| -> Result<f64> {
        let members = enumerate_family(g, family, cap, exec)?;
        let terms = par::map_slice(exec, &members, |s| term(s));
        terms.into_iter().sum::<Result<f64>>()
    };
    let value = match p {
        Polynomial::Kirchhoff => sum(Family::Connected(0), &|s| Ok(g.monomial(s)))?,
        Polynomial::Psi1 => sum(Family::Connected(0), &|s| {
            Ok(g.monomial(&s.complement(g)))
        })?,
        Polynomial::Psi2 { q } => {
            polynomials::flow_chain(g, q)?;
            sum(Family::Forest(2), &|s| {
                let (label, _) = components(g, s);
                let charge: f64 = q
                    .iter()
                    .zip(&label)
                    .filter(|(_, &l)| l == label[0])
                    .map(|(c, _)| c)
                    .sum();
                Ok(charge * charge * g.monomial(&s.complement(g)))
            })?
        }
        Polynomial::Connected { theta } => sum(Family::Connected(theta.len()), &|s| {
            Ok(measures::cycle_weight(g, s, theta)?.value)
        })?,
        Polynomial::Forest { phi } => {
            if phi.len() >= g.num_vertices() {
                0.0
            } else {
                sum(Family::Forest(phi.len() + 1), &|s| {
                    Ok(measures::forest_weight(g, s, phi)?.value)
                })?
            }
        }
    };
    Ok(PolyEval {
        value: C64::new(value, 0.0),
        method: Method::Enumeration,
    })
}

pub fn compare_polynomial(
    g: &WeightedGraph,
    p: &Polynomial,
    tolerance: f64,
    cap: usize,
    exec: Execution,
) -> Result<OracleReport> {
    let start = Instant::now();
    let det = polynomials::evaluate(g, p)?;
    let brute = enumerate_polynomial(g, p, cap, exec)?;
    let err = linalg::rel_err_c(det.value, brute.value);
    let family_size = match Family::of_poly(p).and_then(|f| f.size(g)) {
        Some(_) => enumerate_family(g, Family::of_poly(p).unwrap(), cap, exec)?.len(),
        None => 0,
    };
    Ok(OracleReport::finish(
        format!(
            "{} on |V|={} |E|={}",
            p.name(),
            g.num_vertices(),
            g.num_edges()
        ),
        family_size,
        0.0,
        err,
        0,
        tolerance,
        start,
    ))
}

impl Family {
    fn of_poly(p: &Polynomial) -> Option<Family> {
        match p {
            Polynomial::Kirchhoff | Polynomial::Psi1 => Some(Family::Connected(0)),
            Polynomial::Psi2 { .. } => Some(Family::Forest(2)),
            Polynomial::Connected { theta } => Some(Family::Connected(theta.len())),
            Polynomial::Forest { phi } => Some(Family::Forest(phi.len() + 1)),
        }
    }
}

/// Number of spanning trees by enumeration and by the reduced Laplacian.
pub fn tree_count_check(g: &WeightedGraph, cap: usize) -> Result<(usize, f64)> {
    let unit = g.with_weights(vec![1.0; g.num_edges()])?;
    let count = enumerate_family(&unit, Family::Connected(0), cap, Execution::Parallel)?.len();
    Ok((count, polynomials::kirchhoff_t(&unit)))
}

/// Determinantal polynomials of a measured matroid.
#[derive(Clone, Debug, PartialEq)]
pub enum MatroidPoly {
    /// `B = Σ_T w(T)`.
    Bases,
    /// `K(𝒵₀, x) = Σ_T x^T |det(𝒵₀/𝒵_T)|²`.
    Kernel,
    /// `L^(k) = Σ_K x^K r(𝒵₀:𝒵^K) |(ϑ, z_K)|²`.
    Theorem { theta: Vec<Form1> },
}

impl MatroidPoly {
    pub fn name(&self) -> &'static str {
        match self {
            MatroidPoly::Bases => "B",
            MatroidPoly::Kernel => "K",
            MatroidPoly::Theorem { .. } => "L",
        }
    }
}

/// Defining sum of a matroid polynomial.
pub fn enumerate_matroid_poly(
    m: &LinearMatroid,
    which: &MatroidPoly,
    z0: &CMat,
    cap: usize,
    exec: Execution,
) -> Result<f64> {
    let k = match which {
        MatroidPoly::Theorem { theta } => theta.len(),
        _ => 0,
    };
    let members = m.family(k, cap, exec)?;
    let terms = par::map_slice(exec, &members, |s| match which {
        MatroidPoly::Bases => m.basis_weight(s),
        MatroidPoly::Kernel => m.density_via_circuits_with(z0, s),
        MatroidPoly::Theorem { theta } => m.theorem_weight(z0, theta, s),
    });
    terms.into_iter().sum()
}

/// Determinant route for a matroid polynomial.
pub fn matroid_poly(m: &LinearMatroid, which: &MatroidPoly, z0: &CMat) -> Result<f64> {
    match which {
        MatroidPoly::Bases => Ok(m.partition_b()),
        MatroidPoly::Kernel => Ok(m.partition_k(z0)),
        MatroidPoly::Theorem { theta } => m.partition_l(theta),
    }
}

pub fn compare_matroid_polynomial(
    m: &LinearMatroid,
    which: &MatroidPoly,
    tolerance: f64,
    cap: usize,
    exec: Execution,
) -> Result<OracleReport> {
    let start = Instant::now();
    let (z0, _) = m.normalized_kernel();
    let det = matroid_poly(m, which, &z0)?;
    let brute = enumerate_matroid_poly(m, which, &z0, cap, exec)?;
    let k = match which {
        MatroidPoly::Theorem { theta } => theta.len(),
        _ => 0,
    };
    Ok(OracleReport::finish(
        format!(
            "matroid {} d={} n={}",
            which.name(),
            m.ground_size(),
            m.rank()
        ),
        m.family(k, cap, exec)?.len(),
        0.0,
        linalg::rel_err(det, brute),
        0,
        tolerance,
        start,
    ))
}

/// Basis weights `w(T)` against the densities of the projection on `im D`,
/// and the circuit-determinant weights against the same densities.
pub fn compare_matroid_measure(
    m: &LinearMatroid,
    tolerance: f64,
    cap: usize,
    exec: Execution,
) -> Result<OracleReport> {
    let start = Instant::now();
    check_cap(m.ground_size(), cap)?;
    let kernel = m.kernel_matrix();
    let by_weight = check_densities(&kernel, exec, |t| {
        m.is_basis(t).then(|| m.basis_weight(t)).transpose()
    })?;
    let by_circuits = check_densities(&kernel, exec, |t| {
        m.is_basis(t).then(|| m.density_via_circuits(t)).transpose()
    })?;
    Ok(OracleReport::finish(
        format!("matroid bases d={} n={}", m.ground_size(), m.rank()),
        by_weight.family_size,
        by_weight.max_err.max(by_circuits.max_err),
        0.0,
        by_weight.mismatches + by_circuits.mismatches,
        tolerance,
        start,
    ))
}

/// Weights `x^K r(𝒵:𝒵^K)|(ϑ,z_K)|²` against the projection on `im D ⊕ Θ`.
pub fn compare_matroid_theorem(
    m: &LinearMatroid,
    theta: &[Form1],
    tolerance: f64,
    cap: usize,
    exec: Execution,
) -> Result<OracleReport> {
    let start = Instant::now();
    check_cap(m.ground_size(), cap)?;
    let kernel = m.theorem_kernel(theta)?;
    let z = m.kernel().clone();
    let check = check_densities(&kernel, exec, |s| {
        if m.spans(s) {
            Ok(Some(m.theorem_weight(&z, theta, s)?))
        } else {
            Ok(None)
        }
    })?;
    Ok(OracleReport::finish(
        format!(
            "matroid theorem d={} n={} k={}",
            m.ground_size(),
            m.rank(),
            theta.len()
        ),
        check.family_size,
        check.max_err,
        0.0,
        check.mismatches,
        tolerance,
        start,
    ))
}

/// Conditional law given `X ⊆ K`: circuit-determinant weights against the
/// conditioned kernel.
pub fn compare_matroid_conditional(
    m: &LinearMatroid,
    k_set: &[usize],
    tolerance: f64,
    exec: Execution,
) -> Result<OracleReport> {
    let start = Instant::now();
    let mut allowed = fixedbitset::FixedBitSet::with_capacity(m.ground_size());
    k_set.iter().for_each(|&e| allowed.insert(e));
    let kernel = m.kernel_matrix().condition_inside(&allowed)?;
    let check = check_densities(&kernel, exec, |t| {
        if t.iter().all(|e| allowed.contains(*e)) && m.is_basis(t) {
            Ok(Some(m.conditional_density(k_set, t)?))
        } else {
            Ok(None)
        }
    })?;
    Ok(OracleReport::finish(
        format!("matroid conditional d={} |K|={}", m.ground_size(), k_set.len()),
        check.family_size,
        check.max_err,
        0.0,
        check.mismatches,
        tolerance,
        start,
    ))
}
