//! Dense complex linear algebra for the x-weighted inner product
//! `⟨α,β⟩ = Σ x_e conj(α_e) β_e` on 1-forms.
//!
//! A form with coefficients `α_e` in the basis `e*` has coordinates
//! `√x_e α_e` in the orthonormal basis `ω_e`, so every weighted computation
//! reduces to a standard Hermitian one after [`form_to_omega`].

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Relative threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// A 1-form in the basis `(e*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form1(pub CVec);

/// A 1-chain in the basis `E⁺`. Carries no inner product of its own.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain1(pub CVec);

macro_rules! coeff_vector {
    ($t:ident) => {
        impl $t {
            pub fn zeros(m: usize) -> Self {
                $t(CVec::zeros(m))
            }

            pub fn from_real(values: &[f64]) -> Self {
                $t(CVec::from_iterator(
                    values.len(),
                    values.iter().map(|&v| C64::new(v, 0.0)),
                ))
            }

            pub fn from_complex(values: Vec<C64>) -> Self {
                $t(CVec::from_vec(values))
            }

            pub fn unit(m: usize, e: usize) -> Self {
                let mut v = CVec::zeros(m);
                v[e] = C64::new(1.0, 0.0);
                $t(v)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn coeffs(&self) -> &CVec {
                &self.0
            }

            pub fn scaled(&self, c: C64) -> Self {
                $t(&self.0 * c)
            }
        }
    };
}

coeff_vector!(Form1);
coeff_vector!(Chain1);

/// Pairing of a form with a chain, `(α, c) = Σ α_e c_e`. Bilinear, no conjugation.
pub fn pair(alpha: &Form1, c: &Chain1) -> C64 {
    alpha.0.iter().zip(c.0.iter()).map(|(a, b)| a * b).sum()
}

fn check_len(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: n,
        });
    }
    Ok(())
}

pub fn weighted_inner(x: &[f64], a: &Form1, b: &Form1) -> Result<C64> {
    check_len(x, a.len())?;
    check_len(x, b.len())?;
    Ok(x
        .iter()
        .zip(a.0.iter().zip(b.0.iter()))
        .map(|(&w, (p, q))| p.conj() * q * w)
        .sum())
}

/// `J_x`: the antilinear isomorphism `e ↦ x_e⁻¹ e*`.
pub fn j_x(x: &[f64], c: &Chain1) -> Form1 {
    Form1(CVec::from_iterator(
        c.len(),
        c.0.iter().zip(x).map(|(v, &w)| v.conj() / w),
    ))
}

pub fn j_x_inv(x: &[f64], a: &Form1) -> Chain1 {
    Chain1(CVec::from_iterator(
        a.len(),
        a.0.iter().zip(x).map(|(v, &w)| v.conj() * w),
    ))
}

pub fn form_to_omega(x: &[f64], a: &Form1) -> CVec {
    CVec::from_iterator(a.len(), a.0.iter().zip(x).map(|(v, &w)| v * w.sqrt()))
}

pub fn omega_to_form(x: &[f64], v: &CVec) -> Form1 {
    Form1(CVec::from_iterator(
        v.len(),
        v.iter().zip(x).map(|(c, &w)| c / w.sqrt()),
    ))
}

/// Columns of `forms` in ω coordinates.
pub fn forms_to_omega(x: &[f64], forms: &[Form1]) -> CMat {
    let m = x.len();
    let mut out = CMat::zeros(m, forms.len());
    for (j, f) in forms.iter().enumerate() {
        out.set_column(j, &form_to_omega(x, f));
    }
    out
}

/// Orthonormal basis (standard inner product) of the column span, by modified
/// Gram–Schmidt with one reorthogonalization pass. Columns whose residual falls
/// below `RANK_TOL` times the largest column norm are dropped.
pub fn orthonormalize(cols: &CMat) -> CMat {
    let (rows, n) = cols.shape();
    let scale = (0..n).map(|j| cols.column(j).norm()).fold(0.0, f64::max);
    let tol = RANK_TOL * scale;
    let mut basis: Vec<CVec> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: CVec = cols.column(j).into_owned();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&v);
                v.axpy(-c, q, C64::new(1.0, 0.0));
            }
        }
        let nv = v.norm();
        if nv > tol && nv > 0.0 {
            basis.push(v / C64::new(nv, 0.0));
        }
    }
    let mut q = CMat::zeros(rows, basis.len());
    for (j, b) in basis.iter().enumerate() {
        q.set_column(j, b);
    }
    q
}

pub fn numerical_rank(cols: &CMat) -> usize {
    orthonormalize(cols).ncols()
}

pub fn projector(q: &CMat) -> CMat {
    q * q.adjoint()
}

/// Orthonormal basis of the orthogonal complement of `span(q)` in `C^n`,
/// where `q` already has orthonormal columns.
pub fn complement_basis(q: &CMat) -> CMat {
    let n = q.nrows();
    let mut all = CMat::zeros(n, q.ncols() + n);
    all.columns_mut(0, q.ncols()).copy_from(q);
    all.columns_mut(q.ncols(), n).copy_from(&CMat::identity(n, n));
    let full = orthonormalize(&all);
    full.columns(q.ncols(), full.ncols() - q.ncols()).into_owned()
}

/// A subspace of 1-forms given by a spanning family in `e*` coordinates.
#[derive(Clone, Debug)]
pub struct Subspace {
    spanning: CMat,
}

impl Subspace {
    pub fn new(spanning: CMat) -> Self {
        Subspace { spanning }
    }

    pub fn from_forms(m: usize, forms: &[Form1]) -> Self {
        let mut s = CMat::zeros(m, forms.len());
        for (j, f) in forms.iter().enumerate() {
            s.set_column(j, &f.0);
        }
        Subspace { spanning: s }
    }

    pub fn zero(m: usize) -> Self {
        Subspace {
            spanning: CMat::zeros(m, 0),
        }
    }

    pub fn whole(m: usize) -> Self {
        Subspace {
            spanning: CMat::identity(m, m),
        }
    }

    pub fn spanning(&self) -> &CMat {
        &self.spanning
    }

    pub fn ambient_dim(&self) -> usize {
        self.spanning.nrows()
    }

    /// Orthonormal basis in ω coordinates for weights `x`.
    pub fn orthonormal_omega(&self, x: &[f64]) -> Result<CMat> {
        check_len(x, self.spanning.nrows())?;
        let mut w = self.spanning.clone();
        for (i, &xi) in x.iter().enumerate() {
            let s = xi.sqrt();
            w.row_mut(i).iter_mut().for_each(|c| *c *= s);
        }
        Ok(orthonormalize(&w))
    }
}

/// Matrix in the ω basis of the x-orthogonal projection on `s`.
/// Errors when the spanning columns are dependent.
pub fn orthogonal_projection(x: &[f64], s: &Subspace) -> Result<CMat> {
    let q = s.orthonormal_omega(x)?;
    if q.ncols() != s.spanning.ncols() {
        return Err(Error::RankDeficient {
            expected: s.spanning.ncols(),
            found: q.ncols(),
        });
    }
    Ok(projector(&q))
}

pub fn det(m: &CMat) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().determinant()
}

/// Determinant of the weighted Gram matrix `(⟨v_i, v_j⟩_x)`.
pub fn gram_det(x: &[f64], vectors: &[Form1]) -> f64 {
    let w = forms_to_omega(x, vectors);
    gram_det_cols(&w)
}

/// Determinant of `wᴴw` for columns already in orthonormal coordinates.
pub fn gram_det_cols(w: &CMat) -> f64 {
    det(&(w.adjoint() * w)).re.max(0.0)
}

/// Splits `det(u*u)` along `H = span(h)` inside the domain of `u`, returning
/// `(det over H^⊥, det of the compressed complement over H)` as in the Schur
/// complement formula. All spaces carry the standard inner product.
pub fn schur_split_det(u: &CMat, h: &CMat) -> Result<(f64, f64)> {
    if h.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch {
            expected: u.ncols(),
            found: h.nrows(),
        });
    }
    if numerical_rank(u) < u.ncols() {
        return Err(Error::RankDeficient {
            expected: u.ncols(),
            found: numerical_rank(u),
        });
    }
    let qh = orthonormalize(h);
    let qp = complement_basis(&qh);
    let u_perp = u * &qp;
    let first = gram_det_cols(&u_perp);
    let q_range = orthonormalize(&u_perp);
    let p_ker = CMat::identity(u.nrows(), u.nrows()) - projector(&q_range);
    let uh = u * &qh;
    let second = det(&(uh.adjoint() * p_ker * &uh)).re.max(0.0);
    Ok((first, second))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

pub fn rel_err_c(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn inner_product_basics() {
        let x = [1.0, 2.0];
        let e = Form1::unit(2, 0);
        let f = Form1::unit(2, 1);
        assert_eq!(weighted_inner(&x, &e, &e).unwrap(), c(1.0, 0.0));
        assert_eq!(weighted_inner(&x, &e, &f).unwrap(), c(0.0, 0.0));
        assert!(weighted_inner(&[1.0], &e, &f).is_err());
    }

    #[test]
    fn j_x_is_conjugation_at_unit_weight() {
        let ch = Chain1::from_complex(vec![c(1.0, 2.0), c(-3.0, 0.5)]);
        let f = j_x(&[1.0, 1.0], &ch);
        assert_eq!(f.0[0], c(1.0, -2.0));
        assert_eq!(j_x_inv(&[1.0, 1.0], &f), ch);
    }

    #[test]
    fn projection_of_whole_and_zero() {
        let x = [0.5, 2.0, 3.0];
        let p = orthogonal_projection(&x, &Subspace::whole(3)).unwrap();
        assert!(max_abs(&(p - CMat::identity(3, 3))) < 1e-12);
        let z = orthogonal_projection(&x, &Subspace::zero(3)).unwrap();
        assert_eq!(max_abs(&z), 0.0);
    }

    #[test]
    fn dependent_family_is_rejected_and_has_zero_gram() {
        let a = Form1::from_real(&[1.0, 2.0, 0.0]);
        let b = a.scaled(c(-2.0, 0.0));
        let s = Subspace::from_forms(3, &[a.clone(), b.clone()]);
        assert!(orthogonal_projection(&[1.0, 1.0, 1.0], &s).is_err());
        assert!(gram_det(&[1.0, 1.0, 1.0], &[a, b]) < 1e-20);
    }

    #[test]
    fn schur_trivial_splits() {
        let u = CMat::from_fn(5, 3, |i, j| c((i * 3 + j) as f64 % 4.0 + 0.5 * j as f64, i as f64 * 0.1));
        let full = gram_det_cols(&u);
        let (a, b) = schur_split_det(&u, &CMat::zeros(3, 0)).unwrap();
        assert!(rel_err(a, full) < 1e-10 && (b - 1.0).abs() < 1e-12);
        let (a, b) = schur_split_det(&u, &CMat::identity(3, 3)).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && rel_err(b, full) < 1e-10);
    }
}
