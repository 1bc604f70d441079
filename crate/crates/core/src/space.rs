//! The ambient Krein space: fundamental symmetry, indefinite inner product
//! and J-adjoints.
//!
//! The associated Hilbert space of `(ℝⁿ, [·,·])` with `[x, y] = ⟨Jx, y⟩`
//! carries the plain Euclidean inner product, because `J` is a symmetric
//! involution: `[Jx, y] = xᵀJJy = xᵀy`. All orthonormality statements in
//! this crate therefore refer to the Euclidean metric.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{KreinError, Result};
use crate::linalg;
use crate::DEFAULT_TOL;

/// Dense operator acting on the ambient space.
pub type Operator = DMatrix<f64>;

/// Coordinate vector in the ambient space.
pub type Vector = DVector<f64>;

#[derive(Debug)]
struct SpaceInner {
    n: usize,
    j: DMatrix<f64>,
    kappa_plus: usize,
    kappa_minus: usize,
}

/// Finite-dimensional Krein space: a dimension together with a fundamental
/// symmetry `J` (symmetric, `J² = I`).
///
/// Cloning is cheap; the symmetry is shared behind an [`Arc`].
#[derive(Debug, Clone)]
pub struct Space {
    inner: Arc<SpaceInner>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n && self.inner.j == other.inner.j)
    }
}

impl Space {
    /// Builds the space with `J = diag(signs)`.
    pub fn from_signs(signs: &[i8]) -> Result<Space> {
        if signs.is_empty() || signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(KreinError::InvalidSigns);
        }
        let n = signs.len();
        let j = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            signs.iter().map(|&s| f64::from(s)),
        ));
        let kappa_plus = signs.iter().filter(|&&s| s == 1).count();
        Ok(Space {
            inner: Arc::new(SpaceInner {
                n,
                j,
                kappa_plus,
                kappa_minus: n - kappa_plus,
            }),
        })
    }

    /// Builds the space from an explicit symmetric involution.
    pub fn from_matrix(j: DMatrix<f64>) -> Result<Space> {
        let n = j.nrows();
        if n == 0 || j.ncols() != n {
            return Err(KreinError::InvalidSigns);
        }
        let scale = linalg::max_abs(&j).max(1.0);
        if linalg::max_abs(&(&j - j.transpose())) > DEFAULT_TOL * scale {
            return Err(KreinError::NotSymmetric);
        }
        if linalg::max_abs(&(&j * &j - DMatrix::identity(n, n))) > DEFAULT_TOL * scale {
            return Err(KreinError::NotAnInvolution);
        }
        let (eigenvalues, _) = linalg::symmetric_eigen_sorted(&j);
        let kappa_plus = eigenvalues.iter().filter(|&&v| v > 0.0).count();
        Ok(Space {
            inner: Arc::new(SpaceInner {
                n,
                j,
                kappa_plus,
                kappa_minus: n - kappa_plus,
            }),
        })
    }

    /// Hilbert space of dimension `n` (`J = I`).
    pub fn hilbert(n: usize) -> Space {
        Space::from_signs(&vec![1; n]).expect("positive signature is valid")
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.inner.n
    }

    /// The fundamental symmetry `J`.
    pub fn symmetry(&self) -> &DMatrix<f64> {
        &self.inner.j
    }

    /// Number of `+1` eigenvalues of `J`.
    pub fn kappa_plus(&self) -> usize {
        self.inner.kappa_plus
    }

    /// Number of `−1` eigenvalues of `J`.
    pub fn kappa_minus(&self) -> usize {
        self.inner.kappa_minus
    }

    pub(crate) fn check_vector(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.inner.n {
            return Err(KreinError::DimensionMismatch {
                expected: self.inner.n,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_operator(&self, a: &Operator) -> Result<()> {
        if a.nrows() != self.inner.n || a.ncols() != self.inner.n {
            return Err(KreinError::DimensionMismatch {
                expected: self.inner.n,
                found: a.nrows().max(a.ncols()),
            });
        }
        Ok(())
    }

    /// Indefinite inner product `[x, y] = xᵀ J y`.
    pub fn indefinite_inner(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok((x.transpose() * &self.inner.j * y)[(0, 0)])
    }

    /// J-adjoint `A^# = J Aᵀ J`.
    pub fn j_adjoint(&self, a: &Operator) -> Result<Operator> {
        self.check_operator(a)?;
        Ok(&self.inner.j * a.transpose() * &self.inner.j)
    }

    /// Tests `A^# = A` in the max-absolute-entry norm, relative to
    /// `max(1, ‖A‖)`.
    pub fn is_j_selfadjoint(&self, a: &Operator, tol: f64) -> Result<bool> {
        Ok(self.j_selfadjoint_residual(a)? <= tol * linalg::max_abs(a).max(1.0))
    }

    /// Residual `‖A^# − A‖` in the max-absolute-entry norm.
    pub fn j_selfadjoint_residual(&self, a: &Operator) -> Result<f64> {
        let adj = self.j_adjoint(a)?;
        Ok(linalg::max_abs(&(adj - a)))
    }

    /// Orthonormal eigenbasis of the canonical decomposition: columns
    /// spanning the `+1` eigenspace of `J` and columns spanning the `−1`
    /// eigenspace.
    pub(crate) fn canonical_bases(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let (values, vectors) = linalg::symmetric_eigen_sorted(&self.inner.j);
        let n = self.inner.n;
        let minus: Vec<usize> = (0..n).filter(|&i| values[i] < 0.0).collect();
        let plus: Vec<usize> = (0..n).filter(|&i| values[i] > 0.0).collect();
        let mut e_plus = DMatrix::zeros(n, plus.len());
        for (k, &i) in plus.iter().enumerate() {
            e_plus.set_column(k, &vectors.column(i));
        }
        let mut e_minus = DMatrix::zeros(n, minus.len());
        for (k, &i) in minus.iter().enumerate() {
            e_minus.set_column(k, &vectors.column(i));
        }
        (e_plus, e_minus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space_211() -> Space {
        Space::from_signs(&[1, 1, -1]).unwrap()
    }

    #[test]
    fn signature_space_counts_inertia() {
        let s = space_211();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.kappa_plus(), 2);
        assert_eq!(s.kappa_minus(), 1);
    }

    #[test]
    fn identity_signature_is_hilbert() {
        let s = Space::from_signs(&[1, 1]).unwrap();
        assert_eq!(s.symmetry(), &DMatrix::identity(2, 2));
        assert_eq!(s.kappa_minus(), 0);
    }

    #[test]
    fn swap_matrix_has_split_inertia() {
        let j = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let s = Space::from_matrix(j).unwrap();
        assert_eq!(s.kappa_plus(), 1);
        assert_eq!(s.kappa_minus(), 1);
    }

    #[test]
    fn non_involution_is_rejected() {
        let j = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        assert!(matches!(
            Space::from_matrix(j),
            Err(KreinError::NotAnInvolution)
        ));
        let j = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(matches!(
            Space::from_matrix(j),
            Err(KreinError::NotSymmetric)
        ));
    }

    #[test]
    fn bad_signs_are_rejected() {
        assert!(matches!(
            Space::from_signs(&[]),
            Err(KreinError::InvalidSigns)
        ));
        assert!(matches!(
            Space::from_signs(&[1, 0]),
            Err(KreinError::InvalidSigns)
        ));
    }

    #[test]
    fn inner_product_matches_signature() {
        let s = space_211();
        let e1 = DVector::from_column_slice(&[1.0, 0.0, 0.0]);
        let e3 = DVector::from_column_slice(&[0.0, 0.0, 1.0]);
        assert_eq!(s.indefinite_inner(&e1, &e1).unwrap(), 1.0);
        assert_eq!(s.indefinite_inner(&e3, &e3).unwrap(), -1.0);
        // x = (1/√2, 0, √3/√2) is J-negative with [x, x] = −1.
        let x = DVector::from_column_slice(&[
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            (3.0f64 / 2.0).sqrt(),
        ]);
        assert!((s.indefinite_inner(&x, &x).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn inner_product_checks_dimensions() {
        let s = space_211();
        let short = DVector::from_column_slice(&[1.0, 0.0]);
        let e1 = DVector::from_column_slice(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            s.indefinite_inner(&short, &e1),
            Err(KreinError::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn j_adjoint_on_rank_one_operator() {
        // a = e₁e₃ᵀ maps to −e₃e₁ᵀ under conjugation with diag(1,1,−1).
        let s = space_211();
        let mut a = DMatrix::zeros(3, 3);
        a[(0, 2)] = 1.0;
        let adj = s.j_adjoint(&a).unwrap();
        let mut expected = DMatrix::zeros(3, 3);
        expected[(2, 0)] = -1.0;
        assert_eq!(adj, expected);
    }

    #[test]
    fn j_adjoint_is_involutive_and_reduces_to_transpose() {
        let s = space_211();
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        let twice = s.j_adjoint(&s.j_adjoint(&a).unwrap()).unwrap();
        assert_eq!(twice, a);
        let h = Space::hilbert(3);
        assert_eq!(h.j_adjoint(&a).unwrap(), a.transpose());
    }

    #[test]
    fn symmetry_is_j_selfadjoint() {
        let s = space_211();
        assert!(s.is_j_selfadjoint(s.symmetry(), 1e-12).unwrap());
        assert!(s
            .is_j_selfadjoint(&DMatrix::identity(3, 3), 1e-12)
            .unwrap());
    }
}
