//! Subspace algebra under the indefinite inner product.
//!
//! A subspace is stored through a column-orthonormal basis `B` of the
//! associated Hilbert metric, so that the orthogonal projection is
//! `π = BBᵀ` and the Gramian (the compression of `J` to the subspace) is
//! `G = BᵀJB`. The Gramian spectrum drives everything else: the sign
//! classification, the reduced minimum modulus `γ`, the angle to the
//! neutral cone and the isotropic/deficiency splitting.

use nalgebra::DMatrix;

use crate::error::{KreinError, Result};
use crate::linalg;
use crate::space::{Operator, Space, Vector};
use crate::DEFAULT_TOL;

/// Sign classification of a subspace with respect to `[·,·]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceClass {
    UniformlyPositive,
    UniformlyNegative,
    Neutral,
    Degenerate,
    Indefinite,
    Zero,
}

impl std::fmt::Display for SubspaceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SubspaceClass::UniformlyPositive => "uniformly-positive",
            SubspaceClass::UniformlyNegative => "uniformly-negative",
            SubspaceClass::Neutral => "neutral",
            SubspaceClass::Degenerate => "degenerate",
            SubspaceClass::Indefinite => "indefinite",
            SubspaceClass::Zero => "zero",
        };
        f.write_str(name)
    }
}

/// Gramian eigenvalues (ascending) together with the reduced minimum
/// modulus `γ`: the smallest absolute value among eigenvalues above the
/// rank cutoff, `None` when every eigenvalue falls below it.
#[derive(Debug, Clone)]
pub struct GramSpectrum {
    pub eigenvalues: Vec<f64>,
    pub gamma: Option<f64>,
}

/// A closed subspace of a Krein space, held as an orthonormal basis in the
/// associated Hilbert metric. The zero subspace (`dim = 0`) is a
/// first-class value.
#[derive(Debug, Clone)]
pub struct Subspace {
    space: Space,
    basis: DMatrix<f64>,
}

impl Subspace {
    /// The zero subspace.
    pub fn zero(space: &Space) -> Subspace {
        Subspace {
            space: space.clone(),
            basis: DMatrix::zeros(space.dim(), 0),
        }
    }

    /// Span of the given vectors, orthonormalised by a rank-revealing
    /// factorisation; directions with singular value at most
    /// `tol · σ_max` are discarded.
    pub fn span(space: &Space, vectors: &[Vector], tol: f64) -> Result<Subspace> {
        for v in vectors {
            space.check_vector(v)?;
        }
        let mut raw = DMatrix::zeros(space.dim(), vectors.len());
        for (k, v) in vectors.iter().enumerate() {
            raw.set_column(k, v);
        }
        Ok(Subspace {
            space: space.clone(),
            basis: linalg::orthonormal_column_basis(&raw, tol),
        })
    }

    /// Span of the columns of a matrix; see [`Subspace::span`].
    pub fn span_columns(space: &Space, columns: &DMatrix<f64>, tol: f64) -> Result<Subspace> {
        if columns.nrows() != space.dim() {
            return Err(KreinError::DimensionMismatch {
                expected: space.dim(),
                found: columns.nrows(),
            });
        }
        Ok(Subspace {
            space: space.clone(),
            basis: linalg::orthonormal_column_basis(columns, tol),
        })
    }

    /// Wraps an already orthonormal basis without re-factorising.
    pub(crate) fn from_orthonormal_basis(space: &Space, basis: DMatrix<f64>) -> Subspace {
        debug_assert_eq!(basis.nrows(), space.dim());
        debug_assert!(
            linalg::max_abs(
                &(basis.transpose() * &basis - DMatrix::identity(basis.ncols(), basis.ncols()))
            ) < 1e-10
        );
        Subspace {
            space: space.clone(),
            basis,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Stored orthonormal basis (`n × dim`).
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_same_space(&self, other: &Subspace) -> Result<()> {
        if self.space != other.space {
            return Err(KreinError::DimensionMismatch {
                expected: self.space.dim(),
                found: other.space.dim(),
            });
        }
        Ok(())
    }

    /// Orthogonal projection `π = BBᵀ` onto the subspace.
    pub fn orthogonal_projection(&self) -> Operator {
        &self.basis * self.basis.transpose()
    }

    /// Gramian compression `G = BᵀJB`.
    pub fn gram_matrix(&self) -> DMatrix<f64> {
        linalg::sym(&(self.basis.transpose() * self.space.symmetry() * &self.basis))
    }

    /// Gramian spectrum with the default cutoff.
    pub fn gramian(&self) -> Result<GramSpectrum> {
        self.gram_spectrum(DEFAULT_TOL)
    }

    /// Gramian spectrum with an explicit cutoff for `γ`.
    pub fn gram_spectrum(&self, tol: f64) -> Result<GramSpectrum> {
        if self.is_zero() {
            return Err(KreinError::ZeroSubspace);
        }
        let (values, _) = linalg::symmetric_eigen_sorted(&self.gram_matrix());
        let eigenvalues: Vec<f64> = values.iter().copied().collect();
        let gamma = eigenvalues
            .iter()
            .map(|v| v.abs())
            .filter(|a| *a > tol)
            .fold(None, |acc: Option<f64>, a| {
                Some(acc.map_or(a, |m| m.min(a)))
            });
        Ok(GramSpectrum { eigenvalues, gamma })
    }

    /// Sign classification from the Gramian eigenvalues, with an absolute
    /// tolerance separating "zero" from signed eigenvalues.
    pub fn classify(&self, tol: f64) -> SubspaceClass {
        if self.is_zero() {
            return SubspaceClass::Zero;
        }
        let (values, _) = linalg::symmetric_eigen_sorted(&self.gram_matrix());
        let pos = values.iter().filter(|&&v| v >= tol).count();
        let neg = values.iter().filter(|&&v| v <= -tol).count();
        let null = values.len() - pos - neg;
        match (pos, neg, null) {
            (_, 0, 0) => SubspaceClass::UniformlyPositive,
            (0, _, 0) => SubspaceClass::UniformlyNegative,
            (0, 0, _) => SubspaceClass::Neutral,
            (_, 0, _) | (0, _, _) => SubspaceClass::Degenerate,
            _ => SubspaceClass::Indefinite,
        }
    }

    /// Reduced minimum modulus `γ(G)`: the smallest nonzero Gramian
    /// eigenvalue in absolute value.
    pub fn reduced_min_modulus(&self, tol: f64) -> Result<f64> {
        self.gram_spectrum(tol)?.gamma.ok_or(KreinError::AllNeutral)
    }

    /// Cosine-type angle between a uniformly definite subspace and the
    /// neutral cone:
    /// `c₀ = (1/√2)(√((1+γ)/2) + √((1−γ)/2))`, which lies in `[1/√2, 1)`.
    pub fn cone_angle(&self, tol: f64) -> Result<f64> {
        match self.classify(tol) {
            SubspaceClass::UniformlyPositive | SubspaceClass::UniformlyNegative => {}
            _ => return Err(KreinError::NotUniformlyDefinite),
        }
        let gamma = self.reduced_min_modulus(tol)?;
        Ok(cone_angle_from_gamma(gamma))
    }

    /// J-orthogonal projection `Q = B G⁻¹ Bᵀ J`. Requires a nondegenerate
    /// Gramian; satisfies `Q² = Q`, `Q^# = Q`, `QB = B`.
    pub fn j_projection(&self, tol: f64) -> Result<Operator> {
        let n = self.space.dim();
        if self.is_zero() {
            return Ok(DMatrix::zeros(n, n));
        }
        let gram = self.gram_matrix();
        let (values, _) = linalg::symmetric_eigen_sorted(&gram);
        if values.iter().any(|v| v.abs() <= tol) {
            return Err(KreinError::DegenerateSubspace);
        }
        let inv = gram
            .try_inverse()
            .ok_or(KreinError::DegenerateSubspace)?;
        Ok(&self.basis * inv * self.basis.transpose() * self.space.symmetry())
    }

    /// Isotropic part `M ∩ M^[⊥]`: the span of Gramian eigenvectors with
    /// eigenvalue within `tol` of zero.
    pub fn isotropic_part(&self, tol: f64) -> Subspace {
        self.gram_eigen_slice(tol, true)
    }

    /// Deficiency part `M ⊖ M⁰`: the span of Gramian eigenvectors with
    /// eigenvalue beyond `tol`. Orthogonal to the isotropic part; the two
    /// dimensions sum to `dim`.
    pub fn deficiency_part(&self, tol: f64) -> Subspace {
        self.gram_eigen_slice(tol, false)
    }

    fn gram_eigen_slice(&self, tol: f64, isotropic: bool) -> Subspace {
        if self.is_zero() {
            return Subspace::zero(&self.space);
        }
        let (values, vectors) = linalg::symmetric_eigen_sorted(&self.gram_matrix());
        let keep: Vec<usize> = (0..values.len())
            .filter(|&i| (values[i].abs() <= tol) == isotropic)
            .collect();
        let mut selected = DMatrix::zeros(self.dim(), keep.len());
        for (k, &i) in keep.iter().enumerate() {
            selected.set_column(k, &vectors.column(i));
        }
        Subspace::from_orthonormal_basis(&self.space, &self.basis * selected)
    }

    /// True when the subspace is uniformly definite of the given sign and
    /// its dimension equals the matching inertia count of `J` (maximality
    /// in finite dimension). The zero subspace counts as maximal exactly
    /// when the corresponding inertia count is zero.
    pub fn is_maximal_uniformly_definite(&self, sign: i8, tol: f64) -> bool {
        let kappa = if sign > 0 {
            self.space.kappa_plus()
        } else {
            self.space.kappa_minus()
        };
        if self.is_zero() {
            return kappa == 0;
        }
        let wanted = if sign > 0 {
            SubspaceClass::UniformlyPositive
        } else {
            SubspaceClass::UniformlyNegative
        };
        self.classify(tol) == wanted && self.dim() == kappa
    }

    /// J-orthogonality test: `‖B_aᵀ J B_b‖_max ≤ tol`.
    pub fn j_orthogonal(&self, other: &Subspace, tol: f64) -> Result<bool> {
        self.check_same_space(other)?;
        let cross = self.basis.transpose() * self.space.symmetry() * &other.basis;
        Ok(linalg::max_abs(&cross) <= tol)
    }

    /// Closed sum, orthonormalised from the concatenated bases.
    pub fn sum(&self, other: &Subspace, tol: f64) -> Result<Subspace> {
        self.check_same_space(other)?;
        let n = self.space.dim();
        let mut stacked = DMatrix::zeros(n, self.dim() + other.dim());
        stacked.view_mut((0, 0), (n, self.dim())).copy_from(&self.basis);
        stacked
            .view_mut((0, self.dim()), (n, other.dim()))
            .copy_from(&other.basis);
        Ok(Subspace {
            space: self.space.clone(),
            basis: linalg::orthonormal_column_basis(&stacked, tol),
        })
    }

    /// Intersection, computed from the null space of `[B_a | −B_b]`:
    /// a kernel vector `(u, v)` certifies `B_a u = B_b v`, a vector lying
    /// in both subspaces.
    pub fn intersect(&self, other: &Subspace, tol: f64) -> Result<Subspace> {
        self.check_same_space(other)?;
        let (da, db) = (self.dim(), other.dim());
        if da == 0 || db == 0 {
            return Ok(Subspace::zero(&self.space));
        }
        let n = self.space.dim();
        let mut stacked = DMatrix::zeros(n, da + db);
        stacked.view_mut((0, 0), (n, da)).copy_from(&self.basis);
        stacked.view_mut((0, da), (n, db)).copy_from(&(-&other.basis));
        let kernel = linalg::null_space_basis(&stacked, tol);
        let witnesses = &self.basis * kernel.view((0, 0), (da, kernel.ncols()));
        Ok(Subspace {
            space: self.space.clone(),
            basis: linalg::orthonormal_column_basis(&witnesses, tol),
        })
    }
}

/// The cone-angle formula as a function of the reduced minimum modulus.
pub fn cone_angle_from_gamma(gamma: f64) -> f64 {
    (((1.0 + gamma) / 2.0).sqrt() + ((1.0 - gamma).max(0.0) / 2.0).sqrt())
        * std::f64::consts::FRAC_1_SQRT_2
}
