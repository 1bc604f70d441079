//! Frame bounds, tightness and the geometric index ζ.
//!
//! Bounds come from symmetric-definite pencils on the aggregate spans. On
//! `M₊` the quadratic form `q(f) = Σ vᵢ² [Pᵢ f, f]` is compressed to the
//! basis of `M₊` and paired with the Gramian `G₊ = B₊ᵀJB₊`, which is
//! positive definite there; the extreme generalized eigenvalues are the
//! frame bounds. On `M₋` both matrices are negated so the pencil lives in
//! the Hilbert space `(M₋, −[·,·])`, and the computed extremes are negated
//! back on output, giving the convention `B₋ ≤ A₋ < 0 < A₊ ≤ B₊`.
//!
//! The modulus in the defining inequality is handled by working on the
//! definite subspaces where `[f, f]` has constant sign; whether every
//! individual term already has the expected sign there is surfaced through
//! the `per_term_definite` diagnostic instead of being folded into a
//! non-quadratic absolute-value form.

use nalgebra::DMatrix;

use crate::linalg;
use crate::subspace::{Subspace, SubspaceClass};

use super::Family;

/// Which projection enters the bound pencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PencilProjection {
    /// The ambient orthogonal projection `π_{Wᵢ}` (the printed reading).
    #[default]
    Ambient,
    /// The J-orthogonal projection `Q_{Wᵢ}`, i.e. the orthogonal
    /// projection of the Hilbert spaces `(M±, ±[·,·])`.
    JOrthogonal,
}

/// Outcome of a frame analysis.
///
/// Bounds are present only when the corresponding aggregate span is
/// uniformly definite; `zeta` needs both cone angles. A side with no
/// members contributes vacuously when the matching inertia count of `J`
/// is zero.
#[derive(Debug, Clone)]
pub struct FrameAnalysis {
    pub is_j_fusion_frame: bool,
    /// `(A₊, B₊)` with `0 < A₊ ≤ B₊`.
    pub bounds_plus: Option<(f64, f64)>,
    /// `(A₋, B₋)` with `B₋ ≤ A₋ < 0`.
    pub bounds_minus: Option<(f64, f64)>,
    pub tight_plus: bool,
    pub tight_minus: bool,
    pub parseval: bool,
    /// `γ(G_{M₊})`.
    pub alpha_plus: Option<f64>,
    /// `γ(G_{M₋})`.
    pub beta_plus: Option<f64>,
    /// `c₀(M₊, C) + c₀(M₋, C)`, in `[√2, 2)` for a J-fusion frame.
    pub zeta: Option<f64>,
    /// True when every member's quadratic form kept the sign of its side
    /// on the aggregate span.
    pub per_term_definite: bool,
}

struct SideResult {
    bounds: Option<(f64, f64)>,
    tight: bool,
    cone: Option<f64>,
    gamma: Option<f64>,
    per_term_definite: bool,
}

/// Pencil data for one sign: extreme generalized eigenvalues of
/// `(Σ vᵢ² sym(Bᵀ(±J)PᵢB), ±BᵀJB)` on the aggregate span.
fn side(
    family: &Family,
    indices: &[usize],
    aggregate: &Subspace,
    sign: f64,
    tol: f64,
    projection: PencilProjection,
) -> SideResult {
    let expected_class = if sign > 0.0 {
        SubspaceClass::UniformlyPositive
    } else {
        SubspaceClass::UniformlyNegative
    };
    let kappa = if sign > 0.0 {
        family.space().kappa_plus()
    } else {
        family.space().kappa_minus()
    };

    if indices.is_empty() {
        // Vacuous side: tight by convention, and when the matching
        // component of J is trivial the cone angle takes its Hilbert
        // value 1/√2 (γ = 1).
        return SideResult {
            bounds: None,
            tight: true,
            cone: (kappa == 0).then(|| std::f64::consts::FRAC_1_SQRT_2),
            gamma: None,
            per_term_definite: true,
        };
    }

    let gamma = aggregate.reduced_min_modulus(tol).ok();
    let cone = aggregate.cone_angle(tol).ok();
    if aggregate.classify(tol) != expected_class {
        return SideResult {
            bounds: None,
            tight: false,
            cone,
            gamma,
            per_term_definite: true,
        };
    }

    let basis = aggregate.basis();
    let j = family.space().symmetry();
    let metric = linalg::sym(&(basis.transpose() * (j * sign) * basis));
    let p = aggregate.dim();
    let mut form = DMatrix::zeros(p, p);
    let mut per_term_definite = true;
    for &i in indices {
        let member = &family.members()[i];
        let proj = match projection {
            PencilProjection::Ambient => member.subspace().orthogonal_projection(),
            PencilProjection::JOrthogonal => member
                .subspace()
                .j_projection(tol)
                .expect("family members are uniformly definite"),
        };
        let term = linalg::sym(&(basis.transpose() * (j * sign) * proj * basis));
        let scale = linalg::max_abs(&term).max(1.0);
        let (low, _) = linalg::symmetric_eigen_sorted(&term);
        if low.len() > 0 && low[0] < -tol * scale {
            per_term_definite = false;
        }
        form += term * (member.weight() * member.weight());
    }

    match linalg::pencil_extremes(&form, &metric) {
        Some((lo, hi)) => {
            let tight = (hi - lo).abs() <= tol * lo.abs().max(1.0);
            let bounds = if sign > 0.0 { (lo, hi) } else { (-lo, -hi) };
            SideResult {
                bounds: Some(bounds),
                tight,
                cone,
                gamma,
                per_term_definite,
            }
        }
        None => SideResult {
            bounds: None,
            tight: false,
            cone,
            gamma,
            per_term_definite,
        },
    }
}

pub(super) fn analyze(family: &Family, tol: f64, projection: PencilProjection) -> FrameAnalysis {
    let is_j_fusion_frame = family.m_plus().is_maximal_uniformly_definite(1, tol)
        && family.m_minus().is_maximal_uniformly_definite(-1, tol);

    let plus = side(family, family.i_plus(), family.m_plus(), 1.0, tol, projection);
    let minus = side(
        family,
        family.i_minus(),
        family.m_minus(),
        -1.0,
        tol,
        projection,
    );

    let zeta = match (plus.cone, minus.cone) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };

    let plus_at_one = plus
        .bounds
        .map_or(family.i_plus().is_empty(), |(a, _)| (a - 1.0).abs() <= tol);
    let minus_at_one = minus
        .bounds
        .map_or(family.i_minus().is_empty(), |(a, _)| (a + 1.0).abs() <= tol);
    let parseval =
        is_j_fusion_frame && plus.tight && minus.tight && plus_at_one && minus_at_one;

    FrameAnalysis {
        is_j_fusion_frame,
        bounds_plus: plus.bounds,
        bounds_minus: minus.bounds,
        tight_plus: plus.tight,
        tight_minus: minus.tight,
        parseval,
        alpha_plus: plus.gamma,
        beta_plus: minus.gamma,
        zeta,
        per_term_definite: plus.per_term_definite && minus.per_term_definite,
    }
}

impl FrameAnalysis {
    /// Tight on both sides with `A₊ = 1` and `A₋ = −1` on the sides that
    /// carry members: Parseval relative to the aggregate spans, without
    /// requiring maximality. Used by the combination theorems, where a
    /// part is a Parseval fusion frame *of its own span* rather than of
    /// the whole space.
    pub fn parseval_on_span(&self, tol: f64) -> bool {
        let plus_ok = self.bounds_plus.map_or(true, |(a, _)| (a - 1.0).abs() <= tol);
        let minus_ok = self
            .bounds_minus
            .map_or(true, |(a, _)| (a + 1.0).abs() <= tol);
        self.tight_plus && self.tight_minus && plus_ok && minus_ok
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{example_family, vec3};
    use super::super::Family;
    use super::*;
    use crate::space::Space;
    use crate::DEFAULT_TOL;
    use nalgebra::DVector;

    #[test]
    fn example_family_is_parseval() {
        let analysis = example_family().analyze(DEFAULT_TOL);
        assert!(analysis.is_j_fusion_frame);
        assert!(analysis.parseval);
        let (a_plus, b_plus) = analysis.bounds_plus.unwrap();
        let (a_minus, b_minus) = analysis.bounds_minus.unwrap();
        assert!((a_plus - 1.0).abs() < 1e-9);
        assert!((b_plus - 1.0).abs() < 1e-9);
        assert!((a_minus + 1.0).abs() < 1e-9);
        assert!((b_minus + 1.0).abs() < 1e-9);
        assert!((analysis.alpha_plus.unwrap() - 1.0).abs() < 1e-12);
        assert!((analysis.beta_plus.unwrap() - 0.5).abs() < 1e-12);
        // ζ = (3 + √3)/(2√2).
        let zeta = analysis.zeta.unwrap();
        let expected = (3.0 + 3.0f64.sqrt()) / (2.0 * 2.0f64.sqrt());
        assert!((zeta - expected).abs() < 1e-13);
        assert!(analysis.per_term_definite);
    }

    #[test]
    fn hilbert_orthonormal_decomposition() {
        let h = Space::hilbert(2);
        let f = Family::from_vector_system(
            &h,
            &[
                (vec![DVector::from_column_slice(&[1.0, 0.0])], 1.0),
                (vec![DVector::from_column_slice(&[0.0, 1.0])], 1.0),
            ],
        )
        .unwrap();
        let analysis = f.analyze(DEFAULT_TOL);
        assert!(analysis.is_j_fusion_frame);
        let (a, b) = analysis.bounds_plus.unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
        assert!(analysis.bounds_minus.is_none());
        assert!(analysis.parseval);
        // Empty negative side of a trivial component contributes 1/√2.
        assert!((analysis.zeta.unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn weighted_signature_plane() {
        let s = Space::from_signs(&[1, -1]).unwrap();
        let f = Family::from_vector_system(
            &s,
            &[
                (vec![DVector::from_column_slice(&[1.0, 0.0])], 2.0),
                (vec![DVector::from_column_slice(&[0.0, 1.0])], 1.0),
            ],
        )
        .unwrap();
        let analysis = f.analyze(DEFAULT_TOL);
        assert!(analysis.is_j_fusion_frame);
        let (a_plus, b_plus) = analysis.bounds_plus.unwrap();
        let (a_minus, b_minus) = analysis.bounds_minus.unwrap();
        assert!((a_plus - 4.0).abs() < 1e-12 && (b_plus - 4.0).abs() < 1e-12);
        assert!((a_minus + 1.0).abs() < 1e-12 && (b_minus + 1.0).abs() < 1e-12);
        assert!(analysis.tight_plus && analysis.tight_minus);
        assert!(!analysis.parseval);
    }

    #[test]
    fn dropping_the_negative_line_breaks_the_frame() {
        let s = super::super::tests::space_211();
        let r3 = 3.0f64.sqrt();
        let w = (2.0f64 / 3.0).sqrt();
        let f = Family::from_vector_system(
            &s,
            &[
                (vec![vec3(-r3 / 2.0, -0.5, 0.0)], w),
                (vec![vec3(r3 / 2.0, -0.5, 0.0)], w),
                (vec![vec3(0.0, 1.0, 0.0)], w),
            ],
        )
        .unwrap();
        let analysis = f.analyze(DEFAULT_TOL);
        assert!(!analysis.is_j_fusion_frame);
        assert!(!analysis.parseval);
        // The positive pencil is still well defined on span{e₁, e₂}.
        let (a, b) = analysis.bounds_plus.unwrap();
        assert!((a - 1.0).abs() < 1e-9 && (b - 1.0).abs() < 1e-9);
        assert!(analysis.bounds_minus.is_none());
        assert!(analysis.zeta.is_none());
    }

    #[test]
    fn j_projection_pencil_mode_agrees_on_the_example() {
        // The example's positive members live in span{e₁, e₂} where J acts
        // as the identity, so both pencil modes coincide there.
        let f = example_family();
        let ambient = f.analyze(DEFAULT_TOL);
        let oblique = f.analyze_with(DEFAULT_TOL, PencilProjection::JOrthogonal);
        let (a1, b1) = ambient.bounds_plus.unwrap();
        let (a2, b2) = oblique.bounds_plus.unwrap();
        assert!((a1 - a2).abs() < 1e-12 && (b1 - b2).abs() < 1e-12);
        assert!(oblique.parseval);
    }
}
