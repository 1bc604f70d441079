//! Combination results, duals, the subset identity, the Bessel-type
//! characterisation of uniformly definite deficiency parts, and the
//! Douglas range-inclusion oracle.

use nalgebra::DMatrix;

use crate::error::{KreinError, Result};
use crate::linalg;
use crate::space::{Operator, Space, Vector};
use crate::subspace::{Subspace, SubspaceClass};
use crate::{DEFAULT_RANK_TOL, DEFAULT_TOL};

use super::{FrameAnalysis, FrameVariant, Family};

/// Both sides of the subset identity.
///
/// The direct form evaluates `[S^{I₁}f, f] − [S⁻¹S^{I₁}f, S^{I₁}f]` against
/// its `I₁ᶜ` counterpart; it is an algebraic identity whenever the frame
/// operator is J-selfadjoint (the `Jsa` variant). The paper form replaces
/// the second term by the printed projection sums over the dual subspaces
/// `S⁻¹(Wᵢ)`; its residual is reported, not asserted, because it relies on
/// the dual family reproducing `S⁻¹` under unchanged weights.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub lhs_direct: f64,
    pub rhs_direct: f64,
    pub lhs_paper: f64,
    pub rhs_paper: f64,
    pub residual_direct: f64,
    pub residual_paper: f64,
    /// Largest per-side gap between the direct and the printed form.
    pub residual_forms: f64,
}

/// Diagnostics attached to a canonical dual candidate.
#[derive(Debug, Clone)]
pub struct DualDiagnostics {
    /// `‖frame_operator(dual, variant) − S⁻¹‖_max`.
    pub frame_operator_residual: f64,
    pub analysis: FrameAnalysis,
}

/// Result of the Bessel-type inequality check on a raw member list.
#[derive(Debug, Clone)]
pub struct BesselReport {
    pub holds: bool,
    /// Best lower constant `inf q/p` over the deficiency part, when the
    /// deficiency is nontrivial and `p` is positive there.
    pub lower: Option<f64>,
    /// Best upper constant `sup q/p`.
    pub upper: Option<f64>,
    pub deficiency_class: SubspaceClass,
}

/// The three equivalent conditions of the Douglas factorisation theorem,
/// each computed by an independent numerical route.
#[derive(Debug, Clone)]
pub struct DouglasReport {
    /// `R(a) ⊆ R(b)`, by comparing `rank([b | a])` with `rank(b)` under a
    /// shared cutoff.
    pub range_inclusion: bool,
    /// Smallest `λ ≥ 0` with `aaᵀ ≤ λ²bbᵀ`, from the pencil restricted to
    /// `R(b)`; present exactly when the inclusion holds.
    pub lambda: Option<f64>,
    /// Whether `b·x = a` is solvable (least-squares residual below
    /// tolerance).
    pub factor_exists: bool,
}

/// True when the positive members directly decompose the canonical `K⁺`
/// and the negative members decompose `K⁻`.
pub(super) fn is_onb_of_subspaces(family: &Family, tol: f64) -> bool {
    side_is_canonical_decomposition(family, family.i_plus(), family.m_plus(), 1.0, tol)
        && side_is_canonical_decomposition(family, family.i_minus(), family.m_minus(), -1.0, tol)
        && family
            .m_plus()
            .j_orthogonal(family.m_minus(), tol)
            .unwrap_or(false)
}

fn side_is_canonical_decomposition(
    family: &Family,
    indices: &[usize],
    aggregate: &Subspace,
    sign: f64,
    tol: f64,
) -> bool {
    let kappa = if sign > 0.0 {
        family.space().kappa_plus()
    } else {
        family.space().kappa_minus()
    };
    if kappa == 0 {
        return indices.is_empty();
    }
    let total: usize = indices
        .iter()
        .map(|&i| family.members()[i].subspace().dim())
        .sum();
    if total != kappa || aggregate.dim() != kappa {
        return false;
    }
    // The span must be the canonical eigenspace itself: every Gramian
    // eigenvalue sits at ±1.
    match aggregate.gramian() {
        Ok(spec) => {
            if !spec.eigenvalues.iter().all(|v| (v - sign).abs() <= tol) {
                return false;
            }
        }
        Err(_) => return false,
    }
    for (k, &i) in indices.iter().enumerate() {
        for &l in &indices[k + 1..] {
            let orth = family.members()[i]
                .subspace()
                .j_orthogonal(family.members()[l].subspace(), tol)
                .unwrap_or(false);
            if !orth {
                return false;
            }
        }
    }
    true
}

/// Concatenates two families over the same space and analyses the union.
pub fn combine(f1: &Family, f2: &Family, tol: f64) -> Result<(Family, FrameAnalysis)> {
    if f1.space() != f2.space() {
        return Err(KreinError::DimensionMismatch {
            expected: f1.space().dim(),
            found: f2.space().dim(),
        });
    }
    let mut members = f1.member_pairs();
    members.extend(f2.member_pairs());
    let union = Family::new(f1.space(), members)?;
    let analysis = union.analyze(tol);
    Ok((union, analysis))
}

fn check_pairing(fx: &Family, fy: &Family, tol: f64, require_splits: bool) -> Result<()> {
    if fx.space() != fy.space() {
        return Err(KreinError::DimensionMismatch {
            expected: fx.space().dim(),
            found: fy.space().dim(),
        });
    }
    if fx.len() != fy.len() {
        return Err(KreinError::MismatchedFamilies {
            reason: format!("member counts differ: {} vs {}", fx.len(), fy.len()),
        });
    }
    for (i, (mx, my)) in fx.members().iter().zip(fy.members()).enumerate() {
        if (mx.weight() - my.weight()).abs() > tol * mx.weight().max(1.0) {
            return Err(KreinError::MismatchedFamilies {
                reason: format!("weights differ at member {i}"),
            });
        }
    }
    if require_splits && fx.sigma() != fy.sigma() {
        return Err(KreinError::MismatchedFamilies {
            reason: "index splits differ".to_string(),
        });
    }
    Ok(())
}

/// Tests the vanishing of the synthesis cross terms
/// `T*_X T_Y + T*_Y T_X = 0` on `(M₊, [·,·])` and `(M₋, −[·,·])`.
///
/// Block `i` of a synthesis operator is `vᵢBᵢ`; adjoints are taken in the
/// signed metric, so the coefficient-space Gramian `Γ = blockdiag(±Gᵢ)`
/// enters as `T* = Γ⁻¹ Tᵀ(±J)`.
pub fn cross_term_condition(fx: &Family, fy: &Family, tol: f64) -> Result<bool> {
    check_pairing(fx, fy, tol, true)?;
    for (i, (mx, my)) in fx.members().iter().zip(fy.members()).enumerate() {
        if mx.subspace().dim() != my.subspace().dim() {
            return Err(KreinError::MismatchedFamilies {
                reason: format!("member {i} dimensions differ"),
            });
        }
    }
    Ok(cross_terms_vanish(fx, fy, fx.i_plus(), 1.0, tol)?
        && cross_terms_vanish(fx, fy, fx.i_minus(), -1.0, tol)?)
}

fn signed_synthesis_blocks(
    family: &Family,
    indices: &[usize],
    sign: f64,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = family.space().dim();
    let j = family.space().symmetry();
    let total: usize = indices
        .iter()
        .map(|&i| family.members()[i].subspace().dim())
        .sum();
    let mut t = DMatrix::zeros(n, total);
    let mut gram = DMatrix::zeros(total, total);
    let mut col = 0;
    for &i in indices {
        let member = &family.members()[i];
        let d = member.subspace().dim();
        t.view_mut((0, col), (n, d))
            .copy_from(&(member.subspace().basis() * member.weight()));
        let g = linalg::sym(&(member.subspace().basis().transpose() * (j * sign)
            * member.subspace().basis()));
        gram.view_mut((col, col), (d, d)).copy_from(&g);
        col += d;
    }
    (t, gram)
}

fn cross_terms_vanish(
    fx: &Family,
    fy: &Family,
    indices: &[usize],
    sign: f64,
    tol: f64,
) -> Result<bool> {
    if indices.is_empty() {
        return Ok(true);
    }
    let j = fx.space().symmetry();
    let (tx, gx) = signed_synthesis_blocks(fx, indices, sign);
    let (ty, gy) = signed_synthesis_blocks(fy, indices, sign);
    let gx_inv = gx.try_inverse().ok_or(KreinError::MismatchedFamilies {
        reason: "degenerate member Gramian".to_string(),
    })?;
    let gy_inv = gy.try_inverse().ok_or(KreinError::MismatchedFamilies {
        reason: "degenerate member Gramian".to_string(),
    })?;
    let sj = j * sign;
    let anti = gx_inv * tx.transpose() * &sj * &ty + gy_inv * ty.transpose() * &sj * &tx;
    let scale = linalg::max_abs(&tx).max(linalg::max_abs(&ty)).max(1.0);
    Ok(linalg::max_abs(&anti) <= tol * scale * scale)
}

/// Member-wise sums `{(Xᵢ + Yᵢ, vᵢ)}`. A sum may leave the uniformly
/// definite class, in which case the family construction reports the
/// offending member.
pub fn sum_family(fx: &Family, fy: &Family, tol: f64) -> Result<Family> {
    check_pairing(fx, fy, tol, false)?;
    let mut members = Vec::with_capacity(fx.len());
    for (mx, my) in fx.members().iter().zip(fy.members()) {
        let sum = mx
            .subspace()
            .sum(my.subspace(), DEFAULT_RANK_TOL)?;
        members.push((sum, mx.weight()));
    }
    Family::new(fx.space(), members)
}

pub(super) fn identity_check(
    family: &Family,
    subset: &[usize],
    x: &Vector,
    variant: FrameVariant,
) -> Result<IdentityReport> {
    family.space().check_vector(x)?;
    let mut subset: Vec<usize> = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if let Some(&bad) = subset.iter().find(|&&i| i >= family.len()) {
        return Err(KreinError::BadIndex {
            index: bad,
            len: family.len(),
        });
    }
    let complement = family.complement(&subset);
    let (_, s_inv) = family.frame_operator_inverse(variant, DEFAULT_TOL)?;
    let s_sub = family.partial_frame_operator(&subset, variant)?;
    let s_comp = family.partial_frame_operator(&complement, variant)?;

    let space = family.space();
    let direct = |partial: &Operator| -> f64 {
        let g = partial * x;
        let sg = &s_inv * &g;
        space.indefinite_inner(&g, x).unwrap() - space.indefinite_inner(&sg, &g).unwrap()
    };
    let lhs_direct = direct(&s_sub);
    let rhs_direct = direct(&s_comp);

    // Printed projection form: the dual subspaces S⁻¹(Wᵢ) are shared by
    // both sides.
    let duals: Vec<Subspace> = family
        .members()
        .iter()
        .map(|m| {
            Subspace::span_columns(space, &(&s_inv * m.subspace().basis()), DEFAULT_RANK_TOL)
        })
        .collect::<Result<_>>()?;
    let j = space.symmetry();
    let jx = j * x;
    let paper = |indices: &[usize], partial: &Operator| -> f64 {
        let first: f64 = indices
            .iter()
            .map(|&i| {
                let m = &family.members()[i];
                let sigma = f64::from(family.sigma()[i]);
                let p = m.subspace().orthogonal_projection();
                sigma
                    * m.weight()
                    * m.weight()
                    * space.indefinite_inner(&(&p * &jx), &jx).unwrap()
            })
            .sum();
        let g = j * (partial * x);
        let second: f64 = (0..family.len())
            .map(|i| {
                let m = &family.members()[i];
                let sigma = f64::from(family.sigma()[i]);
                let p = duals[i].orthogonal_projection();
                sigma
                    * m.weight()
                    * m.weight()
                    * space.indefinite_inner(&(&p * &g), &g).unwrap()
            })
            .sum();
        first - second
    };
    let lhs_paper = paper(&subset, &s_sub);
    let rhs_paper = paper(&complement, &s_comp);

    Ok(IdentityReport {
        lhs_direct,
        rhs_direct,
        lhs_paper,
        rhs_paper,
        residual_direct: (lhs_direct - rhs_direct).abs(),
        residual_paper: (lhs_paper - rhs_paper).abs(),
        residual_forms: (lhs_direct - lhs_paper)
            .abs()
            .max((rhs_direct - rhs_paper).abs()),
    })
}

/// Checks the two-sided inequality
/// `A[f,f] ≤ Σ vᵢ²|[π_{JM}π_{Wᵢ}Jπ_M f, f]| ≤ B[f,f]` on `M`, the closed
/// span of the raw members. Members need not be definite — this theorem
/// deliberately bypasses the family construction filter.
///
/// In the associated Hilbert metric the middle form is
/// `q(f) = Σ vᵢ² ⟨π_M π_{JWᵢ} π_M f, f⟩`, a positive semidefinite
/// quadratic form, so the modulus is vacuous. The constants are the
/// extreme generalized eigenvalues of `(q, G_M)` restricted to the
/// deficiency part `M ⊖ M⁰`; the inequality holds exactly when `[·,·]` is
/// nonnegative on `M` and the lower constant stays above the tolerance.
pub fn bessel_inequality_check(
    space: &Space,
    members: &[(Subspace, f64)],
    tol: f64,
) -> Result<BesselReport> {
    if members.is_empty() {
        return Err(KreinError::EmptyFamily);
    }
    let mut aggregate = Subspace::zero(space);
    for (index, (subspace, weight)) in members.iter().enumerate() {
        if subspace.space() != space {
            return Err(KreinError::DimensionMismatch {
                expected: space.dim(),
                found: subspace.space().dim(),
            });
        }
        if !(*weight > 0.0) {
            return Err(KreinError::NonPositiveWeight { index });
        }
        aggregate = aggregate.sum(subspace, DEFAULT_RANK_TOL)?;
    }

    let deficiency = aggregate.deficiency_part(tol);
    let deficiency_class = deficiency.classify(tol);
    if aggregate.is_zero() {
        return Ok(BesselReport {
            holds: false,
            lower: None,
            upper: None,
            deficiency_class,
        });
    }

    let basis = aggregate.basis();
    let j = space.symmetry();
    let m = aggregate.dim();
    let mut q = DMatrix::zeros(m, m);
    for (subspace, weight) in members {
        // π_{JWᵢ} compressed to M; π_M drops out since π_M B = B.
        let jb = j * subspace.basis();
        let compressed = basis.transpose() * &jb * jb.transpose() * basis;
        q += linalg::sym(&compressed) * (weight * weight);
    }
    let gram = aggregate.gram_matrix();
    let (gram_values, gram_vectors) = linalg::symmetric_eigen_sorted(&gram);
    let nonnegative = gram_values.iter().all(|v| *v >= -tol);

    let surviving: Vec<usize> = (0..m).filter(|&i| gram_values[i].abs() > tol).collect();
    let positive_deficiency =
        !surviving.is_empty() && surviving.iter().all(|&i| gram_values[i] > tol);

    let (lower, upper) = if positive_deficiency {
        let mut z = DMatrix::zeros(m, surviving.len());
        for (k, &i) in surviving.iter().enumerate() {
            z.set_column(k, &gram_vectors.column(i));
        }
        let q_restricted = linalg::sym(&(z.transpose() * &q * &z));
        let g_restricted = linalg::sym(&(z.transpose() * &gram * &z));
        match linalg::pencil_extremes(&q_restricted, &g_restricted) {
            Some((lo, hi)) => (Some(lo), Some(hi)),
            None => (None, None),
        }
    } else {
        (None, None)
    };

    let holds = nonnegative && lower.map_or(false, |a| a > tol);
    Ok(BesselReport {
        holds,
        lower,
        upper,
        deficiency_class,
    })
}

/// Douglas range-inclusion oracle for square matrices: tests
/// `R(a) ⊆ R(b)` three ways and reports whether they agree.
pub fn douglas_check(a: &Operator, b: &Operator, tol: f64) -> Result<DouglasReport> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(KreinError::DimensionMismatch {
            expected: n,
            found: b.nrows().max(b.ncols()).max(a.ncols()),
        });
    }
    let mut augmented = DMatrix::zeros(n, 2 * n);
    augmented.view_mut((0, 0), (n, n)).copy_from(b);
    augmented.view_mut((0, n), (n, n)).copy_from(a);
    // Shared absolute cutoff for both rank decisions.
    let svd_aug = augmented.clone().svd(false, false);
    let smax = svd_aug
        .singular_values
        .iter()
        .fold(0.0_f64, |m, s| m.max(*s));
    let cutoff = tol * smax.max(1.0);
    let rank_aug = svd_aug
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff)
        .count();
    let svd_b = b.clone().svd(true, false);
    let rank_b = svd_b
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff)
        .count();
    let range_inclusion = rank_aug == rank_b;

    let lambda = if range_inclusion && rank_b > 0 {
        // Generalized eigenvalues of (aaᵀ, bbᵀ) on R(b).
        let u = svd_b.u.as_ref().expect("SVD with U requested");
        let keep: Vec<usize> = (0..svd_b.singular_values.len())
            .filter(|&i| svd_b.singular_values[i] > cutoff)
            .collect();
        let mut ur = DMatrix::zeros(n, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            ur.set_column(k, &u.column(i));
        }
        let aat = ur.transpose() * a * a.transpose() * &ur;
        let bbt = ur.transpose() * b * b.transpose() * &ur;
        linalg::pencil_extremes(&aat, &bbt).map(|(_, hi)| hi.max(0.0).sqrt())
    } else if range_inclusion {
        // Both operators vanish.
        Some(0.0)
    } else {
        None
    };

    let factor_exists = match linalg::least_squares(b, a, tol) {
        Some((_, residual)) => residual <= tol * linalg::max_abs(a).max(1.0),
        None => false,
    };

    Ok(DouglasReport {
        range_inclusion,
        lambda,
        factor_exists,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{example_family, space_211, vec3};
    use super::*;
    use crate::space::Space;
    use crate::DEFAULT_TOL;
    use nalgebra::DVector;

    fn vec2(x: f64, y: f64) -> DVector<f64> {
        DVector::from_column_slice(&[x, y])
    }

    #[test]
    fn canonical_decomposition_is_an_onb_of_subspaces() {
        let s = space_211();
        let f = Family::from_vector_system(
            &s,
            &[
                (vec![vec3(1.0, 0.0, 0.0)], 1.0),
                (vec![vec3(0.0, 1.0, 0.0)], 1.0),
                (vec![vec3(0.0, 0.0, 1.0)], 1.0),
            ],
        )
        .unwrap();
        assert!(f.is_onb_of_subspaces(DEFAULT_TOL));
        // The worked example overlaps inside the positive component.
        assert!(!example_family().is_onb_of_subspaces(DEFAULT_TOL));
        // Rotated orthonormal split of a Hilbert plane.
        let h = Space::hilbert(2);
        let r = Family::from_vector_system(
            &h,
            &[
                (vec![vec2(1.0, 1.0)], 1.0),
                (vec![vec2(1.0, -1.0)], 1.0),
            ],
        )
        .unwrap();
        assert!(r.is_onb_of_subspaces(DEFAULT_TOL));
    }

    #[test]
    fn disjointness_flags_on_the_example() {
        let f = example_family();
        assert!(f.is_disjoint(DEFAULT_TOL));
        assert!(!f.is_strictly_disjoint(DEFAULT_TOL));
        let h = Space::hilbert(2);
        let fh = Family::from_vector_system(&h, &[(vec![vec2(1.0, 0.0)], 1.0)]).unwrap();
        assert!(fh.is_disjoint(DEFAULT_TOL));
        assert!(fh.is_strictly_disjoint(DEFAULT_TOL));
    }

    #[test]
    fn union_of_canonical_parseval_parts() {
        let s = space_211();
        let r3 = 3.0f64.sqrt();
        let w = (2.0f64 / 3.0).sqrt();
        let positive = Family::from_vector_system(
            &s,
            &[
                (vec![vec3(-r3 / 2.0, -0.5, 0.0)], w),
                (vec![vec3(r3 / 2.0, -0.5, 0.0)], w),
                (vec![vec3(0.0, 1.0, 0.0)], w),
            ],
        )
        .unwrap();
        let negative =
            Family::from_vector_system(&s, &[(vec![vec3(0.0, 0.0, 1.0)], 1.0)]).unwrap();
        let (union, analysis) = combine(&positive, &negative, DEFAULT_TOL).unwrap();
        assert!(union.is_strictly_disjoint(DEFAULT_TOL));
        assert!(analysis.parseval);
        assert!((analysis.zeta.unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn union_reproducing_the_example_shows_converse_failure() {
        let s = space_211();
        let r3 = 3.0f64.sqrt();
        let w = (2.0f64 / 3.0).sqrt();
        let positive = Family::from_vector_system(
            &s,
            &[
                (vec![vec3(-r3 / 2.0, -0.5, 0.0)], w),
                (vec![vec3(r3 / 2.0, -0.5, 0.0)], w),
                (vec![vec3(0.0, 1.0, 0.0)], w),
            ],
        )
        .unwrap();
        let negative = Family::from_vector_system(
            &s,
            &[(vec![vec3(0.5f64.sqrt(), 0.0, 1.5f64.sqrt())], 1.0)],
        )
        .unwrap();
        let (union, analysis) = combine(&positive, &negative, DEFAULT_TOL).unwrap();
        // Parseval without strict disjointness: the converse fails.
        assert!(analysis.parseval);
        assert!(!union.is_strictly_disjoint(DEFAULT_TOL));
    }

    #[test]
    fn union_with_empty_family_is_identity() {
        let s = space_211();
        let f = example_family();
        let empty = Family::new(&s, vec![]).unwrap();
        let (union, analysis) = combine(&f, &empty, DEFAULT_TOL).unwrap();
        assert_eq!(union.len(), f.len());
        assert!(analysis.parseval);
    }

    #[test]
    fn cross_terms_on_orthogonal_lines_vanish() {
        let h = Space::hilbert(2);
        let fx = Family::from_vector_system(&h, &[(vec![vec2(1.0, 0.0)], 1.0)]).unwrap();
        let fy = Family::from_vector_system(&h, &[(vec![vec2(0.0, 1.0)], 1.0)]).unwrap();
        assert!(cross_term_condition(&fx, &fy, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn cross_terms_against_negated_copy_fail() {
        let h = Space::hilbert(2);
        let fx = Family::from_vector_system(
            &h,
            &[(vec![vec2(1.0, 0.0)], 1.0), (vec![vec2(0.0, 1.0)], 1.0)],
        )
        .unwrap();
        let fy = Family::from_vector_system(
            &h,
            &[(vec![vec2(-1.0, 0.0)], 1.0), (vec![vec2(0.0, -1.0)], 1.0)],
        )
        .unwrap();
        // fy spans the same lines; the anti-commutator reduces to ±2·Gram.
        assert!(!cross_term_condition(&fx, &fy, DEFAULT_TOL).unwrap());
        let f = example_family();
        assert!(!cross_term_condition(&f, &f, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn pairing_validation_rejects_mismatches() {
        let h = Space::hilbert(2);
        let fx = Family::from_vector_system(&h, &[(vec![vec2(1.0, 0.0)], 1.0)]).unwrap();
        let fy = Family::from_vector_system(
            &h,
            &[(vec![vec2(1.0, 0.0)], 1.0), (vec![vec2(0.0, 1.0)], 1.0)],
        )
        .unwrap();
        assert!(matches!(
            cross_term_condition(&fx, &fy, DEFAULT_TOL),
            Err(KreinError::MismatchedFamilies { .. })
        ));
        let fz = Family::from_vector_system(&h, &[(vec![vec2(1.0, 0.0)], 2.0)]).unwrap();
        assert!(matches!(
            cross_term_condition(&fx, &fz, DEFAULT_TOL),
            Err(KreinError::MismatchedFamilies { .. })
        ));
    }

    #[test]
    fn sum_family_examples() {
        let h = Space::hilbert(2);
        let fx = Family::from_vector_system(&h, &[(vec![vec2(1.0, 0.0)], 1.0)]).unwrap();
        let fy = Family::from_vector_system(&h, &[(vec![vec2(0.0, 1.0)], 1.0)]).unwrap();
        let sum = sum_family(&fx, &fy, DEFAULT_TOL).unwrap();
        assert_eq!(sum.members()[0].subspace().dim(), 2);

        // Summing a family with itself leaves the members unchanged.
        let f = example_family();
        let same = sum_family(&f, &f, DEFAULT_TOL).unwrap();
        assert_eq!(same.total_dim(), f.total_dim());
        assert!(same.analyze(DEFAULT_TOL).parseval);

        // A positive line plus a negative line spans an indefinite plane.
        let s = space_211();
        let gx = Family::from_vector_system(&s, &[(vec![vec3(1.0, 0.0, 0.0)], 1.0)]).unwrap();
        let gy = Family::from_vector_system(&s, &[(vec![vec3(0.0, 0.0, 1.0)], 1.0)]).unwrap();
        assert!(matches!(
            sum_family(&gx, &gy, DEFAULT_TOL),
            Err(KreinError::IndefiniteMember { .. })
        ));
    }

    #[test]
    fn diagonal_dual_keeps_spans_and_reports_residual() {
        let h = Space::hilbert(2);
        let f = Family::from_vector_system(
            &h,
            &[(vec![vec2(1.0, 0.0)], 1.0), (vec![vec2(0.0, 1.0)], 2.0)],
        )
        .unwrap();
        // S = diag(1, 4); the inverse maps both coordinate lines to
        // themselves.
        let (dual, diagnostics) = f.canonical_dual(FrameVariant::Jsa, DEFAULT_TOL).unwrap();
        for (i, m) in dual.members().iter().enumerate() {
            let b = m.subspace().basis();
            assert!((b[(i, 0)].abs() - 1.0).abs() < 1e-12);
        }
        // With unchanged weights the dual frame operator is diag(1, 4),
        // not S⁻¹ = diag(1, 1/4): the residual records the gap 4 − 1/4.
        assert!((diagnostics.frame_operator_residual - 3.75).abs() < 1e-12);
        assert!(diagnostics.analysis.is_j_fusion_frame);
    }

    #[test]
    fn identity_dual_is_the_family_itself() {
        let h = Space::hilbert(2);
        let f = Family::from_vector_system(
            &h,
            &[(vec![vec2(1.0, 0.0)], 1.0), (vec![vec2(0.0, 1.0)], 1.0)],
        )
        .unwrap();
        let (dual, diagnostics) = f.canonical_dual(FrameVariant::Jsa, DEFAULT_TOL).unwrap();
        assert_eq!(dual.len(), 2);
        assert!(diagnostics.frame_operator_residual < 1e-12);
    }

    #[test]
    fn identity_check_trivial_subsets() {
        let f = example_family();
        let x = vec3(1.0, 1.0, 1.0);
        let empty = f.identity_check(&[], &x, FrameVariant::Jsa).unwrap();
        assert!(empty.residual_direct < 1e-12);
        let full = f
            .identity_check(&[0, 1, 2, 3], &x, FrameVariant::Jsa)
            .unwrap();
        assert!(full.residual_direct < 1e-12);
        assert!(matches!(
            f.identity_check(&[9], &x, FrameVariant::Jsa),
            Err(KreinError::BadIndex { index: 9, len: 4 })
        ));
    }

    #[test]
    fn identity_check_on_proper_subset() {
        let f = example_family();
        let x = vec3(1.0, 1.0, 1.0);
        let report = f.identity_check(&[0, 1], &x, FrameVariant::Jsa).unwrap();
        assert!(report.residual_direct <= 1e-9);
        // The printed form's residual is a diagnostic, not an assertion.
        assert!(report.residual_paper.is_finite());
        assert!(report.residual_forms.is_finite());
    }

    #[test]
    fn bessel_check_on_the_positive_block() {
        let s = space_211();
        let r3 = 3.0f64.sqrt();
        let w = (2.0f64 / 3.0).sqrt();
        let members = vec![
            (
                Subspace::span(&s, &[vec3(-r3 / 2.0, -0.5, 0.0)], DEFAULT_RANK_TOL).unwrap(),
                w,
            ),
            (
                Subspace::span(&s, &[vec3(r3 / 2.0, -0.5, 0.0)], DEFAULT_RANK_TOL).unwrap(),
                w,
            ),
            (
                Subspace::span(&s, &[vec3(0.0, 1.0, 0.0)], DEFAULT_RANK_TOL).unwrap(),
                w,
            ),
        ];
        let report = bessel_inequality_check(&s, &members, DEFAULT_TOL).unwrap();
        assert!(report.holds);
        assert_eq!(report.deficiency_class, SubspaceClass::UniformlyPositive);
        assert!((report.lower.unwrap() - 1.0).abs() < 1e-9);
        assert!((report.upper.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bessel_check_on_a_neutral_line() {
        let s = space_211();
        let members = vec![(
            Subspace::span(&s, &[vec3(1.0, 0.0, 1.0)], DEFAULT_RANK_TOL).unwrap(),
            1.0,
        )];
        let report = bessel_inequality_check(&s, &members, DEFAULT_TOL).unwrap();
        assert!(!report.holds);
        assert!(report.lower.is_none());
        assert_eq!(report.deficiency_class, SubspaceClass::Zero);
    }

    #[test]
    fn bessel_check_on_a_degenerate_plane() {
        // M = span{(1,0,1), e₂}: the neutral member contributes nothing,
        // the e₂ member frames the deficiency line.
        let s = space_211();
        let members = vec![
            (
                Subspace::span(&s, &[vec3(1.0, 0.0, 1.0)], DEFAULT_RANK_TOL).unwrap(),
                1.0,
            ),
            (
                Subspace::span(&s, &[vec3(0.0, 1.0, 0.0)], DEFAULT_RANK_TOL).unwrap(),
                1.0,
            ),
        ];
        let report = bessel_inequality_check(&s, &members, DEFAULT_TOL).unwrap();
        assert!(report.holds);
        assert_eq!(report.deficiency_class, SubspaceClass::UniformlyPositive);
        assert!((report.lower.unwrap() - 1.0).abs() < 1e-9);
        assert!(matches!(
            bessel_inequality_check(&s, &[], DEFAULT_TOL),
            Err(KreinError::EmptyFamily)
        ));
    }

    #[test]
    fn douglas_trivial_cases() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let report = douglas_check(&a, &a, DEFAULT_TOL).unwrap();
        assert!(report.range_inclusion);
        assert!(report.factor_exists);
        assert!((report.lambda.unwrap() - 1.0).abs() < 1e-9);

        let p = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let q = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let report = douglas_check(&p, &q, DEFAULT_TOL).unwrap();
        assert!(!report.range_inclusion);
        assert!(report.lambda.is_none());
        assert!(!report.factor_exists);
    }
}
