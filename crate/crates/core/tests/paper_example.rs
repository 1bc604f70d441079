//! End-to-end walk through the worked three-dimensional family: three
//! positive lines with weight √(2/3) and one negative line with weight 1
//! in the signature (+, +, −).

use nalgebra::{DMatrix, DVector};

use krein_core::{
    combine, Family, FrameVariant, Space, Subspace, SubspaceClass, DEFAULT_RANK_TOL, DEFAULT_TOL,
};

fn space() -> Space {
    Space::from_signs(&[1, 1, -1]).unwrap()
}

fn vec3(x: f64, y: f64, z: f64) -> DVector<f64> {
    DVector::from_column_slice(&[x, y, z])
}

fn spanning_vectors() -> Vec<DVector<f64>> {
    let r3 = 3.0f64.sqrt();
    vec![
        vec3(-r3 / 2.0, -0.5, 0.0),
        vec3(r3 / 2.0, -0.5, 0.0),
        vec3(0.0, 1.0, 0.0),
        vec3(0.5f64.sqrt(), 0.0, 1.5f64.sqrt()),
    ]
}

fn example() -> Family {
    let s = space();
    let w = (2.0f64 / 3.0).sqrt();
    let groups: Vec<(Vec<DVector<f64>>, f64)> = spanning_vectors()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (vec![v], if i == 3 { 1.0 } else { w }))
        .collect();
    Family::from_vector_system(&s, &groups).unwrap()
}

#[test]
fn subspace_classification_and_gamma() {
    let s = space();
    let vectors = spanning_vectors();
    for v in &vectors[..3] {
        let w = Subspace::span(&s, std::slice::from_ref(v), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(w.classify(DEFAULT_TOL), SubspaceClass::UniformlyPositive);
    }
    let w4 = Subspace::span(&s, &[vectors[3].clone()], DEFAULT_RANK_TOL).unwrap();
    assert_eq!(w4.classify(DEFAULT_TOL), SubspaceClass::UniformlyNegative);
    assert!((w4.reduced_min_modulus(DEFAULT_TOL).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn analysis_reproduces_the_reported_numbers() {
    let analysis = example().analyze(DEFAULT_TOL);
    assert!(analysis.is_j_fusion_frame);
    assert!(analysis.tight_plus && analysis.tight_minus);
    assert!(analysis.parseval);

    let (a_plus, b_plus) = analysis.bounds_plus.unwrap();
    let (a_minus, b_minus) = analysis.bounds_minus.unwrap();
    assert!((a_plus - 1.0).abs() < 1e-9 && (b_plus - 1.0).abs() < 1e-9);
    assert!((a_minus + 1.0).abs() < 1e-9 && (b_minus + 1.0).abs() < 1e-9);

    assert!((analysis.alpha_plus.unwrap() - 1.0).abs() < 1e-12);
    assert!((analysis.beta_plus.unwrap() - 0.5).abs() < 1e-12);

    // ζ = c₀(M₊) + c₀(M₋) = 1/√2 + (√3 + 1)/(2√2) = (3 + √3)/(2√2).
    let zeta = analysis.zeta.unwrap();
    let oracle = (3.0 + 3.0f64.sqrt()) / (2.0 * 2.0f64.sqrt());
    assert!((zeta - oracle).abs() < 1e-13);
    assert!((zeta - 1.6730326074756979).abs() < 1e-12);
}

#[test]
fn frame_operator_variants_and_their_selfadjointness() {
    let f = example();
    let s = f.space().clone();
    let r3 = 3.0f64.sqrt();

    let literal = f.frame_operator(FrameVariant::Literal);
    let expected = DMatrix::from_row_slice(
        3,
        3,
        &[0.75, 0.0, r3 / 4.0, 0.0, 1.0, 0.0, r3 / 4.0, 0.0, -0.75],
    );
    assert!((literal.clone() - expected).abs().max() < 1e-12);

    let jsa = f.frame_operator(FrameVariant::Jsa);
    let expected = DMatrix::from_row_slice(
        3,
        3,
        &[1.5, 0.0, -r3 / 2.0, 0.0, 1.0, 0.0, r3 / 2.0, 0.0, -1.5],
    );
    assert!((jsa.clone() - expected).abs().max() < 1e-12);

    // The printed operator is *not* J-selfadjoint here (residual √3/2),
    // while the Q-variant is; both stay invertible.
    assert!(!s.is_j_selfadjoint(&literal, DEFAULT_TOL).unwrap());
    let residual = s.j_selfadjoint_residual(&literal).unwrap();
    assert!((residual - r3 / 2.0).abs() < 1e-12);
    assert!(s.is_j_selfadjoint(&jsa, 1e-12).unwrap());
    assert!(literal.determinant().abs() > 1e-6);
    assert!(jsa.determinant().abs() > 1e-6);
    assert!((literal.determinant() + 0.75).abs() < 1e-12);
    assert!((jsa.determinant() + 1.5).abs() < 1e-12);
}

#[test]
fn canonical_dual_of_the_example() {
    let f = example();
    let (dual, diagnostics) = f.canonical_dual(FrameVariant::Jsa, DEFAULT_TOL).unwrap();
    assert_eq!(dual.len(), 4);
    assert_eq!(dual.i_plus(), &[0, 1, 2]);
    assert_eq!(dual.i_minus(), &[3]);
    // S⁻¹ maps the negative line onto span{e₃}.
    let b = dual.members()[3].subspace().basis();
    assert!(b[(0, 0)].abs() < 1e-12 && b[(1, 0)].abs() < 1e-12);
    assert!((b[(2, 0)].abs() - 1.0).abs() < 1e-12);
    assert!(dual.analyze(DEFAULT_TOL).is_j_fusion_frame);
    // Regression baseline for the dual frame-operator residual; there is
    // no closed-form target because the dual keeps the original weights.
    assert!(diagnostics.frame_operator_residual.is_finite());
    let baseline = diagnostics.frame_operator_residual;
    let (_, again) = f.canonical_dual(FrameVariant::Jsa, DEFAULT_TOL).unwrap();
    assert_eq!(again.frame_operator_residual, baseline);
}

#[test]
fn subset_identity_on_the_example() {
    let f = example();
    let x = vec3(1.0, 1.0, 1.0);
    let report = f.identity_check(&[0, 1], &x, FrameVariant::Jsa).unwrap();
    assert!(report.residual_direct <= 1e-9);
    let report = f.identity_check(&[0, 3], &x, FrameVariant::Jsa).unwrap();
    assert!(report.residual_direct <= 1e-9);
}

#[test]
fn union_flags_of_the_example() {
    let s = space();
    let w = (2.0f64 / 3.0).sqrt();
    let vectors = spanning_vectors();
    let positive = Family::from_vector_system(
        &s,
        &[
            (vec![vectors[0].clone()], w),
            (vec![vectors[1].clone()], w),
            (vec![vectors[2].clone()], w),
        ],
    )
    .unwrap();
    let negative = Family::from_vector_system(&s, &[(vec![vectors[3].clone()], 1.0)]).unwrap();
    let (union, analysis) = combine(&positive, &negative, DEFAULT_TOL).unwrap();
    assert!(analysis.parseval);
    assert!(union.is_disjoint(DEFAULT_TOL));
    assert!(!union.is_strictly_disjoint(DEFAULT_TOL));
    assert!(!union.is_onb_of_subspaces(DEFAULT_TOL));
}
