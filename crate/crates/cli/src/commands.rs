//! Command implementations: each returns a payload, a verdict and
//! human-readable diagnostics; the caller wraps them into the report
//! envelope and derives the exit code.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use krein_core::{
    bessel_inequality_check, combine, cross_term_condition, douglas_check, random_family,
    sum_family, Family, KreinError, PencilProjection, Subspace, SubspaceClass,
};

use crate::problem::{Problem, Variant};
use crate::report::{analysis_value, num, opt_num};
use crate::CliError;

pub struct Outcome {
    pub verdict: bool,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

fn family_from(problem: &Problem) -> Result<Family, CliError> {
    let members = problem
        .subspaces
        .iter()
        .map(|(_, w, v)| (w.clone(), *v))
        .collect();
    Family::new(&problem.space, members).map_err(|e| match &e {
        KreinError::IndefiniteMember { index, .. } => CliError::invalid(format!(
            "subspace `{}`: {e}",
            problem.subspaces[*index].0
        )),
        _ => CliError::invalid(e.to_string()),
    })
}

pub fn classify(problem: &Problem) -> Outcome {
    let tol = problem.tolerance;
    let mut entries = Vec::new();
    for (name, subspace, weight) in &problem.subspaces {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(name.clone()));
        m.insert("dim".into(), Value::Number(subspace.dim().into()));
        m.insert("weight".into(), num(*weight));
        let class = subspace.classify(tol);
        m.insert("class".into(), Value::String(class.to_string()));
        match subspace.gram_spectrum(tol) {
            Ok(spec) => {
                m.insert(
                    "gram_eigenvalues".into(),
                    Value::Array(spec.eigenvalues.iter().map(|v| num(*v)).collect()),
                );
                m.insert("gamma".into(), opt_num(spec.gamma));
            }
            Err(_) => {
                m.insert("gram_eigenvalues".into(), Value::Array(vec![]));
                m.insert("gamma".into(), Value::Null);
            }
        }
        m.insert(
            "cone_angle".into(),
            opt_num(subspace.cone_angle(tol).ok()),
        );
        m.insert(
            "isotropic_dim".into(),
            Value::Number(subspace.isotropic_part(tol).dim().into()),
        );
        entries.push(Value::Object(m));
    }
    let mut payload = Map::new();
    payload.insert("subspaces".into(), Value::Array(entries));
    Outcome {
        verdict: true,
        payload: Value::Object(payload),
        diagnostics: vec![format!("classified {} subspaces", problem.subspaces.len())],
    }
}

pub fn analyze(problem: &Problem, projection: PencilProjection) -> Result<Outcome, CliError> {
    let family = family_from(problem)?;
    let analysis = family.analyze_with(problem.tolerance, projection);
    let mut payload = Map::new();
    payload.insert("analysis".into(), analysis_value(&analysis));
    payload.insert(
        "m_plus_dim".into(),
        Value::Number(family.m_plus().dim().into()),
    );
    payload.insert(
        "m_minus_dim".into(),
        Value::Number(family.m_minus().dim().into()),
    );
    payload.insert(
        "i_plus".into(),
        Value::Array(family.i_plus().iter().map(|&i| Value::Number(i.into())).collect()),
    );
    payload.insert(
        "i_minus".into(),
        Value::Array(family.i_minus().iter().map(|&i| Value::Number(i.into())).collect()),
    );
    let mut diagnostics = vec![format!(
        "J-fusion frame: {}; Parseval: {}",
        analysis.is_j_fusion_frame, analysis.parseval
    )];
    if !analysis.per_term_definite {
        diagnostics.push("some member form changed sign on its aggregate span".into());
    }
    Ok(Outcome {
        verdict: analysis.is_j_fusion_frame,
        payload: Value::Object(payload),
        diagnostics,
    })
}

pub fn check_onb(problem: &Problem) -> Result<Outcome, CliError> {
    let family = family_from(problem)?;
    let is_onb = family.is_onb_of_subspaces(problem.tolerance);
    let analysis = family.analyze(problem.tolerance);
    let mut payload = Map::new();
    payload.insert("is_onb_of_subspaces".into(), Value::Bool(is_onb));
    payload.insert("analysis".into(), analysis_value(&analysis));
    Ok(Outcome {
        verdict: is_onb,
        payload: Value::Object(payload),
        diagnostics: vec![format!("J-orthonormal basis of subspaces: {is_onb}")],
    })
}

pub fn check_union(problem: &Problem, second: &Problem) -> Result<Outcome, CliError> {
    let f1 = family_from(problem)?;
    let f2 = family_from(second)?;
    let tol = problem.tolerance;
    let (union, analysis) =
        combine(&f1, &f2, tol).map_err(|e| CliError::invalid(e.to_string()))?;
    let part1 = f1.analyze(tol).parseval_on_span(tol) && !f1.is_empty();
    let part2 = f2.analyze(tol).parseval_on_span(tol) && !f2.is_empty();
    let strictly = union.is_strictly_disjoint(tol);
    let antecedent = strictly && part1 && part2;
    let theorem_holds = !antecedent || analysis.parseval;
    let mut payload = Map::new();
    payload.insert("strictly_disjoint".into(), Value::Bool(strictly));
    payload.insert("disjoint".into(), Value::Bool(union.is_disjoint(tol)));
    payload.insert("part1_parseval_on_span".into(), Value::Bool(part1));
    payload.insert("part2_parseval_on_span".into(), Value::Bool(part2));
    payload.insert("theorem_antecedent".into(), Value::Bool(antecedent));
    payload.insert("union_analysis".into(), analysis_value(&analysis));
    Ok(Outcome {
        verdict: theorem_holds,
        payload: Value::Object(payload),
        diagnostics: vec![format!(
            "strictly disjoint: {strictly}; union Parseval: {}",
            analysis.parseval
        )],
    })
}

pub fn check_sum(problem: &Problem, second: &Problem) -> Result<Outcome, CliError> {
    let fx = family_from(problem)?;
    let fy = family_from(second)?;
    let tol = problem.tolerance;
    let cross =
        cross_term_condition(&fx, &fy, tol).map_err(|e| CliError::invalid(e.to_string()))?;
    let sum = sum_family(&fx, &fy, tol).map_err(|e| CliError::invalid(e.to_string()))?;
    let analysis = sum.analyze(tol);
    let equivalence = cross == analysis.parseval;
    let mut payload = Map::new();
    payload.insert("cross_term_condition".into(), Value::Bool(cross));
    payload.insert("sum_analysis".into(), analysis_value(&analysis));
    payload.insert("equivalence_holds".into(), Value::Bool(equivalence));
    Ok(Outcome {
        verdict: equivalence,
        payload: Value::Object(payload),
        diagnostics: vec![format!(
            "cross terms vanish: {cross}; sum Parseval: {}",
            analysis.parseval
        )],
    })
}

pub struct IdentityArgs {
    pub subset: Option<Vec<usize>>,
    pub vector: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub seed: u64,
}

/// Residual threshold for the direct identity in the J-selfadjoint
/// variant. The direct form is an algebraic identity there, so anything
/// beyond accumulated rounding marks a failure.
const IDENTITY_DIRECT_TOL: f64 = 1e-8;

pub fn check_identity(problem: &Problem, args: &IdentityArgs) -> Result<Outcome, CliError> {
    let family = family_from(problem)?;
    let variant = problem.variant;
    let core_variant = variant.to_core();
    let mut payload = Map::new();
    let mut diagnostics = Vec::new();
    let assertable = variant == Variant::Jsa;
    if !assertable {
        diagnostics.push(
            "literal variant: the direct residual is reported, not asserted".to_string(),
        );
    }

    let verdict;
    match (&args.subset, &args.vector, args.trials) {
        (Some(subset), Some(vector), None) => {
            if vector.len() != problem.space.dim() {
                return Err(CliError::invalid(format!(
                    "--vector has length {}, expected {}",
                    vector.len(),
                    problem.space.dim()
                )));
            }
            let x = DVector::from_column_slice(vector);
            let report = family
                .identity_check(subset, &x, core_variant)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            payload.insert(
                "subset".into(),
                Value::Array(subset.iter().map(|&i| Value::Number(i.into())).collect()),
            );
            payload.insert("lhs_direct".into(), num(report.lhs_direct));
            payload.insert("rhs_direct".into(), num(report.rhs_direct));
            payload.insert("lhs_paper".into(), num(report.lhs_paper));
            payload.insert("rhs_paper".into(), num(report.rhs_paper));
            payload.insert("residual_direct".into(), num(report.residual_direct));
            payload.insert("residual_paper".into(), num(report.residual_paper));
            payload.insert("residual_forms".into(), num(report.residual_forms));
            verdict = !assertable || report.residual_direct <= IDENTITY_DIRECT_TOL;
        }
        (None, None, Some(trials)) => {
            if trials == 0 {
                return Err(CliError::invalid("--trials must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut max_direct = 0.0f64;
            let mut max_paper = 0.0f64;
            let mut max_forms = 0.0f64;
            for _ in 0..trials {
                let subset: Vec<usize> =
                    (0..family.len()).filter(|_| rng.random::<bool>()).collect();
                let x = DVector::from_fn(problem.space.dim(), |_, _| {
                    rng.random_range(-1.0..1.0)
                });
                let report = family
                    .identity_check(&subset, &x, core_variant)
                    .map_err(|e| CliError::invalid(e.to_string()))?;
                max_direct = max_direct.max(report.residual_direct);
                max_paper = max_paper.max(report.residual_paper);
                max_forms = max_forms.max(report.residual_forms);
            }
            payload.insert("trials".into(), Value::Number(trials.into()));
            payload.insert("seed".into(), Value::Number(args.seed.into()));
            payload.insert("max_residual_direct".into(), num(max_direct));
            payload.insert("max_residual_paper".into(), num(max_paper));
            payload.insert("max_residual_forms".into(), num(max_forms));
            verdict = !assertable || max_direct <= IDENTITY_DIRECT_TOL;
        }
        _ => {
            return Err(CliError::invalid(
                "identity check needs either --subset and --vector, or --trials",
            ));
        }
    }
    Ok(Outcome {
        verdict,
        payload: Value::Object(payload),
        diagnostics,
    })
}

pub fn check_bessel(problem: &Problem) -> Result<Outcome, CliError> {
    // Raw members: this check deliberately bypasses the family
    // construction filter, so neutral or degenerate subspaces pass
    // through.
    let members: Vec<(Subspace, f64)> = problem
        .subspaces
        .iter()
        .map(|(_, w, v)| (w.clone(), *v))
        .collect();
    let tol = problem.tolerance;
    let report = bessel_inequality_check(&problem.space, &members, tol)
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let mut aggregate = Subspace::zero(&problem.space);
    for (_, w, _) in &problem.subspaces {
        aggregate = aggregate
            .sum(w, krein_core::DEFAULT_RANK_TOL)
            .map_err(|e| CliError::invalid(e.to_string()))?;
    }
    let deficiency = aggregate.deficiency_part(tol);
    let gamma = deficiency.reduced_min_modulus(tol).ok();
    let predicted = report.deficiency_class == SubspaceClass::UniformlyPositive
        && gamma.is_some_and(|g| g > tol);
    let consistent = report.holds == predicted;
    let mut payload = Map::new();
    payload.insert("holds".into(), Value::Bool(report.holds));
    payload.insert("lower".into(), opt_num(report.lower));
    payload.insert("upper".into(), opt_num(report.upper));
    payload.insert(
        "deficiency_class".into(),
        Value::String(report.deficiency_class.to_string()),
    );
    payload.insert("deficiency_gamma".into(), opt_num(gamma));
    payload.insert("theorem_consistent".into(), Value::Bool(consistent));
    Ok(Outcome {
        verdict: consistent,
        payload: Value::Object(payload),
        diagnostics: vec![format!(
            "inequality holds: {}; deficiency class: {}",
            report.holds, report.deficiency_class
        )],
    })
}

pub fn check_douglas(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    tolerance: f64,
) -> Result<Outcome, CliError> {
    let report = douglas_check(a, b, tolerance).map_err(|e| CliError::invalid(e.to_string()))?;
    let agree = report.range_inclusion == report.lambda.is_some()
        && report.range_inclusion == report.factor_exists;
    let mut payload = Map::new();
    payload.insert(
        "range_inclusion".into(),
        Value::Bool(report.range_inclusion),
    );
    payload.insert("lambda".into(), opt_num(report.lambda));
    payload.insert("factor_exists".into(), Value::Bool(report.factor_exists));
    payload.insert("conditions_agree".into(), Value::Bool(agree));
    Ok(Outcome {
        verdict: agree,
        payload: Value::Object(payload),
        diagnostics: vec![format!(
            "range inclusion: {}; lambda: {:?}",
            report.range_inclusion, report.lambda
        )],
    })
}

pub fn check_dual(problem: &Problem) -> Result<Outcome, CliError> {
    let family = family_from(problem)?;
    let tol = problem.tolerance;
    match family.canonical_dual(problem.variant.to_core(), tol) {
        Ok((dual, diagnostics)) => {
            let mut members = Vec::new();
            for (i, m) in dual.members().iter().enumerate() {
                let mut e = Map::new();
                e.insert("index".into(), Value::Number(i.into()));
                e.insert("dim".into(), Value::Number(m.subspace().dim().into()));
                e.insert("weight".into(), num(m.weight()));
                e.insert(
                    "class".into(),
                    Value::String(m.subspace().classify(tol).to_string()),
                );
                members.push(Value::Object(e));
            }
            let mut payload = Map::new();
            payload.insert("constructible".into(), Value::Bool(true));
            payload.insert(
                "frame_operator_residual".into(),
                num(diagnostics.frame_operator_residual),
            );
            payload.insert(
                "dual_analysis".into(),
                analysis_value(&diagnostics.analysis),
            );
            payload.insert("dual_members".into(), Value::Array(members));
            let verdict = diagnostics.analysis.is_j_fusion_frame;
            Ok(Outcome {
                verdict,
                payload: Value::Object(payload),
                diagnostics: vec![format!(
                    "dual is a J-fusion frame: {verdict}; frame-operator residual: {:.3e}",
                    diagnostics.frame_operator_residual
                )],
            })
        }
        Err(e @ KreinError::IndefiniteMember { .. }) => {
            // Theorem violation: the inverse dragged a member out of the
            // uniformly definite class.
            let mut payload = Map::new();
            payload.insert("constructible".into(), Value::Bool(false));
            payload.insert("frame_operator_residual".into(), Value::Null);
            payload.insert("dual_analysis".into(), Value::Null);
            payload.insert("dual_members".into(), Value::Array(vec![]));
            Ok(Outcome {
                verdict: false,
                payload: Value::Object(payload),
                diagnostics: vec![format!("dual construction failed: {e}")],
            })
        }
        Err(e) => Err(CliError::invalid(e.to_string())),
    }
}

pub struct RandomArgs {
    pub signs: Vec<i8>,
    pub dims_plus: Vec<usize>,
    pub dims_minus: Vec<usize>,
    pub seed: u64,
}

/// Emits a problem file for a random J-fusion frame; identical arguments
/// produce identical bytes.
pub fn random_problem(args: &RandomArgs) -> Result<String, CliError> {
    let space =
        krein_core::Space::from_signs(&args.signs).map_err(|e| CliError::invalid(e.to_string()))?;
    let mut dims = args.dims_plus.clone();
    dims.extend_from_slice(&args.dims_minus);
    let family = random_family(
        &space,
        (args.dims_plus.len(), args.dims_minus.len()),
        &dims,
        args.seed,
    )
    .map_err(|e| CliError::invalid(e.to_string()))?;

    let mut subspaces = Vec::new();
    for (i, m) in family.members().iter().enumerate() {
        let basis = m.subspace().basis();
        let span: Vec<Value> = (0..basis.ncols())
            .map(|c| {
                Value::Array(
                    basis
                        .column(c)
                        .iter()
                        .map(|x| num(*x))
                        .collect(),
                )
            })
            .collect();
        let mut e = Map::new();
        e.insert("name".into(), Value::String(format!("W{}", i + 1)));
        e.insert("span".into(), Value::Array(span));
        e.insert("weight".into(), num(m.weight()));
        subspaces.push(Value::Object(e));
    }

    let mut symmetry = Map::new();
    symmetry.insert("type".into(), Value::String("diagonal".into()));
    symmetry.insert(
        "signs".into(),
        Value::Array(
            args.signs
                .iter()
                .map(|&s| Value::Number(i64::from(s).into()))
                .collect(),
        ),
    );
    let mut options = Map::new();
    options.insert("tolerance".into(), num(krein_core::DEFAULT_TOL));
    options.insert("variant".into(), Value::String("jsa".into()));
    let mut file = Map::new();
    file.insert(
        "dimension".into(),
        Value::Number(space.dim().into()),
    );
    file.insert("symmetry".into(), Value::Object(symmetry));
    file.insert("subspaces".into(), Value::Array(subspaces));
    file.insert("options".into(), Value::Object(options));
    let mut text = serde_json::to_string_pretty(&Value::Object(file)).expect("file serialises");
    text.push('\n');
    Ok(text)
}
