//! Deterministic random families for property suites.
//!
//! Maximal uniformly definite subspaces are exactly the graphs of strict
//! contractions across the canonical decomposition, so the generator tilts
//! the eigenspaces of `J` by random contractions (spectral norm at most
//! 0.7, keeping classification margins healthy) and places random member
//! subspaces inside the tilted spans. Spans are redrawn until they fill
//! the whole maximal subspace, which makes every output a J-fusion frame.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{KreinError, Result};
use crate::linalg;
use crate::space::Space;
use crate::subspace::Subspace;
use crate::DEFAULT_RANK_TOL;

use super::Family;

const MAX_CONTRACTION: f64 = 0.7;
const MAX_ATTEMPTS: usize = 64;

fn infeasible(reason: impl Into<String>) -> KreinError {
    KreinError::InfeasibleRequest {
        reason: reason.into(),
    }
}

fn validate_side(kappa: usize, dims: &[usize], label: &str) -> Result<()> {
    if kappa == 0 {
        if dims.is_empty() {
            return Ok(());
        }
        return Err(infeasible(format!(
            "{label} members requested but the {label} component of J is trivial"
        )));
    }
    if dims.is_empty() {
        return Err(infeasible(format!(
            "the {label} component has dimension {kappa} but no {label} members were requested"
        )));
    }
    if dims.iter().any(|&d| d == 0) {
        return Err(infeasible("member dimensions must be at least 1"));
    }
    if dims.iter().any(|&d| d > kappa) {
        return Err(infeasible(format!(
            "a {label} member dimension exceeds the component dimension {kappa}"
        )));
    }
    if dims.iter().sum::<usize>() < kappa {
        return Err(infeasible(format!(
            "{label} member dimensions sum below {kappa}, so the span cannot be maximal"
        )));
    }
    Ok(())
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// Random contraction with spectral norm drawn uniformly in
/// `[0, MAX_CONTRACTION]`.
fn random_contraction(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    let target: f64 = rng.random_range(0.0..MAX_CONTRACTION);
    let raw = random_matrix(rng, rows, cols);
    let smax = raw
        .clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |m, s| m.max(*s));
    if smax <= 0.0 {
        return DMatrix::zeros(rows, cols);
    }
    raw * (target / smax)
}

/// Maximal uniformly definite subspace of the given sign: the graph of a
/// random contraction over the matching eigenspace of `J`.
fn random_maximal_definite(
    rng: &mut ChaCha8Rng,
    space: &Space,
    e_own: &DMatrix<f64>,
    e_other: &DMatrix<f64>,
) -> Result<Subspace> {
    let kappa = e_own.ncols();
    let tilt = if e_other.ncols() > 0 {
        let k = random_contraction(rng, e_other.ncols(), kappa);
        e_own + e_other * k
    } else {
        e_own.clone()
    };
    Subspace::span_columns(space, &tilt, DEFAULT_RANK_TOL)
}

/// Members with the requested dimensions whose union spans the whole
/// aggregate; redraws until the span is full.
fn random_members_within(
    rng: &mut ChaCha8Rng,
    aggregate: &Subspace,
    dims: &[usize],
) -> Result<Vec<Subspace>> {
    let kappa = aggregate.dim();
    let space = aggregate.space().clone();
    for _ in 0..MAX_ATTEMPTS {
        let mut members = Vec::with_capacity(dims.len());
        let mut stacked = DMatrix::zeros(space.dim(), dims.iter().sum());
        let mut ok = true;
        let mut col = 0;
        for &d in dims {
            let coords = random_matrix(rng, kappa, d);
            let member =
                Subspace::span_columns(&space, &(aggregate.basis() * coords), DEFAULT_RANK_TOL)?;
            if member.dim() != d {
                ok = false;
                break;
            }
            stacked
                .view_mut((0, col), (space.dim(), d))
                .copy_from(member.basis());
            col += d;
            members.push(member);
        }
        if ok && linalg::rank(&stacked, DEFAULT_RANK_TOL) == kappa {
            return Ok(members);
        }
    }
    Err(infeasible("could not realise a spanning member layout"))
}

/// Deterministic random J-fusion frame: `members_per_sign` counts the
/// positive and negative members, `dims` lists their dimensions (positive
/// members first), weights are log-uniform in `[0.5, 2]`.
pub fn random_family(
    space: &Space,
    members_per_sign: (usize, usize),
    dims: &[usize],
    seed: u64,
) -> Result<Family> {
    let (k_plus, k_minus) = members_per_sign;
    if dims.len() != k_plus + k_minus {
        return Err(infeasible(format!(
            "expected {} member dimensions, found {}",
            k_plus + k_minus,
            dims.len()
        )));
    }
    let (dims_plus, dims_minus) = dims.split_at(k_plus);
    validate_side(space.kappa_plus(), dims_plus, "positive")?;
    validate_side(space.kappa_minus(), dims_minus, "negative")?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (e_plus, e_minus) = space.canonical_bases();

    let mut members = Vec::with_capacity(dims.len());
    if space.kappa_plus() > 0 {
        let m_plus = random_maximal_definite(&mut rng, space, &e_plus, &e_minus)?;
        for member in random_members_within(&mut rng, &m_plus, dims_plus)? {
            members.push(member);
        }
    }
    if space.kappa_minus() > 0 {
        let m_minus = random_maximal_definite(&mut rng, space, &e_minus, &e_plus)?;
        for member in random_members_within(&mut rng, &m_minus, dims_minus)? {
            members.push(member);
        }
    }
    let weighted = members
        .into_iter()
        .map(|subspace| {
            let log_w: f64 = rng.random_range(0.5f64.ln()..2.0f64.ln());
            (subspace, log_w.exp())
        })
        .collect();
    Family::new(space, weighted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    #[test]
    fn generator_is_deterministic() {
        let s = Space::from_signs(&[1, 1, 1, -1, -1]).unwrap();
        let f1 = random_family(&s, (2, 1), &[2, 2, 2], 42).unwrap();
        let f2 = random_family(&s, (2, 1), &[2, 2, 2], 42).unwrap();
        for (a, b) in f1.members().iter().zip(f2.members()) {
            assert_eq!(a.subspace().basis(), b.subspace().basis());
            assert_eq!(a.weight(), b.weight());
        }
        let f3 = random_family(&s, (2, 1), &[2, 2, 2], 43).unwrap();
        assert_ne!(
            f1.members()[0].subspace().basis(),
            f3.members()[0].subspace().basis()
        );
    }

    #[test]
    fn generator_outputs_are_frames() {
        let s = Space::from_signs(&[1, 1, 1, -1, -1]).unwrap();
        for seed in 0..10 {
            let f = random_family(&s, (2, 2), &[2, 1, 1, 1], seed).unwrap();
            let analysis = f.analyze(DEFAULT_TOL);
            assert!(analysis.is_j_fusion_frame, "seed {seed}");
            let zeta = analysis.zeta.unwrap();
            assert!((std::f64::consts::SQRT_2..2.0).contains(&(zeta + 1e-12)), "seed {seed}: {zeta}");
        }
    }

    #[test]
    fn hilbert_generator_yields_fusion_frames() {
        let h = Space::hilbert(4);
        let f = random_family(&h, (3, 0), &[2, 2, 1], 7).unwrap();
        assert!(f.i_minus().is_empty());
        assert!(f.analyze(DEFAULT_TOL).is_j_fusion_frame);
    }

    #[test]
    fn infeasible_requests_are_rejected() {
        let s = Space::from_signs(&[1, 1, -1]).unwrap();
        assert!(random_family(&s, (0, 0), &[], 1).is_err());
        assert!(random_family(&s, (1, 1), &[1, 1], 1).is_err()); // Σ dims₊ < κ₊
        assert!(random_family(&s, (1, 1), &[3, 1], 1).is_err()); // dim > κ₊
        assert!(random_family(&s, (1, 0), &[2], 1).is_err()); // κ₋ > 0 unserved
        let h = Space::hilbert(2);
        assert!(random_family(&h, (1, 1), &[2, 1], 1).is_err()); // κ₋ = 0
    }
}
