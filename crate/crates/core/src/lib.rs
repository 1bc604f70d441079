//! Numerical kernel for fusion-frame analysis in finite-dimensional Krein
//! spaces.
//!
//! A Krein space is modelled as `ℝⁿ` together with a fundamental symmetry
//! `J` (a symmetric involution). The indefinite inner product is
//! `[x, y] = ⟨Jx, y⟩`; the associated Hilbert space carries the plain
//! Euclidean inner product, and every norm below is taken there.
//!
//! The crate is organised in three layers:
//!
//! * [`space`] — the ambient space, the indefinite product and J-adjoints;
//! * [`subspace`] — subspaces stored through orthonormal bases, their
//!   Gramians, classification, projections and decompositions;
//! * [`fusion`] — weighted families of definite subspaces with the full
//!   frame toolbox: synthesis/analysis/frame operators, frame bounds,
//!   tightness and Parseval detection, duals, combination results and the
//!   related operator identities.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so the API is safe to use from concurrent callers.

pub mod error;
mod linalg;
pub mod space;
pub mod subspace;
pub mod fusion;

pub use error::{KreinError, Result};
pub use space::{Operator, Space, Vector};
pub use subspace::{GramSpectrum, Subspace, SubspaceClass};
pub use fusion::{
    bessel_inequality_check, combine, cross_term_condition, douglas_check, random_family,
    sum_family, BesselReport, DirectSumVector, DouglasReport, DualDiagnostics, Family,
    FrameAnalysis, FrameVariant, IdentityReport, Member, PencilProjection,
};

/// Default tolerance for boolean predicates (classification, tightness,
/// orthogonality tests).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default relative singular-value cutoff for rank-revealing
/// orthonormalisation.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
