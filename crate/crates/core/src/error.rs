//! Error type shared by all modules.

use thiserror::Error;

use crate::subspace::SubspaceClass;

/// Everything that can go wrong while building or analysing Krein-space
/// objects.
#[derive(Debug, Error)]
pub enum KreinError {
    /// A symmetry candidate was not symmetric.
    #[error("matrix is not symmetric")]
    NotSymmetric,
    /// A symmetry candidate did not square to the identity.
    #[error("matrix is not an involution (J·J ≠ I)")]
    NotAnInvolution,
    /// A diagonal signature contained entries other than ±1, or was empty.
    #[error("signature must be a nonempty list of ±1 entries")]
    InvalidSigns,
    /// Vector or matrix dimensions do not match the ambient space.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// The operation is undefined on the zero subspace.
    #[error("operation undefined on the zero subspace")]
    ZeroSubspace,
    /// Every Gramian eigenvalue fell below the cutoff.
    #[error("no Gramian eigenvalue survives the cutoff")]
    AllNeutral,
    /// The subspace is not uniformly definite.
    #[error("subspace is not uniformly definite")]
    NotUniformlyDefinite,
    /// The Gramian is singular, so the J-orthogonal projection does not
    /// exist.
    #[error("degenerate subspace: the J-orthogonal projection does not exist")]
    DegenerateSubspace,
    /// A family member is not uniformly definite.
    #[error("member {index} classifies as {class:?}; members must be uniformly definite")]
    IndefiniteMember { index: usize, class: SubspaceClass },
    /// A family member carries a weight that is not strictly positive.
    #[error("member {index} has a non-positive weight")]
    NonPositiveWeight { index: usize },
    /// A family member is the zero subspace.
    #[error("member {index} is the zero subspace")]
    ZeroMember { index: usize },
    /// Two families cannot be paired by the requested operation.
    #[error("families are not compatible: {reason}")]
    MismatchedFamilies { reason: String },
    /// A member index is out of range.
    #[error("index {index} out of range for {len} members")]
    BadIndex { index: usize, len: usize },
    /// The frame operator is numerically singular.
    #[error("frame operator is numerically singular")]
    SingularFrameOperator,
    /// No members were supplied where at least one is required.
    #[error("member list is empty")]
    EmptyFamily,
    /// A random-family request cannot be satisfied.
    #[error("infeasible request: {reason}")]
    InfeasibleRequest { reason: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, KreinError>;
