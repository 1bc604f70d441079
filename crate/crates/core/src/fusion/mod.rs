//! Weighted families of definite subspaces and their frame operators.
//!
//! A family `{(Wᵢ, vᵢ)}` splits into positive members (σᵢ = +1) and
//! negative members (σᵢ = −1) according to the sign classification of each
//! subspace. `M₊` and `M₋` denote the closed spans of the two groups. The
//! family is a J-fusion frame when `M₊` is maximal uniformly positive and
//! `M₋` is maximal uniformly negative.
//!
//! Two frame-operator variants are carried side by side:
//!
//! * `Literal` — `S = Σ σᵢ vᵢ² π_{JWᵢ}`, the printed definition;
//! * `Jsa` — `S = Σ σᵢ vᵢ² Q_{Wᵢ}` with `Q` the J-orthogonal projection,
//!   which restores J-selfadjointness of `S`.
//!
//! The literal operator fails to be J-selfadjoint in general (the worked
//! three-dimensional example below exhibits a residual of √3/2), so every
//! report names the variant it used.

mod analyze;
mod random;
mod theorems;

pub use analyze::{FrameAnalysis, PencilProjection};
pub use random::random_family;
pub use theorems::{
    bessel_inequality_check, combine, cross_term_condition, douglas_check, sum_family,
    BesselReport, DouglasReport, DualDiagnostics, IdentityReport,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{KreinError, Result};
use crate::linalg;
use crate::space::{Operator, Space, Vector};
use crate::subspace::{Subspace, SubspaceClass};
use crate::{DEFAULT_RANK_TOL, DEFAULT_TOL};

/// Frame-operator variant; see the module documentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameVariant {
    /// `Σ σᵢ vᵢ² π_{JWᵢ}` — the printed formula.
    Literal,
    /// `Σ σᵢ vᵢ² Q_{Wᵢ}` — the J-selfadjoint variant.
    Jsa,
}

impl std::fmt::Display for FrameVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FrameVariant::Literal => "literal",
            FrameVariant::Jsa => "jsa",
        })
    }
}

/// One weighted member of a family.
#[derive(Debug, Clone)]
pub struct Member {
    subspace: Subspace,
    weight: f64,
}

impl Member {
    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

/// Element of the direct sum `⊕ Wᵢ`: block `i` holds coordinates against
/// the stored basis of `Wᵢ`.
#[derive(Debug, Clone)]
pub struct DirectSumVector {
    pub blocks: Vec<DVector<f64>>,
}

impl DirectSumVector {
    pub fn new(blocks: Vec<DVector<f64>>) -> DirectSumVector {
        DirectSumVector { blocks }
    }
}

/// Weighted family of uniformly definite subspaces with its index split
/// and aggregate spans.
#[derive(Debug, Clone)]
pub struct Family {
    space: Space,
    members: Vec<Member>,
    sigma: Vec<i8>,
    i_plus: Vec<usize>,
    i_minus: Vec<usize>,
    m_plus: Subspace,
    m_minus: Subspace,
}

impl Family {
    /// Builds a family, classifying every member. Members that are not
    /// uniformly definite are rejected.
    pub fn new(space: &Space, members: Vec<(Subspace, f64)>) -> Result<Family> {
        let mut checked = Vec::with_capacity(members.len());
        let mut sigma = Vec::with_capacity(members.len());
        let mut i_plus = Vec::new();
        let mut i_minus = Vec::new();
        for (index, (subspace, weight)) in members.into_iter().enumerate() {
            if subspace.space() != space {
                return Err(KreinError::DimensionMismatch {
                    expected: space.dim(),
                    found: subspace.space().dim(),
                });
            }
            if !(weight > 0.0) {
                return Err(KreinError::NonPositiveWeight { index });
            }
            if subspace.is_zero() {
                return Err(KreinError::ZeroMember { index });
            }
            match subspace.classify(DEFAULT_TOL) {
                SubspaceClass::UniformlyPositive => {
                    sigma.push(1);
                    i_plus.push(index);
                }
                SubspaceClass::UniformlyNegative => {
                    sigma.push(-1);
                    i_minus.push(index);
                }
                class => return Err(KreinError::IndefiniteMember { index, class }),
            }
            checked.push(Member { subspace, weight });
        }
        let m_plus = Self::aggregate(space, &checked, &i_plus)?;
        let m_minus = Self::aggregate(space, &checked, &i_minus)?;
        Ok(Family {
            space: space.clone(),
            members: checked,
            sigma,
            i_plus,
            i_minus,
            m_plus,
            m_minus,
        })
    }

    /// Builds the family whose members are the spans of the given vector
    /// groups.
    pub fn from_vector_system(space: &Space, groups: &[(Vec<Vector>, f64)]) -> Result<Family> {
        let mut members = Vec::with_capacity(groups.len());
        for (vectors, weight) in groups {
            members.push((Subspace::span(space, vectors, DEFAULT_RANK_TOL)?, *weight));
        }
        Family::new(space, members)
    }

    fn aggregate(space: &Space, members: &[Member], indices: &[usize]) -> Result<Subspace> {
        let mut agg = Subspace::zero(space);
        for &i in indices {
            agg = agg.sum(&members[i].subspace, DEFAULT_RANK_TOL)?;
        }
        Ok(agg)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Signs σᵢ, `+1` for positive members and `−1` for negative ones.
    pub fn sigma(&self) -> &[i8] {
        &self.sigma
    }

    pub fn i_plus(&self) -> &[usize] {
        &self.i_plus
    }

    pub fn i_minus(&self) -> &[usize] {
        &self.i_minus
    }

    /// Closed span of the positive members.
    pub fn m_plus(&self) -> &Subspace {
        &self.m_plus
    }

    /// Closed span of the negative members.
    pub fn m_minus(&self) -> &Subspace {
        &self.m_minus
    }

    /// Total direct-sum dimension `Σ dim Wᵢ`.
    pub fn total_dim(&self) -> usize {
        self.members.iter().map(|m| m.subspace.dim()).sum()
    }

    /// Member pairs `(subspace, weight)` cloned out, e.g. for the raw
    /// Bessel check.
    pub fn member_pairs(&self) -> Vec<(Subspace, f64)> {
        self.members
            .iter()
            .map(|m| (m.subspace.clone(), m.weight))
            .collect()
    }

    fn check_blocks(&self, g: &DirectSumVector) -> Result<()> {
        if g.blocks.len() != self.members.len() {
            return Err(KreinError::DimensionMismatch {
                expected: self.members.len(),
                found: g.blocks.len(),
            });
        }
        for (member, block) in self.members.iter().zip(&g.blocks) {
            if block.len() != member.subspace.dim() {
                return Err(KreinError::DimensionMismatch {
                    expected: member.subspace.dim(),
                    found: block.len(),
                });
            }
        }
        Ok(())
    }

    /// Synthesis operator as the `n × Σdᵢ` block matrix `[v₁B₁ | v₂B₂ | …]`.
    pub fn synthesis_matrix(&self) -> DMatrix<f64> {
        let n = self.space.dim();
        let mut t = DMatrix::zeros(n, self.total_dim());
        let mut col = 0;
        for member in &self.members {
            let d = member.subspace.dim();
            t.view_mut((0, col), (n, d))
                .copy_from(&(member.subspace.basis() * member.weight));
            col += d;
        }
        t
    }

    /// Applies the synthesis operator: `Σ vᵢ Bᵢ gᵢ`, summed in ascending
    /// member order.
    pub fn apply_synthesis(&self, g: &DirectSumVector) -> Result<Vector> {
        self.check_blocks(g)?;
        let mut out = DVector::zeros(self.space.dim());
        for (member, block) in self.members.iter().zip(&g.blocks) {
            out += member.subspace.basis() * block * member.weight;
        }
        Ok(out)
    }

    /// Analysis operator of the printed formula, `x ↦ {σᵢ vᵢ π_{JWᵢ}(x)}`,
    /// as a `Σdᵢ × n` matrix.
    ///
    /// Block `i` of the image lies in `JWᵢ` and is therefore written
    /// against the basis `JBᵢ`, which collapses the block row to
    /// `σᵢ vᵢ BᵢᵀJ`.
    pub fn analysis_literal_matrix(&self) -> DMatrix<f64> {
        let n = self.space.dim();
        let j = self.space.symmetry();
        let mut a = DMatrix::zeros(self.total_dim(), n);
        let mut row = 0;
        for (member, &sigma) in self.members.iter().zip(&self.sigma) {
            let d = member.subspace.dim();
            let block =
                member.subspace.basis().transpose() * j * (f64::from(sigma) * member.weight);
            a.view_mut((row, 0), (d, n)).copy_from(&block);
            row += d;
        }
        a
    }

    /// Applies the literal analysis operator, returning per-member blocks.
    pub fn apply_analysis_literal(&self, x: &Vector) -> Result<DirectSumVector> {
        self.space.check_vector(x)?;
        let j = self.space.symmetry();
        let jx = j * x;
        let blocks = self
            .members
            .iter()
            .zip(&self.sigma)
            .map(|(member, &sigma)| {
                member.subspace.basis().transpose() * &jx * (f64::from(sigma) * member.weight)
            })
            .collect();
        Ok(DirectSumVector { blocks })
    }

    /// Frame operator in the requested variant, summed in ascending member
    /// order.
    pub fn frame_operator(&self, variant: FrameVariant) -> Operator {
        let all: Vec<usize> = (0..self.members.len()).collect();
        self.partial_frame_operator(&all, variant)
            .expect("full index set is valid")
    }

    /// Frame operator restricted to a subset of members. Indices are
    /// deduplicated and summed in ascending order, so
    /// `partial(I₁) + partial(I₁ᶜ)` reproduces the full operator.
    pub fn partial_frame_operator(
        &self,
        subset: &[usize],
        variant: FrameVariant,
    ) -> Result<Operator> {
        let n = self.space.dim();
        let mut subset: Vec<usize> = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        if let Some(&bad) = subset.iter().find(|&&i| i >= self.members.len()) {
            return Err(KreinError::BadIndex {
                index: bad,
                len: self.members.len(),
            });
        }
        let j = self.space.symmetry();
        let mut s = DMatrix::zeros(n, n);
        for &i in &subset {
            let member = &self.members[i];
            let coeff = f64::from(self.sigma[i]) * member.weight * member.weight;
            let term = match variant {
                FrameVariant::Literal => {
                    let jb = j * member.subspace.basis();
                    &jb * jb.transpose()
                }
                FrameVariant::Jsa => member
                    .subspace
                    .j_projection(DEFAULT_TOL)
                    .expect("family members are uniformly definite"),
            };
            s += term * coeff;
        }
        Ok(s)
    }

    /// Complement of a subset within the member index range.
    pub(crate) fn complement(&self, subset: &[usize]) -> Vec<usize> {
        let mut mask = vec![false; self.members.len()];
        for &i in subset {
            if i < mask.len() {
                mask[i] = true;
            }
        }
        (0..self.members.len()).filter(|&i| !mask[i]).collect()
    }

    /// Inverse frame operator, guarded by a condition-number check:
    /// `σ_min > tol · σ_max` must hold.
    pub(crate) fn frame_operator_inverse(
        &self,
        variant: FrameVariant,
        tol: f64,
    ) -> Result<(Operator, Operator)> {
        let s = self.frame_operator(variant);
        let sv = s.clone().singular_values();
        let smax = sv.iter().fold(0.0_f64, |m, v| m.max(*v));
        let smin = sv.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        if !(smin > tol * smax) || smax == 0.0 {
            return Err(KreinError::SingularFrameOperator);
        }
        let inv = s
            .clone()
            .try_inverse()
            .ok_or(KreinError::SingularFrameOperator)?;
        Ok((s, inv))
    }

    /// Canonical dual candidate `{(S⁻¹Wᵢ, vᵢ)}` together with diagnostics:
    /// the residual `‖frame_operator(dual) − S⁻¹‖_max` and the dual
    /// family's analysis.
    ///
    /// The dual keeps the original weights, as in the source theorem; the
    /// residual is reported rather than asserted because the reproduction
    /// of `S⁻¹` by the dual is not guaranteed under unchanged weights.
    pub fn canonical_dual(
        &self,
        variant: FrameVariant,
        tol: f64,
    ) -> Result<(Family, DualDiagnostics)> {
        let (_, inv) = self.frame_operator_inverse(variant, tol)?;
        let mut dual_members = Vec::with_capacity(self.members.len());
        for member in &self.members {
            let image = &inv * member.subspace.basis();
            let subspace = Subspace::span_columns(&self.space, &image, DEFAULT_RANK_TOL)?;
            dual_members.push((subspace, member.weight));
        }
        let dual = Family::new(&self.space, dual_members)?;
        let residual = linalg::max_abs(&(dual.frame_operator(variant) - &inv));
        let analysis = dual.analyze(tol);
        Ok((
            dual,
            DualDiagnostics {
                frame_operator_residual: residual,
                analysis,
            },
        ))
    }

    /// Evaluates both sides of the subset identity in its direct operator
    /// form and in the printed projection form; see [`IdentityReport`].
    pub fn identity_check(
        &self,
        subset: &[usize],
        x: &Vector,
        variant: FrameVariant,
    ) -> Result<IdentityReport> {
        theorems::identity_check(self, subset, x, variant)
    }

    /// Frame analysis with the default ambient-projection pencil.
    pub fn analyze(&self, tol: f64) -> FrameAnalysis {
        analyze::analyze(self, tol, PencilProjection::Ambient)
    }

    /// Frame analysis with an explicit pencil-projection mode.
    pub fn analyze_with(&self, tol: f64, projection: PencilProjection) -> FrameAnalysis {
        analyze::analyze(self, tol, projection)
    }

    /// True when the positive members directly decompose the canonical
    /// positive component `K⁺` and the negative members decompose `K⁻`;
    /// weights are ignored.
    pub fn is_onb_of_subspaces(&self, tol: f64) -> bool {
        theorems::is_onb_of_subspaces(self, tol)
    }

    /// True when `M₊ ∩ M₋ = {0}`.
    pub fn is_disjoint(&self, tol: f64) -> bool {
        self.m_plus
            .intersect(&self.m_minus, tol.max(DEFAULT_RANK_TOL))
            .map(|w| w.is_zero())
            .unwrap_or(false)
    }

    /// True when `M₊ [⊥] M₋`.
    pub fn is_strictly_disjoint(&self, tol: f64) -> bool {
        self.m_plus
            .j_orthogonal(&self.m_minus, tol)
            .unwrap_or(false)
    }
}
