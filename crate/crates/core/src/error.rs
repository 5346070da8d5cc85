//! Crate-wide error type.

use thiserror::Error;

use crate::mat::C64;

/// Errors produced by subspace construction, pole analysis, the contour
/// oracle and the autoregressive layer.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix or document failed a shape/finiteness invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// `complement_within` was called with a subspace that is not contained
    /// in the requested ambient subspace.
    #[error("subspace is not contained in the ambient subspace (projection residual {residual:.3e})")]
    NotNested { residual: f64 },

    /// The two subspaces handed to a projector or generalized inverse do not
    /// form a direct sum with their counterparts.
    #[error("subspaces are not complementary: {0}")]
    NotComplementary(String),

    /// `random_complement` exhausted its retry budget without producing a
    /// well-conditioned complement.
    #[error("failed to draw a well-conditioned random complement after {attempts} attempts")]
    DegenerateComplement { attempts: usize },

    /// det A(z) vanishes identically; the pencil has no inverse anywhere.
    #[error("pencil determinant is identically zero")]
    IdenticallySingular,

    /// The inverse has a pole of order >= 3 at the analysis center (or the
    /// pencil is nowhere invertible); no closed-form recursion is available.
    #[error("unsupported pole order: order >= 3 or non-invertible pencil (dim K = {dim_k}, dim K1 = {dim_k1})")]
    UnsupportedPoleOrder { dim_k: usize, dim_k1: usize },

    /// A Laurent recursion was invoked on an analysis of the wrong order.
    #[error("expansion routine for order {expected} called on analysis of order {actual}")]
    WrongOrder { expected: usize, actual: usize },

    /// Coefficient index outside the computed range of an expansion.
    #[error("index {index} outside computed range [{min}, {max}]")]
    OutOfRange { index: i64, min: i64, max: i64 },

    /// A contour node landed on (or numerically too close to) the spectrum.
    #[error("pencil is numerically singular on the contour at z = {at} (cond {cond:.3e})")]
    SingularOnContour { at: C64, cond: f64 },

    /// Contour radius does not keep other spectrum points at a safe distance.
    #[error("invalid contour: {0}")]
    InvalidContour(String),

    /// det A(z) has roots in the closed unit disk other than 1.
    #[error("assumption violated: spectrum in the closed unit disk off 1: {roots:?}")]
    AssumptionViolated { roots: Vec<C64> },

    /// A(1) is invertible, so the process has no unit-root singularity and
    /// the I(1)/I(2) representations do not apply.
    #[error("A(1) is invertible: no singularity at one, process is outside I(1)/I(2) scope")]
    NotSingularAtOne,

    /// MA coefficient tail failed to decay below tolerance before the cap.
    #[error("MA coefficient tail did not converge below {tol:.3e} within {cap} terms")]
    TailNotConverged { tol: f64, cap: usize },

    /// Not enough pre-sample innovations to evaluate the truncated MA filter.
    #[error("insufficient innovation history: need {needed} pre-sample draws, have {available}")]
    InsufficientHistory { needed: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
