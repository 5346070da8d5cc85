//! Laurent inversion of holomorphic matrix pencils around an isolated
//! singularity, and its application to integrated autoregressive processes.
//!
//! The crate classifies the pole order (0, 1 or 2) of A(z)⁻¹ at a pencil
//! center, computes the full Laurent expansion by the recursive formulas
//! attached to each order, verifies the result independently by contour
//! integration, and uses the principal coefficients to build and simulate
//! Granger-Johansen I(1)/I(2) representations of AR(p) models.
//!
//! Modules:
//! - [`mat`]: complex scalar/matrix aliases and small numeric helpers.
//! - [`subspace`]: orthonormal-basis subspaces, rank-revealing factorization,
//!   complements (orthogonal, within an ambient subspace, seeded random).
//! - [`projector`]: oblique projections and generalized inverses.
//! - [`pencil`]: polynomial pencils, recentering, spectrum, unit-root gate.
//! - [`laurent`]: pole-order analysis and the coefficient recursions.
//! - [`oracle`]: contour-integration cross-checks.
//! - [`granger`]: AR models, classification, MA coefficients, simulation.
//! - [`synth`]: seeded instances with known pole structure.

pub mod error;
pub mod granger;
pub mod laurent;
pub mod mat;
pub mod oracle;
pub mod pencil;
pub mod polyroots;
pub mod projector;
pub mod subspace;
pub mod svd;
pub mod synth;

pub use error::{Error, Result};
pub use granger::{
    build_representation, classify_integration, cross_validate, ma_coefficients,
    ma_from_expansion, match_initial_terms, pencil_from_ar, simulate_ar,
    simulate_representation, ARModel, Classification, CrossValidation, MaWeighting, NoiseSpec,
    Representation, SamplePath,
};
pub use laurent::{
    analyze, direct_sum_order, g_accumulate, identity_residual, laurent_expansion,
    laurent_second, laurent_simple, ComplementPolicy, LaurentExpansion, PoleAnalysis, PoleOrder,
};
pub use mat::{c64, CMat, CVec, C64};
pub use oracle::{
    contour_coefficient, contour_coefficients, default_contour, detect_order, ContourSpec,
};
pub use pencil::{check_assumption2, spectrum_in_disk, Assumption2Report, SpectrumPoint, TaylorPencil};
pub use projector::{generalized_inverse, projector_onto_along, GenInverse, Projector};
pub use subspace::{
    complement_within, kernel_basis, orthogonal_complement, random_complement, range_basis,
    rank_factor, RankFactors, Subspace,
};
