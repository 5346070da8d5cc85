//! Scalar and matrix aliases shared across the crate.
//!
//! Everything is complex: the pencil theory lives over ℂ, so real inputs are
//! promoted at the boundary and never special-cased afterwards.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

/// Complex double-precision scalar.
pub type C64 = Complex<f64>;

/// Dense complex matrix, row-major semantics at the API boundary.
pub type CMat = DMatrix<C64>;

/// Dense complex column vector.
pub type CVec = DVector<C64>;

/// Shorthand for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Identity matrix of size `n`.
pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// True when every entry is finite (no NaN/Inf in either component).
pub fn all_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Frobenius norm. `nalgebra`'s `norm()` already is Frobenius for matrices;
/// the alias keeps call sites self-describing.
#[inline]
pub fn fro_norm(m: &CMat) -> f64 {
    m.norm()
}

/// Max-entry deviation of `m` from Hermitian symmetry.
pub fn hermitian_defect(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Default relative rank tolerance: max(rows, cols) · machine epsilon.
/// Singular values below `tol * sigma_max` count as zero.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Ratio of smallest to largest singular value; 0 for an all-zero matrix.
/// Inverse of the 2-norm condition number, cheap to compare against
/// relative tolerances.
pub fn inv_condition(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let sv = crate::svd::singular_values(m);
    let max = sv[0];
    if max == 0.0 {
        0.0
    } else {
        sv[sv.len() - 1] / max
    }
}
