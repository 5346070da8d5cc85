//! Oblique projections and generalized inverses.
//!
//! `projector_onto_along(Vᶜ, V)` realizes the unique bounded projection onto
//! Vᶜ along V; `generalized_inverse` realizes
//! A^g = (A|_{(ker A)ᶜ})⁻¹ (id − P_{(ran A)ᶜ}) for a chosen pair of
//! complements. When both complements are orthogonal, A^g is the
//! Moore-Penrose inverse.

use crate::error::{Error, Result};
use crate::mat::{default_rank_tol, CMat};
use crate::subspace::{rank_factor, Subspace};

/// Frobenius tolerance for projector/generalized-inverse identities.
pub const PROJECTOR_TOL: f64 = 1e-10;

/// An idempotent map with declared range (`onto`) and kernel (`along`).
#[derive(Debug, Clone)]
pub struct Projector {
    matrix: CMat,
    onto: Subspace,
    along: Subspace,
}

impl Projector {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn onto(&self) -> &Subspace {
        &self.onto
    }

    pub fn along(&self) -> &Subspace {
        &self.along
    }

    /// ‖P² − P‖_F, the idempotence defect.
    pub fn idempotence_defect(&self) -> f64 {
        (&self.matrix * &self.matrix - &self.matrix).norm()
    }
}

/// The projection onto `onto` along `along`. The two subspaces must satisfy
/// dim(onto) + dim(along) = n with a nonsingular stacked basis.
pub fn projector_onto_along(onto: &Subspace, along: &Subspace) -> Result<Projector> {
    let n = onto.ambient_dim();
    if along.ambient_dim() != n {
        return Err(Error::NotComplementary(format!(
            "ambient dimensions differ: {} vs {}",
            n,
            along.ambient_dim()
        )));
    }
    let (d1, d2) = (onto.dim(), along.dim());
    if d1 + d2 != n {
        return Err(Error::NotComplementary(format!(
            "dim(onto) + dim(along) = {} != ambient {}",
            d1 + d2,
            n
        )));
    }

    let mut stacked = CMat::zeros(n, n);
    stacked.columns_mut(0, d1).copy_from(onto.basis());
    stacked.columns_mut(d1, d2).copy_from(along.basis());

    let inv_cond = crate::mat::inv_condition(&stacked);
    if inv_cond <= default_rank_tol(n, n) {
        return Err(Error::NotComplementary(format!(
            "stacked basis is rank-deficient (inverse condition {inv_cond:.3e})"
        )));
    }

    // P = [B_onto 0] · [B_onto B_along]⁻¹.
    let lu = stacked.clone().lu();
    let inv = lu
        .try_inverse()
        .ok_or_else(|| Error::NotComplementary("stacked basis is singular".into()))?;
    let matrix = onto.basis() * inv.rows(0, d1);

    Ok(Projector {
        matrix,
        onto: onto.clone(),
        along: along.clone(),
    })
}

/// A generalized inverse of `source` for a chosen pair of complements,
/// satisfying AGA = A, GAG = G, AG = id − P_{Rᶜ}, GA = P_{Kᶜ}.
#[derive(Debug, Clone)]
pub struct GenInverse {
    matrix: CMat,
    source: CMat,
    range_complement: Subspace,
    kernel_complement: Subspace,
}

impl GenInverse {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn source(&self) -> &CMat {
        &self.source
    }

    pub fn range_complement(&self) -> &Subspace {
        &self.range_complement
    }

    pub fn kernel_complement(&self) -> &Subspace {
        &self.kernel_complement
    }

    /// Max Frobenius defect over the four defining identities.
    pub fn identity_defect(&self) -> f64 {
        let a = &self.source;
        let g = &self.matrix;
        let n = a.nrows();
        let aga = (a * g * a - a).norm();
        let gag = (g * a * g - g).norm();
        // AG should equal id − P_{Rᶜ}; GA should equal P_{Kᶜ}. Rebuild the
        // projections from the stored complements.
        let defect = match self.projections() {
            Ok((p_rc, p_kc)) => {
                let ag = (a * g - (CMat::identity(n, n) - p_rc.matrix())).norm();
                let ga = (g * a - p_kc.matrix()).norm();
                ag.max(ga)
            }
            Err(_) => f64::INFINITY,
        };
        aga.max(gag).max(defect)
    }

    fn projections(&self) -> Result<(Projector, Projector)> {
        let tol = default_rank_tol(self.source.nrows(), self.source.ncols());
        let f = rank_factor(&self.source, tol);
        let p_rc = projector_onto_along(&self.range_complement, &f.range)?;
        let p_kc = projector_onto_along(&self.kernel_complement, &f.kernel)?;
        Ok((p_rc, p_kc))
    }
}

/// Builds the generalized inverse of `a` determined by the complements
/// `rc` of ran A and `kc` of ker A (both verified).
pub fn generalized_inverse(
    a: &CMat,
    rc: &Subspace,
    kc: &Subspace,
    rank_tol: f64,
) -> Result<GenInverse> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidInput("generalized inverse needs a square matrix".into()));
    }
    let f = rank_factor(a, rank_tol);
    // Complementarity of rc/kc against ran A / ker A is exactly what the
    // projector construction verifies.
    let p_rc = projector_onto_along(rc, &f.range)?;
    let _p_kc = projector_onto_along(kc, &f.kernel)?;

    if kc.dim() == 0 {
        // A == 0 on the whole space: the inverse of the empty restriction.
        return Ok(GenInverse {
            matrix: CMat::zeros(n, n),
            source: a.clone(),
            range_complement: rc.clone(),
            kernel_complement: kc.clone(),
        });
    }

    // G = B_kc · (A B_kc)⁺ · (id − P_{Rᶜ}); the pseudo-inverse solve is exact
    // because id − P_{Rᶜ} maps onto ran A = ran(A B_kc) and A B_kc has full
    // column rank.
    let a_on_kc = a * kc.basis();
    let pinv = crate::svd::pseudo_inverse(&a_on_kc, rank_tol);
    let complement_to_range = CMat::identity(n, n) - p_rc.matrix();
    let matrix = kc.basis() * pinv * complement_to_range;

    Ok(GenInverse {
        matrix,
        source: a.clone(),
        range_complement: rc.clone(),
        kernel_complement: kc.clone(),
    })
}
