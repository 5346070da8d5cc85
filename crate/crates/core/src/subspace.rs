//! Subspaces with orthonormal column bases, and the rank-revealing
//! factorization every kernel/range/rank decision in the crate flows through.
//!
//! A subspace is always stored with an orthonormal basis, even when it
//! represents an oblique (non-orthogonal) complement choice; obliqueness
//! lives entirely in projector construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::mat::{c64, default_rank_tol, CMat, CVec};

/// Orthonormality tolerance for basis validation.
pub const ORTHONORMALITY_TOL: f64 = 1e-12;

/// Condition-number ceiling for an acceptable random complement.
pub const COMPLEMENT_COND_LIMIT: f64 = 1e6;

const RANDOM_COMPLEMENT_ATTEMPTS: usize = 100;

/// A subspace of ℂⁿ represented by an orthonormal column basis.
/// `dim() == 0` (empty basis) is the zero subspace.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    /// Wraps an orthonormal basis. Fails if `basisᴴ·basis` deviates from the
    /// identity by more than `1e-12` or the ambient dimension is 0.
    pub fn from_orthonormal(basis: CMat) -> Result<Self> {
        if basis.nrows() == 0 {
            return Err(Error::InvalidInput("ambient dimension must be >= 1".into()));
        }
        if basis.ncols() > basis.nrows() {
            return Err(Error::InvalidInput(format!(
                "subspace dimension {} exceeds ambient dimension {}",
                basis.ncols(),
                basis.nrows()
            )));
        }
        let gram = basis.adjoint() * &basis;
        let dev = (&gram - CMat::identity(basis.ncols(), basis.ncols())).norm();
        if dev > ORTHONORMALITY_TOL {
            return Err(Error::InvalidInput(format!(
                "basis is not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    /// Orthonormalizes the column span of `a` (via SVD) and wraps it.
    pub fn from_span(a: &CMat, rank_tol: f64) -> Self {
        rank_factor(a, rank_tol).range
    }

    /// The zero subspace of ℂⁿ.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: CMat::zeros(ambient_dim, 0),
        }
    }

    /// The full space ℂⁿ with the standard basis.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: CMat::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of a single vector (must be nonzero).
    pub fn from_vector(v: &CVec) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidInput("cannot span a zero vector".into()));
        }
        Self::from_orthonormal(CMat::from_column_slice(v.len(), 1, v.as_slice()).map(|z| z / norm))
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// Orthogonal projection matrix BBᴴ onto this subspace.
    pub fn orthogonal_projection(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// Residual of `v` under orthogonal projection onto the subspace,
    /// relative to ‖v‖ (0 for the zero vector).
    pub fn projection_residual(&self, v: &CVec) -> f64 {
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let proj = &self.basis * (self.basis.adjoint() * v);
        (v - proj).norm() / norm
    }

    /// Max projection residual over the columns of `other`'s basis; 0 when
    /// `other` is contained in `self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        let b = other.basis();
        let proj = &self.basis * (self.basis.adjoint() * b);
        let mut worst = 0.0f64;
        for j in 0..b.ncols() {
            let col = b.column(j) - proj.column(j);
            worst = worst.max(col.norm());
        }
        worst
    }
}

/// Output of the shared rank-revealing factorization: rank, an orthonormal
/// range basis, an orthonormal kernel basis and the singular values that
/// decided the split.
#[derive(Debug, Clone)]
pub struct RankFactors {
    pub rank: usize,
    pub range: Subspace,
    pub kernel: Subspace,
    pub singular_values: Vec<f64>,
}

/// Rank-revealing SVD of `a`. Singular values at or below
/// `rank_tol * sigma_max` count as zero; kernel and range come from the same
/// decomposition so rank decisions never contradict each other.
pub fn rank_factor(a: &CMat, rank_tol: f64) -> RankFactors {
    let (rows, cols) = a.shape();
    // Degenerate shapes (nalgebra refuses to factor empty matrices): a map
    // with empty domain has rank 0 and the zero kernel.
    if rows == 0 || cols == 0 {
        return RankFactors {
            rank: 0,
            range: Subspace {
                basis: CMat::zeros(rows, 0),
            },
            kernel: Subspace {
                basis: CMat::zeros(cols, 0),
            },
            singular_values: Vec::new(),
        };
    }
    // Thin SVD of a wide matrix does not expose the kernel; factor the
    // adjoint and swap roles.
    if cols > rows {
        let adj = rank_factor(&a.adjoint(), rank_tol);
        // range(A) = (ker Aᴴ)ᶜ ... recover directly: range(A) = orthogonal
        // complement of ker(Aᴴ)?  Cheaper and exact: range(A) = range via the
        // adjoint's kernel data: ran A = (ker Aᴴ)^⊥ and ker A = (ran Aᴴ)^⊥.
        let range = orthogonal_complement(&adj.kernel);
        let kernel = orthogonal_complement(&adj.range);
        return RankFactors {
            rank: adj.rank,
            range,
            kernel,
            singular_values: adj.singular_values,
        };
    }

    let svd = crate::svd::svd_jacobi(a);
    let sv = svd.singular_values.clone();
    let sigma_max = sv[0];
    let cutoff = rank_tol * sigma_max;
    let rank = if sigma_max == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > cutoff).count()
    };

    let range = Subspace {
        basis: svd.u.columns(0, rank).into_owned(),
    };
    // Columns rank..cols of V span the kernel (V is square here).
    let kernel = Subspace {
        basis: svd.v.columns(rank, cols - rank).into_owned(),
    };

    RankFactors {
        rank,
        range,
        kernel,
        singular_values: sv,
    }
}

/// Orthonormal basis of the numerical null space of `a`.
pub fn kernel_basis(a: &CMat, rank_tol: f64) -> Subspace {
    rank_factor(a, rank_tol).kernel
}

/// Orthonormal basis of the numerical column space of `a`.
pub fn range_basis(a: &CMat, rank_tol: f64) -> Subspace {
    rank_factor(a, rank_tol).range
}

/// Convenience: kernel/range of `a` under the default rank tolerance.
pub fn rank_factor_default(a: &CMat) -> RankFactors {
    rank_factor(a, default_rank_tol(a.nrows(), a.ncols()))
}

/// Orthogonal complement of `v` in its ambient space.
pub fn orthogonal_complement(v: &Subspace) -> Subspace {
    let n = v.ambient_dim();
    if v.dim() == 0 {
        return Subspace::full(n);
    }
    if v.dim() == n {
        return Subspace::zero(n);
    }
    // Range of I - BBᴴ; its singular values are exactly 0 and 1, so any
    // mid-range tolerance splits them.
    let p = CMat::identity(n, n) - v.orthogonal_projection();
    let f = rank_factor(&p, 0.5);
    debug_assert_eq!(f.rank, n - v.dim());
    f.range
}

/// Orthogonal complement of `v` inside `ambient`: the unique `w ⊆ ambient`
/// with `ambient = v ⊕ w` and `w ⊥ v`. Fails with `NotNested` when `v` is
/// not contained in `ambient`.
pub fn complement_within(v: &Subspace, ambient: &Subspace) -> Result<Subspace> {
    let residual = ambient.containment_residual(v);
    if residual > 1e-10 {
        return Err(Error::NotNested { residual });
    }
    // Work in ambient coordinates: v's basis expressed there is orthonormal
    // up to the containment residual.
    let coords = ambient.basis().adjoint() * v.basis();
    let inner = orthogonal_complement(&Subspace { basis: coords });
    Ok(Subspace {
        basis: ambient.basis() * inner.basis(),
    })
}

fn random_gaussian(rows: usize, cols: usize, rng: &mut ChaCha20Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn try_complement(v: &Subspace, candidate: &CMat) -> Option<Subspace> {
    let n = v.ambient_dim();
    let w = Subspace::from_span(candidate, default_rank_tol(n, candidate.ncols()));
    if w.dim() != candidate.ncols() {
        return None;
    }
    let mut stacked = CMat::zeros(n, v.dim() + w.dim());
    stacked.columns_mut(0, v.dim()).copy_from(v.basis());
    stacked.columns_mut(v.dim(), w.dim()).copy_from(w.basis());
    let inv_cond = crate::mat::inv_condition(&stacked);
    if stacked.ncols() == n && inv_cond > 1.0 / COMPLEMENT_COND_LIMIT {
        Some(w)
    } else {
        None
    }
}

/// A pseudo-random complement of `v`: seeded, reproducible, generically
/// oblique to `v`. Retries until the stacked basis `[v | w]` has condition
/// number below `1e6`, giving up after 100 attempts.
pub fn random_complement(v: &Subspace, seed: u64) -> Result<Subspace> {
    let n = v.ambient_dim();
    let d = v.dim();
    if d == n {
        return Ok(Subspace::zero(n));
    }
    if d == 0 {
        return Ok(Subspace::full(n));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_COMPLEMENT_ATTEMPTS {
        let candidate = random_gaussian(n, n - d, &mut rng);
        if let Some(w) = try_complement(v, &candidate) {
            return Ok(w);
        }
    }
    Err(Error::DegenerateComplement {
        attempts: RANDOM_COMPLEMENT_ATTEMPTS,
    })
}

/// A pseudo-random complement of `v` inside `ambient` (both seeded and
/// reproducible): `ambient = v ⊕ w`, `w ⊆ ambient`.
pub fn random_complement_within(v: &Subspace, ambient: &Subspace, seed: u64) -> Result<Subspace> {
    let residual = ambient.containment_residual(v);
    if residual > 1e-10 {
        return Err(Error::NotNested { residual });
    }
    let coords = Subspace {
        basis: ambient.basis().adjoint() * v.basis(),
    };
    let inner = random_complement(&coords, seed)?;
    Ok(Subspace {
        basis: ambient.basis() * inner.basis(),
    })
}
