//! Pole-order classification of A(z)⁻¹ at the pencil center and the
//! recursive computation of its Laurent coefficients.
//!
//! With A₀ = A(z₀), the classification data is
//!   K  = ker A₀,  R = ran A₀,
//!   S₁ = P_{Rᶜ} A₁ |_K : K → Rᶜ            (invertible ⇔ simple pole),
//!   K₁ = ker S₁ = {x ∈ K : A₁x ∈ R},
//!   R₁ = R + A₁K,
//!   A₂† = A₂ − A₁ A₀^g A₁,
//!   S† = P_{R₁ᶜ} A₂† |_{K₁} : K₁ → R₁ᶜ     (invertible ⇔ second-order pole),
//! all relative to a chosen set of complements Rᶜ, Kᶜ, R₁ᶜ ⊆ Rᶜ, K₁ᶜ ⊆ K.
//! Coefficients are assembled by splitting N_j along the identity
//! decomposition id = (id − P_{Rᶜ}) + (id − P_{R₁ᶜ})P_{Rᶜ} + P_{R₁ᶜ} and
//! solving the matched-power equations of N(z)A(z) = id for each part;
//! `identity_residual` arbitrates the result.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::mat::{default_rank_tol, eye, CMat, C64};
use crate::pencil::TaylorPencil;
use crate::projector::{generalized_inverse, projector_onto_along, GenInverse, Projector};
use crate::subspace::{
    complement_within, orthogonal_complement, random_complement, random_complement_within,
    range_basis, rank_factor, Subspace,
};

/// How the non-unique complementary subspaces are chosen.
#[derive(Debug, Clone)]
pub enum ComplementPolicy {
    /// Orthogonal complements everywhere (the Moore-Penrose choice).
    Orthogonal,
    /// Seeded pseudo-random complements; any two runs with the same seed
    /// produce identical subspaces.
    SeededRandom(u64),
    /// Caller-provided complements, verified on use. `r1_complement` must be
    /// contained in `range_complement`.
    Explicit {
        range_complement: Subspace,
        kernel_complement: Subspace,
        r1_complement: Option<Subspace>,
        k1_complement: Option<Subspace>,
    },
}

/// Pole order of the inverse at the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleOrder {
    /// A₀ invertible: no pole.
    Regular,
    /// Simple pole (m = 1).
    Simple,
    /// Second-order pole (m = 2).
    Second,
}

impl PoleOrder {
    pub fn as_usize(self) -> usize {
        match self {
            PoleOrder::Regular => 0,
            PoleOrder::Simple => 1,
            PoleOrder::Second => 2,
        }
    }
}

/// Data of the second-order branch of the analysis.
#[derive(Debug, Clone)]
pub struct SecondOrderData {
    pub k1: Subspace,
    pub r1: Subspace,
    pub r1_complement: Subspace,
    pub k1_complement: Subspace,
    pub p_r1c: Projector,
    pub a2_dag: CMat,
    pub a3_dag: CMat,
    /// S† as a dim(R₁ᶜ) × dim(K₁) matrix in the stored bases.
    pub s_dag: CMat,
    /// S^g ∘ P_{Rᶜ}: the generalized inverse of S₁ re-embedded as a
    /// full-space operator (zero when K₁ᶜ is trivial).
    pub s1_geninv: CMat,
}

/// Outcome of pole-order classification: the subspace chain, the chosen
/// complements, the restricted operators and the generalized inverse of A₀.
#[derive(Debug, Clone)]
pub struct PoleAnalysis {
    pub order: PoleOrder,
    pub kernel: Subspace,
    pub range: Subspace,
    pub range_complement: Subspace,
    pub kernel_complement: Subspace,
    pub p_rc: Projector,
    /// S₁ as a dim(Rᶜ) × dim(K) matrix in the stored bases.
    pub s1: CMat,
    pub a0_geninv: GenInverse,
    /// The resolved relative rank tolerance all decisions used.
    pub rank_tol: f64,
    pub second: Option<SecondOrderData>,
}

impl PoleAnalysis {
    pub fn dim_k(&self) -> usize {
        self.kernel.dim()
    }

    pub fn dim_k1(&self) -> usize {
        self.second.as_ref().map_or(0, |s| s.k1.dim())
    }

    /// Codimension of ran A₀.
    pub fn range_defect(&self) -> usize {
        self.range_complement.dim()
    }
}

/// Truncated Laurent expansion N(z) = Σ_{j=−m}^{J} N_j (z−z₀)^j.
#[derive(Debug, Clone)]
pub struct LaurentExpansion {
    center: C64,
    order: usize,
    /// coeffs[i] = N_{i − order}.
    coeffs: Vec<CMat>,
}

impl LaurentExpansion {
    pub fn center(&self) -> C64 {
        self.center
    }

    /// Pole order m.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Truncation index J (largest computed power).
    pub fn j_max(&self) -> i64 {
        self.coeffs.len() as i64 - 1 - self.order as i64
    }

    pub fn coeff(&self, j: i64) -> Option<&CMat> {
        let idx = j + self.order as i64;
        if idx < 0 {
            None
        } else {
            self.coeffs.get(idx as usize)
        }
    }

    /// N_{−m} … N_{−1}.
    pub fn principal(&self) -> &[CMat] {
        &self.coeffs[..self.order]
    }

    /// N_0 … N_J.
    pub fn holomorphic(&self) -> &[CMat] {
        &self.coeffs[self.order..]
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }
}

/// G_j(ℓ, m) = Σ_{k=−m}^{j−1} N_k A_{j+ℓ−k}, with the pencil zero-padded
/// beyond its degree. `ns[i]` holds N_{i−m}; entries up to N_{j−1} must be
/// present. The empty index range yields the zero matrix.
pub fn g_accumulate(ns: &[CMat], pole_order: usize, pencil: &TaylorPencil, j: i64, ell: i64) -> CMat {
    let n = pencil.dim();
    let m = pole_order as i64;
    let mut acc = CMat::zeros(n, n);
    let mut k = -m;
    while k < j {
        let idx = (k + m) as usize;
        let power = (j + ell - k) as usize;
        acc += &ns[idx] * pencil.coeff_or_zero(power);
        k += 1;
    }
    acc
}

fn sub_seeds(seed: u64) -> [u64; 4] {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    [rng.gen(), rng.gen(), rng.gen(), rng.gen()]
}

/// Classifies the pole order of A(z)⁻¹ at the pencil center and gathers all
/// operators the coefficient recursions need. Errors with
/// `UnsupportedPoleOrder` when neither S₁ nor S† is invertible (pole order
/// ≥ 3, or a nowhere-invertible pencil).
pub fn analyze(
    pencil: &TaylorPencil,
    policy: &ComplementPolicy,
    rank_tol: Option<f64>,
) -> Result<PoleAnalysis> {
    let n = pencil.dim();
    let tol = rank_tol.unwrap_or_else(|| default_rank_tol(n, n));
    let a0 = pencil.coeff_or_zero(0);
    let a1 = pencil.coeff_or_zero(1);

    let f = rank_factor(&a0, tol);
    let kernel = f.kernel;
    let range = f.range;

    let seeds = match policy {
        ComplementPolicy::SeededRandom(seed) => sub_seeds(*seed),
        _ => [0; 4],
    };

    let (rc, kc) = match policy {
        ComplementPolicy::Orthogonal => (
            orthogonal_complement(&range),
            orthogonal_complement(&kernel),
        ),
        ComplementPolicy::SeededRandom(_) => (
            random_complement(&range, seeds[0])?,
            random_complement(&kernel, seeds[1])?,
        ),
        ComplementPolicy::Explicit {
            range_complement,
            kernel_complement,
            ..
        } => (range_complement.clone(), kernel_complement.clone()),
    };

    let p_rc = projector_onto_along(&rc, &range)?;
    let a0_geninv = generalized_inverse(&a0, &rc, &kc, tol)?;

    if f.rank == n {
        return Ok(PoleAnalysis {
            order: PoleOrder::Regular,
            kernel,
            range,
            range_complement: rc,
            kernel_complement: kc,
            p_rc,
            s1: CMat::zeros(0, 0),
            a0_geninv,
            rank_tol: tol,
            second: None,
        });
    }

    // S₁ in the stored bases; dim(Rᶜ) = dim(K) because A₀ has index zero.
    let s1_ambient = p_rc.matrix() * &a1;
    let s1 = rc.basis().adjoint() * &s1_ambient * kernel.basis();
    debug_assert_eq!(s1.nrows(), s1.ncols());

    // Invertibility cutoff anchored to the scale of A₁, not of S₁ itself:
    // when A₁ annihilates K, the entries of S₁ are pure roundoff and a test
    // relative to its own largest singular value would call noise full-rank.
    let s1_svd = crate::svd::svd_jacobi(&s1);
    let s1_cutoff = tol * s1_svd.singular_values[0].max(a1.norm());
    let s1_rank = s1_svd
        .singular_values
        .iter()
        .filter(|&&s| s > s1_cutoff)
        .count();
    if s1_rank == s1.ncols() {
        return Ok(PoleAnalysis {
            order: PoleOrder::Simple,
            kernel,
            range,
            range_complement: rc,
            kernel_complement: kc,
            p_rc,
            s1,
            a0_geninv,
            rank_tol: tol,
            second: None,
        });
    }

    // Second-order branch. One SVD of S₁ supplies both K₁ (kernel, pulled
    // back through K's basis) and S₁K (range, pushed through Rᶜ's basis), so
    // dimensions stay consistent.
    let k_dim = kernel.dim();
    let k1 = Subspace::from_orthonormal(
        kernel.basis() * s1_svd.v.columns(s1_rank, k_dim - s1_rank),
    )?;
    let s1k = Subspace::from_orthonormal(rc.basis() * s1_svd.u.columns(0, s1_rank))?;

    let mut r1_stack = CMat::zeros(n, range.dim() + s1k.dim());
    r1_stack.columns_mut(0, range.dim()).copy_from(range.basis());
    r1_stack
        .columns_mut(range.dim(), s1k.dim())
        .copy_from(s1k.basis());
    let r1 = range_basis(&r1_stack, tol);
    debug_assert_eq!(r1.dim(), range.dim() + s1k.dim());

    let (r1c, k1c) = match policy {
        ComplementPolicy::Orthogonal => (
            complement_within(&s1k, &rc)?,
            complement_within(&k1, &kernel)?,
        ),
        ComplementPolicy::SeededRandom(_) => {
            // Any complement of R₁ projects under P_{Rᶜ} to a complement of
            // R₁ contained in Rᶜ; retry on a numerically degenerate draw.
            let mut found = None;
            for attempt in 0..20u64 {
                let provisional = random_complement(&r1, seeds[2].wrapping_add(attempt))?;
                let projected = p_rc.matrix() * provisional.basis();
                let candidate = range_basis(&projected, tol);
                if candidate.dim() == provisional.dim() {
                    found = Some(candidate);
                    break;
                }
            }
            let r1c = found.ok_or(Error::DegenerateComplement { attempts: 20 })?;
            let k1c = random_complement_within(&k1, &kernel, seeds[3])?;
            (r1c, k1c)
        }
        ComplementPolicy::Explicit {
            r1_complement,
            k1_complement,
            ..
        } => {
            let r1c = r1_complement.clone().ok_or_else(|| {
                Error::InvalidInput("explicit policy requires R1-complement for a second-order pole".into())
            })?;
            let k1c = k1_complement.clone().ok_or_else(|| {
                Error::InvalidInput("explicit policy requires K1-complement for a second-order pole".into())
            })?;
            let res = rc.containment_residual(&r1c);
            if res > 1e-10 {
                return Err(Error::NotComplementary(format!(
                    "explicit R1-complement is not contained in the range complement (residual {res:.3e})"
                )));
            }
            let res = kernel.containment_residual(&k1c);
            if res > 1e-10 {
                return Err(Error::NotComplementary(format!(
                    "explicit K1-complement is not contained in the kernel (residual {res:.3e})"
                )));
            }
            // K = K₁ ⊕ K₁ᶜ, checked in K coordinates.
            let mut stacked = CMat::zeros(k_dim, k1.dim() + k1c.dim());
            stacked
                .columns_mut(0, k1.dim())
                .copy_from(&(kernel.basis().adjoint() * k1.basis()));
            stacked
                .columns_mut(k1.dim(), k1c.dim())
                .copy_from(&(kernel.basis().adjoint() * k1c.basis()));
            if stacked.ncols() != k_dim || crate::mat::inv_condition(&stacked) <= tol {
                return Err(Error::NotComplementary(
                    "explicit K1-complement does not complement K1 inside the kernel".into(),
                ));
            }
            (r1c, k1c)
        }
    };

    let p_r1c = projector_onto_along(&r1c, &r1)?;

    let a2 = pencil.coeff_or_zero(2);
    let a3 = pencil.coeff_or_zero(3);
    let g = a0_geninv.matrix();
    let a1g = &a1 * g;
    let a2_dag = &a2 - &a1g * &a1;
    let a3_dag = &a3 - &a1g * &a1g * &a1;

    let s_dag = r1c.basis().adjoint() * p_r1c.matrix() * &a2_dag * k1.basis();
    debug_assert_eq!(s_dag.nrows(), s_dag.ncols());
    let s_dag_invertible = if s_dag.ncols() == 0 {
        false
    } else {
        let sv = crate::svd::svd_jacobi(&s_dag).singular_values;
        let cutoff = tol * sv[0].max(a2_dag.norm());
        sv.iter().all(|&s| s > cutoff)
    };
    if !s_dag_invertible {
        return Err(Error::UnsupportedPoleOrder {
            dim_k: kernel.dim(),
            dim_k1: k1.dim(),
        });
    }

    // S^g ∘ P_{Rᶜ} = B_{K₁ᶜ} (P_{Rᶜ} A₁ B_{K₁ᶜ})⁺ (id − P_{R₁ᶜ}) P_{Rᶜ}.
    let s1_geninv = if k1c.dim() == 0 {
        CMat::zeros(n, n)
    } else {
        let restricted = p_rc.matrix() * &a1 * k1c.basis();
        let pinv = crate::svd::pseudo_inverse(&restricted, tol);
        k1c.basis() * pinv * (eye(n) - p_r1c.matrix()) * p_rc.matrix()
    };

    Ok(PoleAnalysis {
        order: PoleOrder::Second,
        kernel,
        range,
        range_complement: rc,
        kernel_complement: kc,
        p_rc,
        s1,
        a0_geninv,
        rank_tol: tol,
        second: Some(SecondOrderData {
            k1,
            r1,
            r1_complement: r1c,
            k1_complement: k1c,
            p_r1c,
            a2_dag,
            a3_dag,
            s_dag,
            s1_geninv,
        }),
    })
}

/// Laurent coefficients N_{−1} … N_J for a simple pole:
/// N_{−1} = S₁⁻¹ P_{Rᶜ} (re-embedded into the full space), then for j ≥ 0
/// the two-part split N_j = N_j(id − P_{Rᶜ}) + N_j P_{Rᶜ} resolved from the
/// matched-power equations.
pub fn laurent_simple(
    analysis: &PoleAnalysis,
    pencil: &TaylorPencil,
    j_max: usize,
) -> Result<LaurentExpansion> {
    if analysis.order != PoleOrder::Simple {
        return Err(Error::WrongOrder {
            expected: 1,
            actual: analysis.order.as_usize(),
        });
    }
    let a1 = pencil.coeff_or_zero(1);
    let g = analysis.a0_geninv.matrix();

    let s1_inv = analysis
        .s1
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("S1 numerically singular despite simple-pole analysis".into()))?;
    let n_minus1 =
        analysis.kernel.basis() * s1_inv * analysis.range_complement.basis().adjoint() * analysis.p_rc.matrix();

    let mut ns = vec![n_minus1.clone()];
    for j in 0..=j_max as i64 {
        let g0 = g_accumulate(&ns, 1, pencil, j, 0);
        let g1 = g_accumulate(&ns, 1, pencil, j, 1);
        let lead = if j == 0 { eye(pencil.dim()) - &g0 } else { -&g0 };
        let off_rc = &lead * g;
        let on_rc = (-&g1 - &off_rc * &a1) * &n_minus1;
        ns.push(off_rc + on_rc);
    }

    Ok(LaurentExpansion {
        center: pencil.center(),
        order: 1,
        coeffs: ns,
    })
}

/// Laurent coefficients N_{−2} … N_J for a second-order pole, assembled from
/// the three-part identity decomposition
/// id = (id − P_{Rᶜ}) + (id − P_{R₁ᶜ})P_{Rᶜ} + P_{R₁ᶜ}.
pub fn laurent_second(
    analysis: &PoleAnalysis,
    pencil: &TaylorPencil,
    j_max: usize,
) -> Result<LaurentExpansion> {
    if analysis.order != PoleOrder::Second {
        return Err(Error::WrongOrder {
            expected: 2,
            actual: analysis.order.as_usize(),
        });
    }
    let sec = analysis.second.as_ref().expect("second-order data present");
    let n = pencil.dim();
    let a1 = pencil.coeff_or_zero(1);
    let g = analysis.a0_geninv.matrix();
    let a2d = &sec.a2_dag;
    let a3d = &sec.a3_dag;
    let sgp = &sec.s1_geninv;

    let s_dag_inv = sec
        .s_dag
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("S-dagger numerically singular despite second-order analysis".into()))?;
    let n_minus2 =
        sec.k1.basis() * s_dag_inv * sec.r1_complement.basis().adjoint() * sec.p_r1c.matrix();

    let q_r = eye(n) - &n_minus2 * a2d;
    let a0g_a1 = g * &a1;

    // N_{−1} split along the identity decomposition:
    //   off Rᶜ:            −N_{−2} A₁ A₀^g
    //   between R₁ᶜ and Rᶜ: Q_R S^g P_{Rᶜ}
    //   on R₁ᶜ:            (…) N_{−2}
    let off_rc = -(&n_minus2 * &a1 * g);
    let mid = &q_r * sgp;
    let on_r1c = (-(&n_minus2 * a3d) + &n_minus2 * a2d * &a0g_a1 - &a0g_a1
        + &n_minus2 * &a1 * g * a2d
        - &mid * a2d)
        * &n_minus2;
    let n_minus1 = off_rc + mid + on_r1c;

    let mut ns = vec![n_minus2.clone(), n_minus1];
    for j in 0..=j_max as i64 {
        let g0 = g_accumulate(&ns, 2, pencil, j, 0);
        let g1 = g_accumulate(&ns, 2, pencil, j, 1);
        let g2 = g_accumulate(&ns, 2, pencil, j, 2);
        let lead = if j == 0 { eye(n) - &g0 } else { -&g0 };
        let part_a = &lead * g;
        let part_b = (-&g1 - &part_a * &a1) * sgp;
        let part_c = (-&g2 + &g1 * &a0g_a1 - &part_a * a2d + &g1 * sgp * a2d
            + &part_a * &a1 * sgp * a2d)
            * &n_minus2;
        ns.push(part_a + part_b + part_c);
    }

    Ok(LaurentExpansion {
        center: pencil.center(),
        order: 2,
        coeffs: ns,
    })
}

/// Dispatches on the analyzed order; a regular point is an error because the
/// caller should use plain inversion.
pub fn laurent_expansion(
    analysis: &PoleAnalysis,
    pencil: &TaylorPencil,
    j_max: usize,
) -> Result<LaurentExpansion> {
    match analysis.order {
        PoleOrder::Simple => laurent_simple(analysis, pencil, j_max),
        PoleOrder::Second => laurent_second(analysis, pencil, j_max),
        PoleOrder::Regular => Err(Error::WrongOrder {
            expected: 1,
            actual: 0,
        }),
    }
}

/// Frobenius residual of the identity expansion at power k: the larger of
/// ‖Σ_{j=0}^{m+k} N_{k−j} A_j − δ_{k,0} id‖ and the left-multiplied variant.
pub fn identity_residual(expansion: &LaurentExpansion, pencil: &TaylorPencil, k: i64) -> Result<f64> {
    let m = expansion.order() as i64;
    let max_k = expansion.j_max() - m;
    if k < -m || k > max_k {
        return Err(Error::OutOfRange {
            index: k,
            min: -m,
            max: max_k,
        });
    }
    let n = pencil.dim();
    let mut right = CMat::zeros(n, n);
    let mut left = CMat::zeros(n, n);
    for j in 0..=(m + k) {
        let nk = expansion.coeff(k - j).expect("coefficient in range");
        let aj = pencil.coeff_or_zero(j as usize);
        right += nk * &aj;
        left += &aj * nk;
    }
    if k == 0 {
        right -= eye(n);
        left -= eye(n);
    }
    Ok(right.norm().max(left.norm()))
}

/// Independent pole-order detection by direct-sum rank tests only:
/// 0 when A₀ is invertible, 1 when rank [R | A₁K] = n, 2 when
/// rank [R₁ | A₂†K₁] = n, `None` otherwise (order ≥ 3 or no inverse).
/// The Moore-Penrose inverse stands in for A₀^g ("some choice" suffices).
pub fn direct_sum_order(pencil: &TaylorPencil, rank_tol: Option<f64>) -> Option<usize> {
    let n = pencil.dim();
    let tol = rank_tol.unwrap_or_else(|| default_rank_tol(n, n));
    let a0 = pencil.coeff_or_zero(0);
    let a1 = pencil.coeff_or_zero(1);
    let a2 = pencil.coeff_or_zero(2);

    let f = rank_factor(&a0, tol);
    if f.rank == n {
        return Some(0);
    }

    let a1k = &a1 * f.kernel.basis();
    let mut stack = CMat::zeros(n, f.range.dim() + a1k.ncols());
    stack.columns_mut(0, f.range.dim()).copy_from(f.range.basis());
    stack.columns_mut(f.range.dim(), a1k.ncols()).copy_from(&a1k);
    if stack.ncols() == n && rank_factor(&stack, tol).rank == n {
        return Some(1);
    }

    // K₁ = {x ∈ K : A₁x ∈ R}: kernel of (id − P_R) A₁ restricted to K, with
    // the rank cutoff anchored to ‖A₁‖ (see the analogous step in analyze).
    let off_range = (eye(n) - f.range.orthogonal_projection()) * &a1 * f.kernel.basis();
    let off_svd = crate::svd::svd_jacobi(&off_range);
    let cutoff = tol * off_svd.singular_values[0].max(a1.norm());
    let off_rank = off_svd
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff)
        .count();
    let k1_basis =
        f.kernel.basis() * off_svd.v.columns(off_rank, f.kernel.dim() - off_rank);

    let pinv = crate::svd::pseudo_inverse(&a0, tol);
    let a2_dag = &a2 - &a1 * pinv * &a1;
    let a2k1 = &a2_dag * &k1_basis;

    let r1 = range_basis(&stack, tol);
    let mut stack2 = CMat::zeros(n, r1.dim() + a2k1.ncols());
    stack2.columns_mut(0, r1.dim()).copy_from(r1.basis());
    stack2.columns_mut(r1.dim(), a2k1.ncols()).copy_from(&a2k1);
    if stack2.ncols() == n && rank_factor(&stack2, tol).rank == n {
        return Some(2);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c64, CVec};

    fn s(re: f64) -> C64 {
        c64(re, 0.0)
    }

    fn scalar_pencil(values: &[f64]) -> TaylorPencil {
        TaylorPencil::scalar(s(1.0), &values.iter().map(|&v| s(v)).collect::<Vec<_>>()).unwrap()
    }

    fn diag_pencil(diags: &[&[f64]]) -> TaylorPencil {
        let coeffs = diags
            .iter()
            .map(|d| CMat::from_diagonal(&CVec::from_vec(d.iter().map(|&x| s(x)).collect())))
            .collect();
        TaylorPencil::new(s(1.0), coeffs).unwrap()
    }

    #[test]
    fn g_accumulate_spec_examples() {
        // Pencil (1 − z) around 1: A₀ = 0, A₁ = −1; N₋₁ = −1.
        let pencil = scalar_pencil(&[0.0, -1.0]);
        let ns = vec![CMat::from_element(1, 1, s(-1.0))];
        let g00 = g_accumulate(&ns, 1, &pencil, 0, 0);
        assert_eq!(g00[(0, 0)], s(1.0));
        let g01 = g_accumulate(&ns, 1, &pencil, 0, 1);
        assert_eq!(g01[(0, 0)], s(0.0));
        // Empty index range.
        let empty = g_accumulate(&[], 0, &pencil, 0, 0);
        assert_eq!(empty[(0, 0)], s(0.0));
    }

    #[test]
    fn analyze_classifies_scalar_simple_pole() {
        let pencil = scalar_pencil(&[0.0, 1.0]); // z − 1 around 1
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        assert_eq!(a.order, PoleOrder::Simple);
        assert_eq!(a.dim_k(), 1);
        assert_eq!(a.s1[(0, 0)], s(1.0));
    }

    #[test]
    fn analyze_classifies_scalar_second_order() {
        let pencil = scalar_pencil(&[0.0, 0.0, 1.0]); // (z − 1)² around 1
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        assert_eq!(a.order, PoleOrder::Second);
        assert_eq!(a.dim_k(), 1);
        let sec = a.second.as_ref().unwrap();
        assert_eq!(sec.k1.dim(), 1);
        assert_eq!(sec.a2_dag[(0, 0)], s(1.0));
        assert_eq!(sec.s_dag[(0, 0)], s(1.0));
        assert_eq!(a.s1[(0, 0)], s(0.0));
    }

    #[test]
    fn analyze_diag_mixed_orders() {
        // diag((z−1)², z−1, 1) around 1.
        let pencil = diag_pencil(&[&[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]);
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        assert_eq!(a.order, PoleOrder::Second);
        assert_eq!(a.dim_k(), 2);
        assert_eq!(a.dim_k1(), 1);
        let sec = a.second.as_ref().unwrap();
        let expected = CMat::from_diagonal(&CVec::from_vec(vec![s(1.0), s(0.0), s(0.0)]));
        assert!((&sec.a2_dag - expected).norm() < 1e-14);
    }

    #[test]
    fn analyze_rejects_cubic_monomial() {
        let pencil = scalar_pencil(&[0.0, 0.0, 0.0, 1.0]); // (z − 1)³
        match analyze(&pencil, &ComplementPolicy::Orthogonal, None) {
            Err(Error::UnsupportedPoleOrder { dim_k: 1, dim_k1: 1 }) => {}
            other => panic!("expected UnsupportedPoleOrder, got {other:?}"),
        }
    }

    #[test]
    fn analyze_regular_point() {
        let pencil = scalar_pencil(&[1.0, 0.1]);
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        assert_eq!(a.order, PoleOrder::Regular);
        assert_eq!(a.dim_k(), 0);
    }

    #[test]
    fn simple_expansion_of_shifted_monomial() {
        let pencil = scalar_pencil(&[0.0, 1.0]); // z − 1
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        let e = laurent_simple(&a, &pencil, 2).unwrap();
        assert_eq!(e.coeff(-1).unwrap()[(0, 0)], s(1.0));
        for j in 0..=2 {
            assert!(e.coeff(j).unwrap().norm() < 1e-15, "N_{j} should vanish");
        }
    }

    #[test]
    fn simple_expansion_of_negated_monomial() {
        // 1 − z written around 1: A₀ = 0, A₁ = −1; N(z) = −(z−1)⁻¹.
        let pencil = scalar_pencil(&[0.0, -1.0]);
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        let e = laurent_simple(&a, &pencil, 1).unwrap();
        assert_eq!(e.coeff(-1).unwrap()[(0, 0)], s(-1.0));
        assert!(e.coeff(0).unwrap().norm() < 1e-15);
        assert!(e.coeff(1).unwrap().norm() < 1e-15);
    }

    #[test]
    fn simple_expansion_of_diag_pencil() {
        // diag(z−1, 1) around 1.
        let pencil = diag_pencil(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        let e = laurent_simple(&a, &pencil, 1).unwrap();
        let d = |x: f64, y: f64| CMat::from_diagonal(&CVec::from_vec(vec![s(x), s(y)]));
        assert!((e.coeff(-1).unwrap() - d(1.0, 0.0)).norm() < 1e-14);
        assert!((e.coeff(0).unwrap() - d(0.0, 1.0)).norm() < 1e-14);
        assert!(e.coeff(1).unwrap().norm() < 1e-14);
    }

    #[test]
    fn second_expansion_of_squared_monomial() {
        let pencil = scalar_pencil(&[0.0, 0.0, 1.0]); // (z − 1)²
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        let e = laurent_second(&a, &pencil, 1).unwrap();
        assert_eq!(e.coeff(-2).unwrap()[(0, 0)], s(1.0));
        assert!(e.coeff(-1).unwrap().norm() < 1e-15);
        assert!(e.coeff(0).unwrap().norm() < 1e-15);
        assert!(e.coeff(1).unwrap().norm() < 1e-15);
    }

    #[test]
    fn second_expansion_of_diag_pencil() {
        let pencil = diag_pencil(&[&[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]);
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        let e = laurent_second(&a, &pencil, 0).unwrap();
        let d3 = |x: f64, y: f64, z: f64| CMat::from_diagonal(&CVec::from_vec(vec![s(x), s(y), s(z)]));
        assert!((e.coeff(-2).unwrap() - d3(1.0, 0.0, 0.0)).norm() < 1e-13);
        assert!((e.coeff(-1).unwrap() - d3(0.0, 1.0, 0.0)).norm() < 1e-13);
        assert!((e.coeff(0).unwrap() - d3(0.0, 0.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn wrong_order_errors() {
        let p1 = scalar_pencil(&[0.0, 1.0]);
        let a1 = analyze(&p1, &ComplementPolicy::Orthogonal, None).unwrap();
        assert!(matches!(
            laurent_second(&a1, &p1, 0),
            Err(Error::WrongOrder { expected: 2, actual: 1 })
        ));

        let p2 = scalar_pencil(&[0.0, 0.0, 1.0]);
        let a2 = analyze(&p2, &ComplementPolicy::Orthogonal, None).unwrap();
        assert!(matches!(
            laurent_simple(&a2, &p2, 0),
            Err(Error::WrongOrder { expected: 1, actual: 2 })
        ));

        let p0 = scalar_pencil(&[1.0]);
        let a0 = analyze(&p0, &ComplementPolicy::Orthogonal, None).unwrap();
        assert!(matches!(
            laurent_expansion(&a0, &p0, 0),
            Err(Error::WrongOrder { .. })
        ));
    }

    #[test]
    fn jordan_coupled_pencil_has_known_second_order_inverse() {
        // A(z) = [[w, 1], [0, w]] with w = z − c: not conjugate to any
        // constant-diagonal pencil. A⁻¹ = [[w⁻¹, −w⁻²], [0, w⁻¹]], so
        // N₋₂ = [[0,−1],[0,0]], N₋₁ = id, N_j = 0 for j ≥ 0.
        let center = c64(0.2, -0.7);
        let a0 = CMat::from_row_slice(2, 2, &[s(0.0), s(1.0), s(0.0), s(0.0)]);
        let pencil = TaylorPencil::new(center, vec![a0, crate::mat::eye(2)]).unwrap();
        for policy in [ComplementPolicy::Orthogonal, ComplementPolicy::SeededRandom(3)] {
            let a = analyze(&pencil, &policy, None).unwrap();
            assert_eq!(a.order, PoleOrder::Second);
            assert_eq!(a.dim_k(), 1);
            assert_eq!(a.dim_k1(), 1);
            let e = laurent_second(&a, &pencil, 2).unwrap();
            let n_minus2 =
                CMat::from_row_slice(2, 2, &[s(0.0), s(-1.0), s(0.0), s(0.0)]);
            assert!((e.coeff(-2).unwrap() - n_minus2).norm() < 1e-12);
            assert!((e.coeff(-1).unwrap() - crate::mat::eye(2)).norm() < 1e-12);
            for j in 0..=2 {
                assert!(e.coeff(j).unwrap().norm() < 1e-12, "N_{j} should vanish");
            }
        }
    }

    #[test]
    fn explicit_policy_verifies_and_reproduces_expansion() {
        let pencil = diag_pencil(&[&[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]);
        let reference = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        let sec = reference.second.as_ref().unwrap();

        let policy = ComplementPolicy::Explicit {
            range_complement: reference.range_complement.clone(),
            kernel_complement: reference.kernel_complement.clone(),
            r1_complement: Some(sec.r1_complement.clone()),
            k1_complement: Some(sec.k1_complement.clone()),
        };
        let a = analyze(&pencil, &policy, None).unwrap();
        let e = laurent_second(&a, &pencil, 1).unwrap();
        let e_ref = laurent_second(&reference, &pencil, 1).unwrap();
        for j in -2..=1 {
            assert!((e.coeff(j).unwrap() - e_ref.coeff(j).unwrap()).norm() < 1e-10);
        }

        // Range complement that does not complement ran A0.
        let bad_rc = ComplementPolicy::Explicit {
            range_complement: reference.range.clone(),
            kernel_complement: reference.kernel_complement.clone(),
            r1_complement: None,
            k1_complement: None,
        };
        assert!(matches!(
            analyze(&pencil, &bad_rc, None),
            Err(Error::NotComplementary(_))
        ));

        // R1-complement outside the range complement.
        let bad_r1c = ComplementPolicy::Explicit {
            range_complement: reference.range_complement.clone(),
            kernel_complement: reference.kernel_complement.clone(),
            r1_complement: Some(reference.range.clone()),
            k1_complement: Some(sec.k1_complement.clone()),
        };
        assert!(matches!(
            analyze(&pencil, &bad_r1c, None),
            Err(Error::NotComplementary(_))
        ));

        // Second-order pencil without the order-2 complements.
        let missing = ComplementPolicy::Explicit {
            range_complement: reference.range_complement.clone(),
            kernel_complement: reference.kernel_complement.clone(),
            r1_complement: None,
            k1_complement: None,
        };
        assert!(matches!(
            analyze(&pencil, &missing, None),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn identity_residual_examples() {
        let pencil = scalar_pencil(&[0.0, 1.0]);
        let a = analyze(&pencil, &ComplementPolicy::Orthogonal, None).unwrap();
        let e = laurent_simple(&a, &pencil, 3).unwrap();
        assert!(identity_residual(&e, &pencil, 0).unwrap() < 1e-14);
        assert!(identity_residual(&e, &pencil, -1).unwrap() < 1e-14);

        // Perturbing N₋₁ must show up at the scale of the perturbation.
        let mut perturbed = e.clone();
        perturbed.coeffs[0][(0, 0)] += s(1.0);
        let r = identity_residual(&perturbed, &pencil, 0).unwrap();
        assert!(r >= 0.9, "residual {r} should reflect the unit perturbation");

        assert!(matches!(
            identity_residual(&e, &pencil, 99),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn direct_sum_route_agrees_on_monomials() {
        assert_eq!(direct_sum_order(&scalar_pencil(&[1.0, 1.0]), None), Some(0));
        assert_eq!(direct_sum_order(&scalar_pencil(&[0.0, 1.0]), None), Some(1));
        assert_eq!(direct_sum_order(&scalar_pencil(&[0.0, 0.0, 1.0]), None), Some(2));
        assert_eq!(direct_sum_order(&scalar_pencil(&[0.0, 0.0, 0.0, 1.0]), None), None);
    }
}
