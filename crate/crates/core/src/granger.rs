//! Autoregressive layer: classify I(1)/I(2) models through the pencil
//! singularity at one, build the representation operators and MA
//! coefficients, simulate paths and cross-validate the two constructions.
//!
//! An AR(p) law Σ_j A_{j,(0)} X_{t−j} = ε_t (A_{0,(0)} = id, A_{j,(0)} = −Φ_j)
//! with a simple pole of A(z)⁻¹ at one decomposes as
//!   X_t = τ₀ − N_{−1} Σ_s ε_s + ν_t,
//! and with a second-order pole as
//!   X_t = τ₀ + τ₁ t + N_{−2} ΣΣ ε − N_{−1} Σ ε + ν_t,
//! where ν_t = Σ_j Φ_j ε_{t−j} is driven by the Taylor coefficients of the
//! holomorphic part N^H at 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::laurent::{
    analyze, laurent_expansion, ComplementPolicy, LaurentExpansion, PoleAnalysis,
};
use crate::mat::{all_finite, c64, eye, hermitian_defect, CMat, CVec, C64};
use crate::pencil::{check_assumption2, Assumption2Report, TaylorPencil};

/// Hard cap on adaptive MA truncation.
pub const MA_TRUNCATION_CAP: usize = 10_000;

/// Default relative threshold for MA tail truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// An autoregressive model X_t = Σ_{j=1}^p Φ_j X_{t−j} + ε_t.
#[derive(Debug, Clone)]
pub struct ARModel {
    dim: usize,
    phi: Vec<CMat>,
}

impl ARModel {
    pub fn new(phi: Vec<CMat>) -> Result<Self> {
        if phi.is_empty() {
            return Err(Error::InvalidInput("AR order p must be >= 1".into()));
        }
        let dim = phi[0].nrows();
        if dim == 0 {
            return Err(Error::InvalidInput("AR dimension must be >= 1".into()));
        }
        for (j, m) in phi.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidInput(format!(
                    "Phi_{} has shape {}x{}, expected {dim}x{dim}",
                    j + 1,
                    m.nrows(),
                    m.ncols()
                )));
            }
            if !all_finite(m) {
                return Err(Error::InvalidInput(format!("Phi_{} has non-finite entries", j + 1)));
            }
        }
        Ok(Self { dim, phi })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// AR order p.
    pub fn order(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[CMat] {
        &self.phi
    }
}

/// The AR law as a pencil around 0: coefficients [id, −Φ₁, …, −Φ_p].
pub fn pencil_from_ar(model: &ARModel) -> TaylorPencil {
    let mut coeffs = Vec::with_capacity(model.order() + 1);
    coeffs.push(eye(model.dim));
    for phi in &model.phi {
        coeffs.push(phi.map(|e| -e));
    }
    TaylorPencil::new(c64(0.0, 0.0), coeffs).expect("AR pencil is structurally valid")
}

/// Innovation specification: Hermitian PSD covariance plus an RNG seed.
#[derive(Debug, Clone)]
pub struct NoiseSpec {
    covariance: CMat,
    seed: u64,
}

/// Hermitian PSD square root via the Jacobi SVD: singular vectors of a
/// Hermitian matrix are eigenvectors (with signs recovered by Rayleigh
/// quotients), and the clamped square root self-validates by S·S ≈ C.
fn hermitian_sqrt_psd(c: &CMat) -> Result<CMat> {
    let n = c.nrows();
    let svd = crate::svd::svd_jacobi(c);
    let mut sqrt = CMat::zeros(n, n);
    for j in 0..n {
        let v = svd.v.column(j).into_owned();
        let rayleigh = (v.adjoint() * c * &v)[(0, 0)].re;
        if rayleigh > 0.0 {
            sqrt += (&v * v.adjoint()).map(|e| e * rayleigh.sqrt());
        }
    }
    let defect = (&sqrt * &sqrt - c).norm();
    if defect > 1e-9 * c.norm().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "covariance is not positive semidefinite (sqrt defect {defect:.3e})"
        )));
    }
    Ok(sqrt)
}

impl NoiseSpec {
    pub fn new(covariance: CMat, seed: u64) -> Result<Self> {
        let n = covariance.nrows();
        if covariance.ncols() != n || n == 0 {
            return Err(Error::InvalidInput("covariance must be square and nonempty".into()));
        }
        if !all_finite(&covariance) {
            return Err(Error::InvalidInput("covariance has non-finite entries".into()));
        }
        let scale = covariance.norm().max(1.0);
        if hermitian_defect(&covariance) > 1e-10 * scale {
            return Err(Error::InvalidInput("covariance is not Hermitian at tolerance 1e-10".into()));
        }
        hermitian_sqrt_psd(&covariance)?;
        Ok(Self { covariance, seed })
    }

    pub fn covariance(&self) -> &CMat {
        &self.covariance
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Hermitian square root, clamping eigenvalue noise at zero.
    fn factor(&self) -> CMat {
        hermitian_sqrt_psd(&self.covariance).expect("validated at construction")
    }
}

/// Classification outcome: integration order d, the principal Laurent
/// coefficients at one, and the full analysis behind them.
#[derive(Debug, Clone)]
pub struct Classification {
    pub d: usize,
    pub n_minus1: CMat,
    /// Zero matrix when d = 1.
    pub n_minus2: CMat,
    pub expansion: LaurentExpansion,
    pub analysis: PoleAnalysis,
    pub pencil_at_one: TaylorPencil,
    pub assumption: Assumption2Report,
}

/// Gate + classify: check the unit-root assumption, require A(1) singular,
/// recenter at one and run the pole analysis.
pub fn classify_integration(
    model: &ARModel,
    policy: &ComplementPolicy,
    rank_tol: Option<f64>,
) -> Result<Classification> {
    let pencil0 = pencil_from_ar(model);
    let assumption = check_assumption2(&pencil0)?;
    if !assumption.pass {
        return Err(Error::AssumptionViolated {
            roots: assumption.offending.iter().map(|r| r.value).collect(),
        });
    }
    if assumption.unit_root_multiplicity == 0 {
        return Err(Error::NotSingularAtOne);
    }
    let pencil_at_one = pencil0.recenter(c64(1.0, 0.0));
    let analysis = analyze(&pencil_at_one, policy, rank_tol)?;
    if analysis.order.as_usize() == 0 {
        // Spectrum said singular at one but the rank test disagreed; treat
        // as the gate error rather than an internal inconsistency.
        return Err(Error::NotSingularAtOne);
    }
    let expansion = laurent_expansion(&analysis, &pencil_at_one, 2)?;
    let d = analysis.order.as_usize();
    let n = model.dim();
    let n_minus1 = expansion.coeff(-1).cloned().unwrap_or_else(|| CMat::zeros(n, n));
    let n_minus2 = if d == 2 {
        expansion.coeff(-2).cloned().unwrap_or_else(|| CMat::zeros(n, n))
    } else {
        CMat::zeros(n, n)
    };
    Ok(Classification {
        d,
        n_minus1,
        n_minus2,
        expansion,
        analysis,
        pencil_at_one,
        assumption,
    })
}

/// Taylor coefficients T_0 … T_{count−1} of A(z)⁻¹ at 0 by power-series
/// inversion; requires A(0) invertible.
fn taylor_inverse_at_zero(pencil_at_zero: &TaylorPencil, count: usize) -> Result<Vec<CMat>> {
    let n = pencil_at_zero.dim();
    let a0_inv = pencil_at_zero
        .coeff_or_zero(0)
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("A(0) is singular; Taylor inversion at 0 undefined".into()))?;
    let p = pencil_at_zero.degree();
    let mut out: Vec<CMat> = Vec::with_capacity(count);
    for k in 0..count {
        let mut rhs = if k == 0 { eye(n) } else { CMat::zeros(n, n) };
        for j in 1..=p.min(k) {
            rhs -= &out[k - j] * pencil_at_zero.coeff_or_zero(j);
        }
        out.push(rhs * &a0_inv);
    }
    Ok(out)
}

/// MA coefficients Φ_0 … Φ_{j_out}: Taylor coefficients at 0 of the
/// holomorphic part N^H(z) = A(z)⁻¹ − Σ_i N_{−i}(z−1)^{−i}. Computed by
/// power-series inversion of A at 0 minus the principal part re-expanded at
/// 0 ([zʲ](z−1)⁻¹ = −1, [zʲ](z−1)⁻² = j+1); stable for every model that
/// passes the unit-root gate, unlike the alternating transform of the
/// coefficients around one (see `ma_from_expansion`).
pub fn ma_coefficients(
    pencil_at_zero: &TaylorPencil,
    expansion_at_one: &LaurentExpansion,
    j_out: usize,
) -> Result<Vec<CMat>> {
    let n = pencil_at_zero.dim();
    let m = expansion_at_one.order();
    let n_minus1 = expansion_at_one
        .coeff(-1)
        .cloned()
        .unwrap_or_else(|| CMat::zeros(n, n));
    let n_minus2 = if m >= 2 {
        expansion_at_one
            .coeff(-2)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(n, n))
    } else {
        CMat::zeros(n, n)
    };
    let taylor = taylor_inverse_at_zero(pencil_at_zero, j_out + 1)?;
    Ok(taylor
        .into_iter()
        .enumerate()
        .map(|(j, t)| t + &n_minus1 - n_minus2.map(|e| e * (j as f64 + 1.0)))
        .collect())
}

/// Weighting for the around-one re-expansion transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaWeighting {
    /// Binomial C(k, j): the coefficient a change of expansion point yields.
    Binomial,
    /// Falling factorial k(k−1)⋯(k−j+1) without the 1/j! normalization.
    FallingFactorial,
}

/// MA coefficients by the alternating transform of the around-one
/// coefficients: Φ_j = Σ_{k≥j} (−1)^{k−j} w(k,j) N_k. Only valid when the
/// around-one coefficients decay; the tail is monitored term by term and
/// `TailNotConverged` is returned when the largest remaining term has not
/// fallen below `tail_tol` relative to the result scale.
pub fn ma_from_expansion(
    expansion: &LaurentExpansion,
    j_out: usize,
    tail_tol: f64,
    weighting: MaWeighting,
) -> Result<Vec<CMat>> {
    let n = expansion.dim();
    let k_max = expansion.j_max();
    let mut out = Vec::with_capacity(j_out + 1);
    for j in 0..=j_out as i64 {
        let mut acc = CMat::zeros(n, n);
        let mut weight = 1.0f64; // w(j, j) for both weightings is 1 (j ≥ 1) / 1 (j = 0)
        if weighting == MaWeighting::FallingFactorial && j >= 1 {
            // pi_j(j) = j!
            weight = (1..=j).map(|i| i as f64).product();
        }
        let mut scale = 0.0f64;
        let mut last_term = f64::INFINITY;
        let mut converged = false;
        for k in j..=k_max {
            let nk = expansion.coeff(k).expect("coefficient in range");
            let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
            let term = nk.map(|e| e * sign * weight);
            last_term = term.norm();
            acc += term;
            scale = scale.max(acc.norm());
            // Advance the weight to k+1.
            weight = match weighting {
                // C(k+1, j) = C(k, j) (k+1) / (k+1−j)
                MaWeighting::Binomial => weight * (k + 1) as f64 / (k + 1 - j) as f64,
                // pi_j(k+1) = pi_j(k) (k+1) / (k+1−j)
                MaWeighting::FallingFactorial => weight * (k + 1) as f64 / (k + 1 - j) as f64,
            };
            if last_term <= tail_tol * scale.max(1e-300) && k > j {
                converged = true;
                break;
            }
        }
        if !converged && last_term > tail_tol * scale.max(1e-300) {
            return Err(Error::TailNotConverged {
                tol: tail_tol,
                cap: k_max as usize,
            });
        }
        out.push(acc);
    }
    Ok(out)
}

/// Representation operators: integration order, principal coefficients and
/// the truncated MA filter for the stationary part.
#[derive(Debug, Clone)]
pub struct Representation {
    pub d: usize,
    pub n_minus1: CMat,
    pub n_minus2: CMat,
    /// Φ_0 … Φ_J.
    pub ma: Vec<CMat>,
    /// Geometric extrapolation of the discarded tail mass.
    pub tail_bound: f64,
}

impl Representation {
    /// Truncation index J.
    pub fn truncation(&self) -> usize {
        self.ma.len() - 1
    }
}

/// Builds the representation for a classified model, truncating the MA
/// series when ‖Φ_j‖ falls below `tail_tol · max_k ‖Φ_k‖` (hard cap 10 000).
pub fn build_representation(
    model: &ARModel,
    classification: &Classification,
    tail_tol: f64,
) -> Result<Representation> {
    let pencil0 = pencil_from_ar(model);
    let n = model.dim();
    let taylor_full = |count: usize| taylor_inverse_at_zero(&pencil0, count);

    // Grow in blocks until the tail is below tolerance.
    let mut count = 16usize;
    loop {
        let taylor = taylor_full(count)?;
        let mut ma: Vec<CMat> = Vec::with_capacity(count);
        let mut max_norm = 0.0f64;
        let mut cut: Option<usize> = None;
        for (j, t) in taylor.iter().enumerate() {
            let phi = t + &classification.n_minus1
                - classification.n_minus2.map(|e| e * (j as f64 + 1.0));
            let norm = phi.norm();
            ma.push(phi);
            max_norm = max_norm.max(norm);
            if j > 0 && norm <= tail_tol * max_norm.max(1e-300) {
                cut = Some(j);
                break;
            }
        }
        if let Some(j_cut) = cut {
            ma.truncate(j_cut + 1);
            // Tail estimate from the last observed decay ratio.
            let last = ma[ma.len() - 1].norm();
            let prev = ma[ma.len().saturating_sub(2)].norm();
            let rho = if prev > 0.0 { (last / prev).min(0.99) } else { 0.0 };
            let tail_bound = if rho > 0.0 { last * rho / (1.0 - rho) } else { last };
            return Ok(Representation {
                d: classification.d,
                n_minus1: classification.n_minus1.clone(),
                n_minus2: if classification.d == 2 {
                    classification.n_minus2.clone()
                } else {
                    CMat::zeros(n, n)
                },
                ma,
                tail_bound,
            });
        }
        if count >= MA_TRUNCATION_CAP {
            return Err(Error::TailNotConverged {
                tol: tail_tol,
                cap: MA_TRUNCATION_CAP,
            });
        }
        count = (count * 2).min(MA_TRUNCATION_CAP);
    }
}

/// A simulated trajectory: values X_0 … X_T, the innovation draws that
/// produced it (including `burnin` pre-sample draws) and the pre-sample
/// state.
#[derive(Debug, Clone)]
pub struct SamplePath {
    pub dim: usize,
    pub t_len: usize,
    pub burnin: usize,
    /// X_0 … X_T.
    pub values: Vec<CVec>,
    /// ε_{1−burnin} … ε_T.
    pub innovations: Vec<CVec>,
    /// The p pre-sample values feeding the first recursion step.
    pub initial: Vec<CVec>,
}

impl SamplePath {
    /// ε_t for t ∈ [1−burnin, T].
    pub fn innovation(&self, t: i64) -> &CVec {
        let idx = t - (1 - self.burnin as i64);
        &self.innovations[idx as usize]
    }
}

/// Forward AR recursion with seeded Gaussian innovations of the given
/// covariance. `initial` supplies the p pre-sample vectors (zeros when
/// omitted); the recursion starts `burnin` steps before t = 0.
pub fn simulate_ar(
    model: &ARModel,
    noise: &NoiseSpec,
    t_len: usize,
    burnin: usize,
    initial: Option<&[CVec]>,
) -> Result<SamplePath> {
    let n = model.dim();
    let p = model.order();
    if noise.covariance.nrows() != n {
        return Err(Error::InvalidInput(format!(
            "covariance dimension {} does not match model dimension {n}",
            noise.covariance.nrows()
        )));
    }
    let initial: Vec<CVec> = match initial {
        Some(values) => {
            if values.len() != p {
                return Err(Error::InvalidInput(format!(
                    "need {p} pre-sample vectors, got {}",
                    values.len()
                )));
            }
            for v in values {
                if v.len() != n {
                    return Err(Error::InvalidInput("pre-sample vector dimension mismatch".into()));
                }
            }
            values.to_vec()
        }
        None => vec![CVec::zeros(n); p],
    };

    let factor = noise.factor();
    let mut rng = ChaCha20Rng::seed_from_u64(noise.seed);
    let total = burnin + t_len; // draws for t = 1−burnin … T
    let mut innovations = Vec::with_capacity(total);
    for _ in 0..total {
        let xi = CVec::from_fn(n, |_, _| c64(rng.sample(StandardNormal), 0.0));
        innovations.push(&factor * xi);
    }

    // history[i] is X at time t0 − p + i initially; slide forward.
    let mut history = initial.clone();
    let mut path_all: Vec<CVec> = Vec::with_capacity(total);
    for (step, eps) in innovations.iter().enumerate() {
        let mut x = eps.clone();
        for (j, phi) in model.phi.iter().enumerate() {
            // X_{t−(j+1)}: the most recent history entry is the last one.
            let idx = history.len() - 1 - j;
            x += phi * &history[idx];
        }
        history.push(x.clone());
        if history.len() > p {
            history.remove(0);
        }
        path_all.push(x);
        let _ = step;
    }

    // path_all[i] is X at t = 1−burnin+i; keep t = 0 … T. X_0 is either the
    // last pre-sample (burnin = 0 ⇒ X_0 = initial.last) or a computed value.
    let mut values = Vec::with_capacity(t_len + 1);
    if burnin == 0 {
        values.push(
            initial
                .last()
                .cloned()
                .unwrap_or_else(|| CVec::zeros(n)),
        );
    } else {
        values.push(path_all[burnin - 1].clone());
    }
    for t in 1..=t_len {
        values.push(path_all[burnin + t - 1].clone());
    }

    Ok(SamplePath {
        dim: n,
        t_len,
        burnin,
        values,
        innovations,
        initial,
    })
}

fn nu_at(rep: &Representation, path: &SamplePath, t: i64) -> Result<CVec> {
    let j_trunc = rep.truncation() as i64;
    let earliest = 1 - path.burnin as i64;
    if t - j_trunc < earliest {
        return Err(Error::InsufficientHistory {
            needed: (j_trunc - t + 1) as usize,
            available: path.burnin,
        });
    }
    let mut nu = CVec::zeros(path.dim);
    for j in 0..=j_trunc {
        nu += &rep.ma[j as usize] * path.innovation(t - j);
    }
    Ok(nu)
}

/// Initial-value terms solved from matched initial conditions: equate the
/// representation to the AR path at t = 0 (and t = 1 for d = 2).
pub fn match_initial_terms(rep: &Representation, ar: &SamplePath) -> Result<(CVec, Option<CVec>)> {
    let nu0 = nu_at(rep, ar, 0)?;
    let tau0 = &ar.values[0] - nu0;
    if rep.d == 1 {
        return Ok((tau0, None));
    }
    let nu1 = nu_at(rep, ar, 1)?;
    let eps1 = ar.innovation(1).clone();
    let tau1 =
        &ar.values[1] - &tau0 - &rep.n_minus2 * &eps1 + &rep.n_minus1 * &eps1 - nu1;
    Ok((tau0, Some(tau1)))
}

/// Builds the representation path
/// X_t = τ₀ (+ τ₁ t) + N_{−2} ΣΣε − N_{−1} Σε + ν_t for t = 0 … T, reusing
/// the innovations of `driver` (typically the AR path being validated).
pub fn simulate_representation(
    rep: &Representation,
    driver: &SamplePath,
    tau0: &CVec,
    tau1: Option<&CVec>,
) -> Result<Vec<CVec>> {
    let n = driver.dim;
    let mut out = Vec::with_capacity(driver.t_len + 1);
    let mut cum1 = CVec::zeros(n);
    let mut cum2 = CVec::zeros(n);
    for t in 0..=driver.t_len as i64 {
        if t >= 1 {
            cum1 += driver.innovation(t);
            cum2 += &cum1;
        }
        let mut x = tau0.clone() + nu_at(rep, driver, t)?;
        if let Some(tau1) = tau1 {
            x += tau1.map(|e| e * t as f64);
        }
        if rep.d == 2 {
            x += &rep.n_minus2 * &cum2;
        }
        x -= &rep.n_minus1 * &cum1;
        out.push(x);
    }
    Ok(out)
}

/// Cross-validation outcome: the max per-entry residual after removing the
/// homogeneous solution (a constant for d = 1, an affine trend for d = 2)
/// from the difference of the two paths.
#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub d: usize,
    pub t_len: usize,
    pub max_residual: f64,
    pub ma_truncation: usize,
    pub tail_bound: f64,
}

/// Simulates the AR recursion and the representation with shared
/// innovations and reports the residual between them.
pub fn cross_validate(
    model: &ARModel,
    rep: &Representation,
    noise: &NoiseSpec,
    t_len: usize,
    burnin: usize,
) -> Result<CrossValidation> {
    let ar = simulate_ar(model, noise, t_len, burnin, None)?;
    let (tau0, tau1) = match_initial_terms(rep, &ar)?;
    let rep_path = simulate_representation(rep, &ar, &tau0, tau1.as_ref())?;

    let diffs: Vec<CVec> = ar
        .values
        .iter()
        .zip(rep_path.iter())
        .map(|(a, b)| a - b)
        .collect();
    let max_residual = if rep.d == 1 {
        residual_after_constant_fit(&diffs)
    } else {
        residual_after_affine_fit(&diffs)
    };
    Ok(CrossValidation {
        d: rep.d,
        t_len,
        max_residual,
        ma_truncation: rep.truncation(),
        tail_bound: rep.tail_bound,
    })
}

fn residual_after_constant_fit(diffs: &[CVec]) -> f64 {
    let n = diffs[0].len();
    let len = diffs.len() as f64;
    let mut worst = 0.0f64;
    for i in 0..n {
        let mean: C64 = diffs.iter().map(|d| d[i]).sum::<C64>() / len;
        for d in diffs {
            worst = worst.max((d[i] - mean).norm());
        }
    }
    worst
}

fn residual_after_affine_fit(diffs: &[CVec]) -> f64 {
    let n = diffs[0].len();
    let len = diffs.len() as f64;
    let t_mean = (len - 1.0) / 2.0;
    let denom: f64 = (0..diffs.len())
        .map(|t| (t as f64 - t_mean).powi(2))
        .sum();
    let mut worst = 0.0f64;
    for i in 0..n {
        let y_mean: C64 = diffs.iter().map(|d| d[i]).sum::<C64>() / len;
        let slope: C64 = diffs
            .iter()
            .enumerate()
            .map(|(t, d)| (d[i] - y_mean) * (t as f64 - t_mean))
            .sum::<C64>()
            / denom;
        let offset = y_mean - slope * t_mean;
        for (t, d) in diffs.iter().enumerate() {
            worst = worst.max((d[i] - offset - slope * t as f64).norm());
        }
    }
    worst
}

/// Coefficients of (1−z)^d N(z) as a power series in z, truncated at J + d:
/// the filter whose output Δ^d X_t should reproduce with matched ε.
pub fn differenced_filter_coeffs(rep: &Representation) -> Vec<CMat> {
    let n = rep.n_minus1.nrows();
    let j_out = rep.ma.len() + rep.d;
    let phi = |j: i64| -> CMat {
        if j < 0 || j as usize >= rep.ma.len() {
            CMat::zeros(n, n)
        } else {
            rep.ma[j as usize].clone()
        }
    };
    let mut out = Vec::with_capacity(j_out);
    for j in 0..j_out as i64 {
        let mut c = match rep.d {
            1 => phi(j) - phi(j - 1),
            _ => phi(j) - phi(j - 1).map(|e| e * 2.0) + phi(j - 2),
        };
        if j == 0 {
            c -= &rep.n_minus1;
            if rep.d == 2 {
                c += &rep.n_minus2;
            }
        }
        if j == 1 && rep.d == 2 {
            c += &rep.n_minus1;
        }
        out.push(c);
    }
    out
}
