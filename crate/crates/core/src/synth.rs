//! Seeded construction of pencils with known pole structure, for
//! verification suites and benchmarks.
//!
//! The workhorse is the conjugated diagonal pencil A(z) = U D(z) V with
//! fixed invertible U, V and D(z) = diag((z−1)^{d_i} (1 + c_i (z−1))).
//! Its inverse is V⁻¹ D(z)⁻¹ U⁻¹, so the pole order is max d_i and every
//! Laurent coefficient at 1 is known in closed form:
//! the (i,i) entry of D⁻¹ contributes (−c_i)^{j+d_i} to the coefficient of
//! (z−1)^j for j ≥ −d_i.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::mat::{c64, CMat, C64};
use crate::pencil::TaylorPencil;

/// A synthetic instance: the pencil, its exact pole order at 1, and a
/// closure-free handle on the exact Laurent coefficients.
#[derive(Debug, Clone)]
pub struct SyntheticPencil {
    pub pencil: TaylorPencil,
    /// max d_i: the exact pole order of the inverse at 1 (0 = regular).
    pub pole_order: usize,
    u_inv: CMat,
    v_inv: CMat,
    exponents: Vec<usize>,
    factors: Vec<C64>,
}

impl SyntheticPencil {
    /// Exact Laurent coefficient N_j of the inverse at 1.
    pub fn exact_coefficient(&self, j: i64) -> CMat {
        let n = self.exponents.len();
        let mut diag = CMat::zeros(n, n);
        for i in 0..n {
            let d = self.exponents[i] as i64;
            if j >= -d {
                let power = (j + d) as u32;
                diag[(i, i)] = (-self.factors[i]).powu(power);
            }
        }
        &self.v_inv * diag * &self.u_inv
    }
}

/// Random complex matrix with moderate condition number (< ~10): a unitary
/// factor times a diagonal with entries in [0.5, 1.5].
pub fn random_well_conditioned(n: usize, rng: &mut ChaCha20Rng) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let q = qr.q();
    let scales = CMat::from_fn(n, n, |i, j| {
        if i == j {
            c64(0.5 + rng.gen::<f64>(), 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    q * scales
}

/// Builds U · diag((z−1)^{d_i} (1 + c_i (z−1))) · V around center 1 with
/// seeded U, V and slope factors |c_i| ≤ 0.3 (keeping all other det roots a
/// distance ≥ 10/3 from 1).
pub fn conjugated_diagonal(exponents: &[usize], seed: u64) -> SyntheticPencil {
    let n = exponents.len();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let u = random_well_conditioned(n, &mut rng);
    let v = random_well_conditioned(n, &mut rng);
    let factors: Vec<C64> = (0..n)
        .map(|_| {
            let r: f64 = 0.05 + 0.25 * rng.gen::<f64>();
            let phase: f64 = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            c64(r * phase.cos(), r * phase.sin())
        })
        .collect();

    // D(z) entry i: (z−1)^{d_i} + c_i (z−1)^{d_i+1}.
    let degree = exponents.iter().max().copied().unwrap_or(0) + 1;
    let mut coeffs = vec![CMat::zeros(n, n); degree + 1];
    for i in 0..n {
        let d = exponents[i];
        coeffs[d][(i, i)] = c64(1.0, 0.0);
        coeffs[d + 1][(i, i)] = factors[i];
    }
    let conjugated: Vec<CMat> = coeffs.into_iter().map(|c| &u * c * &v).collect();
    let pencil = TaylorPencil::new(c64(1.0, 0.0), conjugated).expect("valid synthetic pencil");

    SyntheticPencil {
        pencil,
        pole_order: exponents.iter().max().copied().unwrap_or(0),
        u_inv: u.lu().try_inverse().expect("U is well conditioned"),
        v_inv: v.lu().try_inverse().expect("V is well conditioned"),
        exponents: exponents.to_vec(),
        factors,
    }
}

/// Seeded exponent pattern of the requested pole order for an n-dimensional
/// instance: at least one entry reaches `order`, the rest draw from
/// {0, …, order}.
pub fn exponent_pattern(n: usize, order: usize, rng: &mut ChaCha20Rng) -> Vec<usize> {
    let mut exps: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=order)).collect();
    exps[rng.gen_range(0..n)] = order;
    exps
}
