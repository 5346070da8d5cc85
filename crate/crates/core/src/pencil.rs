//! Polynomial matrix pencils: evaluation, exact recentering, spectrum in a
//! disk, and the unit-root assumption check for the autoregressive layer.

use crate::error::{Error, Result};
use crate::mat::{all_finite, c64, CMat, C64};
use crate::polyroots::{polynomial_roots, trim_leading, Root};

/// Boundary slack for "inside the closed disk" decisions.
pub const DISK_BOUNDARY_TOL: f64 = 1e-8;

/// Tolerance for "this root equals one" in the assumption check.
pub const UNIT_ROOT_TOL: f64 = 1e-8;

/// A matrix polynomial A(z) = Σ_j A_j (z − z₀)^j stored by its Taylor
/// coefficients around `center`.
#[derive(Debug, Clone)]
pub struct TaylorPencil {
    center: C64,
    coeffs: Vec<CMat>,
}

impl TaylorPencil {
    /// Validates shapes and finiteness: all coefficients square of one size,
    /// at least one nonzero.
    pub fn new(center: C64, coeffs: Vec<CMat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("pencil needs at least one coefficient".into()));
        }
        let n = coeffs[0].nrows();
        if n == 0 {
            return Err(Error::InvalidInput("pencil dimension must be >= 1".into()));
        }
        for (j, a) in coeffs.iter().enumerate() {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::InvalidInput(format!(
                    "coefficient {j} has shape {}x{}, expected {n}x{n}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            if !all_finite(a) {
                return Err(Error::InvalidInput(format!("coefficient {j} has non-finite entries")));
            }
        }
        if coeffs.iter().all(|a| a.norm() == 0.0) {
            return Err(Error::InvalidInput("all pencil coefficients are zero".into()));
        }
        Ok(Self { center, coeffs })
    }

    /// 1×1 pencil from scalar coefficients; handy for tests and examples.
    pub fn scalar(center: C64, values: &[C64]) -> Result<Self> {
        Self::new(
            center,
            values
                .iter()
                .map(|&v| CMat::from_element(1, 1, v))
                .collect(),
        )
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    /// Polynomial degree p (index of the last stored coefficient).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Option<&CMat> {
        self.coeffs.get(j)
    }

    /// A_j, zero-padded beyond the polynomial degree.
    pub fn coeff_or_zero(&self, j: usize) -> CMat {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.dim(), self.dim()))
    }

    /// Horner evaluation of A(z).
    pub fn evaluate(&self, z: C64) -> CMat {
        let w = z - self.center;
        let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
        for j in (0..self.coeffs.len() - 1).rev() {
            acc = acc.map(|e| e * w) + &self.coeffs[j];
        }
        acc
    }

    /// Exact Taylor recentering: B_j = Σ_{m≥j} C(m,j) A_m (c − z₀)^{m−j},
    /// so that the recentered pencil evaluates identically.
    pub fn recenter(&self, new_center: C64) -> TaylorPencil {
        let delta = new_center - self.center;
        let p = self.degree();
        let n = self.dim();
        let mut out = vec![CMat::zeros(n, n); p + 1];
        for (j, out_j) in out.iter_mut().enumerate() {
            // binom(m, j) * delta^{m-j}, built multiplicatively in m.
            let mut binom = 1.0f64;
            let mut shift = c64(1.0, 0.0);
            for m in j..=p {
                if m > j {
                    binom = binom * m as f64 / (m - j) as f64;
                    shift *= delta;
                }
                let w = shift * binom;
                *out_j += self.coeffs[m].map(|e| e * w);
            }
        }
        TaylorPencil {
            center: new_center,
            coeffs: out,
        }
    }
}

/// A spectrum point: root of det A(z) with clustered multiplicity.
pub type SpectrumPoint = Root;

/// The scalar polynomial det A(z) in powers of z, recovered exactly by DFT
/// interpolation on the unit circle (degree ≤ n·p < node count).
fn determinant_polynomial(pencil: &TaylorPencil) -> Result<Vec<C64>> {
    let at_origin = if pencil.center.norm() == 0.0 {
        pencil.clone()
    } else {
        pencil.recenter(c64(0.0, 0.0))
    };
    let n = at_origin.dim();
    let deg_bound = n * at_origin.degree();
    let nodes = (2 * (deg_bound + 1)).next_power_of_two().max(8);

    let mut dets = Vec::with_capacity(nodes);
    let mut mat_scale = 0.0f64;
    for k in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let z = c64(theta.cos(), theta.sin());
        let a = at_origin.evaluate(z);
        mat_scale = mat_scale.max(a.norm());
        dets.push(a.lu().determinant());
    }

    let det_scale = dets.iter().map(|d| d.norm()).fold(0.0f64, f64::max);
    // Rough magnitude a nonzero determinant of this pencil should reach.
    let typical = (mat_scale / (n as f64).sqrt()).powi(n as i32).max(f64::MIN_POSITIVE);
    if det_scale <= 1e-12 * typical {
        return Err(Error::IdenticallySingular);
    }

    let mut coeffs = vec![c64(0.0, 0.0); deg_bound + 1];
    for (j, c) in coeffs.iter_mut().enumerate() {
        let mut acc = c64(0.0, 0.0);
        for (k, det) in dets.iter().enumerate() {
            let theta = -2.0 * std::f64::consts::PI * (j * k % nodes) as f64 / nodes as f64;
            acc += det * c64(theta.cos(), theta.sin());
        }
        *c = acc / nodes as f64;
    }
    Ok(coeffs)
}

/// All roots of det A(z) = 0 with |z| ≤ radius (closed disk, boundary slack
/// 1e-8), with multiplicities. Roots are found from the interpolated scalar
/// determinant; multiple roots are clustered and centroid-polished, so roots
/// closer together than ~1e-3 merge into one cluster.
pub fn spectrum_in_disk(pencil: &TaylorPencil, radius: f64) -> Result<Vec<SpectrumPoint>> {
    let coeffs = determinant_polynomial(pencil)?;
    let trimmed = trim_leading(&coeffs, 1e-11);
    if trimmed.len() <= 1 {
        // Constant nonzero determinant: empty spectrum.
        return Ok(Vec::new());
    }
    let mut roots = polynomial_roots(trimmed);
    roots.retain(|r| r.value.norm() <= radius + DISK_BOUNDARY_TOL);
    Ok(roots)
}

/// Outcome of the unit-root spectrum gate: the pencil must be invertible on
/// the closed unit disk except exactly at 1.
#[derive(Debug, Clone)]
pub struct Assumption2Report {
    pub pass: bool,
    /// Roots in the closed unit disk that are not equal to 1.
    pub offending: Vec<SpectrumPoint>,
    /// Multiplicity of the root at 1 (0 when A(1) is invertible).
    pub unit_root_multiplicity: usize,
    /// Every root found in the closed unit disk.
    pub in_disk: Vec<SpectrumPoint>,
}

/// Checks that every root of det A(z) in the closed unit disk equals 1
/// (within 1e-8). The pencil is recentered to 0 internally if needed.
pub fn check_assumption2(pencil: &TaylorPencil) -> Result<Assumption2Report> {
    let in_disk = spectrum_in_disk(pencil, 1.0)?;
    let mut offending = Vec::new();
    let mut unit_mult = 0;
    for r in &in_disk {
        if (r.value - c64(1.0, 0.0)).norm() <= UNIT_ROOT_TOL {
            unit_mult += r.multiplicity;
        } else {
            offending.push(*r);
        }
    }
    Ok(Assumption2Report {
        pass: offending.is_empty(),
        offending,
        unit_root_multiplicity: unit_mult,
        in_disk,
    })
}
