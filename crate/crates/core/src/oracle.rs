//! Independent verification of Laurent coefficients by discrete contour
//! integration of the numerically inverted pencil.
//!
//! On a circle inside the annulus of validity the trapezoidal rule is
//! spectrally accurate, so 256 nodes put quadrature error far below the
//! tolerances the acceptance checks use.

use crate::error::{Error, Result};
use crate::mat::{c64, CMat, C64};
use crate::pencil::{spectrum_in_disk, TaylorPencil};

/// Condition-number ceiling for pencil evaluations on the contour.
pub const CONTOUR_COND_LIMIT: f64 = 1e12;

/// Default node count; spectral accuracy saturates well below target
/// tolerances for desk-scale pencils.
pub const DEFAULT_NODES: usize = 256;

/// A circular contour for Cauchy-coefficient extraction.
#[derive(Debug, Clone, Copy)]
pub struct ContourSpec {
    pub center: C64,
    pub radius: f64,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(center: C64, radius: f64, nodes: usize) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::InvalidContour(format!("radius must be positive, got {radius}")));
        }
        if nodes < 4 {
            return Err(Error::InvalidContour(format!("need at least 4 nodes, got {nodes}")));
        }
        Ok(Self {
            center,
            radius,
            nodes,
        })
    }

    /// Verifies against the pencil spectrum that no other singularity lies
    /// within twice the radius of the center.
    pub fn validate(&self, pencil: &TaylorPencil) -> Result<()> {
        let reach = self.center.norm() + 2.0 * self.radius + 1.0;
        let spectrum = spectrum_in_disk(pencil, reach)?;
        for root in spectrum {
            let dist = (root.value - self.center).norm();
            if dist > 1e-6 && dist < 2.0 * self.radius {
                return Err(Error::InvalidContour(format!(
                    "spectrum point {} at distance {dist:.3e} < 2·radius from the center",
                    root.value
                )));
            }
        }
        Ok(())
    }
}

/// Contour with the default radius: half the distance from `center` to the
/// nearest other root of det A(z), floored at 1e-3 and capped at 0.5.
pub fn default_contour(pencil: &TaylorPencil, center: C64) -> Result<ContourSpec> {
    let reach = center.norm() + 8.0;
    let spectrum = spectrum_in_disk(pencil, reach)?;
    let nearest_other = spectrum
        .iter()
        .map(|r| (r.value - center).norm())
        .filter(|&d| d > 1e-6)
        .fold(f64::INFINITY, f64::min);
    let radius = if nearest_other.is_finite() {
        (nearest_other / 2.0).clamp(1e-3, 0.5)
    } else {
        0.5
    };
    ContourSpec::new(center, radius, DEFAULT_NODES)
}

/// Inverts the pencil at every node once; coefficients for any j follow by
/// weighted sums. Fails with `SingularOnContour` when a node evaluation has
/// condition number ≥ 1e12.
struct NodeInverses {
    inverses: Vec<CMat>,
    radius: f64,
    nodes: usize,
}

fn invert_on_contour(pencil: &TaylorPencil, spec: &ContourSpec) -> Result<NodeInverses> {
    let mut inverses = Vec::with_capacity(spec.nodes);
    for t in 0..spec.nodes {
        let theta = 2.0 * std::f64::consts::PI * t as f64 / spec.nodes as f64;
        let z = spec.center + c64(spec.radius * theta.cos(), spec.radius * theta.sin());
        let a = pencil.evaluate(z);
        let sv = crate::svd::singular_values(&a);
        let (smax, smin) = (sv[0], sv[sv.len() - 1]);
        if smin <= 0.0 || smax / smin >= CONTOUR_COND_LIMIT {
            return Err(Error::SingularOnContour {
                at: z,
                cond: if smin > 0.0 { smax / smin } else { f64::INFINITY },
            });
        }
        let inv = a
            .lu()
            .try_inverse()
            .ok_or(Error::SingularOnContour { at: z, cond: f64::INFINITY })?;
        inverses.push(inv);
    }
    Ok(NodeInverses {
        inverses,
        radius: spec.radius,
        nodes: spec.nodes,
    })
}

impl NodeInverses {
    fn coefficient(&self, j: i64) -> CMat {
        let n = self.inverses[0].nrows();
        let mut acc = CMat::zeros(n, n);
        for (t, inv) in self.inverses.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * t as f64 / self.nodes as f64;
            // (z − z₀)^{−j} on the circle: r^{−j} e^{−i j θ}.
            let w = c64((-(j as f64) * theta).cos(), (-(j as f64) * theta).sin())
                * self.radius.powi(-(j as i32));
            acc += inv.map(|e| e * w);
        }
        acc.map(|e| e / self.nodes as f64)
    }
}

/// Trapezoidal approximation of (2πi)⁻¹ ∮ A(z)⁻¹ (z−z₀)^{−j−1} dz over the
/// circle, i.e. the j-th Laurent coefficient of the inverse at the center.
pub fn contour_coefficient(pencil: &TaylorPencil, spec: &ContourSpec, j: i64) -> Result<CMat> {
    Ok(invert_on_contour(pencil, spec)?.coefficient(j))
}

/// All coefficients for j in `[j_min, j_max]` from a single sweep of node
/// inversions; `result[i]` is the coefficient for `j_min + i`.
pub fn contour_coefficients(
    pencil: &TaylorPencil,
    spec: &ContourSpec,
    j_min: i64,
    j_max: i64,
) -> Result<Vec<CMat>> {
    let nodes = invert_on_contour(pencil, spec)?;
    Ok((j_min..=j_max).map(|j| nodes.coefficient(j)).collect())
}

/// Pole order from principal-coefficient decay: the largest m ≤ max_m whose
/// coefficient norm exceeds `tol` times the largest computed coefficient
/// norm; 0 when every principal coefficient vanishes at that scale.
pub fn detect_order(
    pencil: &TaylorPencil,
    spec: &ContourSpec,
    max_m: usize,
    tol: f64,
) -> Result<usize> {
    let nodes = invert_on_contour(pencil, spec)?;
    let coeffs: Vec<(i64, f64)> = (-(max_m as i64)..=0)
        .map(|j| (j, nodes.coefficient(j).norm()))
        .collect();
    let scale = coeffs.iter().map(|&(_, n)| n).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Ok(0);
    }
    for &(j, norm) in coeffs.iter() {
        if norm > tol * scale {
            return Ok((-j) as usize);
        }
    }
    Ok(0)
}
