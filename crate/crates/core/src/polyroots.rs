//! Roots of scalar complex polynomials by Aberth-Ehrlich simultaneous
//! iteration, with multiplicity-aware clustering.
//!
//! Multiple roots of a backward-stable root finder split into a star of
//! simple roots at distance ~eps^(1/m); the cluster centroid cancels the
//! star to ~eps, and a modified Newton step (z <- z - m p/p') polishes it.
//! Distinct roots closer than ~1e-3·max(1,|z|) are reported as one cluster;
//! fine for the desk-scale pencils this crate targets.

use num_complex::Complex;

use crate::mat::{c64, C64};

/// A root together with its clustered multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

const MAX_ABERTH_ITERS: usize = 600;
const MAX_POLISH_ITERS: usize = 60;
const CLUSTER_TOL: f64 = 1e-3;

/// p(z) and p'(z) by Horner, plus s(|z|) = Σ|c_k||z|^k for the stopping rule.
fn eval_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64, f64) {
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    let mut s = 0.0f64;
    let az = z.norm();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        s = s * az + c.norm();
    }
    (p, dp, s)
}

/// Drops trailing (leading-power) coefficients below `rel_tol` relative to
/// the largest coefficient. Returns an empty slice if everything is tiny.
pub fn trim_leading(coeffs: &[C64], rel_tol: f64) -> &[C64] {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return &coeffs[..0];
    }
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1].norm() <= rel_tol * scale {
        end -= 1;
    }
    &coeffs[..end]
}

/// All roots of `c[0] + c[1] z + ... + c[d] z^d` (leading coefficient must be
/// nontrivial relative to the rest), clustered by multiplicity.
/// Deterministic: no randomness is involved.
pub fn polynomial_roots(coeffs: &[C64]) -> Vec<Root> {
    let coeffs = trim_leading(coeffs, 1e-13);
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let d = coeffs.len() - 1;

    // Factor out exact roots at the origin so the initial circle is sane.
    let zero_mult = coeffs
        .iter()
        .take_while(|c| c.norm() == 0.0)
        .count()
        .min(d);
    let reduced: Vec<C64> = coeffs[zero_mult..].to_vec();
    let dr = reduced.len() - 1;

    let mut roots: Vec<Root> = Vec::new();
    if zero_mult > 0 {
        roots.push(Root {
            value: c64(0.0, 0.0),
            multiplicity: zero_mult,
        });
    }
    if dr == 0 {
        return roots;
    }

    let approx = aberth(&reduced);
    let clusters = cluster(&approx);
    for (centroid, mult) in clusters {
        let value = polish(&reduced, centroid, mult);
        roots.push(Root {
            value,
            multiplicity: mult,
        });
    }
    roots.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap()
    });
    roots
}

fn aberth(coeffs: &[C64]) -> Vec<C64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].norm();
    // Cauchy bound on root magnitudes.
    let bound = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0f64, f64::max);
    let radius = 0.5 * bound;

    // Equispaced starting points with an irrational angular offset so the
    // configuration never aligns with conjugate symmetry.
    let mut z: Vec<C64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.7390851332151607;
            c64(radius * theta.cos(), radius * theta.sin())
        })
        .collect();

    let mut converged = vec![false; d];
    for _ in 0..MAX_ABERTH_ITERS {
        let mut all_done = true;
        for i in 0..d {
            if converged[i] {
                continue;
            }
            let (p, dp, s) = eval_with_derivative(coeffs, z[i]);
            if p.norm() <= 4.0 * f64::EPSILON * s {
                converged[i] = true;
                continue;
            }
            all_done = false;
            let ratio = if dp.norm() == 0.0 {
                // Stationary point: nudge off it.
                let nudge = 1e-8 * (1.0 + z[i].norm());
                z[i] += c64(nudge, 1e-8);
                continue;
            } else {
                p / dp
            };
            let mut offset = Complex::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        offset += Complex::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex::new(1.0, 0.0) - ratio * offset;
            let step = if denom.norm() < 1e-300 { ratio } else { ratio / denom };
            z[i] -= step;
            if step.norm() <= 1e-15 * (1.0 + z[i].norm()) {
                converged[i] = true;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

fn cluster(points: &[C64]) -> Vec<(C64, usize)> {
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    let mut points = points.to_vec();
    points.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    for &p in &points {
        let mut placed = false;
        for (centroid, count) in clusters.iter_mut() {
            let tol = CLUSTER_TOL * 1.0f64.max(centroid.norm());
            if (p - *centroid).norm() <= tol {
                let m = *count as f64;
                *centroid = (*centroid * m + p) / (m + 1.0);
                *count += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push((p, 1));
        }
    }
    clusters
}

/// d/dz applied to a coefficient vector.
fn derivative_coeffs(coeffs: &[C64]) -> Vec<C64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Polishes an m-fold root cluster. An m-fold root of p is a simple root of
/// p^(m−1), where plain Newton reaches machine precision; near a multiple
/// root p itself sits at roundoff level and carries no usable signal.
/// Falls back to the centroid when Newton wanders off the cluster.
fn polish(coeffs: &[C64], start: C64, m: usize) -> C64 {
    let mut work = coeffs.to_vec();
    for _ in 1..m {
        work = derivative_coeffs(&work);
    }
    if work.len() <= 1 {
        return start;
    }
    let accept_radius = 4.0 * CLUSTER_TOL * 1.0f64.max(start.norm());
    let mut z = start;
    for _ in 0..MAX_POLISH_ITERS {
        let (p, dp, s) = eval_with_derivative(&work, z);
        if p.norm() <= f64::EPSILON * s || dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    if (z - start).norm() <= accept_radius {
        z
    } else {
        start
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_coeffs(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| c64(x, 0.0)).collect()
    }

    #[test]
    fn quadratic_with_unit_roots() {
        // z^2 - 1
        let roots = polynomial_roots(&real_coeffs(&[-1.0, 0.0, 1.0]));
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value - c64(-1.0, 0.0)).norm() < 1e-12);
        assert!((roots[1].value - c64(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn affine_root() {
        // 1 - 1.5 z -> 2/3
        let roots = polynomial_roots(&real_coeffs(&[1.0, -1.5]));
        assert_eq!(roots.len(), 1);
        assert!((roots[0].value - c64(2.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn quadruple_root_clusters_and_polishes() {
        // (1 - z)^4 = 1 - 4z + 6z^2 - 4z^3 + z^4
        let roots = polynomial_roots(&real_coeffs(&[1.0, -4.0, 6.0, -4.0, 1.0]));
        assert_eq!(roots.len(), 1, "roots: {roots:?}");
        assert_eq!(roots[0].multiplicity, 4);
        assert!(
            (roots[0].value - c64(1.0, 0.0)).norm() < 1e-9,
            "polished root {:?}",
            roots[0].value
        );
    }

    #[test]
    fn triple_root_at_origin() {
        // z^3 (plus a far simple root at 2): z^3 (z - 2)
        let roots = polynomial_roots(&real_coeffs(&[0.0, 0.0, 0.0, -2.0, 1.0]));
        assert_eq!(roots.len(), 2);
        let zero = roots.iter().find(|r| r.value.norm() < 1e-9).unwrap();
        assert_eq!(zero.multiplicity, 3);
        let two = roots.iter().find(|r| (r.value - c64(2.0, 0.0)).norm() < 1e-9).unwrap();
        assert_eq!(two.multiplicity, 1);
    }

    #[test]
    fn recovers_scattered_complex_roots() {
        // Build coefficients from known roots by convolution.
        let known = [
            c64(0.3, 0.7),
            c64(-1.2, 0.1),
            c64(2.0, 0.0),
            c64(0.0, -1.5),
            c64(-0.4, -0.9),
        ];
        let mut coeffs = vec![c64(1.0, 0.0)];
        for &r in &known {
            let mut next = vec![c64(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        let roots = polynomial_roots(&coeffs);
        assert_eq!(roots.len(), known.len());
        for k in &known {
            let hit = roots.iter().any(|r| (r.value - k).norm() < 1e-9);
            assert!(hit, "missing root {k:?} in {roots:?}");
        }
    }

    #[test]
    fn trim_drops_tiny_leading_terms() {
        let coeffs = real_coeffs(&[1.0, 2.0, 1e-18]);
        assert_eq!(trim_leading(&coeffs, 1e-13).len(), 2);
    }
}
