//! Simultaneous root finding by Aberth–Ehrlich iteration.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use super::RootSet;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootFinderConfig {
    pub max_iterations: usize,
    /// A root is settled once its correction is below `tolerance * (1 + |z|)`.
    pub tolerance: f64,
    /// Two roots closer than `collision_tolerance * (1 + max |root|)` make the
    /// set non-generic.
    pub collision_tolerance: f64,
}

impl Default for RootFinderConfig {
    fn default() -> Self {
        RootFinderConfig {
            max_iterations: 500,
            tolerance: 1e-13,
            collision_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootFind {
    pub roots: RootSet,
    /// Two roots (nearly) collide; the zero set is outside the generic case.
    pub non_generic: bool,
    pub iterations: usize,
}

/// The `N` zeros of `z^N + sum_m y_m z^(N-m)`.
///
/// `hint`, typically the previous time step's zeros, seeds the iteration;
/// without one the start is a rotated circle of radius `1 + max |y_m|`.
pub fn zeros_from_coefficients(coeffs: &[Complex64], hint: Option<&[Complex64]>) -> Result<RootFind> {
    zeros_with_config(coeffs, hint, &RootFinderConfig::default())
}

pub fn zeros_with_config(
    coeffs: &[Complex64],
    hint: Option<&[Complex64]>,
    config: &RootFinderConfig,
) -> Result<RootFind> {
    let n = coeffs.len();
    if n < 2 {
        return Err(Error::DegreeTooSmall { degree: n });
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite {
            what: "coefficients",
        });
    }
    if let Some(h) = hint {
        if h.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: h.len(),
            });
        }
    }
    // Magnitudes |y_m| for the rounding-error bound of Horner's rule.
    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
    let warm = hint.filter(|h| h.iter().all(|w| w.is_finite())).map(separate);
    for start in warm.into_iter().chain(core::iter::once(circle_start(coeffs))) {
        if let Some((z, iterations)) = aberth(coeffs, &abs_coeffs, start, config)? {
            let non_generic = collision_detected(&z, config.collision_tolerance)
                || unresolved_pair(coeffs, &abs_coeffs, &z);
            return Ok(RootFind {
                roots: RootSet::new(z),
                non_generic,
                iterations,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: config.max_iterations,
    })
}

/// A vanishing Aberth step only certifies a root when the Newton correction
/// `p/p'` is small as well; otherwise two iterates have merged away from any
/// root. The bound admits roots of multiplicity up to three, which are
/// resolved only to about the cube root of the precision.
const NEWTON_ACCEPTANCE: f64 = 1e-4;

/// Aberth–Ehrlich iteration from `z`. `None` when the iterates stall or the
/// iteration cap is reached.
fn aberth(
    coeffs: &[Complex64],
    abs_coeffs: &[f64],
    mut z: Vec<Complex64>,
    config: &RootFinderConfig,
) -> Result<Option<(Vec<Complex64>, usize)>> {
    let n = z.len();
    let mut settled = alloc::vec![false; n];
    for iteration in 1..=config.max_iterations {
        let mut all_settled = true;
        for k in 0..n {
            if settled[k] {
                continue;
            }
            let (p, dp, bound) = horner_with_derivative(coeffs, abs_coeffs, z[k]);
            if p.norm() <= bound {
                settled[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if dp.norm() == 0.0 || !ratio.is_finite() || denom.norm() == 0.0 {
                // Stationary point of p: kick the estimate off it.
                Complex64::from_polar(1e-3 * (1.0 + z[k].norm()), 0.5 + k as f64)
            } else {
                ratio / denom
            };
            z[k] -= step;
            if !z[k].is_finite() {
                return Err(Error::Overflow { what: "root iterate" });
            }
            let scale = 1.0 + z[k].norm();
            if step.norm() <= config.tolerance * scale {
                if ratio.norm() > NEWTON_ACCEPTANCE * scale {
                    return Ok(None);
                }
                settled[k] = true;
            } else {
                all_settled = false;
            }
        }
        if all_settled {
            return Ok(Some((z, iteration)));
        }
    }
    Ok(None)
}

/// `true` when two entries are closer than `tol * (1 + max |z|)`.
pub fn collision_detected(z: &[Complex64], tol: f64) -> bool {
    let scale = 1.0 + z.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let limit = tol * scale;
    (0..z.len()).any(|i| (i + 1..z.len()).any(|j| (z[i] - z[j]).norm() < limit))
}

/// `true` when the inclusion disks of two roots overlap, so the computed
/// roots cannot be certified distinct. The disk around `z_k` has radius
/// `N (|p(z_k)| + e_k) / |prod_{j != k} (z_k - z_j)|`, with `e_k` the
/// rounding bound of `p(z_k)`.
fn unresolved_pair(coeffs: &[Complex64], abs_coeffs: &[f64], z: &[Complex64]) -> bool {
    let n = z.len();
    let radii: Vec<f64> = (0..n)
        .map(|k| {
            let (p, _, bound) = horner_with_derivative(coeffs, abs_coeffs, z[k]);
            let spread: f64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).norm()).product();
            n as f64 * (p.norm() + bound) / spread
        })
        .collect();
    (0..n).any(|i| (i + 1..n).any(|j| (z[i] - z[j]).norm() <= radii[i] + radii[j]))
}

/// Value, derivative, and a bound on the rounding error of the value.
fn horner_with_derivative(
    coeffs: &[Complex64],
    abs_coeffs: &[f64],
    z: Complex64,
) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let r = z.norm();
    let mut e = 1.0;
    for (&c, &a) in coeffs.iter().zip(abs_coeffs) {
        dp = dp * z + p;
        p = p * z + c;
        e = e * r + a;
    }
    (p, dp, 4.0 * f64::EPSILON * e)
}

fn circle_start(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let radius = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    // The offset keeps the start off any symmetry axis of real polynomials.
    (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect()
}

/// Copy of `hint` with coincident entries pulled apart so the repulsion term
/// stays finite.
fn separate(hint: &[Complex64]) -> Vec<Complex64> {
    let mut z = hint.to_vec();
    let scale = 1.0 + z.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let gap = 1e-7 * scale;
    for k in 1..z.len() {
        let mut bump = 0;
        while z[..k].iter().any(|w| (*w - z[k]).norm() < gap) {
            bump += 1;
            z[k] += Complex64::from_polar(10.0 * gap, 0.7 * bump as f64 + k as f64);
        }
    }
    z
}
