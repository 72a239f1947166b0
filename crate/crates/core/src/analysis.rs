//! Measuring trajectories: the set metric, period detection, parameter
//! taxonomy of the affine seed and the periodicity conditions of the
//! second-order seed.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
// Float math for no_std builds; the std inherent methods shadow it in tests.
#[allow(unused_imports)]
use num_traits::Float;

use crate::engine::Trajectory;
use crate::matching::bottleneck_assignment;
use crate::numerics::{coefficients_from_zeros, OrderedVector, RootSet};
use crate::seeds::{lcm, second_order_ratio, AffineParams, RationalRotation, SecondOrderParams};
use crate::{Error, Result};

impl AsRef<[Complex64]> for RootSet {
    fn as_ref(&self) -> &[Complex64] {
        self.as_slice()
    }
}

impl AsRef<[Complex64]> for OrderedVector {
    fn as_ref(&self) -> &[Complex64] {
        self.as_slice()
    }
}

/// Bottleneck distance between two multisets: the smallest achievable
/// largest displacement over all pairings.
pub fn set_distance(a: &RootSet, b: &RootSet) -> Result<f64> {
    unordered_distance(a.as_slice(), b.as_slice())
}

fn unordered_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut cost = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            cost[i * n + j] = (a[i] - b[j]).norm();
        }
    }
    Ok(bottleneck_assignment(&cost, n).0)
}

/// Componentwise maximum distance; for vectors whose order is meaningful.
pub fn ordered_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ArityMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Metric {
    /// Compare states as multisets ([`set_distance`]).
    Set,
    /// Compare states componentwise ([`ordered_distance`]).
    Ordered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum PeriodVerdict {
    ExactPeriodic,
    AsymptoticallyPeriodic,
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodReport {
    pub verdict: PeriodVerdict,
    pub period: Option<usize>,
    pub onset: Option<usize>,
    /// `dist(x(l + L), x(l))` at the reported lag `L`.
    pub residual_curve: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodCriteria {
    pub max_period: usize,
    /// Bound on every lag-`L` residual for exact periodicity.
    pub tol: f64,
    /// Bound the lag-`L` residual must settle under for asymptotic
    /// periodicity.
    pub asymptotic_tol: f64,
    pub divergence_threshold: f64,
}

impl PeriodCriteria {
    pub fn new(max_period: usize) -> Self {
        PeriodCriteria {
            max_period,
            tol: 1e-9,
            asymptotic_tol: 1e-3,
            divergence_threshold: 1e12,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Period of the zero-set trajectory under the set metric.
pub fn detect_period(traj: &Trajectory, max_period: usize, tol: f64) -> Result<PeriodReport> {
    detect_period_with(&traj.states, Metric::Set, &PeriodCriteria::new(max_period).with_tol(tol))
}

/// Smallest lag `L <= max_period` at which the states repeat, exactly
/// (every residual within `tol`) or asymptotically (residuals within
/// `asymptotic_tol` from some onset on, with a non-increasing trend).
///
/// Scanning lags upwards makes the reported period minimal. An asymptotic
/// lag of one means convergence to a fixed state.
pub fn detect_period_with<S: AsRef<[Complex64]>>(
    states: &[S],
    metric: Metric,
    criteria: &PeriodCriteria,
) -> Result<PeriodReport> {
    let required = 3 * criteria.max_period.max(1);
    if states.len() < required {
        return Err(Error::TrajectoryTooShort {
            len: states.len(),
            required,
        });
    }
    let diverged = states.iter().any(|s| {
        s.as_ref()
            .iter()
            .any(|z| !z.is_finite() || z.norm() > criteria.divergence_threshold)
    });
    if diverged {
        return Ok(PeriodReport {
            verdict: PeriodVerdict::Divergent,
            period: None,
            onset: None,
            residual_curve: Vec::new(),
        });
    }
    let distance = |a: &[Complex64], b: &[Complex64]| match metric {
        Metric::Set => unordered_distance(a, b),
        Metric::Ordered => ordered_distance(a, b),
    };
    for lag in 1..=criteria.max_period {
        let curve = (0..states.len() - lag)
            .map(|ell| distance(states[ell + lag].as_ref(), states[ell].as_ref()))
            .collect::<Result<Vec<f64>>>()?;
        if curve.iter().all(|&r| r <= criteria.tol) {
            return Ok(PeriodReport {
                verdict: PeriodVerdict::ExactPeriodic,
                period: Some(lag),
                onset: None,
                residual_curve: curve,
            });
        }
        if let Some(onset) = asymptotic_onset(&curve, lag, criteria) {
            let (verdict, period) = if lag == 1 {
                (PeriodVerdict::Convergent, None)
            } else {
                (PeriodVerdict::AsymptoticallyPeriodic, Some(lag))
            };
            return Ok(PeriodReport {
                verdict,
                period,
                onset: Some(onset),
                residual_curve: curve,
            });
        }
    }
    Ok(PeriodReport {
        verdict: PeriodVerdict::Inconclusive,
        period: None,
        onset: None,
        residual_curve: Vec::new(),
    })
}

/// First index from which the residual stays under `asymptotic_tol`, if the
/// remaining horizon covers two lags and the residual is not growing there.
///
/// The trend compares residuals one lag apart, since within a lag the
/// residual is modulated by the phase along the cycle.
fn asymptotic_onset(curve: &[f64], lag: usize, criteria: &PeriodCriteria) -> Option<usize> {
    let onset = curve
        .iter()
        .rposition(|&r| r > criteria.asymptotic_tol)
        .map_or(0, |i| i + 1);
    if curve.len() - onset < 2 * lag {
        return None;
    }
    let tail = &curve[onset..];
    // Residuals at rounding level carry no trend information.
    let mut ratios: Vec<f64> = tail
        .iter()
        .zip(&tail[lag..])
        .filter(|(&r0, &r1)| r0 > criteria.tol && r1 > criteria.tol)
        .map(|(r0, r1)| r1 / r0)
        .collect();
    if ratios.is_empty() {
        return Some(onset);
    }
    ratios.sort_by(f64::total_cmp);
    let median = ratios[ratios.len() / 2];
    (median <= 1.0).then_some(onset)
}

/// Best rational approximation `r/s` of `x` with `s <= max_den`, accepted
/// only when within `tol`. The result is in lowest terms.
pub fn rational_approximation(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 as u64 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some((h1, k1 as u64));
        }
        let frac = rest - a;
        if frac == 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    None
}

/// Fraction of a full turn `arg(z) / 2 pi`, in `[0, 1)`.
fn turn_fraction(z: Complex64) -> f64 {
    let t = z.arg() / (2.0 * PI);
    if t < 0.0 {
        t + 1.0
    } else {
        t
    }
}

pub const UNIT_MODULUS_TOLERANCE: f64 = 1e-12;
pub const ROTATION_DENOMINATOR_BOUND: u64 = 1_000_000;
pub const ROTATION_PHASE_TOLERANCE: f64 = 1e-14;

/// How one affine multiplier `a_m` (with its offset `b_m`) behaves.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MultiplierClass {
    Rotation(RationalRotation),
    /// `|a| < 1`.
    Contracting,
    /// `|a| > 1`.
    Expanding,
    /// `|a| = 1` at an angle with no small rational turn.
    UnitIrrational,
    /// `a = 1` with `b != 0`: linear growth.
    Drift,
}

pub fn classify_multiplier(a: Complex64, b: Complex64) -> MultiplierClass {
    let modulus = a.norm();
    if (modulus - 1.0).abs() <= UNIT_MODULUS_TOLERANCE {
        let turn = turn_fraction(a);
        let approx = rational_approximation(turn, ROTATION_DENOMINATOR_BOUND, ROTATION_PHASE_TOLERANCE)
            .or_else(|| (1.0 - turn <= ROTATION_PHASE_TOLERANCE).then_some((0, 1)));
        match approx {
            Some((_, 1)) if b != Complex64::new(0.0, 0.0) => MultiplierClass::Drift,
            Some((r, s)) => MultiplierClass::Rotation(
                RationalRotation::new(r % s as i64, s).expect("lowest terms"),
            ),
            None => MultiplierClass::UnitIrrational,
        }
    } else if modulus < 1.0 {
        MultiplierClass::Contracting
    } else {
        MultiplierClass::Expanding
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodPrediction {
    pub period: u64,
    pub asymptotic: bool,
}

/// Least common multiple of the rotation periods, when every multiplier is a
/// rotation or contracting and at least one is a rotation.
pub fn predicted_period(classes: &[MultiplierClass]) -> Option<PeriodPrediction> {
    let mut period = 1u64;
    let mut rotations = 0;
    let mut contracting = 0;
    for class in classes {
        match class {
            MultiplierClass::Rotation(r) => {
                period = lcm(period, r.period());
                rotations += 1;
            }
            MultiplierClass::Contracting => contracting += 1,
            _ => return None,
        }
    }
    (rotations > 0).then_some(PeriodPrediction {
        period,
        asymptotic: contracting > 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Taxonomy {
    Isochronous,
    AsymptoticallyIsochronous,
    Convergent,
    Divergent,
    /// Unit-modulus multipliers at irrational angles: quasi-periodic, no
    /// prediction.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParameterClassification {
    pub label: Taxonomy,
    pub predicted_period: Option<u64>,
    /// `b_m / (1 - a_m)` in the convergent case.
    pub limits: Option<Vec<Complex64>>,
    pub classes: Vec<MultiplierClass>,
}

/// Expected long-time behavior of the zeros driven by an affine seed.
pub fn classify_parameters(params: &AffineParams) -> ParameterClassification {
    let classes: Vec<MultiplierClass> = params
        .a
        .iter()
        .zip(&params.b)
        .map(|(&a, &b)| classify_multiplier(a, b))
        .collect();
    let has = |f: fn(&MultiplierClass) -> bool| classes.iter().any(f);
    let (label, predicted, limits) = if has(|c| matches!(c, MultiplierClass::Expanding | MultiplierClass::Drift)) {
        (Taxonomy::Divergent, None, None)
    } else if has(|c| matches!(c, MultiplierClass::UnitIrrational)) {
        (Taxonomy::Inconclusive, None, None)
    } else if let Some(pred) = predicted_period(&classes) {
        let label = if pred.asymptotic {
            Taxonomy::AsymptoticallyIsochronous
        } else {
            Taxonomy::Isochronous
        };
        (label, Some(pred.period), None)
    } else {
        let limits = params
            .a
            .iter()
            .zip(&params.b)
            .map(|(&a, &b)| b / (1.0 - a))
            .collect();
        (Taxonomy::Convergent, None, Some(limits))
    };
    ParameterClassification {
        label,
        predicted_period: predicted,
        limits,
        classes,
    }
}

pub const CONDITION_UNIT_TOLERANCE: f64 = 1e-9;
pub const CONDITION_PHASE_TOLERANCE: f64 = 1e-9;
pub const CONDITION_DENOMINATOR_BOUND: u64 = 1000;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodicityConditionReport {
    /// `beta_m = prod_{k<P} u_m(k)`, the growth of `y_m` over one period.
    pub beta: Vec<Complex64>,
    pub rho: Vec<f64>,
    /// `(r_m, s_m)` with `beta_m / rho_m = exp(2 pi i r_m / s_m)`, when found.
    pub phase_fractions: Vec<Option<(i64, u64)>>,
    pub satisfied: bool,
    /// Every `|beta_m| = 1`: exact rather than asymptotic periodicity.
    pub exact: bool,
    pub predicted_period: Option<u64>,
}

/// Periodicity conditions of the autonomous second-order seed with
/// rotation multipliers, for initial zero sets `x0`, `x1`.
///
/// `period` is `P`, the lcm of the rotation periods. With
/// `u_m(0) = sigma_m(x1)/sigma_m(x0)` the factor
/// `beta_m = prod_{k<P} [a_m^k u_m(0) + (a_m^k - 1)/(a_m - 1) b_m]` gives
/// `y_m(l + P) = beta_m y_m(l)`. The solution is (asymptotically) periodic
/// when every `|beta_m| <= 1`, some `|beta_m| = 1`, and those unit factors
/// are rational turns `r_m/s_m`; the period is `lcm{s_m P}` over them.
pub fn periodicity_condition_check(
    x0: &RootSet,
    x1: &RootSet,
    params: &SecondOrderParams,
    period: u64,
) -> Result<PeriodicityConditionReport> {
    if !params.is_autonomous() {
        return Err(Error::Invalid {
            reason: "periodicity conditions need constant a_m and b_m",
        });
    }
    if x0.len() != x1.len() {
        return Err(Error::ArityMismatch {
            expected: x0.len(),
            found: x1.len(),
        });
    }
    let a = params.a.at(0);
    let b = params.b.at(0);
    if a.len() != x0.len() {
        return Err(Error::ArityMismatch {
            expected: x0.len(),
            found: a.len(),
        });
    }
    // y_m = (-1)^m sigma_m / m!, so the ratio of y's is the ratio of sigma's.
    let y0 = coefficients_from_zeros(x0)?;
    let y1 = coefficients_from_zeros(x1)?;
    let mut beta = Vec::with_capacity(a.len());
    for m in 0..a.len() {
        if y0[m].norm() < crate::seeds::VANISHING_COEFFICIENT {
            return Err(Error::ZeroDenominator { component: m });
        }
        let u0 = y1[m] / y0[m];
        let product: Complex64 = (0..period as usize)
            .map(|k| second_order_ratio(u0, a[m], b[m], k))
            .product();
        beta.push(product);
    }
    let rho: Vec<f64> = beta.iter().map(|z| z.norm()).collect();
    let phase_fractions: Vec<Option<(i64, u64)>> = beta
        .iter()
        .map(|&z| {
            let turn = turn_fraction(z);
            rational_approximation(turn, CONDITION_DENOMINATOR_BOUND, CONDITION_PHASE_TOLERANCE)
                .or_else(|| (1.0 - turn <= CONDITION_PHASE_TOLERANCE).then_some((0, 1)))
                .map(|(r, s)| (r % s as i64, s))
        })
        .collect();
    let unit: Vec<usize> = (0..rho.len())
        .filter(|&m| (rho[m] - 1.0).abs() <= CONDITION_UNIT_TOLERANCE)
        .collect();
    let bounded = rho.iter().all(|&r| r <= 1.0 + CONDITION_UNIT_TOLERANCE);
    let rational = unit.iter().all(|&m| phase_fractions[m].is_some());
    let satisfied = bounded && !unit.is_empty() && rational;
    let exact = satisfied && unit.len() == rho.len();
    let predicted_period = satisfied.then(|| {
        unit.iter()
            .map(|&m| phase_fractions[m].expect("checked").1 * period)
            .fold(1, lcm)
    });
    Ok(PeriodicityConditionReport {
        beta,
        rho,
        phase_fractions,
        satisfied,
        exact,
        predicted_period,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn set(v: &[(f64, f64)]) -> RootSet {
        RootSet::new(v.iter().map(|&(a, b)| c(a, b)).collect())
    }

    #[test]
    fn set_distance_examples() {
        assert_eq!(set_distance(&set(&[(1.0, 0.0), (2.0, 0.0)]), &set(&[(2.0, 0.0), (1.0, 0.0)])).unwrap(), 0.0);
        assert_eq!(set_distance(&set(&[(0.0, 0.0)]), &set(&[(3.0, 4.0)])).unwrap(), 5.0);
        assert_eq!(set_distance(&set(&[(0.0, 0.0), (10.0, 0.0)]), &set(&[(1.0, 0.0), (10.0, 0.0)])).unwrap(), 1.0);
        assert!(set_distance(&set(&[(0.0, 0.0)]), &set(&[(0.0, 0.0), (1.0, 0.0)])).is_err());
    }

    #[test]
    fn predicted_period_examples() {
        let rot = |q, p| MultiplierClass::Rotation(RationalRotation::new(q, p).unwrap());
        assert_eq!(predicted_period(&[rot(1, 3), rot(2, 5)]), Some(PeriodPrediction { period: 15, asymptotic: false }));
        assert_eq!(
            predicted_period(&[rot(1, 7), MultiplierClass::Contracting]),
            Some(PeriodPrediction { period: 7, asymptotic: true })
        );
        assert_eq!(predicted_period(&[rot(0, 1), rot(0, 1)]).unwrap().period, 1);
        assert_eq!(predicted_period(&[rot(1, 3), MultiplierClass::Expanding]), None);
        assert_eq!(predicted_period(&[MultiplierClass::Contracting; 2]), None);
    }

    #[test]
    fn taxonomy_examples() {
        let r3 = RationalRotation::new(1, 3).unwrap().value();
        let r5 = RationalRotation::new(2, 5).unwrap().value();
        let b = vec![c(1.0, 0.0), c(2.0, 0.0)];
        let iso = classify_parameters(&AffineParams { a: vec![r3, r5], b: b.clone() });
        assert_eq!(iso.label, Taxonomy::Isochronous);
        assert_eq!(iso.predicted_period, Some(15));

        let conv = classify_parameters(&AffineParams { a: vec![c(0.5, 0.0), c(0.3, 0.0)], b: b.clone() });
        assert_eq!(conv.label, Taxonomy::Convergent);
        let limits = conv.limits.unwrap();
        assert!((limits[0] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((limits[1] - c(2.0 / 0.7, 0.0)).norm() < 1e-15);

        let div = classify_parameters(&AffineParams { a: vec![c(1.1, 0.0), c(0.5, 0.0)], b: b.clone() });
        assert_eq!(div.label, Taxonomy::Divergent);

        let irrational = Complex64::from_polar(1.0, 2.0_f64.sqrt());
        let q = classify_parameters(&AffineParams { a: vec![irrational, r3], b: b.clone() });
        assert_eq!(q.label, Taxonomy::Inconclusive);

        let drift = classify_parameters(&AffineParams { a: vec![c(1.0, 0.0), r3], b });
        assert_eq!(drift.label, Taxonomy::Divergent);
    }

    #[test]
    fn rational_approximation_recovers_simple_turns() {
        assert_eq!(rational_approximation(0.5, 1000, 1e-12), Some((1, 2)));
        assert_eq!(rational_approximation(2.0 / 5.0, 1000, 1e-12), Some((2, 5)));
        assert_eq!(rational_approximation(0.0, 1000, 1e-12), Some((0, 1)));
        assert_eq!(rational_approximation(1.0 / 25.0, 1000, 1e-12), Some((1, 25)));
        assert_eq!(rational_approximation(core::f64::consts::FRAC_1_PI, 1000, 1e-12), None);
    }

    #[test]
    fn negative_turn_multipliers_classify_as_rotations() {
        let a = RationalRotation::new(-1, 3).unwrap().value();
        match classify_multiplier(a, c(1.0, 0.0)) {
            MultiplierClass::Rotation(r) => assert_eq!(r.period(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_trajectory_has_period_one() {
        let states: Vec<RootSet> = (0..30).map(|_| set(&[(1.0, 0.0), (-1.0, 2.0)])).collect();
        let r = detect_period_with(&states, Metric::Set, &PeriodCriteria::new(10)).unwrap();
        assert_eq!(r.verdict, PeriodVerdict::ExactPeriodic);
        assert_eq!(r.period, Some(1));
    }

    #[test]
    fn too_short_and_divergent() {
        let states: Vec<RootSet> = (0..5).map(|_| set(&[(1.0, 0.0), (-1.0, 2.0)])).collect();
        assert!(matches!(
            detect_period_with(&states, Metric::Set, &PeriodCriteria::new(10)),
            Err(Error::TrajectoryTooShort { len: 5, required: 30 })
        ));
        let states: Vec<RootSet> = (0..30).map(|k| set(&[(10f64.powi(k), 0.0), (0.0, 0.0)])).collect();
        let r = detect_period_with(&states, Metric::Set, &PeriodCriteria::new(10)).unwrap();
        assert_eq!(r.verdict, PeriodVerdict::Divergent);
    }

    #[test]
    fn geometric_approach_to_a_cycle() {
        // x(l) = w^l + 0.8^l with w a fifth root of unity.
        let w = RationalRotation::new(1, 5).unwrap().value();
        let states: Vec<RootSet> = (0..200)
            .map(|l| RootSet::new(vec![w.powu(l) + 0.8f64.powi(l as i32), c(5.0, 0.0)]))
            .collect();
        let r = detect_period_with(&states, Metric::Set, &PeriodCriteria::new(12)).unwrap();
        assert_eq!(r.verdict, PeriodVerdict::AsymptoticallyPeriodic);
        assert_eq!(r.period, Some(5));
        let onset = r.onset.unwrap();
        assert!(r.residual_curve[onset..].iter().all(|&x| x <= 1e-3));
        assert!(r.residual_curve[onset - 1] > 1e-3);

        let conv: Vec<RootSet> = (0..60).map(|l| RootSet::new(vec![c(0.5f64.powi(l), 0.0), c(2.0, 0.0)])).collect();
        let r = detect_period_with(&conv, Metric::Set, &PeriodCriteria::new(12)).unwrap();
        assert_eq!(r.verdict, PeriodVerdict::Convergent);
        assert_eq!(r.period, None);
    }

    #[test]
    fn irrational_rotation_is_inconclusive() {
        let states: Vec<RootSet> = (0..90)
            .map(|l| RootSet::new(vec![Complex64::from_polar(1.0, l as f64 * 2.0f64.sqrt()), c(3.0, 0.0)]))
            .collect();
        let r = detect_period_with(&states, Metric::Set, &PeriodCriteria::new(30)).unwrap();
        assert_eq!(r.verdict, PeriodVerdict::Inconclusive);
    }

    #[test]
    fn condition_check_with_pure_rotations() {
        // x0 = x1 and b = 0: u(0) = 1, beta_m = a_m^(P(P-1)/2).
        let a = vec![RationalRotation::new(1, 2).unwrap().value(), RationalRotation::new(1, 4).unwrap().value()];
        let params = SecondOrderParams::autonomous(a.clone(), vec![c(0.0, 0.0); 2]);
        let x = set(&[(0.3, 0.4), (-1.2, 0.5)]);
        let report = periodicity_condition_check(&x, &x, &params, 4).unwrap();
        for m in 0..2 {
            assert!((report.beta[m] - a[m].powu(6)).norm() < 1e-14);
        }
        assert!(report.satisfied && report.exact);
        assert_eq!(report.phase_fractions, vec![Some((0, 1)), Some((1, 2))]);
        assert_eq!(report.predicted_period, Some(8));
    }

    #[test]
    fn condition_check_rejects_zero_denominator() {
        let params = SecondOrderParams::autonomous(vec![c(-1.0, 0.0); 2], vec![c(1.0, 0.0); 2]);
        // sum of zeros vanishes, so y_1(0) = 0
        let x0 = set(&[(1.0, 0.0), (-1.0, 0.0)]);
        let x1 = set(&[(1.0, 1.0), (2.0, 0.0)]);
        assert_eq!(
            periodicity_condition_check(&x0, &x1, &params, 2),
            Err(Error::ZeroDenominator { component: 0 })
        );
    }
}
