//! Solvable recursions for the coefficient vector `y(l)`.
//!
//! Every seed offers a one-step map ([`seed_step`]) and an explicit solution
//! of its initial-value problem ([`seed_closed_form`]); the two are computed
//! along independent routes so each checks the other.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_complex::Complex64;

use crate::numerics::CoeffVector;
use crate::{Error, Result};

/// Below this distance from 1 the geometric factor `(a^l - 1)/(a - 1)` is
/// replaced by its limit `l`.
pub const UNIT_MULTIPLIER_TOLERANCE: f64 = 1e-12;

/// Coefficients smaller than this make the second-order recursion undefined.
pub const VANISHING_COEFFICIENT: f64 = 1e-300;

type ScheduleFn = dyn Fn(usize) -> Vec<Complex64> + Send + Sync;

/// An `N`-vector of parameters, possibly depending on the time index.
#[derive(Clone)]
pub enum Schedule {
    Constant(Vec<Complex64>),
    Varying(Arc<ScheduleFn>),
}

impl Schedule {
    pub fn varying<F>(f: F) -> Self
    where
        F: Fn(usize) -> Vec<Complex64> + Send + Sync + 'static,
    {
        Schedule::Varying(Arc::new(f))
    }

    pub fn at(&self, ell: usize) -> Vec<Complex64> {
        match self {
            Schedule::Constant(v) => v.clone(),
            Schedule::Varying(f) => f(ell),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Schedule::Constant(_))
    }
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Constant(v) => f.debug_tuple("Constant").field(v).finish(),
            Schedule::Varying(_) => f.write_str("Varying(..)"),
        }
    }
}

/// Lazily evaluated, memoized view of a schedule. One per computation, so no
/// synchronization is needed.
struct ScheduleCache<'a> {
    schedule: &'a Schedule,
    values: Vec<Vec<Complex64>>,
}

impl<'a> ScheduleCache<'a> {
    fn new(schedule: &'a Schedule) -> Self {
        ScheduleCache {
            schedule,
            values: Vec::new(),
        }
    }

    fn get(&mut self, ell: usize) -> &[Complex64] {
        if let Schedule::Constant(v) = self.schedule {
            return v;
        }
        while self.values.len() <= ell {
            let next = self.schedule.at(self.values.len());
            self.values.push(next);
        }
        &self.values[ell]
    }
}

/// `a = exp(2 pi i q / p)` with `gcd(|q|, p) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RationalRotation {
    q: i64,
    p: u64,
}

impl RationalRotation {
    pub fn new(q: i64, p: u64) -> Result<Self> {
        if p == 0 || gcd(q.unsigned_abs(), p) != 1 {
            return Err(Error::InvalidRotation { q, p });
        }
        Ok(RationalRotation { q, p })
    }

    pub fn numerator(&self) -> i64 {
        self.q
    }

    pub fn period(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> Complex64 {
        // Reduce first so the angle is small and exactly representable turns
        // (halves, quarters) come out exactly.
        let r = self.q.rem_euclid(self.p as i64) as f64;
        let p = self.p as f64;
        if 4.0 * r == p {
            return Complex64::new(0.0, 1.0);
        }
        if 2.0 * r == p {
            return Complex64::new(-1.0, 0.0);
        }
        if 4.0 * r == 3.0 * p {
            return Complex64::new(0.0, -1.0);
        }
        if r == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, 2.0 * PI * r / p)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffineParams {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct NonautonomousParams {
    pub g: Schedule,
    pub h: Schedule,
}

#[derive(Debug, Clone)]
pub struct SecondOrderParams {
    pub a: Schedule,
    pub b: Schedule,
}

impl SecondOrderParams {
    pub fn autonomous(a: Vec<Complex64>, b: Vec<Complex64>) -> Self {
        SecondOrderParams {
            a: Schedule::Constant(a),
            b: Schedule::Constant(b),
        }
    }

    /// Constant `a_m` and `b_m`.
    pub fn is_autonomous(&self) -> bool {
        self.a.is_constant() && self.b.is_constant()
    }
}

#[derive(Debug, Clone)]
pub enum SeedKind {
    /// `y_m(l+1) = a_m y_m(l) + b_m`.
    Affine(AffineParams),
    /// `y_m(l+1) = g_m(l) y_m(l) + h_m(l)`.
    Nonautonomous(NonautonomousParams),
    /// `y_m(l+2) = a_m(l) y_m(l+1)^2 / y_m(l) + b_m(l) y_m(l+1)`.
    SecondOrder(SecondOrderParams),
    /// The affine recursion in q-discrete time `t_l = q^l`.
    QAffine { params: AffineParams, q: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SeedKindTag {
    Affine,
    Nonautonomous,
    SecondOrder,
    QAffine,
}

#[derive(Debug, Clone)]
pub struct SeedSpec {
    arity: usize,
    kind: SeedKind,
}

impl SeedSpec {
    pub fn affine(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        let params = AffineParams { a, b };
        let arity = check_affine(&params)?;
        Ok(SeedSpec {
            arity,
            kind: SeedKind::Affine(params),
        })
    }

    pub fn nonautonomous(arity: usize, g: Schedule, h: Schedule) -> Result<Self> {
        check_schedule(&g, arity)?;
        check_schedule(&h, arity)?;
        Ok(SeedSpec {
            arity,
            kind: SeedKind::Nonautonomous(NonautonomousParams { g, h }),
        })
    }

    pub fn second_order(arity: usize, params: SecondOrderParams) -> Result<Self> {
        check_schedule(&params.a, arity)?;
        check_schedule(&params.b, arity)?;
        Ok(SeedSpec {
            arity,
            kind: SeedKind::SecondOrder(params),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Recursion depth `p`.
    pub fn order(&self) -> usize {
        match self.kind {
            SeedKind::SecondOrder(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &SeedKind {
        &self.kind
    }

    pub fn tag(&self) -> SeedKindTag {
        match self.kind {
            SeedKind::Affine(_) => SeedKindTag::Affine,
            SeedKind::Nonautonomous(_) => SeedKindTag::Nonautonomous,
            SeedKind::SecondOrder(_) => SeedKindTag::SecondOrder,
            SeedKind::QAffine { .. } => SeedKindTag::QAffine,
        }
    }

    /// Time stamp of step `ell`: `ell` itself, or `q^ell` in q-discrete time.
    pub fn time_stamp(&self, ell: usize) -> Complex64 {
        match &self.kind {
            SeedKind::QAffine { q, .. } => q.powu(ell as u32),
            _ => Complex64::new(ell as f64, 0.0),
        }
    }
}

fn check_affine(params: &AffineParams) -> Result<usize> {
    if params.a.len() != params.b.len() {
        return Err(Error::ArityMismatch {
            expected: params.a.len(),
            found: params.b.len(),
        });
    }
    if params.a.is_empty() {
        return Err(Error::Invalid {
            reason: "seed needs at least one component",
        });
    }
    if params.a.iter().chain(&params.b).any(|z| !z.is_finite()) {
        return Err(Error::NonFinite {
            what: "seed parameters",
        });
    }
    Ok(params.a.len())
}

fn check_schedule(s: &Schedule, arity: usize) -> Result<()> {
    if arity == 0 {
        return Err(Error::Invalid {
            reason: "seed needs at least one component",
        });
    }
    let first = s.at(0);
    if first.len() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            found: first.len(),
        });
    }
    Ok(())
}

/// Wrap affine parameters as a seed in q-discrete time. Stepping is the
/// affine recursion; only the time stamps change to `q^l`.
pub fn q_affine_wrap(params: AffineParams, q: Complex64) -> Result<SeedSpec> {
    if q == Complex64::new(1.0, 0.0) {
        return Err(Error::QEqualsOne);
    }
    if !q.is_finite() {
        return Err(Error::NonFinite { what: "q" });
    }
    let arity = check_affine(&params)?;
    Ok(SeedSpec {
        arity,
        kind: SeedKind::QAffine { params, q },
    })
}

fn check_history(spec: &SeedSpec, states: &[CoeffVector]) -> Result<()> {
    if states.len() != spec.order() {
        return Err(Error::HistoryLength {
            expected: spec.order(),
            found: states.len(),
        });
    }
    for s in states {
        if s.len() != spec.arity {
            return Err(Error::ArityMismatch {
                expected: spec.arity,
                found: s.len(),
            });
        }
    }
    Ok(())
}

/// `y(ell + p)` from the `p` most recent states `y(ell), ..., y(ell + p - 1)`.
pub fn seed_step(spec: &SeedSpec, history: &[CoeffVector], ell: usize) -> Result<CoeffVector> {
    check_history(spec, history)?;
    let y = &history[0];
    match &spec.kind {
        SeedKind::Affine(p) | SeedKind::QAffine { params: p, .. } => Ok(y
            .iter()
            .zip(&p.a)
            .zip(&p.b)
            .map(|((&y, &a), &b)| a * y + b)
            .collect()),
        SeedKind::Nonautonomous(p) => {
            let g = p.g.at(ell);
            let h = p.h.at(ell);
            Ok(y.iter()
                .zip(&g)
                .zip(&h)
                .map(|((&y, &g), &h)| g * y + h)
                .collect())
        }
        SeedKind::SecondOrder(p) => {
            let next = &history[1];
            let a = p.a.at(ell);
            let b = p.b.at(ell);
            (0..spec.arity)
                .map(|m| {
                    if y[m].norm() < VANISHING_COEFFICIENT {
                        return Err(Error::DivisionByZero { component: m, ell });
                    }
                    Ok(a[m] * next[m] * next[m] / y[m] + b[m] * next[m])
                })
                .collect()
        }
    }
}

/// `(a^l - 1) / (a - 1)`, i.e. `1 + a + ... + a^(l-1)`.
pub fn geometric_factor(a: Complex64, ell: usize) -> Complex64 {
    if (a - 1.0).norm() < UNIT_MULTIPLIER_TOLERANCE {
        Complex64::new(ell as f64, 0.0)
    } else {
        (a.powu(ell as u32) - 1.0) / (a - 1.0)
    }
}

/// `y(ell)` from the initial states `y(0), ..., y(p - 1)` in explicit form.
pub fn seed_closed_form(spec: &SeedSpec, initial: &[CoeffVector], ell: usize) -> Result<CoeffVector> {
    check_history(spec, initial)?;
    let y0 = &initial[0];
    match &spec.kind {
        SeedKind::Affine(p) | SeedKind::QAffine { params: p, .. } => Ok((0..spec.arity)
            .map(|m| p.a[m].powu(ell as u32) * y0[m] + geometric_factor(p.a[m], ell) * p.b[m])
            .collect()),
        SeedKind::Nonautonomous(p) => {
            let mut g = ScheduleCache::new(&p.g);
            let mut h = ScheduleCache::new(&p.h);
            Ok(nonautonomous_closed_form(spec.arity, y0, ell, &mut g, &mut h))
        }
        SeedKind::SecondOrder(p) => {
            let y1 = &initial[1];
            let mut a = ScheduleCache::new(&p.a);
            let mut b = ScheduleCache::new(&p.b);
            second_order_closed_form(spec.arity, y0, y1, ell, p.is_autonomous(), &mut a, &mut b)
        }
    }
}

/// Closed-form values for `ell = 0..=steps`, sharing one memoized view of
/// every time-dependent parameter.
pub fn seed_closed_form_series(
    spec: &SeedSpec,
    initial: &[CoeffVector],
    steps: usize,
) -> Result<Vec<CoeffVector>> {
    check_history(spec, initial)?;
    match &spec.kind {
        SeedKind::Nonautonomous(p) => {
            let mut g = ScheduleCache::new(&p.g);
            let mut h = ScheduleCache::new(&p.h);
            Ok((0..=steps)
                .map(|ell| nonautonomous_closed_form(spec.arity, &initial[0], ell, &mut g, &mut h))
                .collect())
        }
        SeedKind::SecondOrder(p) => {
            let mut a = ScheduleCache::new(&p.a);
            let mut b = ScheduleCache::new(&p.b);
            let auto = p.is_autonomous();
            (0..=steps)
                .map(|ell| {
                    second_order_closed_form(spec.arity, &initial[0], &initial[1], ell, auto, &mut a, &mut b)
                })
                .collect()
        }
        _ => (0..=steps).map(|ell| seed_closed_form(spec, initial, ell)).collect(),
    }
}

/// `y(l) = y(0) prod_{l'<l} g(l') + sum_{l''<l} [prod_{l''<l'<l} g(l')] h(l'')`,
/// accumulated from the last factor backwards.
fn nonautonomous_closed_form(
    arity: usize,
    y0: &[Complex64],
    ell: usize,
    g: &mut ScheduleCache<'_>,
    h: &mut ScheduleCache<'_>,
) -> CoeffVector {
    let mut tail_product = alloc::vec![Complex64::new(1.0, 0.0); arity];
    let mut sum = alloc::vec![Complex64::new(0.0, 0.0); arity];
    for k in (0..ell).rev() {
        let hk = h.get(k);
        for m in 0..arity {
            sum[m] += tail_product[m] * hk[m];
        }
        let gk = g.get(k);
        for m in 0..arity {
            tail_product[m] *= gk[m];
        }
    }
    (0..arity).map(|m| y0[m] * tail_product[m] + sum[m]).collect()
}

/// Auxiliary ratios `u_m(j) = y_m(j+1) / y_m(j)` in explicit form:
/// `u(j) = u(0) prod_{i<j} a(i) + sum_{k<j} [prod_{k<i<j} a(i)] b(k)`, which in
/// the autonomous case is `a^j u(0) + (a^j - 1)/(a - 1) b`.
pub fn second_order_ratio(
    u0: Complex64,
    a_constant: Complex64,
    b_constant: Complex64,
    j: usize,
) -> Complex64 {
    a_constant.powu(j as u32) * u0 + geometric_factor(a_constant, j) * b_constant
}

fn second_order_closed_form(
    arity: usize,
    y0: &[Complex64],
    y1: &[Complex64],
    ell: usize,
    autonomous: bool,
    a: &mut ScheduleCache<'_>,
    b: &mut ScheduleCache<'_>,
) -> Result<CoeffVector> {
    let mut u0 = Vec::with_capacity(arity);
    for m in 0..arity {
        if y0[m].norm() < VANISHING_COEFFICIENT {
            return Err(Error::DivisionByZero { component: m, ell: 0 });
        }
        u0.push(y1[m] / y0[m]);
    }
    let mut y = y0.to_vec();
    if autonomous {
        let (a0, b0) = (a.get(0).to_vec(), b.get(0).to_vec());
        for j in 0..ell {
            for m in 0..arity {
                y[m] *= second_order_ratio(u0[m], a0[m], b0[m], j);
            }
        }
    } else {
        // Running form of the product/sum for u(j).
        let mut prod_a = alloc::vec![Complex64::new(1.0, 0.0); arity];
        let mut partial = alloc::vec![Complex64::new(0.0, 0.0); arity];
        for j in 0..ell {
            for m in 0..arity {
                y[m] *= u0[m] * prod_a[m] + partial[m];
            }
            let (aj, bj) = (a.get(j).to_vec(), b.get(j));
            for m in 0..arity {
                partial[m] = aj[m] * partial[m] + bj[m];
                prod_a[m] *= aj[m];
            }
        }
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow {
            what: "second-order closed form",
        });
    }
    Ok(y)
}
