//! The generation operator.
//!
//! Generation zero follows the unordered zero set of the polynomial whose
//! coefficients obey a seed recursion. Each lift orders the zeros of the
//! generation below, uses them as the coefficients of a new monic
//! polynomial, and follows that polynomial's zeros.

use alloc::vec::Vec;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::matching::min_cost_assignment;
use crate::numerics::{
    coefficients_from_zeros, consistent_mu, lexicographic_order, order_by_mu,
    zeros_from_coefficients, CoeffVector, OrderedVector, PermutationIndex, RootFind, RootSet,
};
use crate::seeds::{seed_closed_form_series, seed_step, SeedKindTag, SeedSpec};
use crate::{Error, Result};

/// How an unordered zero set becomes an ordered coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum OrderingRule {
    Lexicographic,
    FixedMu(PermutationIndex),
    /// Follow each zero from the previous step by minimum total displacement.
    Contiguity,
    /// A fresh uniformly random order at every step, reproducible from the
    /// seed.
    Random { seed: u64 },
}

#[derive(Debug, Clone)]
pub struct GenerationSpec {
    seed: SeedSpec,
    ordering: Vec<OrderingRule>,
}

impl GenerationSpec {
    /// One ordering rule per lift; `ordering.len()` is the generation depth.
    pub fn new(seed: SeedSpec, ordering: Vec<OrderingRule>) -> Result<Self> {
        for rule in &ordering {
            if let OrderingRule::FixedMu(idx) = rule {
                if idx.arity() != seed.arity() {
                    return Err(Error::ArityMismatch {
                        expected: seed.arity(),
                        found: idx.arity(),
                    });
                }
            }
        }
        Ok(GenerationSpec { seed, ordering })
    }

    pub fn generation_zero(seed: SeedSpec) -> Self {
        GenerationSpec {
            seed,
            ordering: Vec::new(),
        }
    }

    pub fn seed(&self) -> &SeedSpec {
        &self.seed
    }

    pub fn depth(&self) -> usize {
        self.ordering.len()
    }

    pub fn ordering(&self) -> &[OrderingRule] {
        &self.ordering
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SolveMode {
    /// Repeated generation-zero steps, recomputing coefficients from zeros.
    Iterated,
    /// Closed-form coefficients, root-found step by step.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub seed_kind: SeedKindTag,
    pub depth: usize,
    pub orderings: Vec<OrderingRule>,
    /// `l`, or `q^l` for q-discrete seeds.
    pub times: Vec<Complex64>,
    pub non_generic: Vec<bool>,
    pub ambiguous: Vec<bool>,
}

/// Zero sets (and the matching coefficient vectors) for `l = 0..=L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<RootSet>,
    pub coefficients: Vec<CoeffVector>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.states.first().map_or(0, RootSet::len)
    }

    /// Present every state through `rule`, chaining `prev` along time for
    /// contiguity. Returns the vectors and the per-step ambiguity flags.
    pub fn ordered(&self, rule: OrderingRule) -> Result<(Vec<OrderedVector>, Vec<bool>)> {
        let mut out: Vec<OrderedVector> = Vec::with_capacity(self.len());
        let mut flags = Vec::with_capacity(self.len());
        for (ell, state) in self.states.iter().enumerate() {
            let ord = apply_ordering(out.last(), state, rule, ell)?;
            flags.push(ord.ambiguous);
            out.push(ord.vector);
        }
        Ok((out, flags))
    }
}

/// `x(l + p)` from the zero sets `x(l), ..., x(l + p - 1)`.
///
/// Coefficients are symmetric in the zeros, so presentation order of the
/// history does not matter. The updated polynomial is
/// `z^N + sum_m f_m(y(l), ..., y(l+p-1); l) z^(N-m)`.
pub fn generation_zero_step(
    history: &[RootSet],
    spec: &SeedSpec,
    ell: usize,
    hint: Option<&[Complex64]>,
) -> Result<RootFind> {
    let ys = history
        .iter()
        .map(|x| {
            if x.len() != spec.arity() {
                return Err(Error::ArityMismatch {
                    expected: spec.arity(),
                    found: x.len(),
                });
            }
            coefficients_from_zeros(x)
        })
        .collect::<Result<Vec<_>>>()?;
    let next = seed_step(spec, &ys, ell)?;
    zeros_from_coefficients(&next, hint)
}

/// Solve the initial-value problem of generation zero for `l = 0..=steps`.
///
/// `initial` holds the `p` zero sets `x(0), ..., x(p-1)`.
pub fn solve_initial_value(
    seed: &SeedSpec,
    initial: &[RootSet],
    steps: usize,
    mode: SolveMode,
) -> Result<Trajectory> {
    let p = seed.order();
    if initial.len() != p {
        return Err(Error::HistoryLength {
            expected: p,
            found: initial.len(),
        });
    }
    if steps + 1 < p {
        return Err(Error::Invalid {
            reason: "fewer steps than initial states",
        });
    }
    let n = seed.arity();
    let mut states: Vec<RootSet> = Vec::with_capacity(steps + 1);
    let mut coefficients: Vec<CoeffVector> = Vec::with_capacity(steps + 1);
    let mut non_generic = Vec::with_capacity(steps + 1);
    for x in initial {
        if x.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: x.len(),
            });
        }
        coefficients.push(coefficients_from_zeros(x)?);
        non_generic.push(crate::numerics::collision_detected(x.as_slice(), 1e-8));
        states.push(x.clone());
    }
    let closed = match mode {
        SolveMode::ClosedForm => Some(seed_closed_form_series(seed, &coefficients, steps)?),
        SolveMode::Iterated => None,
    };
    for ell in p..=steps {
        let hint = states.last().map(|s| s.as_slice());
        let (found, y) = match &closed {
            Some(series) => {
                let y = series[ell].clone();
                (zeros_from_coefficients(&y, hint)?, y)
            }
            None => {
                let window = &states[ell - p..ell];
                let ys = window
                    .iter()
                    .map(coefficients_from_zeros)
                    .collect::<Result<Vec<_>>>()?;
                let y = seed_step(seed, &ys, ell - p)?;
                (zeros_from_coefficients(&y, hint)?, y)
            }
        };
        non_generic.push(found.non_generic);
        states.push(found.roots);
        coefficients.push(y);
    }
    let len = states.len();
    Ok(Trajectory {
        states,
        coefficients,
        meta: TrajectoryMeta {
            seed_kind: seed.tag(),
            depth: 0,
            orderings: Vec::new(),
            times: (0..len).map(|ell| seed.time_stamp(ell)).collect(),
            non_generic,
            ambiguous: alloc::vec![false; len],
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ordered {
    pub vector: OrderedVector,
    /// The contiguity assignment violates the strict pairwise condition
    /// `|x_n(l+1) - x_n(l)| < |x_n(l+1) - x_m(l)|` for some `n != m`.
    pub ambiguous: bool,
}

/// Order `current` by `rule`. Contiguity uses `prev` and falls back to the
/// lexicographic order when there is none; the other rules ignore it.
/// `ell` selects the random stream for [`OrderingRule::Random`].
pub fn apply_ordering(
    prev: Option<&OrderedVector>,
    current: &RootSet,
    rule: OrderingRule,
    ell: usize,
) -> Result<Ordered> {
    let plain = |vector| Ordered {
        vector,
        ambiguous: false,
    };
    match rule {
        OrderingRule::Lexicographic => Ok(plain(lexicographic_order(current))),
        OrderingRule::FixedMu(idx) => order_by_mu(current, idx).map(plain),
        OrderingRule::Random { seed } => {
            let mut v = lexicographic_order(current).into_vec();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ell as u64);
            for i in (1..v.len()).rev() {
                let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                v.swap(i, j);
            }
            Ok(plain(OrderedVector::new(v)))
        }
        OrderingRule::Contiguity => match prev {
            None => Ok(plain(lexicographic_order(current))),
            Some(prev) => {
                if prev.len() != current.len() {
                    return Err(Error::ArityMismatch {
                        expected: prev.len(),
                        found: current.len(),
                    });
                }
                Ok(contiguity_order(prev.as_slice(), current.as_slice()))
            }
        },
    }
}

fn contiguity_order(prev: &[Complex64], current: &[Complex64]) -> Ordered {
    let n = prev.len();
    let mut cost = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            cost[i * n + j] = (prev[i] - current[j]).norm();
        }
    }
    let assign = min_cost_assignment(&cost, n);
    let vector: Vec<Complex64> = assign.iter().map(|&j| current[j]).collect();
    let ambiguous = (0..n).any(|i| {
        let own = (vector[i] - prev[i]).norm();
        (0..n).any(|m| m != i && (vector[i] - prev[m]).norm() <= own)
    });
    Ordered {
        vector: OrderedVector::new(vector),
        ambiguous,
    }
}

/// One generation up: order each state of `lower` by `rule`, read the
/// ordered vector as coefficients, and take the zeros.
pub fn lift_generation(lower: &Trajectory, rule: OrderingRule) -> Result<Trajectory> {
    if lower.is_empty() {
        return Err(Error::Invalid {
            reason: "cannot lift an empty trajectory",
        });
    }
    let mut states: Vec<RootSet> = Vec::with_capacity(lower.len());
    let mut coefficients: Vec<CoeffVector> = Vec::with_capacity(lower.len());
    let mut non_generic = Vec::with_capacity(lower.len());
    let mut ambiguous = Vec::with_capacity(lower.len());
    let mut prev: Option<OrderedVector> = None;
    for (ell, state) in lower.states.iter().enumerate() {
        let ord = apply_ordering(prev.as_ref(), state, rule, ell)?;
        let hint = states.last().map(|s: &RootSet| s.as_slice());
        let found = zeros_from_coefficients(ord.vector.as_slice(), hint)?;
        // An order on a set with (near) coincident zeros is not well defined.
        ambiguous.push(ord.ambiguous || lower.meta.non_generic[ell]);
        non_generic.push(found.non_generic);
        states.push(found.roots);
        coefficients.push(ord.vector.as_slice().to_vec());
        prev = Some(ord.vector);
    }
    let mut orderings = lower.meta.orderings.clone();
    orderings.push(rule);
    Ok(Trajectory {
        states,
        coefficients,
        meta: TrajectoryMeta {
            seed_kind: lower.meta.seed_kind,
            depth: lower.meta.depth + 1,
            orderings,
            times: lower.meta.times.clone(),
            non_generic,
            ambiguous,
        },
    })
}

/// Every generation from zero up to `spec.depth()`; the last entry is the
/// top generation. `initial` are generation-zero zero sets.
pub fn simulate(spec: &GenerationSpec, initial: &[RootSet], steps: usize, mode: SolveMode) -> Result<Vec<Trajectory>> {
    let mut layers = Vec::with_capacity(spec.depth() + 1);
    layers.push(solve_initial_value(spec.seed(), initial, steps, mode)?);
    for &rule in spec.ordering() {
        let next = lift_generation(layers.last().expect("nonempty"), rule)?;
        layers.push(next);
    }
    Ok(layers)
}

/// Initial data given for the top of a `depth`-generation tower, pushed
/// down to generation zero.
///
/// The coefficients of the top zero set are, as an ordered vector, the zeros
/// of the generation below; the order they come in fixes that lift's rule
/// `mu`. Returns the generation-zero set and the rules `[mu_1, ..., mu_depth]`.
pub fn descend_initial(top: &RootSet, depth: usize) -> Result<(RootSet, Vec<OrderingRule>)> {
    let mut current = top.clone();
    let mut rules = Vec::with_capacity(depth);
    for _ in 0..depth {
        let y = coefficients_from_zeros(&current)?;
        rules.push(OrderingRule::FixedMu(consistent_mu(&y)?));
        current = RootSet::new(y);
    }
    rules.reverse();
    Ok((current, rules))
}

/// Largest residual of the zero/coefficient identities linking two
/// polynomials, each given by both its zeros and its coefficients:
///
/// * `prod_j (x'_n - x_j) + sum_m (y'_m - y_m) x'_n^(N-m) = 0`,
/// * `prod_j (x_n - x'_j) - sum_m (y'_m - y_m) x_n^(N-m) = 0`.
pub fn verify_key_identity(
    x_now: &RootSet,
    x_next: &RootSet,
    y_now: &[Complex64],
    y_next: &[Complex64],
) -> Result<f64> {
    let n = x_now.len();
    for len in [x_next.len(), y_now.len(), y_next.len()] {
        if len != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: len,
            });
        }
    }
    let delta: Vec<Complex64> = y_next.iter().zip(y_now).map(|(a, b)| a - b).collect();
    let increment = |z: Complex64| {
        delta
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &d| acc * z + d)
    };
    let mut worst: f64 = 0.0;
    for &xn in x_next.iter() {
        let prod: Complex64 = x_now.iter().map(|&xj| xn - xj).product();
        worst = worst.max((prod + increment(xn)).norm());
    }
    for &xn in x_now.iter() {
        let prod: Complex64 = x_next.iter().map(|&xj| xn - xj).product();
        worst = worst.max((prod - increment(xn)).norm());
    }
    Ok(worst)
}
