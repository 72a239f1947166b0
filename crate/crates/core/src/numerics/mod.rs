//! Polynomial arithmetic, the zero/coefficient correspondence and the
//! ordering utilities every higher layer builds on.

mod ordering;
mod poly;
mod roots;

use alloc::vec::Vec;
use num_complex::Complex64;

pub use ordering::{
    consistent_mu, index_of_permutation, lexicographic_order, order_by_mu, permutation_by_index,
    PermutationIndex,
};
pub use poly::{coefficients_from_zeros, evaluate, principal_sqrt, MonicPolynomial};
pub use roots::{
    collision_detected, zeros_from_coefficients, zeros_with_config, RootFind, RootFinderConfig,
};

/// Ordered coefficients `(y_1, ..., y_N)` of `z^N + sum_m y_m z^(N-m)`.
pub type CoeffVector = Vec<Complex64>;

/// Unordered multiset of `N` complex zeros.
///
/// The backing vector has a presentation order, but nothing in this crate
/// gives that order meaning: equality of root sets is decided by
/// [`crate::analysis::set_distance`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct RootSet(Vec<Complex64>);

impl RootSet {
    pub fn new(roots: Vec<Complex64>) -> Self {
        RootSet(roots)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn max_modulus(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }
}

impl From<Vec<Complex64>> for RootSet {
    fn from(v: Vec<Complex64>) -> Self {
        RootSet(v)
    }
}

/// An `N`-vector whose component order is significant.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct OrderedVector(Vec<Complex64>);

impl OrderedVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        OrderedVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// Forget the order.
    pub fn to_root_set(&self) -> RootSet {
        RootSet(self.0.clone())
    }
}

impl From<Vec<Complex64>> for OrderedVector {
    fn from(v: Vec<Complex64>) -> Self {
        OrderedVector(v)
    }
}
