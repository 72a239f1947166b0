use alloc::vec::Vec;
use num_complex::Complex64;

use super::{OrderedVector, RootSet};
use crate::{Error, Result};

/// Index `mu` in `[1, N!]` into the lexicographic list of permutations of
/// `N` objects (`mu = 1` is the identity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PermutationIndex {
    mu: u64,
    arity: usize,
}

impl PermutationIndex {
    pub fn new(mu: u64, arity: usize) -> Result<Self> {
        match factorial(arity) {
            Some(total) if mu >= 1 && mu <= total => Ok(PermutationIndex { mu, arity }),
            _ => Err(Error::PermutationOutOfRange { mu, arity }),
        }
    }

    pub fn identity(arity: usize) -> Self {
        PermutationIndex { mu: 1, arity }
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

pub(crate) fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Real parts closer than `LEX_TIE_TOLERANCE * (1 + max |x|)` count as equal,
/// so rounding noise cannot swap entries whose real parts agree exactly.
pub const LEX_TIE_TOLERANCE: f64 = 1e-12;

/// Indices of `v` in lexicographic order.
///
/// Entries are sorted by real part, chained into groups whose neighboring real
/// parts are within the tie tolerance, and each group is sorted by imaginary
/// part.
fn lexicographic_indices(v: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].re.total_cmp(&v[j].re).then_with(|| v[i].im.total_cmp(&v[j].im)));
    let scale = 1.0 + v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tie = LEX_TIE_TOLERANCE * scale;
    let mut start = 0;
    for k in 1..=idx.len() {
        if k == idx.len() || v[idx[k]].re - v[idx[k - 1]].re > tie {
            idx[start..k].sort_by(|&i, &j| v[i].im.total_cmp(&v[j].im).then_with(|| v[i].re.total_cmp(&v[j].re)));
            start = k;
        }
    }
    idx
}

/// Increasing real part, ties broken by increasing imaginary part.
pub fn lexicographic_order(roots: &RootSet) -> OrderedVector {
    let v = roots.as_slice();
    OrderedVector::new(lexicographic_indices(v).into_iter().map(|i| v[i]).collect())
}

/// The `mu`-th permutation of `0..N` in lexicographic order, 0-based.
pub fn permutation_by_index(idx: PermutationIndex) -> Vec<usize> {
    let n = idx.arity;
    let mut pool: Vec<usize> = (0..n).collect();
    let mut rank = idx.mu - 1;
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let block = factorial(k).expect("arity validated on construction");
        let pick = (rank / block) as usize;
        rank %= block;
        out.push(pool.remove(pick));
    }
    out
}

/// Inverse of [`permutation_by_index`].
pub fn index_of_permutation(perm: &[usize]) -> Result<PermutationIndex> {
    let n = perm.len();
    let mut seen = alloc::vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Invalid {
                reason: "not a permutation",
            });
        }
        seen[p] = true;
    }
    let mut rank = 0u64;
    for (i, &p) in perm.iter().enumerate() {
        let smaller_later = perm[i + 1..].iter().filter(|&&q| q < p).count() as u64;
        let block = factorial(n - 1 - i).ok_or(Error::PermutationOutOfRange { mu: 0, arity: n })?;
        rank += smaller_later * block;
    }
    PermutationIndex::new(rank + 1, n)
}

/// Lexicographic order followed by the `mu`-th reordering.
pub fn order_by_mu(roots: &RootSet, idx: PermutationIndex) -> Result<OrderedVector> {
    if roots.len() != idx.arity {
        return Err(Error::ArityMismatch {
            expected: idx.arity,
            found: roots.len(),
        });
    }
    let lex = lexicographic_order(roots);
    let perm = permutation_by_index(idx);
    Ok(OrderedVector::new(
        perm.iter().map(|&i| lex.as_slice()[i]).collect(),
    ))
}

/// The index `mu` for which `order_by_mu(set(v), mu)` reproduces `v`.
///
/// This is how an ordered coefficient vector fixes the ordering prescription
/// of the generation below it.
pub fn consistent_mu(v: &[Complex64]) -> Result<PermutationIndex> {
    let n = v.len();
    let idx = lexicographic_indices(v);
    // idx[r] is the position in v of the r-th lexicographic entry; we need
    // perm[i] = rank of v[i].
    let mut perm = alloc::vec![0usize; n];
    for (rank, &pos) in idx.iter().enumerate() {
        perm[pos] = rank;
    }
    index_of_permutation(&perm)
}
