//! Assignment problems on square cost matrices.
//!
//! Matrices are row-major `n * n` slices. An assignment is returned as
//! `assign[row] = column`.

use alloc::vec;
use alloc::vec::Vec;

/// Minimum-total-cost assignment (Hungarian method with potentials, O(n^3)).
pub fn min_cost_assignment(cost: &[f64], n: usize) -> Vec<usize> {
    assert_eq!(cost.len(), n * n, "cost matrix must be n x n");
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays; index 0 is the virtual source column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1]; // owner[col] = row
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[(r - 1) * n + (col - 1)] - u[r] - v[col];
                if reduced < minv[col] {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for col in 1..=n {
        assign[owner[col] - 1] = col - 1;
    }
    assign
}

/// Total cost of an assignment.
pub fn assignment_cost(cost: &[f64], n: usize, assign: &[usize]) -> f64 {
    assign
        .iter()
        .enumerate()
        .map(|(row, &col)| cost[row * n + col])
        .sum()
}

/// Exhaustive minimum-total-cost assignment; only sensible for small `n`.
pub fn brute_force_assignment(cost: &[f64], n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = perm.clone();
    let mut best_cost = assignment_cost(cost, n, &perm);
    // Heap's algorithm.
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let total = assignment_cost(cost, n, &perm);
            if total < best_cost {
                best_cost = total;
                best.clone_from(&perm);
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Minimum over assignments of the largest matched cost.
///
/// Binary search over the distinct entries, testing each threshold with an
/// augmenting-path perfect matching.
pub fn bottleneck_assignment(cost: &[f64], n: usize) -> (f64, Vec<usize>) {
    assert_eq!(cost.len(), n * n, "cost matrix must be n x n");
    if n == 0 {
        return (0.0, Vec::new());
    }
    let mut levels = cost.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    let mut best = perfect_matching_below(cost, n, levels[hi]).expect("complete graph matches");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching_below(cost, n, levels[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    (levels[lo], best)
}

fn perfect_matching_below(cost: &[f64], n: usize, limit: f64) -> Option<Vec<usize>> {
    let mut row_of_col: Vec<Option<usize>> = vec![None; n];
    for row in 0..n {
        let mut visited = vec![false; n];
        if !augment(cost, n, limit, row, &mut visited, &mut row_of_col) {
            return None;
        }
    }
    let mut assign = vec![0usize; n];
    for (col, row) in row_of_col.iter().enumerate() {
        assign[row.expect("perfect matching")] = col;
    }
    Some(assign)
}

fn augment(
    cost: &[f64],
    n: usize,
    limit: f64,
    row: usize,
    visited: &mut [bool],
    row_of_col: &mut [Option<usize>],
) -> bool {
    for col in 0..n {
        if visited[col] || cost[row * n + col] > limit {
            continue;
        }
        visited[col] = true;
        let free = match row_of_col[col] {
            None => true,
            Some(other) => augment(cost, n, limit, other, visited, row_of_col),
        };
        if free {
            row_of_col[col] = Some(row);
            return true;
        }
    }
    false
}
