//! Sparse subsets, non-crossing matchings and dotted matchings.

mod dotted;
mod matching;
mod series;

pub use dotted::{classify_dotted, conjecture_scan, ConjectureReport, DotFlags, DottedMatching};
pub use matching::{catalan, enumerate_ncm, lambda_of, mu_of, Matching};
pub use series::gf_coefficients;

use crate::error::{input, KrlError, Result};
use crate::subset::Subset;

/// Binomial coefficient, zero outside `0 ≤ k ≤ n`.
pub fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc as u64
}

fn check_size(j: Subset, size: usize) -> Result<()> {
    if size > 63 {
        return input(format!("index set of size {size} exceeds 63"));
    }
    j.check_within(size)
}

/// `J` is sparse iff every `j ∈ J` has more non-members than members above it.
pub fn is_sparse(j: Subset, size: usize) -> bool {
    let comp = j.complement(size);
    j.iter().all(|x| comp.above(x).len() > j.above(x).len())
}

pub fn is_sparse_checked(j: Subset, size: usize) -> Result<bool> {
    check_size(j, size)?;
    Ok(is_sparse(j, size))
}

/// Tail criterion: `|J^c_{≥i}| ≥ |J_{≥i}|` for every `i`.
pub fn is_sparse_tail(j: Subset, size: usize) -> bool {
    let comp = j.complement(size);
    (1..=size).all(|i| comp.at_least(i).len() >= j.at_least(i).len())
}

/// Positional criterion for `|I| = 2n`: with `j_1 > j_2 > …`, sparse iff `j_t < 2(n+1-t)`.
pub fn is_sparse_positional(j: Subset, size: usize) -> bool {
    let n = size / 2;
    j.iter_desc()
        .enumerate()
        .all(|(t0, x)| (x as i64) < 2 * (n as i64 + 1 - (t0 as i64 + 1)))
}

/// Largest `j ∈ J` with `|J^c_{>j}| ≤ |J_{>j}|`.
pub fn largest_violation(j: Subset, size: usize) -> Option<usize> {
    let comp = j.complement(size);
    j.iter_desc().find(|&x| comp.above(x).len() <= j.above(x).len())
}

/// Sparse subsets of `{1,…,size}` of one size or all sizes.
///
/// Sorted by size, and lexicographically within each size.
pub fn enumerate_sparse(size: usize, k: Option<usize>) -> Vec<Subset> {
    let n = size / 2;
    let sizes: Vec<usize> = match k {
        Some(k) if k > n => return Vec::new(),
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let mut out: Vec<Subset> = sizes
        .into_iter()
        .flat_map(|k| Subset::all_of_size(size, k))
        .filter(|&s| is_sparse(s, size))
        .collect();
    out.sort_by_key(|s| (s.len(), *s));
    out
}

/// `|SS_p|` for an index set of size `2n`.
pub fn sparse_count(n: usize, p: usize) -> u64 {
    if p > n {
        return 0;
    }
    binom(2 * n as i64, p as i64) - binom(2 * n as i64, p as i64 - 1)
}

/// `c_T(i) = |T^c_{≥i}| - |T_{≥i}|`.
pub fn balance(t: Subset, size: usize, i: usize) -> i64 {
    let comp = t.complement(size);
    comp.at_least(i).len() as i64 - t.at_least(i).len() as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// The bijection between non-sparse `p`-sets and arbitrary `(p-1)`-sets.
pub fn alpha_beta(j: Subset, direction: Direction, size: usize) -> Result<Subset> {
    check_size(j, size)?;
    let n = size / 2;
    let comp = j.complement(size);
    match direction {
        Direction::Forward => {
            if is_sparse(j, size) {
                return input(format!("{j} is sparse; alpha needs a non-sparse set"));
            }
            let a = (1..=size + 1)
                .find(|&i| balance(j, size, i) < 0)
                .ok_or_else(|| KrlError::Internal(format!("no negative balance for {j}")))?;
            Ok(j.below(a).union(comp.at_least(a)))
        }
        Direction::Backward => {
            if j.len() >= n {
                return input(format!("beta needs |K| < {n}, got {}", j.len()));
            }
            let b = (1..=size + 1)
                .find(|&i| balance(j, size, i) <= 1)
                .expect("c_K(size+1) = 0");
            Ok(j.below(b).union(comp.at_least(b)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    Plus,
    Bar,
    Star,
}

/// `J⁺ = J ∪ {min J^c}`, its iterate `J̄` up to size `n`, or the lex-largest sparse size-`n` superset `J*`.
pub fn sparse_closure(j: Subset, kind: Closure, size: usize) -> Result<Subset> {
    check_size(j, size)?;
    if !is_sparse(j, size) {
        return input(format!("{j} is not sparse"));
    }
    let n = size / 2;
    match kind {
        Closure::Plus => {
            if j.len() >= n {
                return input(format!("plus needs |J| < {n}"));
            }
            let m = j.complement(size).min().expect("nonempty complement");
            Ok(j.with(m))
        }
        Closure::Bar => {
            let mut cur = j;
            while cur.len() < n {
                cur = cur.with(cur.complement(size).min().expect("nonempty complement"));
            }
            Ok(cur)
        }
        Closure::Star => enumerate_sparse(size, Some(n))
            .into_iter()
            .filter(|k| j.is_subset(*k))
            .max()
            .ok_or_else(|| KrlError::Internal(format!("no sparse superset of {j}"))),
    }
}
