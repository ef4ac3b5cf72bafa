//! Subsets of `{1,…,m}` for `m ≤ 64`, stored as bitmasks.
//!
//! Bit `i-1` holds element `i`. The total order on [`Subset`] is the
//! lexicographic order on increasing sequences, where a proper prefix is
//! smaller than any extension.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, Result};

pub const MAX_ELEMENT: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn singleton(i: usize) -> Subset {
        debug_assert!((1..=MAX_ELEMENT).contains(&i));
        Subset(1u64 << (i - 1))
    }

    /// `{lo, lo+1, …, hi}`; empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize) -> Subset {
        let lo = lo.max(1);
        if lo > hi {
            return Subset::EMPTY;
        }
        Subset::full(hi).difference(Subset::full(lo - 1))
    }

    /// `{1,…,m}`.
    pub fn full(m: usize) -> Subset {
        if m >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << m) - 1)
        }
    }

    pub fn from_slice(xs: &[usize]) -> Subset {
        xs.iter().fold(Subset::EMPTY, |s, &i| s.with(i))
    }

    /// Validating constructor for user input.
    pub fn parse_in(xs: &[usize], m: usize) -> Result<Subset> {
        let mut s = Subset::EMPTY;
        for &i in xs {
            if i == 0 || i > m || i > MAX_ELEMENT {
                return input(format!("element {i} outside 1..{m}"));
            }
            s = s.with(i);
        }
        Ok(s)
    }

    pub fn check_within(self, m: usize) -> Result<()> {
        if self.is_subset(Subset::full(m)) {
            Ok(())
        } else {
            input(format!("{self} is not contained in 1..{m}"))
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= MAX_ELEMENT && self.0 >> (i - 1) & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | Subset::singleton(i).0)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !Subset::singleton(i).0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    pub fn union(self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }

    pub fn intersection(self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }

    pub fn difference(self, o: Subset) -> Subset {
        Subset(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: Subset) -> bool {
        self.0 & o.0 == 0
    }

    /// Complement inside `{1,…,m}`.
    pub fn complement(self, m: usize) -> Subset {
        Subset::full(m).difference(self)
    }

    /// Elements strictly greater than `j`.
    pub fn above(self, j: usize) -> Subset {
        if j >= 64 {
            Subset::EMPTY
        } else {
            Subset(self.0 & !((1u64 << j) - 1))
        }
    }

    /// Elements `≥ j`.
    pub fn at_least(self, j: usize) -> Subset {
        self.above(j.saturating_sub(1))
    }

    /// Elements strictly smaller than `j`.
    pub fn below(self, j: usize) -> Subset {
        self.difference(self.at_least(j))
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    pub fn iter_desc(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let top = 63 - bits.leading_zeros() as usize;
                bits &= !(1u64 << top);
                Some(top + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Number of elements strictly less than `t`.
    pub fn count_below(self, t: usize) -> usize {
        self.below(t).len()
    }

    /// Lexicographic comparison of the increasing sequences.
    pub fn lex_cmp(self, other: Subset) -> Ordering {
        let d = self.0 ^ other.0;
        if d == 0 {
            return Ordering::Equal;
        }
        let pos = d.trailing_zeros();
        let rest = |s: u64| if pos == 63 { 0 } else { s >> (pos + 1) };
        if self.0 >> pos & 1 == 1 {
            if rest(other.0) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if rest(self.0) != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Relabel through an order-preserving map: element `i` goes to `map[i-1]`.
    pub fn relabel(self, map: &[usize]) -> Subset {
        self.iter().fold(Subset::EMPTY, |s, i| s.with(map[i - 1]))
    }

    /// Positions (1-based) of the members of `self` inside the increasing list of `ambient`.
    pub fn rank_in(self, ambient: Subset) -> Subset {
        let mut out = Subset::EMPTY;
        for (k, a) in ambient.iter().enumerate() {
            if self.contains(a) {
                out = out.with(k + 1);
            }
        }
        out
    }

    /// All subsets of `{1,…,m}` of size `k`, in increasing bitmask order.
    pub fn all_of_size(m: usize, k: usize) -> impl Iterator<Item = Subset> {
        assert!(m < 64);
        let limit = 1u64 << m;
        let mut cur = (k <= m).then(|| (1u64 << k) - 1);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == 0 {
                None
            } else {
                // Gosper's hack
                let low = c & c.wrapping_neg();
                let r = c + low;
                let next = (((r ^ c) >> 2) / low) | r;
                (next < limit).then_some(next)
            };
            Some(Subset(c))
        })
    }

    /// All subsets of `{1,…,m}` in bitmask order.
    pub fn all(m: usize) -> impl Iterator<Item = Subset> {
        assert!(m < 64);
        (0..(1u64 << m)).map(Subset)
    }

    /// All subsets of `self`.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut cur = Some(0u64);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == full { None } else { Some((c.wrapping_sub(full)) & full) };
            Some(Subset(c))
        })
    }
}

pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(*other)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        Subset::parse_in(&v, MAX_ELEMENT).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex_oracle(a: Subset, b: Subset) -> Ordering {
        a.to_vec().cmp(&b.to_vec())
    }

    #[test]
    fn lex_matches_sequence_order() {
        for a in Subset::all(6) {
            for b in Subset::all(6) {
                assert_eq!(a.lex_cmp(b), lex_oracle(a, b), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn equal_size_symmetric_difference_rule() {
        for a in Subset::all(6) {
            for b in Subset::all(6).filter(|b| b.len() == a.len() && *b != a) {
                let m = Subset(a.0 ^ b.0).min().unwrap();
                assert_eq!(a < b, a.contains(m));
            }
        }
    }

    #[test]
    fn size_k_enumeration() {
        for m in 0..8 {
            for k in 0..=m + 1 {
                let got: Vec<_> = Subset::all_of_size(m, k).collect();
                let want: Vec<_> = Subset::all(m).filter(|s| s.len() == k).collect();
                assert_eq!(got, want, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn sub_iteration() {
        let s = Subset::from_slice(&[2, 5, 7]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
    }

    #[test]
    fn slices() {
        let s = Subset::from_slice(&[1, 3, 4, 8]);
        assert_eq!(s.above(3).to_vec(), vec![4, 8]);
        assert_eq!(s.at_least(3).to_vec(), vec![3, 4, 8]);
        assert_eq!(s.below(4).to_vec(), vec![1, 3]);
        assert_eq!(s.complement(8).to_vec(), vec![2, 5, 6, 7]);
        assert_eq!(s.iter_desc().collect::<Vec<_>>(), vec![8, 4, 3, 1]);
        assert_eq!(Subset::interval(3, 5).to_vec(), vec![3, 4, 5]);
        assert_eq!(s.max(), Some(8));
    }
}
