use std::fmt;

use serde::{Serialize, Serializer};

use super::{binom, is_sparse};
use crate::error::{input, KrlError, Result};
use crate::subset::Subset;

/// Fixed-point-free non-crossing involution on `{1,…,2n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    tau: Vec<usize>,
}

impl Matching {
    /// `tau[i-1] = τ(i)`.
    pub fn new(tau: Vec<usize>) -> Result<Matching> {
        let m = Matching { tau };
        m.validate()?;
        Ok(m)
    }

    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Matching> {
        let mut tau = vec![0; size];
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > size || b > size {
                return input(format!("pair ({a} {b}) outside 1..{size}"));
            }
            if tau[a - 1] != 0 || tau[b - 1] != 0 {
                return input(format!("point of ({a} {b}) used twice"));
            }
            tau[a - 1] = b;
            tau[b - 1] = a;
        }
        Matching::new(tau)
    }

    fn validate(&self) -> Result<()> {
        let size = self.tau.len();
        if size % 2 != 0 || size == 0 {
            return input(format!("matching needs a positive even size, got {size}"));
        }
        for i in 1..=size {
            let j = self.get(i);
            if j == 0 || j > size || j == i || self.get(j) != i {
                return input(format!("not a fixed-point-free involution at {i}"));
            }
        }
        for (a, b) in self.pairs() {
            for (c, d) in self.pairs() {
                if a < c && c < b && b < d {
                    return input(format!("arcs ({a} {b}) and ({c} {d}) cross"));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.tau.len()
    }

    pub fn n(&self) -> usize {
        self.tau.len() / 2
    }

    pub fn get(&self, i: usize) -> usize {
        self.tau[i - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.tau
    }

    /// Arcs `(i, τ(i))` with `i < τ(i)`, by left endpoint.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.size())
            .filter(|&i| self.get(i) > i)
            .map(|i| (i, self.get(i)))
            .collect()
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in self.pairs() {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.pairs().into_iter().map(|(a, b)| [a, b]))
    }
}

pub fn catalan(n: usize) -> u64 {
    binom(2 * n as i64, n as i64) / (n as u64 + 1)
}

/// All non-crossing matchings on `2n` points, ordered by the arc at 1 then recursively.
pub fn enumerate_ncm(n: usize) -> Vec<Matching> {
    fn rec(lo: usize, hi: usize, out: &mut Vec<Vec<(usize, usize)>>) {
        if lo > hi {
            out.push(Vec::new());
            return;
        }
        let mut partner = lo + 1;
        while partner <= hi {
            let mut inner = Vec::new();
            rec(lo + 1, partner - 1, &mut inner);
            let mut outer = Vec::new();
            rec(partner + 1, hi, &mut outer);
            for a in &inner {
                for b in &outer {
                    let mut v = vec![(lo, partner)];
                    v.extend_from_slice(a);
                    v.extend_from_slice(b);
                    out.push(v);
                }
            }
            partner += 2;
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    rec(1, 2 * n, &mut raw);
    raw.into_iter()
        .map(|p| Matching::from_pairs(2 * n, &p).expect("constructed non-crossing"))
        .collect()
}

/// Left endpoints `{i : τ(i) > i}`.
pub fn lambda_of(tau: &Matching) -> Subset {
    (1..=tau.size())
        .filter(|&i| tau.get(i) > i)
        .fold(Subset::EMPTY, |s, i| s.with(i))
}

/// Inverse of [`lambda_of`]: `τ(j) = min(J^c_{>j} ∖ τ(J_{>j}))` for `j ∈ J`, largest first.
pub fn mu_of(j: Subset, size: usize) -> Result<Matching> {
    if size == 0 || size % 2 != 0 || size > 63 {
        return input(format!("matching needs an even size in 2..=62, got {size}"));
    }
    j.check_within(size)?;
    if j.len() != size / 2 || !is_sparse(j, size) {
        return input(format!("{j} is not a sparse set of size {}", size / 2));
    }
    let comp = j.complement(size);
    let mut tau = vec![0usize; size];
    let mut used = Subset::EMPTY;
    for x in j.iter_desc() {
        let y = comp
            .above(x)
            .difference(used)
            .min()
            .ok_or_else(|| KrlError::Internal(format!("no partner for {x} in {j}")))?;
        used = used.with(y);
        tau[x - 1] = y;
        tau[y - 1] = x;
    }
    Matching::new(tau).map_err(|e| KrlError::Internal(format!("mu produced invalid matching: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_sparse;

    #[test]
    fn worked_example() {
        let tau = Matching::from_pairs(8, &[(1, 2), (3, 8), (4, 5), (6, 7)]).unwrap();
        assert_eq!(lambda_of(&tau), Subset::from_slice(&[1, 3, 4, 6]));
        assert_eq!(mu_of(Subset::from_slice(&[1, 3, 4, 6]), 8).unwrap(), tau);
        assert_eq!(mu_of(Subset::from_slice(&[1, 3]), 4).unwrap().to_string(), "(1 2)(3 4)");
        let t = Matching::from_pairs(4, &[(1, 4), (2, 3)]).unwrap();
        assert_eq!(lambda_of(&t), Subset::from_slice(&[1, 2]));
        assert!(mu_of(Subset::from_slice(&[2, 3]), 4).is_err());
    }

    #[test]
    fn crossing_rejected() {
        assert!(Matching::from_pairs(4, &[(1, 3), (2, 4)]).is_err());
    }

    #[test]
    fn counts_and_bijection() {
        for n in 1..=6 {
            let all = enumerate_ncm(n);
            assert_eq!(all.len() as u64, catalan(n));
            for tau in &all {
                let l = lambda_of(tau);
                assert_eq!(&mu_of(l, 2 * n).unwrap(), tau);
                for i in 1..=2 * n {
                    assert_eq!((tau.get(i) as i64 - i as i64).rem_euclid(2), 1);
                }
            }
            for j in enumerate_sparse(2 * n, Some(n)) {
                assert_eq!(lambda_of(&mu_of(j, 2 * n).unwrap()), j);
            }
        }
    }
}
