//! Exact integer matrices and Smith normal form invariants.
//!
//! Elimination first pivots on unit entries in sparse storage, which leaves the
//! invariant factors unchanged and removes one row and one column per pivot.
//! Whatever survives goes through a dense arbitrary-precision Smith reduction.

mod dense;

pub use dense::dense_smith;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub trait Coef: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero_value() -> Self;
    fn vanishes(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `self - k·p`, or `None` on overflow.
    fn sub_mul(&self, k: &Self, p: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Coef for i64 {
    fn zero_value() -> Self {
        0
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(&self, k: &Self, p: &Self) -> Option<Self> {
        self.checked_sub(k.checked_mul(*p)?)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn sub_mul(&self, k: &Self, p: &Self) -> Option<Self> {
        Some(self - k * p)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Row-sparse integer matrix; each row is sorted by column with no zero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct IntMatrix<T: Coef = BigInt> {
    cols: usize,
    rows: Vec<Vec<(u32, T)>>,
}

impl<T: Coef> IntMatrix<T> {
    pub fn new(cols: usize) -> Self {
        IntMatrix { cols, rows: Vec::new() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Append a row given as `(column, value)` pairs in any order; duplicates are not allowed.
    pub fn push_row(&mut self, mut entries: Vec<(usize, T)>) {
        entries.retain(|(_, v)| !v.vanishes());
        entries.sort_by_key(|(c, _)| *c);
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0), "duplicate column in row");
        debug_assert!(entries.iter().all(|(c, _)| *c < self.cols), "column out of range");
        self.rows.push(entries.into_iter().map(|(c, v)| (c as u32, v)).collect());
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &T)> {
        self.rows[i].iter().map(|(c, v)| (*c as usize, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows.len()];
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                d[i][*c as usize] = v.to_big();
            }
        }
        d
    }

    pub fn to_big(&self) -> IntMatrix<BigInt> {
        IntMatrix {
            cols: self.cols,
            rows: self.rows.iter().map(|r| r.iter().map(|(c, v)| (*c, v.to_big())).collect()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<Vec<(u32, T)>> = vec![Vec::new(); self.cols];
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                cols[*c as usize].push((i as u32, v.clone()));
            }
        }
        IntMatrix { cols: self.rows.len(), rows: cols }
    }

    /// `self · other` (row count of `other` must equal our column count), in `BigInt`.
    pub fn product(&self, other: &IntMatrix<T>) -> IntMatrix<BigInt> {
        assert_eq!(self.cols, other.rows.len(), "dimension mismatch");
        let mut out = IntMatrix::new(other.cols);
        for r in &self.rows {
            let mut acc: std::collections::BTreeMap<u32, BigInt> = Default::default();
            for (k, a) in r {
                for (c, b) in &other.rows[*k as usize] {
                    *acc.entry(*c).or_default() += a.to_big() * b.to_big();
                }
            }
            out.push_row(acc.into_iter().map(|(c, v)| (c as usize, v)).collect());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }
}

/// Nonzero invariant factors of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithInvariants {
    pub rank: usize,
    /// Elementary divisors, each dividing the next, all positive.
    #[serde(serialize_with = "ser_bigs")]
    pub divisors: Vec<BigInt>,
}

fn ser_bigs<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

impl SmithInvariants {
    /// Divisors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn all_units(&self) -> bool {
        self.divisors.iter().all(|d| d.is_one())
    }
}

struct Eliminator<T: Coef> {
    rows: Vec<Option<Vec<(u32, T)>>>,
    col_rows: Vec<Vec<u32>>,
    col_alive: Vec<bool>,
}

fn find<T>(row: &[(u32, T)], c: u32) -> Option<&T> {
    row.binary_search_by_key(&c, |(k, _)| *k).ok().map(|i| &row[i].1)
}

/// `a - k·b` on sorted sparse rows.
fn axpy<T: Coef>(a: &[(u32, T)], k: &T, b: &[(u32, T)]) -> Option<Vec<(u32, T)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = T::zero_value().sub_mul(k, &b[j].1)?;
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = a[i].1.sub_mul(k, &b[j].1)?;
            if !v.vanishes() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

impl<T: Coef> Eliminator<T> {
    fn new(m: &IntMatrix<T>) -> Self {
        let mut col_rows = vec![Vec::new(); m.cols];
        for (i, r) in m.rows.iter().enumerate() {
            for (c, _) in r {
                col_rows[*c as usize].push(i as u32);
            }
        }
        Eliminator {
            rows: m.rows.iter().map(|r| (!r.is_empty()).then(|| r.clone())).collect(),
            col_rows,
            col_alive: vec![true; m.cols],
        }
    }

    /// Unit-pivot elimination; returns the number of pivots, or `None` on coefficient overflow.
    fn run(&mut self) -> Option<usize> {
        let mut pivots = 0;
        loop {
            let mut order: Vec<(usize, usize)> = self
                .rows
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.as_ref().map(|r| (r.len(), i)))
                .collect();
            order.sort_unstable();
            let before = pivots;
            for (_, r) in order {
                let Some(row) = self.rows[r].as_ref() else { continue };
                let best = row
                    .iter()
                    .filter(|(_, v)| v.is_unit())
                    .min_by_key(|(c, _)| self.col_rows[*c as usize].len())
                    .map(|(c, v)| (*c, v.clone()));
                let Some((c, p)) = best else { continue };
                let prow = self.rows[r].take().expect("row present");
                let others = std::mem::take(&mut self.col_rows[c as usize]);
                for r2 in others {
                    let r2 = r2 as usize;
                    if r2 == r {
                        continue;
                    }
                    let Some(other) = self.rows[r2].as_ref() else { continue };
                    let Some(v) = find(other, c) else { continue };
                    // p = ±1, so p⁻¹ = p
                    let k = v.mul(&p)?;
                    let new = axpy(other, &k, &prow)?;
                    for (nc, _) in &new {
                        if find(other, *nc).is_none() {
                            self.col_rows[*nc as usize].push(r2 as u32);
                        }
                    }
                    self.rows[r2] = (!new.is_empty()).then_some(new);
                }
                self.col_alive[c as usize] = false;
                pivots += 1;
            }
            if pivots == before {
                return Some(pivots);
            }
        }
    }

    fn residual(&self) -> Vec<Vec<BigInt>> {
        let live: Vec<usize> = (0..self.col_alive.len()).filter(|&c| self.col_alive[c]).collect();
        let mut index = vec![usize::MAX; self.col_alive.len()];
        for (k, &c) in live.iter().enumerate() {
            index[c] = k;
        }
        let mut used = vec![false; live.len()];
        let rows: Vec<&Vec<(u32, T)>> = self.rows.iter().flatten().collect();
        for r in &rows {
            for (c, _) in r.iter() {
                used[index[*c as usize]] = true;
            }
        }
        let kept: Vec<usize> = (0..live.len()).filter(|&k| used[k]).collect();
        let mut pos = vec![usize::MAX; live.len()];
        for (k, &c) in kept.iter().enumerate() {
            pos[c] = k;
        }
        rows.iter()
            .map(|r| {
                let mut d = vec![BigInt::zero(); kept.len()];
                for (c, v) in r.iter() {
                    d[pos[index[*c as usize]]] = v.to_big();
                }
                d
            })
            .collect()
    }
}

fn smith_generic<T: Coef>(m: &IntMatrix<T>) -> Option<SmithInvariants> {
    let mut el = Eliminator::new(m);
    let units = el.run()?;
    let rest = dense_smith(el.residual());
    let mut divisors = vec![BigInt::one(); units];
    divisors.extend(rest);
    Some(SmithInvariants { rank: divisors.len(), divisors })
}

pub fn smith_invariants<T: Coef>(m: &IntMatrix<T>) -> SmithInvariants {
    if let Some(s) = smith_generic(m) {
        return s;
    }
    smith_generic(&m.to_big()).expect("BigInt elimination cannot overflow")
}

pub fn rank<T: Coef>(m: &IntMatrix<T>) -> usize {
    smith_invariants(m).rank
}

/// Smith invariants of a matrix given by sparse `BigInt` rows, using `i64` when every entry fits.
pub fn smith_of_rows(cols: usize, rows: Vec<Vec<(usize, BigInt)>>) -> SmithInvariants {
    use num_traits::ToPrimitive;
    let small: Option<Vec<Vec<(usize, i64)>>> =
        rows.iter().map(|r| r.iter().map(|(c, v)| v.to_i64().map(|x| (*c, x))).collect()).collect();
    match small {
        Some(rs) => {
            let mut m = IntMatrix::<i64>::new(cols);
            for r in rs {
                m.push_row(r);
            }
            smith_invariants(&m)
        }
        None => {
            let mut m = IntMatrix::<BigInt>::new(cols);
            for r in rows {
                m.push_row(r);
            }
            smith_invariants(&m)
        }
    }
}

/// Cokernel `Z^cols / rowspace`: free rank and torsion.
pub fn cokernel<T: Coef>(m: &IntMatrix<T>) -> (usize, Vec<BigInt>) {
    let s = smith_invariants(m);
    (m.ncols() - s.rank, s.torsion())
}
