//! The double complex `TS = R(n) ⊗ E[e_1,…,e_{2n-1}] / (e_i(x_i + x_{i+1}))` with `d_1(a) = a·u`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::is_sparse;
use crate::exterior::{sigma, ExtElement};
use crate::graph_rings::graded_quotient;
use crate::graphs::{hedgehog_analyze, Hedgehog};
use crate::linalg::smith_of_rows;
use crate::springer::NormalForms;
use crate::error::{input, KrlError, Result};
use crate::subset::Subset;

/// A basis key `x_J e_A`.
pub type TsKey = (Subset, Subset);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TsElement {
    pub terms: BTreeMap<TsKey, BigInt>,
}

impl TsElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, j: Subset, a: Subset) -> BigInt {
        self.terms.get(&(j, a)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, key: TsKey, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }
}

impl std::fmt::Display for TsElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((j, a), c)) in self.terms.iter().enumerate() {
            let neg = c < &BigInt::zero();
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let mag = if neg { -c } else { c.clone() };
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "x{j}e{a}")?;
        }
        Ok(())
    }
}

impl Serialize for TsElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|((j, a), c)| (j, a, c.to_string())))
    }
}

struct Component {
    hedgehog: Hedgehog,
    body: Subset,
    nf: NormalForms,
}

/// `TS` over a set of allowed pinch points (all of `1..2n-1` by default).
pub struct TsSpace {
    n: usize,
    universe: Subset,
    comps: HashMap<Subset, Component>,
}

impl TsSpace {
    pub fn new(n: usize) -> Result<TsSpace> {
        if n == 0 {
            return input("TS needs n ≥ 1");
        }
        TsSpace::with_universe(n, Subset::full(2 * n - 1))
    }

    pub fn with_universe(n: usize, universe: Subset) -> Result<TsSpace> {
        if n == 0 || !universe.is_subset(Subset::full(2 * n - 1)) {
            return input(format!("pinch universe {universe} must lie in 1..{}", 2 * n - 1));
        }
        let comps = universe
            .subsets()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|a| {
                let h = hedgehog_analyze(n, a)?;
                let body = h.body_vertices;
                Ok((a, Component { nf: NormalForms::new(body.len()), body, hedgehog: h }))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        Ok(TsSpace { n, universe, comps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> Subset {
        self.universe
    }

    fn comp(&self, a: Subset) -> Result<&Component> {
        self.comps.get(&a).ok_or_else(|| KrlError::Input(format!("{a} is not a subset of {}", self.universe)))
    }

    pub fn hedgehog(&self, a: Subset) -> Result<&Hedgehog> {
        Ok(&self.comp(a)?.hedgehog)
    }

    pub fn in_bts(&self, j: Subset, a: Subset) -> bool {
        let Ok(c) = self.comp(a) else { return false };
        j.is_subset(c.hedgehog.k_set()) && is_sparse(j.intersection(c.body).rank_in(c.body), c.body.len())
    }

    /// BTS elements with `|A| = p` (all if `None`) and `|J| = k`, sorted.
    pub fn basis(&self, p: Option<usize>, k: usize) -> Vec<TsKey> {
        let mut out = Vec::new();
        for a in self.universe.subsets() {
            if p.is_some_and(|p| a.len() != p) {
                continue;
            }
            let kset = self.comps[&a].hedgehog.k_set();
            for pos in Subset::all_of_size(kset.len(), k) {
                let j = pos.relabel(&kset.to_vec());
                if self.in_bts(j, a) {
                    out.push((j, a));
                }
            }
        }
        out.sort();
        out
    }

    /// Normal form of `c·x_J e_A` added into `out`.
    fn add_normal(&self, j: Subset, a: Subset, c: &BigInt, out: &mut TsElement) -> Result<()> {
        let comp = self.comp(a)?;
        j.check_within(2 * self.n)?;
        let mut folded = Subset::EMPTY;
        let mut sign = 1i8;
        for i in j.iter() {
            let (s, r) = comp.hedgehog.rep(i);
            if folded.contains(r) {
                return Ok(());
            }
            folded = folded.with(r);
            sign *= s;
        }
        let body_part = folded.intersection(comp.body);
        let spine_part = folded.difference(comp.body);
        let c = if sign < 0 { -c } else { c.clone() };
        let local = body_part.rank_in(comp.body);
        let bv = comp.body.to_vec();
        for (l, d) in comp.nf.monomial(local).terms() {
            out.add_term((l.relabel(&bv).union(spine_part), a), &c * d);
        }
        Ok(())
    }

    pub fn normal_form(&self, raw: &BTreeMap<TsKey, BigInt>) -> Result<TsElement> {
        let mut out = TsElement::default();
        for ((j, a), c) in raw {
            self.add_normal(*j, *a, c, &mut out)?;
        }
        Ok(out)
    }

    /// `d_1(x) = x·u` with `u = Σ e_t` over the universe; `e_A e_t = (-1)^{#{a∈A : a>t}} e_{A∪t}`.
    pub fn d1(&self, x: &TsElement) -> Result<TsElement> {
        let mut out = TsElement::default();
        for ((j, a), c) in &x.terms {
            for t in self.universe.iter() {
                if a.contains(t) {
                    continue;
                }
                let neg = a.above(t).len() % 2 == 1;
                let c = if neg { -c } else { c.clone() };
                self.add_normal(*j, a.with(t), &c, &mut out)?;
            }
        }
        Ok(out)
    }

    pub fn basis_element(j: Subset, a: Subset) -> TsElement {
        let mut e = TsElement::default();
        e.add_term((j, a), BigInt::one());
        e
    }
}

/// `ts_normal_form` for the full pinch universe.
pub fn ts_normal_form(n: usize, raw: &BTreeMap<TsKey, BigInt>) -> Result<TsElement> {
    TsSpace::new(n)?.normal_form(raw)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaClassification {
    pub j: Subset,
    pub a: Subset,
    pub p: usize,
    pub q: usize,
    pub extendable: bool,
    /// `η(x_J e_A)` when extendable, `ζ(x_J e_A)` otherwise.
    pub partner: TsKey,
    /// Extendability found by searching `a < min(A)` directly agrees with the `p`/`q` arithmetic.
    pub direct_agrees: bool,
}

pub fn classify_in(ts: &TsSpace, j: Subset, a: Subset) -> Result<EtaClassification> {
    let n = ts.n;
    if !ts.in_bts(j, a) {
        return input(format!("x{j}e{a} is not in BTS for n = {n}"));
    }
    let p = a.min().unwrap_or(2 * n);
    let q = Subset::interval(2, 2 * n)
        .difference(j)
        .min()
        .ok_or_else(|| KrlError::Internal(format!("Q is empty for J = {j}")))?
        - 1;
    let direct = (1..p).find(|&x| ts.universe.contains(x) && !a.contains(x) && ts.in_bts(j, a.with(x)));
    let (extendable, partner) = if q < p {
        (true, (j, a.with(q)))
    } else if q == p {
        (false, (j, a.without(p)))
    } else {
        return Err(KrlError::Internal(format!("q = {q} > p = {p} for x{j}e{a}")));
    };
    let direct_agrees = match direct {
        Some(x) => extendable && partner.1 == a.with(x),
        None => !extendable,
    };
    Ok(EtaClassification { j, a, p, q, extendable, partner, direct_agrees })
}

pub fn classify_bts(j: Subset, a: Subset, n: usize) -> Result<EtaClassification> {
    classify_in(&TsSpace::new(n)?, j, a)
}

/// One bidegree of a cochain complex: `dim` and the ranks of the maps in and out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BidegreeEntry {
    pub p: usize,
    pub k: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    /// Homology rank here.
    pub homology_rank: usize,
    /// Torsion of the cokernel of the incoming map (its image is saturated iff empty).
    pub torsion: Vec<String>,
    pub exact: bool,
}

/// A complex in a single `k`: `maps[p]` sends column `p` to `p+1`, rows are source vectors.
#[derive(Clone, Debug)]
pub struct ColumnComplex {
    pub k: usize,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<(usize, BigInt)>>>,
}

impl ColumnComplex {
    pub fn d_squared_zero(&self) -> bool {
        self.maps.windows(2).all(|w| {
            w[0].iter().all(|row| {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (mid, c) in row {
                    for (t, d) in &w[1][*mid] {
                        *acc.entry(*t).or_default() += c * d;
                    }
                }
                acc.values().all(|v| v.is_zero())
            })
        })
    }

    pub fn entries(&self) -> Vec<BidegreeEntry> {
        let invs: Vec<_> = self
            .maps
            .par_iter()
            .enumerate()
            .map(|(p, rows)| smith_of_rows(self.dims[p + 1], rows.clone()))
            .collect();
        (0..self.dims.len())
            .map(|p| {
                let (rank_in, torsion) = if p == 0 {
                    (0, Vec::new())
                } else {
                    (invs[p - 1].rank, invs[p - 1].torsion().iter().map(|t| t.to_string()).collect())
                };
                let rank_out = invs.get(p).map_or(0, |s| s.rank);
                let homology_rank = self.dims[p] - rank_in - rank_out;
                let exact = homology_rank == 0 && torsion.is_empty();
                BidegreeEntry { p, k: self.k, dim: self.dims[p], rank_in, rank_out, homology_rank, torsion, exact }
            })
            .collect()
    }
}

impl TsSpace {
    /// The `d_1` complex in x-degree `k`, over columns `p = 0..=|universe|`.
    pub fn column_complex(&self, k: usize) -> Result<(ColumnComplex, Vec<Vec<TsKey>>)> {
        let top = self.universe.len();
        let bases: Vec<Vec<TsKey>> = (0..=top).map(|p| self.basis(Some(p), k)).collect();
        let mut maps = Vec::new();
        for p in 0..top {
            let index: HashMap<TsKey, usize> = bases[p + 1].iter().enumerate().map(|(i, b)| (*b, i)).collect();
            let rows = bases[p]
                .par_iter()
                .map(|&(j, a)| {
                    let img = self.d1(&TsSpace::basis_element(j, a))?;
                    img.terms
                        .into_iter()
                        .map(|(key, c)| {
                            index
                                .get(&key)
                                .map(|i| (*i, c))
                                .ok_or_else(|| KrlError::Internal(format!("x{}e{} is outside BTS", key.0, key.1)))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            maps.push(rows);
        }
        Ok((ColumnComplex { k, dims: bases.iter().map(|b| b.len()).collect(), maps }, bases))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub n: usize,
    pub entries: Vec<BidegreeEntry>,
    pub d_squared_zero: bool,
    pub exact: bool,
    /// `|BTS|` per `(A, k)` equals the rank of `R(n)/(x_i + x_{i+1} : i∈A)` in degree `k`.
    pub basis_counts_match: bool,
    pub euler_zero: bool,
    pub eta_bijection: bool,
    pub eta_direct_agrees: bool,
    pub downward_closed: bool,
    pub triangular_failures: Vec<TsKey>,
    pub ok: bool,
}

fn order_key(k: &TsKey) -> (Subset, Reverse<Subset>) {
    (k.0, Reverse(k.1))
}

pub fn exactness_check(n: usize) -> Result<ExactnessReport> {
    if n < 2 {
        return input("exactness_check needs n ≥ 2");
    }
    let ts = TsSpace::new(n)?;
    let top = 2 * n;
    let mut entries = Vec::new();
    let mut d_squared_zero = true;
    let mut euler_zero = true;
    for k in 0..=n {
        let (cx, _) = ts.column_complex(k)?;
        d_squared_zero &= cx.d_squared_zero();
        let es = cx.entries();
        let chi: i64 = es.iter().map(|e| if e.p % 2 == 0 { e.dim as i64 } else { -(e.dim as i64) }).sum();
        euler_zero &= chi == 0;
        entries.extend(es);
    }
    let exact = entries.iter().all(|e| e.exact);

    let all: Vec<TsKey> = (0..=n).flat_map(|k| ts.basis(None, k)).collect();
    let basis_counts_match = ts.universe.subsets().collect::<Vec<_>>().par_iter().all(|&a| {
        let mut rel: Vec<ExtElement> = (1..=top).map(|k| sigma(top, k, Subset::full(top))).collect();
        for i in a.iter() {
            rel.push(&ExtElement::var(top, i) + &ExtElement::var(top, i + 1));
        }
        let Ok(g) = graded_quotient(top, &rel, top) else { return false };
        (0..=top).all(|k| all.iter().filter(|(j, b)| *b == a && j.len() == k).count() == g.degrees[k].rank)
    });

    let mut eta_bijection = true;
    let mut eta_direct_agrees = true;
    let mut downward_closed = true;
    let mut triangular_failures = Vec::new();
    let mut images = std::collections::HashSet::new();
    let mut unextendable = 0usize;
    for &(j, a) in &all {
        let c = classify_in(&ts, j, a)?;
        eta_direct_agrees &= c.direct_agrees;
        for b in a.subsets() {
            downward_closed &= ts.in_bts(j, b);
        }
        if c.extendable {
            let back = classify_in(&ts, c.partner.0, c.partner.1)?;
            eta_bijection &= !back.extendable && back.partner == (j, a);
            eta_bijection &= images.insert(c.partner);
            let img = ts.d1(&TsSpace::basis_element(j, a))?;
            let lead = img.coeff(c.partner.0, c.partner.1);
            let lower = img.terms.keys().all(|key| *key == c.partner || order_key(key) < order_key(&c.partner));
            if !(lead == BigInt::one() || lead == -BigInt::one()) || !lower {
                triangular_failures.push((j, a));
            }
        } else {
            unextendable += 1;
        }
    }
    eta_bijection &= images.len() == unextendable;
    let ok = d_squared_zero
        && exact
        && basis_counts_match
        && euler_zero
        && eta_bijection
        && eta_direct_agrees
        && downward_closed
        && triangular_failures.is_empty();
    Ok(ExactnessReport {
        n,
        entries,
        d_squared_zero,
        exact,
        basis_counts_match,
        euler_zero,
        eta_bijection,
        eta_direct_agrees,
        downward_closed,
        triangular_failures,
        ok,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoSetsReport {
    /// Column ranks `dim TS^{p,*}` by x-degree.
    pub columns: Vec<Vec<usize>>,
    /// `E_2^{p,k}` homology ranks.
    pub e2: Vec<Vec<usize>>,
    pub d_squared_zero: bool,
    pub e2_columns_1_2_vanish: bool,
    pub exact: bool,
    /// A corrupted copy of one `d_1` entry is caught.
    pub corruption_detected: bool,
}

fn two_sets_complexes() -> Result<Vec<ColumnComplex>> {
    let ts = TsSpace::with_universe(2, Subset::from_slice(&[1, 2]))?;
    (0..=2).map(|k| Ok(ts.column_complex(k)?.0)).collect()
}

fn complex_ok(cx: &ColumnComplex) -> bool {
    cx.d_squared_zero() && cx.entries().iter().all(|e| e.exact)
}

/// `X(2) = X(2,1) ∪ X(2,2)`: the three-column complex `R(2) → S(H{1}) ⊕ S(H{2}) → S(H{1,2})`.
pub fn mv_two_sets_demo() -> Result<TwoSetsReport> {
    let cxs = two_sets_complexes()?;
    let columns: Vec<Vec<usize>> = (0..3).map(|p| cxs.iter().map(|c| c.dims[p]).collect()).collect();
    let entries: Vec<Vec<BidegreeEntry>> = cxs.iter().map(|c| c.entries()).collect();
    let e2: Vec<Vec<usize>> = (0..3).map(|p| entries.iter().map(|es| es[p].homology_rank).collect()).collect();
    let d_squared_zero = cxs.iter().all(|c| c.d_squared_zero());
    let e2_columns_1_2_vanish = e2[1].iter().chain(&e2[2]).all(|r| *r == 0);
    let exact = cxs.iter().all(complex_ok);

    let mut bad = cxs[1].clone();
    let row = bad.maps[0].iter_mut().find(|r| !r.is_empty()).expect("nonzero d_1");
    row[0].1 += 1;
    let corruption_detected = !complex_ok(&bad);
    Ok(TwoSetsReport { columns, e2, d_squared_zero, e2_columns_1_2_vanish, exact, corruption_detected })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Subset {
        Subset::from_slice(v)
    }

    #[test]
    fn normal_form_examples() {
        let mut raw = BTreeMap::new();
        raw.insert((s(&[2]), s(&[1])), BigInt::one());
        assert_eq!(ts_normal_form(2, &raw).unwrap(), {
            let mut e = TsElement::default();
            e.add_term((s(&[1]), s(&[1])), -BigInt::one());
            e
        });
        let mut raw = BTreeMap::new();
        raw.insert((Subset::EMPTY, s(&[2, 3])), BigInt::from(3));
        assert_eq!(ts_normal_form(2, &raw).unwrap().coeff(Subset::EMPTY, s(&[2, 3])), BigInt::from(3));
    }

    #[test]
    fn d1_examples() {
        let ts = TsSpace::new(2).unwrap();
        let u = ts.d1(&TsSpace::basis_element(Subset::EMPTY, Subset::EMPTY)).unwrap();
        assert_eq!(u.to_string(), "xe{1} + xe{2} + xe{3}".replace("xe", "x{}e"));
        let x1 = ts.d1(&TsSpace::basis_element(s(&[1]), Subset::EMPTY)).unwrap();
        for t in 1..=3 {
            assert_eq!(x1.coeff(s(&[1]), s(&[t])), BigInt::one());
        }
        for k in 0..=3 {
            for (j, a) in ts.basis(None, k) {
                let dd = ts.d1(&ts.d1(&TsSpace::basis_element(j, a)).unwrap()).unwrap();
                assert!(dd.is_zero());
            }
        }
    }

    #[test]
    fn classification_examples() {
        let c = classify_bts(Subset::EMPTY, Subset::EMPTY, 2).unwrap();
        assert!(c.extendable);
        assert_eq!(c.partner, (Subset::EMPTY, s(&[1])));
        assert!(classify_bts(s(&[2]), s(&[1]), 2).is_err());
    }

    #[test]
    fn exact_small() {
        for n in 2..=3 {
            let r = exactness_check(n).unwrap();
            assert!(r.ok, "{r:?}");
        }
    }

    #[test]
    fn two_sets() {
        let r = mv_two_sets_demo().unwrap();
        assert_eq!(r.columns, vec![vec![1, 3, 2], vec![2, 4, 2], vec![1, 1, 0]]);
        assert!(r.d_squared_zero && r.e2_columns_1_2_vanish && r.exact);
        assert!(r.corruption_detected);
        let zero = ColumnComplex { k: 0, dims: vec![0, 0], maps: vec![vec![]] };
        assert!(complex_ok(&zero));
    }
}
