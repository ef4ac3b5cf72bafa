//! Flags of submodules of `V(n) = (F_q[t]/t^n)^2` over a prime field.

mod lemmas;
mod subspace;

pub use lemmas::{chain_lemma_scan, LemmaResult, LemmaScan};
pub use subspace::{thin_invariants, Fp, Subspace, ThinInvariants, TorsionAmbient};

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{enumerate_sparse, mu_of, Matching};
use crate::error::{input, KrlError, Result};
use crate::graphs::{make_standard, ncm_to_folding, quotient, BiGraph, Folding, StandardKind};
use crate::springer::hilbert_ranks;
use crate::subset::Subset;

/// Default cap on `(q+1)^{2n}`.
pub const DEFAULT_FLAG_CAP: u64 = 1 << 24;

/// A complete flag `0 = W_0 < … < W_{2n} = V(n)` of submodules with `tW_i ≤ W_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FqFlag {
    pub n: usize,
    pub q: u32,
    /// The vector added at each step.
    pub steps: Vec<Vec<u8>>,
    #[serde(skip)]
    pub spaces: Vec<Subspace>,
}

impl FqFlag {
    pub fn ambient(&self) -> TorsionAmbient {
        TorsionAmbient { len: self.n }
    }

    pub fn space(&self, i: usize) -> &Subspace {
        &self.spaces[i]
    }
}

/// The lab context: `V(n)` over `F_q`.
#[derive(Clone, Debug)]
pub struct FlagLab {
    pub n: usize,
    pub field: Fp,
}

impl FlagLab {
    pub fn new(n: usize, q: u32) -> Result<FlagLab> {
        if n == 0 {
            return input("flag lab needs n ≥ 1");
        }
        Ok(FlagLab { n, field: Fp::new(q)? })
    }

    pub fn ambient(&self) -> TorsionAmbient {
        TorsionAmbient { len: self.n }
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn thin(&self, w: &Subspace, u: &Subspace) -> ThinInvariants {
        thin_invariants(&self.field, self.ambient(), w, u).expect("subquotients of V(n) are thin")
    }

    pub fn balanced(&self, w: &Subspace, u: &Subspace) -> bool {
        self.thin(w, u).balanced()
    }

    /// Lines of `t^{-1}W / W`, each given by a representative vector.
    fn next_lines(&self, w: &Subspace) -> Vec<Vec<u8>> {
        let f = &self.field;
        let amb = self.ambient();
        let pre = w.preimage(f, amb, 1, &amb.whole());
        let mut comp: Vec<Vec<u8>> = Vec::new();
        let mut acc = w.clone();
        for v in pre.basis() {
            if !acc.contains_vec(f, v) {
                acc = acc.sum(f, &Subspace::span(f, amb.dim(), [v.clone()]));
                comp.push(v.clone());
            }
        }
        assert!(comp.len() <= 2, "t^{{-1}}W/W has dimension at most 2");
        match comp.as_slice() {
            [] => Vec::new(),
            [a] => vec![a.clone()],
            [a, b] => {
                let mut out = vec![a.clone()];
                for c in 0..self.q() as u8 {
                    let v: Vec<u8> = b.iter().zip(a).map(|(x, y)| f.add(*x, f.mul(c, *y))).collect();
                    out.push(v);
                }
                out
            }
            _ => unreachable!(),
        }
    }

    fn extend(&self, spaces: &mut Vec<Subspace>, steps: &mut Vec<Vec<u8>>, out: &mut Vec<FqFlag>) {
        let top = 2 * self.n;
        if spaces.len() == top + 1 {
            out.push(FqFlag { n: self.n, q: self.q(), steps: steps.clone(), spaces: spaces.clone() });
            return;
        }
        let w = spaces.last().expect("W_0").clone();
        for v in self.next_lines(&w) {
            let next = w.sum(&self.field, &Subspace::span(&self.field, w.ambient_dim(), [v.clone()]));
            spaces.push(next);
            steps.push(v);
            self.extend(spaces, steps, out);
            spaces.pop();
            steps.pop();
        }
    }

    /// Every complete flag, in depth-first order; refuses when `(q+1)^{2n}` exceeds `cap`.
    pub fn enumerate_flags(&self, cap: u64) -> Result<Vec<FqFlag>> {
        let estimate = (self.q() as u64 + 1).checked_pow(2 * self.n as u32).unwrap_or(u64::MAX);
        if estimate > cap {
            return Err(KrlError::Budget { what: format!("flags for n={}, q={}", self.n, self.q()), estimate, cap });
        }
        let zero = Subspace::zero(self.ambient().dim());
        let first = self.next_lines(&zero);
        let parts: Vec<Vec<FqFlag>> = first
            .into_par_iter()
            .map(|v| {
                let w1 = Subspace::span(&self.field, zero.ambient_dim(), [v.clone()]);
                let mut out = Vec::new();
                self.extend(&mut vec![zero.clone(), w1], &mut vec![v], &mut out);
                out
            })
            .collect();
        Ok(parts.into_iter().flatten().collect())
    }

    /// `W_{i+1}/W_{i-1}` is balanced, for `0 < i < 2n`.
    pub fn in_xni(&self, flag: &FqFlag, i: usize) -> bool {
        i > 0 && i < 2 * self.n && self.balanced(&flag.spaces[i + 1], &flag.spaces[i - 1])
    }

    /// Largest `m` with the flag prefix `W_0..W_m` in `X(n,K,m)`.
    pub fn xnk_prefix(&self, flag: &FqFlag, k: Subset, tau: &Matching) -> usize {
        for i in 1..=2 * self.n {
            if !k.contains(i) && !self.balanced(&flag.spaces[i], &flag.spaces[tau.get(i) - 1]) {
                return i - 1;
            }
        }
        2 * self.n
    }

    /// For each `i ∉ K`, `W_i/W_{τ(i)-1}` is balanced with `τ = μ(K)`.
    pub fn in_xnk(&self, flag: &FqFlag, k: Subset) -> Result<bool> {
        let tau = mu_of(k, 2 * self.n)?;
        Ok(self.xnk_prefix(flag, k, &tau) == 2 * self.n)
    }

    /// The unrolled spaces `W̃_0, …, W̃_{4n}` inside `(F_q[t]/t^{2n})^2`.
    ///
    /// Multiplication by `t^{2n}` identifies `t^{-2n}V/V` with this ambient; then
    /// `W̃_i` is `t^n·W_i` for `i ≤ 2n` and `W_i + t^n(...)` for `W̃_{2n+i} = t^{-n}W̃_i`.
    pub fn unrolled_spaces(&self, flag: &FqFlag) -> (TorsionAmbient, Vec<Subspace>) {
        let n = self.n;
        let big = TorsionAmbient { len: 2 * n };
        let small = self.ambient();
        let f = &self.field;
        let low: Vec<Subspace> = flag.spaces.iter().map(|w| w.shifted(f, small, big, n)).collect();
        let tail = big.t_power_part(n);
        let high: Vec<Subspace> = flag.spaces[1..].iter().map(|w| w.shifted(f, small, big, 0).sum(f, &tail)).collect();
        (big, low.into_iter().chain(high).collect())
    }

    pub fn unrolled_metric(&self, flag: &FqFlag) -> UnrolledMetric {
        let n = self.n;
        let top = 4 * n;
        let (big, sp) = self.unrolled_spaces(flag);
        let mut window = vec![vec![0usize; top + 1]; top + 1];
        for i in 0..=top {
            for j in i..=top {
                let inv = thin_invariants(&self.field, big, &sp[j], &sp[i]).expect("unrolled subquotients are thin");
                window[i][j] = inv.delta;
                window[j][i] = inv.delta;
            }
        }
        let m = 2 * n;
        let mut triangle = true;
        for a in 0..=top {
            for b in 0..=top {
                for c in 0..=top {
                    triangle &= window[a][c] <= window[a][b] + window[b][c];
                }
            }
        }
        let periodic = (0..=m).all(|i| (i..=m).all(|j| window[i][j] == window[i + m][j + m]));
        let parity = (0..=top).all(|i| (i..=top).all(|j| window[i][j] % 2 == (j - i) % 2));
        let adjacent_one = (0..top).all(|i| window[i][i + 1] == 1);
        let antipodal_zero = (0..=m).all(|i| window[i][i + m] == 0);
        let d: Vec<Vec<usize>> = (0..m).map(|a| (0..m).map(|b| window[a][b]).collect()).collect();
        let well_defined = (0..m).all(|a| (a..m).all(|b| window[a][b] == window[b][a + m]));
        UnrolledMetric { n, window, d, triangle, periodic, parity, adjacent_one, antipodal_zero, well_defined }
    }

    pub fn tree_from_flag(&self, flag: &FqFlag) -> Result<FlagTree> {
        let metric = self.unrolled_metric(flag);
        tree_from_metric(self.n, &metric.d)
    }

    pub fn cover_scan(&self, cap: u64) -> Result<CoverReport> {
        let n = self.n;
        let flags = self.enumerate_flags(cap)?;
        let ks = enumerate_sparse(2 * n, Some(n));
        let taus: Vec<Matching> = ks.iter().map(|k| mu_of(*k, 2 * n)).collect::<Result<_>>()?;
        let rows: Vec<FlagMembership> = flags
            .par_iter()
            .enumerate()
            .map(|(idx, fl)| FlagMembership {
                index: idx,
                xni: (1..2 * n).filter(|&i| self.in_xni(fl, i)).collect(),
                xnk: ks.iter().zip(&taus).filter(|(k, tau)| self.xnk_prefix(fl, **k, tau) == 2 * n).map(|(k, _)| *k).collect(),
            })
            .collect();
        let per_i = (1..2 * n).map(|i| rows.iter().filter(|r| r.xni.contains(&i)).count()).collect();
        let per_k = ks.iter().map(|k| (*k, rows.iter().filter(|r| r.xnk.contains(k)).count())).collect();
        let uncovered_i: Vec<usize> = rows.iter().filter(|r| !r.xni.iter().any(|&i| i <= n)).map(|r| r.index).collect();
        let uncovered_k: Vec<usize> = rows.iter().filter(|r| r.xnk.is_empty()).map(|r| r.index).collect();
        let q = self.q() as u64;
        let poincare_count = hilbert_ranks(n).iter().enumerate().map(|(i, r)| r * q.pow(i as u32)).sum();
        let counterexample = uncovered_i.first().or(uncovered_k.first()).map(|&i| flags[i].clone());
        Ok(CoverReport {
            n,
            q: self.q(),
            flags: flags.len(),
            poincare_count,
            per_i,
            per_k,
            ok: uncovered_i.is_empty() && uncovered_k.is_empty(),
            uncovered_i,
            uncovered_k,
            counterexample,
            memberships: rows,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagMembership {
    pub index: usize,
    pub xni: Vec<usize>,
    pub xnk: Vec<Subset>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub n: usize,
    pub q: u32,
    pub flags: usize,
    /// `Σ rank_i q^i` from the ranks of `R(n)`; reported next to `flags`, not asserted.
    pub poincare_count: u64,
    /// Flags in `X(n,i)` for `i = 1, …, 2n-1`.
    pub per_i: Vec<usize>,
    pub per_k: Vec<(Subset, usize)>,
    /// Flags in no `X(n,i)` with `i ≤ n`.
    pub uncovered_i: Vec<usize>,
    /// Flags in no `X(n,K)`.
    pub uncovered_k: Vec<usize>,
    pub ok: bool,
    pub counterexample: Option<FqFlag>,
    #[serde(skip)]
    pub memberships: Vec<FlagMembership>,
}

/// `d(i,j) = δ(W̃_j/W̃_i)` on the window `[0,4n]`, and its restriction `d` to `Z/2n`.
#[derive(Clone, Debug, Serialize)]
pub struct UnrolledMetric {
    pub n: usize,
    pub window: Vec<Vec<usize>>,
    pub d: Vec<Vec<usize>>,
    pub triangle: bool,
    pub periodic: bool,
    pub parity: bool,
    pub adjacent_one: bool,
    pub antipodal_zero: bool,
    /// `d(a,b) = d(b,a+2n)`, so `d` descends to `Z/2n`.
    pub well_defined: bool,
}

impl UnrolledMetric {
    pub fn ok(&self) -> bool {
        self.triangle && self.periodic && self.parity && self.adjacent_one && self.antipodal_zero && self.well_defined
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagTree {
    pub folding: Vec<usize>,
    pub graph: crate::graphs::GraphJson,
    pub edge_count: usize,
    pub is_tree: bool,
    /// Path metric of the quotient equals `d`.
    pub metric_match: bool,
    #[serde(skip)]
    pub fold: Folding,
    #[serde(skip)]
    pub tree: BiGraph,
}

/// Fold `C(n)` by `d = 0` and compare the path metric with `d`.
pub fn tree_from_metric(n: usize, d: &[Vec<usize>]) -> Result<FlagTree> {
    let m = 2 * n;
    let labels: Vec<usize> = (0..m).map(|a| (0..m).find(|&b| d[a][b] == 0).expect("d(a,a) = 0")).collect();
    let fold = Folding::from_labels(&labels);
    let q = quotient(&make_standard(StandardKind::C, n)?, &fold)?;
    let g = q.graph;
    let dist: Vec<Vec<Option<usize>>> = (0..g.vertex_count()).map(|v| g.distances_from(v)).collect();
    let metric_match =
        (0..m).all(|a| (0..m).all(|b| dist[q.vertex_map[a]][q.vertex_map[b]] == Some(d[a][b])));
    Ok(FlagTree {
        folding: fold.labels().to_vec(),
        graph: g.to_json(),
        edge_count: g.edge_count(),
        is_tree: g.is_tree(),
        metric_match,
        fold,
        tree: g,
    })
}

/// Per-flag tree data over a whole enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct TreeScan {
    pub n: usize,
    pub q: u32,
    pub flags: usize,
    pub metric_failures: usize,
    pub non_trees: usize,
    pub metric_mismatches: usize,
    /// `(edge count, number of flags)`.
    pub edge_counts: Vec<(usize, usize)>,
    /// Flag-K pairs with the flag in `X(n,K)`, and how many of them have tree folding equal to that of `μ(K)`.
    pub xnk_pairs: usize,
    pub xnk_tree_equal: usize,
}

impl TreeScan {
    pub fn ok(&self) -> bool {
        self.metric_failures == 0 && self.non_trees == 0 && self.metric_mismatches == 0
    }
}

pub fn tree_scan(lab: &FlagLab, cap: u64) -> Result<TreeScan> {
    let n = lab.n;
    let flags = lab.enumerate_flags(cap)?;
    let ks = enumerate_sparse(2 * n, Some(n));
    let taus: Vec<Matching> = ks.iter().map(|k| mu_of(*k, 2 * n)).collect::<Result<_>>()?;
    let folds: Vec<Folding> = taus.iter().map(ncm_to_folding).collect();
    let per: Vec<(bool, FlagTree, usize, usize)> = flags
        .par_iter()
        .map(|fl| {
            let metric = lab.unrolled_metric(fl);
            let tree = tree_from_metric(n, &metric.d).expect("d separates adjacent vertices");
            let mut pairs = 0;
            let mut equal = 0;
            for ((k, tau), f) in ks.iter().zip(&taus).zip(&folds) {
                if lab.xnk_prefix(fl, *k, tau) == 2 * n {
                    pairs += 1;
                    equal += (tree.fold == *f) as usize;
                }
            }
            (metric.ok(), tree, pairs, equal)
        })
        .collect();
    let mut edge_counts = std::collections::BTreeMap::new();
    for (_, t, _, _) in &per {
        *edge_counts.entry(t.edge_count).or_insert(0) += 1;
    }
    Ok(TreeScan {
        n,
        q: lab.q(),
        flags: flags.len(),
        metric_failures: per.iter().filter(|p| !p.0).count(),
        non_trees: per.iter().filter(|p| !p.1.is_tree).count(),
        metric_mismatches: per.iter().filter(|p| !p.1.metric_match).count(),
        edge_counts: edge_counts.into_iter().collect(),
        xnk_pairs: per.iter().map(|p| p.2).sum(),
        xnk_tree_equal: per.iter().map(|p| p.3).sum(),
    })
}
