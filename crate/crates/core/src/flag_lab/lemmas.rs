use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::{FlagLab, FqFlag, Subspace};
use crate::combinatorics::{enumerate_sparse, mu_of, Matching};
use crate::error::Result;
use crate::subset::Subset;

#[derive(Clone, Debug, Default, Serialize)]
pub struct LemmaResult {
    pub lemma: String,
    pub instances: u64,
    pub violations: u64,
    pub example: Option<String>,
}

impl LemmaResult {
    fn new(lemma: &str) -> LemmaResult {
        LemmaResult { lemma: lemma.into(), ..Default::default() }
    }

    fn record(&mut self, ok: bool, example: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.violations += 1;
            if self.example.is_none() {
                self.example = Some(example());
            }
        }
    }

    fn merge(&mut self, other: LemmaResult) {
        self.instances += other.instances;
        self.violations += other.violations;
        if self.example.is_none() {
            self.example = other.example;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaScan {
    pub n: usize,
    pub q: u32,
    pub flags: usize,
    pub submodules: usize,
    /// Whether the gap lemma ran over all triples or only those with `M = V(n)`.
    pub gap_exhaustive: bool,
    pub results: Vec<LemmaResult>,
}

impl LemmaScan {
    pub fn ok(&self) -> bool {
        self.results.iter().all(|r| r.violations == 0)
    }

    pub fn total_violations(&self) -> u64 {
        self.results.iter().map(|r| r.violations).sum()
    }
}

fn show(s: &Subspace) -> String {
    let rows: Vec<String> = s.basis().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    format!("<{}>", rows.join(","))
}

/// Above this many submodules the gap lemma only uses `M = V(n)`.
const GAP_EXHAUSTIVE_LIMIT: usize = 200;

fn submodule_lemmas(lab: &FlagLab, subs: &[Subspace], exhaustive: bool) -> Vec<LemmaResult> {
    let f = &lab.field;
    let amb = lab.ambient();
    let zero = Subspace::zero(amb.dim());
    let whole = amb.whole();
    let contains: Vec<Vec<bool>> = subs.iter().map(|a| subs.iter().map(|b| a.contains(f, b)).collect()).collect();
    let delta = |w: &Subspace, u: &Subspace| lab.thin(w, u).delta;

    let mut triangle = LemmaResult::new("triangle");
    for (mi, m) in subs.iter().enumerate() {
        for (ni, nn) in subs.iter().enumerate() {
            if !contains[mi][ni] {
                continue;
            }
            let (a, b, c) = (delta(m, &zero), delta(nn, &zero), delta(m, nn));
            triangle.record(a <= b + c && b <= a + c && c <= a + b, || format!("N={} M={}", show(nn), show(m)));
        }
    }

    let ms: Vec<usize> = if exhaustive {
        (0..subs.len()).collect()
    } else {
        subs.iter().position(|s| *s == whole).into_iter().collect()
    };
    let gap = ms
        .par_iter()
        .map(|&mi| {
            let m = &subs[mi];
            let mut eq = LemmaResult::new("gap");
            for (li, l) in subs.iter().enumerate() {
                if !contains[mi][li] {
                    continue;
                }
                for (ki, k) in subs.iter().enumerate() {
                    if !contains[li][ki] || (l.dim() - k.dim()) % 2 != 0 {
                        continue;
                    }
                    let d = (l.dim() - k.dim()) / 2;
                    let a = lab.balanced(l, k);
                    let b = lab.thin(l, &zero).beta >= d && *k == l.t_image(f, amb, d);
                    let c = lab.thin(m, k).beta >= d && *l == k.preimage(f, amb, d, m);
                    let mut ok = a == b && b == c;
                    if ok && a {
                        let md = zero.preimage(f, amb, d, m);
                        let tdm = m.t_image(f, amb, d);
                        ok = l.contains(f, &md)
                            && tdm.contains(f, k)
                            && lab.thin(m, &zero).beta >= d
                            && delta(m, &zero) == delta(&tdm, &zero)
                            && delta(m, &zero) == delta(m, &md)
                            && delta(k, &zero) == delta(l, &zero)
                            && delta(l, &zero) == delta(l, &md)
                            && delta(m, l) == delta(m, k)
                            && delta(m, k) == delta(&tdm, k);
                    }
                    eq.record(ok, || format!("K={} L={} M={}", show(k), show(l), show(m)));
                }
            }
            eq
        })
        .reduce(|| LemmaResult::new("gap"), |mut a, b| {
            a.merge(b);
            a
        });
    vec![triangle, gap]
}

fn chain_lemmas(lab: &FlagLab, chains: &[Vec<Subspace>]) -> Vec<LemmaResult> {
    let f = &lab.field;
    let amb = lab.ambient();
    let zero = Subspace::zero(amb.dim());
    let mut a = LemmaResult::new("one-step-a");
    let mut b1 = LemmaResult::new("one-step-b(a)");
    let mut b2 = LemmaResult::new("one-step-b(b)");
    for ch in chains {
        let d = ch.len() - 1;
        let md = &ch[d];
        let cyclic = md.dim() - md.t_image(f, amb, 1).dim() <= 1;
        let step = (1..d).any(|i| lab.balanced(&ch[i + 1], &ch[i - 1]) && ch[i - 1] == ch[i + 1].t_image(f, amb, 1));
        let label = || ch.iter().map(show).collect::<Vec<_>>().join(" < ");
        a.record(cyclic || step, label);
        let dl: Vec<usize> = ch.iter().map(|m| lab.thin(m, &zero).delta).collect();
        let quo: Vec<usize> = ch.iter().map(|m| lab.thin(md, m).delta).collect();
        let top = dl[d];
        for k in 0..=top {
            b1.record((0..=d).any(|i| dl[i] == k && quo[i] == top - k), label);
        }
        if top == 1 && d > 1 {
            b2.record((1..d).any(|i| dl[i] == 0 || quo[i] == 0), label);
        }
    }
    vec![a, b1, b2]
}

fn count_k(n: usize, ks: &[(Subset, Matching)]) -> LemmaResult {
    let mut r = LemmaResult::new("count-K");
    for (k, tau) in ks {
        for m in (1..=2 * n).filter(|m| !k.contains(*m)) {
            let p = tau.get(m);
            let i = p < m && (m - p + 1) % 2 == 0;
            let d = (m + 1 - p) / 2;
            let preserves = |lo: usize, hi: usize| (lo..=hi).all(|x| (lo..=hi).contains(&tau.get(x)));
            let ii = i && preserves(p, m) && (p + 1 > m - 1 || preserves(p + 1, m - 1));
            let iii = i && k.count_below(p) + d == k.count_below(m);
            let iv = !(i && d > 1) || !k.contains(m - 1);
            r.record(i && ii && iii && iv, || format!("K={k} m={m}"));
        }
    }
    r
}

fn flag_lemmas(lab: &FlagLab, flag: &FqFlag, ks: &[(Subset, Matching)]) -> Vec<LemmaResult> {
    let n = lab.n;
    let f = &lab.field;
    let amb = lab.ambient();
    let zero = Subspace::zero(amb.dim());
    let w = &flag.spaces;
    let label = || flag.steps.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<String>()).collect::<Vec<_>>().join(" ");

    let mut exp = LemmaResult::new("W-exponent");
    let mut interval = LemmaResult::new("interval");
    for (k, tau) in ks {
        let top = lab.xnk_prefix(flag, *k, tau);
        for m in 0..=top {
            let r = k.intersection(Subset::full(m)).len();
            exp.record(w[m].t_image(f, amb, r) == zero, || format!("K={k} m={m} flag {}", label()));
        }
        for p in 0..top {
            for q in p + 1..=top {
                let preserved = (p + 1..=q).all(|x| (p + 1..=q).contains(&tau.get(x)));
                if preserved {
                    interval.record((q - p) % 2 == 0 && lab.balanced(&w[q], &w[p]), || {
                        format!("K={k} p={p} q={q} flag {}", label())
                    });
                }
            }
        }
    }

    let mut xni = LemmaResult::new("Xni");
    let tv = amb.t_power_part(1);
    let kerpi = amb.t_power_part(n - 1);
    for i in 1..2 * n {
        if !lab.in_xni(flag, i) {
            continue;
        }
        let ok = (0..i).all(|j| tv.contains(f, &w[j]))
            && (i + 1..=2 * n).all(|j| w[j].contains(f, &kerpi))
            && w[i - 1] == w[i + 1].t_image(f, amb, 1)
            && w[i + 1] == w[i - 1].preimage(f, amb, 1, &amb.whole());
        xni.record(ok, || format!("i={i} flag {}", label()));
    }

    let metric = lab.unrolled_metric(flag);
    let mut pm = LemmaResult::new("metric");
    pm.record(metric.ok(), || format!("flag {}", label()));
    let mut tree = LemmaResult::new("tree");
    let t = super::tree_from_metric(n, &metric.d);
    tree.record(t.map(|t| t.is_tree && t.metric_match).unwrap_or(false), || format!("flag {}", label()));

    let mut treelike = LemmaResult::new("treelike");
    let d = &metric.d;
    let m = 2 * n;
    for a in 0..m {
        for b in 0..m {
            for x in 0..m {
                for y in 0..m {
                    if d[a][x] == d[a][y] && d[x][b] == d[y][b] && d[a][x] + d[x][b] == d[a][b] {
                        treelike.record(d[x][y] == 0, || format!("a={a} b={b} x={x} y={y} flag {}", label()));
                    }
                }
            }
        }
    }
    vec![exp, interval, xni, pm, tree, treelike]
}

/// Brute-force the module-theoretic lemmas over every flag of `V(n)` and the submodules they contain.
pub fn chain_lemma_scan(lab: &FlagLab, cap: u64) -> Result<LemmaScan> {
    let n = lab.n;
    let flags = lab.enumerate_flags(cap)?;
    let subs: Vec<Subspace> = flags.iter().flat_map(|fl| fl.spaces.iter().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    let chains: Vec<Vec<Subspace>> = flags
        .iter()
        .flat_map(|fl| (1..=2 * n).map(move |d| fl.spaces[..=d].to_vec()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ks: Vec<(Subset, Matching)> =
        enumerate_sparse(2 * n, Some(n)).into_iter().map(|k| Ok((k, mu_of(k, 2 * n)?))).collect::<Result<_>>()?;
    let exhaustive = subs.len() <= GAP_EXHAUSTIVE_LIMIT;

    let mut results = submodule_lemmas(lab, &subs, exhaustive);
    results.extend(chain_lemmas(lab, &chains));
    results.push(count_k(n, &ks));
    let per_flag: Vec<Vec<LemmaResult>> = flags.par_iter().map(|fl| flag_lemmas(lab, fl, &ks)).collect();
    let mut merged: HashMap<String, LemmaResult> = HashMap::new();
    let mut order = Vec::new();
    for rs in per_flag {
        for r in rs {
            if !merged.contains_key(&r.lemma) {
                order.push(r.lemma.clone());
            }
            merged.entry(r.lemma.clone()).or_insert_with(|| LemmaResult::new(&r.lemma)).merge(r);
        }
    }
    results.extend(order.into_iter().map(|k| merged.remove(&k).expect("merged lemma")));
    Ok(LemmaScan { n, q: lab.q(), flags: flags.len(), submodules: subs.len(), gap_exhaustive: exhaustive, results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag_lab::DEFAULT_FLAG_CAP;

    #[test]
    fn scan_n2() {
        for q in [2, 3] {
            let lab = FlagLab::new(2, q).unwrap();
            let s = chain_lemma_scan(&lab, DEFAULT_FLAG_CAP).unwrap();
            for r in &s.results {
                assert_eq!(r.violations, 0, "{r:?}");
                assert!(r.instances > 0, "{r:?}");
            }
        }
    }
}
