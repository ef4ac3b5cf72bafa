//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Set `KRL_LARGE=1` to also run the Y(C(3)) computation.

use std::collections::BTreeSet;
use std::time::Instant;

use krl_core::combinatorics::{
    alpha_beta, catalan, conjecture_scan, enumerate_ncm, enumerate_sparse, gf_coefficients, lambda_of, mu_of, sparse_count,
    Direction, Matching,
};
use krl_core::exterior::{sigma, ExtElement};
use krl_core::flag_lab::{chain_lemma_scan, tree_scan, FlagLab, DEFAULT_FLAG_CAP};
use krl_core::graph_rings::{graded_quotient, hedgehog_ring};
use krl_core::graphs::{enumerate_tree_foldings, folding_to_ncm, make_standard, ncm_to_folding, tree_foldings_of_cycle, BiGraph, StandardKind};
use krl_core::mvss::exactness_check;
use krl_core::springer::{leading_check, NormalForms};
use krl_core::topology::{compare_with_s, routes_agree, DEFAULT_SIMPLEX_BUDGET};
use krl_core::Subset;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Sparse in the plain sense: strictly more non-members than members above each member.
fn sparse_oracle(bits: &[bool]) -> bool {
    (0..bits.len()).filter(|&i| bits[i]).all(|i| {
        let above = &bits[i + 1..];
        let members = above.iter().filter(|b| **b).count();
        above.len() - members > members
    })
}

fn sparse_table(n: usize) -> Vec<u64> {
    let size = 2 * n;
    let mut counts = vec![0u64; size + 1];
    for mask in 0u64..(1 << size) {
        let bits: Vec<bool> = (0..size).map(|i| mask >> i & 1 == 1).collect();
        if sparse_oracle(&bits) {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    counts
}

fn catalan_oracle(n: usize) -> u64 {
    let mut c = vec![1u64];
    for m in 1..=n {
        c.push((0..m).map(|i| c[i] * c[m - 1 - i]).sum());
    }
    c[n]
}

fn c1_basis() -> Check {
    let nf = NormalForms::new(4);
    let fixed: BTreeSet<Vec<usize>> = Subset::all(4)
        .filter(|&j| nf.monomial(j) == ExtElement::monomial(4, j, 1))
        .map(|j| j.to_vec())
        .collect();
    let want: BTreeSet<Vec<usize>> = [vec![], vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3]].into_iter().collect();
    ensure(fixed == want, || format!("irreducible monomials {fixed:?}"))?;
    let rel: Vec<ExtElement> = (1..=4).map(|k| sigma(4, k, Subset::full(4))).collect();
    let ranks = graded_quotient(4, &rel, 4).map_err(|e| e.to_string())?.trimmed_ranks();
    ensure(ranks == vec![1, 3, 2], || format!("quotient ranks {ranks:?}"))
}

fn c2_counting() -> Check {
    for n in 1..=8 {
        let size = 2 * n;
        let oracle = sparse_table(n);
        for p in 0..=size {
            let listed = enumerate_sparse(size, Some(p)).len() as u64;
            ensure(listed == oracle[p] && sparse_count(n, p) == oracle[p], || {
                format!("n={n} p={p}: listed {listed}, formula {}, oracle {}", sparse_count(n, p), oracle[p])
            })?;
        }
        let total = enumerate_sparse(size, Some(n)).len() as u64;
        ensure(total == binom(size as u64, n as u64) - binom(size as u64, n as u64 - 1) && oracle.iter().sum::<u64>() == binom(size as u64, n as u64), || {
            format!("n={n}: totals")
        })?;
        let ncm = enumerate_ncm(n).len() as u64;
        ensure(ncm == catalan_oracle(n) && catalan(n) == ncm, || format!("n={n}: {ncm} matchings"))?;
    }
    for n in 1..=5 {
        let size = 2 * n;
        for p in 1..=n {
            let mut images = BTreeSet::new();
            let mut nonsparse = 0;
            for j in Subset::all_of_size(size, p) {
                if krl_core::combinatorics::is_sparse(j, size) {
                    continue;
                }
                nonsparse += 1;
                let k = alpha_beta(j, Direction::Forward, size).map_err(|e| e.to_string())?;
                ensure(k.len() == p - 1, || format!("alpha({j}) = {k} has the wrong size"))?;
                let back = alpha_beta(k, Direction::Backward, size).map_err(|e| e.to_string())?;
                ensure(back == j, || format!("beta(alpha({j})) = {back}"))?;
                images.insert(k);
            }
            ensure(images.len() == nonsparse && nonsparse as u64 == binom(size as u64, p as u64 - 1), || {
                format!("n={n} p={p}: {nonsparse} non-sparse, {} images", images.len())
            })?;
            for k in Subset::all_of_size(size, p - 1) {
                let j = alpha_beta(k, Direction::Backward, size).map_err(|e| e.to_string())?;
                let again = alpha_beta(j, Direction::Forward, size).map_err(|e| e.to_string())?;
                ensure(again == k, || format!("alpha(beta({k})) = {again}"))?;
            }
        }
    }
    Ok(())
}

fn c3_series() -> Check {
    let t = gf_coefficients(10).map_err(|e| e.to_string())?;
    for n in 0..=10 {
        let oracle = if n == 0 { vec![1] } else { sparse_table(n) };
        for k in 0..=10 {
            let want = oracle.get(k).copied().unwrap_or(0);
            ensure(t[n][k] == BigInt::from(want), || format!("s^{n} t^{k}: {} vs {want}", t[n][k]))?;
        }
    }
    Ok(())
}

fn c4_lambda_mu() -> Check {
    for n in 1..=6 {
        let size = 2 * n;
        for tau in enumerate_ncm(n) {
            let back = mu_of(lambda_of(&tau), size).map_err(|e| e.to_string())?;
            ensure(back == tau, || format!("mu(lambda({:?}))", tau.pairs()))?;
        }
        for j in enumerate_sparse(size, Some(n)) {
            let l = lambda_of(&mu_of(j, size).map_err(|e| e.to_string())?);
            ensure(l == j, || format!("lambda(mu({j})) = {l}"))?;
        }
    }
    let tau = Matching::from_pairs(8, &[(1, 2), (3, 8), (4, 5), (6, 7)]).map_err(|e| e.to_string())?;
    let j = Subset::from_slice(&[1, 3, 4, 6]);
    ensure(lambda_of(&tau) == j && mu_of(j, 8).map_err(|e| e.to_string())? == tau, || "worked example".into())
}

fn c5_reduce() -> Check {
    for n in 1..=4 {
        let size = 2 * n;
        let nf = NormalForms::new(size);
        for m in Subset::all(size) {
            let mono = ExtElement::monomial(size, m, 1);
            for k in 1..=size {
                let r = nf.reduce(&(&sigma(size, k, Subset::full(size)) * &mono));
                ensure(r.is_zero(), || format!("sigma_{k} x_{m} reduces to {r:?}"))?;
            }
            for i in 1..=size {
                let sq = &(&ExtElement::var(size, i) * &ExtElement::var(size, i)) * &mono;
                ensure(nf.reduce(&sq).is_zero(), || format!("x_{i}^2 x_{m}"))?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let forms: Vec<NormalForms> = (0..=4).map(|n| NormalForms::new(2 * n)).collect();
    let random = |rng: &mut ChaCha8Rng, size: usize| {
        let terms = rng.gen_range(1..=3);
        ExtElement::from_terms(size, (0..terms).map(|_| (Subset(rng.gen_range(0..1u64 << size)), BigInt::from(rng.gen_range(-3i64..=3)))))
    };
    for trial in 0..10_000 {
        let n = rng.gen_range(1..=4);
        let size = 2 * n;
        let (a, b) = (random(&mut rng, size), random(&mut rng, size));
        let nf = &forms[n];
        let lhs = nf.reduce(&(&a * &b));
        let rhs = nf.reduce(&(&nf.reduce(&a) * &nf.reduce(&b)));
        ensure(lhs == rhs, || format!("trial {trial}: reduce not multiplicative"))?;
    }
    Ok(())
}

fn c6_leading() -> Check {
    for n in 1..=5 {
        let r = leading_check(n, n <= 4);
        ensure(r.failures.is_empty(), || format!("n={n}: {} leading-term failures", r.failures.len()))?;
        if n <= 4 {
            let s = r.smith.as_ref().expect("requested");
            let units = s.divisors.iter().all(|d| *d == BigInt::from(1));
            ensure(s.rank == r.basis_size && units && r.split_mono == Some(true), || format!("n={n}: rank {} of {}", s.rank, r.basis_size))?;
        }
    }
    Ok(())
}

fn c7_hedgehogs() -> Check {
    for n in 1..=4 {
        for a in Subset::all(2 * n - 1) {
            let r = hedgehog_ring(n, a).map_err(|e| e.to_string())?;
            ensure(r.agree && r.symbolic_ok, || format!("n={n} A={a}"))?;
        }
    }
    Ok(())
}

fn c8_tree_foldings() -> Check {
    for n in 1..=5 {
        let c = make_standard(StandardKind::C, n).map_err(|e| e.to_string())?;
        let mut found = enumerate_tree_foldings(&c, Some(n));
        found.sort();
        ensure(found.len() as u64 == catalan_oracle(n), || format!("n={n}: {} foldings", found.len()))?;
        ensure(found == tree_foldings_of_cycle(n), || format!("n={n}: folding sets differ"))?;
        for tau in enumerate_ncm(n) {
            let f = ncm_to_folding(&tau);
            ensure(folding_to_ncm(&f).map_err(|e| e.to_string())? == tau, || format!("n={n}: {:?}", tau.pairs()))?;
        }
        for f in &found {
            ensure(ncm_to_folding(&folding_to_ncm(f).map_err(|e| e.to_string())?) == *f, || format!("n={n}: folding round trip"))?;
        }
    }
    Ok(())
}

fn c9_mvss() -> Check {
    for n in 2..=4 {
        let r = exactness_check(n).map_err(|e| e.to_string())?;
        ensure(r.eta_bijection && r.triangular_failures.is_empty(), || format!("n={n}: eta"))?;
        if n <= 3 {
            ensure(r.d_squared_zero && r.exact, || format!("n={n}: not exact"))?;
        }
    }
    Ok(())
}

/// Bipartite trees with `k` edges, as parent arrays.
fn trees(k: usize) -> Vec<BiGraph> {
    let mut out = Vec::new();
    let mut parents = vec![0usize; k + 1];
    fn rec(v: usize, k: usize, parents: &mut Vec<usize>, out: &mut Vec<BiGraph>) {
        if v > k {
            let mut parity = vec![0u8; k + 1];
            for w in 1..=k {
                parity[w] = 1 - parity[parents[w]];
            }
            out.push(BiGraph::new(parity, (1..=k).map(|w| (parents[w], w))).expect("tree"));
            return;
        }
        for p in 0..v {
            parents[v] = p;
            rec(v + 1, k, parents, out);
        }
    }
    rec(1, k, &mut parents, &mut out);
    out
}

fn c10_topology() -> Check {
    let c2 = make_standard(StandardKind::C, 2).map_err(|e| e.to_string())?;
    let r = compare_with_s(&c2, DEFAULT_SIMPLEX_BUDGET).map_err(|e| e.to_string())?;
    let ranks = r.cohomology.ranks();
    ensure(ranks == vec![1, 0, 3, 0, 2] && r.torsion_free && r.matches, || format!("Y(C(2)): {ranks:?}"))?;
    ensure(r.euler == 6, || format!("Y(C(2)): euler {}", r.euler))?;
    for k in 1..=4 {
        let want: Vec<usize> = (0..=2 * k).map(|d| if d % 2 == 0 { binom(k as u64, d as u64 / 2) as usize } else { 0 }).collect();
        for t in trees(k) {
            let r = compare_with_s(&t, DEFAULT_SIMPLEX_BUDGET).map_err(|e| e.to_string())?;
            let ranks = r.cohomology.ranks();
            ensure(ranks == want && r.torsion_free && r.matches, || format!("tree {:?}: {ranks:?}", t.edges()))?;
        }
        if k <= 3 {
            ensure(routes_agree(k, DEFAULT_SIMPLEX_BUDGET).map_err(|e| e.to_string())?, || format!("(S^2)^{k}: routes differ"))?;
        }
    }
    if std::env::var_os("KRL_LARGE").is_some() {
        let c3 = make_standard(StandardKind::C, 3).map_err(|e| e.to_string())?;
        let r = compare_with_s(&c3, 10_000_000).map_err(|e| e.to_string())?;
        let ranks = r.cohomology.ranks();
        ensure(ranks == vec![1, 0, 5, 0, 9, 0, 5] && r.torsion_free && r.matches, || format!("Y(C(3)): {ranks:?}"))?;
    }
    Ok(())
}

fn c11_flags() -> Check {
    for n in 1..=3 {
        let lab = FlagLab::new(n, 2).map_err(|e| e.to_string())?;
        let cover = lab.cover_scan(DEFAULT_FLAG_CAP).map_err(|e| e.to_string())?;
        ensure(cover.ok && cover.uncovered_i.is_empty() && cover.uncovered_k.is_empty(), || format!("n={n}: cover"))?;
        let ts = tree_scan(&lab, DEFAULT_FLAG_CAP).map_err(|e| e.to_string())?;
        ensure(ts.ok(), || format!("n={n}: {} metric failures, {} non-trees, {} mismatches", ts.metric_failures, ts.non_trees, ts.metric_mismatches))?;
        let ls = chain_lemma_scan(&lab, DEFAULT_FLAG_CAP).map_err(|e| e.to_string())?;
        ensure(ls.ok() && ls.total_violations() == 0, || format!("n={n}: {} lemma violations", ls.total_violations()))?;
    }
    Ok(())
}

fn c12_conjecture() -> Check {
    for n in 1..=5 {
        let r = conjecture_scan(n);
        ensure(r.counterexamples.is_empty(), || format!("n={n}: {} counterexamples", r.counterexamples.len()))?;
        ensure(r.scanned > 0, || format!("n={n}: nothing scanned"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("1  basis of R(2)", c1_basis),
        ("2  sparse, matching and alpha/beta counts", c2_counting),
        ("3  generating function", c3_series),
        ("4  lambda/mu bijection", c4_lambda_mu),
        ("5  normal form soundness", c5_reduce),
        ("6  rho leading terms and Smith form", c6_leading),
        ("7  hedgehog rings", c7_hedgehogs),
        ("8  tree foldings of C(n)", c8_tree_foldings),
        ("9  total complex exactness and eta", c9_mvss),
        ("10 cohomology of Y(G)", c10_topology),
        ("11 flag lab", c11_flags),
        ("12 standard dotted matchings", c12_conjecture),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let r = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(()) => println!("PASS {name} ({secs:.2}s)"),
            Err(e) => {
                failed += 1;
                println!("FAIL {name} ({secs:.2}s): {e}");
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
