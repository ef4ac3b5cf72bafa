use std::collections::BTreeSet;

use serde::Serialize;

use super::{enumerate_ncm, enumerate_sparse, is_sparse, lambda_of, mu_of, sparse_closure, Closure, Matching};
use crate::error::{input, Result};
use crate::subset::Subset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DottedMatching {
    pub tau: Matching,
    pub dots: Subset,
}

impl DottedMatching {
    pub fn new(tau: Matching, dots: Subset) -> Result<DottedMatching> {
        if !dots.is_subset(lambda_of(&tau)) {
            return input(format!("dots {dots} are not left endpoints of {tau}"));
        }
        Ok(DottedMatching { tau, dots })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DotFlags {
    pub standard: bool,
    pub costandard: bool,
}

/// Standard: no `i < j < τ(j) < τ(i)` with `j` dotted.
/// Costandard: `J = λ(τ)∖S` is sparse and `J̄ = λ(τ)`.
pub fn classify_dotted(d: &DottedMatching) -> DotFlags {
    let size = d.tau.size();
    let arcs = d.tau.pairs();
    let standard = !arcs.iter().any(|&(i, ti)| {
        arcs.iter()
            .any(|&(j, tj)| d.dots.contains(j) && i < j && tj < ti)
    });
    let lam = lambda_of(&d.tau);
    let j = lam.difference(d.dots);
    let costandard = is_sparse(j, size)
        && sparse_closure(j, Closure::Bar, size).map(|b| b == lam).unwrap_or(false);
    DotFlags { standard, costandard }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub scanned: usize,
    pub standard: usize,
    pub costandard: usize,
    pub star_form: usize,
    pub counterexamples: Vec<DottedMatching>,
}

/// Compares "standard" with "of the form `(μ(J*), J*∖J)`" over every dotted matching on `2n` points.
pub fn conjecture_scan(n: usize) -> ConjectureReport {
    let size = 2 * n;
    let star_forms: BTreeSet<(Vec<usize>, Subset)> = enumerate_sparse(size, None)
        .into_iter()
        .map(|j| {
            let star = sparse_closure(j, Closure::Star, size).expect("sparse superset exists");
            let tau = mu_of(star, size).expect("star is sparse of size n");
            (tau.as_slice().to_vec(), star.difference(j))
        })
        .collect();
    let mut report = ConjectureReport {
        n,
        scanned: 0,
        standard: 0,
        costandard: 0,
        star_form: star_forms.len(),
        counterexamples: Vec::new(),
    };
    for tau in enumerate_ncm(n) {
        for dots in lambda_of(&tau).subsets() {
            let d = DottedMatching { tau: tau.clone(), dots };
            let flags = classify_dotted(&d);
            report.scanned += 1;
            report.standard += flags.standard as usize;
            report.costandard += flags.costandard as usize;
            let star = star_forms.contains(&(tau.as_slice().to_vec(), dots));
            if star != flags.standard {
                report.counterexamples.push(d);
            }
        }
    }
    report
}
