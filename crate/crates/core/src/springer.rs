//! The ring `R(I) = E(I)/(σ_1(I),…,σ_{2n}(I))` and its sparse-monomial normal form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::combinatorics::{enumerate_sparse, is_sparse, largest_violation, mu_of, sparse_closure, sparse_count, Closure};
use crate::error::{input, Result};
use crate::exterior::{sigma, ExtElement};
use crate::linalg::{smith_invariants, IntMatrix, SmithInvariants};
use crate::subset::Subset;

/// Element of `R(I)` in normal form: every support is sparse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RElement {
    value: ExtElement,
}

impl RElement {
    pub fn value(&self) -> &ExtElement {
        &self.value
    }

    pub fn into_value(self) -> ExtElement {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn size(&self) -> usize {
        self.value.ambient()
    }

    pub fn mul(&self, other: &RElement) -> RElement {
        reduce(&(&self.value * &other.value))
    }

    pub fn add(&self, other: &RElement) -> RElement {
        RElement { value: &self.value + &other.value }
    }
}

impl fmt::Display for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

impl fmt::Debug for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

impl Serialize for RElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.value.serialize(s)
    }
}

fn check_even(size: usize) -> Result<()> {
    if size % 2 != 0 {
        return input(format!("R(I) needs |I| even, got {size}"));
    }
    Ok(())
}

/// The strictly lower replacement for a non-sparse `x_J`.
///
/// With `j` the largest violating index, `K = J_{<j}`, `L = J_{≥j}`, `p = |L|-1`
/// and `M = L ∪ I_{<j}`, returns `x_J - x_K·σ_{p+1}(M)`.
pub fn rewrite_step(j: Subset, size: usize) -> Result<ExtElement> {
    check_even(size)?;
    j.check_within(size)?;
    let Some(v) = largest_violation(j, size) else {
        return input(format!("{j} is sparse"));
    };
    let k = j.below(v);
    let l = j.at_least(v);
    let m = l.union(Subset::full(v - 1));
    let rel = sigma(size, l.len(), m).mul_monomial(k);
    let mut out = ExtElement::monomial(size, j, 1);
    out.add_scaled(&rel, &-BigInt::one());
    debug_assert!(out.supports().all(|s| s < j), "rewrite of {j} not lower: {out}");
    Ok(out)
}

/// Normal form in `R(I)` with `|I| = a.ambient()`, rewriting the largest non-sparse support first.
pub fn reduce(a: &ExtElement) -> RElement {
    let size = a.ambient();
    assert!(size % 2 == 0, "R(I) needs |I| even");
    let mut cur = a.clone();
    let mut bound: Option<Subset> = None;
    loop {
        let next = match bound {
            None => cur.supports().next_back(),
            Some(b) => cur.support_below(b),
        };
        let Some(j) = next else { break };
        bound = Some(j);
        if is_sparse(j, size) {
            continue;
        }
        let c = cur.remove_term(j).expect("support present");
        cur.add_scaled(&rewrite_step(j, size).expect("non-sparse"), &c);
    }
    RElement { value: cur }
}

/// Normal forms of monomials, computed once each.
pub struct NormalForms {
    size: usize,
    cache: std::sync::Mutex<std::collections::HashMap<Subset, ExtElement>>,
}

impl NormalForms {
    pub fn new(size: usize) -> NormalForms {
        NormalForms { size, cache: Default::default() }
    }

    pub fn monomial(&self, j: Subset) -> ExtElement {
        if let Some(e) = self.cache.lock().expect("cache lock").get(&j) {
            return e.clone();
        }
        let e = reduce(&ExtElement::monomial(self.size, j, 1)).into_value();
        self.cache.lock().expect("cache lock").insert(j, e.clone());
        e
    }

    pub fn reduce(&self, a: &ExtElement) -> ExtElement {
        let mut out = ExtElement::zero(self.size);
        for (j, c) in a.terms() {
            if is_sparse(j, self.size) {
                out.add_term(j, c.clone());
            } else {
                out.add_scaled(&self.monomial(j), c);
            }
        }
        out
    }
}

fn check_top_sparse(k: Subset, size: usize) -> Result<()> {
    check_even(size)?;
    k.check_within(size)?;
    if k.len() != size / 2 || !is_sparse(k, size) {
        return input(format!("{k} is not a sparse set of size {}", size / 2));
    }
    Ok(())
}

/// `ρ_K`: `x_k ↦ x_k` for `k ∈ K` and `x_{τ(k)} ↦ -x_k`, where `τ = μ(K)`.
pub fn rho_k(a: &ExtElement, k: Subset) -> Result<ExtElement> {
    let size = a.ambient();
    check_top_sparse(k, size)?;
    let tau = mu_of(k, size)?;
    Ok(a.substitute(size, |i| if k.contains(i) { Some((1, i)) } else { Some((-1, tau.get(i))) }))
}

/// Element of `Q(I) = ∏_K E(K)`, one component per sparse `K` of size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QElement {
    pub components: BTreeMap<Subset, ExtElement>,
}

impl Serialize for QElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.components.len()))?;
        for (k, v) in &self.components {
            m.serialize_entry(&serde_json::to_string(k).expect("subset json"), v)?;
        }
        m.end()
    }
}

/// `ρ(a) = Σ_K ρ_K(a)·ε_K`.
pub fn rho_all(a: &RElement) -> QElement {
    let size = a.size();
    let components = enumerate_sparse(size, Some(size / 2))
        .into_iter()
        .map(|k| (k, rho_k(a.value(), k).expect("K sparse of size n")))
        .collect();
    QElement { components }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingFailure {
    pub j: Subset,
    pub expected_k: Subset,
    pub found: Option<(Subset, Subset, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingReport {
    pub n: usize,
    pub basis_size: usize,
    pub target_size: usize,
    pub failures: Vec<LeadingFailure>,
    pub smith: Option<SmithInvariants>,
    pub split_mono: Option<bool>,
}

/// Highest term of `ρ(x_J)` under `x_J ε_K < x_J' ε_K'` iff `J < J'`, or `J = J'` and `K > K'`.
pub fn rho_leading_term(q: &QElement) -> Option<(Subset, Subset, BigInt)> {
    q.components
        .iter()
        .flat_map(|(k, e)| e.terms().map(move |(j, c)| (j, *k, c.clone())))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
}

/// Checks the leading terms of `ρ(x_J)` and, when `with_smith`, that `ρ` is a split monomorphism.
pub fn leading_check(n: usize, with_smith: bool) -> LeadingReport {
    let size = 2 * n;
    let basis = enumerate_sparse(size, None);
    let tops = enumerate_sparse(size, Some(n));
    let mut col_index = BTreeMap::new();
    for k in &tops {
        for sub in k.subsets() {
            let next = col_index.len();
            col_index.insert((*k, sub), next);
        }
    }
    let mut failures = Vec::new();
    let mut m: IntMatrix<BigInt> = IntMatrix::new(col_index.len());
    for &j in &basis {
        let q = rho_all(&reduce(&ExtElement::monomial(size, j, 1)));
        let bar = sparse_closure(j, Closure::Bar, size).expect("sparse");
        let lead = rho_leading_term(&q);
        let ok = matches!(&lead, Some((jj, kk, c)) if *jj == j && *kk == bar && c.is_one());
        if !ok {
            failures.push(LeadingFailure {
                j,
                expected_k: bar,
                found: lead.map(|(a, b, c)| (a, b, c.to_string())),
            });
        }
        if with_smith {
            let row = q
                .components
                .iter()
                .flat_map(|(k, e)| e.terms().map(|(s, c)| (col_index[&(*k, s)], c.clone())).collect::<Vec<_>>())
                .collect();
            m.push_row(row);
        }
    }
    let smith = with_smith.then(|| smith_invariants(&m));
    let split_mono = smith.as_ref().map(|s| s.rank == basis.len() && s.all_units());
    LeadingReport {
        n,
        basis_size: basis.len(),
        target_size: col_index.len(),
        failures,
        smith,
        split_mono,
    }
}

/// Number of normal-form basis monomials of R(n) in each x-degree.
pub fn hilbert_ranks(n: usize) -> Vec<u64> {
    let mut ranks = vec![0u64; n + 1];
    for j in enumerate_sparse(2 * n, None) {
        ranks[j.len()] += 1;
    }
    debug_assert!(ranks.iter().enumerate().all(|(k, r)| *r == sparse_count(n, k)));
    ranks
}

/// An element `rfl^reflect ∘ rot^rotate` of the dihedral group acting on indices mod `2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dihedral {
    pub rotate: usize,
    pub reflect: bool,
}

impl Dihedral {
    pub const ROT: Dihedral = Dihedral { rotate: 1, reflect: false };
    pub const RFL: Dihedral = Dihedral { rotate: 0, reflect: true };

    /// Image of index `i ∈ 1..=2n`; representatives are `1..=2n` with `0 ↦ 2n`.
    pub fn index(self, i: usize, size: usize) -> usize {
        let m = size as i64;
        let mut v = (i as i64 + self.rotate as i64).rem_euclid(m);
        if self.reflect {
            v = (1 - v).rem_euclid(m);
        }
        if v == 0 {
            size
        } else {
            v as usize
        }
    }
}

pub fn dihedral_act(a: &RElement, g: Dihedral) -> RElement {
    let size = a.size();
    reduce(&a.value().substitute(size, |i| Some((1, g.index(i, size)))))
}

/// `reduce(σ_k(J)) == 0`.
pub fn sigma_vanishing(j: Subset, k: usize, size: usize) -> Result<bool> {
    check_even(size)?;
    j.check_within(size)?;
    Ok(reduce(&sigma(size, k, j)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(xs: &[usize]) -> Subset {
        Subset::from_slice(xs)
    }

    fn mono(size: usize, xs: &[usize], c: i64) -> ExtElement {
        ExtElement::monomial(size, s(xs), c)
    }

    #[test]
    fn rewrite_examples() {
        let r = rewrite_step(s(&[2, 3]), 4).unwrap();
        assert_eq!(r, &mono(4, &[1, 2], -1) + &mono(4, &[1, 3], -1));
        let r = rewrite_step(s(&[4]), 4).unwrap();
        assert_eq!(r, &(&mono(4, &[1], -1) + &mono(4, &[2], -1)) + &mono(4, &[3], -1));
        assert!(rewrite_step(s(&[1, 3]), 4).is_err());
    }

    #[test]
    fn rewrite_is_lower_everywhere() {
        for size in (2..=10).step_by(2) {
            for j in Subset::all(size).filter(|j| !is_sparse(*j, size)) {
                let r = rewrite_step(j, size).unwrap();
                assert!(r.supports().all(|t| t < j), "{j}: {r}");
            }
        }
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce(&sigma(4, 1, Subset::full(4))).is_zero());
        assert_eq!(reduce(&mono(4, &[2, 3], 1)).into_value(), &mono(4, &[1, 2], -1) + &mono(4, &[1, 3], -1));
        assert_eq!(reduce(&mono(8, &[1, 3, 4], 5)).into_value(), mono(8, &[1, 3, 4], 5));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_k(&ExtElement::var(4, 2), s(&[1, 3])).unwrap(), mono(4, &[1], -1));
        assert!(rho_k(&mono(4, &[1, 2], 1), s(&[1, 3])).unwrap().is_zero());
        let q = rho_all(&reduce(&ExtElement::var(4, 3)));
        assert_eq!(q.components[&s(&[1, 2])], mono(4, &[2], -1));
        assert_eq!(q.components[&s(&[1, 3])], mono(4, &[3], 1));
        let q = rho_all(&reduce(&mono(4, &[1, 2], 1)));
        assert_eq!(q.components[&s(&[1, 2])], mono(4, &[1, 2], 1));
        assert!(q.components[&s(&[1, 3])].is_zero());
        let one = rho_all(&reduce(&ExtElement::one(4)));
        assert!(one.components.values().all(|e| *e == ExtElement::one(4)));
        assert!(rho_k(&ExtElement::one(4), s(&[2, 3])).is_err());
    }

    #[test]
    fn leading_small() {
        let r = leading_check(2, true);
        assert!(r.failures.is_empty());
        assert_eq!(r.basis_size, 6);
        assert_eq!(r.target_size, 8);
        assert_eq!(r.smith.as_ref().unwrap().divisors, vec![BigInt::one(); 6]);
        let q = rho_all(&reduce(&ExtElement::var(4, 3)));
        let (j, k, c) = rho_leading_term(&q).unwrap();
        assert_eq!((j, k, c), (s(&[3]), s(&[1, 3]), BigInt::one()));
        assert_eq!(leading_check(1, true).split_mono, Some(true));
    }

    #[test]
    fn ranks() {
        assert_eq!(hilbert_ranks(1), vec![1, 1]);
        assert_eq!(hilbert_ranks(2), vec![1, 3, 2]);
        assert_eq!(hilbert_ranks(3), vec![1, 5, 9, 5]);
    }

    #[test]
    fn dihedral_examples() {
        let x4 = reduce(&ExtElement::var(4, 4));
        assert_eq!(dihedral_act(&x4, Dihedral::ROT).into_value(), ExtElement::var(4, 1));
        assert_eq!(Dihedral::RFL.index(1, 4), 4);
        assert_eq!(Dihedral::RFL.index(2, 4), 3);
    }

    #[test]
    fn sigma_vanishing_examples() {
        assert!(sigma_vanishing(s(&[1, 2, 3]), 2, 4).unwrap());
        assert!(sigma_vanishing(Subset::full(4), 1, 4).unwrap());
        assert!(!sigma_vanishing(s(&[1, 2]), 1, 4).unwrap());
    }
}
