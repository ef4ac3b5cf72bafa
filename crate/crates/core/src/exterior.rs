//! The square-free commutative ring `E(I) = Z[x_i]/(x_i²)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{input, Result};
use crate::subset::Subset;

/// Integer combination of monomials `x_J`, keyed in lexicographic order of `J`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElement {
    ambient: usize,
    terms: BTreeMap<Subset, BigInt>,
}

impl ExtElement {
    pub fn zero(ambient: usize) -> ExtElement {
        assert!(ambient <= 63, "ambient index set too large");
        ExtElement { ambient, terms: BTreeMap::new() }
    }

    pub fn one(ambient: usize) -> ExtElement {
        ExtElement::monomial(ambient, Subset::EMPTY, 1)
    }

    pub fn monomial(ambient: usize, j: Subset, coeff: impl Into<BigInt>) -> ExtElement {
        let mut e = ExtElement::zero(ambient);
        e.add_term(j, coeff.into());
        e
    }

    pub fn var(ambient: usize, i: usize) -> ExtElement {
        ExtElement::monomial(ambient, Subset::singleton(i), 1)
    }

    pub fn from_terms(ambient: usize, terms: impl IntoIterator<Item = (Subset, BigInt)>) -> ExtElement {
        let mut e = ExtElement::zero(ambient);
        for (j, c) in terms {
            e.add_term(j, c);
        }
        e
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Subset, &BigInt)> + '_ {
        self.terms.iter().map(|(j, c)| (*j, c))
    }

    pub fn supports(&self) -> impl DoubleEndedIterator<Item = Subset> + '_ {
        self.terms.keys().copied()
    }

    /// Largest support strictly below `j`.
    pub fn support_below(&self, j: Subset) -> Option<Subset> {
        self.terms.range(..j).next_back().map(|(s, _)| *s)
    }

    pub fn coeff(&self, j: Subset) -> BigInt {
        self.terms.get(&j).cloned().unwrap_or_default()
    }

    /// Highest term in lexicographic order.
    pub fn leading(&self) -> Option<(Subset, &BigInt)> {
        self.terms.iter().next_back().map(|(j, c)| (*j, c))
    }

    pub fn add_term(&mut self, j: Subset, c: BigInt) {
        debug_assert!(j.is_subset(Subset::full(self.ambient)), "{j} outside 1..{}", self.ambient);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(j) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn remove_term(&mut self, j: Subset) -> Option<BigInt> {
        self.terms.remove(&j)
    }

    pub fn add_scaled(&mut self, other: &ExtElement, k: &BigInt) {
        for (j, c) in &other.terms {
            self.add_term(*j, c * k);
        }
    }

    pub fn scale(&self, k: &BigInt) -> ExtElement {
        let mut out = ExtElement::zero(self.ambient);
        if !k.is_zero() {
            for (j, c) in &self.terms {
                out.terms.insert(*j, c * k);
            }
        }
        out
    }

    /// Multiply by the monomial `x_K`.
    pub fn mul_monomial(&self, k: Subset) -> ExtElement {
        let mut out = ExtElement::zero(self.ambient);
        for (j, c) in &self.terms {
            if j.is_disjoint(k) {
                out.add_term(j.union(k), c.clone());
            }
        }
        out
    }

    pub fn checked_mul(&self, other: &ExtElement) -> Result<ExtElement> {
        if self.ambient != other.ambient {
            return input(format!("ambient mismatch: {} vs {}", self.ambient, other.ambient));
        }
        let mut out = ExtElement::zero(self.ambient);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.is_disjoint(*b) {
                    out.add_term(a.union(*b), ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// Homogeneous x-degree, if the element is homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|j| j.len());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Part of x-degree `k`.
    pub fn homogeneous_part(&self, k: usize) -> ExtElement {
        ExtElement {
            ambient: self.ambient,
            terms: self.terms.iter().filter(|(j, _)| j.len() == k).map(|(j, c)| (*j, c.clone())).collect(),
        }
    }

    /// Apply `x_i ↦ sign·x_{target}` to every variable and multiply out in `E(new_ambient)`.
    /// Monomials whose image repeats a variable vanish.
    pub fn substitute(&self, new_ambient: usize, map: impl Fn(usize) -> Option<(i8, usize)>) -> ExtElement {
        let mut out = ExtElement::zero(new_ambient);
        'terms: for (j, c) in &self.terms {
            let mut img = Subset::EMPTY;
            let mut negative = c.is_negative();
            for i in j.iter() {
                let Some((s, t)) = map(i) else { continue 'terms };
                if img.contains(t) {
                    continue 'terms;
                }
                img = img.with(t);
                negative ^= s < 0;
            }
            let mag = c.abs();
            out.add_term(img, if negative { -mag } else { mag });
        }
        out
    }

    /// Change the ambient size, keeping supports.
    pub fn with_ambient(&self, ambient: usize) -> ExtElement {
        let mut out = ExtElement::zero(ambient);
        for (j, c) in &self.terms {
            out.add_term(*j, c.clone());
        }
        out
    }
}

/// `σ_k` of the given variables.
pub fn sigma(ambient: usize, k: usize, vars: Subset) -> ExtElement {
    let mut out = ExtElement::zero(ambient);
    if k > vars.len() {
        return out;
    }
    for pos in Subset::all_of_size(vars.len(), k) {
        out.add_term(pos.relabel(&vars.to_vec()), BigInt::one());
    }
    out
}

/// Polynomial in `t` with coefficients in `E(I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly {
    pub coeffs: Vec<ExtElement>,
}

impl TPoly {
    pub fn one(ambient: usize) -> TPoly {
        TPoly { coeffs: vec![ExtElement::one(ambient)] }
    }

    pub fn ambient(&self) -> usize {
        self.coeffs[0].ambient()
    }

    pub fn coeff(&self, k: usize) -> ExtElement {
        self.coeffs.get(k).cloned().unwrap_or_else(|| ExtElement::zero(self.ambient()))
    }

    pub fn mul(&self, other: &TPoly, cap: usize) -> TPoly {
        let amb = self.ambient();
        let top = (self.coeffs.len() + other.coeffs.len() - 2).min(cap);
        let mut out = vec![ExtElement::zero(amb); top + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j <= top {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        TPoly { coeffs: out }.trimmed()
    }

    /// `p(-t)`.
    pub fn negate_t(&self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect(),
        }
    }

    fn trimmed(mut self) -> TPoly {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_one(&self) -> bool {
        let t = self.clone().trimmed();
        t.coeffs.len() == 1 && t.coeffs[0] == ExtElement::one(self.ambient())
    }
}

/// `∏_{j∈J}(1 + t·s_j·x_j)` truncated at `t^cap`; `signs(j)` gives `s_j = ±1`.
pub fn r_poly(ambient: usize, j: Subset, signs: impl Fn(usize) -> i8, cap: usize) -> TPoly {
    let mut acc = TPoly::one(ambient);
    for i in j.iter() {
        let lin = ExtElement::monomial(ambient, Subset::singleton(i), signs(i) as i64);
        let f = TPoly { coeffs: vec![ExtElement::one(ambient), lin] };
        acc = acc.mul(&f, cap);
    }
    acc
}

/// Like [`r_poly`] but for a sequence of signed variables that may repeat.
pub fn r_poly_seq(ambient: usize, vars: &[(i8, usize)], cap: usize) -> TPoly {
    let mut acc = TPoly::one(ambient);
    for &(s, i) in vars {
        let lin = ExtElement::monomial(ambient, Subset::singleton(i), s as i64);
        acc = acc.mul(&TPoly { coeffs: vec![ExtElement::one(ambient), lin] }, cap);
    }
    acc
}

impl Add for &ExtElement {
    type Output = ExtElement;
    fn add(self, rhs: &ExtElement) -> ExtElement {
        assert_eq!(self.ambient, rhs.ambient, "ambient mismatch");
        let mut out = self.clone();
        for (j, c) in &rhs.terms {
            out.add_term(*j, c.clone());
        }
        out
    }
}

impl Sub for &ExtElement {
    type Output = ExtElement;
    fn sub(self, rhs: &ExtElement) -> ExtElement {
        self + &(-rhs)
    }
}

impl Neg for &ExtElement {
    type Output = ExtElement;
    fn neg(self) -> ExtElement {
        ExtElement {
            ambient: self.ambient,
            terms: self.terms.iter().map(|(j, c)| (*j, -c)).collect(),
        }
    }
}

impl Mul for &ExtElement {
    type Output = ExtElement;
    fn mul(self, rhs: &ExtElement) -> ExtElement {
        self.checked_mul(rhs).expect("ambient mismatch")
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (j, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if j.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                write!(f, "x")?;
                let v = j.to_vec();
                if v.len() == 1 {
                    write!(f, "{}", v[0])?;
                } else {
                    write!(f, "{}", j)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExtElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (j, c) in &self.terms {
            seq.serialize_element(&(j, c.to_string()))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> ExtElement {
        ExtElement::var(4, i)
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&x(1) * &x(2), ExtElement::monomial(4, Subset::from_slice(&[1, 2]), 1));
        assert!((&x(1) * &x(1)).is_zero());
        assert!((&(&x(1) + &x(2)) * &(&x(1) - &x(2))).is_zero());
        assert!(x(1).checked_mul(&ExtElement::var(6, 1)).is_err());
    }

    #[test]
    fn sigma_examples() {
        let v = Subset::from_slice(&[1, 2, 3]);
        assert_eq!(sigma(4, 0, v), ExtElement::one(4));
        let s2 = sigma(4, 2, v);
        assert_eq!(s2.len(), 3);
        assert!(s2.terms().all(|(j, c)| j.len() == 2 && c.is_one() && j.is_subset(v)));
        assert!(sigma(4, 4, v).is_zero());
    }

    #[test]
    fn r_poly_examples() {
        let r = r_poly(4, Subset::from_slice(&[1, 2]), |_| 1, 2);
        assert_eq!(r.coeff(1), &x(1) + &x(2));
        assert_eq!(r.coeff(2), &x(1) * &x(2));
        assert!(r_poly_seq(4, &[(1, 1), (-1, 1)], 2).is_one());
        let full = r_poly(4, Subset::full(4), |_| 1, 4);
        assert_eq!(full.coeff(2), sigma(4, 2, Subset::full(4)));
        assert_eq!(full.coeff(2).len(), 6);
    }

    #[test]
    fn substitution_kills_repeats() {
        let e = ExtElement::monomial(4, Subset::from_slice(&[1, 2]), 3);
        assert!(e.substitute(4, |_| Some((1, 1))).is_zero());
        let img = e.substitute(4, |i| Some((if i == 2 { -1 } else { 1 }, i)));
        assert_eq!(img, ExtElement::monomial(4, Subset::from_slice(&[1, 2]), -3));
    }

    #[test]
    fn display() {
        let e = &(&x(1) - &ExtElement::monomial(4, Subset::from_slice(&[2, 3]), 2)) + &ExtElement::one(4);
        assert_eq!(e.to_string(), "1 + x1 - 2x{2,3}");
    }
}
