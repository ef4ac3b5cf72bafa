use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{KrlError, Result};

type Poly = Vec<BigRational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_assign(a: &mut Poly, b: &Poly) {
    if a.len() < b.len() {
        a.resize(b.len(), BigRational::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// Coefficients `[n][k]` of `s^n t^k` in `2t / ((t-1) + (t+1)·sqrt(1-4st))`, for `n ≤ max_n`, `k ≤ max_n`.
///
/// Writing `sqrt(1-4st) = Σ b_k (st)^k`, the closed form equals `1/(1+G)` with
/// `G = (t+1)/2 · Σ_{k≥1} b_k s^k t^{k-1}`, which is expanded by the recursion `F = 1 - G·F`.
pub fn gf_coefficients(max_n: usize) -> Result<Vec<Vec<BigInt>>> {
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));
    // b_k = binom(1/2, k)·(-4)^k
    let mut b = vec![BigRational::one()];
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for k in 1..=max_n {
        let prev = b[k - 1].clone();
        let factor = (&half - r(k as i64 - 1)) / r(k as i64) * r(-4);
        b.push(prev * factor);
    }
    // g[k]: polynomial in t multiplying s^k
    let mut g: Vec<Poly> = vec![vec![BigRational::zero()]];
    for (k, bk) in b.iter().enumerate().skip(1) {
        let mut p = vec![BigRational::zero(); k + 1];
        p[k - 1] = bk / r(2);
        p[k] = bk / r(2);
        g.push(p);
    }
    let mut f: Vec<Poly> = vec![vec![BigRational::one()]];
    for n in 1..=max_n {
        let mut acc: Poly = vec![BigRational::zero()];
        for j in 1..=n {
            poly_add_assign(&mut acc, &poly_mul(&g[j], &f[n - j]));
        }
        f.push(acc.into_iter().map(|c| -c).collect());
    }
    let mut table = Vec::with_capacity(max_n + 1);
    for (n, p) in f.into_iter().enumerate() {
        let mut row = vec![BigInt::zero(); max_n + 1];
        for (k, c) in p.into_iter().enumerate() {
            if !c.is_integer() {
                return Err(KrlError::Internal(format!("non-integral coefficient {c} at s^{n} t^{k}")));
            }
            if k <= max_n {
                row[k] = c.to_integer();
            } else if !c.is_zero() {
                return Err(KrlError::Internal(format!("t-degree {k} exceeds s-degree {n}")));
            }
        }
        table.push(row);
    }
    Ok(table)
}
