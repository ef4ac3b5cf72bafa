use serde::Serialize;

use crate::error::{input, KrlError, Result};

/// The prime field `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u32,
    inv: Vec<u32>,
}

impl Fp {
    /// Only primes below 256 are supported.
    pub fn new(p: u32) -> Result<Fp> {
        let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if !prime {
            return input(format!("q = {p} is not a prime (prime powers are not supported)"));
        }
        if p > 251 {
            return input(format!("q = {p} is too large"));
        }
        let mut inv = vec![0; p as usize];
        for a in 1..p {
            inv[a as usize] = (1..p).find(|b| a * b % p == 1).expect("field inverse");
        }
        Ok(Fp { p, inv })
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.p) as u8
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        (a as u32 * b as u32 % self.p) as u8
    }

    pub fn neg(&self, a: u8) -> u8 {
        ((self.p - a as u32) % self.p) as u8
    }

    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize] as u8
    }

    /// `a - c·b` entrywise.
    pub fn axpy(&self, a: &mut [u8], c: u8, b: &[u8]) {
        let nc = self.neg(c);
        for (x, y) in a.iter_mut().zip(b) {
            *x = self.add(*x, self.mul(nc, *y));
        }
    }
}

/// `(F_p[t]/t^len)^2`, with `t^i e_a` at coordinate `2i + a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionAmbient {
    pub len: usize,
}

impl TorsionAmbient {
    pub fn dim(self) -> usize {
        2 * self.len
    }

    pub fn t_pow(self, v: &[u8], k: usize) -> Vec<u8> {
        let mut out = vec![0; v.len()];
        let s = 2 * k;
        if s < v.len() {
            out[s..].copy_from_slice(&v[..v.len() - s]);
        }
        out
    }

    pub fn basis_vector(self, i: usize, a: usize) -> Vec<u8> {
        let mut v = vec![0; self.dim()];
        v[2 * i + a] = 1;
        v
    }

    pub fn whole(self) -> Subspace {
        Subspace::identity(self.dim())
    }

    /// `t^k` times the whole module.
    pub fn t_power_part(self, k: usize) -> Subspace {
        let vecs: Vec<Vec<u8>> =
            (k..self.len).flat_map(|i| [self.basis_vector(i, 0), self.basis_vector(i, 1)]).collect();
        Subspace { dim: self.dim(), rows: vecs }
    }
}

/// A subspace stored as its reduced row-echelon basis, which is unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    dim: usize,
    rows: Vec<Vec<u8>>,
}

fn pivot(r: &[u8]) -> Option<usize> {
    r.iter().position(|x| *x != 0)
}

impl Subspace {
    pub fn zero(dim: usize) -> Subspace {
        Subspace { dim, rows: Vec::new() }
    }

    pub fn identity(dim: usize) -> Subspace {
        Subspace {
            dim,
            rows: (0..dim)
                .map(|i| {
                    let mut v = vec![0; dim];
                    v[i] = 1;
                    v
                })
                .collect(),
        }
    }

    pub fn span(f: &Fp, dim: usize, vecs: impl IntoIterator<Item = Vec<u8>>) -> Subspace {
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for mut v in vecs {
            assert_eq!(v.len(), dim, "vector length");
            for r in &rows {
                let pc = pivot(r).expect("nonzero row");
                if v[pc] != 0 {
                    let c = v[pc];
                    f.axpy(&mut v, c, r);
                }
            }
            let Some(pc) = pivot(&v) else { continue };
            let s = f.inv(v[pc]);
            for x in v.iter_mut() {
                *x = f.mul(*x, s);
            }
            for r in rows.iter_mut() {
                if r[pc] != 0 {
                    let c = r[pc];
                    f.axpy(r, c, &v);
                }
            }
            rows.push(v);
        }
        rows.sort_by_key(|r| pivot(r));
        Subspace { dim, rows }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Canonical remainder of `v` modulo the subspace.
    pub fn reduce(&self, f: &Fp, v: &[u8]) -> Vec<u8> {
        let mut v = v.to_vec();
        for r in &self.rows {
            let pc = pivot(r).expect("nonzero row");
            if v[pc] != 0 {
                let c = v[pc];
                f.axpy(&mut v, c, r);
            }
        }
        v
    }

    pub fn contains_vec(&self, f: &Fp, v: &[u8]) -> bool {
        self.reduce(f, v).iter().all(|x| *x == 0)
    }

    pub fn contains(&self, f: &Fp, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vec(f, r))
    }

    pub fn sum(&self, f: &Fp, other: &Subspace) -> Subspace {
        Subspace::span(f, self.dim, self.rows.iter().chain(&other.rows).cloned())
    }

    /// `t^k W`.
    pub fn t_image(&self, f: &Fp, amb: TorsionAmbient, k: usize) -> Subspace {
        Subspace::span(f, self.dim, self.rows.iter().map(|r| amb.t_pow(r, k)))
    }

    pub fn is_t_stable(&self, f: &Fp, amb: TorsionAmbient) -> bool {
        self.rows.iter().all(|r| self.contains_vec(f, &amb.t_pow(r, 1)))
    }

    /// `{v ∈ within : t^k v ∈ self}`.
    pub fn preimage(&self, f: &Fp, amb: TorsionAmbient, k: usize, within: &Subspace) -> Subspace {
        let r = within.rows.len();
        // rows [remainder of t^k s_j | unit vector j]; rows whose left part vanishes give the kernel
        let mut aug: Vec<Vec<u8>> = within
            .rows
            .iter()
            .enumerate()
            .map(|(j, s)| {
                let mut row = self.reduce(f, &amb.t_pow(s, k));
                row.extend((0..r).map(|i| (i == j) as u8));
                row
            })
            .collect();
        let d = self.dim;
        let mut lead = 0;
        for col in 0..d {
            let Some(pr) = (lead..aug.len()).find(|&i| aug[i][col] != 0) else { continue };
            aug.swap(lead, pr);
            let s = f.inv(aug[lead][col]);
            for x in aug[lead].iter_mut() {
                *x = f.mul(*x, s);
            }
            let prow = aug[lead].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != lead && row[col] != 0 {
                    let c = row[col];
                    f.axpy(row, c, &prow);
                }
            }
            lead += 1;
        }
        let vecs = aug[lead..].iter().map(|row| {
            let mut v = vec![0u8; d];
            for (j, c) in row[d..].iter().enumerate() {
                if *c != 0 {
                    let mut term = within.rows[j].clone();
                    for x in term.iter_mut() {
                        *x = f.mul(*x, *c);
                    }
                    for (a, b) in v.iter_mut().zip(&term) {
                        *a = f.add(*a, *b);
                    }
                }
            }
            v
        });
        Subspace::span(f, d, vecs.collect::<Vec<_>>())
    }

    /// Embed into a larger ambient by `v ↦ t^shift·v`, from length `from` to length `to`.
    pub fn shifted(&self, f: &Fp, from: TorsionAmbient, to: TorsionAmbient, shift: usize) -> Subspace {
        let vecs = self.rows.iter().map(|r| {
            let mut v = vec![0; to.dim()];
            for i in 0..from.len {
                if i + shift < to.len {
                    v[2 * (i + shift)] = r[2 * i];
                    v[2 * (i + shift) + 1] = r[2 * i + 1];
                }
            }
            v
        });
        Subspace::span(f, to.dim(), vecs.collect::<Vec<_>>())
    }
}

/// Exponent, `β`, imbalance and dimension of a thin module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThinInvariants {
    pub eta: usize,
    pub beta: usize,
    pub delta: usize,
    pub dim: usize,
}

impl ThinInvariants {
    pub fn balanced(&self) -> bool {
        self.delta == 0
    }
}

/// Invariants of `W/U` for t-stable `U ≤ W`.
pub fn thin_invariants(f: &Fp, amb: TorsionAmbient, w: &Subspace, u: &Subspace) -> Result<ThinInvariants> {
    if !w.contains(f, u) {
        return input("thin_invariants needs U ≤ W");
    }
    if !w.is_t_stable(f, amb) || !u.is_t_stable(f, amb) {
        return input("thin_invariants needs t-stable subspaces");
    }
    let dim = w.dim() - u.dim();
    let cok = |k: usize| w.dim() - w.t_image(f, amb, k).sum(f, u).dim();
    if cok(1) > 2 {
        return input(format!("module of rank {} is not thin", cok(1)));
    }
    let eta = (0..=amb.len)
        .find(|&k| u.contains(f, &w.t_image(f, amb, k)))
        .ok_or_else(|| KrlError::Internal("t is not nilpotent".into()))?;
    let beta = (0..=eta).filter(|&k| cok(k) == 2 * k).max().unwrap_or(0);
    if 2 * eta < dim {
        return Err(KrlError::Internal("thin module with 2η < dim".into()));
    }
    Ok(ThinInvariants { eta, beta, delta: 2 * eta - dim, dim })
}
