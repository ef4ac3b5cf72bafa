//! The rings `S(G)` via graded integer linear algebra over `E(E_+)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::exterior::{r_poly, r_poly_seq, sigma, ExtElement};
use crate::graphs::{hedgehog_analyze, BiGraph};
use crate::linalg::smith_of_rows;
use crate::error::{input, Result};
use crate::subset::Subset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeGroup {
    pub rank: usize,
    #[serde(serialize_with = "ser_bigs")]
    pub torsion: Vec<BigInt>,
}

fn ser_bigs<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

/// Free rank and torsion of a graded abelian group, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedGroupStructure {
    pub degrees: Vec<DegreeGroup>,
}

impl GradedGroupStructure {
    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.rank).collect()
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.iter().any(|d| !d.torsion.is_empty())
    }

    /// Ranks with trailing zero degrees dropped.
    pub fn trimmed_ranks(&self) -> Vec<usize> {
        let mut r = self.ranks();
        while r.len() > 1 && r.last() == Some(&0) {
            r.pop();
        }
        r
    }
}

/// Convolution of rank sequences, i.e. the ranks of a graded tensor product of free groups.
pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphRingPresentation {
    /// Number of positive edges; variable `x_{e+1}` is edge `e`.
    pub generators: usize,
    pub relations: Vec<ExtElement>,
    /// Vertex list of the cycle each relation came from.
    pub provenance: Vec<Vec<usize>>,
}

/// Simple cycles of length at least 4, one per rotation/reversal class: the first vertex is
/// the smallest and the second is smaller than the last.
pub fn simple_cycles(g: &BiGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let cap = 2 * g.vertex_count();
    for s in 0..g.vertex_count() {
        let mut path = vec![s];
        let mut on = vec![false; g.vertex_count()];
        on[s] = true;
        fn dfs(g: &BiGraph, s: usize, cap: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
            let u = *path.last().unwrap();
            for &w in g.neighbors(u) {
                if w == s && path.len() >= 3 && path[1] < u {
                    out.push(path.clone());
                } else if w > s && !on[w] && path.len() < cap {
                    on[w] = true;
                    path.push(w);
                    dfs(g, s, cap, path, on, out);
                    path.pop();
                    on[w] = false;
                }
            }
        }
        dfs(g, s, cap, &mut path, &mut on, &mut out);
    }
    out.sort();
    out
}

/// Signed generators met along a closed walk `u_0, …, u_{L-1}` (returning to `u_0`).
pub fn walk_vars(g: &BiGraph, walk: &[usize]) -> Result<Vec<(i8, usize)>> {
    let l = walk.len();
    (0..l)
        .map(|i| {
            let (u, v) = (walk[i], walk[(i + 1) % l]);
            g.signed_var(u, v)
                .map(|(s, e)| (s, e + 1))
                .ok_or_else(|| crate::KrlError::Input(format!("({u},{v}) is not an edge")))
        })
        .collect()
}

/// Positive-degree `t`-coefficients of `r_c(t)` for a closed walk.
pub fn walk_relations(g: &BiGraph, walk: &[usize]) -> Result<Vec<ExtElement>> {
    let vars = walk_vars(g, walk)?;
    let r = r_poly_seq(g.edge_count(), &vars, vars.len());
    Ok(r.coeffs.into_iter().skip(1).filter(|c| !c.is_zero()).collect())
}

/// Relations from every nondegenerate cycle, traversed both ways.
pub fn cycle_relations(g: &BiGraph) -> GraphRingPresentation {
    let mut p = GraphRingPresentation { generators: g.edge_count(), relations: Vec::new(), provenance: Vec::new() };
    for c in simple_cycles(g) {
        let mut rev = c.clone();
        rev[1..].reverse();
        for walk in [&c, &rev] {
            for r in walk_relations(g, walk).expect("cycle edges exist") {
                p.relations.push(r);
                p.provenance.push(walk.clone());
            }
        }
    }
    p
}

/// `E(ambient)/(relations)` in x-degrees `0..=max_degree`; relations must be homogeneous.
pub fn graded_quotient(ambient: usize, relations: &[ExtElement], max_degree: usize) -> Result<GradedGroupStructure> {
    let mut by_degree: Vec<Vec<&ExtElement>> = vec![Vec::new(); ambient + 1];
    for r in relations {
        if r.is_zero() {
            continue;
        }
        let Some(d) = r.degree() else {
            return input(format!("relation {r} is not homogeneous"));
        };
        if r.ambient() != ambient {
            return input("relation ambient mismatch");
        }
        by_degree[d].push(r);
    }
    let degrees = (0..=max_degree)
        .into_par_iter()
        .map(|k| {
            if k > ambient {
                return DegreeGroup { rank: 0, torsion: Vec::new() };
            }
            let basis: Vec<Subset> = Subset::all_of_size(ambient, k).collect();
            let index: HashMap<Subset, usize> = basis.iter().enumerate().map(|(i, s)| (*s, i)).collect();
            let mut rows = Vec::new();
            for (d, rels) in by_degree.iter().enumerate().take(k + 1) {
                for mono in Subset::all_of_size(ambient, k - d) {
                    for r in rels {
                        let p = r.mul_monomial(mono);
                        if !p.is_zero() {
                            rows.push(p.terms().map(|(s, c)| (index[&s], c.clone())).collect());
                        }
                    }
                }
            }
            let s = smith_of_rows(basis.len(), rows);
            DegreeGroup { rank: basis.len() - s.rank, torsion: s.torsion() }
        })
        .collect();
    Ok(GradedGroupStructure { degrees })
}

/// `S(G)` in degrees `0..=max_degree` (default: all).
pub fn graded_structure(g: &BiGraph, max_degree: Option<usize>) -> GradedGroupStructure {
    let p = cycle_relations(g);
    graded_quotient(p.generators, &p.relations, max_degree.unwrap_or(p.generators)).expect("cycle relations are homogeneous")
}

#[derive(Clone, Debug, Serialize)]
pub struct HedgehogRingReport {
    pub n: usize,
    pub pinch: Subset,
    /// `R(K_1) ⊗ E(K_0)`.
    pub body_times_spines: GradedGroupStructure,
    /// `R(n)/(x_i + x_{i+1} : i ∈ A)`.
    pub pinched_quotient: GradedGroupStructure,
    /// `S(H(A))` from the rolled hedgehog graph.
    pub graph_ring: GradedGroupStructure,
    /// `(j, sign, rep)`: `x_j ↦ sign·x_rep`.
    pub substitution: Vec<(usize, i8, usize)>,
    /// The image of `r_I(t)` equals `r_{K_1}(t)`.
    pub symbolic_ok: bool,
    pub agree: bool,
}

pub fn hedgehog_ring(n: usize, a: Subset) -> Result<HedgehogRingReport> {
    let h = hedgehog_analyze(n, a)?;
    let top = 2 * n;
    let k_set = h.k_set();
    let kv = k_set.to_vec();
    let local = |i: usize| kv.binary_search(&i).expect("index in K") + 1;
    let body_local = Subset::from_slice(&h.body_vertices.iter().map(local).collect::<Vec<_>>());
    let body_rel: Vec<ExtElement> = (1..=body_local.len()).map(|k| sigma(kv.len(), k, body_local)).collect();
    let body_times_spines = graded_quotient(kv.len(), &body_rel, top)?;

    let mut rel: Vec<ExtElement> = (1..=top).map(|k| sigma(top, k, Subset::full(top))).collect();
    for i in a.iter() {
        rel.push(&ExtElement::var(top, i) + &ExtElement::var(top, i + 1));
    }
    let pinched_quotient = graded_quotient(top, &rel, top)?;
    let graph_ring = graded_structure(&h.rolled.graph, Some(top));

    let substitution: Vec<(usize, i8, usize)> = (1..=top).map(|j| {
        let (s, r) = h.rep(j);
        (j, s, r)
    }).collect();
    let image = r_poly_seq(top, &substitution.iter().map(|(_, s, r)| (*s, *r)).collect::<Vec<_>>(), top);
    let target = r_poly(top, h.body_vertices, |_| 1, top);
    let symbolic_ok = image == target;
    let agree = body_times_spines == pinched_quotient && pinched_quotient == graph_ring;
    Ok(HedgehogRingReport { n, pinch: a, body_times_spines, pinched_quotient, graph_ring, substitution, symbolic_ok, agree })
}
