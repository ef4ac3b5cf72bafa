//! The poset model `Y(G)` built from octahedral posets, and its integral cohomology.

mod complex;

pub use complex::{cohomology_from_boundaries, SimplicialComplexZ};

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KrlError, Result};
use crate::graph_rings::{graded_structure, GradedGroupStructure};
use crate::graphs::{enumerate_tree_foldings, quotient, BiGraph, Folding};

/// Default simplex budget.
pub const DEFAULT_SIMPLEX_BUDGET: u64 = 5_000_000;

/// The poset `{±1, ±2, ±3}` with `u < v` iff `|u| < |v|`.
pub struct OctPoset;

impl OctPoset {
    pub const ELEMENTS: [i8; 6] = [-3, -2, -1, 1, 2, 3];

    pub fn lt(u: i8, v: i8) -> bool {
        u.abs() < v.abs()
    }

    pub fn chi(u: i8) -> i8 {
        -u
    }

    /// Elements ordered by `|u|`, then sign.
    pub fn sorted() -> Vec<i8> {
        let mut e = Self::ELEMENTS.to_vec();
        e.sort_by_key(|u| (u.abs(), *u));
        e
    }

    pub fn complex() -> SimplicialComplexZ {
        let e = Self::sorted();
        SimplicialComplexZ::order_complex(e.iter().map(|u| format!("{u:+}")).collect(), |a, b| Self::lt(e[a], e[b]))
    }
}

fn level(u: i8) -> usize {
    u.unsigned_abs() as usize - 1
}

/// Componentwise order on `P^k`.
pub fn product_lt(a: &[i8], b: &[i8]) -> bool {
    a != b && a.iter().zip(b).all(|(x, y)| x == y || OctPoset::lt(*x, *y))
}

fn label(m: &[i8]) -> String {
    let parts: Vec<String> = m.iter().map(|u| format!("{u:+}")).collect();
    format!("({})", parts.join(","))
}

/// `P^k` sorted by total level, then lexicographically.
fn product_elements(k: usize) -> Vec<Vec<i8>> {
    let mut out: Vec<Vec<i8>> = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|m| OctPoset::ELEMENTS.iter().map(move |u| [m.clone(), vec![*u]].concat())).collect();
    }
    out.sort_by_key(|m| (m.iter().map(|u| level(*u)).sum::<usize>(), m.clone()));
    out
}

/// Number of nonempty chains in `P^k`, i.e. simplices of its order complex.
pub fn product_chain_count(k: usize) -> u64 {
    // chains ending at x depend only on the level vector of x
    let states: Vec<Vec<usize>> = (0..3usize.pow(k as u32))
        .map(|mut s| {
            (0..k)
                .map(|_| {
                    let l = s % 3;
                    s /= 3;
                    l
                })
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..states.len()).collect();
    order.sort_by_key(|&s| states[s].iter().sum::<usize>());
    let mut f = vec![0u64; states.len()];
    for &x in &order {
        let mut total = 1u64;
        for &y in &order {
            if y == x {
                continue;
            }
            let w: u64 = states[x]
                .iter()
                .zip(&states[y])
                .map(|(l, m)| match m.cmp(l) {
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Less => 2,
                    std::cmp::Ordering::Greater => 0,
                })
                .product();
            total = total.saturating_add(w.saturating_mul(f[y]));
        }
        f[x] = total;
    }
    f.iter().fold(0u64, |a, b| a.saturating_add(b.saturating_mul(1 << k)))
}

fn chains_of_product(k: usize) -> Vec<Vec<u32>> {
    let els = product_elements(k);
    SimplicialComplexZ::order_complex(vec![String::new(); els.len()], |a, b| product_lt(&els[a], &els[b]))
        .simplices
        .into_iter()
        .flatten()
        .collect()
}

/// One tree folding `p: G → T`; `Q_p` is the set of maps constant on the fibres of `edge_map`.
#[derive(Clone, Debug, Serialize)]
pub struct YPiece {
    pub folding: Vec<usize>,
    pub tree_edges: usize,
    pub edge_map: Vec<usize>,
}

/// `Y(G)`: the union over tree foldings `p` of the order complexes of `Q_p ⊆ P^{E_+(G)}`.
#[derive(Clone, Debug, Serialize)]
pub struct YPoset {
    pub edges: usize,
    pub pieces: Vec<YPiece>,
    /// Elements sorted by total level, so every chain is increasing in index.
    pub elements: Vec<Vec<i8>>,
    #[serde(skip)]
    pub index: HashMap<Vec<i8>, u32>,
}

impl YPoset {
    pub fn lt(&self, a: usize, b: usize) -> bool {
        product_lt(&self.elements[a], &self.elements[b])
    }

    pub fn contains(&self, m: &[i8]) -> bool {
        self.index.contains_key(m)
    }

    /// Upper bound on the simplex count of the complex.
    pub fn simplex_estimate(&self) -> u64 {
        self.pieces.iter().map(|p| product_chain_count(p.tree_edges)).fold(0, u64::saturating_add)
    }

    /// The union of the order complexes of the pieces; refuses above `budget` simplices.
    pub fn complex(&self, budget: u64) -> Result<SimplicialComplexZ> {
        let estimate = self.simplex_estimate();
        if estimate > budget {
            return Err(KrlError::Budget { what: "Y(G) complex".into(), estimate, cap: budget });
        }
        let mut by_k: HashMap<usize, (Vec<Vec<i8>>, Vec<Vec<u32>>)> = HashMap::new();
        for p in &self.pieces {
            by_k.entry(p.tree_edges).or_insert_with(|| (product_elements(p.tree_edges), chains_of_product(p.tree_edges)));
        }
        let mut all: HashSet<Vec<u32>> = HashSet::new();
        for p in &self.pieces {
            let (els, chains) = &by_k[&p.tree_edges];
            let ids: Vec<u32> = els.iter().map(|m| self.index[&pull_back(m, &p.edge_map)]).collect();
            for c in chains {
                let mut s: Vec<u32> = c.iter().map(|i| ids[*i as usize]).collect();
                s.sort_unstable();
                all.insert(s);
            }
        }
        let labels = self.elements.iter().map(|m| label(m)).collect();
        Ok(SimplicialComplexZ::from_simplices(labels, all))
    }
}

fn pull_back(m: &[i8], edge_map: &[usize]) -> Vec<i8> {
    edge_map.iter().map(|e| m[*e]).collect()
}

/// Positive edges map to positive edges under a folding, since parity is preserved.
pub fn build_y_poset(g: &BiGraph) -> Result<YPoset> {
    let mut pieces = Vec::new();
    for f in enumerate_tree_foldings(g, None) {
        let q = quotient(g, &f)?;
        pieces.push(YPiece { folding: f.labels().to_vec(), tree_edges: q.graph.edge_count(), edge_map: q.edge_map });
    }
    if pieces.iter().any(|p| p.tree_edges > 8) {
        return Err(KrlError::Budget {
            what: "Y(G) poset".into(),
            estimate: pieces.iter().map(|p| 6u64.saturating_pow(p.tree_edges as u32)).max().unwrap_or(0),
            cap: 6u64.pow(8),
        });
    }
    let mut set: BTreeSet<(usize, Vec<i8>)> = BTreeSet::new();
    for p in &pieces {
        for m in product_elements(p.tree_edges) {
            let pb = pull_back(&m, &p.edge_map);
            set.insert((pb.iter().map(|u| level(*u)).sum(), pb));
        }
    }
    let elements: Vec<Vec<i8>> = set.into_iter().map(|(_, m)| m).collect();
    let index = elements.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
    Ok(YPoset { edges: g.edge_count(), pieces, elements, index })
}

/// Cellular cochains of `(S^2)^k` with the cells of `P^k`: `∂(±2) = (+1) - (-1)`, `∂(±3) = (+2) - (-2)`.
pub fn product_cellular_cohomology(k: usize) -> GradedGroupStructure {
    let els = product_elements(k);
    let dim = |m: &[i8]| m.iter().map(|u| level(*u)).sum::<usize>();
    let top = 2 * k;
    let mut cells: Vec<Vec<&Vec<i8>>> = vec![Vec::new(); top + 1];
    for m in &els {
        cells[dim(m)].push(m);
    }
    let index: HashMap<&Vec<i8>, usize> =
        cells.iter().flat_map(|c| c.iter().enumerate().map(|(i, m)| (*m, i))).collect();
    let boundaries: Vec<Vec<Vec<(usize, BigInt)>>> = (0..=top)
        .map(|d| {
            if d == 0 {
                return Vec::new();
            }
            cells[d]
                .iter()
                .map(|m| {
                    let mut row: HashMap<usize, i64> = HashMap::new();
                    let mut before = 0;
                    for i in 0..k {
                        let sign = if before % 2 == 0 { 1 } else { -1 };
                        let a = m[i].abs();
                        if a > 1 {
                            for (face, s) in [(a - 1, 1), (1 - a, -1)] {
                                let mut f: Vec<i8> = (*m).clone();
                                f[i] = face;
                                *row.entry(index[&f]).or_insert(0) += sign * s;
                            }
                        }
                        before += level(m[i]);
                    }
                    let mut r: Vec<(usize, BigInt)> =
                        row.into_iter().filter(|(_, v)| *v != 0).map(|(c, v)| (c, BigInt::from(v))).collect();
                    r.sort_by_key(|e| e.0);
                    r
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = cells.iter().map(|c| c.len()).collect();
    cohomology_from_boundaries(&sizes, boundaries)
}

/// How `Y(G)` was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    Simplicial,
    /// `G` is a tree, so `Y(G)` is `Δ(P^E)` and the product cell structure applies.
    Cellular,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyComparison {
    pub route: Route,
    pub elements: usize,
    pub pieces: usize,
    pub f_vector: Option<Vec<usize>>,
    pub euler: i64,
    pub cohomology: GradedGroupStructure,
    pub s_ring: GradedGroupStructure,
    pub odd_vanish: bool,
    pub torsion_free: bool,
    /// `rank H^{2k} = rank S^k` for all `k`, odd cohomology zero, and torsion equal.
    pub matches: bool,
}

/// Integral cohomology of `Y(G)` next to the graded group `S(G)`.
pub fn compare_with_s(g: &BiGraph, budget: u64) -> Result<CohomologyComparison> {
    let y = build_y_poset(g)?;
    let (route, f_vector, cohomology) = if g.is_tree() {
        (Route::Cellular, None, product_cellular_cohomology(g.edge_count()))
    } else {
        let k = y.complex(budget)?;
        (Route::Simplicial, Some(k.f_vector()), k.integral_cohomology())
    };
    let euler = cohomology.degrees.iter().enumerate().map(|(d, g)| if d % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum();
    let s_ring = graded_structure(g, None);
    let odd_vanish = cohomology.degrees.iter().skip(1).step_by(2).all(|d| d.rank == 0 && d.torsion.is_empty());
    let torsion_free = !cohomology.has_torsion();
    let len = cohomology.degrees.len().max(2 * s_ring.degrees.len());
    let matches = odd_vanish
        && (0..len).step_by(2).all(|d| {
            let h = cohomology.degrees.get(d);
            let s = s_ring.degrees.get(d / 2);
            h.map(|x| x.rank).unwrap_or(0) == s.map(|x| x.rank).unwrap_or(0)
                && h.map(|x| x.torsion.clone()).unwrap_or_default() == s.map(|x| x.torsion.clone()).unwrap_or_default()
        });
    Ok(CohomologyComparison {
        route,
        elements: y.elements.len(),
        pieces: y.pieces.len(),
        f_vector,
        euler,
        cohomology,
        s_ring,
        odd_vanish,
        torsion_free,
        matches,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorialityReport {
    pub elements_checked: usize,
    pub order_preserving: bool,
    pub lands_in_y: bool,
    pub simplices_checked: usize,
    pub subcomplex: bool,
}

impl FunctorialityReport {
    pub fn ok(&self) -> bool {
        self.order_preserving && self.lands_in_y && self.subcomplex
    }
}

/// For a folding `p: G → G'`, pulling back along `p` sends `Y(G')` into `Y(G)` as a subcomplex.
pub fn pullback_check(g: &BiGraph, f: &Folding, budget: u64) -> Result<FunctorialityReport> {
    let q = quotient(g, f)?;
    let yg = build_y_poset(g)?;
    let yh = build_y_poset(&q.graph)?;
    let pb: Vec<Vec<i8>> = yh.elements.iter().map(|m| pull_back(m, &q.edge_map)).collect();
    let lands_in_y = pb.iter().all(|m| yg.contains(m));
    let mut order_preserving = true;
    for a in 0..pb.len() {
        for b in 0..pb.len() {
            if yh.lt(a, b) {
                order_preserving &= product_lt(&pb[a], &pb[b]);
            }
        }
    }
    let kg = yg.complex(budget)?;
    let kh = yh.complex(budget)?;
    let simplices: HashSet<&Vec<u32>> = kg.simplices.iter().flatten().collect();
    let mut checked = 0;
    let mut subcomplex = lands_in_y;
    if lands_in_y {
        for s in kh.simplices.iter().flatten() {
            let mut img: Vec<u32> = s.iter().map(|v| yg.index[&pb[*v as usize]]).collect();
            img.sort_unstable();
            subcomplex &= simplices.contains(&img);
            checked += 1;
        }
    }
    Ok(FunctorialityReport { elements_checked: pb.len(), order_preserving, lands_in_y, simplices_checked: checked, subcomplex })
}

/// Cross-check of the cellular and simplicial routes for `(S^2)^k`.
pub fn routes_agree(k: usize, budget: u64) -> Result<bool> {
    let est = product_chain_count(k);
    if est > budget {
        return Err(KrlError::Budget { what: format!("Δ(P^{k})"), estimate: est, cap: budget });
    }
    let els = product_elements(k);
    let c = SimplicialComplexZ::order_complex(els.iter().map(|m| label(m)).collect(), |a, b| product_lt(&els[a], &els[b]));
    Ok(c.integral_cohomology() == product_cellular_cohomology(k))
}

pub fn par_compare(graphs: &[BiGraph], budget: u64) -> Vec<Result<CohomologyComparison>> {
    graphs.par_iter().map(|g| compare_with_s(g, budget)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{make_standard, StandardKind};

    #[test]
    fn octahedron() {
        let k = OctPoset::complex();
        assert_eq!(k.f_vector(), vec![6, 12, 8]);
        assert_eq!(k.euler_characteristic(), 2);
        assert!(k.boundary_squared_zero());
        assert_eq!(k.integral_cohomology().ranks(), vec![1, 0, 1]);
        assert!(OctPoset::ELEMENTS.iter().all(|u| OctPoset::chi(OctPoset::chi(*u)) == *u));
        for u in OctPoset::ELEMENTS {
            for v in OctPoset::ELEMENTS {
                assert_eq!(OctPoset::lt(u, v), OctPoset::lt(OctPoset::chi(u), OctPoset::chi(v)));
            }
        }
    }

    #[test]
    fn two_chain() {
        let k = SimplicialComplexZ::order_complex(vec!["a".into(), "b".into()], |a, b| a < b);
        assert_eq!(k.f_vector(), vec![2, 1]);
        assert_eq!(k.export_text(), "a\nb\na b\n");
    }

    #[test]
    fn chain_counts() {
        assert_eq!(product_chain_count(1), 26);
        assert_eq!(product_chain_count(2), 2500);
        assert_eq!(product_chain_count(3), 614120);
        assert_eq!(chains_of_product(2).len(), 2500);
    }

    #[test]
    fn small_y() {
        let b = make_standard(StandardKind::B, 0).unwrap();
        assert_eq!(build_y_poset(&b).unwrap().elements.len(), 6);
        let c1 = make_standard(StandardKind::C, 1).unwrap();
        assert_eq!(build_y_poset(&c1).unwrap().elements.len(), 6);
        let c2 = make_standard(StandardKind::C, 2).unwrap();
        let y = build_y_poset(&c2).unwrap();
        assert_eq!(y.pieces.len(), 3);
        assert_eq!(y.pieces.iter().filter(|p| p.tree_edges == 2).count(), 2);
        assert_eq!(y.elements.len(), 66);
    }

    #[test]
    fn cellular_products() {
        assert_eq!(product_cellular_cohomology(1).ranks(), vec![1, 0, 1]);
        assert_eq!(product_cellular_cohomology(3).ranks(), vec![1, 0, 3, 0, 3, 0, 1]);
        assert!(routes_agree(1, DEFAULT_SIMPLEX_BUDGET).unwrap());
        assert!(routes_agree(2, DEFAULT_SIMPLEX_BUDGET).unwrap());
        assert!(matches!(routes_agree(4, 1000), Err(KrlError::Budget { .. })));
    }
}
