use serde::Serialize;

use super::{make_standard, quotient, BiGraph, Folding, GraphJson, Quotient, StandardKind};
use crate::error::{input, KrlError, Result};
use crate::subset::Subset;

/// A hedgehog: the folding of `L(n)` (unrolled) or `C(n)` (rolled) by the pinch points `A`.
#[derive(Clone, Debug, Serialize)]
pub struct Hedgehog {
    pub n: usize,
    pub pinch: Subset,
    /// `i_0 < i_1 < … < i_r`.
    pub a_sharp: Vec<usize>,
    /// Indices `t` (from 1) of the spine edges `d_t`.
    pub spines: Vec<usize>,
    /// Indices `t` of the body edges.
    pub body: Vec<usize>,
    /// `K_0`: the `i_t` of spine edges.
    pub spine_vertices: Subset,
    /// `K_1`: the `i_t` of body edges.
    pub body_vertices: Subset,
    pub m: usize,
    pub rolled_graph: GraphJson,
    #[serde(skip)]
    pub unrolled: Quotient,
    #[serde(skip)]
    pub rolled: Quotient,
}

impl Hedgehog {
    /// `x_j ↦ sign·x_rep` with `rep = i_t` for `i_t ≤ j < i_{t+1}` and sign `(-1)^{j-i_t}`.
    pub fn rep(&self, j: usize) -> (i8, usize) {
        let t = self.a_sharp.partition_point(|&i| i <= j) - 1;
        let r = self.a_sharp[t];
        (if (j - r) % 2 == 0 { 1 } else { -1 }, r)
    }

    /// `i_{t+1}`, with `i_{r+1} = 2n+1`.
    pub fn next_sharp(&self, t: usize) -> usize {
        self.a_sharp.get(t + 1).copied().unwrap_or(2 * self.n + 1)
    }

    /// `K = A^# ∖ {0}`.
    pub fn k_set(&self) -> Subset {
        self.spine_vertices.union(self.body_vertices)
    }
}

fn pinch_fold(vertices: usize, modulus: usize, a: Subset) -> Folding {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in a.iter() {
        let (u, v) = ((i - 1) % modulus, (i + 1) % modulus);
        let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let labels: Vec<usize> = (0..vertices).map(|v| root(&mut parent, v)).collect();
    Folding::from_labels(&labels)
}

/// Vertex set touched by the given edges of `g`, or `fallback` when there are none.
fn touched(g: &BiGraph, edges: &[usize], fallback: usize) -> Vec<usize> {
    let mut vs: Vec<usize> = edges.iter().flat_map(|&e| [g.edges()[e].0, g.edges()[e].1]).collect();
    if vs.is_empty() {
        vs.push(fallback);
    }
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// The subgraph spanned by `edges`, relabelled onto `verts`.
fn restrict(g: &BiGraph, verts: &[usize], edges: &[usize]) -> Result<BiGraph> {
    let pos = |v: usize| verts.binary_search(&v).expect("vertex in body");
    BiGraph::new(
        verts.iter().map(|v| g.parity(*v)).collect(),
        edges.iter().map(|&e| (pos(g.edges()[e].0), pos(g.edges()[e].1))),
    )
}

fn check_spines(g: &BiGraph, spine_edges: &[usize], body: &[usize]) -> Result<()> {
    for &e in spine_edges {
        let (u, v) = g.edges()[e];
        let inside = body.binary_search(&u).is_ok() as u8 + body.binary_search(&v).is_ok() as u8;
        if inside != 1 {
            return Err(KrlError::Internal(format!("spine edge ({u},{v}) does not have exactly one end in the body")));
        }
    }
    Ok(())
}

pub fn hedgehog_analyze(n: usize, a: Subset) -> Result<Hedgehog> {
    if n == 0 {
        return input("hedgehogs need n ≥ 1");
    }
    let top = 2 * n;
    if a.iter().any(|i| i == 0 || i >= top) {
        return input(format!("pinch points {a} must lie in 1..{}", top - 1));
    }
    let a_sharp: Vec<usize> = (0..=top).filter(|&i| i == 0 || !a.contains(i - 1)).collect();
    let r = a_sharp.len() - 1;
    let mut h = Hedgehog {
        n,
        pinch: a,
        a_sharp,
        spines: Vec::new(),
        body: Vec::new(),
        spine_vertices: Subset::EMPTY,
        body_vertices: Subset::EMPTY,
        m: 0,
        rolled_graph: GraphJson { vertices: Vec::new(), edges: Vec::new() },
        unrolled: quotient(&make_standard(StandardKind::B, 0)?, &Folding::identity(2))?,
        rolled: quotient(&make_standard(StandardKind::B, 0)?, &Folding::identity(2))?,
    };
    for t in 1..=r {
        let it = h.a_sharp[t];
        if (h.next_sharp(t) - it) % 2 == 0 {
            h.spines.push(t);
            h.spine_vertices = h.spine_vertices.with(it);
        } else {
            h.body.push(t);
            h.body_vertices = h.body_vertices.with(it);
        }
    }
    if h.body.len() % 2 == 1 {
        return Err(KrlError::Internal(format!("odd number of body edges for A = {a}")));
    }
    h.m = h.body.len() / 2;

    let line = make_standard(StandardKind::L, n)?;
    h.unrolled = quotient(&line, &pinch_fold(top + 1, usize::MAX, a))?;
    let cycle = make_standard(StandardKind::C, n)?;
    h.rolled = quotient(&cycle, &pinch_fold(top, top, a))?;

    // every e_j in the block of d_t lands on one edge, and different blocks on different edges
    let block_edge = |q: &Quotient, t: usize| -> Result<usize> {
        let nv = q.vertex_map.len();
        let image = |j: usize| q.graph.edge_index(q.vertex_map[j - 1], q.vertex_map[j % nv]).expect("image edge");
        let e = image(h.a_sharp[t]);
        for j in h.a_sharp[t]..h.next_sharp(t) {
            if image(j) != e {
                return Err(KrlError::Internal(format!("block of d_{t} is not folded onto one edge")));
            }
        }
        Ok(e)
    };
    let d: Vec<usize> = (1..=r).map(|t| block_edge(&h.unrolled, t)).collect::<Result<_>>()?;
    let mut sorted = d.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != r || h.unrolled.graph.edge_count() != r {
        return Err(KrlError::Internal("unrolled hedgehog edges are not the d_t".into()));
    }
    let ug = &h.unrolled.graph;
    let body_edges: Vec<usize> = h.body.iter().map(|t| d[t - 1]).collect();
    let spine_edges: Vec<usize> = h.spines.iter().map(|t| d[t - 1]).collect();
    let bv = touched(ug, &body_edges, h.unrolled.vertex_map[0]);
    if !restrict(ug, &bv, &body_edges)?.is_isomorphic(&make_standard(StandardKind::L, h.m)?) {
        return Err(KrlError::Internal("body is not a path".into()));
    }
    check_spines(ug, &spine_edges, &bv)?;

    let rg = &h.rolled.graph;
    let rd: Vec<usize> = (1..=r).map(|t| block_edge(&h.rolled, t)).collect::<Result<_>>()?;
    let mut rbody: Vec<usize> = h.body.iter().map(|t| rd[t - 1]).collect();
    rbody.sort_unstable();
    rbody.dedup();
    let rspine: Vec<usize> = h.spines.iter().map(|t| rd[t - 1]).collect();
    let rbv = touched(rg, &rbody, h.rolled.vertex_map[0]);
    if h.m > 0 && !restrict(rg, &rbv, &rbody)?.is_isomorphic(&make_standard(StandardKind::C, h.m)?) {
        return Err(KrlError::Internal("rolled body is not a cycle".into()));
    }
    check_spines(rg, &rspine, &rbv)?;
    h.rolled_graph = rg.to_json();
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let a = Subset::from_slice(&[2, 3, 4, 7, 10, 12, 15, 16]);
        let h = hedgehog_analyze(9, a).unwrap();
        assert_eq!(h.a_sharp, vec![0, 1, 2, 6, 7, 9, 10, 12, 14, 15, 18]);
        assert_eq!(h.spines, vec![2, 4, 6, 7]);
        assert_eq!(h.m, 3);
        assert_eq!(h.spines.len() + h.body.len(), h.a_sharp.len() - 1);
    }

    #[test]
    fn degenerate_pinches() {
        let h = hedgehog_analyze(3, Subset::EMPTY).unwrap();
        assert!(h.spines.is_empty());
        assert_eq!(h.m, 3);
        assert!(h.rolled.graph.is_isomorphic(&make_standard(StandardKind::C, 3).unwrap()));
        let all = hedgehog_analyze(3, Subset::interval(1, 5)).unwrap();
        assert_eq!(all.a_sharp, vec![0, 1]);
        assert_eq!((all.spines.clone(), all.m), (vec![1], 0));
        assert_eq!(all.rolled.graph.edge_count(), 1);
        assert!(hedgehog_analyze(2, Subset::from_slice(&[4])).is_err());
    }

    #[test]
    fn rep_signs() {
        let h = hedgehog_analyze(2, Subset::from_slice(&[1])).unwrap();
        assert_eq!(h.a_sharp, vec![0, 1, 3, 4]);
        assert_eq!(h.rep(2), (-1, 1));
        assert_eq!(h.rep(3), (1, 3));
        assert_eq!(h.rep(4), (1, 4));
    }

    #[test]
    fn all_pinch_sets_small() {
        for n in 1..=5 {
            for a in Subset::full(2 * n - 1).subsets() {
                let h = hedgehog_analyze(n, a).unwrap();
                assert_eq!(h.body.len() % 2, 0);
                assert!(h.unrolled.graph.is_tree());
            }
        }
    }
}
