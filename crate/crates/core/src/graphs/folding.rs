use serde::{Serialize, Serializer};

use super::BiGraph;
use crate::combinatorics::{enumerate_ncm, Matching};
use crate::error::{input, KrlError, Result};

/// Vertex partition stored as a restricted growth string: class ids appear in order of first use.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Folding {
    class_of: Vec<usize>,
}

impl Folding {
    /// Canonicalises arbitrary labels.
    pub fn from_labels(labels: &[usize]) -> Folding {
        let mut seen = std::collections::HashMap::new();
        let class_of = labels
            .iter()
            .map(|l| {
                let k = seen.len();
                *seen.entry(*l).or_insert(k)
            })
            .collect();
        Folding { class_of }
    }

    pub fn identity(vertices: usize) -> Folding {
        Folding { class_of: (0..vertices).collect() }
    }

    /// Classes must cover `0..vertices` exactly once.
    pub fn from_classes(vertices: usize, classes: &[Vec<usize>]) -> Result<Folding> {
        let mut labels = vec![usize::MAX; vertices];
        for (k, c) in classes.iter().enumerate() {
            for &v in c {
                if v >= vertices {
                    return input(format!("vertex {v} out of range"));
                }
                if labels[v] != usize::MAX {
                    return input(format!("vertex {v} appears in two classes"));
                }
                labels[v] = k;
            }
        }
        if let Some(v) = labels.iter().position(|l| *l == usize::MAX) {
            return input(format!("vertex {v} is in no class"));
        }
        Ok(Folding::from_labels(&labels))
    }

    pub fn vertex_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.class_of
    }

    pub fn num_classes(&self) -> usize {
        self.class_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (v, c) in self.class_of.iter().enumerate() {
            out[*c].push(v);
        }
        out
    }
}

impl Serialize for Folding {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.classes().serialize(s)
    }
}

impl std::fmt::Display for Folding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .classes()
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

/// A quotient graph with the vertex map and the image of each source edge.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: BiGraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

pub fn quotient(g: &BiGraph, f: &Folding) -> Result<Quotient> {
    if f.vertex_count() != g.vertex_count() {
        return input(format!("folding has {} vertices, graph has {}", f.vertex_count(), g.vertex_count()));
    }
    let k = f.num_classes();
    let mut parity = vec![u8::MAX; k];
    for v in 0..g.vertex_count() {
        let c = f.class_of(v);
        if parity[c] == u8::MAX {
            parity[c] = g.parity(v);
        } else if parity[c] != g.parity(v) {
            return Err(KrlError::Folding(format!("class of vertex {v} mixes parities")));
        }
    }
    let mut images = Vec::with_capacity(g.edge_count());
    for &(u, v) in g.edges() {
        let (a, b) = (f.class_of(u), f.class_of(v));
        if a == b {
            return Err(KrlError::Folding(format!("adjacent vertices {u} and {v} are merged")));
        }
        images.push((a, b));
    }
    let graph = BiGraph::new(parity, images.iter().copied())?;
    let edge_map = images.iter().map(|(a, b)| graph.edge_index(*a, *b).expect("image edge")).collect();
    Ok(Quotient { graph, vertex_map: f.labels().to_vec(), edge_map })
}

/// All tree foldings of `g`, optionally with a fixed number of undirected edges, in RGS order.
pub fn enumerate_tree_foldings(g: &BiGraph, edge_count: Option<usize>) -> Vec<Folding> {
    let nv = g.vertex_count();
    let mut out = Vec::new();
    let mut labels = vec![usize::MAX; nv];
    let mut class_parity: Vec<u8> = Vec::new();
    fn rec(
        g: &BiGraph,
        v: usize,
        labels: &mut Vec<usize>,
        class_parity: &mut Vec<u8>,
        edge_count: Option<usize>,
        out: &mut Vec<Folding>,
    ) {
        if v == g.vertex_count() {
            let f = Folding { class_of: labels.clone() };
            if let Ok(q) = quotient(g, &f) {
                if q.graph.is_tree() && edge_count.map_or(true, |e| e == q.graph.edge_count()) {
                    out.push(f);
                }
            }
            return;
        }
        // a tree on k classes has k-1 edges
        if let Some(e) = edge_count {
            if class_parity.len() > e + 1 {
                return;
            }
        }
        let k = class_parity.len();
        for c in 0..=k {
            if c < k {
                if class_parity[c] != g.parity(v) {
                    continue;
                }
                if g.neighbors(v).iter().any(|&w| w < v && labels[w] == c) {
                    continue;
                }
            } else {
                class_parity.push(g.parity(v));
            }
            labels[v] = c;
            rec(g, v + 1, labels, class_parity, edge_count, out);
            if c == k {
                class_parity.pop();
            }
        }
        labels[v] = usize::MAX;
    }
    rec(g, 0, &mut labels, &mut class_parity, edge_count, &mut out);
    out
}

/// `p_τ` on `C(n)`: the smallest equivalence with `i ~ τ(i) - 1`, indices mod `2n`.
pub fn ncm_to_folding(tau: &Matching) -> Folding {
    let m = tau.size();
    let mut parent: Vec<usize> = (0..m).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 1..=m {
        let a = root(&mut parent, i % m);
        let b = root(&mut parent, tau.get(i) - 1);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let labels: Vec<usize> = (0..m).map(|v| root(&mut parent, v)).collect();
    Folding::from_labels(&labels)
}

/// Inverse of [`ncm_to_folding`]: pairs the two edges of `C(n)` with the same image.
pub fn folding_to_ncm(f: &Folding) -> Result<Matching> {
    let m = f.vertex_count();
    if m < 2 || m % 2 == 1 {
        return input(format!("a folding of C(n) needs an even vertex count, got {m}"));
    }
    let c = super::make_standard(super::StandardKind::C, m / 2)?;
    let q = quotient(&c, f)?;
    if !q.graph.is_tree() {
        return input("quotient is not a tree");
    }
    let mut pre: Vec<Vec<usize>> = vec![Vec::new(); q.graph.edge_count()];
    for i in 1..=m {
        let e = q.graph.edge_index(f.class_of(i - 1), f.class_of(i % m)).expect("image edge");
        pre[e].push(i);
    }
    let mut tau = vec![0; m];
    for p in &pre {
        if p.len() != 2 {
            return input(format!("a tree edge has {} preimages", p.len()));
        }
        tau[p[0] - 1] = p[1];
        tau[p[1] - 1] = p[0];
    }
    Matching::new(tau)
}

/// Tree foldings of `C(n)` with `n` edges, generated from non-crossing matchings.
pub fn tree_foldings_of_cycle(n: usize) -> Vec<Folding> {
    let mut v: Vec<Folding> = enumerate_ncm(n).iter().map(ncm_to_folding).collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::catalan;
    use crate::graphs::{make_standard, StandardKind};

    fn c(n: usize) -> BiGraph {
        make_standard(StandardKind::C, n).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let f = Folding::from_classes(4, &[vec![0, 2], vec![1], vec![3]]).unwrap();
        let q = quotient(&c(2), &f).unwrap();
        assert_eq!(q.graph.edge_count(), 2);
        assert!(q.graph.is_tree());
        let id = quotient(&c(2), &Folding::identity(4)).unwrap();
        assert!(id.graph.is_isomorphic(&c(2)));
        let bad = Folding::from_classes(4, &[vec![0, 1], vec![2], vec![3]]).unwrap();
        assert!(matches!(quotient(&c(2), &bad), Err(KrlError::Folding(_))));
    }

    #[test]
    fn figure_example() {
        let tau = Matching::from_pairs(8, &[(1, 2), (3, 8), (4, 5), (6, 7)]).unwrap();
        let f = ncm_to_folding(&tau);
        let q = quotient(&c(4), &f).unwrap();
        assert_eq!((q.graph.vertex_count(), q.graph.edge_count()), (5, 4));
        assert!(q.graph.is_tree());
        assert_eq!(folding_to_ncm(&f).unwrap(), tau);
    }

    #[test]
    fn c1_foldings() {
        let t = Matching::new(vec![2, 1]).unwrap();
        assert_eq!(ncm_to_folding(&t), Folding::identity(2));
        let all = enumerate_tree_foldings(&c(1), None);
        assert_eq!(all, vec![Folding::identity(2)]);
        assert!(quotient(&c(1), &all[0]).unwrap().graph.is_isomorphic(&make_standard(StandardKind::B, 0).unwrap()));
    }

    #[test]
    fn bijection_small() {
        for n in 1..=5 {
            let brute = enumerate_tree_foldings(&c(n), Some(n));
            assert_eq!(brute.len() as u64, catalan(n));
            assert_eq!(brute, tree_foldings_of_cycle(n));
            for tau in enumerate_ncm(n) {
                let f = ncm_to_folding(&tau);
                assert!(quotient(&c(n), &f).unwrap().graph.is_tree());
                assert_eq!(folding_to_ncm(&f).unwrap(), tau);
            }
        }
    }

    #[test]
    fn four_preimages_rejected() {
        // C(4) folded onto a single edge: every class is a parity class
        let f = Folding::from_labels(&[0, 1, 0, 1, 0, 1, 0, 1]);
        assert!(folding_to_ncm(&f).is_err());
        let q = quotient(&c(4), &f).unwrap();
        assert_eq!(q.graph.edge_count(), 1);
    }
}
