//! Bipartite graphs with parity, foldings and hedgehogs.

mod folding;
mod hedgehog;

pub use folding::{
    enumerate_tree_foldings, folding_to_ncm, ncm_to_folding, quotient, tree_foldings_of_cycle, Folding, Quotient,
};
pub use hedgehog::{hedgehog_analyze, Hedgehog};

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{input, KrlError, Result};

/// Connected bipartite graph with a parity map; undirected edges are stored once as `(min, max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiGraph {
    parity: Vec<u8>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl BiGraph {
    /// Edges keep their first-occurrence order; repeated or reversed duplicates collapse.
    pub fn new(parity: Vec<u8>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<BiGraph> {
        let g = BiGraph::pregraph(parity, edges)?;
        if !g.is_connected() {
            return input("graph is not connected");
        }
        Ok(g)
    }

    /// Like [`BiGraph::new`] without the connectivity requirement.
    pub fn pregraph(parity: Vec<u8>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<BiGraph> {
        let nv = parity.len();
        if nv == 0 {
            return input("graph has no vertices");
        }
        if let Some(p) = parity.iter().find(|p| **p > 1) {
            return input(format!("parity {p} is not 0 or 1"));
        }
        let mut g = BiGraph { parity, edges: Vec::new(), adj: vec![Vec::new(); nv], index: HashMap::new() };
        for (u, v) in edges {
            if u >= nv || v >= nv {
                return input(format!("edge ({u},{v}) uses an unknown vertex"));
            }
            if u == v {
                return input(format!("loop at vertex {u}"));
            }
            if g.parity[u] == g.parity[v] {
                return input(format!("edge ({u},{v}) joins vertices of equal parity"));
            }
            let key = (u.min(v), u.max(v));
            if g.index.contains_key(&key) {
                continue;
            }
            g.index.insert(key, g.edges.len());
            g.edges.push(key);
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.parity.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn directed_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn parity(&self, v: usize) -> u8 {
        self.parity[v]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parity
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    /// Edge `e` oriented from its even end to its odd end.
    pub fn positive(&self, e: usize) -> (usize, usize) {
        let (a, b) = self.edges[e];
        if self.parity[a] == 0 {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// The generator attached to the directed edge `(u,v)`: its positive edge and the sign
    /// `+1` when `u` is even, `-1` otherwise.
    pub fn signed_var(&self, u: usize, v: usize) -> Option<(i8, usize)> {
        let e = self.edge_index(u, v)?;
        Some((if self.parity[u] == 0 { 1 } else { -1 }, e))
    }

    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut d = vec![None; self.vertex_count()];
        d[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &self.adj[u] {
                if d[v].is_none() {
                    d[v] = Some(d[u].unwrap() + 1);
                    q.push_back(v);
                }
            }
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(|d| d.is_some())
    }

    /// Edge count equals vertex count minus one (for a connected graph).
    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.vertex_count()
    }

    /// Connected, and removing any single edge disconnects it.
    pub fn is_tree_by_deletion(&self) -> bool {
        if !self.is_connected() {
            return false;
        }
        (0..self.edges.len()).all(|skip| {
            let rest = self.edges.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, e)| *e);
            let h = BiGraph::pregraph(self.parity.clone(), rest).expect("subgraph of a valid graph");
            !h.is_connected()
        })
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.parity.iter().enumerate().map(|(id, p)| VertexJson { id: id as i64, parity: *p }).collect(),
            edges: self.edges.iter().map(|(u, v)| [*u as i64, *v as i64]).collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<BiGraph> {
        let mut ids = HashMap::new();
        for (k, v) in j.vertices.iter().enumerate() {
            if ids.insert(v.id, k).is_some() {
                return input(format!("duplicate vertex id {}", v.id));
            }
        }
        let parity = j.vertices.iter().map(|v| v.parity).collect();
        let mut edges = Vec::new();
        for [a, b] in &j.edges {
            let (Some(u), Some(v)) = (ids.get(a), ids.get(b)) else {
                return input(format!("edge [{a},{b}] uses an unknown vertex id"));
            };
            edges.push((*u, *v));
        }
        BiGraph::new(parity, edges)
    }

    pub fn parse_json(text: &str) -> Result<BiGraph> {
        let j: GraphJson = serde_json::from_str(text).map_err(|e| KrlError::Input(format!("malformed graph JSON: {e}")))?;
        BiGraph::from_json(&j)
    }

    /// Parity- and adjacency-preserving bijection search, for small graphs.
    pub fn is_isomorphic(&self, other: &BiGraph) -> bool {
        let n = self.vertex_count();
        if n != other.vertex_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        let sig = |g: &BiGraph| {
            let mut s: Vec<(u8, usize)> = (0..g.vertex_count()).map(|v| (g.parity[v], g.degree(v))).collect();
            s.sort_unstable();
            s
        };
        if sig(self) != sig(other) {
            return false;
        }
        // BFS order from vertex 0 keeps each new vertex adjacent to an earlier one
        let order: Vec<usize> = {
            let d = self.distances_from(0);
            let mut o: Vec<usize> = (0..n).collect();
            o.sort_by_key(|&v| (d[v], v));
            o
        };
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn rec(a: &BiGraph, b: &BiGraph, order: &[usize], k: usize, map: &mut [usize], used: &mut [bool]) -> bool {
            if k == order.len() {
                return true;
            }
            let v = order[k];
            for w in 0..b.vertex_count() {
                if used[w] || a.parity[v] != b.parity[w] || a.degree(v) != b.degree(w) {
                    continue;
                }
                let consistent = order[..k].iter().all(|&u| {
                    let au = a.edge_index(u, v).is_some();
                    let bu = b.edge_index(map[u], w).is_some();
                    au == bu
                });
                if !consistent {
                    continue;
                }
                map[v] = w;
                used[w] = true;
                if rec(a, b, order, k + 1, map, used) {
                    return true;
                }
                used[w] = false;
            }
            false
        }
        rec(self, other, &order, 0, &mut map, &mut used)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: i64,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[i64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    /// The cycle `C(n)` on `Z/2n`.
    C,
    /// The path `L(n)` on `0,…,2n`.
    L,
    /// The single edge.
    B,
}

/// `C(n)`, `L(n)` or `B`, with edge `e_i = (i-1, i)` stored at index `i-1`.
pub fn make_standard(kind: StandardKind, n: usize) -> Result<BiGraph> {
    match kind {
        StandardKind::C => {
            if n == 0 {
                return input("C(n) needs n ≥ 1");
            }
            let m = 2 * n;
            BiGraph::new((0..m).map(|i| (i % 2) as u8).collect(), (1..=m).map(|i| (i - 1, i % m)))
        }
        StandardKind::L => BiGraph::new((0..=2 * n).map(|i| (i % 2) as u8).collect(), (1..=2 * n).map(|i| (i - 1, i))),
        StandardKind::B => BiGraph::new(vec![0, 1], [(0, 1)]),
    }
}
