use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph_rings::{DegreeGroup, GradedGroupStructure};
use crate::linalg::{smith_of_rows, IntMatrix};

/// Cohomology from chain groups of sizes `sizes[d]` and boundary maps `∂_d : C_d → C_{d-1}`
/// given as rows indexed by `d`-cells (`boundaries[0]` is ignored).
pub fn cohomology_from_boundaries(sizes: &[usize], boundaries: Vec<Vec<Vec<(usize, BigInt)>>>) -> GradedGroupStructure {
    let top = sizes.len();
    let snf: Vec<(usize, Vec<BigInt>)> = boundaries
        .into_par_iter()
        .enumerate()
        .map(|(d, rows)| {
            if d == 0 || rows.is_empty() {
                return (0, Vec::new());
            }
            let s = smith_of_rows(sizes[d - 1], rows);
            (s.rank, s.torsion())
        })
        .collect();
    let rank = |d: usize| snf.get(d).map(|s| s.0).unwrap_or(0);
    let degrees = (0..top)
        .map(|k| DegreeGroup {
            rank: sizes[k] - rank(k) - rank(k + 1),
            torsion: snf.get(k).map(|s| s.1.clone()).unwrap_or_default(),
        })
        .collect();
    GradedGroupStructure { degrees }
}

/// An ordered simplicial complex: simplices are strictly increasing vertex lists, closed under faces.
#[derive(Clone, Debug, Serialize)]
pub struct SimplicialComplexZ {
    pub vertex_labels: Vec<String>,
    /// Simplices of each dimension, sorted.
    pub simplices: Vec<Vec<Vec<u32>>>,
}

impl SimplicialComplexZ {
    /// From a set of maximal (or any) simplices; all faces are added.
    pub fn from_simplices(vertex_labels: Vec<String>, simplices: impl IntoIterator<Item = Vec<u32>>) -> SimplicialComplexZ {
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<u32>>> = Vec::new();
        for s in simplices {
            debug_assert!(s.windows(2).all(|w| w[0] < w[1]));
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Default::default());
            }
            by_dim[d].insert(s);
        }
        for d in (1..by_dim.len()).rev() {
            let faces: Vec<Vec<u32>> = by_dim[d]
                .iter()
                .flat_map(|s| (0..s.len()).map(move |i| [&s[..i], &s[i + 1..]].concat()))
                .collect();
            by_dim[d - 1].extend(faces);
        }
        SimplicialComplexZ { vertex_labels, simplices: by_dim.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    /// The order complex of a poset on `0..labels.len()`; `lt(a,b)` must imply `a < b` as integers.
    pub fn order_complex(labels: Vec<String>, lt: impl Fn(usize, usize) -> bool) -> SimplicialComplexZ {
        let n = labels.len();
        let up: Vec<Vec<usize>> = (0..n).map(|a| (a + 1..n).filter(|&b| lt(a, b)).collect()).collect();
        let mut chains: Vec<Vec<u32>> = Vec::new();
        fn grow(up: &[Vec<usize>], chain: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            out.push(chain.clone());
            let last = *chain.last().unwrap() as usize;
            for &b in &up[last] {
                chain.push(b as u32);
                grow(up, chain, out);
                chain.pop();
            }
        }
        for a in 0..n {
            grow(&up, &mut vec![a as u32], &mut chains);
        }
        SimplicialComplexZ::from_simplices(labels, chains)
    }

    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(|s| s.len()).collect()
    }

    pub fn size(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, c)| if d % 2 == 0 { *c as i64 } else { -(*c as i64) }).sum()
    }

    /// Rows of `∂_d`, one per `d`-simplex.
    pub fn boundary_rows(&self, d: usize) -> Vec<Vec<(usize, BigInt)>> {
        if d == 0 || d >= self.simplices.len() {
            return Vec::new();
        }
        let index: HashMap<&[u32], usize> =
            self.simplices[d - 1].iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        self.simplices[d]
            .par_iter()
            .map(|s| {
                let mut row: Vec<(usize, BigInt)> = (0..s.len())
                    .map(|i| {
                        let face = [&s[..i], &s[i + 1..]].concat();
                        (index[face.as_slice()], BigInt::from(if i % 2 == 0 { 1 } else { -1 }))
                    })
                    .collect();
                row.sort_by_key(|e| e.0);
                row
            })
            .collect()
    }

    /// `∂_{d-1} ∘ ∂_d = 0` for every `d`, equivalently `δ∘δ = 0`.
    pub fn boundary_squared_zero(&self) -> bool {
        (2..self.simplices.len()).all(|d| {
            let mut a = IntMatrix::<BigInt>::new(self.simplices[d - 1].len());
            for r in self.boundary_rows(d) {
                a.push_row(r);
            }
            let mut b = IntMatrix::<BigInt>::new(self.simplices[d - 2].len());
            for r in self.boundary_rows(d - 1) {
                b.push_row(r);
            }
            a.product(&b).is_zero()
        })
    }

    /// Integral simplicial cohomology in degrees `0..=dim`.
    pub fn integral_cohomology(&self) -> GradedGroupStructure {
        let sizes = self.f_vector();
        let boundaries = (0..sizes.len()).map(|d| self.boundary_rows(d)).collect();
        cohomology_from_boundaries(&sizes, boundaries)
    }

    /// One simplex per line, vertices by label, separated by spaces.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for dim in &self.simplices {
            for s in dim {
                let names: Vec<&str> = s.iter().map(|v| self.vertex_labels[*v as usize].as_str()).collect();
                out.push_str(&names.join(" "));
                out.push('\n');
            }
        }
        out
    }
}
