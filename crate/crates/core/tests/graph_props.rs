use krl_core::exterior::ExtElement;
use krl_core::graph_rings::{convolve, cycle_relations, graded_quotient, graded_structure, hedgehog_ring, walk_relations};
use krl_core::graphs::{enumerate_tree_foldings, make_standard, quotient, BiGraph, StandardKind};
use krl_core::Subset;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random connected bipartite graph: a random tree plus extra opposite-parity edges.
fn random_graph(rng: &mut ChaCha8Rng, nv: usize, extra: usize) -> BiGraph {
    let mut parity = vec![0u8];
    let mut edges = Vec::new();
    for v in 1..nv {
        let mut p = rng.gen_range(0..2u8);
        if !parity.contains(&(1 - p)) {
            p = 1 - p;
        }
        let opp: Vec<usize> = (0..v).filter(|&u| parity[u] != p).collect();
        edges.push((opp[rng.gen_range(0..opp.len())], v));
        parity.push(p);
    }
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        if parity[u] != parity[v] {
            edges.push((u, v));
        }
    }
    BiGraph::new(parity, edges).unwrap()
}

/// A random closed walk of the given length starting at `s`.
fn random_walk(rng: &mut ChaCha8Rng, g: &BiGraph, s: usize, len: usize) -> Vec<usize> {
    let mut w = vec![s];
    while w.len() < len {
        let u = *w.last().unwrap();
        let nb = g.neighbors(u);
        w.push(nb[rng.gen_range(0..nb.len())]);
    }
    // return to s along a shortest path
    loop {
        let u = *w.last().unwrap();
        let d = g.distances_from(s);
        if u == s {
            w.pop();
            break;
        }
        let next = *g.neighbors(u).iter().min_by_key(|&&v| d[v]).unwrap();
        w.push(next);
    }
    if w.is_empty() {
        w.push(s);
    }
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn distance_parity(seed in any::<u64>(), nv in 2usize..10, extra in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, nv, extra);
        for u in 0..nv {
            let d = g.distances_from(u);
            for v in 0..nv {
                prop_assert_eq!(d[v].unwrap() % 2, ((g.parity(u) + g.parity(v)) % 2) as usize);
            }
        }
        prop_assert_eq!(g.is_tree(), g.is_tree_by_deletion());
    }

    #[test]
    fn tree_foldings_are_edge_surjective(seed in any::<u64>(), nv in 2usize..7, extra in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, nv, extra);
        for f in enumerate_tree_foldings(&g, None) {
            let q = quotient(&g, &f).unwrap();
            prop_assert!(q.graph.is_tree());
            let mut hit = vec![false; q.graph.edge_count()];
            for e in &q.edge_map {
                hit[*e] = true;
            }
            prop_assert!(hit.iter().all(|h| *h));
            for v in 0..nv {
                prop_assert_eq!(q.graph.parity(q.vertex_map[v]), g.parity(v));
            }
        }
    }

    #[test]
    fn degenerate_walks_add_nothing(seed in any::<u64>(), nv in 4usize..7, extra in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, nv, extra);
        let p = cycle_relations(&g);
        let base = graded_quotient(p.generators, &p.relations, p.generators).unwrap();
        let mut rels = p.relations.clone();
        for _ in 0..3 {
            let s = rng.gen_range(0..nv);
            let len = rng.gen_range(2..10);
            let w = random_walk(&mut rng, &g, s, len);
            if w.len() >= 2 {
                rels.extend(walk_relations(&g, &w).unwrap());
            }
        }
        let more = graded_quotient(p.generators, &rels, p.generators).unwrap();
        prop_assert_eq!(base, more);
    }
}

fn join(a: &BiGraph, b: &BiGraph, u: usize, v: usize) -> Option<BiGraph> {
    let off = a.vertex_count();
    let mut parity = a.parities().to_vec();
    parity.extend_from_slice(b.parities());
    let mut edges: Vec<(usize, usize)> = a.edges().to_vec();
    edges.extend(b.edges().iter().map(|(x, y)| (x + off, y + off)));
    edges.push((u, v + off));
    BiGraph::new(parity, edges).ok()
}

#[test]
fn tensor_over_bridge() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let pieces: Vec<BiGraph> = vec![
        make_standard(StandardKind::C, 2).unwrap(),
        make_standard(StandardKind::B, 0).unwrap(),
        make_standard(StandardKind::L, 1).unwrap(),
        BiGraph::new(vec![0, 1, 0, 1], [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
    ];
    for a in &pieces {
        for b in &pieces {
            if a.vertex_count() + b.vertex_count() > 8 {
                continue;
            }
            for u in 0..a.vertex_count() {
                let v = rng.gen_range(0..b.vertex_count());
                let Some(g) = join(a, b, u, v) else { continue };
                let whole = graded_structure(&g, None).ranks();
                let expect = convolve(&convolve(&graded_structure(a, None).ranks(), &graded_structure(b, None).ranks()), &[1, 1]);
                assert_eq!(whole, expect);
                checked += 1;
            }
        }
    }
    assert!(checked > 10);
}

#[test]
fn leaf_attachment() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let nv = rng.gen_range(2..7);
        let extra = rng.gen_range(0..3);
        let g = random_graph(&mut rng, nv, extra);
        let u = rng.gen_range(0..nv);
        let mut parity = g.parities().to_vec();
        parity.push(1 - g.parity(u));
        let mut edges = g.edges().to_vec();
        edges.push((u, nv));
        let h = BiGraph::new(parity, edges).unwrap();
        let a = graded_structure(&g, None);
        let b = graded_structure(&h, None);
        assert_eq!(b.ranks(), convolve(&a.ranks(), &[1, 1]));
        assert_eq!(a.has_torsion(), b.has_torsion());
    }
}

#[test]
fn hedgehog_rings_agree() {
    for n in 1..=3 {
        for a in Subset::full(2 * n - 1).subsets() {
            let r = hedgehog_ring(n, a).unwrap();
            assert!(r.symbolic_ok, "n={n} A={a}");
            assert!(r.agree, "n={n} A={a}: {:?}", r);
        }
    }
}

#[test]
fn homogeneity_required() {
    let bad = &ExtElement::one(2) + &ExtElement::var(2, 1);
    assert!(graded_quotient(2, &[bad], 2).is_err());
}
