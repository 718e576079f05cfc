use crossnum::clustering::{
    build_iqp, cyclic_order_tag, cyclic_orders, enumerate_clusterings, AbstractClustering, Representative, RepresentativeSet,
};
use crossnum::drawing::clusters;
use crossnum::graph::{compress, find_vertex_cover, mask_members, CompressedGraph, Graph, VertexCover};
use crossnum::lift;
use crossnum::oracle::{oracle_cr, oracle_drawings, OracleConfig};
use crossnum::pipeline::{crossing_number, SolveOptions};
use num_bigint::BigUint;
use proptest::prelude::*;
use rustworkx_core::petgraph::graph::UnGraph;

/// Cover `0..k`, then one vertex per listed neighbourhood.
fn graph_of(k: usize, gx: &[(usize, usize)], masks: &[u64]) -> Graph {
    let mut edges = gx.to_vec();
    for (i, &m) in masks.iter().enumerate() {
        edges.extend(mask_members(m).into_iter().map(|y| (y, k + i)));
    }
    Graph::new(k + masks.len(), edges).unwrap()
}

/// Every clustering read off an oracle drawing (one representative per
/// cluster) shows up in the enumeration.
fn extracted_clusterings_are_enumerated(g: &Graph, k: usize, max_cr: usize) {
    let x = VertexCover::new(g, (0..k).collect()).unwrap();
    let cg = compress(g, &x).unwrap();
    let all = enumerate_clusterings(&cg, max_cr);
    for d in oracle_drawings(g, max_cr) {
        let part = clusters(&d, &x);
        let mut reps: Vec<(Representative, usize)> = part
            .clusters()
            .iter()
            .map(|c| {
                let members = mask_members(c.neighborhood);
                let tag = cyclic_order_tag(&members, &c.order).unwrap();
                let order = cyclic_orders(&members)[tag as usize].clone();
                (Representative { neighborhood: c.neighborhood, tag, order }, c.members[0])
            })
            .collect();
        reps.sort();
        let keep: Vec<usize> = (0..k).chain(reps.iter().map(|&(_, v)| v)).collect();
        let sub = d.induced(&keep);
        let set = RepresentativeSet::new(reps.into_iter().map(|(r, _)| r).collect()).unwrap();
        let c = AbstractClustering::new(&cg, set, sub).unwrap();
        assert!(
            all.iter().any(|e| e.representatives() == c.representatives() && e.drawing().equivalent(c.drawing())),
            "clustering of an oracle drawing is missing from the enumeration"
        );
    }
}

#[test]
fn enumeration_is_complete_on_small_graphs() {
    extracted_clusterings_are_enumerated(&Graph::complete_bipartite(3, 3), 3, 2);
    extracted_clusterings_are_enumerated(&graph_of(3, &[(0, 1)], &[0b111, 0b111, 0b011]), 3, 2);
    extracted_clusterings_are_enumerated(&graph_of(2, &[], &[0b11, 0b11, 0b11, 0b01]), 2, 2);
}

#[test]
fn oracle_zero_exactly_on_planar_graphs() {
    for masks in [vec![0b111u64, 0b111, 0b111], vec![0b111, 0b111, 0b011], vec![0b111, 0b110, 0b011, 0b101]] {
        for gx in [vec![], vec![(0, 1)], vec![(0, 1), (1, 2), (0, 2)]] {
            let g = graph_of(3, &gx, &masks);
            let mut h = UnGraph::<(), ()>::new_undirected();
            let nodes: Vec<_> = (0..g.n()).map(|_| h.add_node(())).collect();
            for &(a, b) in g.edges() {
                h.add_edge(nodes[a], nodes[b], ());
            }
            let planar = rustworkx_core::planar::is_planar(&h);
            assert_eq!(oracle_cr(&g, &OracleConfig::default()).unwrap() == 0, planar);
        }
    }
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (0u32..8, proptest::collection::vec(1u64..8, 1..4)).prop_map(|(gx, masks)| {
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let gx: Vec<(usize, usize)> = (0..3).filter(|i| gx >> i & 1 == 1).map(|i| pairs[i]).collect();
        graph_of(3, &gx, &masks)
    })
}

fn cr(g: &Graph) -> BigUint {
    let cg = compress(g, &find_vertex_cover(g, 6).unwrap()).unwrap();
    crossing_number(&cg, &SolveOptions::default()).unwrap().crossing_number
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn deleting_an_edge_never_adds_crossings(g in small_graph(), pick in any::<prop::sample::Index>()) {
        let e = pick.index(g.m());
        let smaller = g.without_edge(e);
        prop_assert!(cr(&smaller) <= cr(&g));
    }

    #[test]
    fn lift_counts_random_weights(h1 in 1u128..5, h2 in 1u128..4, gx in 0u32..8, seed in any::<u64>()) {
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let gx: Vec<(usize, usize)> = (0..3).filter(|i| gx >> i & 1 == 1).map(|i| pairs[i]).collect();
        let cg = CompressedGraph::new(3, gx, [(0b111, h1), (0b011, h2)]).unwrap();
        let all = enumerate_clusterings(&cg, 1);
        let c = &all[seed as usize % all.len()];
        let inst = build_iqp(c, &cg);
        // spread each target over its group pseudo-randomly
        let mut z = Vec::new();
        let mut s = seed;
        for g in inst.groups() {
            let mut part = vec![0u128; g.size];
            for _ in 0..g.target {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                part[(s >> 33) as usize % g.size] += 1;
            }
            z.extend(part);
        }
        let d = lift(c, &z);
        prop_assert_eq!(d.validate_good(), Ok(()));
        prop_assert_eq!(d.crossing_count(), inst.true_value(&z));
    }
}
