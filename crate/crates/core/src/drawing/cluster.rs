use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::{choose2, normalize_cycle, zee, CombinatorialDrawing, Violation};
use crate::graph::VertexCover;

/// Outside vertices sharing their neighbourhood in `X` and the clockwise
/// order of those neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub members: Vec<usize>,
    /// Bitmask over cover indices.
    pub neighborhood: u64,
    /// Clockwise neighbour order, started at the least vertex.
    pub order: Vec<usize>,
    pub degree: usize,
}

impl Cluster {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPartition {
    clusters: Vec<Cluster>,
    cluster_of: Vec<Option<usize>>,
}

impl ClusterPartition {
    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn cluster_of(&self, v: usize) -> Option<usize> {
        self.cluster_of[v]
    }

    fn edge_clusters(&self, d: &CombinatorialDrawing, e: usize) -> [Option<usize>; 2] {
        let (u, v) = d.graph().edges()[e];
        [self.cluster_of[u], self.cluster_of[v]]
    }

    /// Is the crossing between `e` and `f` a cluster crossing?
    pub fn is_cluster_crossing(&self, d: &CombinatorialDrawing, e: usize, f: usize) -> bool {
        let a = self.edge_clusters(d, e);
        let b = self.edge_clusters(d, f);
        a.iter().flatten().any(|c| b.contains(&Some(*c)))
    }

    /// Per cluster: crossings between two edges that both end in it.
    pub fn cluster_crossings(&self, d: &CombinatorialDrawing) -> Vec<BigUint> {
        let mut out = vec![BigUint::ZERO; self.clusters.len()];
        for x in d.crossings() {
            let a = self.edge_clusters(d, x.edges[0]);
            let b = self.edge_clusters(d, x.edges[1]);
            let mut hit: Vec<usize> = a.iter().flatten().filter(|c| b.contains(&Some(**c))).copied().collect();
            hit.dedup();
            for c in hit {
                out[c] += BigUint::from(d.weight(x.edges[0])) * BigUint::from(d.weight(x.edges[1]));
            }
        }
        out
    }
}

pub fn clusters(d: &CombinatorialDrawing, x: &VertexCover) -> ClusterPartition {
    let g = d.graph();
    let mut by_key: BTreeMap<(u64, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for v in (0..g.n()).filter(|&v| !x.contains(v)) {
        let mask = g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << x.index_of(w).expect("outside vertices only see the cover"));
        let order = normalize_cycle(&d.neighbor_rotation(v));
        by_key.entry((mask, order)).or_default().push(v);
    }
    let mut clusters: Vec<Cluster> = by_key
        .into_iter()
        .map(|((neighborhood, order), members)| Cluster { degree: order.len(), members, neighborhood, order })
        .collect();
    clusters.sort_by_key(|c| c.members[0]);
    let mut cluster_of = vec![None; g.n()];
    for (i, c) in clusters.iter().enumerate() {
        for &m in &c.members {
            cluster_of[m] = Some(i);
        }
    }
    ClusterPartition { clusters, cluster_of }
}

/// Crossings (weighted) whose two edges do not end in a common cluster.
pub fn noncluster_count(d: &CombinatorialDrawing, x: &VertexCover) -> BigUint {
    let part = clusters(d, x);
    d.crossings()
        .iter()
        .filter(|c| !part.is_cluster_crossing(d, c.edges[0], c.edges[1]))
        .map(|c| BigUint::from(d.weight(c.edges[0])) * BigUint::from(d.weight(c.edges[1])))
        .sum()
}

/// A drawing whose outside vertices carry weights; edges take the weight of
/// their outside end (1 for edges inside `X`).
#[derive(Clone, Debug)]
pub struct WeightedClustering {
    drawing: CombinatorialDrawing,
    cover: VertexCover,
    vertex_weight: Vec<u128>,
}

impl WeightedClustering {
    /// `vertex_weight[v]` is ignored for cover vertices. Outside vertices must
    /// lie in pairwise distinct clusters and have positive weight.
    pub fn new(drawing: CombinatorialDrawing, cover: VertexCover, vertex_weight: Vec<u128>) -> Result<Self, Violation> {
        let g = drawing.graph();
        if vertex_weight.len() != g.n() {
            return Err(Violation::Malformed("one weight per vertex expected".into()));
        }
        let part = clusters(&drawing, &cover);
        if let Some(c) = part.clusters().iter().find(|c| c.size() > 1) {
            return Err(Violation::Malformed(format!("vertices {:?} share a topological cluster", c.members)));
        }
        if (0..g.n()).any(|v| !cover.contains(v) && vertex_weight[v] == 0) {
            return Err(Violation::Malformed("outside vertices need positive weight".into()));
        }
        let w = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                if !cover.contains(u) {
                    vertex_weight[u]
                } else if !cover.contains(v) {
                    vertex_weight[v]
                } else {
                    1
                }
            })
            .collect();
        let drawing = drawing.with_weights(w)?;
        Ok(WeightedClustering { drawing, cover, vertex_weight })
    }

    pub fn drawing(&self) -> &CombinatorialDrawing {
        &self.drawing
    }

    pub fn cover(&self) -> &VertexCover {
        &self.cover
    }

    pub fn vertex_weight(&self, v: usize) -> u128 {
        self.vertex_weight[v]
    }

    /// Weighted crossings of the clustering.
    pub fn crossing_count(&self) -> BigUint {
        self.drawing.crossing_count()
    }
}

/// `Σ_t C(c(t), 2)·Z(d(t))` over outside vertices.
pub fn cl_value(wc: &WeightedClustering) -> BigUint {
    let g = wc.drawing.graph();
    (0..g.n())
        .filter(|&v| !wc.cover.contains(v))
        .map(|v| choose2(wc.vertex_weight[v]) * BigUint::from(zee(g.degree(v) as u64)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::super::from_straight_line;
    use super::*;
    use crate::graph::Graph;

    fn build(n: usize, cover: usize, edges: &[(usize, usize)], coords: &[(f64, f64)]) -> (CombinatorialDrawing, VertexCover) {
        let g = Graph::new(n, edges.iter().copied()).unwrap();
        let d = from_straight_line(g.clone(), coords).unwrap();
        assert_eq!(d.validate_good(), Ok(()));
        let x = VertexCover::new(&g, (0..cover).collect()).unwrap();
        (d, x)
    }

    /// Four cover vertices m1..m4 (0..3), five blue (4..8) on the left and
    /// four red (9..12) on the right, each adjacent to all of the cover.
    fn fig1() -> (CombinatorialDrawing, VertexCover) {
        let mut coords = vec![(0.0, 0.0), (0.0, 3.0), (0.5, 0.8), (0.5, 2.2)];
        coords.extend((1..=5).map(|i| (-(i as f64), 1.5)));
        coords.extend((1..=4).map(|i| (i as f64 + 0.0, 1.5)));
        let mut edges = vec![(0, 2), (2, 3), (3, 1), (1, 0)];
        for v in 4..13 {
            edges.extend((0..4).map(|m| (m, v)));
        }
        build(13, 4, &edges, &coords)
    }

    /// Triangle 0,1,2 with three blue (3..5) on all of it, two red (6,7) on
    /// all of it and three yellow (8..10) on {0,2}.
    fn fig2() -> (CombinatorialDrawing, VertexCover) {
        let coords = [
            (0.0, 0.0),
            (1.5, 3.0),
            (3.0, 0.0),
            (1.5, 1.5),
            (-1.0, 2.5),
            (4.0, 2.5),
            (-1.0, -0.6),
            (4.0, -0.6),
            (1.5, -0.7),
            (-1.0, 1.0),
            (4.0, 1.0),
        ];
        let mut edges = vec![(0, 1), (1, 2), (0, 2)];
        for v in 3..8 {
            edges.extend([(0, v), (1, v), (2, v)]);
        }
        for v in 8..11 {
            edges.extend([(0, v), (2, v)]);
        }
        build(11, 3, &edges, &coords)
    }

    #[test]
    fn fig1_has_two_clusters() {
        let (d, x) = fig1();
        let p = clusters(&d, &x);
        let sizes: Vec<usize> = p.clusters().iter().map(Cluster::size).collect();
        assert_eq!(sizes, vec![5, 4]);
        assert_eq!(p.clusters()[0].neighborhood, p.clusters()[1].neighborhood);
        assert_ne!(p.clusters()[0].order, p.clusters()[1].order);
    }

    #[test]
    fn fig2_has_three_clusters() {
        let (d, x) = fig2();
        let p = clusters(&d, &x);
        let sizes: Vec<usize> = p.clusters().iter().map(Cluster::size).collect();
        assert_eq!(sizes, vec![3, 2, 3]);
    }

    #[test]
    fn low_degree_vertices_share_a_cluster() {
        // path-like: cover {0,1}, outside 2,3,4 all adjacent to both
        let g = Graph::complete_bipartite(2, 3);
        let d = from_straight_line(g.clone(), &[(0.0, 3.0), (0.0, -3.0), (-2.0, 0.0), (0.5, 0.0), (2.0, 0.0)]).unwrap();
        let p = clusters(&d, &VertexCover::new(&g, vec![0, 1]).unwrap());
        assert_eq!(p.clusters().len(), 1);
        assert_eq!(p.clusters()[0].size(), 3);
    }

    #[test]
    fn cl_of_fig2_clustering() {
        // triangle plus blue(3) inside, red(2) bottom-left, yellow(3) right
        let coords = [(0.0, 0.0), (1.5, 3.0), (3.0, 0.0), (1.5, 1.5), (-1.0, -0.6), (4.0, 1.0)];
        let edges = [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4), (0, 5), (2, 5)];
        let (d, x) = build(6, 3, &edges, &coords);
        let wc = WeightedClustering::new(d, x, vec![0, 0, 0, 3, 2, 3]).unwrap();
        assert_eq!(cl_value(&wc), BigUint::from(4u32));
    }

    #[test]
    fn cl_trivial_cases() {
        let g = Graph::complete_bipartite(3, 1);
        let d = from_straight_line(g.clone(), &[(0.0, 0.0), (2.0, 0.0), (1.0, 2.0), (1.0, 0.7)]).unwrap();
        let x = VertexCover::new(&g, vec![0, 1, 2]).unwrap();
        let one = WeightedClustering::new(d.clone(), x.clone(), vec![0, 0, 0, 1]).unwrap();
        assert_eq!(cl_value(&one), BigUint::ZERO);
        let n = 1_000_000u128;
        let big = WeightedClustering::new(d, x, vec![0, 0, 0, n]).unwrap();
        assert_eq!(cl_value(&big), BigUint::from(n * (n - 1) / 2));
    }

    #[test]
    fn noncluster_counting() {
        // two cover edges crossing: counted
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let d = from_straight_line(g.clone(), &[(0.0, 0.0), (2.0, 2.0), (0.0, 2.0), (2.0, 0.0)]).unwrap();
        let x = VertexCover::new(&g, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(noncluster_count(&d, &x), BigUint::from(1u32));

        // two same-rotation stars on leaves 0,1,2 crossing once: a cluster crossing
        let g = Graph::complete_bipartite(3, 2);
        let coords = [(-3.0, 0.0), (0.0, -3.0), (3.0, 0.0), (0.0, 1.0), (0.3, 2.0)];
        let d = from_straight_line(g.clone(), &coords).unwrap();
        assert_eq!(d.validate_good(), Ok(()));
        let x = VertexCover::new(&g, vec![0, 1, 2]).unwrap();
        let p = clusters(&d, &x);
        assert_eq!(p.clusters().len(), 1);
        assert_eq!(d.crossings().len(), 1);
        assert_eq!(noncluster_count(&d, &x), BigUint::ZERO);
        assert_eq!(p.cluster_crossings(&d), vec![BigUint::from(1u32)]);

        let (d, x) = fig1();
        let total = d.crossing_count();
        let p = clusters(&d, &x);
        let within: BigUint = p.cluster_crossings(&d).into_iter().sum();
        assert!(noncluster_count(&d, &x) + within >= total);
    }
}
