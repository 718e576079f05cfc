//! Purely combinatorial good drawings.
//!
//! A drawing is the underlying graph plus, for every edge, the ordered list of
//! crossings met when walking it from its lower endpoint to its higher one,
//! and a clockwise rotation of edges at every vertex. Each crossing also
//! records on which side the second edge enters, which fixes the rotation at
//! the degree-4 dummy vertex of the planarization (the two edges always
//! alternate there).

mod cluster;
mod geometry;
mod planar;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use cluster::{cl_value, clusters, noncluster_count, Cluster, ClusterPartition, WeightedClustering};
pub use geometry::from_straight_line;
pub use planar::{Dart, Planarization};

/// `⌊m/2⌋·⌊(m−1)/2⌋`, the least number of crossings between two stars with
/// the same `m` leaves and the same rotation.
pub fn zee(m: u64) -> u64 {
    (m / 2) * (m.saturating_sub(1) / 2)
}

/// `C(c, 2)` for big counts.
pub fn choose2(c: u128) -> BigUint {
    if c < 2 {
        return BigUint::ZERO;
    }
    BigUint::from(c) * BigUint::from(c - 1) / 2u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Crossing {
    pub edges: [usize; 2],
    /// Whether `edges[1]` passes from the left of `edges[0]` to its right,
    /// both edges walked from lower to higher endpoint.
    pub left_to_right: bool,
}

impl Crossing {
    /// The partner of `e` and whether it crosses `e` from left to right.
    pub fn seen_from(&self, e: usize) -> (usize, bool) {
        if self.edges[0] == e {
            (self.edges[1], self.left_to_right)
        } else {
            (self.edges[0], !self.left_to_right)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Malformed(String),
    AdjacentCrossing { crossing: usize, edges: [usize; 2] },
    DoubleCrossing { edges: [usize; 2] },
    Unrealizable,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Malformed(msg) => write!(f, "malformed drawing: {msg}"),
            Violation::AdjacentCrossing { crossing, edges } => {
                write!(f, "adjacent crossing: crossing {crossing} is on edges {} and {} which share an end", edges[0], edges[1])
            }
            Violation::DoubleCrossing { edges } => write!(f, "double crossing: edges {} and {} cross more than once", edges[0], edges[1]),
            Violation::Unrealizable => write!(f, "unrealizable rotation/crossing structure"),
        }
    }
}

impl std::error::Error for Violation {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialDrawing {
    graph: Graph,
    edge_crossings: Vec<Vec<usize>>,
    crossings: Vec<Crossing>,
    rotation: Vec<Vec<usize>>,
    weights: Option<Vec<u128>>,
}

impl CombinatorialDrawing {
    /// Checks well-formedness only (ids in range, every crossing on exactly
    /// its two edges, rotations are permutations of incident edges). Use
    /// [`validate_good`](Self::validate_good) for the drawing rules.
    pub fn new(
        graph: Graph,
        edge_crossings: Vec<Vec<usize>>,
        crossings: Vec<Crossing>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<Self, Violation> {
        let bad = |s: String| Err(Violation::Malformed(s));
        if edge_crossings.len() != graph.m() {
            return bad(format!("{} crossing lists for {} edges", edge_crossings.len(), graph.m()));
        }
        if rotation.len() != graph.n() {
            return bad(format!("{} rotations for {} vertices", rotation.len(), graph.n()));
        }
        let mut seen = vec![0u8; crossings.len()];
        for (e, list) in edge_crossings.iter().enumerate() {
            for &c in list {
                let Some(x) = crossings.get(c) else {
                    return bad(format!("edge {e} lists unknown crossing {c}"));
                };
                if !x.edges.contains(&e) {
                    return bad(format!("edge {e} lists crossing {c} which is not on it"));
                }
                seen[c] += 1;
            }
        }
        for (c, x) in crossings.iter().enumerate() {
            if x.edges[0] == x.edges[1] || x.edges.iter().any(|&e| e >= graph.m()) {
                return bad(format!("crossing {c} does not join two distinct edges"));
            }
            if seen[c] != 2 {
                return bad(format!("crossing {c} appears {} times on edges", seen[c]));
            }
        }
        for (v, rot) in rotation.iter().enumerate() {
            let mut have: Vec<usize> = rot.clone();
            have.sort_unstable();
            let mut want: Vec<usize> = graph.neighbors(v).iter().map(|&w| graph.edge_index(v, w).unwrap()).collect();
            want.sort_unstable();
            if have != want {
                return bad(format!("rotation at vertex {v} is not a permutation of its edges"));
            }
        }
        Ok(CombinatorialDrawing { graph, edge_crossings, crossings, rotation, weights: None })
    }

    /// Crossing-free drawing with the given rotations.
    pub fn plane(graph: Graph, rotation: Vec<Vec<usize>>) -> Result<Self, Violation> {
        let m = graph.m();
        Self::new(graph, vec![Vec::new(); m], Vec::new(), rotation)
    }

    pub fn with_weights(mut self, weights: Vec<u128>) -> Result<Self, Violation> {
        if weights.len() != self.graph.m() {
            return Err(Violation::Malformed(format!("{} weights for {} edges", weights.len(), self.graph.m())));
        }
        if weights.contains(&0) {
            return Err(Violation::Malformed("edge weights must be positive".into()));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn edge_crossings(&self, e: usize) -> &[usize] {
        &self.edge_crossings[e]
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn weights(&self) -> Option<&[u128]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, e: usize) -> u128 {
        self.weights.as_ref().map_or(1, |w| w[e])
    }

    /// Clockwise order of neighbours of `v`.
    pub fn neighbor_rotation(&self, v: usize) -> Vec<usize> {
        self.rotation[v]
            .iter()
            .map(|&e| {
                let (a, b) = self.graph.edges()[e];
                if a == v { b } else { a }
            })
            .collect()
    }

    pub fn crossing_number_unweighted(&self) -> usize {
        self.crossings.len()
    }

    /// Good-drawing rules plus realizability; reports the first violation.
    pub fn validate_good(&self) -> Result<(), Violation> {
        let edges = self.graph.edges();
        let mut pairs = BTreeMap::new();
        for (c, x) in self.crossings.iter().enumerate() {
            let (a, b) = (edges[x.edges[0]], edges[x.edges[1]]);
            if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                return Err(Violation::AdjacentCrossing { crossing: c, edges: x.edges });
            }
            let key = (x.edges[0].min(x.edges[1]), x.edges[0].max(x.edges[1]));
            if pairs.insert(key, c).is_some() {
                return Err(Violation::DoubleCrossing { edges: [key.0, key.1] });
            }
        }
        self.planarize().map(|_| ())
    }

    /// Σ over crossings of `w(e)·w(f)`.
    pub fn crossing_count(&self) -> BigUint {
        match &self.weights {
            None => BigUint::from(self.crossings.len()),
            Some(w) => self
                .crossings
                .iter()
                .map(|x| BigUint::from(w[x.edges[0]]) * BigUint::from(w[x.edges[1]]))
                .sum(),
        }
    }

    pub fn planarize(&self) -> Result<Planarization, Violation> {
        Planarization::build(self)
    }

    /// Identity of the drawing up to renaming of crossing ids: crossing pairs,
    /// their order along each edge, crossing sides and rotations (each cyclic
    /// list started at its least element). Mirror images get different keys.
    pub fn canonical_key(&self) -> DrawingKey {
        let pair = |c: usize| {
            let x = &self.crossings[c];
            let (lo, hi) = (x.edges[0].min(x.edges[1]), x.edges[0].max(x.edges[1]));
            let (_, side) = x.seen_from(lo);
            (lo, hi, side)
        };
        let sequences = self.edge_crossings.iter().map(|list| list.iter().map(|&c| pair(c)).collect()).collect();
        let rotations = self.rotation.iter().map(|r| normalize_cycle(r)).collect();
        DrawingKey { edges: self.graph.edges().to_vec(), sequences, rotations }
    }

    /// Same crossing pairs, same order along each edge and the same faces.
    pub fn equivalent(&self, other: &CombinatorialDrawing) -> bool {
        self.graph.edges() == other.graph.edges() && self.graph.n() == other.graph.n() && self.canonical_key() == other.canonical_key()
    }

    /// Subdrawing induced by `keep` (vertices re-indexed in the given order).
    pub fn induced(&self, keep: &[usize]) -> CombinatorialDrawing {
        let sub = self.graph.induced(keep);
        let mut pos = vec![usize::MAX; self.graph.n()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let old_edges = self.graph.edges();
        let edge_map: Vec<Option<usize>> = old_edges
            .iter()
            .map(|&(u, v)| {
                (pos[u] != usize::MAX && pos[v] != usize::MAX).then(|| sub.edge_index(pos[u], pos[v]).unwrap())
            })
            .collect();
        // endpoint order may flip under re-indexing; lists and sides follow
        let flipped: Vec<bool> = old_edges.iter().map(|&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX && pos[u] > pos[v]).collect();
        let mut cross_map = vec![usize::MAX; self.crossings.len()];
        let mut crossings = Vec::new();
        for (c, x) in self.crossings.iter().enumerate() {
            if let (Some(a), Some(b)) = (edge_map[x.edges[0]], edge_map[x.edges[1]]) {
                cross_map[c] = crossings.len();
                let side = x.left_to_right ^ flipped[x.edges[0]] ^ flipped[x.edges[1]];
                crossings.push(Crossing { edges: [a, b], left_to_right: side });
            }
        }
        let mut edge_crossings = vec![Vec::new(); sub.m()];
        for (e, list) in self.edge_crossings.iter().enumerate() {
            if let Some(ne) = edge_map[e] {
                let mut l: Vec<usize> = list.iter().map(|&c| cross_map[c]).filter(|&c| c != usize::MAX).collect();
                if flipped[e] {
                    l.reverse();
                }
                edge_crossings[ne] = l;
            }
        }
        let rotation = keep
            .iter()
            .map(|&v| self.rotation[v].iter().filter_map(|&e| edge_map[e]).collect())
            .collect();
        let weights = self.weights.as_ref().map(|w| {
            let mut nw = vec![1; sub.m()];
            for (e, m) in edge_map.iter().enumerate() {
                if let Some(ne) = m {
                    nw[*ne] = w[e];
                }
            }
            nw
        });
        CombinatorialDrawing { graph: sub, edge_crossings, crossings, rotation, weights }
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &CombinatorialDrawing) -> CombinatorialDrawing {
        let shift = self.graph.n();
        let edges = self.graph.edges().iter().copied().chain(other.graph.edges().iter().map(|&(u, v)| (u + shift, v + shift)));
        let graph = Graph::new(shift + other.graph.n(), edges).expect("disjoint union of simple graphs");
        let eshift = self.graph.m();
        let cshift = self.crossings.len();
        let crossings = self
            .crossings
            .iter()
            .copied()
            .chain(other.crossings.iter().map(|x| Crossing { edges: [x.edges[0] + eshift, x.edges[1] + eshift], left_to_right: x.left_to_right }))
            .collect();
        let edge_crossings = self
            .edge_crossings
            .iter()
            .cloned()
            .chain(other.edge_crossings.iter().map(|l| l.iter().map(|c| c + cshift).collect()))
            .collect();
        let rotation = self
            .rotation
            .iter()
            .cloned()
            .chain(other.rotation.iter().map(|r| r.iter().map(|e| e + eshift).collect()))
            .collect();
        let weights = match (&self.weights, &other.weights) {
            (None, None) => None,
            (a, b) => Some(
                a.clone()
                    .unwrap_or_else(|| vec![1; self.graph.m()])
                    .into_iter()
                    .chain(b.clone().unwrap_or_else(|| vec![1; other.graph.m()]))
                    .collect(),
            ),
        };
        CombinatorialDrawing { graph, edge_crossings, crossings, rotation, weights }
    }

    pub fn to_json(&self) -> String {
        let file = DrawingFile {
            vertices: self.graph.n(),
            labels: self.graph.labels().map(|l| l.to_vec()),
            edges: self.graph.edges().iter().map(|&(u, v)| [u, v]).collect(),
            crossings: self.crossings.clone(),
            edge_crossings: self.edge_crossings.clone(),
            rotation: self.rotation.clone(),
            weights: self.weights.clone(),
        };
        serde_json::to_string_pretty(&file).expect("drawing serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DrawingFile = serde_json::from_str(text)?;
        let graph = Graph::new(file.vertices, file.edges.iter().map(|e| (e[0], e[1])))?;
        if graph.edges().iter().map(|&(u, v)| [u, v]).ne(file.edges.iter().copied()) {
            return Err(Error::Invalid("edges must be listed sorted with lower endpoint first".into()));
        }
        let graph = match file.labels {
            Some(l) if l.len() == graph.n() => graph.with_labels(l),
            Some(_) => return Err(Error::Invalid("label count does not match vertex count".into())),
            None => graph,
        };
        let d = CombinatorialDrawing::new(graph, file.edge_crossings, file.crossings, file.rotation).map_err(Error::InvalidDrawing)?;
        match file.weights {
            Some(w) => d.with_weights(w).map_err(Error::InvalidDrawing),
            None => Ok(d),
        }
    }
}

/// Interchange format; field order is the serialization order.
#[derive(Serialize, Deserialize)]
struct DrawingFile {
    vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<u64>>,
    edges: Vec<[usize; 2]>,
    crossings: Vec<Crossing>,
    edge_crossings: Vec<Vec<usize>>,
    rotation: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<u128>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DrawingKey {
    edges: Vec<(usize, usize)>,
    sequences: Vec<Vec<(usize, usize, bool)>>,
    rotations: Vec<Vec<usize>>,
}

/// Rotates a cyclic list to start at its least element.
pub fn normalize_cycle(c: &[usize]) -> Vec<usize> {
    match c.iter().enumerate().min_by_key(|&(_, v)| v) {
        None => Vec::new(),
        Some((i, _)) => c[i..].iter().chain(&c[..i]).copied().collect(),
    }
}
