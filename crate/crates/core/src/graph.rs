//! Simple undirected graphs, vertex covers and the compressed `(G_X, h)` form.
//!
//! Vertices are dense indices `0..n`. The original ids of an edge-list input
//! are kept in [`Graph::labels`] so they can be written back out.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted, each pair stored as `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph on vertices `0..n`. Rejects loops, repeated pairs and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("edge {u}-{v} has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::NotSimple(format!("self-loop at {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::NotSimple(format!("repeated edge {}-{}", w[0].0, w[0].1)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges: list, adj, labels: None })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    /// `K_{a,b}` with the `a`-side on vertices `0..a`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Graph::new(a + b, edges).expect("complete bipartite graph is simple")
    }

    pub fn with_labels(mut self, labels: Vec<u64>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels.as_ref().map_or(v as u64, |l| l[v])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Connected components, each as a sorted vertex list, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Induced subgraph on `keep` (re-indexed in the given order).
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        let g = Graph::new(keep.len(), edges).expect("induced subgraph of a simple graph");
        match &self.labels {
            Some(l) => g.with_labels(keep.iter().map(|&v| l[v]).collect()),
            None => g,
        }
    }

    /// Graph with edge `e` removed.
    pub fn without_edge(&self, e: usize) -> Graph {
        let edges = self.edges.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, &p)| p);
        let g = Graph::new(self.n, edges).expect("subgraph of a simple graph");
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => g,
        }
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#` starts a
    /// comment. A line holding a single id declares an isolated vertex.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut ids = BTreeSet::new();
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u64>().map_err(|_| Error::Parse {
                        line: i + 1,
                        msg: format!("expected a nonnegative integer, got {t:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            match nums.as_slice() {
                [v] => {
                    ids.insert(*v);
                }
                [u, v] => {
                    if u == v {
                        return Err(Error::Parse { line: i + 1, msg: format!("self-loop at {u}") });
                    }
                    ids.insert(*u);
                    ids.insert(*v);
                    pairs.push((*u, *v, i + 1));
                }
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: "expected `u v`".to_string(),
                    })
                }
            }
        }
        let labels: Vec<u64> = ids.into_iter().collect();
        let index = |x: u64| labels.binary_search(&x).expect("id collected above");
        let mut seen = BTreeSet::new();
        for &(u, v, line) in &pairs {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Parse { line, msg: format!("repeated edge {u} {v}") });
            }
        }
        let g = Graph::new(labels.len(), pairs.iter().map(|&(u, v, _)| (index(u), index(v))))?;
        Ok(g.with_labels(labels))
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let isolated: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) == 0).collect();
        for v in isolated {
            let _ = writeln!(s, "{}", self.label(v));
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{} {}", self.label(u), self.label(v));
        }
        s
    }

    /// Isomorphism-invariant code: equal iff the graphs are isomorphic.
    /// Colour refinement first, then all orderings consistent with the colour
    /// classes; exponential in class sizes, meant for small test graphs.
    pub fn canonical_form(&self) -> Vec<bool> {
        let n = self.n;
        let mut colour: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        loop {
            let sigs: Vec<(usize, Vec<usize>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<usize> = self.adj[v].iter().map(|&w| colour[w]).collect();
                    nb.sort_unstable();
                    (colour[v], nb)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
            let before = colour.iter().collect::<BTreeSet<_>>().len();
            colour = next;
            if distinct.len() == before {
                break;
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            classes.entry(colour[v]).or_default().push(v);
        }
        let mut classes: Vec<Vec<usize>> = classes.into_values().collect();
        let mut best: Option<Vec<bool>> = None;
        loop {
            let order: Vec<usize> = classes.iter().flatten().copied().collect();
            let mut code = Vec::with_capacity(n * n.saturating_sub(1) / 2 + n);
            for c in &classes {
                code.extend(std::iter::repeat_n(true, c.len()));
                code.push(false);
            }
            for i in 0..n {
                for j in i + 1..n {
                    code.push(self.has_edge(order[i], order[j]));
                }
            }
            if best.as_ref().is_none_or(|b| code > *b) {
                best = Some(code);
            }
            // odometer over per-class permutations
            let mut advanced = false;
            for c in classes.iter_mut().rev() {
                if next_permutation(c) {
                    advanced = true;
                    break;
                }
                c.sort_unstable();
            }
            if !advanced {
                break;
            }
        }
        best.unwrap_or_default()
    }
}

/// Lexicographic successor; false when `p` was the last permutation.
pub(crate) fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCover {
    vertices: Vec<usize>,
}

impl VertexCover {
    pub fn new(g: &Graph, mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if let Some(&v) = vertices.iter().find(|&&v| v >= g.n()) {
            return Err(Error::Invalid(format!("cover vertex {v} not in graph")));
        }
        let mut inside = vec![false; g.n()];
        for &v in &vertices {
            inside[v] = true;
        }
        if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| !inside[u] && !inside[v]) {
            return Err(Error::NotACover(u, v));
        }
        Ok(VertexCover { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Position of `v` in the sorted cover.
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Choice {
    Open,
    In,
    Out,
}

/// Is there a cover extending `state` with at most `budget` vertices?
fn cover_exists(g: &Graph, state: &mut Vec<Choice>, budget: usize) -> bool {
    // Neighbours of excluded vertices are forced in.
    let mut forced = Vec::new();
    for v in 0..g.n() {
        if state[v] == Choice::Out {
            for &w in g.neighbors(v) {
                match state[w] {
                    Choice::Out => {
                        for &f in &forced {
                            state[f] = Choice::Open;
                        }
                        return false;
                    }
                    Choice::Open => {
                        state[w] = Choice::In;
                        forced.push(w);
                    }
                    Choice::In => {}
                }
            }
        }
    }
    let used = state.iter().filter(|&&c| c == Choice::In).count();
    let result = if used > budget {
        false
    } else {
        match g.edges().iter().find(|&&(u, v)| state[u] != Choice::In && state[v] != Choice::In) {
            None => true,
            Some(&(u, _)) => {
                state[u] = Choice::In;
                let take = cover_exists(g, state, budget);
                state[u] = Choice::Out;
                let skip = !take && cover_exists(g, state, budget);
                state[u] = Choice::Open;
                take || skip
            }
        }
    };
    for &f in &forced {
        state[f] = Choice::Open;
    }
    result
}

/// Minimum vertex cover of size at most `k_max`, lexicographically least among
/// the minimum ones. Edge branching, `O(2^k)` per feasibility probe.
pub fn find_vertex_cover(g: &Graph, k_max: usize) -> Result<VertexCover> {
    let mut state = vec![Choice::Open; g.n()];
    let k = (0..=k_max.min(g.n()))
        .find(|&k| cover_exists(g, &mut state, k))
        .ok_or(Error::CoverExceeded { k_max })?;
    // Fix the sorted list element by element, smallest feasible choice first.
    let mut chosen = Vec::with_capacity(k);
    let mut next = 0;
    while chosen.len() < k {
        let pick = (next..g.n()).find(|&c| {
            state[c] = Choice::In;
            let ok = cover_exists(g, &mut state, k);
            if !ok {
                state[c] = Choice::Out;
            }
            ok
        });
        debug_assert!(pick.is_some(), "a cover of size {k} exists");
        let Some(c) = pick else { break };
        chosen.push(c);
        next = c + 1;
    }
    for s in state.iter_mut().skip(next) {
        *s = Choice::Out;
    }
    VertexCover::new(g, chosen)
}

/// A graph given by its vertex cover `X` (indexed `0..k`), the graph `G_X`
/// induced on it, and `h(Y)`: how many outside vertices have neighbourhood
/// exactly `Y` (a bitmask over cover indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedGraph {
    k: usize,
    gx: Vec<(usize, usize)>,
    h: BTreeMap<u64, u128>,
}

pub const MAX_COVER: usize = 63;

impl CompressedGraph {
    pub fn new(k: usize, gx: impl IntoIterator<Item = (usize, usize)>, h: impl IntoIterator<Item = (u64, u128)>) -> Result<Self> {
        if k > MAX_COVER {
            return Err(Error::Invalid(format!("cover size {k} exceeds {MAX_COVER}")));
        }
        let g = Graph::new(k, gx)?;
        let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        let mut table = BTreeMap::new();
        for (mask, count) in h {
            if mask & !full != 0 {
                return Err(Error::Invalid(format!("neighbourhood mask {mask:#b} is not a subset of X")));
            }
            if count > 0 {
                *table.entry(mask).or_insert(0u128) += count;
            }
        }
        Ok(CompressedGraph { k, gx: g.edges().to_vec(), h: table })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gx_edges(&self) -> &[(usize, usize)] {
        &self.gx
    }

    pub fn gx(&self) -> Graph {
        Graph::new(self.k, self.gx.iter().copied()).expect("validated at construction")
    }

    pub fn h(&self, mask: u64) -> u128 {
        self.h.get(&mask).copied().unwrap_or(0)
    }

    /// Present neighbourhoods `Y_1..Y_l` (h > 0), ascending by mask.
    pub fn support(&self) -> impl Iterator<Item = (u64, u128)> + '_ {
        self.h.iter().map(|(&m, &c)| (m, c))
    }

    /// Number of vertices of the graph it describes.
    pub fn vertex_count(&self) -> u128 {
        self.k as u128 + self.h.values().sum::<u128>()
    }

    /// Splits into connected pieces; isolated outside vertices (`h(∅)`) and
    /// isolated cover vertices are dropped. Each piece carries the cover
    /// indices it uses, in ascending order.
    pub fn components(&self) -> Vec<(Vec<usize>, CompressedGraph)> {
        let mut parent: Vec<usize> = (0..self.k).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut used = vec![false; self.k];
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra.max(rb)] = ra.min(rb);
            }
        };
        for &(u, v) in &self.gx {
            union(&mut parent, u, v);
            used[u] = true;
            used[v] = true;
        }
        for &mask in self.h.keys() {
            let members = mask_members(mask);
            for w in members.windows(2) {
                union(&mut parent, w[0], w[1]);
            }
            for &m in &members {
                used[m] = true;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.k {
            if used[v] {
                groups.entry(find(&mut parent, v)).or_default().push(v);
            }
        }
        groups
            .into_values()
            .map(|members| {
                let mut pos = vec![usize::MAX; self.k];
                for (i, &v) in members.iter().enumerate() {
                    pos[v] = i;
                }
                let gx = self
                    .gx
                    .iter()
                    .filter(|&&(u, _)| pos[u] != usize::MAX)
                    .map(|&(u, v)| (pos[u], pos[v]));
                let h = self.h.iter().filter(|&(&m, _)| m != 0 && pos[m.trailing_zeros() as usize] != usize::MAX).map(|(&m, &c)| {
                    let sub = mask_members(m).iter().fold(0u64, |acc, &x| acc | 1 << pos[x]);
                    (sub, c)
                });
                let cg = CompressedGraph::new(members.len(), gx, h).expect("restriction of a valid compressed graph");
                (members, cg)
            })
            .collect()
    }

    /// Compressed text format: `k`, then `gx u v` lines, then `h <mask> <count>` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.k);
        for &(u, v) in &self.gx {
            let _ = writeln!(s, "gx {u} {v}");
        }
        for (&m, &c) in &self.h {
            let _ = writeln!(s, "h {m} {c}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut k = None;
        let mut gx = Vec::new();
        let mut h: BTreeMap<u64, u128> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if k.is_none() {
                if toks.len() != 1 {
                    return Err(err("first line must hold the cover size"));
                }
                let kv: usize = toks[0].parse().map_err(|_| err("cover size must be an integer"))?;
                if kv > MAX_COVER {
                    return Err(err("cover size too large"));
                }
                k = Some(kv);
                continue;
            }
            match toks.as_slice() {
                ["gx", u, v] => {
                    let u: usize = u.parse().map_err(|_| err("bad cover index"))?;
                    let v: usize = v.parse().map_err(|_| err("bad cover index"))?;
                    gx.push((u, v));
                }
                ["h", m, c] => {
                    let m: u64 = m.parse().map_err(|_| err("bad bitmask"))?;
                    let c: u128 = c.parse().map_err(|_| err("bad count"))?;
                    if h.insert(m, c).is_some() {
                        return Err(err("neighbourhood listed twice"));
                    }
                }
                _ => return Err(err("expected `gx u v` or `h <mask> <count>`")),
            }
        }
        let k = k.ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
        CompressedGraph::new(k, gx, h)
    }
}

pub fn mask_members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `h(Y)` counts outside vertices by exact neighbourhood; `G_X` is induced on `x`.
pub fn compress(g: &Graph, x: &VertexCover) -> Result<CompressedGraph> {
    if x.k() > MAX_COVER {
        return Err(Error::Invalid(format!("cover size {} exceeds {MAX_COVER}", x.k())));
    }
    if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| !x.contains(u) && !x.contains(v)) {
        return Err(Error::NotACover(u, v));
    }
    let gx = g.induced(x.vertices());
    let mut h: BTreeMap<u64, u128> = BTreeMap::new();
    for v in (0..g.n()).filter(|&v| !x.contains(v)) {
        let mask = g.neighbors(v).iter().fold(0u64, |acc, &w| acc | 1 << x.index_of(w).expect("independent set"));
        *h.entry(mask).or_insert(0) += 1;
    }
    CompressedGraph::new(x.k(), gx.edges().iter().copied(), h)
}

/// Position of each vertex of `g` in `expand(compress(g, x))`: cover
/// vertices by cover index, then the others by (neighbourhood, vertex).
pub fn expansion_order(g: &Graph, x: &VertexCover) -> Vec<usize> {
    let mut pos = vec![0; g.n()];
    for (i, &v) in x.vertices().iter().enumerate() {
        pos[v] = i;
    }
    let mut rest: Vec<(u64, usize)> = (0..g.n())
        .filter(|&v| !x.contains(v))
        .map(|v| (g.neighbors(v).iter().fold(0u64, |acc, &w| acc | 1 << x.index_of(w).unwrap_or(0)), v))
        .collect();
    rest.sort_unstable();
    for (i, &(_, v)) in rest.iter().enumerate() {
        pos[v] = x.k() + i;
    }
    pos
}

/// Concrete graph realizing `cg`: cover vertices `0..k`, then outside vertices
/// grouped by ascending mask. Fails only when the vertex count does not fit
/// in memory-sized integers.
pub fn expand(cg: &CompressedGraph) -> Result<Graph> {
    let total = usize::try_from(cg.vertex_count()).map_err(|_| Error::ResourceCap("graph too large to expand".into()))?;
    let mut edges = cg.gx_edges().to_vec();
    let mut next = cg.k();
    for (mask, count) in cg.support() {
        let members = mask_members(mask);
        for _ in 0..count {
            edges.extend(members.iter().map(|&y| (y, next)));
            next += 1;
        }
    }
    Graph::new(total, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_min_cover(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|s| g.edges().iter().all(|&(u, v)| s >> u & 1 == 1 || s >> v & 1 == 1))
            .map(|s| s.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn expansion_order_relabels_back() {
        let g = Graph::new(7, [(0, 4), (4, 1), (2, 4), (2, 5), (5, 1), (3, 5), (6, 2)]).unwrap();
        let x = find_vertex_cover(&g, 3).unwrap();
        let e = expand(&compress(&g, &x).unwrap()).unwrap();
        let pos = expansion_order(&g, &x);
        assert_eq!(e.induced(&pos), g);
    }

    #[test]
    fn path_cover_is_middle_vertex() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(find_vertex_cover(&g, 3).unwrap().vertices(), &[1]);
    }

    #[test]
    fn k33_cover_is_one_side() {
        let g = Graph::complete_bipartite(3, 3);
        assert_eq!(brute_min_cover(&g), 3);
        assert_eq!(find_vertex_cover(&g, 5).unwrap().vertices(), &[0, 1, 2]);
    }

    #[test]
    fn k5_cover_has_four_vertices() {
        let g = Graph::complete(5);
        assert_eq!(brute_min_cover(&g), 4);
        assert_eq!(find_vertex_cover(&g, 4).unwrap().vertices(), &[0, 1, 2, 3]);
        assert!(matches!(find_vertex_cover(&g, 3), Err(Error::CoverExceeded { k_max: 3 })));
    }

    #[test]
    fn cover_minimality_on_random_graphs() {
        // xorshift keeps this deterministic without a rng dependency
        let mut s = 0x9e3779b97f4a7c15u64;
        for _ in 0..300 {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            let n = 1 + (s % 8) as usize;
            let mut edges = Vec::new();
            let mut bits = s.rotate_left(11);
            for u in 0..n {
                for v in u + 1..n {
                    if bits & 1 == 1 {
                        edges.push((u, v));
                    }
                    bits = bits.rotate_right(1) ^ (bits >> 3);
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let c = find_vertex_cover(&g, n).unwrap();
            assert_eq!(c.k(), brute_min_cover(&g), "graph {:?}", g.edges());
            let lex_least = (0u32..1 << n)
                .filter(|s| s.count_ones() as usize == c.k())
                .filter(|s| g.edges().iter().all(|&(u, v)| s >> u & 1 == 1 || s >> v & 1 == 1))
                .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect::<Vec<_>>())
                .min()
                .unwrap();
            assert_eq!(c.vertices(), lex_least.as_slice());
        }
    }

    fn fig2_graph() -> Graph {
        // triangle 0,1,2; five vertices on all three; three on {0,2}
        let mut edges = vec![(0, 1), (1, 2), (0, 2)];
        for v in 3..8 {
            edges.extend([(0, v), (1, v), (2, v)]);
        }
        for v in 8..11 {
            edges.extend([(0, v), (2, v)]);
        }
        Graph::new(11, edges).unwrap()
    }

    #[test]
    fn compress_fig2() {
        let g = fig2_graph();
        let x = VertexCover::new(&g, vec![0, 1, 2]).unwrap();
        let cg = compress(&g, &x).unwrap();
        assert_eq!(cg.h(0b111), 5);
        assert_eq!(cg.h(0b101), 3);
        assert_eq!(cg.support().count(), 2);
        assert_eq!(cg.gx_edges(), &[(0, 1), (0, 2), (1, 2)]);
        let back = expand(&cg).unwrap();
        assert_eq!(back.n(), 11);
        assert_eq!(back.m(), 24);
        assert_eq!(back.canonical_form(), g.canonical_form());
    }

    #[test]
    fn compress_k3n_and_edgeless() {
        let g = Graph::complete_bipartite(3, 7);
        let x = VertexCover::new(&g, vec![0, 1, 2]).unwrap();
        let cg = compress(&g, &x).unwrap();
        assert!(cg.gx_edges().is_empty());
        assert_eq!(cg.support().collect::<Vec<_>>(), vec![(0b111, 7)]);

        let e = Graph::new(4, []).unwrap();
        let cg = compress(&e, &VertexCover::new(&e, vec![]).unwrap()).unwrap();
        assert_eq!(cg.h(0), 4);
    }

    #[test]
    fn compress_rejects_non_cover() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(VertexCover::new(&g, vec![0]).is_err());
    }

    #[test]
    fn expand_small_cases() {
        let cg = CompressedGraph::new(2, [], [(0b11, 3)]).unwrap();
        let g = expand(&cg).unwrap();
        assert_eq!(g.canonical_form(), Graph::complete_bipartite(2, 3).canonical_form());
        let cg = CompressedGraph::new(3, [(0, 1), (1, 2)], []).unwrap();
        assert_eq!(expand(&cg).unwrap(), cg.gx());
    }

    #[test]
    fn text_formats() {
        let g = Graph::parse_edge_list("# comment\n10 20\n20 30 # trailing\n\n7\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.labels().unwrap(), &[7, 10, 20, 30]);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(matches!(Graph::parse_edge_list("1 2\n2 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(Graph::parse_edge_list("1 2\n2 1\n").is_err());

        let cg = CompressedGraph::parse("3\ngx 0 1\nh 7 1000000\nh 5 2\n").unwrap();
        assert_eq!(cg.h(7), 1_000_000);
        assert_eq!(CompressedGraph::parse(&cg.to_text()).unwrap(), cg);
        assert!(CompressedGraph::parse("2\nh 4 1\n").is_err());
    }

    #[test]
    fn compressed_components() {
        // cover {0,1} joined by h({0,1}); cover {2} alone with a pendant; isolated extras
        let cg = CompressedGraph::new(4, [], [(0b0011, 2), (0b0100, 1), (0, 5)]).unwrap();
        let comps = cg.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].0, vec![0, 1]);
        assert_eq!(comps[0].1.support().collect::<Vec<_>>(), vec![(0b11, 2)]);
        assert_eq!(comps[1].0, vec![2]);
        assert_eq!(comps[1].1.support().collect::<Vec<_>>(), vec![(0b1, 1)]);
    }

    proptest::proptest! {
        #[test]
        fn compress_expand_round_trip(n in 1usize..9, bits in proptest::collection::vec(proptest::bool::ANY, 45)) {
            let mut edges = Vec::new();
            let mut it = bits.iter();
            for u in 0..n {
                for v in u + 1..n {
                    if *it.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let x = find_vertex_cover(&g, n).unwrap();
            let cg = compress(&g, &x).unwrap();
            let back = expand(&cg).unwrap();
            proptest::prop_assert_eq!(back.canonical_form(), g.canonical_form());
            proptest::prop_assert_eq!(compress(&back, &VertexCover::new(&back, (0..x.k()).collect()).unwrap()).unwrap(), cg);
        }
    }
}
