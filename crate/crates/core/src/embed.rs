//! Planar rotation systems under per-vertex constraints, and good drawings
//! with a prescribed set of crossing pairs.

use std::ops::ControlFlow;

use crate::drawing::{CombinatorialDrawing, Crossing};
use crate::graph::{next_permutation, Graph};

/// `2·segment + dir`; `dir = 0` leaves the segment's first endpoint.
type Dart = usize;

struct EmbedProblem {
    n: usize,
    segs: Vec<(usize, usize)>,
    /// Admissible clockwise orders of outgoing darts, `None` if unconstrained.
    allowed: Vec<Option<Vec<Vec<Dart>>>>,
}

impl EmbedProblem {
    fn tail(&self, d: Dart) -> usize {
        let (a, b) = self.segs[d / 2];
        if d.is_multiple_of(2) { a } else { b }
    }

    fn head(&self, d: Dart) -> usize {
        self.tail(d ^ 1)
    }

    /// Insertion order per connected component: every dart leaves a vertex
    /// that is already placed when the dart is inserted.
    fn insertion_order(&self) -> Vec<(usize, Vec<Dart>)> {
        let mut inc = vec![Vec::new(); self.n];
        for (s, &(a, b)) in self.segs.iter().enumerate() {
            inc[a].push(2 * s);
            inc[b].push(2 * s + 1);
        }
        let mut seen = vec![false; self.n];
        let mut added = vec![false; self.segs.len()];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = vec![start];
            let mut order = Vec::new();
            let mut i = 0;
            while i < queue.len() {
                let v = queue[i];
                i += 1;
                for &d in &inc[v] {
                    if added[d / 2] {
                        continue;
                    }
                    added[d / 2] = true;
                    order.push(d);
                    let w = self.head(d);
                    if !seen[w] {
                        seen[w] = true;
                        queue.push(w);
                    }
                }
            }
            out.push((start, order));
        }
        out
    }

    /// Calls `f` once per planar rotation system meeting the constraints.
    fn for_each(&self, f: &mut dyn FnMut(&[Vec<Dart>]) -> ControlFlow<()>) -> ControlFlow<()> {
        let mut s = Search {
            p: self,
            order: self.insertion_order(),
            rot: vec![Vec::new(); self.n],
            present: vec![false; self.n],
            face: vec![usize::MAX; 2 * self.segs.len()],
            f,
        };
        s.run(0, 0)
    }
}

struct Search<'a, 'f> {
    p: &'a EmbedProblem,
    order: Vec<(usize, Vec<Dart>)>,
    rot: Vec<Vec<Dart>>,
    present: Vec<bool>,
    face: Vec<usize>,
    f: &'f mut dyn FnMut(&[Vec<Dart>]) -> ControlFlow<()>,
}

impl Search<'_, '_> {
    fn ok(&self, v: usize) -> bool {
        match &self.p.allowed[v] {
            None => true,
            Some(list) => list.iter().any(|full| restricts_to(full, &self.rot[v])),
        }
    }

    fn label_faces(&mut self) {
        let mut pos = vec![0; self.face.len()];
        for r in &self.rot {
            for (i, &d) in r.iter().enumerate() {
                pos[d] = i;
            }
        }
        self.face.iter_mut().for_each(|x| *x = usize::MAX);
        let mut id = 0;
        for v in 0..self.rot.len() {
            for i in 0..self.rot[v].len() {
                let start = self.rot[v][i];
                if self.face[start] != usize::MAX {
                    continue;
                }
                let mut d = start;
                while self.face[d] == usize::MAX {
                    self.face[d] = id;
                    let r = &self.rot[self.p.head(d)];
                    d = r[(pos[d ^ 1] + 1) % r.len()];
                }
                id += 1;
            }
        }
    }

    fn run(&mut self, c: usize, i: usize) -> ControlFlow<()> {
        if c == self.order.len() {
            return (self.f)(&self.rot);
        }
        if i == 0 {
            self.present[self.order[c].0] = true;
        }
        if i == self.order[c].1.len() {
            return self.run(c + 1, 0);
        }
        let d = self.order[c].1[i];
        let (u, w) = (self.p.tail(d), self.p.head(d));
        if !self.present[w] {
            let l = self.rot[u].len();
            for j in if l == 0 { 0..1 } else { 1..l + 1 } {
                self.rot[u].insert(j, d);
                if self.ok(u) {
                    self.present[w] = true;
                    self.rot[w].push(d ^ 1);
                    let r = if self.ok(w) { self.run(c, i + 1) } else { ControlFlow::Continue(()) };
                    self.rot[w].pop();
                    self.present[w] = false;
                    if r.is_break() {
                        self.rot[u].remove(j);
                        return r;
                    }
                }
                self.rot[u].remove(j);
            }
        } else {
            self.label_faces();
            // corner after position j at a vertex lies on the face of the dart arriving there
            let cu: Vec<usize> = self.rot[u].iter().map(|&x| self.face[x ^ 1]).collect();
            let cw: Vec<usize> = self.rot[w].iter().map(|&x| self.face[x ^ 1]).collect();
            for (j, &fu) in cu.iter().enumerate() {
                for (k, &fw) in cw.iter().enumerate() {
                    if fu != fw {
                        continue;
                    }
                    self.rot[u].insert(j + 1, d);
                    self.rot[w].insert(k + 1, d ^ 1);
                    let r = if self.ok(u) && self.ok(w) { self.run(c, i + 1) } else { ControlFlow::Continue(()) };
                    self.rot[u].remove(j + 1);
                    self.rot[w].remove(k + 1);
                    r?;
                }
            }
        }
        ControlFlow::Continue(())
    }
}

/// Is the cyclic list `partial` the restriction of the cyclic list `full`?
fn restricts_to(full: &[Dart], partial: &[Dart]) -> bool {
    let sub: Vec<Dart> = full.iter().copied().filter(|x| partial.contains(x)).collect();
    if sub.len() != partial.len() {
        return false;
    }
    let Some(s) = sub.iter().position(|&x| x == partial[0]) else {
        return partial.is_empty();
    };
    (0..sub.len()).all(|i| sub[(s + i) % sub.len()] == partial[i])
}

fn is_planar(n: usize, segs: &[(usize, usize)]) -> bool {
    use rustworkx_core::petgraph::graph::UnGraph;
    let mut h = UnGraph::<(), ()>::with_capacity(n, segs.len());
    for _ in 0..n {
        h.add_node(());
    }
    for &(a, b) in segs {
        h.add_edge((a as u32).into(), (b as u32).into(), ());
    }
    rustworkx_core::planar::is_planar(&h)
}

/// Non-adjacent edge pairs `(e, f)`, `e < f`, in lexicographic order.
pub(crate) fn crossable_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let edges = g.edges();
    let mut out = Vec::new();
    for (e, &(a, b)) in edges.iter().enumerate() {
        for (f, &(c, d)) in edges.iter().enumerate().skip(e + 1) {
            if a != c && a != d && b != c && b != d {
                out.push((e, f));
            }
        }
    }
    out
}

/// Calls `f` with every `size`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, size: usize, f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
    if size > n {
        return ControlFlow::Continue(());
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(&idx)?;
        let Some(i) = (0..size).rev().find(|&i| idx[i] != i + n - size) else {
            return ControlFlow::Continue(());
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Good drawings of a graph in which some vertices have a prescribed
/// clockwise neighbour order.
pub(crate) struct DrawingSearch<'a> {
    graph: &'a Graph,
    fixed: Vec<Option<Vec<usize>>>,
}

impl<'a> DrawingSearch<'a> {
    pub(crate) fn new(graph: &'a Graph, fixed: Vec<Option<Vec<usize>>>) -> Self {
        DrawingSearch { graph, fixed }
    }

    /// Every good drawing whose crossing pairs are exactly `pairs`, over all
    /// orders along the edges and all embeddings.
    pub(crate) fn for_each_drawing(
        &self,
        pairs: &[(usize, usize)],
        f: &mut dyn FnMut(CombinatorialDrawing) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let g = self.graph;
        let mut on_edge = vec![Vec::new(); g.m()];
        for (x, &(e, h)) in pairs.iter().enumerate() {
            on_edge[e].push(x);
            on_edge[h].push(x);
        }
        let permuted: Vec<usize> = (0..g.m()).filter(|&e| on_edge[e].len() > 1).collect();
        loop {
            self.embed_orders(pairs, &on_edge, f)?;
            // odometer over the permutations of each multiply crossed edge
            let mut advanced = false;
            for &e in &permuted {
                if next_permutation(&mut on_edge[e]) {
                    advanced = true;
                    break;
                }
                on_edge[e].sort_unstable();
            }
            if !advanced {
                return ControlFlow::Continue(());
            }
        }
    }

    /// Is there a good drawing with exactly these crossing pairs?
    pub(crate) fn witness(&self, pairs: &[(usize, usize)]) -> Option<CombinatorialDrawing> {
        if !self.euler_bound_holds(pairs) {
            return None;
        }
        let mut found = None;
        let _ = self.for_each_drawing(pairs, &mut |d| {
            found = Some(d);
            ControlFlow::Break(())
        });
        found
    }

    /// Euler bound `E ≤ 3V − 6` on the (simple) planarization.
    fn euler_bound_holds(&self, pairs: &[(usize, usize)]) -> bool {
        let v = self.graph.n() + pairs.len();
        let e = self.graph.m() + 2 * pairs.len();
        v < 3 || e <= 3 * v - 6
    }

    fn embed_orders(
        &self,
        pairs: &[(usize, usize)],
        on_edge: &[Vec<usize>],
        f: &mut dyn FnMut(CombinatorialDrawing) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let g = self.graph;
        let n = g.n();
        let c = pairs.len();
        let mut segs = Vec::new();
        let mut seg_edge = Vec::new();
        let mut first = vec![0; g.m()];
        let mut last = vec![0; g.m()];
        // around[x][slot] = (segment into the dummy, segment out of it)
        let mut around = vec![[(0, 0); 2]; c];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let mut prev = u;
            first[e] = segs.len();
            for &x in &on_edge[e] {
                let slot = usize::from(pairs[x].0 != e);
                around[x][slot].0 = segs.len();
                if prev >= n {
                    let px = prev - n;
                    around[px][usize::from(pairs[px].0 != e)].1 = segs.len();
                }
                segs.push((prev, n + x));
                seg_edge.push(e);
                prev = n + x;
            }
            if prev >= n {
                let px = prev - n;
                around[px][usize::from(pairs[px].0 != e)].1 = segs.len();
            }
            last[e] = segs.len();
            segs.push((prev, v));
            seg_edge.push(e);
        }
        let out_dart = |v: usize, e: usize| if g.edges()[e].0 == v { 2 * first[e] } else { 2 * last[e] + 1 };
        let mut allowed: Vec<Option<Vec<Vec<Dart>>>> = (0..n)
            .map(|v| {
                self.fixed[v].as_ref().map(|order| {
                    vec![order.iter().map(|&w| out_dart(v, g.edge_index(v, w).expect("fixed order lists neighbours"))).collect()]
                })
            })
            .collect();
        let plus_minus: Vec<[Dart; 4]> = around
            .iter()
            .map(|&[(a_in, a_out), (b_in, b_out)]| [2 * a_out, 2 * b_out, 2 * a_in + 1, 2 * b_in + 1])
            .collect();
        for &[ap, bp, am, bm] in &plus_minus {
            allowed.push(Some(vec![vec![ap, bp, am, bm], vec![ap, bm, am, bp]]));
        }
        if !is_planar(n + c, &segs) {
            return ControlFlow::Continue(());
        }
        let problem = EmbedProblem { n: n + c, segs, allowed };
        problem.for_each(&mut |rot| {
            let rotation = (0..n).map(|v| rot[v].iter().map(|&d| seg_edge[d / 2]).collect()).collect();
            let crossings = (0..c)
                .map(|x| {
                    let r = &rot[n + x];
                    let [ap, bp, ..] = plus_minus[x];
                    let i = r.iter().position(|&d| d == ap).unwrap();
                    Crossing { edges: [pairs[x].0, pairs[x].1], left_to_right: r[(i + 1) % 4] == bp }
                })
                .collect();
            let d = CombinatorialDrawing::new(g.clone(), on_edge.to_vec(), crossings, rotation)
                .expect("search only builds well-formed drawings");
            f(d)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(g: &Graph, fixed: Vec<Option<Vec<usize>>>, pairs: &[(usize, usize)]) -> usize {
        let s = DrawingSearch::new(g, fixed);
        let mut n = 0;
        let _ = s.for_each_drawing(pairs, &mut |d| {
            assert_eq!(d.validate_good(), Ok(()));
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }

    #[test]
    fn cycle_has_one_embedding() {
        let g = Graph::complete(3);
        assert_eq!(count(&g, vec![None; 3], &[]), 1);
    }

    #[test]
    fn star_embeddings_are_cyclic_orders() {
        // K_{1,4}: 3! cyclic orders at the centre
        let g = Graph::new(5, (1..5).map(|v| (0, v))).unwrap();
        assert_eq!(count(&g, vec![None; 5], &[]), 6);
        let mut fixed = vec![None; 5];
        fixed[0] = Some(vec![1, 3, 2, 4]);
        assert_eq!(count(&g, fixed, &[]), 1);
    }

    #[test]
    fn k4_and_k5() {
        // K4 is 3-connected: one embedding and its mirror
        assert_eq!(count(&Graph::complete(4), vec![None; 4], &[]), 2);
        let g = Graph::complete(5);
        assert_eq!(count(&g, vec![None; 5], &[]), 0);
        let s = DrawingSearch::new(&g, vec![None; 5]);
        // edges 0-2 and 1-3 can cross in a one-crossing drawing
        let e = g.edge_index(0, 2).unwrap();
        let f = g.edge_index(1, 3).unwrap();
        let d = s.witness(&[(e.min(f), e.max(f))]).unwrap();
        assert_eq!(d.crossings().len(), 1);
        assert_eq!(d.validate_good(), Ok(()));
    }

    #[test]
    fn two_disjoint_edges_cross_in_two_ways() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(count(&g, vec![None; 4], &[]), 1);
        assert_eq!(count(&g, vec![None; 4], &[(0, 1)]), 2);
    }

    #[test]
    fn subsets_in_lex_order() {
        let mut seen = Vec::new();
        let _ = for_each_subset(4, 2, &mut |s| {
            seen.push(s.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut n = 0;
        let _ = for_each_subset(3, 0, &mut |_| {
            n += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(n, 1);
    }
}
