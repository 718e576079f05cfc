//! Brute-force crossing numbers and drawing enumeration for tiny graphs.
//! Shares only `Graph` and `CombinatorialDrawing` with the rest of the crate.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustworkx_core::petgraph::graph::UnGraph;

use crate::drawing::{CombinatorialDrawing, Crossing};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Deepening stops here.
    pub max_crossings: usize,
    pub max_edges: usize,
    pub time_cap: Option<Duration>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_crossings: 12, max_edges: 24, time_cap: None }
    }
}

/// Non-adjacent edge pairs `(e, f)` with `e < f`.
fn pairs_of(g: &Graph) -> Vec<(usize, usize)> {
    let es = g.edges();
    let mut out = Vec::new();
    for e in 0..es.len() {
        for f in e + 1..es.len() {
            let (a, b) = es[e];
            let (c, d) = es[f];
            if a != c && a != d && b != c && b != d {
                out.push((e, f));
            }
        }
    }
    out
}

/// Planarization segments for crossing pairs `set` with the given order of
/// crossing ids along each edge.
fn segments(g: &Graph, set: &[(usize, usize)], orders: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut segs = Vec::with_capacity(g.m() + 2 * set.len());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let mut prev = u;
        for &x in &orders[e] {
            segs.push((prev, n + x));
            prev = n + x;
        }
        segs.push((prev, v));
    }
    segs
}

fn planar(nodes: usize, segs: &[(usize, usize)]) -> bool {
    let mut h = UnGraph::<(), ()>::with_capacity(nodes, segs.len());
    for _ in 0..nodes {
        h.add_node(());
    }
    for &(a, b) in segs {
        h.add_edge((a as u32).into(), (b as u32).into(), ());
    }
    rustworkx_core::planar::is_planar(&h)
}

/// Calls `f` for every combination of orders along the edges; stops when it
/// returns true.
fn any_order(g: &Graph, set: &[(usize, usize)], f: &mut dyn FnMut(&[Vec<usize>]) -> bool) -> bool {
    let mut orders = vec![Vec::new(); g.m()];
    for (x, &(e, h)) in set.iter().enumerate() {
        orders[e].push(x);
        orders[h].push(x);
    }
    let multi: Vec<usize> = (0..g.m()).filter(|&e| orders[e].len() > 1).collect();
    loop {
        if f(&orders) {
            return true;
        }
        let mut moved = false;
        for &e in &multi {
            if permute_next(&mut orders[e]) {
                moved = true;
                break;
            }
            orders[e].sort_unstable();
        }
        if !moved {
            return false;
        }
    }
}

fn permute_next(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn realizable(g: &Graph, set: &[(usize, usize)]) -> bool {
    let nodes = g.n() + set.len();
    any_order(g, set, &mut |orders| planar(nodes, &segments(g, set, orders)))
}

struct Deepening<'a> {
    cfg: &'a OracleConfig,
    start: Instant,
    memo: Mutex<HashMap<Vec<bool>, usize>>,
}

impl Deepening<'_> {
    fn out_of_time(&self) -> bool {
        self.cfg.time_cap.is_some_and(|cap| self.start.elapsed() > cap)
    }

    fn cr(&self, g: &Graph) -> Result<usize> {
        // isolated vertices never matter
        let keep: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
        let g = &g.induced(&keep);
        if g.m() <= 8 && g.n() <= 4 {
            return Ok(0);
        }
        let key = g.canonical_form();
        if let Some(&c) = self.memo.lock().unwrap().get(&key) {
            return Ok(c);
        }
        let c = self.solve(g)?;
        self.memo.lock().unwrap().insert(key, c);
        Ok(c)
    }

    fn solve(&self, g: &Graph) -> Result<usize> {
        let n = g.n();
        let m = g.m();
        if planar(n, g.edges()) {
            return Ok(0);
        }
        // every drawing of G restricts to drawings of G − e
        let minus: Vec<usize> = (0..m).map(|e| self.cr(&g.without_edge(e))).collect::<Result<_>>()?;
        let euler = (m + 6).saturating_sub(3 * n);
        let mut c = minus.iter().copied().max().unwrap_or(0).max(euler).max(1);
        let pairs = pairs_of(g);
        loop {
            if c > self.cfg.max_crossings {
                return Err(Error::ResourceCap(format!("no drawing with at most {} crossings", self.cfg.max_crossings)));
            }
            if self.out_of_time() {
                return Err(Error::ResourceCap("oracle time cap exceeded".into()));
            }
            // at most this many chosen pairs may touch edge e
            let cap: Vec<usize> = minus.iter().map(|&x| c - x).collect();
            if self.level(g, &pairs, c, &cap)? {
                return Ok(c);
            }
            c += 1;
        }
    }

    /// Is some set of `c` pairs, within the per-edge caps, realizable?
    fn level(&self, g: &Graph, pairs: &[(usize, usize)], c: usize, cap: &[usize]) -> Result<bool> {
        let found = AtomicBool::new(false);
        let timed_out = AtomicBool::new(false);
        (0..pairs.len()).into_par_iter().for_each(|first| {
            if found.load(Ordering::Relaxed) || timed_out.load(Ordering::Relaxed) {
                return;
            }
            let mut used = vec![0usize; g.m()];
            let mut chosen = Vec::with_capacity(c);
            let (e, f) = pairs[first];
            if cap[e] == 0 || cap[f] == 0 {
                return;
            }
            used[e] += 1;
            used[f] += 1;
            chosen.push(pairs[first]);
            let mut steps = 0u64;
            if self.extend(g, pairs, first + 1, c, cap, &mut used, &mut chosen, &found, &timed_out, &mut steps) {
                found.store(true, Ordering::Relaxed);
            }
        });
        if timed_out.load(Ordering::Relaxed) && !found.load(Ordering::Relaxed) {
            return Err(Error::ResourceCap("oracle time cap exceeded".into()));
        }
        Ok(found.load(Ordering::Relaxed))
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        g: &Graph,
        pairs: &[(usize, usize)],
        from: usize,
        c: usize,
        cap: &[usize],
        used: &mut [usize],
        chosen: &mut Vec<(usize, usize)>,
        found: &AtomicBool,
        timed_out: &AtomicBool,
        steps: &mut u64,
    ) -> bool {
        *steps += 1;
        if (*steps).is_multiple_of(4096) {
            if found.load(Ordering::Relaxed) {
                return false;
            }
            if self.out_of_time() {
                timed_out.store(true, Ordering::Relaxed);
                return false;
            }
        }
        if chosen.len() == c {
            return realizable(g, chosen);
        }
        if pairs.len() - from < c - chosen.len() {
            return false;
        }
        for i in from..pairs.len() {
            let (e, f) = pairs[i];
            if used[e] >= cap[e] || used[f] >= cap[f] {
                continue;
            }
            used[e] += 1;
            used[f] += 1;
            chosen.push(pairs[i]);
            let hit = self.extend(g, pairs, i + 1, c, cap, used, chosen, found, timed_out, steps);
            chosen.pop();
            used[e] -= 1;
            used[f] -= 1;
            if hit {
                return true;
            }
            if timed_out.load(Ordering::Relaxed) {
                return false;
            }
        }
        false
    }
}

/// Least number of crossings over all good drawings of `g`.
pub fn oracle_cr(g: &Graph, cfg: &OracleConfig) -> Result<usize> {
    if g.m() > cfg.max_edges {
        return Err(Error::ResourceCap(format!("{} edges exceed the oracle limit of {}", g.m(), cfg.max_edges)));
    }
    let d = Deepening { cfg, start: Instant::now(), memo: Mutex::new(HashMap::new()) };
    let mut total = 0;
    for comp in g.components() {
        total += d.cr(&g.induced(&comp))?;
    }
    Ok(total)
}

/// Every good drawing of `g` with at most `max_cr` crossings, one per
/// equivalence class, sorted by canonical key.
pub fn oracle_drawings(g: &Graph, max_cr: usize) -> Vec<CombinatorialDrawing> {
    let pairs = pairs_of(g);
    let mut sets: Vec<Vec<(usize, usize)>> = Vec::new();
    for c in 0..=max_cr.min(pairs.len()) {
        let mut idx: Vec<usize> = (0..c).collect();
        loop {
            sets.push(idx.iter().map(|&i| pairs[i]).collect());
            let Some(i) = (0..c).rev().find(|&i| idx[i] != i + pairs.len() - c) else { break };
            idx[i] += 1;
            for j in i + 1..c {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let found: Vec<Vec<CombinatorialDrawing>> = sets
        .par_iter()
        .map(|set| {
            let mut out = Vec::new();
            let nodes = g.n() + set.len();
            any_order(g, set, &mut |orders| {
                let segs = segments(g, set, orders);
                if planar(nodes, &segs) {
                    Rotations::new(g, set, orders, segs).run(&mut out);
                }
                false
            });
            out
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut all: Vec<CombinatorialDrawing> = found.into_iter().flatten().filter(|d| seen.insert(d.canonical_key())).collect();
    all.sort_by_cached_key(|d| d.canonical_key());
    all
}

/// Vertex-by-vertex choice of rotations on a planarization.
struct Rotations<'a> {
    g: &'a Graph,
    set: &'a [(usize, usize)],
    orders: &'a [Vec<usize>],
    segs: Vec<(usize, usize)>,
    /// darts leaving each vertex: `2·s` leaves `segs[s].0`, `2·s + 1` leaves `segs[s].1`
    darts: Vec<Vec<usize>>,
    /// candidate cyclic orders per vertex
    choices: Vec<Vec<Vec<usize>>>,
    order: Vec<usize>,
    rot: Vec<Option<usize>>,
}

impl<'a> Rotations<'a> {
    fn new(g: &'a Graph, set: &'a [(usize, usize)], orders: &'a [Vec<usize>], segs: Vec<(usize, usize)>) -> Self {
        let nodes = g.n() + set.len();
        let mut darts = vec![Vec::new(); nodes];
        for (s, &(a, b)) in segs.iter().enumerate() {
            darts[a].push(2 * s);
            darts[b].push(2 * s + 1);
        }
        let mut choices = Vec::with_capacity(nodes);
        for v in 0..g.n() {
            choices.push(cyclic_orders(&darts[v]));
        }
        // segment index of each (edge, position) to find the dummy's four darts
        let mut first_seg = vec![0; g.m()];
        let mut acc = 0;
        for e in 0..g.m() {
            first_seg[e] = acc;
            acc += orders[e].len() + 1;
        }
        for (x, &(e, f)) in set.iter().enumerate() {
            let around = |edge: usize| {
                let i = orders[edge].iter().position(|&y| y == x).unwrap();
                let into = first_seg[edge] + i;
                (2 * into + 1, 2 * (into + 1))
            };
            let (e_in, e_out) = around(e);
            let (f_in, f_out) = around(f);
            choices.push(vec![vec![e_out, f_out, e_in, f_in], vec![e_out, f_in, e_in, f_out]]);
        }
        // greedy order: next is the vertex with most darts into the chosen
        // part, so cycles close and get checked early
        let mut order = Vec::with_capacity(nodes);
        let mut chosen = vec![false; nodes];
        let mut links = vec![0usize; nodes];
        for _ in 0..nodes {
            let v = (0..nodes)
                .filter(|&v| !chosen[v])
                .max_by_key(|&v| (links[v], std::cmp::Reverse(choices[v].len()), std::cmp::Reverse(v)))
                .unwrap();
            chosen[v] = true;
            order.push(v);
            for &d in &darts[v] {
                let (a, b) = segs[d / 2];
                links[if d % 2 == 0 { b } else { a }] += 1;
            }
        }
        Rotations { g, set, orders, segs, darts, choices, order, rot: vec![None; nodes] }
    }

    fn head(&self, d: usize) -> usize {
        let (a, b) = self.segs[d / 2];
        if d.is_multiple_of(2) { b } else { a }
    }

    /// Euler's formula on each component of the part whose endpoints both
    /// have a rotation.
    fn partial_planar(&self) -> bool {
        let nodes = self.rot.len();
        let assigned: Vec<bool> = self.rot.iter().map(Option::is_some).collect();
        let restricted: Vec<Vec<usize>> = (0..nodes)
            .map(|v| match self.rot[v] {
                None => Vec::new(),
                Some(i) => self.choices[v][i].iter().copied().filter(|&d| assigned[self.head(d)]).collect(),
            })
            .collect();
        let mut pos = vec![usize::MAX; 2 * self.segs.len()];
        for r in &restricted {
            for (i, &d) in r.iter().enumerate() {
                pos[d] = i;
            }
        }
        // components by union-find over the kept segments
        let mut parent: Vec<usize> = (0..nodes).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut edges = 0i64;
        for v in 0..nodes {
            for &d in &restricted[v] {
                if d % 2 == 0 {
                    edges += 1;
                    let (a, b) = (find(&mut parent, v), find(&mut parent, self.head(d)));
                    parent[a] = b;
                }
            }
        }
        let mut faces = 0i64;
        let mut done = vec![false; 2 * self.segs.len()];
        for v in 0..nodes {
            for &start in &restricted[v] {
                if done[start] {
                    continue;
                }
                faces += 1;
                let mut d = start;
                while !done[d] {
                    done[d] = true;
                    let r = &restricted[self.head(d)];
                    d = r[(pos[d ^ 1] + 1) % r.len()];
                }
            }
        }
        let mut comps = BTreeSet::new();
        let mut verts = 0i64;
        let mut isolated = 0i64;
        for v in 0..nodes {
            if assigned[v] {
                verts += 1;
                comps.insert(find(&mut parent, v));
                if restricted[v].is_empty() {
                    isolated += 1;
                }
            }
        }
        // V − E + F = 2C, counting one face per isolated vertex
        verts - edges + faces + isolated == 2 * comps.len() as i64
    }

    fn run(&mut self, out: &mut Vec<CombinatorialDrawing>) {
        self.step(0, out);
    }

    fn step(&mut self, i: usize, out: &mut Vec<CombinatorialDrawing>) {
        if i == self.order.len() {
            out.push(self.build());
            return;
        }
        let v = self.order[i];
        // a vertex joined by at most one edge cannot raise the genus
        let closing = self.darts[v].iter().filter(|&&d| self.rot[self.head(d)].is_some() && self.head(d) != v).count() >= 2;
        for c in 0..self.choices[v].len() {
            self.rot[v] = Some(c);
            if !closing || self.partial_planar() {
                self.step(i + 1, out);
            }
        }
        self.rot[v] = None;
    }

    fn build(&self) -> CombinatorialDrawing {
        let g = self.g;
        let n = g.n();
        let mut seg_edge = Vec::with_capacity(self.segs.len());
        for e in 0..g.m() {
            seg_edge.extend(std::iter::repeat_n(e, self.orders[e].len() + 1));
        }
        let rotation = (0..n).map(|v| self.choices[v][self.rot[v].unwrap()].iter().map(|&d| seg_edge[d / 2]).collect()).collect();
        let crossings = self
            .set
            .iter()
            .enumerate()
            .map(|(x, &(e, f))| Crossing { edges: [e, f], left_to_right: self.rot[n + x] == Some(0) })
            .collect();
        CombinatorialDrawing::new(g.clone(), self.orders.to_vec(), crossings, rotation).expect("well formed")
    }
}

/// All cyclic orders of `items`, first element fixed.
fn cyclic_orders(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 2 {
        return vec![items.to_vec()];
    }
    let mut rest = items[1..].to_vec();
    rest.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(std::iter::once(items[0]).chain(rest.iter().copied()).collect());
        if !permute_next(&mut rest) {
            return out;
        }
    }
}
