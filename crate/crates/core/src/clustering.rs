//! Representative sets and abstract clusterings of a compressed graph.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use serde::Serialize;

use crate::drawing::{choose2, zee, CombinatorialDrawing};
use crate::embed::{crossable_pairs, for_each_subset, DrawingSearch};
use crate::error::{Error, Result};
use crate::graph::{mask_members, next_permutation, CompressedGraph, Graph};
use crate::iqp::{IqpGroup, IqpInstance};

/// Number of cyclic orders of `j` labelled elements.
pub fn rotations(j: usize) -> u128 {
    (2..j).try_fold(1u128, |acc, i| acc.checked_mul(i as u128)).unwrap_or(u128::MAX)
}

/// Cyclic orders of `members`, each starting with `members[0]`, in
/// lexicographic order. Tag `t` of a representative is an index into this.
pub fn cyclic_orders(members: &[usize]) -> Vec<Vec<usize>> {
    if members.len() <= 2 {
        return vec![members.to_vec()];
    }
    let mut rest = members[1..].to_vec();
    rest.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(std::iter::once(members[0]).chain(rest.iter().copied()).collect());
        if !next_permutation(&mut rest) {
            return out;
        }
    }
}

/// `t`-th cyclic order of `members` without listing the others.
fn nth_cyclic_order(members: &[usize], mut t: u128) -> Vec<usize> {
    if members.len() <= 2 {
        return members.to_vec();
    }
    let mut pool = members[1..].to_vec();
    pool.sort_unstable();
    let mut out = vec![members[0]];
    while !pool.is_empty() {
        // orders of what remains after this pick
        let per = (1..pool.len() as u128).product::<u128>();
        let i = (t / per) as usize;
        t %= per;
        out.push(pool.remove(i));
    }
    out
}

/// Inverse of the tag numbering: the tag of a clockwise order of `members`.
pub fn cyclic_order_tag(members: &[usize], order: &[usize]) -> Option<u128> {
    let mut sorted_order = order.to_vec();
    sorted_order.sort_unstable();
    let mut sorted_members = members.to_vec();
    sorted_members.sort_unstable();
    if sorted_order != sorted_members {
        return None;
    }
    if members.is_empty() {
        return Some(0);
    }
    let start = order.iter().position(|&x| x == members[0])?;
    let rotated: Vec<usize> = order[start..].iter().chain(&order[..start]).copied().collect();
    if members.len() <= 2 {
        return Some(0);
    }
    let mut pool = members[1..].to_vec();
    pool.sort_unstable();
    let mut tag = 0u128;
    for &x in &rotated[1..] {
        let i = pool.iter().position(|&y| y == x)?;
        pool.remove(i);
        tag += i as u128 * (1..=pool.len() as u128).product::<u128>();
    }
    Some(tag)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Representative {
    /// Bitmask over cover indices.
    pub neighborhood: u64,
    /// Index into [`cyclic_orders`] of the neighbourhood.
    pub tag: u128,
    /// Clockwise order of the neighbours (cover indices).
    pub order: Vec<usize>,
}

/// One or more representatives per present neighbourhood, with distinct
/// rotation tags inside each neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RepresentativeSet {
    reps: Vec<Representative>,
}

impl RepresentativeSet {
    pub fn new(mut reps: Vec<Representative>) -> Result<Self> {
        reps.sort();
        if reps.windows(2).any(|w| w[0].neighborhood == w[1].neighborhood && w[0].tag == w[1].tag) {
            return Err(Error::Invalid("two representatives share neighbourhood and rotation".into()));
        }
        for r in &reps {
            let members = mask_members(r.neighborhood);
            if r.tag >= rotations(members.len()) || nth_cyclic_order(&members, r.tag) != r.order {
                return Err(Error::Invalid(format!("bad rotation tag {} for neighbourhood {:#b}", r.tag, r.neighborhood)));
            }
        }
        Ok(RepresentativeSet { reps })
    }

    pub fn representatives(&self) -> &[Representative] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// `G_X` plus the representatives: cover vertices `0..k`, representative
    /// `i` is vertex `k + i`.
    pub fn graph(&self, cg: &CompressedGraph) -> Graph {
        let k = cg.k();
        let mut edges = cg.gx_edges().to_vec();
        for (i, r) in self.reps.iter().enumerate() {
            edges.extend(mask_members(r.neighborhood).into_iter().map(|y| (y, k + i)));
        }
        Graph::new(k + self.reps.len(), edges).expect("representatives attach to the cover")
    }

    /// Prescribed clockwise neighbour orders for [`graph`](Self::graph).
    pub fn fixed_rotations(&self, k: usize) -> Vec<Option<Vec<usize>>> {
        let mut fixed = vec![None; k];
        fixed.extend(self.reps.iter().map(|r| Some(r.order.clone())));
        fixed
    }

    /// Every neighbourhood has at most `h(Y)` representatives, so all of
    /// them can carry weight.
    pub fn fits(&self, cg: &CompressedGraph) -> bool {
        let mut i = 0;
        while i < self.reps.len() {
            let mask = self.reps[i].neighborhood;
            let g = self.reps[i..].iter().take_while(|r| r.neighborhood == mask).count();
            if g as u128 > cg.h(mask) {
                return false;
            }
            i += g;
        }
        true
    }

    /// Least cluster crossings over weights that put at least one vertex on
    /// every representative: an even split inside each neighbourhood.
    pub fn min_cluster_value(&self, cg: &CompressedGraph) -> BigUint {
        let mut total = BigUint::ZERO;
        let mut i = 0;
        while i < self.reps.len() {
            let mask = self.reps[i].neighborhood;
            let g = self.reps[i..].iter().take_while(|r| r.neighborhood == mask).count() as u128;
            let h = cg.h(mask);
            let (q, rem) = (h / g, h % g);
            let z = BigUint::from(zee(mask.count_ones() as u64));
            total += z * (choose2(q + 1) * rem + choose2(q) * (g - rem));
            i += g as usize;
        }
        total
    }

    /// The quadratic program of a clustering whose crossing pairs (edge ids
    /// of [`graph`](Self::graph)) are `pairs`.
    pub fn instance(&self, cg: &CompressedGraph, graph: &Graph, pairs: &[(usize, usize)]) -> IqpInstance {
        let k = cg.k();
        let n = self.reps.len();
        let mut groups: Vec<IqpGroup> = Vec::new();
        for r in &self.reps {
            match groups.last_mut() {
                Some(g) if g.neighborhood == r.neighborhood => g.size += 1,
                _ => groups.push(IqpGroup {
                    neighborhood: r.neighborhood,
                    degree: r.neighborhood.count_ones() as usize,
                    size: 1,
                    target: cg.h(r.neighborhood),
                }),
            }
        }
        let star = |e: usize| {
            let (_, v) = graph.edges()[e];
            (v >= k).then(|| v - k)
        };
        let mut q = vec![vec![0u64; n]; n];
        let mut p = vec![0u64; n];
        let mut r = 0;
        for &(e, f) in pairs {
            match (star(e), star(f)) {
                (None, None) => r += 1,
                (Some(a), None) | (None, Some(a)) => p[a] += 1,
                (Some(a), Some(b)) => {
                    q[a][b] += 1;
                    q[b][a] += 1;
                }
            }
        }
        for (a, rep) in self.reps.iter().enumerate() {
            q[a][a] = zee(rep.neighborhood.count_ones() as u64);
        }
        IqpInstance::new(groups, q, p, r).expect("well-formed by construction")
    }
}

/// Lazily enumerates representative sets in lexicographic order of
/// (neighbourhood, tag set), first neighbourhood most significant.
pub struct RepSets {
    /// (mask, members, rotations, cap)
    groups: Vec<(u64, Vec<usize>, u128, u128)>,
    current: Option<Vec<Vec<u128>>>,
    started: bool,
}

/// Next nonempty subset of `0..n` with at most `cap` elements, in
/// lexicographic order of sorted lists.
fn next_subset(s: &mut Vec<u128>, n: u128, cap: u128) -> bool {
    let last = *s.last().expect("nonempty");
    if last + 1 < n {
        if (s.len() as u128) < cap {
            s.push(last + 1);
        } else {
            *s.last_mut().unwrap() += 1;
        }
        return true;
    }
    s.pop();
    match s.last_mut() {
        Some(x) => {
            *x += 1;
            true
        }
        None => false,
    }
}

impl Iterator for RepSets {
    type Item = RepresentativeSet;

    fn next(&mut self) -> Option<RepresentativeSet> {
        let cur = self.current.as_mut()?;
        if self.started {
            let mut advanced = false;
            for i in (0..cur.len()).rev() {
                if next_subset(&mut cur[i], self.groups[i].2, self.groups[i].3) {
                    advanced = true;
                    break;
                }
                cur[i] = vec![0];
            }
            if !advanced {
                self.current = None;
                return None;
            }
        }
        self.started = true;
        let reps = self
            .groups
            .iter()
            .zip(cur.iter())
            .flat_map(|((mask, members, ..), tags)| {
                tags.iter().map(move |&tag| Representative { neighborhood: *mask, tag, order: nth_cyclic_order(members, tag) })
            })
            .collect();
        Some(RepresentativeSet { reps })
    }
}

pub fn enumerate_rep_sets(cg: &CompressedGraph) -> RepSets {
    rep_sets_capped(cg, |_, rot| rot)
}

/// The representative sets that [`RepresentativeSet::fits`], in the same
/// order as [`enumerate_rep_sets`].
pub fn fitting_rep_sets(cg: &CompressedGraph) -> RepSets {
    rep_sets_capped(cg, |h, rot| h.min(rot))
}

fn rep_sets_capped(cg: &CompressedGraph, cap: impl Fn(u128, u128) -> u128) -> RepSets {
    let groups: Vec<(u64, Vec<usize>, u128, u128)> = cg
        .support()
        .filter(|&(m, _)| m != 0)
        .map(|(m, h)| {
            let rot = rotations(m.count_ones() as usize);
            (m, mask_members(m), rot, cap(h, rot))
        })
        .collect();
    let current = Some(vec![vec![0]; groups.len()]);
    RepSets { groups, current, started: false }
}

/// A good drawing of `G_X` plus a representative set, each representative
/// drawn with its tagged rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractClustering {
    k: usize,
    reps: RepresentativeSet,
    drawing: CombinatorialDrawing,
}

impl AbstractClustering {
    pub fn new(cg: &CompressedGraph, reps: RepresentativeSet, drawing: CombinatorialDrawing) -> Result<Self> {
        if drawing.graph() != &reps.graph(cg) {
            return Err(Error::Invalid("drawing is not of G_X plus the representatives".into()));
        }
        drawing.validate_good().map_err(Error::InvalidDrawing)?;
        let k = cg.k();
        for (i, r) in reps.representatives().iter().enumerate() {
            if crate::drawing::normalize_cycle(&drawing.neighbor_rotation(k + i)) != crate::drawing::normalize_cycle(&r.order) {
                return Err(Error::Invalid(format!("representative {i} is not drawn with its tagged rotation")));
            }
        }
        Ok(AbstractClustering { k, reps, drawing })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn representatives(&self) -> &RepresentativeSet {
        &self.reps
    }

    pub fn drawing(&self) -> &CombinatorialDrawing {
        &self.drawing
    }

    /// Crossings inside `G_X`.
    pub fn r(&self) -> usize {
        let g = self.drawing.graph();
        self.drawing.crossings().iter().filter(|c| c.edges.iter().all(|&e| g.edges()[e].1 < self.k)).count()
    }

    /// Crossing pairs as edge ids, `(lo, hi)`, sorted.
    pub fn crossing_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> =
            self.drawing.crossings().iter().map(|c| (c.edges[0].min(c.edges[1]), c.edges[0].max(c.edges[1]))).collect();
        v.sort_unstable();
        v
    }

    /// One JSON line: representatives, `r` and the drawing.
    pub fn to_json_line(&self) -> String {
        let drawing: serde_json::Value = serde_json::from_str(&self.drawing.to_json()).expect("drawing JSON");
        let v = serde_json::json!({
            "representatives": self.reps.representatives(),
            "r": self.r(),
            "drawing": drawing,
        });
        v.to_string()
    }
}

pub fn build_iqp(c: &AbstractClustering, cg: &CompressedGraph) -> IqpInstance {
    c.reps.instance(cg, c.drawing.graph(), &c.crossing_pairs())
}

/// Every abstract clustering with at most `budget` crossings, per
/// representative set, deduplicated and sorted by canonical key.
pub fn enumerate_clusterings(cg: &CompressedGraph, budget: usize) -> Vec<AbstractClustering> {
    enumerate_clusterings_capped(cg, budget, usize::MAX).expect("no cap")
}

/// As [`enumerate_clusterings`], failing once more than `cap` drawings were
/// produced.
pub fn enumerate_clusterings_capped(cg: &CompressedGraph, budget: usize, cap: usize) -> Result<Vec<AbstractClustering>> {
    let mut out = Vec::new();
    for reps in enumerate_rep_sets(cg) {
        let g = reps.graph(cg);
        let search = DrawingSearch::new(&g, reps.fixed_rotations(cg.k()));
        let pairs = crossable_pairs(&g);
        let mut found: BTreeSet<_> = BTreeSet::new();
        let mut drawings = Vec::new();
        let mut over = false;
        for b in 0..=budget.min(pairs.len()) {
            let _ = for_each_subset(pairs.len(), b, &mut |idx| {
                let chosen: Vec<(usize, usize)> = idx.iter().map(|&i| pairs[i]).collect();
                search.for_each_drawing(&chosen, &mut |d| {
                    if found.insert(d.canonical_key()) {
                        drawings.push(d);
                        if out.len() + drawings.len() > cap {
                            over = true;
                            return ControlFlow::Break(());
                        }
                    }
                    ControlFlow::Continue(())
                })
            });
            if over {
                return Err(Error::ResourceCap(format!("more than {cap} clusterings")));
            }
        }
        drawings.sort_by_cached_key(|d| d.canonical_key());
        out.extend(drawings.into_iter().map(|drawing| AbstractClustering { k: cg.k(), reps: reps.clone(), drawing }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::from_straight_line;
    use crate::graph::{compress, VertexCover};

    fn k_mn(m: usize, n: u128) -> CompressedGraph {
        CompressedGraph::new(m, [], [((1u64 << m) - 1, n)]).unwrap()
    }

    #[test]
    fn rotation_counts() {
        assert_eq!(rotations(0), 1);
        assert_eq!(rotations(2), 1);
        assert_eq!(rotations(3), 2);
        assert_eq!(rotations(4), 6);
        for j in 0..7 {
            let members: Vec<usize> = (0..j).collect();
            let all = cyclic_orders(&members);
            assert_eq!(all.len() as u128, rotations(j));
            for (t, o) in all.iter().enumerate() {
                assert_eq!(&nth_cyclic_order(&members, t as u128), o);
                assert_eq!(cyclic_order_tag(&members, o), Some(t as u128));
                let mut turned = o.clone();
                turned.rotate_left(j.min(1));
                assert_eq!(cyclic_order_tag(&members, &turned), Some(t as u128));
            }
        }
    }

    #[test]
    fn rep_set_counts() {
        assert_eq!(enumerate_rep_sets(&k_mn(2, 5)).count(), 1);
        assert_eq!(enumerate_rep_sets(&k_mn(3, 5)).count(), 3);
        assert_eq!(enumerate_rep_sets(&k_mn(3, 1)).count(), 3);
        // triangle, five vertices on all of it, three on {0, 2}
        let fig2 = CompressedGraph::new(3, [(0, 1), (1, 2), (0, 2)], [(0b111, 5), (0b101, 3)]).unwrap();
        let sets: Vec<RepresentativeSet> = enumerate_rep_sets(&fig2).collect();
        assert_eq!(sets.len(), 3);
        let tags: Vec<Vec<u128>> = sets.iter().map(|s| s.representatives().iter().map(|r| r.tag).collect()).collect();
        assert_eq!(tags, vec![vec![0, 0], vec![0, 0, 1], vec![0, 1]]);
        assert!(sets.windows(2).all(|w| w[0] < w[1]));
        // four cover vertices, six rotations: 2^6 - 1 subsets
        assert_eq!(enumerate_rep_sets(&k_mn(4, 9)).count(), 63);
        assert_eq!(enumerate_rep_sets(&k_mn(4, 2)).count(), 63);
        let fitting: Vec<RepresentativeSet> = enumerate_rep_sets(&k_mn(4, 2)).filter(|s| s.fits(&k_mn(4, 2))).collect();
        assert_eq!(fitting.len(), 6 + 15);
        assert_eq!(fitting, fitting_rep_sets(&k_mn(4, 2)).collect::<Vec<_>>());
    }

    #[test]
    fn small_clustering_counts() {
        // K_{2,3}: a path on three vertices
        assert_eq!(enumerate_clusterings(&k_mn(2, 3), 2).len(), 1);
        // one representative on three edgeless cover vertices: one drawing per rotation
        let singles = enumerate_clusterings(&k_mn(3, 1), 3).into_iter().filter(|c| c.representatives().len() == 1).count();
        assert_eq!(singles, 2);
    }

    #[test]
    fn k33_has_a_crossing_free_pair_of_stars() {
        let cg = k_mn(3, 3);
        let all = enumerate_clusterings(&cg, 1);
        let two: Vec<&AbstractClustering> = all.iter().filter(|c| c.representatives().len() == 2).collect();
        assert!(!two.is_empty());
        let plane = two.iter().find(|c| c.drawing().crossings().is_empty()).expect("two stars drawn apart");
        let inst = build_iqp(plane, &cg);
        assert_eq!(inst.q(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(inst.p(), &[0, 0]);
        assert_eq!(inst.r(), 0);
        for c in &all {
            assert_eq!(c.drawing().validate_good(), Ok(()));
            assert!(AbstractClustering::new(&cg, c.representatives().clone(), c.drawing().clone()).is_ok());
        }
        for (i, a) in all.iter().enumerate() {
            for b in &all[..i] {
                assert!(a.representatives() != b.representatives() || !a.drawing().equivalent(b.drawing()));
            }
        }
    }

    #[test]
    fn counts_do_not_depend_on_multiplicities() {
        let a = enumerate_clusterings(&k_mn(3, 1), 2).len();
        let b = enumerate_clusterings(&k_mn(3, 1_000_000), 2).len();
        assert_eq!(a, b);
        let c = CompressedGraph::new(3, [(0, 1)], [(0b111, 1), (0b110, 1)]).unwrap();
        let d = CompressedGraph::new(3, [(0, 1)], [(0b111, 70), (0b110, 9)]).unwrap();
        assert_eq!(enumerate_clusterings(&c, 2).len(), enumerate_clusterings(&d, 2).len());
    }

    #[test]
    fn trivial_instances() {
        let cg = k_mn(2, 7);
        let c = &enumerate_clusterings(&cg, 0)[0];
        let inst = build_iqp(c, &cg);
        assert_eq!(inst.q(), &[vec![0]]);
        assert_eq!(inst.p(), &[0]);
        assert_eq!(inst.r(), 0);
    }

    #[test]
    fn min_cluster_value_is_even_split() {
        let cg = k_mn(3, 5);
        let sets: Vec<RepresentativeSet> = enumerate_rep_sets(&cg).collect();
        assert_eq!(sets[0].min_cluster_value(&cg), BigUint::from(10u32));
        assert_eq!(sets[1].min_cluster_value(&cg), BigUint::from(4u32));
    }

    #[test]
    fn clustering_of_a_drawing_is_accepted() {
        // K_{3,1} drawn in the plane, compressed
        let g = Graph::complete_bipartite(3, 1);
        let d = from_straight_line(g.clone(), &[(0.0, 0.0), (2.0, 0.0), (1.0, 2.0), (1.0, 0.7)]).unwrap();
        let x = VertexCover::new(&g, vec![0, 1, 2]).unwrap();
        let cg = compress(&g, &x).unwrap();
        let order = d.neighbor_rotation(3);
        let members = [0, 1, 2];
        let tag = cyclic_orders(&members).iter().position(|o| crate::drawing::normalize_cycle(o) == crate::drawing::normalize_cycle(&order)).unwrap();
        let reps = RepresentativeSet::new(vec![Representative { neighborhood: 0b111, tag: tag as u128, order: nth_cyclic_order(&members, tag as u128) }]).unwrap();
        let c = AbstractClustering::new(&cg, reps, d).unwrap();
        assert_eq!(c.r(), 0);
        let line = c.to_json_line();
        assert!(line.starts_with("{\"drawing\":"));
        assert!(!line.contains('\n'));
    }
}
