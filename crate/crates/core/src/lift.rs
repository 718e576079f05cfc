//! Stacking weighted representatives into parallel copies.

use crate::clustering::AbstractClustering;
use crate::drawing::{CombinatorialDrawing, Crossing};
use crate::graph::Graph;

/// Replaces representative `α` by `z[α]` copies, each drawn along the
/// representative's star. Vertices: cover `0..k`, then the copies of each
/// representative in order. Copies of one representative cross each other
/// exactly `Z(d)` times per pair; every other crossing is the original one
/// replicated once per pair of strands.
pub fn lift(c: &AbstractClustering, z: &[u128]) -> CombinatorialDrawing {
    let d = c.drawing();
    let g = d.graph();
    let k = c.k();
    let reps = g.n() - k;
    assert_eq!(z.len(), reps, "one weight per representative");

    // vertex ids of the copies
    let mut first_copy = vec![0usize; reps];
    let mut next = k;
    for a in 0..reps {
        first_copy[a] = next;
        next += usize::try_from(z[a]).expect("lifted drawing fits in memory");
    }
    let copy = |a: usize, s: usize| first_copy[a] + s;
    let n = next;

    let mut edges: Vec<(usize, usize)> = g.edges().iter().copied().filter(|&(_, v)| v < k).collect();
    for a in 0..reps {
        for s in 0..z[a] as usize {
            edges.extend(g.neighbors(k + a).iter().map(|&y| (y, copy(a, s))));
        }
    }
    let new = Graph::new(n, edges).expect("simple by construction");
    let eid = |u: usize, v: usize| new.edge_index(u, v).expect("edge of the lifted graph");

    // An original edge is travelled from its representative to the cover, or
    // in stored direction inside G_X.
    let rep_of = |e: usize| {
        let (_, v) = g.edges()[e];
        (v >= k).then(|| v - k)
    };
    // strands of each original edge, left to right in travel direction
    let mut strands: Vec<Vec<usize>> = vec![Vec::new(); g.m()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match rep_of(e) {
            None => strands[e] = vec![eid(u, v)],
            Some(a) => {
                let pos = d.rotation(v).iter().position(|&x| x == e).unwrap();
                let right = pos < d.rotation(v).len().div_ceil(2);
                let mut list: Vec<usize> = (0..z[a] as usize).map(|s| eid(u, copy(a, s))).collect();
                if right {
                    list.reverse();
                }
                strands[e] = list;
            }
        }
    }

    let mut crossings: Vec<Crossing> = Vec::new();
    // per new edge, crossing ids in travel order
    let mut along: Vec<Vec<usize>> = vec![Vec::new(); new.m()];
    // new edges travelled against their stored direction
    let mut reversed = vec![false; new.m()];
    for a in 0..reps {
        for s in 0..z[a] as usize {
            for &y in g.neighbors(k + a) {
                reversed[eid(y, copy(a, s))] = true;
            }
        }
    }

    // local wiring next to each stacked representative
    for a in 0..reps {
        let za = z[a] as usize;
        if za < 2 {
            continue;
        }
        let t = k + a;
        let rot = d.rotation(t);
        let deg = rot.len();
        let r = deg.div_ceil(2);
        let strand = |s: usize, i: usize| {
            let (y, _) = g.edges()[rot[i]];
            eid(y, copy(a, s))
        };
        for right in [true, false] {
            let idx: Vec<usize> = if right { (0..r).collect() } else { (r..deg).collect() };
            // tracks from top to bottom
            let mut tracks: Vec<(usize, usize)> = (0..za).rev().flat_map(|s| idx.iter().map(move |&i| (s, i))).collect();
            if !right {
                tracks = (0..za).rev().flat_map(|s| idx.iter().rev().map(move |&i| (s, i))).collect();
            }
            let rank = |&(s, i): &(usize, usize)| if right { (i, usize::MAX - s) } else { (usize::MAX - i, usize::MAX - s) };
            // bubble sort into the boundary order; each swap is a crossing
            let len = tracks.len();
            for pass in 0..len {
                let mut swapped = false;
                for j in 0..len - 1 - pass {
                    if rank(&tracks[j]) > rank(&tracks[j + 1]) {
                        let upper = strand(tracks[j].0, tracks[j].1);
                        let lower = strand(tracks[j + 1].0, tracks[j + 1].1);
                        let id = crossings.len();
                        // the lower strand moves up: across the upper one from
                        // its right on the east side, from its left on the west
                        crossings.push(Crossing { edges: [upper, lower], left_to_right: !right });
                        along[upper].push(id);
                        along[lower].push(id);
                        tracks.swap(j, j + 1);
                        swapped = true;
                    }
                }
                if !swapped {
                    break;
                }
            }
        }
    }

    // grids replacing the original crossings
    let rev_orig = |e: usize| rep_of(e).is_some();
    let mut grid_base = vec![0usize; d.crossings().len()];
    let mut roles = vec![(0usize, 0usize); d.crossings().len()];
    for (x, cr) in d.crossings().iter().enumerate() {
        let [e, f] = cr.edges;
        let travel_ltr = cr.left_to_right ^ rev_orig(e) ^ rev_orig(f);
        // after this, `hb` crosses `ha` from its left to its right
        let (ha, hb) = if travel_ltr { (e, f) } else { (f, e) };
        roles[x] = (ha, hb);
        grid_base[x] = crossings.len();
        for &sa in &strands[ha] {
            for &sb in &strands[hb] {
                crossings.push(Crossing { edges: [sa, sb], left_to_right: true });
            }
        }
    }
    for e in 0..g.m() {
        let mut list = d.edge_crossings(e).to_vec();
        if rev_orig(e) {
            list.reverse();
        }
        for x in list {
            let (ha, hb) = roles[x];
            let (na, nb) = (strands[ha].len(), strands[hb].len());
            let id = |i: usize, j: usize| grid_base[x] + i * nb + j;
            if e == ha {
                for (i, &sa) in strands[ha].iter().enumerate() {
                    along[sa].extend((0..nb).rev().map(|j| id(i, j)));
                }
            } else {
                for (j, &sb) in strands[hb].iter().enumerate() {
                    along[sb].extend((0..na).map(|i| id(i, j)));
                }
            }
        }
    }

    // back to stored directions
    for (e, list) in along.iter_mut().enumerate() {
        if reversed[e] {
            list.reverse();
        }
    }
    for cr in &mut crossings {
        cr.left_to_right ^= reversed[cr.edges[0]] ^ reversed[cr.edges[1]];
    }

    let mut rotation = vec![Vec::new(); n];
    for y in 0..k {
        for &e in d.rotation(y) {
            rotation[y].extend(strands[e].iter().rev());
        }
    }
    for a in 0..reps {
        for s in 0..z[a] as usize {
            rotation[copy(a, s)] = d.rotation(k + a).iter().map(|&e| eid(g.edges()[e].0, copy(a, s))).collect();
        }
    }
    CombinatorialDrawing::new(new, along, crossings, rotation).expect("lifting keeps the drawing well formed")
}
