//! Exact crossing numbers of compressed graphs: search over abstract
//! clusterings, one quadratic program each, then lift the winner.

use std::collections::HashMap;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::clustering::{build_iqp, cyclic_order_tag, fitting_rep_sets, AbstractClustering, Representative, RepresentativeSet};
use crate::drawing::{from_straight_line, CombinatorialDrawing};
use crate::embed::{crossable_pairs, for_each_subset, DrawingSearch};
use crate::error::{Error, Result};
use crate::graph::{expand, mask_members, CompressedGraph, Graph};
use crate::iqp::{solve_iqp_capped, IqpInstance, IqpSolution, DEFAULT_NODE_CAP};
use crate::lift::lift;
use crate::oracle::{oracle_cr, OracleConfig};
use crate::ser::big;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Fail instead of searching clusterings with more crossings than this.
    pub budget_cap: Option<usize>,
    pub iqp_node_cap: u64,
    /// Total crossing-pair sets examined per component.
    pub max_crossing_sets: u64,
    pub max_rep_sets: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget_cap: None, iqp_node_cap: DEFAULT_NODE_CAP, max_crossing_sets: 50_000_000, max_rep_sets: 100_000 }
    }
}

/// Where the winning clustering of a component came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Construction,
    Search { level: usize, rep_set: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub level: usize,
    pub rep_sets: usize,
    pub crossing_sets: u64,
    pub iqp_solves: u64,
    pub candidates: usize,
    pub witness_checks: usize,
    #[serde(serialize_with = "big")]
    pub best: BigUint,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    /// Cover indices of the whole graph used by this component.
    pub cover: Vec<usize>,
    pub compressed: String,
    #[serde(serialize_with = "big")]
    pub value: BigUint,
    pub origin: Origin,
    pub representatives: Vec<Representative>,
    #[serde(serialize_with = "big_list")]
    pub z: Vec<u128>,
    pub r: usize,
    #[serde(serialize_with = "big")]
    pub f: BigUint,
    pub instance: String,
    pub clustering: serde_json::Value,
    pub levels: Vec<LevelStats>,
    #[serde(skip)]
    pub(crate) winner: AbstractClustering,
    #[serde(skip)]
    pub(crate) cg: CompressedGraph,
}

fn big_list<S: serde::Serializer>(v: &[u128], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    #[serde(serialize_with = "big")]
    pub crossing_number: BigUint,
    pub components: Vec<ComponentReport>,
}

/// Largest lifted drawing built on request.
pub const LIFT_MAX_CROSSINGS: u64 = 5_000_000;
pub const LIFT_MAX_VERTICES: u128 = 2_000_000;

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Full drawing of `expand(cg)` with the reported number of crossings.
    pub fn lifted(&self, cg: &CompressedGraph) -> Result<CombinatorialDrawing> {
        if self.crossing_number > BigUint::from(LIFT_MAX_CROSSINGS) || cg.vertex_count() > LIFT_MAX_VERTICES {
            return Err(Error::ResourceCap("lifted drawing too large to build".into()));
        }
        assemble(self, cg)
    }
}

/// Places the lifted components into the vertex numbering of `expand(cg)`.
fn assemble(report: &SolveReport, cg: &CompressedGraph) -> Result<CombinatorialDrawing> {
    let k = cg.k();
    let total = usize::try_from(cg.vertex_count()).map_err(|_| Error::ResourceCap("graph too large to expand".into()))?;
    let mut union: Option<CombinatorialDrawing> = None;
    let mut union_n = 0;
    let mut cover_pos = vec![usize::MAX; k];
    // global mask -> union indices of its copies, in order
    let mut copies: HashMap<u64, Vec<usize>> = HashMap::new();
    for comp in &report.components {
        let d = lift(&comp.winner, &comp.z);
        for (i, &c) in comp.cover.iter().enumerate() {
            cover_pos[c] = union_n + i;
        }
        let mut v = union_n + comp.cover.len();
        for (a, rep) in comp.winner.representatives().representatives().iter().enumerate() {
            let global = mask_members(rep.neighborhood).iter().fold(0u64, |acc, &y| acc | 1 << comp.cover[y]);
            let list = copies.entry(global).or_default();
            for _ in 0..comp.z[a] {
                list.push(v);
                v += 1;
            }
        }
        union_n += d.graph().n();
        union = Some(match union {
            None => d,
            Some(u) => u.disjoint_union(&d),
        });
    }
    let rest = total - union_n;
    let empty = CombinatorialDrawing::plane(Graph::new(rest, [])?, vec![Vec::new(); rest]).map_err(Error::InvalidDrawing)?;
    let union = match union {
        None => empty,
        Some(u) => u.disjoint_union(&empty),
    };
    let mut spare = union_n..total;
    let mut keep = Vec::with_capacity(total);
    for c in 0..k {
        keep.push(if cover_pos[c] == usize::MAX { spare.next().unwrap() } else { cover_pos[c] });
    }
    for (mask, count) in cg.support() {
        if mask == 0 {
            keep.extend(spare.by_ref().take(count as usize));
        } else {
            let list = copies.get(&mask).map(Vec::as_slice).unwrap_or(&[]);
            if list.len() as u128 != count {
                return Err(Error::Invalid(format!("report does not place {count} vertices on neighbourhood {mask:#b}")));
            }
            keep.extend_from_slice(list);
        }
    }
    Ok(union.induced(&keep))
}

fn jitter(seed: u64, i: u64) -> f64 {
    let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 31;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 29;
    (x % 10_000) as f64 / 10_000.0
}

/// A straight-line clustering: the cover on a shallow convex arc, and for
/// each present neighbourhood one representative to the right of the arc
/// and, when a second one is allowed and differs, one to the left.
pub fn canonical_construction(cg: &CompressedGraph) -> Result<AbstractClustering> {
    let k = cg.k();
    let mid = (k as f64 - 1.0) / 2.0;
    let mut last_err = None;
    for seed in 0..64u64 {
        let cover: Vec<(f64, f64)> = (0..k).map(|i| (0.02 * (i as f64 - mid).powi(2), i as f64)).collect();
        let mut placed: Vec<(Representative, (f64, f64))> = Vec::new();
        for (j, (mask, h)) in cg.support().filter(|&(m, _)| m != 0).enumerate() {
            let members = mask_members(mask);
            let y = members.iter().map(|&m| m as f64).sum::<f64>() / members.len() as f64;
            let mut sides = vec![1.0];
            if h >= 2 && members.len() >= 3 {
                sides.push(-1.0);
            }
            for (s, side) in sides.into_iter().enumerate() {
                let j = j as u64;
                let p = (side * (3.0 + 0.5 * jitter(seed, 2 * j + s as u64)), y + 0.3 * jitter(seed ^ 0x5555, 2 * j + s as u64) - 0.15);
                // clockwise: decreasing angle
                let mut order = members.clone();
                let angle = |m: usize| (cover[m].1 - p.1).atan2(cover[m].0 - p.0);
                order.sort_by(|&a, &b| angle(b).total_cmp(&angle(a)));
                let tag = cyclic_order_tag(&members, &order).expect("order of the members");
                if placed.iter().any(|(r, _)| r.neighborhood == mask && r.tag == tag) {
                    continue;
                }
                placed.push((Representative { neighborhood: mask, tag, order: crate::clustering::cyclic_orders(&members)[tag as usize].clone() }, p));
            }
        }
        placed.sort_by(|a, b| a.0.cmp(&b.0));
        let reps = RepresentativeSet::new(placed.iter().map(|(r, _)| r.clone()).collect())?;
        let coords: Vec<(f64, f64)> = cover.iter().copied().chain(placed.iter().map(|&(_, p)| p)).collect();
        let attempt = from_straight_line(reps.graph(cg), &coords).and_then(|d| AbstractClustering::new(cg, reps, d));
        match attempt {
            Ok(c) => return Ok(c),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Crossings of the canonical construction.
pub fn initial_budget(cg: &CompressedGraph) -> usize {
    canonical_construction(cg).map(|c| c.drawing().crossings().len()).unwrap_or(usize::MAX)
}

struct RepSetState {
    reps: RepresentativeSet,
    graph: Graph,
    pairs: Vec<(usize, usize)>,
    min_cl: BigUint,
}

struct Candidate {
    value: BigUint,
    rep_set: usize,
    pairs: Vec<(usize, usize)>,
    inst: IqpInstance,
}

fn solve_component(cover: Vec<usize>, cg: &CompressedGraph, opts: &SolveOptions) -> Result<ComponentReport> {
    let k = cg.k();
    let construction = canonical_construction(cg)?;
    let mut cache: HashMap<IqpInstance, IqpSolution> = HashMap::new();
    let inst = build_iqp(&construction, cg);
    let sol = solve_iqp_capped(&inst, opts.iqp_node_cap)?;
    let mut best = sol.true_value.clone();
    let mut origin = Origin::Construction;
    let mut winner = (construction, inst, sol);

    let mut states = Vec::new();
    // a set with more representatives than vertices leaves one at weight
    // zero, and a smaller set covers that case
    for (i, reps) in fitting_rep_sets(cg).enumerate() {
        if i >= opts.max_rep_sets {
            return Err(Error::ResourceCap(format!("more than {} representative sets", opts.max_rep_sets)));
        }
        let graph = reps.graph(cg);
        let pairs = crossable_pairs(&graph);
        let min_cl = reps.min_cluster_value(cg);
        states.push(RepSetState { reps, graph, pairs, min_cl });
    }

    let mut levels = Vec::new();
    let mut examined = 0u64;
    for b in 0usize.. {
        let active: Vec<usize> =
            (0..states.len()).filter(|&i| b <= states[i].pairs.len() && BigUint::from(b) + &states[i].min_cl < best).collect();
        if active.is_empty() {
            break;
        }
        if opts.budget_cap.is_some_and(|cap| b > cap) {
            return Err(Error::ResourceCap(format!("clusterings with more than {b} crossings would have to be searched")));
        }
        let mut cands = Vec::new();
        let mut sets = 0u64;
        let mut solves = 0u64;
        let mut failure = None;
        for &i in &active {
            let st = &states[i];
            let _ = for_each_subset(st.pairs.len(), b, &mut |idx| {
                examined += 1;
                sets += 1;
                if examined > opts.max_crossing_sets {
                    failure = Some(Error::ResourceCap(format!("more than {} crossing sets", opts.max_crossing_sets)));
                    return ControlFlow::Break(());
                }
                let chosen: Vec<(usize, usize)> = idx.iter().map(|&j| st.pairs[j]).collect();
                let inst = st.reps.instance(cg, &st.graph, &chosen);
                let value = match cache.get(&inst) {
                    Some(sol) => sol.true_value.clone(),
                    None => match solve_iqp_capped(&inst, opts.iqp_node_cap) {
                        Ok(sol) => {
                            solves += 1;
                            let v = sol.true_value.clone();
                            cache.insert(inst.clone(), sol);
                            v
                        }
                        Err(e) => {
                            failure = Some(e);
                            return ControlFlow::Break(());
                        }
                    },
                };
                if value < best {
                    cands.push(Candidate { value, rep_set: i, pairs: chosen, inst });
                }
                ControlFlow::Continue(())
            });
            if let Some(e) = failure {
                return Err(e);
            }
        }
        // stable: ties keep stream order
        cands.sort_by(|a, b| a.value.cmp(&b.value));
        let hit = cands.par_iter().enumerate().find_map_first(|(j, c)| {
            let st = &states[c.rep_set];
            DrawingSearch::new(&st.graph, st.reps.fixed_rotations(k)).witness(&c.pairs).map(|d| (j, d))
        });
        let witness_checks = hit.as_ref().map_or(cands.len(), |(j, _)| j + 1);
        if let Some((j, drawing)) = hit {
            let c = &cands[j];
            let clustering = AbstractClustering::new(cg, states[c.rep_set].reps.clone(), drawing)?;
            best = c.value.clone();
            origin = Origin::Search { level: b, rep_set: c.rep_set };
            winner = (clustering, c.inst.clone(), cache[&c.inst].clone());
        }
        levels.push(LevelStats {
            level: b,
            rep_sets: active.len(),
            crossing_sets: sets,
            iqp_solves: solves,
            candidates: cands.len(),
            witness_checks,
            best: best.clone(),
        });
    }

    let (clustering, inst, sol) = winner;
    Ok(ComponentReport {
        cover,
        compressed: cg.to_text(),
        value: sol.true_value.clone(),
        origin,
        representatives: clustering.representatives().representatives().to_vec(),
        z: sol.z.clone(),
        r: clustering.r(),
        f: sol.f.clone(),
        instance: inst.to_text(),
        clustering: serde_json::from_str(&clustering.to_json_line()).expect("clustering JSON"),
        levels,
        winner: clustering,
        cg: cg.clone(),
    })
}

/// Exact crossing number of `expand(cg)`, summed over connected pieces.
pub fn crossing_number(cg: &CompressedGraph, opts: &SolveOptions) -> Result<SolveReport> {
    let components = cg.components().into_iter().map(|(cover, sub)| solve_component(cover, &sub, opts)).collect::<Result<Vec<_>>>()?;
    let crossing_number = components.iter().map(|c| &c.value).sum();
    Ok(SolveReport { crossing_number, components })
}

/// Graphs at most this large are also checked against the oracle.
pub const VERIFY_ORACLE_MAX_VERTICES: u128 = 9;
pub const VERIFY_ORACLE_MAX_EDGES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    /// Crossings of the rebuilt lifted drawing, unless it was too large.
    pub lifted: Option<BigUint>,
    pub oracle: Option<usize>,
}

/// Recounts the report: per-component program values, the lifted drawing
/// (size permitting) and the oracle (for tiny graphs).
pub fn verify(report: &SolveReport, cg: &CompressedGraph) -> Result<Verification> {
    let mismatch = |msg: &str| Err(Error::Mismatch(msg.to_string()));
    let mut lifted = None;
    match report.lifted(cg) {
        Ok(d) => {
            if let Err(v) = d.validate_good() {
                return mismatch(&format!("lifted drawing is not good: {v}"));
            }
            if d.graph() != &expand(cg)? {
                return mismatch("lifted drawing is not a drawing of the input graph");
            }
            let count = d.crossing_count();
            if count != report.crossing_number {
                return mismatch("lift count ≠ reported value");
            }
            lifted = Some(count);
        }
        Err(Error::ResourceCap(_)) => {}
        Err(e) => return Err(e),
    }
    for comp in &report.components {
        let inst = build_iqp(&comp.winner, &comp.cg);
        if !inst.is_feasible(&comp.z) || inst.true_value(&comp.z) != comp.value {
            return mismatch("program value ≠ component value");
        }
    }
    if report.components.iter().map(|c| &c.value).sum::<BigUint>() != report.crossing_number {
        return mismatch("component values do not sum to the reported value");
    }
    let mut oracle = None;
    if cg.vertex_count() <= VERIFY_ORACLE_MAX_VERTICES {
        let g = expand(cg)?;
        if g.m() <= VERIFY_ORACLE_MAX_EDGES {
            let c = oracle_cr(&g, &OracleConfig::default())?;
            if BigUint::from(c) != report.crossing_number {
                return mismatch("oracle value ≠ reported value");
            }
            oracle = Some(c);
        }
    }
    Ok(Verification { lifted, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{compress, find_vertex_cover};

    fn cg_of(g: &Graph) -> CompressedGraph {
        compress(g, &find_vertex_cover(g, 6).unwrap()).unwrap()
    }

    fn k_mn(m: usize, n: u128) -> CompressedGraph {
        CompressedGraph::new(m, [], [((1u64 << m) - 1, n)]).unwrap()
    }

    fn cr(cg: &CompressedGraph) -> BigUint {
        crossing_number(cg, &SolveOptions::default()).unwrap().crossing_number
    }

    #[test]
    fn complete_bipartite_values() {
        assert_eq!(cr(&k_mn(2, 7)), BigUint::from(0u8));
        assert_eq!(cr(&k_mn(3, 3)), BigUint::from(1u8));
        assert_eq!(cr(&k_mn(3, 5)), BigUint::from(4u8));
        for n in 3..=8u128 {
            assert_eq!(cr(&k_mn(3, n)), BigUint::from((n / 2) * ((n - 1) / 2)), "K3,{n}");
        }
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(cr(&cg_of(&Graph::complete(4))), BigUint::from(0u8));
        assert_eq!(cr(&cg_of(&Graph::complete(5))), BigUint::from(1u8));
    }

    #[test]
    fn initial_budgets() {
        assert_eq!(initial_budget(&k_mn(2, 9)), 0);
        assert_eq!(initial_budget(&CompressedGraph::new(0, [], [(0, 4)]).unwrap()), 0);
        let c = canonical_construction(&k_mn(3, 9)).unwrap();
        assert_eq!(c.representatives().len(), 2);
    }

    #[test]
    fn edgeless_and_disconnected() {
        assert_eq!(cr(&CompressedGraph::new(0, [], [(0, 4)]).unwrap()), BigUint::from(0u8));
        // two disjoint K_{3,3} plus isolated vertices
        let cg = CompressedGraph::new(6, [], [(0b000111, 3), (0b111000, 3), (0, 2)]).unwrap();
        let report = crossing_number(&cg, &SolveOptions::default()).unwrap();
        assert_eq!(report.crossing_number, BigUint::from(2u8));
        assert_eq!(report.components.len(), 2);
        let d = report.lifted(&cg).unwrap();
        assert_eq!(d.graph(), &expand(&cg).unwrap());
        assert_eq!(d.crossing_count(), BigUint::from(2u8));
    }

    #[test]
    fn verify_accepts_and_rejects() {
        let cg = k_mn(3, 3);
        let report = crossing_number(&cg, &SolveOptions::default()).unwrap();
        let v = verify(&report, &cg).unwrap();
        assert_eq!(v.oracle, Some(1));
        assert_eq!(v.lifted, Some(BigUint::from(1u8)));
        let mut tampered = report.clone();
        tampered.crossing_number -= 1u8;
        match verify(&tampered, &cg) {
            Err(Error::Mismatch(m)) => assert_eq!(m, "lift count ≠ reported value"),
            other => panic!("{other:?}"),
        }
        let cg = k_mn(3, 1000);
        let report = crossing_number(&cg, &SolveOptions::default()).unwrap();
        let v = verify(&report, &cg).unwrap();
        assert_eq!(v.oracle, None);
        assert_eq!(v.lifted, Some(BigUint::from(249_500u32)));
    }

    #[test]
    fn budget_cap_is_reported() {
        let opts = SolveOptions { budget_cap: Some(0), ..SolveOptions::default() };
        assert!(matches!(crossing_number(&cg_of(&Graph::complete(6)), &opts), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn reports_are_reproducible() {
        let cg = cg_of(&Graph::complete_bipartite(3, 4));
        let a = crossing_number(&cg, &SolveOptions::default()).unwrap().to_json();
        let b = crossing_number(&cg, &SolveOptions::default()).unwrap().to_json();
        assert_eq!(a, b);
    }
}
