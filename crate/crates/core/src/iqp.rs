//! The quadratic program over the weights of a clustering's representatives.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::drawing::{choose2, zee};
use crate::error::{Error, Result};

/// Representatives sharing one neighbourhood `Y`; their weights sum to `h(Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IqpGroup {
    pub neighborhood: u64,
    /// `|Y|`
    pub degree: usize,
    /// number of representatives
    pub size: usize,
    /// `h(Y)`
    pub target: u128,
}

/// Minimise `zᵀQz + 2pᵀz` over nonnegative integers with fixed group sums.
/// Indices are numbered group by group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IqpInstance {
    groups: Vec<IqpGroup>,
    q: Vec<Vec<u64>>,
    p: Vec<u64>,
    r: u64,
    group_of: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IqpSolution {
    pub z: Vec<u128>,
    #[serde(serialize_with = "crate::ser::big")]
    pub f: BigUint,
    #[serde(serialize_with = "crate::ser::big")]
    pub true_value: BigUint,
}

impl IqpInstance {
    /// `q` holds the full symmetric matrix; its diagonal must be `Z(|Y|)`.
    pub fn new(groups: Vec<IqpGroup>, q: Vec<Vec<u64>>, p: Vec<u64>, r: u64) -> Result<Self> {
        let group_of: Vec<usize> = groups.iter().enumerate().flat_map(|(i, g)| std::iter::repeat_n(i, g.size)).collect();
        let n = group_of.len();
        if p.len() != n || q.len() != n || q.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid(format!("expected {n} indices")));
        }
        for (i, g) in groups.iter().enumerate() {
            if g.size == 0 {
                return Err(Error::Invalid(format!("group {i} is empty")));
            }
        }
        for a in 0..n {
            if q[a][a] != zee(groups[group_of[a]].degree as u64) {
                return Err(Error::Invalid(format!("diagonal entry {a} must be Z of its degree")));
            }
            for b in 0..a {
                if q[a][b] != q[b][a] {
                    return Err(Error::Invalid("Q is not symmetric".into()));
                }
            }
        }
        Ok(IqpInstance { groups, q, p, r, group_of })
    }

    pub fn groups(&self) -> &[IqpGroup] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn q(&self) -> &[Vec<u64>] {
        &self.q
    }

    pub fn p(&self) -> &[u64] {
        &self.p
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn group_of(&self, a: usize) -> usize {
        self.group_of[a]
    }

    fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.groups
            .iter()
            .map(|g| {
                start += g.size;
                start - g.size..start
            })
            .collect()
    }

    pub fn is_feasible(&self, z: &[u128]) -> bool {
        z.len() == self.len() && self.ranges().iter().zip(&self.groups).all(|(r, g)| z[r.clone()].iter().sum::<u128>() == g.target)
    }

    /// `f(z) = zᵀQz + 2pᵀz`
    pub fn objective(&self, z: &[u128]) -> BigUint {
        let mut f = BigUint::zero();
        for a in 0..self.len() {
            if z[a] == 0 {
                continue;
            }
            let za = BigUint::from(z[a]);
            let mut row = BigUint::from(2 * self.p[a]);
            for b in 0..self.len() {
                if self.q[a][b] != 0 && z[b] != 0 {
                    row += BigUint::from(self.q[a][b]) * BigUint::from(z[b]);
                }
            }
            f += za * row;
        }
        f
    }

    /// `r + Σ_{α<β} q z z + pᵀz + Σ C(z_α,2)·Z(|Y|)`: crossings plus the
    /// unavoidable crossings inside clusters.
    pub fn true_value(&self, z: &[u128]) -> BigUint {
        let mut t = BigUint::from(self.r);
        for a in 0..self.len() {
            if z[a] == 0 {
                continue;
            }
            let za = BigUint::from(z[a]);
            t += &za * self.p[a];
            for b in a + 1..self.len() {
                if self.q[a][b] != 0 && z[b] != 0 {
                    t += &za * BigUint::from(z[b]) * self.q[a][b];
                }
            }
            t += choose2(z[a]) * self.q[a][a];
        }
        t
    }

    /// `Σ_i Z(|Y_i|)·h(Y_i)`, the gap in `f = 2(true − r) + Σ Z·h`.
    pub fn objective_offset(&self) -> BigUint {
        self.groups.iter().map(|g| BigUint::from(zee(g.degree as u64)) * g.target).sum()
    }

    /// Text dump: group sizes, degrees, targets, `r`, `p`, then the rows of `Q`.
    pub fn to_text(&self) -> String {
        let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        let _ = writeln!(s, "groups {}", join(&mut self.groups.iter().map(|g| g.size.to_string())));
        let _ = writeln!(s, "neighborhoods {}", join(&mut self.groups.iter().map(|g| g.neighborhood.to_string())));
        let _ = writeln!(s, "degrees {}", join(&mut self.groups.iter().map(|g| g.degree.to_string())));
        let _ = writeln!(s, "h {}", join(&mut self.groups.iter().map(|g| g.target.to_string())));
        let _ = writeln!(s, "r {}", self.r);
        let _ = writeln!(s, "p {}", join(&mut self.p.iter().map(u64::to_string)));
        for row in &self.q {
            let _ = writeln!(s, "q {}", join(&mut row.iter().map(u64::to_string)));
        }
        s
    }
}

/// Default work limit for [`solve_iqp`].
pub const DEFAULT_NODE_CAP: u64 = 5_000_000;

/// Lexicographically least minimiser of `f`.
pub fn solve_iqp(inst: &IqpInstance) -> IqpSolution {
    solve_iqp_capped(inst, u64::MAX).expect("no cap")
}

/// As [`solve_iqp`], failing once more than `node_cap` boxes or points were
/// examined.
pub fn solve_iqp_capped(inst: &IqpInstance, node_cap: u64) -> Result<IqpSolution> {
    solve_with(inst, node_cap, ENUMERATE_BELOW)
}

fn solve_with(inst: &IqpInstance, node_cap: u64, enumerate_below: u128) -> Result<IqpSolution> {
    let mut s = Solver { inst, ranges: inst.ranges(), best: None, work: 0, cap: node_cap, enumerate_below };
    let lo = vec![0u128; inst.len()];
    let hi: Vec<u128> = (0..inst.len()).map(|a| inst.groups[inst.group_of[a]].target).collect();
    s.branch(lo, hi)?;
    let (f, z) = s.best.expect("the feasible set is never empty");
    let true_value = inst.true_value(&z);
    Ok(IqpSolution { z, f, true_value })
}

const ENUMERATE_BELOW: u128 = 4096;

struct Solver<'a> {
    inst: &'a IqpInstance,
    ranges: Vec<std::ops::Range<usize>>,
    best: Option<(BigUint, Vec<u128>)>,
    work: u64,
    cap: u64,
    enumerate_below: u128,
}

impl Solver<'_> {
    fn tick(&mut self, n: u64) -> Result<()> {
        self.work += n;
        if self.work > self.cap {
            return Err(Error::ResourceCap(format!("quadratic program exceeded {} steps", self.cap)));
        }
        Ok(())
    }

    fn offer(&mut self, f: BigUint, z: &[u128]) {
        let better = match &self.best {
            None => true,
            Some((bf, bz)) => f < *bf || (f == *bf && z < &bz[..]),
        };
        if better {
            self.best = Some((f, z.to_vec()));
        }
    }

    /// Shrinks the box using the group sums; false if it is empty.
    fn tighten(&self, lo: &mut [u128], hi: &mut [u128]) -> bool {
        for (r, g) in self.ranges.iter().zip(&self.inst.groups) {
            let sum_lo: u128 = lo[r.clone()].iter().sum();
            let sum_hi: u128 = hi[r.clone()].iter().sum();
            if sum_lo > g.target || sum_hi < g.target {
                return false;
            }
            for a in r.clone() {
                let others_hi = sum_hi - hi[a];
                let others_lo = sum_lo - lo[a];
                lo[a] = lo[a].max(g.target.saturating_sub(others_hi));
                hi[a] = hi[a].min(g.target - others_lo);
            }
        }
        true
    }

    fn branch(&mut self, mut lo: Vec<u128>, mut hi: Vec<u128>) -> Result<()> {
        self.tick(1)?;
        if !self.tighten(&mut lo, &mut hi) {
            return Ok(());
        }
        let (bound, point) = self.relaxation(&lo, &hi);
        let f = self.inst.objective(&point);
        self.offer(f, &point);
        if let Some((bf, bz)) = &self.best {
            let b = BigInt::from(bf.clone());
            if bound > b || (bound == b && lo[..] >= bz[..]) {
                return Ok(());
            }
        }
        let size = lo.iter().zip(&hi).try_fold(1u128, |acc, (l, h)| acc.checked_mul(h - l + 1).filter(|&x| x <= self.enumerate_below));
        if let Some(n) = size {
            self.tick(n as u64)?;
            return self.enumerate(&lo, &hi);
        }
        let a = (0..lo.len()).find(|&a| lo[a] < hi[a]).expect("a box with more than one point");
        let split = if point[a] > lo[a] && point[a] < hi[a] { point[a] } else { lo[a] + (hi[a] - lo[a]) / 2 };
        let split = split.min(hi[a] - 1);
        let mut left_hi = hi.clone();
        left_hi[a] = split;
        self.branch(lo.clone(), left_hi)?;
        let mut right_lo = lo;
        right_lo[a] = split + 1;
        self.branch(right_lo, hi)
    }

    /// Every feasible point of a small box, in lexicographic order.
    fn enumerate(&mut self, lo: &[u128], hi: &[u128]) -> Result<()> {
        let mut z = lo.to_vec();
        let n = z.len();
        loop {
            if self.inst.is_feasible(&z) {
                let f = self.inst.objective(&z);
                self.offer(f, &z);
            }
            let Some(a) = (0..n).rev().find(|&a| z[a] < hi[a]) else {
                return Ok(());
            };
            z[a] += 1;
            z[a + 1..].copy_from_slice(&lo[a + 1..]);
        }
    }

    /// Lower bound on `f` over the box (cross terms underestimated from the
    /// lower corner) and the point attaining the separable part.
    fn relaxation(&self, lo: &[u128], hi: &[u128]) -> (BigInt, Vec<u128>) {
        let inst = self.inst;
        let n = lo.len();
        let mut c = vec![BigInt::zero(); n];
        let mut k = BigInt::zero();
        for a in 0..n {
            c[a] = BigInt::from(2 * inst.p[a]);
            for b in 0..n {
                if a != b && inst.q[a][b] != 0 {
                    c[a] += BigInt::from(2 * inst.q[a][b]) * lo[b];
                    k += BigInt::from(inst.q[a][b]) * lo[a] * lo[b];
                }
            }
        }
        let mut point = lo.to_vec();
        let mut bound = -k;
        for (r, g) in self.ranges.iter().zip(&inst.groups) {
            let zz = BigInt::from(zee(g.degree as u64));
            let rest = g.target - lo[r.clone()].iter().sum::<u128>();
            let count = |a: usize, lambda: &BigInt| -> u128 {
                let span = hi[a] - lo[a];
                if zz.is_zero() {
                    return if c[a] <= *lambda { span } else { 0 };
                }
                // marginal cost of step t: Z(2(lo+t)+1) + c
                let num: BigInt = lambda - &c[a] - &zz * (2 * BigInt::from(lo[a]) + 1);
                if num.is_negative() {
                    return 0;
                }
                let t: BigInt = num / (2 * &zz) + 1;
                t.to_u128().map_or(span, |t| t.min(span))
            };
            let total = |lambda: &BigInt| -> u128 { r.clone().map(|a| count(a, lambda)).sum() };
            if rest > 0 {
                // least λ letting `rest` unit steps through
                let mut low = BigInt::from(-1);
                let mut high = r
                    .clone()
                    .map(|a| &zz * (2 * BigInt::from(hi[a]) + 1) + &c[a])
                    .max()
                    .expect("nonempty group");
                while &high - &low > BigInt::from(1) {
                    let mid: BigInt = (&low + &high) / 2;
                    if total(&mid) >= rest {
                        high = mid;
                    } else {
                        low = mid;
                    }
                }
                let mut left = rest;
                for a in r.clone() {
                    let below = count(a, &low);
                    point[a] += below;
                    left -= below;
                }
                for a in r.clone() {
                    let extra = (count(a, &high) - count(a, &low)).min(left);
                    point[a] += extra;
                    left -= extra;
                }
                debug_assert_eq!(left, 0);
            }
            for a in r.clone() {
                let z = BigInt::from(point[a]);
                bound += &zz * &z * &z + &c[a] * &z;
            }
        }
        (bound, point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn instance(groups: &[(usize, usize, u128)], q_off: &[(usize, usize, u64)], p: Vec<u64>, r: u64) -> IqpInstance {
        let groups: Vec<IqpGroup> =
            groups.iter().enumerate().map(|(i, &(size, degree, target))| IqpGroup { neighborhood: i as u64 + 1, degree, size, target }).collect();
        let n: usize = groups.iter().map(|g| g.size).sum();
        let mut q = vec![vec![0; n]; n];
        let mut a = 0;
        for g in &groups {
            for _ in 0..g.size {
                q[a][a] = zee(g.degree as u64);
                a += 1;
            }
        }
        for &(a, b, v) in q_off {
            q[a][b] = v;
            q[b][a] = v;
        }
        IqpInstance::new(groups, q, p, r).unwrap()
    }

    /// All feasible points in lexicographic order.
    fn feasible_points(inst: &IqpInstance) -> Vec<Vec<u128>> {
        let hi: Vec<u128> = (0..inst.len()).map(|a| inst.groups()[inst.group_of(a)].target).collect();
        let mut out = Vec::new();
        let mut z = vec![0u128; inst.len()];
        loop {
            if inst.is_feasible(&z) {
                out.push(z.clone());
            }
            let Some(a) = (0..z.len()).rev().find(|&a| z[a] < hi[a]) else { break };
            z[a] += 1;
            z[a + 1..].iter_mut().for_each(|x| *x = 0);
        }
        out
    }

    fn brute(inst: &IqpInstance) -> (BigUint, Vec<u128>) {
        feasible_points(inst).into_iter().map(|z| (inst.objective(&z), z)).min().unwrap()
    }

    #[test]
    fn single_point() {
        let inst = instance(&[(1, 3, 3)], &[], vec![0], 0);
        let s = solve_iqp(&inst);
        assert_eq!(s.z, vec![3]);
        assert_eq!(s.f, BigUint::from(9u32));
    }

    #[test]
    fn two_stars_on_three_leaves() {
        let inst = instance(&[(2, 3, 3)], &[], vec![0, 0], 0);
        let s = solve_iqp(&inst);
        assert_eq!(s.z, vec![1, 2]);
        assert_eq!(s.f, BigUint::from(5u32));
        assert_eq!(s.true_value, BigUint::from(1u32));
        assert_eq!(inst.true_value(&[2, 1]), BigUint::from(1u32));
    }

    #[test]
    fn linear_objective() {
        let inst = instance(&[(2, 2, 4)], &[], vec![2, 1], 0);
        let s = solve_iqp(&inst);
        assert_eq!(s.z, vec![0, 4]);
        assert_eq!(s.f, BigUint::from(8u32));
    }

    #[test]
    fn true_value_examples() {
        let n = 1000u128;
        let inst = instance(&[(1, 3, n)], &[], vec![0], 0);
        assert_eq!(inst.true_value(&[n]), BigUint::from(n * (n - 1) / 2));
        let inst = instance(&[(1, 3, 1), (1, 4, 1)], &[], vec![0, 0], 5);
        assert_eq!(inst.true_value(&[1, 1]), BigUint::from(5u32));
    }

    #[test]
    fn large_targets() {
        let n = 1_000_000u128;
        let inst = instance(&[(2, 3, n)], &[], vec![0, 0], 0);
        let s = solve_iqp(&inst);
        assert_eq!(s.z, vec![n / 2, n / 2]);
        assert_eq!(s.true_value, BigUint::from(249_999_500_000u64));
        let n = 10u128.pow(30);
        let inst = instance(&[(2, 3, n), (1, 2, n)], &[(0, 2, 3), (1, 2, 1)], vec![1, 4, 2], 7);
        let s = solve_iqp(&inst);
        assert!(inst.is_feasible(&s.z));
    }

    #[test]
    fn node_cap_is_reported() {
        let inst = instance(&[(3, 4, 100_000)], &[(0, 1, 5), (1, 2, 7)], vec![3, 0, 1], 0);
        assert!(matches!(solve_iqp_capped(&inst, 1), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn dump_format() {
        let inst = instance(&[(2, 3, 3)], &[(0, 1, 2)], vec![1, 0], 4);
        assert_eq!(inst.to_text(), "groups 2\nneighborhoods 1\ndegrees 3\nh 3\nr 4\np 1 0\nq 1 2\nq 2 1\n");
    }

    fn arb_instance(max_total: u128) -> impl Strategy<Value = IqpInstance> {
        prop::collection::vec((1usize..=3, 2usize..=5, 1u128..=max_total), 1..=3)
            .prop_filter("at most six indices", |g| g.iter().map(|x| x.0).sum::<usize>() <= 6)
            .prop_filter("bounded total", move |g| g.iter().map(|x| x.2).sum::<u128>() <= max_total)
            .prop_flat_map(|groups| {
                let n: usize = groups.iter().map(|x| x.0).sum();
                (Just(groups), prop::collection::vec(0u64..4, n * n), prop::collection::vec(0u64..4, n), 0u64..5)
            })
            .prop_map(|(groups, qs, p, r)| {
                let n = p.len();
                let off: Vec<(usize, usize, u64)> =
                    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).map(|(a, b)| (a, b, qs[a * n + b])).collect();
                instance(&groups, &off, p, r)
            })
    }

    proptest! {
        #[test]
        fn solver_matches_enumeration(inst in arb_instance(8)) {
            let (f, z) = brute(&inst);
            let s = solve_iqp(&inst);
            prop_assert_eq!(s.f, f);
            prop_assert_eq!(s.z, z);
        }

        #[test]
        fn branching_matches_enumeration(inst in arb_instance(24)) {
            let (f, z) = brute(&inst);
            let s = solve_with(&inst, u64::MAX, 1).unwrap();
            prop_assert_eq!(s.f, f);
            prop_assert_eq!(s.z, z);
        }

        #[test]
        fn objective_and_true_value_differ_by_a_constant(inst in arb_instance(6)) {
            let offset = inst.objective_offset();
            let r = BigUint::from(inst.r());
            for z in feasible_points(&inst) {
                let f = inst.objective(&z);
                let t = inst.true_value(&z);
                prop_assert_eq!(f, (t - &r) * 2u32 + &offset);
            }
        }

        #[test]
        fn permuting_a_group_keeps_the_optimum(inst in arb_instance(8)) {
            // reverse the indices of the first group
            let g = inst.groups()[0].size;
            let n = inst.len();
            let perm: Vec<usize> = (0..n).map(|a| if a < g { g - 1 - a } else { a }).collect();
            let q = (0..n).map(|a| (0..n).map(|b| inst.q()[perm[a]][perm[b]]).collect()).collect();
            let p = (0..n).map(|a| inst.p()[perm[a]]).collect();
            let other = IqpInstance::new(inst.groups().to_vec(), q, p, inst.r()).unwrap();
            prop_assert_eq!(solve_iqp(&inst).f, solve_iqp(&other).f);
        }
    }
}
