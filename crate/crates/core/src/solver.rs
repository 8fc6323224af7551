//! Branch-and-prune subdivision over dyadic boxes.
//!
//! Each box `D_{l,k'}` carries the system matrix `w` (one Bernstein column per
//! polynomial) of the system restricted to it. A box survives when
//! `max(w_1) >= theta` and `max(w_i) >= 0` for every constraint; survivors are
//! halved along the axis with the largest remaining exponent until they become
//! unit leaves, whose lower corner is then tested exactly through the first
//! coefficient of each column.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{MultiDegree, MultiIndex};
use crate::problem::{initial_system, CanonicalProblem, SystemMatrix};
use crate::rational::{Integer, Rational, Theta};
use crate::subdivision::{widest_axis, Side, SubdivisionBasis};

/// Scalar type of every quantity compared during pruning and leaf tests.
pub type Scalar = Rational;

/// Which child of a split is explored first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Traversal {
    #[default]
    LeftFirst,
    RightFirst,
}

#[derive(Debug, Clone, Default)]
pub struct SolverConfig {
    pub traversal: Traversal,
    /// Record one [`TraceRecord`] per visited box.
    pub trace: bool,
    /// Precomputed halving matrices; built from the degree when absent.
    pub basis: Option<Arc<SubdivisionBasis>>,
}

impl SolverConfig {
    pub fn traced() -> Self {
        SolverConfig { trace: true, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Counters {
    /// Boxes materialized, the root included.
    pub boxes_created: u64,
    /// Boxes that passed the bound test.
    pub step1_passes: u64,
    /// Unit leaves whose lower corner was tested.
    pub leaf_tests: u64,
    /// Boxes that failed the bound test.
    pub rejections: u64,
}

impl Counters {
    fn merge(&mut self, other: &Counters) {
        self.boxes_created += other.boxes_created;
        self.step1_passes += other.step1_passes;
        self.leaf_tests += other.leaf_tests;
        self.rejections += other.rejections;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Reject,
    Split,
    LeafAccept,
    LeafReject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub l: Vec<u64>,
    pub k_prime: Vec<u32>,
    pub decision: Decision,
}

impl TraceRecord {
    /// Generation of the box: `K - sum k'`.
    pub fn generation(&self, total_exponent: u64) -> u64 {
        total_exponent - self.k_prime.iter().map(|&k| k as u64).sum::<u64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    /// Optimum in the user's objective scale; `None` when infeasible.
    pub theta: Option<Rational>,
    /// Optimum of the internal objective `q_1`.
    pub internal_theta: Theta,
    pub solutions: BTreeSet<Vec<Integer>>,
    pub counters: Counters,
    pub trace: Vec<TraceRecord>,
    /// Successive values of the internal incumbent, strictly increasing.
    pub incumbents: Vec<Rational>,
}

/// Solves a canonical problem with Bernstein bases of multi-degree `d`.
///
/// Leaves whose lower corner lies outside the user's box (padding) are never
/// accepted. Every reported solution is re-checked against the monomial forms.
pub fn solve(cp: &CanonicalProblem, d: &MultiDegree, config: &SolverConfig) -> Result<SolveOutcome> {
    let system = initial_system(cp, d)?;
    let basis = resolve_basis(config, d)?;
    let mut search = Search::new(&basis, &cp.anchor, Some(&cp.user_upper), config.trace);
    search.run(root_frame(system, &cp.exponents), config.traversal, None);
    let mut outcome = search.finish();
    if let Some(t) = outcome.internal_theta.finite() {
        outcome.theta = Some(cp.theta_transform.to_user(t));
    }
    verify(cp, &outcome)?;
    Ok(outcome)
}

/// Runs the subdivision on `v` over `prod [a_i, a_i + 2^k_i]` with no upper-face
/// filtering: the candidates are exactly the `2^K` leaf lower corners.
pub fn solve_raw(anchor: &[Integer], k: &MultiIndex, v: &SystemMatrix, config: &SolverConfig) -> Result<SolveOutcome> {
    v.degree().check_nvars(anchor.len())?;
    v.degree().check_nvars(k.len())?;
    let basis = resolve_basis(config, v.degree())?;
    let mut search = Search::new(&basis, anchor, None, config.trace);
    search.run(root_frame(v.clone(), k), config.traversal, None);
    let mut outcome = search.finish();
    outcome.theta = outcome.internal_theta.finite().cloned();
    Ok(outcome)
}

/// Parallel variant of [`solve`]. Subtrees are explored by `threads` workers
/// sharing the incumbent through a monotone cell; pruning against a stale
/// (lower) incumbent is sound, so `(theta, S)` equals the sequential answer
/// while counters may differ between runs.
pub fn solve_parallel(cp: &CanonicalProblem, d: &MultiDegree, config: &SolverConfig, threads: usize) -> Result<SolveOutcome> {
    let threads = threads.max(1);
    let system = initial_system(cp, d)?;
    let basis = resolve_basis(config, d)?;
    let shared = SharedTheta::default();

    // Breadth-first seeding until there is enough independent work.
    let mut seed = Search::new(&basis, &cp.anchor, Some(&cp.user_upper), config.trace);
    let mut frontier = vec![root_frame(system, &cp.exponents)];
    seed.counters.boxes_created = 1;
    while !frontier.is_empty() && frontier.len() < threads * 8 {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for frame in frontier {
            if let Some((left, right)) = seed.step(frame, Some(&shared)) {
                next.push(left);
                next.push(right);
            }
        }
        frontier = next;
    }
    if config.traversal == Traversal::LeftFirst {
        frontier.reverse();
    }
    let queue = Mutex::new(frontier);

    let results: Vec<Search> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                scope.spawn(|| {
                    let mut worker = Search::new(&basis, &cp.anchor, Some(&cp.user_upper), config.trace);
                    loop {
                        let next = queue.lock().unwrap_or_else(|e| e.into_inner()).pop();
                        match next {
                            Some(frame) => worker.run(frame, config.traversal, Some(&shared)),
                            None => break,
                        }
                    }
                    worker
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver worker panicked")).collect()
    });

    let final_theta = shared.get();
    let history = std::mem::take(&mut *shared.history.lock().unwrap_or_else(|e| e.into_inner()));
    let mut merged = seed;
    for w in results {
        merged.counters.merge(&w.counters);
        merged.trace.extend(w.trace);
        merged.candidates.extend(w.candidates);
    }
    merged.theta = final_theta;
    merged.incumbents = history;
    let mut outcome = merged.finish();
    if let Some(t) = outcome.internal_theta.finite() {
        outcome.theta = Some(cp.theta_transform.to_user(t));
    }
    verify(cp, &outcome)?;
    Ok(outcome)
}

/// Number of unit boxes `D_{l,0}` of the box `prod [a_i, a_i + 2^k_i]` whose
/// coefficients pass the bound test against the fixed incumbent `theta`.
///
/// Halving matrices are stochastic, so a box failing the test has no passing
/// descendant and the count can be taken on the pruned tree.
pub fn surviving_unit_boxes(v: &SystemMatrix, k: &MultiIndex, theta: &Theta, basis: Option<&SubdivisionBasis>) -> Result<u64> {
    v.degree().check_nvars(k.len())?;
    let owned;
    let basis = match basis {
        Some(b) => b,
        None => {
            owned = SubdivisionBasis::new(v.degree());
            &owned
        }
    };
    let mut count = 0u64;
    let mut stack = vec![root_frame(v.clone(), k)];
    while let Some(frame) = stack.pop() {
        if !passes_bounds(&frame.columns, theta) {
            continue;
        }
        match widest_axis(&frame.sub_scale) {
            Some(axis) => {
                let (l, r) = split(basis, frame, axis);
                stack.push(r);
                stack.push(l);
            }
            None => count += 1,
        }
    }
    Ok(count)
}

fn resolve_basis(config: &SolverConfig, d: &MultiDegree) -> Result<Arc<SubdivisionBasis>> {
    match &config.basis {
        Some(b) if b.degree() == d => Ok(b.clone()),
        Some(b) => Err(Error::DegreeMismatch { left: b.degree().as_slice().to_vec(), right: d.as_slice().to_vec() }),
        None => Ok(Arc::new(SubdivisionBasis::new(d))),
    }
}

fn verify(cp: &CanonicalProblem, outcome: &SolveOutcome) -> Result<()> {
    for z in &outcome.solutions {
        let ok =
            cp.is_feasible(z)? && outcome.internal_theta.finite().is_some_and(|t| cp.objective().eval_integer(z).is_ok_and(|v| &v == t));
        assert!(ok, "solver reported a point that fails exact re-evaluation: {z:?}");
    }
    Ok(())
}

struct Frame {
    columns: Vec<Vec<Rational>>,
    offset: Vec<u64>,
    sub_scale: Vec<u32>,
}

fn root_frame(v: SystemMatrix, k: &MultiIndex) -> Frame {
    let n = k.len();
    Frame { columns: v.into_columns().into_iter().map(|c| c.into_coeffs()).collect(), offset: vec![0; n], sub_scale: k.as_slice().to_vec() }
}

fn passes_bounds(columns: &[Vec<Rational>], theta: &Theta) -> bool {
    let Some((objective, constraints)) = columns.split_first() else {
        return true;
    };
    let max_of = |c: &[Rational]| c.iter().max().cloned();
    if let Some(m) = max_of(objective) {
        if !theta.admits(&m) {
            return false;
        }
    }
    constraints.iter().all(|c| c.iter().any(|v| !v.is_negative()))
}

fn split(basis: &SubdivisionBasis, frame: Frame, axis: usize) -> (Frame, Frame) {
    let mut left_off = frame.offset.clone();
    left_off[axis] *= 2;
    let mut right_off = left_off.clone();
    right_off[axis] += 1;
    let mut ks = frame.sub_scale;
    ks[axis] -= 1;
    let halve = |side| frame.columns.iter().map(|c| basis.apply_half_coeffs(c, axis, side)).collect();
    (
        Frame { columns: halve(Side::Left), offset: left_off, sub_scale: ks.clone() },
        Frame { columns: halve(Side::Right), offset: right_off, sub_scale: ks },
    )
}

/// Incumbent shared between workers. Only ever increases.
#[derive(Default)]
struct SharedTheta {
    value: Mutex<Theta>,
    version: AtomicU64,
    history: Mutex<Vec<Rational>>,
}

impl SharedTheta {
    fn get(&self) -> Theta {
        self.value.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    fn raise(&self, candidate: &Theta) {
        let mut v = self.value.lock().unwrap_or_else(|e| e.into_inner());
        if *candidate > *v {
            *v = candidate.clone();
            if let Some(t) = candidate.finite() {
                self.history.lock().unwrap_or_else(|e| e.into_inner()).push(t.clone());
            }
            self.version.fetch_add(1, Ordering::Release);
        }
    }
}

struct Search<'a> {
    basis: &'a SubdivisionBasis,
    anchor: &'a [Integer],
    user_upper: Option<&'a [Integer]>,
    theta: Theta,
    seen_version: u64,
    // lattice point -> internal objective value; entries below `theta` are dropped
    candidates: BTreeMap<Vec<Integer>, Rational>,
    counters: Counters,
    record: bool,
    trace: Vec<TraceRecord>,
    incumbents: Vec<Rational>,
}

impl<'a> Search<'a> {
    fn new(basis: &'a SubdivisionBasis, anchor: &'a [Integer], user_upper: Option<&'a [Integer]>, record: bool) -> Self {
        Search {
            basis,
            anchor,
            user_upper: user_upper.map(|u| u as &[Integer]),
            theta: Theta::NegInfinity,
            seen_version: 0,
            candidates: BTreeMap::new(),
            counters: Counters::default(),
            record,
            trace: Vec::new(),
            incumbents: Vec::new(),
        }
    }

    fn run(&mut self, root: Frame, order: Traversal, shared: Option<&SharedTheta>) {
        if shared.is_none() {
            self.counters.boxes_created += 1;
        }
        let mut stack = vec![root];
        while let Some(frame) = stack.pop() {
            if let Some((left, right)) = self.step(frame, shared) {
                match order {
                    Traversal::LeftFirst => {
                        stack.push(right);
                        stack.push(left);
                    }
                    Traversal::RightFirst => {
                        stack.push(left);
                        stack.push(right);
                    }
                }
            }
        }
    }

    /// Processes one box; returns its children when it is split.
    fn step(&mut self, frame: Frame, shared: Option<&SharedTheta>) -> Option<(Frame, Frame)> {
        if let Some(cell) = shared {
            let v = cell.version.load(Ordering::Acquire);
            if v != self.seen_version {
                self.seen_version = v;
                let global = cell.get();
                if global > self.theta {
                    self.raise_theta(global);
                }
            }
        }

        if !passes_bounds(&frame.columns, &self.theta) {
            self.counters.rejections += 1;
            self.log(&frame, Decision::Reject);
            return None;
        }
        self.counters.step1_passes += 1;

        if let Some(axis) = widest_axis(&frame.sub_scale) {
            self.counters.boxes_created += 2;
            self.log(&frame, Decision::Split);
            return Some(split(self.basis, frame, axis));
        }

        self.counters.leaf_tests += 1;
        let z: Vec<Integer> = self.anchor.iter().zip(&frame.offset).map(|(a, &l)| a + BigInt::from(l)).collect();
        let value = frame.columns.first().map(|c| c[0].clone()).unwrap_or_default();
        let inside = self.user_upper.is_none_or(|upper| z.iter().zip(upper).all(|(zi, ui)| zi <= ui));
        let feasible = frame.columns.iter().skip(1).all(|c| !c[0].is_negative());
        if inside && feasible && self.theta.admits(&value) {
            if self.theta.compare(&value).is_lt() {
                self.raise_theta(Theta::Finite(value.clone()));
                if shared.is_none() {
                    self.incumbents.push(value.clone());
                }
                if let Some(cell) = shared {
                    cell.raise(&self.theta);
                }
            }
            self.candidates.insert(z, value);
            self.log(&frame, Decision::LeafAccept);
        } else {
            self.log(&frame, Decision::LeafReject);
        }
        None
    }

    fn raise_theta(&mut self, theta: Theta) {
        self.theta = theta;
        let t = &self.theta;
        self.candidates.retain(|_, v| t.admits(v));
    }

    fn log(&mut self, frame: &Frame, decision: Decision) {
        if self.record {
            self.trace.push(TraceRecord { l: frame.offset.clone(), k_prime: frame.sub_scale.clone(), decision });
        }
    }

    fn finish(self) -> SolveOutcome {
        let theta = self.theta;
        let solutions: BTreeSet<Vec<Integer>> =
            self.candidates.into_iter().filter(|(_, v)| theta.finite() == Some(v)).map(|(z, _)| z).collect();
        let status = if solutions.is_empty() { Status::Infeasible } else { Status::Optimal };
        SolveOutcome {
            status,
            theta: None,
            internal_theta: theta,
            solutions,
            counters: self.counters,
            trace: self.trace,
            incumbents: self.incumbents,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialPoly;
    use crate::problem::{canonicalize, system_for_box, Direction, Relation, UserProblem, VarBounds};
    use crate::rational::int;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn xy() -> (MonomialPoly, MonomialPoly) {
        (MonomialPoly::var(2, 0), MonomialPoly::var(2, 1))
    }

    fn raw(q: Vec<MonomialPoly>, anchor: &[i64], k: &[u32], d: &[u32]) -> SolveOutcome {
        let anchor = ints(anchor);
        let k = MultiIndex::new(k.to_vec());
        let v = system_for_box(&q, &anchor, &k, &MultiDegree::new(d.to_vec())).unwrap();
        solve_raw(&anchor, &k, &v, &SolverConfig::traced()).unwrap()
    }

    #[test]
    fn diagonal_on_raw_box() {
        let (x, y) = xy();
        let out = raw(vec![MonomialPoly::zero(2), &y - &x, &x - &y], &[0, 0], &[1, 1], &[1, 1]);
        assert_eq!(out.counters.step1_passes, 7);
        assert_eq!(out.solutions, [ints(&[0, 0]), ints(&[1, 1])].into_iter().collect());
        assert_eq!(out.theta, Some(int(0)));
    }

    #[test]
    fn parabola_on_raw_box() {
        let (x, y) = xy();
        let q = &y - &x.pow(2);
        let out = raw(vec![MonomialPoly::zero(2), q.clone(), -&q], &[0, 0], &[3, 3], &[2, 1]);
        assert_eq!(out.counters.step1_passes, 33);
        assert_eq!(out.solutions, [ints(&[0, 0]), ints(&[1, 1]), ints(&[2, 4])].into_iter().collect());
    }

    #[test]
    fn single_leaf() {
        let x = MonomialPoly::var(1, 0);
        let obj = x.scale(&int(3));
        let ok = raw(vec![obj.clone(), &x - &MonomialPoly::constant(1, int(4))], &[5], &[0], &[1]);
        assert_eq!(ok.solutions, [ints(&[5])].into_iter().collect());
        assert_eq!(ok.theta, Some(int(15)));
        let bad = raw(vec![obj, &x - &MonomialPoly::constant(1, int(6))], &[5], &[0], &[1]);
        assert_eq!(bad.status, Status::Infeasible);
    }

    #[test]
    fn infeasible_root() {
        let out = raw(vec![MonomialPoly::zero(2), MonomialPoly::constant(2, int(-1))], &[0, 0], &[3, 3], &[0, 0]);
        assert_eq!(out.status, Status::Infeasible);
        assert_eq!(out.theta, None);
        assert_eq!(out.counters.boxes_created, 1);
        assert_eq!(out.counters.rejections, 1);
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].decision, Decision::Reject);
    }

    #[test]
    fn maximize_on_parabola() {
        let (x, y) = xy();
        let up = UserProblem::feasibility(vec!["x".into(), "y".into()], vec![VarBounds::closed(0, 8), VarBounds::closed(0, 8)])
            .with_objective(Direction::Maximize, &x + &y)
            .with_constraint(y.clone(), Relation::Eq, x.pow(2));
        let cp = canonicalize(&up).unwrap();
        let out = solve(&cp, &cp.default_degree(), &SolverConfig::default()).unwrap();
        assert_eq!(out.theta, Some(int(6)));
        assert_eq!(out.solutions, [ints(&[2, 4])].into_iter().collect());
        let par = solve_parallel(&cp, &cp.default_degree(), &SolverConfig::default(), 4).unwrap();
        assert_eq!((par.theta, par.solutions), (out.theta, out.solutions));
    }

    #[test]
    fn counter_identity_and_trace() {
        let (x, y) = xy();
        let q = &y - &x.pow(2);
        let out = raw(vec![&x + &y, q.clone(), -&q], &[0, 0], &[3, 3], &[2, 1]);
        let split_count = out.trace.iter().filter(|t| t.decision == Decision::Split).count() as u64;
        assert_eq!(out.counters.boxes_created, 1 + 2 * split_count);
        assert_eq!(out.trace.len() as u64, out.counters.boxes_created);
        assert_eq!(out.counters.step1_passes + out.counters.rejections, out.counters.boxes_created);
    }

    #[test]
    fn padding_filters_upper_face_points() {
        // x in [0, 2]: padded to [0, 4); the leaf at 3 must never be accepted
        let x = MonomialPoly::var(1, 0);
        let up = UserProblem::feasibility(vec!["x".into()], vec![VarBounds::closed(0, 2)]).with_objective(Direction::Maximize, x.clone());
        let cp = canonicalize(&up).unwrap();
        let out = solve(&cp, &cp.default_degree(), &SolverConfig::default()).unwrap();
        assert_eq!(out.solutions, [ints(&[2])].into_iter().collect());
        assert_eq!(out.theta, Some(int(2)));
    }

    #[test]
    fn basis_degree_must_match() {
        let x = MonomialPoly::var(1, 0);
        let up = UserProblem::feasibility(vec!["x".into()], vec![VarBounds::closed(0, 3)]).with_objective(Direction::Maximize, x);
        let cp = canonicalize(&up).unwrap();
        let config = SolverConfig { basis: Some(Arc::new(SubdivisionBasis::new(&MultiDegree::new(vec![2])))), ..Default::default() };
        assert!(solve(&cp, &MultiDegree::new(vec![1]), &config).is_err());
        assert!(solve(&cp, &MultiDegree::new(vec![2]), &config).is_ok());
    }
}
