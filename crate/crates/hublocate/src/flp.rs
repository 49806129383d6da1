//! Facility location solvers: greedy heuristics and an exact enumerator.
//!
//! Solvers are written against a small problem trait so they run on the
//! reduced instances as well as on hand-built tables in tests. Every tie
//! in an argmin is broken towards the lowest index, which makes all
//! solvers deterministic and their results independent of evaluation
//! order. Every returned solution assigns each city to its nearest open
//! facility.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::reduction::FlpInstance;

/// The facility location view a solver needs.
pub trait FlpProblem: Sync {
    fn n_cities(&self) -> usize;
    fn n_facilities(&self) -> usize;
    /// City-to-facility distance.
    fn gamma(&self, city: usize, facility: usize) -> f64;
    /// Cardinality bound, when the variant has one.
    fn k(&self) -> Option<usize> {
        None
    }
    /// Per-facility set-up costs, when the variant has them.
    fn setup(&self) -> Option<&[f64]> {
        None
    }
}

impl FlpProblem for FlpInstance<'_> {
    fn n_cities(&self) -> usize {
        FlpInstance::n_cities(self)
    }

    fn n_facilities(&self) -> usize {
        FlpInstance::n_facilities(self)
    }

    fn gamma(&self, city: usize, facility: usize) -> f64 {
        self.city_facility(city, facility)
    }

    fn k(&self) -> Option<usize> {
        FlpInstance::k(self)
    }

    fn setup(&self) -> Option<&[f64]> {
        FlpInstance::setup(self)
    }
}

/// Which solver to run on a reduced instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlpSolverKind {
    GreedyKMedian,
    GreedyUflp,
    GreedyKFlp,
    ExactEnumeration,
}

impl FlpSolverKind {
    /// The greedy matching a variant's parameters.
    pub fn greedy_for(k: Option<usize>, has_setup: bool) -> FlpSolverKind {
        match (k, has_setup) {
            (Some(_), false) => FlpSolverKind::GreedyKMedian,
            (None, _) => FlpSolverKind::GreedyUflp,
            (Some(_), true) => FlpSolverKind::GreedyKFlp,
        }
    }
}

/// Per-iteration selection criterion of the k-median greedy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GreedyObjective {
    /// Open the facility that most reduces the summed assignment cost.
    #[default]
    Total,
    /// Open the facility that most reduces the maximum assignment cost.
    Max,
}

/// A facility location solution.
#[derive(Debug, Clone, PartialEq)]
pub struct FlpSolution {
    /// Sorted open facility indices.
    pub open_facilities: Vec<usize>,
    /// Per-city open facility index (nearest, lowest index on ties).
    pub assignment: Vec<usize>,
    pub connection_cost: f64,
    pub setup_cost: f64,
    pub objective: f64,
}

impl FlpSolution {
    fn from_open_set(problem: &impl FlpProblem, mut open: Vec<usize>) -> FlpSolution {
        open.sort_unstable();
        open.dedup();
        let (assignment, connection_cost) = assign_nearest(problem, &open);
        let setup_cost = open_setup_cost(problem, &open);
        FlpSolution {
            open_facilities: open,
            assignment,
            connection_cost,
            setup_cost,
            objective: connection_cost + setup_cost,
        }
    }

    /// Recomputes the objective from the open set and assignment.
    pub fn recompute_objective(&self, problem: &impl FlpProblem) -> f64 {
        let connection: f64 = (0..problem.n_cities())
            .map(|c| problem.gamma(c, self.assignment[c]))
            .sum();
        connection + open_setup_cost(problem, &self.open_facilities)
    }
}

fn open_setup_cost(problem: &impl FlpProblem, open: &[usize]) -> f64 {
    match problem.setup() {
        None => 0.0,
        Some(setup) => open.iter().map(|&f| setup[f]).sum(),
    }
}

fn assign_nearest(problem: &impl FlpProblem, open: &[usize]) -> (Vec<usize>, f64) {
    let mut assignment = Vec::with_capacity(problem.n_cities());
    let mut total = 0.0;
    for c in 0..problem.n_cities() {
        let mut best_f = usize::MAX;
        let mut best_d = f64::INFINITY;
        for &f in open {
            let d = problem.gamma(c, f);
            if d < best_d {
                best_d = d;
                best_f = f;
            }
        }
        assert!(best_f != usize::MAX, "no open facility to assign to");
        assignment.push(best_f);
        total += best_d;
    }
    (assignment, total)
}

fn require_k(problem: &impl FlpProblem) -> Result<usize> {
    let k = problem
        .k()
        .ok_or(Error::SolverRequirement("a facility cardinality bound k"))?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > problem.n_facilities() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the {} available facilities",
            problem.n_facilities()
        )));
    }
    Ok(k)
}

/// Greedy k-median: starts from the empty set and performs exactly `k`
/// iterations, each opening the facility with the best improvement under
/// the chosen criterion.
pub fn greedy_k_median(problem: &impl FlpProblem) -> Result<FlpSolution> {
    greedy_k_median_with(problem, GreedyObjective::Total)
}

pub fn greedy_k_median_with(
    problem: &impl FlpProblem,
    objective: GreedyObjective,
) -> Result<FlpSolution> {
    let k = require_k(problem)?;
    let open = greedy_cardinality_rounds(problem, k, objective, false);
    Ok(FlpSolution::from_open_set(problem, open))
}

/// Shared k-round greedy; `charge_setup` additionally charges a candidate's
/// set-up cost when comparing improvements (used by the k-FLP fallback).
fn greedy_cardinality_rounds(
    problem: &impl FlpProblem,
    k: usize,
    objective: GreedyObjective,
    charge_setup: bool,
) -> Vec<usize> {
    let n_c = problem.n_cities();
    let n_f = problem.n_facilities();
    let setup = problem.setup();
    let mut nearest = vec![f64::INFINITY; n_c];
    let mut is_open = vec![false; n_f];
    let mut open = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best_f = usize::MAX;
        let mut best_score = f64::INFINITY;
        for f in 0..n_f {
            if is_open[f] {
                continue;
            }
            let mut score = match objective {
                GreedyObjective::Total => {
                    let mut total = 0.0;
                    for c in 0..n_c {
                        total += nearest[c].min(problem.gamma(c, f));
                    }
                    total
                }
                GreedyObjective::Max => {
                    let mut worst = 0.0_f64;
                    for c in 0..n_c {
                        worst = worst.max(nearest[c].min(problem.gamma(c, f)));
                    }
                    worst
                }
            };
            if charge_setup {
                score += setup.map_or(0.0, |s| s[f]);
            }
            if score < best_score {
                best_score = score;
                best_f = f;
            }
        }
        debug_assert!(best_f != usize::MAX);
        is_open[best_f] = true;
        open.push(best_f);
        for c in 0..n_c {
            let d = problem.gamma(c, best_f);
            if d < nearest[c] {
                nearest[c] = d;
            }
        }
    }
    open
}

/// Greedy set-cover style heuristic for the uncapacitated problem: each
/// round covers the uncovered-city set with the best cost-per-city ratio
/// `(c_f + sum of distances) / |covered|`; reopening a facility is free.
pub fn greedy_uflp(problem: &impl FlpProblem) -> Result<FlpSolution> {
    let setup = problem
        .setup()
        .ok_or(Error::SolverRequirement("facility set-up costs"))?;
    let n_c = problem.n_cities();
    let n_f = problem.n_facilities();
    if n_c == 0 {
        return Ok(FlpSolution {
            open_facilities: Vec::new(),
            assignment: Vec::new(),
            connection_cost: 0.0,
            setup_cost: 0.0,
            objective: 0.0,
        });
    }
    if n_f == 0 {
        return Err(Error::InvalidArgument("no facilities".into()));
    }

    // Distances sorted per facility once; the optimal covered set for a
    // fixed facility is always a prefix of the uncovered cities in this
    // order, so each round only scans cached values.
    let by_distance: Vec<Vec<(f64, u32)>> = (0..n_f)
        .map(|f| {
            let mut order: Vec<(f64, u32)> = (0..n_c as u32)
                .map(|c| (problem.gamma(c as usize, f), c))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            order
        })
        .collect();

    let mut covered = vec![false; n_c];
    let mut uncovered = n_c;
    let mut is_open = vec![false; n_f];
    let mut open = Vec::new();
    while uncovered > 0 {
        let mut best: Option<(f64, usize, usize)> = None; // (ratio, facility, take)
        for f in 0..n_f {
            let open_cost = if is_open[f] { 0.0 } else { setup[f] };
            let mut sum = open_cost;
            let mut taken = 0usize;
            let mut f_best: Option<(f64, usize)> = None;
            for &(g, c) in &by_distance[f] {
                if covered[c as usize] {
                    continue;
                }
                sum += g;
                taken += 1;
                let ratio = sum / taken as f64;
                // prefer the longest prefix among equal ratios
                let improves = match f_best {
                    None => true,
                    Some((r, t)) => ratio < r || (ratio == r && taken > t),
                };
                if improves {
                    f_best = Some((ratio, taken));
                }
            }
            if let Some((ratio, taken)) = f_best {
                let improves = match best {
                    None => true,
                    Some((r, _, _)) => ratio < r,
                };
                if improves {
                    best = Some((ratio, f, taken));
                }
            }
        }
        let (_, f, take) = best.expect("uncovered cities but no candidate");
        if !is_open[f] {
            is_open[f] = true;
            open.push(f);
        }
        let mut taken = 0;
        for &(_, c) in &by_distance[f] {
            if taken == take {
                break;
            }
            if !covered[c as usize] {
                covered[c as usize] = true;
                taken += 1;
                uncovered -= 1;
            }
        }
    }
    Ok(FlpSolution::from_open_set(problem, open))
}

/// Heuristic for instances with both a cardinality bound and set-up costs:
/// the set-cover greedy when it stays within `k`, otherwise `k` rounds of
/// the cardinality greedy with set-up costs charged per opening.
pub fn greedy_k_flp(problem: &impl FlpProblem) -> Result<FlpSolution> {
    let k = require_k(problem)?;
    if problem.setup().is_none() {
        return Err(Error::SolverRequirement("facility set-up costs"));
    }
    let unconstrained = greedy_uflp(problem)?;
    if unconstrained.open_facilities.len() <= k && !unconstrained.open_facilities.is_empty() {
        return Ok(unconstrained);
    }
    if unconstrained.open_facilities.is_empty() {
        // no cities; an empty open set is feasible for any k
        return Ok(unconstrained);
    }
    let open = greedy_cardinality_rounds(problem, k, GreedyObjective::Total, true);
    Ok(FlpSolution::from_open_set(problem, open))
}

/// Default facility enumeration limit for [`exact_flp`].
pub const EXACT_FLP_LIMIT: usize = 20;

/// Exact solver by enumeration of open-facility subsets. Ties are broken
/// towards the lexicographically smallest open set.
pub fn exact_flp(problem: &impl FlpProblem, limit: usize) -> Result<FlpSolution> {
    let n_f = problem.n_facilities();
    if n_f == 0 {
        return Err(Error::InvalidArgument("no facilities".into()));
    }
    if n_f > limit {
        return Err(Error::EnumerationLimit {
            what: "facility",
            count: n_f,
            limit,
        });
    }
    let k = problem.k();
    let n_c = problem.n_cities();
    // the empty set is feasible only when there is nothing to serve
    let first_mask: u64 = if n_c == 0 { 0 } else { 1 };
    let best = (first_mask..(1u64 << n_f))
        .into_par_iter()
        .filter(|mask| match k {
            Some(k) => (mask.count_ones() as usize) <= k,
            None => true,
        })
        .filter(|&mask| mask != 0 || n_c == 0)
        .map(|mask| {
            let open: Vec<usize> = (0..n_f).filter(|f| mask >> f & 1 == 1).collect();
            let mut cost = open_setup_cost(problem, &open);
            for c in 0..n_c {
                let mut nearest = f64::INFINITY;
                for &f in &open {
                    nearest = nearest.min(problem.gamma(c, f));
                }
                cost += nearest;
            }
            (cost, open)
        })
        .reduce_with(|a, b| {
            // total order: objective, then lexicographic open set
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        });
    let (_, open) = best.ok_or_else(|| Error::InvalidArgument("no feasible subset".into()))?;
    Ok(FlpSolution::from_open_set(problem, open))
}

/// Runs the requested solver on a reduced instance.
pub fn solve_flp(
    flp: &FlpInstance<'_>,
    kind: FlpSolverKind,
    objective: GreedyObjective,
    exact_limit: usize,
) -> Result<FlpSolution> {
    match kind {
        FlpSolverKind::GreedyKMedian => greedy_k_median_with(flp, objective),
        FlpSolverKind::GreedyUflp => greedy_uflp(flp),
        FlpSolverKind::GreedyKFlp => greedy_k_flp(flp),
        FlpSolverKind::ExactEnumeration => exact_flp(flp, exact_limit),
    }
}
