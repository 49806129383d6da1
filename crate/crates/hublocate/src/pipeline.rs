//! End-to-end solvers: reduce, solve the facility location instance, open
//! the matching hubs and route every task optimally over the open set.
//!
//! The two fixed routing strategies used by the guarantee analysis are
//! also exposed; optimal routing never costs more than either, so any
//! bound for a specific strategy holds for the pipeline as a whole.

use crate::error::{Error, Result};
use crate::flp::{solve_flp, FlpSolution, FlpSolverKind, GreedyObjective, EXACT_FLP_LIMIT};
use crate::model::{HlpInstance, HlpSolution, VertexId};
use crate::reduction::{
    build_bap, build_pa, default_midpoint_mode, FlpInstance, MidpointMode, ReductionKind,
};

/// How tours are derived from a facility location solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoutingStrategy {
    /// Best hub pair per task over the whole open set.
    Optimal,
    /// Both assigned hubs: `B1 -> H1 -> H2 -> B2`.
    Strategy1,
    /// The cheaper-side assigned hub alone: `B1 -> H -> B2`.
    Strategy2,
}

/// Tours for every task plus their summed cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Routing {
    pub tours: Vec<(VertexId, VertexId)>,
    pub transport_cost: f64,
}

/// Optimal multi-allocation routing over a fixed set of open hubs.
///
/// Costs are shared through a per-origin table `f_b(h') = min_h d(b,h) +
/// alpha * d(h,h')`, so the work per task is linear in the open set. Ties
/// resolve to the lexicographically smallest `(h, h')` pair.
pub fn route_optimal(inst: &HlpInstance, open_hubs: &[VertexId]) -> Result<Routing> {
    if inst.tasks.is_empty() {
        return Ok(Routing {
            tours: Vec::new(),
            transport_cost: 0.0,
        });
    }
    let mut open: Vec<VertexId> = open_hubs.to_vec();
    open.sort_unstable();
    open.dedup();
    if open.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot route over an empty hub set".into(),
        ));
    }
    for &h in &open {
        if !inst.hubs.contains(&h) {
            return Err(Error::InvalidArgument(format!("{h} is not a potential hub")));
        }
    }
    let m = open.len();
    let mut origin_tables: Vec<Option<Box<[(f64, VertexId)]>>> = vec![None; inst.n_vertices()];
    let mut tours = Vec::with_capacity(inst.tasks.len());
    let mut transport_cost = 0.0;
    for &(b1, b2) in &inst.tasks {
        if origin_tables[b1].is_none() {
            let first_leg: Vec<f64> = open.iter().map(|&h| inst.d(b1, h)).collect();
            let mut table = vec![(f64::INFINITY, usize::MAX); m];
            for (i, &h) in open.iter().enumerate() {
                for (j, &h2) in open.iter().enumerate() {
                    let cost = first_leg[i] + inst.alpha * inst.d(h, h2);
                    if cost < table[j].0 {
                        table[j] = (cost, h);
                    }
                }
            }
            origin_tables[b1] = Some(table.into_boxed_slice());
        }
        let table = origin_tables[b1].as_ref().unwrap();
        let mut best_cost = f64::INFINITY;
        let mut best_pair = (usize::MAX, usize::MAX);
        for (j, &h2) in open.iter().enumerate() {
            let total = table[j].0 + inst.d(h2, b2);
            let pair = (table[j].1, h2);
            if total < best_cost || (total == best_cost && pair < best_pair) {
                best_cost = total;
                best_pair = pair;
            }
        }
        tours.push(best_pair);
        transport_cost += best_cost;
    }
    Ok(Routing {
        tours,
        transport_cost,
    })
}

fn assigned_hubs(flp: &FlpInstance<'_>, sol: &FlpSolution, task: usize) -> Result<(VertexId, VertexId)> {
    let (fwd, bwd) = flp.task_cities(task);
    let f1 = *sol
        .assignment
        .get(fwd)
        .ok_or_else(|| Error::InvalidArgument(format!("city {fwd} has no assignment")))?;
    let f2 = *sol
        .assignment
        .get(bwd)
        .ok_or_else(|| Error::InvalidArgument(format!("city {bwd} has no assignment")))?;
    Ok((flp.facility_hub(f1), flp.facility_hub(f2)))
}

/// Routes every task through both of its assigned hubs.
pub fn route_strategy1(flp: &FlpInstance<'_>, sol: &FlpSolution) -> Result<Routing> {
    let inst = flp.hlp();
    let mut tours = Vec::with_capacity(inst.tasks.len());
    let mut transport_cost = 0.0;
    for (task, &(b1, b2)) in inst.tasks.iter().enumerate() {
        let (h1, h2) = assigned_hubs(flp, sol, task)?;
        tours.push((h1, h2));
        transport_cost += inst.tour_cost(b1, h1, h2, b2);
    }
    Ok(Routing {
        tours,
        transport_cost,
    })
}

/// Routes every task through a single assigned hub, chosen as the one on
/// the cheaper side of the mid-point: the hub whose `d(B,H) + alpha*d(H,M)`
/// is smaller; the forward hub on ties.
pub fn route_strategy2(flp: &FlpInstance<'_>, sol: &FlpSolution) -> Result<Routing> {
    let inst = flp.hlp();
    let mut tours = Vec::with_capacity(inst.tasks.len());
    let mut transport_cost = 0.0;
    for (task, &(b1, b2)) in inst.tasks.iter().enumerate() {
        let (h1, h2) = assigned_hubs(flp, sol, task)?;
        let side1 = inst.d(b1, h1) + inst.alpha * flp.midpoint_to_vertex(task, h1);
        let side2 = inst.d(b2, h2) + inst.alpha * flp.midpoint_to_vertex(task, h2);
        let h = if side1 <= side2 { h1 } else { h2 };
        tours.push((h, h));
        transport_cost += inst.tour_cost(b1, h, h, b2);
    }
    Ok(Routing {
        tours,
        transport_cost,
    })
}

/// Knobs shared by the pipeline entry points.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Mid-point definition; `None` picks the instance default.
    pub midpoint: Option<MidpointMode>,
    pub greedy_objective: GreedyObjective,
    pub exact_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            midpoint: None,
            greedy_objective: GreedyObjective::default(),
            exact_limit: EXACT_FLP_LIMIT,
        }
    }
}

/// One reduction run with its intermediate artifacts kept around.
pub struct PipelineRun<'a> {
    pub flp: FlpInstance<'a>,
    pub flp_solution: FlpSolution,
    pub solution: HlpSolution,
}

/// Reduces, solves the facility instance, opens the matching hubs and
/// routes optimally.
pub fn run_reduction<'a>(
    inst: &'a HlpInstance,
    kind: ReductionKind,
    solver: FlpSolverKind,
    opts: &SolveOptions,
) -> Result<PipelineRun<'a>> {
    let flp = match kind {
        ReductionKind::Pa => {
            let mode = opts.midpoint.unwrap_or_else(|| default_midpoint_mode(inst));
            build_pa(inst, mode)?
        }
        ReductionKind::Bap => build_bap(inst),
    };
    let flp_solution = solve_flp(&flp, solver, opts.greedy_objective, opts.exact_limit)?;
    let mut open_hubs: Vec<VertexId> = flp_solution
        .open_facilities
        .iter()
        .map(|&f| flp.facility_hub(f))
        .collect();
    open_hubs.sort_unstable();
    let routing = route_optimal(inst, &open_hubs)?;
    let setup_cost = inst.setup_cost_of(&open_hubs);
    let solution = HlpSolution {
        open_hubs,
        tours: routing.tours,
        transport_cost: routing.transport_cost,
        setup_cost,
        objective: routing.transport_cost + setup_cost,
    };
    Ok(PipelineRun {
        flp,
        flp_solution,
        solution,
    })
}

/// Mid-point reduction pipeline.
pub fn solve_pa(
    inst: &HlpInstance,
    solver: FlpSolverKind,
    opts: &SolveOptions,
) -> Result<HlpSolution> {
    Ok(run_reduction(inst, ReductionKind::Pa, solver, opts)?.solution)
}

/// Baseline reduction pipeline.
pub fn solve_bap(
    inst: &HlpInstance,
    solver: FlpSolverKind,
    opts: &SolveOptions,
) -> Result<HlpSolution> {
    Ok(run_reduction(inst, ReductionKind::Bap, solver, opts)?.solution)
}

/// Runs both reductions and keeps the cheaper solution (ties favor the
/// mid-point reduction).
pub fn solve_combined(
    inst: &HlpInstance,
    solver: FlpSolverKind,
    opts: &SolveOptions,
) -> Result<HlpSolution> {
    let pa = solve_pa(inst, solver, opts)?;
    let bap = solve_bap(inst, solver, opts)?;
    Ok(if bap.objective < pa.objective { bap } else { pa })
}
