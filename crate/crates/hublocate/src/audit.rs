//! Empirical audit of every proven inequality on oracle-scale instances.
//!
//! For one instance the audit computes the exact optimum, both reductions
//! solved with the exact facility sub-solver (so the sub-solver guarantee
//! is 1), the two fixed routing strategies, and the slack of each bound.
//! A negative slack beyond tolerance is a violation; on correct code the
//! suite never produces one.

use crate::error::Result;
use crate::flp::{exact_flp, FlpSolution, FlpSolverKind};
use crate::model::{HlpInstance, VertexId};
use crate::oracle::{exact_hlp, EXACT_HLP_LIMIT};
use crate::pipeline::{route_optimal, route_strategy1, route_strategy2, run_reduction, SolveOptions};
use crate::reduction::{build_pa, MidpointMode, ReductionKind};

/// Relative slack tolerance: a bound `lhs <= rhs` is violated when
/// `rhs - lhs < -1e-9 * max(1, |rhs|)`.
pub const AUDIT_TOL: f64 = 1e-9;

/// Audit of one instance at one mid-point mode.
#[derive(Debug, Clone)]
pub struct AuditRow {
    pub instance: String,
    pub alpha: f64,
    pub variant: String,
    pub midpoint: &'static str,
    /// Exact optimum by hub enumeration.
    pub opt_hlp: f64,
    /// Exact optimum of the mid-point reduction.
    pub opt_flp: f64,
    /// Mid-point pipeline with the exact facility sub-solver.
    pub pa: f64,
    /// Baseline pipeline with the exact facility sub-solver.
    pub bap: f64,
    pub combined: f64,
    /// Strategy objectives (transport via the fixed strategy + set-up).
    pub strategy1: f64,
    pub strategy2: f64,
    /// `(1+a)*OPT_HLP - OPT_FLP`.
    pub lemma5_slack: f64,
    /// `(1+a)*OPT_HLP - PA`.
    pub lemma1_slack: f64,
    /// `(1 + 1/((1+a)a))*OPT_HLP - strategy2` (NaN at a = 0).
    pub lemma2_slack: f64,
    /// `OPT_HLP/a - BaP` (NaN at a = 0).
    pub bap1_slack: f64,
    /// `min(1+a, 1/a)*OPT_HLP - combined`.
    pub combined_slack: f64,
    /// Worst per-task slack of `tour1 <= Gamma(C12,F1) + Gamma(C21,F2)`.
    pub s1_min_slack: f64,
    /// Worst per-task slack of the strategy-2 chain bound.
    pub s2_min_slack: f64,
    /// `OPT_HLP - a * max_task d(B1,B2)`.
    pub opt_lb_slack: f64,
    pub combined_ratio: f64,
    /// Names of violated bounds; empty on a clean audit.
    pub violations: Vec<String>,
}

fn slack_violated(slack: f64, scale: f64) -> bool {
    slack < -AUDIT_TOL * scale.abs().max(1.0)
}

/// Runs the full inequality audit on one instance. The instance must be
/// within the oracle's enumeration limit.
pub fn audit_instance(
    inst: &HlpInstance,
    name: &str,
    mode: MidpointMode,
) -> Result<AuditRow> {
    let alpha = inst.alpha;
    let opts = SolveOptions {
        midpoint: Some(mode),
        ..SolveOptions::default()
    };

    let oracle = exact_hlp(inst, EXACT_HLP_LIMIT)?;
    let opt_hlp = oracle.objective;

    let pa_run = run_reduction(inst, ReductionKind::Pa, FlpSolverKind::ExactEnumeration, &opts)?;
    let bap_run = run_reduction(inst, ReductionKind::Bap, FlpSolverKind::ExactEnumeration, &opts)?;
    let pa = pa_run.solution.objective;
    let bap = bap_run.solution.objective;
    let combined = pa.min(bap);

    let opt_flp = pa_run.flp_solution.objective;

    let s1 = route_strategy1(&pa_run.flp, &pa_run.flp_solution)?;
    let s2 = route_strategy2(&pa_run.flp, &pa_run.flp_solution)?;
    let strategy1 = s1.transport_cost + pa_run.solution.setup_cost;
    let strategy2 = s2.transport_cost + pa_run.solution.setup_cost;

    let mut violations = Vec::new();
    let check = |name: &str, slack: f64, scale: f64, violations: &mut Vec<String>| {
        if slack_violated(slack, scale) {
            violations.push(name.to_string());
        }
    };

    let lemma5_rhs = (1.0 + alpha) * opt_hlp;
    let lemma5_slack = lemma5_rhs - opt_flp;
    check("lemma5", lemma5_slack, lemma5_rhs, &mut violations);

    let lemma1_slack = lemma5_rhs - pa;
    check("lemma1", lemma1_slack, lemma5_rhs, &mut violations);

    let (lemma2_slack, bap1_slack) = if alpha > 0.0 {
        let lemma2_rhs = (1.0 + 1.0 / ((1.0 + alpha) * alpha)) * opt_hlp;
        let l2 = lemma2_rhs - strategy2;
        check("lemma2", l2, lemma2_rhs, &mut violations);
        let bap1_rhs = opt_hlp / alpha;
        let b1 = bap1_rhs - bap;
        check("bap1", b1, bap1_rhs, &mut violations);
        (l2, b1)
    } else {
        (f64::NAN, f64::NAN)
    };

    let combined_rhs = if alpha > 0.0 {
        (1.0 + alpha).min(1.0 / alpha) * opt_hlp
    } else {
        opt_hlp
    };
    let combined_slack = combined_rhs - combined;
    check("combined", combined_slack, combined_rhs, &mut violations);

    // dominance of the exact oracle and of optimal routing
    check("oracle_pa", pa - opt_hlp, opt_hlp, &mut violations);
    check("oracle_bap", bap - opt_hlp, opt_hlp, &mut violations);
    check(
        "routing_s1",
        s1.transport_cost - pa_run.solution.transport_cost,
        s1.transport_cost,
        &mut violations,
    );
    check(
        "routing_s2",
        s2.transport_cost - pa_run.solution.transport_cost,
        s2.transport_cost,
        &mut violations,
    );

    // per-task chains
    let mut s1_min_slack = f64::INFINITY;
    let mut s2_min_slack = f64::INFINITY;
    let mut max_span = 0.0_f64;
    for (task, &(b1, b2)) in inst.tasks.iter().enumerate() {
        let (fwd, bwd) = pa_run.flp.task_cities(task);
        let gamma_sum = pa_run.flp.city_facility(fwd, pa_run.flp_solution.assignment[fwd])
            + pa_run
                .flp
                .city_facility(bwd, pa_run.flp_solution.assignment[bwd]);
        let (h1, h2) = s1.tours[task];
        let tour1 = inst.tour_cost(b1, h1, h2, b2);
        s1_min_slack = s1_min_slack.min(gamma_sum - tour1);
        check("s1_task", gamma_sum - tour1, gamma_sum, &mut violations);

        if alpha > 0.0 {
            let span = inst.d(b1, b2);
            let (h, _) = s2.tours[task];
            let tour2 = inst.tour_cost(b1, h, h, b2);
            let rhs = (gamma_sum + span) / (1.0 + alpha);
            s2_min_slack = s2_min_slack.min(rhs - tour2);
            check("s2_task", rhs - tour2, rhs, &mut violations);
        }
        max_span = max_span.max(inst.d(b1, b2));
    }
    if inst.tasks.is_empty() {
        s1_min_slack = 0.0;
        s2_min_slack = 0.0;
    } else if alpha == 0.0 {
        s2_min_slack = f64::NAN;
    }

    let opt_lb_slack = opt_hlp - alpha * max_span;
    check("opt_lower_bound", opt_lb_slack, opt_hlp, &mut violations);

    let combined_ratio = if opt_hlp > 0.0 { combined / opt_hlp } else { 1.0 };

    violations.sort();
    violations.dedup();

    Ok(AuditRow {
        instance: name.to_string(),
        alpha,
        variant: inst.variant.name().to_string(),
        midpoint: mode.name(),
        opt_hlp,
        opt_flp,
        pa,
        bap,
        combined,
        strategy1,
        strategy2,
        lemma5_slack,
        lemma1_slack,
        lemma2_slack,
        bap1_slack,
        combined_slack,
        s1_min_slack,
        s2_min_slack,
        opt_lb_slack,
        combined_ratio,
        violations,
    })
}

/// Samples triples of the reduced space and counts triangle violations;
/// the mid-point reduction must report zero.
pub fn audit_gamma_metric(
    inst: &HlpInstance,
    mode: MidpointMode,
    n_triples: usize,
    seed: u64,
) -> Result<crate::model::MetricReport> {
    let flp = build_pa(inst, mode)?;
    Ok(crate::model::validate_metric(
        |i, j| flp.gamma_indexed(i, j),
        flp.gamma_point_count(),
        crate::model::MetricCheckMode::Sampled { n_triples, seed },
    ))
}

/// Convenience wrapper over [`route_optimal`] used by dominance checks.
pub fn optimal_transport(inst: &HlpInstance, open: &[VertexId]) -> Result<f64> {
    Ok(route_optimal(inst, open)?.transport_cost)
}

/// Exact facility-location objective of the mid-point reduction.
pub fn exact_pa_flp_objective(inst: &HlpInstance, mode: MidpointMode) -> Result<FlpSolution> {
    let flp = build_pa(inst, mode)?;
    exact_flp(&flp, crate::flp::EXACT_FLP_LIMIT)
}
