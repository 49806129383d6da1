//! Ground-truth solver by hub-subset enumeration, plus an LP-format
//! export of the integer program for external verification.
//!
//! Enumeration is meant for audit-scale instances; the benchmark families
//! are far beyond it, which is exactly why the heuristic pipeline exists.

use rayon::prelude::*;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{HlpInstance, HlpSolution, VertexId};
use crate::pipeline::route_optimal;

/// Default hub enumeration limit for [`exact_hlp`].
pub const EXACT_HLP_LIMIT: usize = 18;

/// Exact solver: enumerates open-hub subsets (size at most `p` when the
/// variant bounds it), routes each subset optimally and returns the global
/// minimum. Ties go to the lexicographically smallest hub set.
pub fn exact_hlp(inst: &HlpInstance, limit: usize) -> Result<HlpSolution> {
    let n_h = inst.hubs.len();
    if n_h > limit {
        return Err(Error::EnumerationLimit {
            what: "hub",
            count: n_h,
            limit,
        });
    }
    let max_open = inst.variant.p().unwrap_or(n_h);
    // an empty hub set is feasible only without tasks
    let first_mask: u64 = if inst.tasks.is_empty() { 0 } else { 1 };
    let best = (first_mask..(1u64 << n_h))
        .into_par_iter()
        .filter(|mask| {
            let size = mask.count_ones() as usize;
            size <= max_open && (size > 0 || inst.tasks.is_empty())
        })
        .map(|mask| {
            let mut open: Vec<VertexId> = (0..n_h)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| inst.hubs[i])
                .collect();
            open.sort_unstable();
            let transport = if inst.tasks.is_empty() {
                0.0
            } else {
                route_optimal(inst, &open)
                    .expect("nonempty subset routes")
                    .transport_cost
            };
            let objective = transport + inst.setup_cost_of(&open);
            (objective, open)
        })
        .reduce_with(|a, b| {
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        });
    let (_, open) = best.ok_or_else(|| Error::InvalidArgument("no feasible hub set".into()))?;
    let routing = route_optimal(inst, &open).unwrap_or(crate::pipeline::Routing {
        tours: Vec::new(),
        transport_cost: 0.0,
    });
    let setup_cost = inst.setup_cost_of(&open);
    Ok(HlpSolution {
        open_hubs: open,
        tours: routing.tours,
        transport_cost: routing.transport_cost,
        setup_cost,
        objective: routing.transport_cost + setup_cost,
    })
}

/// Renders the instance's integer program in LP file format.
///
/// Variables are `X_<b>_<h>_<h2>_<b2>` per tour choice and `Y_<h>` per
/// hub; the cardinality row appears for the cardinality-bounded variants
/// and set-up terms for the cost-bearing ones.
pub fn ilp_text(inst: &HlpInstance) -> String {
    let mut out = String::new();
    out.push_str("\\ multi-allocation hub location export\n");
    out.push_str("Minimize\n obj:");
    let mut terms = 0usize;
    let mut push_term = |out: &mut String, coef: f64, var: &str| {
        if terms > 0 && terms % 6 == 0 {
            out.push_str("\n    ");
        }
        if terms == 0 {
            let _ = write!(out, " {coef} {var}");
        } else {
            let _ = write!(out, " + {coef} {var}");
        }
        terms += 1;
    };
    for &(b1, b2) in &inst.tasks {
        for &h in &inst.hubs {
            for &h2 in &inst.hubs {
                let coef = inst.tour_cost(b1, h, h2, b2);
                push_term(&mut out, coef, &format!("X_{b1}_{h}_{h2}_{b2}"));
            }
        }
    }
    if let Some(setup) = inst.variant.setup() {
        for (i, &h) in inst.hubs.iter().enumerate() {
            push_term(&mut out, setup[i], &format!("Y_{h}"));
        }
    }
    if inst.tasks.is_empty() && inst.variant.setup().is_none() {
        // LP format needs at least one objective term
        push_term(&mut out, 0.0, &format!("Y_{}", inst.hubs[0]));
    }
    out.push('\n');

    out.push_str("Subject To\n");
    if let Some(p) = inst.variant.p() {
        out.push_str(" cardinality:");
        for (i, &h) in inst.hubs.iter().enumerate() {
            if i == 0 {
                let _ = write!(out, " Y_{h}");
            } else {
                let _ = write!(out, " + Y_{h}");
            }
        }
        let _ = writeln!(out, " <= {p}");
    }
    for &(b1, b2) in &inst.tasks {
        let _ = write!(out, " assign_{b1}_{b2}:");
        let mut first = true;
        for &h in &inst.hubs {
            for &h2 in &inst.hubs {
                if first {
                    let _ = write!(out, " X_{b1}_{h}_{h2}_{b2}");
                    first = false;
                } else {
                    let _ = write!(out, " + X_{b1}_{h}_{h2}_{b2}");
                }
            }
        }
        out.push_str(" = 1\n");
    }
    for &(b1, b2) in &inst.tasks {
        for &h in &inst.hubs {
            for &h2 in &inst.hubs {
                let _ = writeln!(out, " open_first_{b1}_{h}_{h2}_{b2}: X_{b1}_{h}_{h2}_{b2} - Y_{h} <= 0");
                let _ = writeln!(out, " open_second_{b1}_{h}_{h2}_{b2}: X_{b1}_{h}_{h2}_{b2} - Y_{h2} <= 0");
            }
        }
    }

    out.push_str("Binary\n");
    for &(b1, b2) in &inst.tasks {
        for &h in &inst.hubs {
            for &h2 in &inst.hubs {
                let _ = writeln!(out, " X_{b1}_{h}_{h2}_{b2}");
            }
        }
    }
    for &h in &inst.hubs {
        let _ = writeln!(out, " Y_{h}");
    }
    out.push_str("End\n");
    out
}

/// Writes [`ilp_text`] to a file.
pub fn export_ilp(inst: &HlpInstance, path: impl AsRef<std::path::Path>) -> Result<()> {
    std::fs::write(path, ilp_text(inst))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Geometry, Variant};
    use crate::test_fixtures::fig1_instance;

    #[test]
    fn forced_single_hub() {
        let geometry = Geometry::Coordinates {
            norm_p: 2.0,
            points: vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.5, 0.5]],
        };
        let inst = HlpInstance::new(
            0.5,
            Variant::PHM { p: 1 },
            geometry,
            vec![0, 1],
            vec![2],
            vec![(0, 1)],
        )
        .unwrap();
        let sol = exact_hlp(&inst, EXACT_HLP_LIMIT).unwrap();
        assert_eq!(sol.open_hubs, vec![2]);
        assert_eq!(sol.objective, inst.d(0, 2) + inst.d(2, 1));
    }

    #[test]
    fn figure_optimum_at_two_and_four_hubs() {
        // hand enumeration over the metric closure of the figure's edges:
        // with p=2 the best pair is {H1,H4} at 5.5 per task; with p=4 the
        // four-hub set {H1,H2,H3,H5} reaches the 4.5-per-task tours.
        let inst2 = fig1_instance(Variant::PHM { p: 2 }, 0.5);
        let sol2 = exact_hlp(&inst2, EXACT_HLP_LIMIT).unwrap();
        assert_eq!(sol2.objective, 11.0);
        assert_eq!(sol2.open_hubs, vec![3, 6]);

        let inst4 = fig1_instance(Variant::PHM { p: 4 }, 0.5);
        let sol4 = exact_hlp(&inst4, EXACT_HLP_LIMIT).unwrap();
        assert_eq!(sol4.objective, 9.0);
        assert_eq!(sol4.open_hubs, vec![3, 4, 5, 7]);
    }

    #[test]
    fn oracle_is_monotone_in_p() {
        let mut last = f64::INFINITY;
        for p in 1..=5 {
            let inst = fig1_instance(Variant::PHM { p }, 0.5);
            let sol = exact_hlp(&inst, EXACT_HLP_LIMIT).unwrap();
            assert!(sol.objective <= last + 1e-12);
            last = sol.objective;
        }
    }

    #[test]
    fn free_setup_uhlp_matches_saturated_phm() {
        let uhlp = fig1_instance(Variant::UHLP { setup: vec![0.0; 5] }, 0.5);
        let phm = fig1_instance(Variant::PHM { p: 5 }, 0.5);
        let a = exact_hlp(&uhlp, EXACT_HLP_LIMIT).unwrap();
        let b = exact_hlp(&phm, EXACT_HLP_LIMIT).unwrap();
        assert_eq!(a.objective, b.objective);
    }

    #[test]
    fn oracle_refuses_oversized_instances() {
        let inst = fig1_instance(Variant::PHM { p: 2 }, 0.5);
        assert!(matches!(
            exact_hlp(&inst, 3),
            Err(Error::EnumerationLimit { count: 5, limit: 3, .. })
        ));
    }

    #[test]
    fn empty_task_list_opens_nothing_under_setup_costs() {
        let inst = fig1_instance(Variant::UHLP { setup: vec![1.0; 5] }, 0.5);
        let inst = HlpInstance {
            tasks: vec![],
            ..inst
        };
        let sol = exact_hlp(&inst, EXACT_HLP_LIMIT).unwrap();
        assert!(sol.open_hubs.is_empty());
        assert_eq!(sol.objective, 0.0);
    }

    fn tiny_ilp_instance(variant: Variant) -> HlpInstance {
        let geometry = Geometry::Coordinates {
            norm_p: 2.0,
            points: vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]],
        };
        HlpInstance::new(0.5, variant, geometry, vec![0, 1], vec![2, 3], vec![(0, 1)]).unwrap()
    }

    #[test]
    fn lp_export_structure_for_phm() {
        let inst = tiny_ilp_instance(Variant::PHM { p: 1 });
        let text = ilp_text(&inst);
        let x_vars = text
            .lines()
            .skip_while(|l| !l.starts_with("Binary"))
            .filter(|l| l.trim_start().starts_with("X_"))
            .count();
        let y_vars = text
            .lines()
            .skip_while(|l| !l.starts_with("Binary"))
            .filter(|l| l.trim_start().starts_with("Y_"))
            .count();
        assert_eq!(x_vars, 4);
        assert_eq!(y_vars, 2);
        assert_eq!(text.matches("cardinality:").count(), 1);
        assert_eq!(text.matches("assign_").count(), 1);
        assert_eq!(text.matches("open_first_").count(), 4);
        assert_eq!(text.matches("open_second_").count(), 4);
    }

    #[test]
    fn lp_export_has_no_cardinality_row_without_p() {
        let inst = tiny_ilp_instance(Variant::UHLP { setup: vec![1.0, 2.0] });
        let text = ilp_text(&inst);
        assert_eq!(text.matches("cardinality").count(), 0);
        assert!(text.contains("1 Y_2"));
        assert!(text.contains("2 Y_3"));
    }

    #[test]
    fn lp_export_is_complete_for_the_general_variant() {
        let inst = tiny_ilp_instance(Variant::PHLP {
            p: 2,
            setup: vec![1.0, 2.0],
        });
        let text = ilp_text(&inst);
        assert_eq!(text.matches("cardinality:").count(), 1);
        assert!(text.contains("1 Y_2"));
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn oracle_never_loses_to_the_pipelines() {
        use crate::flp::FlpSolverKind;
        use crate::pipeline::{solve_bap, solve_pa, SolveOptions};
        for alpha in [0.2, 0.5, 0.9] {
            let inst = fig1_instance(Variant::PHM { p: 2 }, alpha);
            let opts = SolveOptions::default();
            let oracle = exact_hlp(&inst, EXACT_HLP_LIMIT).unwrap();
            let pa = solve_pa(&inst, FlpSolverKind::ExactEnumeration, &opts).unwrap();
            let bap = solve_bap(&inst, FlpSolverKind::ExactEnumeration, &opts).unwrap();
            assert!(oracle.objective <= pa.objective + 1e-9);
            assert!(oracle.objective <= bap.objective + 1e-9);
        }
    }
}
