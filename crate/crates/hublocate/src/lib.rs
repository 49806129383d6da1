//! Multi-allocation hub location solvers.
//!
//! Tasks between branches are routed through one or two open hubs, with
//! the inter-hub leg discounted by a factor `alpha`. Three variants are
//! covered: a cardinality bound on open hubs, per-hub set-up costs, and
//! both at once. The solver reduces each variant to the matching facility
//! location problem — either through mid-point-augmented distances that
//! steer the first hub towards the destination, or through the plain
//! branch-to-hub baseline — solves that with greedy heuristics or exact
//! enumeration, and routes optimally over the opened hubs.
//!
//! The crate also ships the exact oracle, an LP-format export of the
//! integer program, reproducible benchmark instance generation, the
//! guarantee curves, and an audit harness that checks every proven bound
//! numerically on small instances.

pub mod audit;
pub mod bounds;
pub mod error;
pub mod flp;
pub mod generate;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod reduction;
pub mod rng;

pub use error::{Error, Result};
pub use flp::{
    exact_flp, greedy_k_flp, greedy_k_median, greedy_k_median_with, greedy_uflp, FlpProblem,
    FlpSolution, FlpSolverKind, GreedyObjective, EXACT_FLP_LIMIT,
};
pub use generate::{generate, Family, GenConfig, SetupMode};
pub use model::{
    validate_metric, Geometry, HlpInstance, HlpSolution, MetricCheckMode, MetricReport, Variant,
    VertexId, METRIC_TOL,
};
pub use oracle::{exact_hlp, export_ilp, ilp_text, EXACT_HLP_LIMIT};
pub use pipeline::{
    route_optimal, route_strategy1, route_strategy2, run_reduction, solve_bap, solve_combined,
    solve_pa, Routing, RoutingStrategy, SolveOptions,
};
pub use reduction::{
    build_bap, build_pa, default_midpoint_mode, midpoint_distance, FlpInstance, MidpointMode,
    ReductionKind,
};

#[cfg(test)]
pub(crate) mod test_fixtures {
    use crate::model::{Geometry, HlpInstance, Variant};

    /// All-pairs shortest paths; the independent closure oracle for
    /// edge-list fixtures.
    pub fn floyd_warshall_closure(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
        let mut d = vec![vec![f64::INFINITY; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for &(u, v, w) in edges {
            if w < d[u][v] {
                d[u][v] = w;
                d[v][u] = w;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        d
    }

    /// The worked two-task network: branches B1,B2,B3 (ids 0..2), hubs
    /// H1..H5 (ids 3..7), distances from the shortest-path closure of its
    /// nine edges, tasks (B1,B2) and (B1,B3).
    pub fn fig1_instance(variant: Variant, alpha: f64) -> HlpInstance {
        let edges = [
            (0, 3, 1.0), // B1 - H1
            (0, 4, 1.0), // B1 - H2
            (3, 5, 5.0), // H1 - H3
            (4, 7, 5.0), // H2 - H5
            (5, 1, 1.0), // H3 - B2
            (7, 2, 1.0), // H5 - B3
            (3, 6, 3.0), // H1 - H4
            (6, 1, 3.0), // H4 - B2
            (6, 2, 3.0), // H4 - B3
        ];
        let dist = floyd_warshall_closure(8, &edges);
        HlpInstance::new(
            alpha,
            variant,
            Geometry::ExplicitMatrix { dist },
            vec![0, 1, 2],
            vec![3, 4, 5, 6, 7],
            vec![(0, 1), (0, 2)],
        )
        .unwrap()
    }

    /// One task B1=(0,0) -> B2=(2,0) plus a single hub at `hub`.
    pub fn two_branch_instance(hub: &[f64; 2], alpha: f64) -> HlpInstance {
        HlpInstance::new(
            alpha,
            Variant::PHM { p: 1 },
            Geometry::Coordinates {
                norm_p: 2.0,
                points: vec![vec![0.0, 0.0], vec![2.0, 0.0], hub.to_vec()],
            },
            vec![0, 1],
            vec![2],
            vec![(0, 1)],
        )
        .unwrap()
    }

    /// Points on the x-axis; the last one is the only hub, no tasks.
    pub fn line_instance(xs: &[f64], alpha: f64) -> HlpInstance {
        let points: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 0.0]).collect();
        let n = points.len();
        HlpInstance::new(
            alpha,
            Variant::PHM { p: 1 },
            Geometry::Coordinates { norm_p: 2.0, points },
            (0..n - 1).collect(),
            vec![n - 1],
            vec![],
        )
        .unwrap()
    }
}
