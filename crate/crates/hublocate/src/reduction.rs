//! Reduction of hub location instances to facility location instances.
//!
//! Two reductions are provided. The mid-point reduction splits every task
//! at a virtual point halfway between its endpoints and prices a facility
//! for a city as `d(B,H) + alpha * d(M,H)`, so that the first-hub choice
//! accounts for the destination's direction. The baseline reduction prices
//! a facility as the plain branch-to-hub distance `d(B,H)`.
//!
//! Mid-points are virtual: they are never added to the vertex set and only
//! exist inside the distance formula. The full city/facility distance is
//! evaluated lazily on demand; large instances never materialize a
//! city-by-city block.

use crate::error::{Error, Result};
use crate::model::{p_norm_distance, Geometry, HlpInstance, VertexId};

/// How the mid-point of a task is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MidpointMode {
    /// `d(M, v) = (d(B1,v) + d(B2,v)) / 2`; works on any metric.
    MetricClosure,
    /// `M = B1 + (B2 - B1)/2` as a point; requires coordinate geometry.
    VectorSpace,
}

impl MidpointMode {
    pub fn name(self) -> &'static str {
        match self {
            MidpointMode::MetricClosure => "metric",
            MidpointMode::VectorSpace => "vector",
        }
    }
}

/// Mid-point mode used when none is requested explicitly: the vector form
/// when coordinates exist, the metric closure otherwise.
pub fn default_midpoint_mode(inst: &HlpInstance) -> MidpointMode {
    if inst.has_coordinates() {
        MidpointMode::VectorSpace
    } else {
        MidpointMode::MetricClosure
    }
}

/// Which reduction produced a facility location instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    /// Mid-point-augmented distances.
    Pa,
    /// Plain branch-to-hub distances.
    Bap,
}

impl ReductionKind {
    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::Pa => "pa",
            ReductionKind::Bap => "bap",
        }
    }
}

/// Direction tag of a city: each task contributes one city per endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// A city of the reduced instance: one endpoint of one task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct City {
    pub task: usize,
    pub direction: Direction,
}

/// Distance from the mid-point of `task` to vertex `v`.
///
/// In both modes `d(B1, M) = d(B1, B2) / 2` holds exactly up to rounding.
pub fn midpoint_distance(
    inst: &HlpInstance,
    task: usize,
    v: VertexId,
    mode: MidpointMode,
) -> Result<f64> {
    let (b1, b2) = *inst
        .tasks
        .get(task)
        .ok_or_else(|| Error::InvalidArgument(format!("task index {task} out of range")))?;
    if v >= inst.n_vertices() {
        return Err(Error::UnknownVertex(v));
    }
    match mode {
        MidpointMode::MetricClosure => Ok(0.5 * inst.d(b1, v) + 0.5 * inst.d(b2, v)),
        MidpointMode::VectorSpace => {
            let (points, norm_p) = coords_of(inst)?;
            Ok(p_norm_distance(
                &midpoint_coords(&points[b1], &points[b2]),
                &points[v],
                norm_p,
            ))
        }
    }
}

fn coords_of(inst: &HlpInstance) -> Result<(&Vec<Vec<f64>>, f64)> {
    match &inst.geometry {
        Geometry::Coordinates { norm_p, points } => Ok((points, *norm_p)),
        Geometry::ExplicitMatrix { .. } => Err(Error::VectorModeNeedsCoordinates),
    }
}

fn midpoint_coords(b1: &[f64], b2: &[f64]) -> Vec<f64> {
    b1.iter().zip(b2).map(|(x, y)| x + 0.5 * (y - x)).collect()
}

/// A facility location instance produced by one of the reductions.
///
/// Facility `i` corresponds to hub `hlp.hubs[i]`. Cities come in task
/// order, forward endpoint first. All distances are evaluated on demand.
#[derive(Debug, Clone)]
pub struct FlpInstance<'a> {
    hlp: &'a HlpInstance,
    kind: ReductionKind,
    mode: MidpointMode,
    cities: Vec<City>,
    k: Option<usize>,
    setup: Option<Vec<f64>>,
    /// Vector-mode mid-point coordinates, one per task.
    midpoints: Option<Vec<Vec<f64>>>,
}

/// Builds the mid-point reduction.
pub fn build_pa(inst: &HlpInstance, mode: MidpointMode) -> Result<FlpInstance<'_>> {
    if mode == MidpointMode::VectorSpace && !inst.has_coordinates() {
        return Err(Error::VectorModeNeedsCoordinates);
    }
    let midpoints = match mode {
        MidpointMode::VectorSpace => {
            let (points, _) = coords_of(inst)?;
            Some(
                inst.tasks
                    .iter()
                    .map(|&(b1, b2)| midpoint_coords(&points[b1], &points[b2]))
                    .collect(),
            )
        }
        MidpointMode::MetricClosure => None,
    };
    Ok(FlpInstance {
        hlp: inst,
        kind: ReductionKind::Pa,
        mode,
        cities: cities_of(inst),
        k: inst.variant.p(),
        setup: inst.variant.setup().map(<[f64]>::to_vec),
        midpoints,
    })
}

/// Builds the baseline reduction; `alpha` plays no role in its distances.
pub fn build_bap(inst: &HlpInstance) -> FlpInstance<'_> {
    FlpInstance {
        hlp: inst,
        kind: ReductionKind::Bap,
        mode: MidpointMode::MetricClosure,
        cities: cities_of(inst),
        k: inst.variant.p(),
        setup: inst.variant.setup().map(<[f64]>::to_vec),
        midpoints: None,
    }
}

fn cities_of(inst: &HlpInstance) -> Vec<City> {
    let mut cities = Vec::with_capacity(2 * inst.tasks.len());
    for task in 0..inst.tasks.len() {
        cities.push(City {
            task,
            direction: Direction::Forward,
        });
        cities.push(City {
            task,
            direction: Direction::Backward,
        });
    }
    cities
}

impl<'a> FlpInstance<'a> {
    pub fn hlp(&self) -> &'a HlpInstance {
        self.hlp
    }

    pub fn kind(&self) -> ReductionKind {
        self.kind
    }

    pub fn midpoint_mode(&self) -> MidpointMode {
        self.mode
    }

    pub fn n_cities(&self) -> usize {
        self.cities.len()
    }

    pub fn n_facilities(&self) -> usize {
        self.hlp.hubs.len()
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn setup(&self) -> Option<&[f64]> {
        self.setup.as_deref()
    }

    pub fn city(&self, c: usize) -> City {
        self.cities[c]
    }

    /// Branch the city stands for.
    pub fn origin_branch(&self, c: usize) -> VertexId {
        let City { task, direction } = self.cities[c];
        let (b1, b2) = self.hlp.tasks[task];
        match direction {
            Direction::Forward => b1,
            Direction::Backward => b2,
        }
    }

    /// Hub id behind facility `f`.
    pub fn facility_hub(&self, f: usize) -> VertexId {
        self.hlp.hubs[f]
    }

    /// The two cities of a task: `(forward, backward)`.
    pub fn task_cities(&self, task: usize) -> (usize, usize) {
        (2 * task, 2 * task + 1)
    }

    /// Mid-point-to-vertex distance of a task under this instance's mode.
    pub fn midpoint_to_vertex(&self, task: usize, v: VertexId) -> f64 {
        match self.mode {
            MidpointMode::MetricClosure => {
                let (b1, b2) = self.hlp.tasks[task];
                0.5 * self.hlp.d(b1, v) + 0.5 * self.hlp.d(b2, v)
            }
            MidpointMode::VectorSpace => {
                let mids = self.midpoints.as_ref().expect("vector mode has midpoints");
                let (points, norm_p) = coords_of(self.hlp).expect("vector mode has coords");
                p_norm_distance(&mids[task], &points[v], norm_p)
            }
        }
    }

    fn midpoint_to_midpoint(&self, s: usize, t: usize) -> f64 {
        if s == t {
            return 0.0;
        }
        match self.mode {
            MidpointMode::MetricClosure => {
                let (a1, a2) = self.hlp.tasks[s];
                let (b1, b2) = self.hlp.tasks[t];
                0.25 * (self.hlp.d(a1, b1)
                    + self.hlp.d(a1, b2)
                    + self.hlp.d(a2, b1)
                    + self.hlp.d(a2, b2))
            }
            MidpointMode::VectorSpace => {
                let mids = self.midpoints.as_ref().expect("vector mode has midpoints");
                let (_, norm_p) = coords_of(self.hlp).expect("vector mode has coords");
                p_norm_distance(&mids[s], &mids[t], norm_p)
            }
        }
    }

    /// City-to-facility distance; the only block the solvers evaluate.
    #[inline]
    pub fn city_facility(&self, c: usize, f: usize) -> f64 {
        let b = self.origin_branch(c);
        let h = self.facility_hub(f);
        match self.kind {
            ReductionKind::Pa => {
                self.hlp.d(b, h) + self.hlp.alpha * self.midpoint_to_vertex(self.cities[c].task, h)
            }
            ReductionKind::Bap => self.hlp.d(b, h),
        }
    }

    /// City-to-city distance; needed only for metric checks.
    pub fn city_city(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let ba = self.origin_branch(a);
        let bb = self.origin_branch(b);
        match self.kind {
            ReductionKind::Pa => {
                self.hlp.d(ba, bb)
                    + self.hlp.alpha
                        * self.midpoint_to_midpoint(self.cities[a].task, self.cities[b].task)
            }
            ReductionKind::Bap => self.hlp.d(ba, bb),
        }
    }

    /// Facility-to-facility distance; needed only for metric checks.
    pub fn facility_facility(&self, a: usize, b: usize) -> f64 {
        let d = self.hlp.d(self.facility_hub(a), self.facility_hub(b));
        match self.kind {
            ReductionKind::Pa => d * (1.0 + self.hlp.alpha),
            ReductionKind::Bap => d,
        }
    }

    /// Unified distance over cities followed by facilities, for metric
    /// validation over the whole reduced space.
    pub fn gamma_indexed(&self, i: usize, j: usize) -> f64 {
        let nc = self.n_cities();
        match (i < nc, j < nc) {
            (true, true) => self.city_city(i, j),
            (true, false) => self.city_facility(i, j - nc),
            (false, true) => self.city_facility(j, i - nc),
            (false, false) => self.facility_facility(i - nc, j - nc),
        }
    }

    /// Total number of points in the reduced space.
    pub fn gamma_point_count(&self) -> usize {
        self.n_cities() + self.n_facilities()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MetricCheckMode, Variant};
    use crate::model::validate_metric;
    use crate::test_fixtures::{fig1_instance, two_branch_instance};

    #[test]
    fn midpoint_to_endpoint_is_half_the_task_span() {
        // v = B1 in both modes
        let inst = two_branch_instance(&[0.8, 0.0], 0.5);
        for mode in [MidpointMode::MetricClosure, MidpointMode::VectorSpace] {
            let got = midpoint_distance(&inst, 0, 0, mode).unwrap();
            assert!((got - 0.5 * inst.d(0, 1)).abs() < 1e-12, "{mode:?}");
        }
    }

    #[test]
    fn closure_and_vector_midpoints_differ_off_axis() {
        // B1=(0,0), B2=(2,0), v=(0,1)
        let inst = two_branch_instance(&[0.0, 1.0], 0.5);
        let v = 2;
        let closure = midpoint_distance(&inst, 0, v, MidpointMode::MetricClosure).unwrap();
        assert!((closure - (0.5 + 0.5 * 5.0_f64.sqrt())).abs() < 1e-12);
        let vector = midpoint_distance(&inst, 0, v, MidpointMode::VectorSpace).unwrap();
        assert!((vector - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((closure - vector).abs() > 0.1);
    }

    #[test]
    fn vector_mode_rejects_matrix_geometry() {
        let inst = fig1_instance(Variant::PHM { p: 2 }, 0.5);
        assert!(matches!(
            midpoint_distance(&inst, 0, 3, MidpointMode::VectorSpace),
            Err(Error::VectorModeNeedsCoordinates)
        ));
        assert!(matches!(
            build_pa(&inst, MidpointMode::VectorSpace),
            Err(Error::VectorModeNeedsCoordinates)
        ));
        assert_eq!(default_midpoint_mode(&inst), MidpointMode::MetricClosure);
    }

    #[test]
    fn equal_cost_hubs_on_the_task_axis() {
        // B1=(0,0), B2=(2,0), alpha=0.5: H=(0.8,0) and H=(-0.2666...,0)
        // are equally good first hubs.
        let inst = two_branch_instance(&[0.8, 0.0], 0.5);
        let flp = build_pa(&inst, MidpointMode::VectorSpace).unwrap();
        let fwd = flp.task_cities(0).0;
        assert!((flp.city_facility(fwd, 0) - 0.9).abs() < 1e-9);

        let inst2 = two_branch_instance(&[-4.0 / 15.0, 0.0], 0.5);
        let flp2 = build_pa(&inst2, MidpointMode::VectorSpace).unwrap();
        assert!((flp2.city_facility(fwd, 0) - 0.9).abs() < 1e-9);
    }

    #[test]
    fn zero_alpha_reduces_to_plain_distance() {
        let inst = two_branch_instance(&[0.3, 0.7], 0.0);
        let pa = build_pa(&inst, MidpointMode::VectorSpace).unwrap();
        let bap = build_bap(&inst);
        for c in 0..pa.n_cities() {
            for f in 0..pa.n_facilities() {
                let want = inst.d(pa.origin_branch(c), pa.facility_hub(f));
                assert_eq!(pa.city_facility(c, f), want);
                assert_eq!(bap.city_facility(c, f), want);
            }
        }
    }

    #[test]
    fn baseline_distance_ignores_alpha() {
        let lo = two_branch_instance(&[0.8, 0.0], 0.1);
        let hi = two_branch_instance(&[0.8, 0.0], 0.9);
        let (a, b) = (build_bap(&lo), build_bap(&hi));
        for c in 0..a.n_cities() {
            for f in 0..a.n_facilities() {
                assert_eq!(a.city_facility(c, f), b.city_facility(c, f));
            }
        }
        assert_eq!(a.city_facility(0, 0), 0.8);
    }

    #[test]
    fn baseline_facility_at_origin_costs_nothing() {
        let inst = two_branch_instance(&[0.0, 0.0], 0.5);
        let bap = build_bap(&inst);
        assert_eq!(bap.city_facility(0, 0), 0.0);
    }

    #[test]
    fn closed_form_matches_two_term_definition() {
        // metric closure: Gamma(city, fac) = (1 + a/2) d(B1,H) + (a/2) d(B2,H)
        let inst = fig1_instance(Variant::PHM { p: 2 }, 0.7);
        let flp = build_pa(&inst, MidpointMode::MetricClosure).unwrap();
        let a = inst.alpha;
        for c in 0..flp.n_cities() {
            for f in 0..flp.n_facilities() {
                let city = flp.city(c);
                let (b1, b2) = inst.tasks[city.task];
                let (near, far) = match city.direction {
                    Direction::Forward => (b1, b2),
                    Direction::Backward => (b2, b1),
                };
                let h = flp.facility_hub(f);
                let closed = (1.0 + a / 2.0) * inst.d(near, h) + (a / 2.0) * inst.d(far, h);
                assert!((flp.city_facility(c, f) - closed).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn paired_cities_share_their_midpoint() {
        let inst = fig1_instance(Variant::PHM { p: 2 }, 0.5);
        let flp = build_pa(&inst, MidpointMode::MetricClosure).unwrap();
        for task in 0..inst.tasks.len() {
            let (fwd, bwd) = flp.task_cities(task);
            let (b1, b2) = inst.tasks[task];
            for f in 0..flp.n_facilities() {
                let h = flp.facility_hub(f);
                let lhs = flp.city_facility(fwd, f) - inst.d(b1, h);
                let rhs = flp.city_facility(bwd, f) - inst.d(b2, h);
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reduced_distances_form_a_metric() {
        let inst = fig1_instance(Variant::PHM { p: 2 }, 0.5);
        let flp = build_pa(&inst, MidpointMode::MetricClosure).unwrap();
        let report = validate_metric(
            |i, j| flp.gamma_indexed(i, j),
            flp.gamma_point_count(),
            MetricCheckMode::Exhaustive,
        );
        assert!(report.is_metric(), "{:?}", report.violations.first());
    }

    #[test]
    fn same_task_cities_are_midpoint_coincident() {
        let inst = fig1_instance(Variant::PHM { p: 2 }, 0.5);
        let flp = build_pa(&inst, MidpointMode::MetricClosure).unwrap();
        let (fwd, bwd) = flp.task_cities(0);
        let (b1, b2) = inst.tasks[0];
        // d(M, M) = 0, so the city-city entry is the endpoint distance
        assert_eq!(flp.city_city(fwd, bwd), inst.d(b1, b2));
    }
}
