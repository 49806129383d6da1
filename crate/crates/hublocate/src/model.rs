//! Problem instances: geometry, distance evaluation and metric validation.
//!
//! A hub location instance is a set of vertices (branches and potential
//! hubs, possibly overlapping), a metric distance on them, a list of
//! ordered delivery tasks and the inter-hub discount `alpha`. Distances
//! come either from d-dimensional coordinates under a p-norm (p >= 1,
//! including the max norm for p = inf) or from an explicit symmetric
//! matrix that is validated for metricity on load.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::Xoshiro256StarStar;

/// Absolute tolerance for triangle-inequality checks.
pub const METRIC_TOL: f64 = 1e-9;

pub type VertexId = usize;

/// How vertex-to-vertex distances are defined.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum Geometry {
    /// Points in R^d measured by a p-norm (`norm_p >= 1`, `inf` = max norm).
    #[serde(rename = "coords")]
    Coordinates {
        #[serde(
            serialize_with = "serialize_norm",
            deserialize_with = "deserialize_norm"
        )]
        norm_p: f64,
        points: Vec<Vec<f64>>,
    },
    /// Explicit symmetric matrix over all vertices.
    #[serde(rename = "matrix")]
    ExplicitMatrix { dist: Vec<Vec<f64>> },
}

// JSON has no literal for infinity, so the max norm round-trips as "inf".
fn serialize_norm<S: serde::Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

fn deserialize_norm<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrStr {
        Num(f64),
        Str(String),
    }
    match NumOrStr::deserialize(d)? {
        NumOrStr::Num(p) => Ok(p),
        NumOrStr::Str(s) if s == "inf" || s == "infinity" => Ok(f64::INFINITY),
        NumOrStr::Str(s) => Err(serde::de::Error::custom(format!("bad norm_p: {s:?}"))),
    }
}

/// p-norm of the componentwise difference of two points.
pub fn p_norm_distance(a: &[f64], b: &[f64], p: f64) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if p.is_infinite() {
        return a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
    }
    if p == 2.0 {
        let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        return sq.sqrt();
    }
    if p == 1.0 {
        return a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    }
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs().powf(p)).sum();
    sum.powf(1.0 / p)
}

impl Geometry {
    /// Number of vertices covered by this geometry.
    pub fn len(&self) -> usize {
        match self {
            Geometry::Coordinates { points, .. } => points.len(),
            Geometry::ExplicitMatrix { dist } => dist.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance between two vertices; callers must pass valid ids.
    /// Computed in one canonical order so that d(u,v) and d(v,u) are the
    /// same bit pattern.
    pub(crate) fn d(&self, u: VertexId, v: VertexId) -> f64 {
        if u == v {
            return 0.0;
        }
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        match self {
            Geometry::Coordinates { norm_p, points } => {
                p_norm_distance(&points[lo], &points[hi], *norm_p)
            }
            Geometry::ExplicitMatrix { dist } => dist[lo][hi],
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Geometry::Coordinates { norm_p, points } => {
                if !(*norm_p >= 1.0) {
                    return Err(Error::invalid(format!("norm_p must be >= 1, got {norm_p}")));
                }
                let dim = points.first().map_or(0, Vec::len);
                for (i, pt) in points.iter().enumerate() {
                    if pt.len() != dim {
                        return Err(Error::invalid(format!(
                            "point {i} has dimension {}, expected {dim}",
                            pt.len()
                        )));
                    }
                    if pt.iter().any(|x| !x.is_finite()) {
                        return Err(Error::invalid(format!("point {i} has non-finite coordinate")));
                    }
                }
                Ok(())
            }
            Geometry::ExplicitMatrix { dist } => {
                let n = dist.len();
                for (i, row) in dist.iter().enumerate() {
                    if row.len() != n {
                        return Err(Error::invalid(format!(
                            "distance matrix row {i} has {} entries, expected {n}",
                            row.len()
                        )));
                    }
                }
                for i in 0..n {
                    if dist[i][i] != 0.0 {
                        return Err(Error::invalid(format!("dist[{i}][{i}] must be 0")));
                    }
                    for j in 0..n {
                        let v = dist[i][j];
                        if !v.is_finite() || v < 0.0 {
                            return Err(Error::invalid(format!(
                                "dist[{i}][{j}] = {v} is not a nonnegative finite value"
                            )));
                        }
                        if dist[i][j] != dist[j][i] {
                            return Err(Error::invalid(format!(
                                "matrix not symmetric at ({i},{j}): {} vs {}",
                                dist[i][j], dist[j][i]
                            )));
                        }
                    }
                }
                let report = validate_metric(|i, j| dist[i][j], n, MetricCheckMode::Exhaustive);
                if let Some(v) = report.violations.first() {
                    return Err(Error::invalid(format!(
                        "triangle inequality violated: d({},{}) + d({},{}) < d({},{}) by {:.3e}",
                        v.i, v.j, v.j, v.k, v.i, v.k, v.amount
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Problem variant: cardinality bound, set-up costs, or both.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type")]
pub enum Variant {
    #[serde(rename = "pHM")]
    PHM { p: usize },
    #[serde(rename = "uHLP")]
    UHLP { setup: Vec<f64> },
    #[serde(rename = "pHLP")]
    PHLP { p: usize, setup: Vec<f64> },
}

impl Variant {
    pub fn p(&self) -> Option<usize> {
        match self {
            Variant::PHM { p } | Variant::PHLP { p, .. } => Some(*p),
            Variant::UHLP { .. } => None,
        }
    }

    pub fn setup(&self) -> Option<&[f64]> {
        match self {
            Variant::UHLP { setup } | Variant::PHLP { setup, .. } => Some(setup),
            Variant::PHM { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::PHM { .. } => "pHM",
            Variant::UHLP { .. } => "uHLP",
            Variant::PHLP { .. } => "pHLP",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A multi-allocation hub location instance.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HlpInstance {
    #[serde(default = "default_version")]
    pub version: u32,
    pub alpha: f64,
    pub variant: Variant,
    pub geometry: Geometry,
    pub branches: Vec<VertexId>,
    pub hubs: Vec<VertexId>,
    pub tasks: Vec<(VertexId, VertexId)>,
}

fn default_version() -> u32 {
    1
}

impl HlpInstance {
    pub fn new(
        alpha: f64,
        variant: Variant,
        geometry: Geometry,
        branches: Vec<VertexId>,
        hubs: Vec<VertexId>,
        tasks: Vec<(VertexId, VertexId)>,
    ) -> Result<Self> {
        let inst = HlpInstance {
            version: 1,
            alpha,
            variant,
            geometry,
            branches,
            hubs,
            tasks,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn n_vertices(&self) -> usize {
        self.geometry.len()
    }

    /// Checks every instance invariant; geometry metricity included.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid(format!(
                "alpha must be in [0,1], got {}",
                self.alpha
            )));
        }
        self.geometry.validate()?;
        let n = self.n_vertices();
        for &b in &self.branches {
            if b >= n {
                return Err(Error::UnknownVertex(b));
            }
        }
        for &h in &self.hubs {
            if h >= n {
                return Err(Error::UnknownVertex(h));
            }
        }
        if self.hubs.is_empty() {
            return Err(Error::invalid("instance has no potential hubs"));
        }
        let mut seen = vec![false; n];
        for &h in &self.hubs {
            if seen[h] {
                return Err(Error::invalid(format!("duplicate hub id {h}")));
            }
            seen[h] = true;
        }
        let mut is_branch = vec![false; n];
        for &b in &self.branches {
            if is_branch[b] {
                return Err(Error::invalid(format!("duplicate branch id {b}")));
            }
            is_branch[b] = true;
        }
        if let Some(p) = self.variant.p() {
            if p == 0 || p > self.hubs.len() {
                return Err(Error::invalid(format!(
                    "p = {p} must be in 1..={}",
                    self.hubs.len()
                )));
            }
        }
        if let Some(setup) = self.variant.setup() {
            if setup.len() != self.hubs.len() {
                return Err(Error::invalid(format!(
                    "{} set-up costs for {} hubs",
                    setup.len(),
                    self.hubs.len()
                )));
            }
            if setup.iter().any(|c| !c.is_finite() || *c < 0.0) {
                return Err(Error::invalid("set-up costs must be nonnegative"));
            }
        }
        let mut task_seen = std::collections::HashSet::new();
        for &(b1, b2) in &self.tasks {
            if b1 >= n || !is_branch[b1] {
                return Err(Error::invalid(format!("task endpoint {b1} is not a branch")));
            }
            if b2 >= n || !is_branch[b2] {
                return Err(Error::invalid(format!("task endpoint {b2} is not a branch")));
            }
            if b1 == b2 {
                return Err(Error::invalid(format!(
                    "task ({b1},{b1}) has identical endpoints"
                )));
            }
            if !task_seen.insert((b1, b2)) {
                return Err(Error::invalid(format!("duplicate task ({b1},{b2})")));
            }
        }
        Ok(())
    }

    /// Distance between two vertices.
    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<f64> {
        let n = self.n_vertices();
        if u >= n {
            return Err(Error::UnknownVertex(u));
        }
        if v >= n {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.geometry.d(u, v))
    }

    /// Unchecked distance for hot paths; ids must be valid.
    #[inline]
    pub fn d(&self, u: VertexId, v: VertexId) -> f64 {
        self.geometry.d(u, v)
    }

    /// Cost of the tour `b1 -> h -> h' -> b2`; the inter-hub leg is
    /// discounted by alpha and vanishes exactly when `h == h'`.
    pub fn tour_cost(&self, b1: VertexId, h: VertexId, h2: VertexId, b2: VertexId) -> f64 {
        self.d(b1, h) + self.alpha * self.d(h, h2) + self.d(h2, b2)
    }

    /// Coordinates accessor; `None` for matrix geometry.
    pub fn point(&self, v: VertexId) -> Option<&[f64]> {
        match &self.geometry {
            Geometry::Coordinates { points, .. } => points.get(v).map(Vec::as_slice),
            Geometry::ExplicitMatrix { .. } => None,
        }
    }

    pub fn has_coordinates(&self) -> bool {
        matches!(self.geometry, Geometry::Coordinates { .. })
    }

    pub fn norm_p(&self) -> Option<f64> {
        match &self.geometry {
            Geometry::Coordinates { norm_p, .. } => Some(*norm_p),
            Geometry::ExplicitMatrix { .. } => None,
        }
    }

    /// Total set-up cost of a hub set (0 for the pHM).
    pub fn setup_cost_of(&self, open_hubs: &[VertexId]) -> f64 {
        match self.variant.setup() {
            None => 0.0,
            Some(setup) => open_hubs
                .iter()
                .map(|h| {
                    let idx = self
                        .hubs
                        .iter()
                        .position(|x| x == h)
                        .expect("open hub not in hub list");
                    setup[idx]
                })
                .sum(),
        }
    }

    // ---- serialization ----

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: HlpInstance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    /// Compact single-document JSON; byte-stable for identical instances.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization cannot fail")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn write_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// A feasible solution: open hubs, one tour per task, cost breakdown.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HlpSolution {
    /// Sorted open hub ids.
    pub open_hubs: Vec<VertexId>,
    /// Per-task hub pair `(h, h')`; a single-hub tour has `h == h'`.
    pub tours: Vec<(VertexId, VertexId)>,
    pub transport_cost: f64,
    pub setup_cost: f64,
    pub objective: f64,
}

impl HlpSolution {
    /// Recomputes the objective from the open set and tours; used to
    /// cross-check reported costs.
    pub fn recompute_objective(&self, inst: &HlpInstance) -> f64 {
        let transport: f64 = inst
            .tasks
            .iter()
            .zip(&self.tours)
            .map(|(&(b1, b2), &(h, h2))| inst.tour_cost(b1, h, h2, b2))
            .sum();
        transport + inst.setup_cost_of(&self.open_hubs)
    }
}

/// Triple-sampling mode for [`validate_metric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricCheckMode {
    /// All unordered triples (i, j, k), i < k, j distinct from both.
    Exhaustive,
    /// `n_triples` seeded-random distinct triples.
    Sampled { n_triples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// By how much d(i,k) exceeds d(i,j) + d(j,k).
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub checked: usize,
    /// At most [`MetricReport::MAX_RECORDED`] concrete violations.
    pub violations: Vec<MetricViolation>,
    pub violation_count: usize,
    pub max_violation: f64,
}

impl MetricReport {
    pub const MAX_RECORDED: usize = 1000;

    pub fn is_metric(&self) -> bool {
        self.violation_count == 0
    }
}

/// Checks the triangle inequality `d(i,j) + d(j,k) >= d(i,k) - 1e-9` over
/// a vertex set, either exhaustively or on seeded-random triples.
pub fn validate_metric(
    dist: impl Fn(usize, usize) -> f64,
    vertex_count: usize,
    mode: MetricCheckMode,
) -> MetricReport {
    let mut report = MetricReport {
        checked: 0,
        violations: Vec::new(),
        violation_count: 0,
        max_violation: 0.0,
    };
    let check = |i: usize, j: usize, k: usize, report: &mut MetricReport| {
        report.checked += 1;
        let amount = dist(i, k) - (dist(i, j) + dist(j, k));
        if amount > METRIC_TOL {
            report.violation_count += 1;
            report.max_violation = report.max_violation.max(amount);
            if report.violations.len() < MetricReport::MAX_RECORDED {
                report.violations.push(MetricViolation { i, j, k, amount });
            }
        }
    };
    match mode {
        MetricCheckMode::Exhaustive => {
            for i in 0..vertex_count {
                for k in (i + 1)..vertex_count {
                    for j in 0..vertex_count {
                        if j != i && j != k {
                            check(i, j, k, &mut report);
                        }
                    }
                }
            }
        }
        MetricCheckMode::Sampled { n_triples, seed } => {
            if vertex_count >= 3 {
                let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
                for _ in 0..n_triples {
                    let i = rng.next_below(vertex_count as u64) as usize;
                    let mut j = rng.next_below(vertex_count as u64 - 1) as usize;
                    if j >= i {
                        j += 1;
                    }
                    let mut k;
                    loop {
                        k = rng.next_below(vertex_count as u64) as usize;
                        if k != i && k != j {
                            break;
                        }
                    }
                    check(i, j, k, &mut report);
                }
            }
        }
    }
    report
}
