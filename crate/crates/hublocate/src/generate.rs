//! Random benchmark instance families.
//!
//! Geometry is uniform on the unit square under a configurable p-norm;
//! tasks are ordered branch pairs drawn without replacement. Generation is
//! reproducible: the PRNG is a fixed splitmix64-seeded xoshiro256** and
//! the draw order is pinned as branch coordinates, hub coordinates, tasks,
//! then set-up costs.

use crate::error::{Error, Result};
use crate::model::{Geometry, HlpInstance, Variant};
use crate::rng::Xoshiro256StarStar;

/// Benchmark family sizes: `(tasks, branches, hubs)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// 1,000 tasks, 50 branches, 100 hubs.
    Small,
    /// 5,000 tasks, 100 branches, 200 hubs.
    Medium,
    /// 20,000 tasks, 1,000 branches, 400 hubs.
    Big,
    Custom {
        tasks: usize,
        branches: usize,
        hubs: usize,
    },
}

impl Family {
    pub fn sizes(self) -> (usize, usize, usize) {
        match self {
            Family::Small => (1000, 50, 100),
            Family::Medium => (5000, 100, 200),
            Family::Big => (20000, 1000, 400),
            Family::Custom {
                tasks,
                branches,
                hubs,
            } => (tasks, branches, hubs),
        }
    }
}

/// How hub set-up costs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetupMode {
    /// Uniform on `[0, 1.2]`.
    Uniform,
    /// Constant 1.
    SetOne,
}

impl SetupMode {
    pub fn name(self) -> &'static str {
        match self {
            SetupMode::Uniform => "uniform",
            SetupMode::SetOne => "set1",
        }
    }
}

/// Full generation recipe; `p` and/or `setup` select the variant.
#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub family: Family,
    pub alpha: f64,
    pub norm_p: f64,
    pub seed: u64,
    pub p: Option<usize>,
    pub setup: Option<SetupMode>,
    /// Multiplier applied to every set-up cost (1.0 = as drawn).
    pub setup_scale: f64,
}

impl GenConfig {
    pub fn new(family: Family, alpha: f64, seed: u64) -> Self {
        GenConfig {
            family,
            alpha,
            norm_p: 2.0,
            seed,
            p: None,
            setup: None,
            setup_scale: 1.0,
        }
    }
}

/// Generates one instance; identical configs give identical instances.
pub fn generate(cfg: &GenConfig) -> Result<HlpInstance> {
    let (n_tasks, n_branches, n_hubs) = cfg.family.sizes();
    if n_branches < 2 && n_tasks > 0 {
        return Err(Error::InvalidArgument(
            "tasks need at least two branches".into(),
        ));
    }
    let max_tasks = n_branches * n_branches.saturating_sub(1);
    if n_tasks > max_tasks {
        return Err(Error::InvalidArgument(format!(
            "{n_tasks} tasks cannot be drawn from {max_tasks} ordered branch pairs"
        )));
    }
    if cfg.p.is_none() && cfg.setup.is_none() {
        return Err(Error::InvalidArgument(
            "a variant needs p, set-up costs, or both".into(),
        ));
    }

    let mut rng = Xoshiro256StarStar::seed_from_u64(cfg.seed);
    let mut points = Vec::with_capacity(n_branches + n_hubs);
    for _ in 0..(n_branches + n_hubs) {
        points.push(vec![rng.next_f64(), rng.next_f64()]);
    }

    let mut tasks = Vec::with_capacity(n_tasks);
    let mut seen = std::collections::HashSet::with_capacity(n_tasks * 2);
    while tasks.len() < n_tasks {
        let b1 = rng.next_below(n_branches as u64) as usize;
        let mut b2 = rng.next_below(n_branches as u64 - 1) as usize;
        if b2 >= b1 {
            b2 += 1;
        }
        if seen.insert((b1, b2)) {
            tasks.push((b1, b2));
        }
    }

    let setup = cfg.setup.map(|mode| {
        (0..n_hubs)
            .map(|_| {
                let base = match mode {
                    SetupMode::Uniform => 1.2 * rng.next_f64(),
                    SetupMode::SetOne => 1.0,
                };
                base * cfg.setup_scale
            })
            .collect::<Vec<f64>>()
    });

    let variant = match (cfg.p, setup) {
        (Some(p), None) => Variant::PHM { p },
        (None, Some(setup)) => Variant::UHLP { setup },
        (Some(p), Some(setup)) => Variant::PHLP { p, setup },
        (None, None) => unreachable!(),
    };

    HlpInstance::new(
        cfg.alpha,
        variant,
        Geometry::Coordinates {
            norm_p: cfg.norm_p,
            points,
        },
        (0..n_branches).collect(),
        (n_branches..n_branches + n_hubs).collect(),
        tasks,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes_are_pinned() {
        let mut cfg = GenConfig::new(Family::Small, 0.4, 42);
        cfg.p = Some(6);
        let inst = generate(&cfg).unwrap();
        assert_eq!(inst.tasks.len(), 1000);
        assert_eq!(inst.branches.len(), 50);
        assert_eq!(inst.hubs.len(), 100);

        let mut cfg = GenConfig::new(Family::Medium, 0.4, 42);
        cfg.p = Some(10);
        let inst = generate(&cfg).unwrap();
        assert_eq!(
            (inst.tasks.len(), inst.branches.len(), inst.hubs.len()),
            (5000, 100, 200)
        );
    }

    #[test]
    fn identical_seeds_serialize_identically() {
        let mut cfg = GenConfig::new(
            Family::Custom {
                tasks: 40,
                branches: 10,
                hubs: 12,
            },
            0.7,
            9001,
        );
        cfg.setup = Some(SetupMode::Uniform);
        let a = generate(&cfg).unwrap().to_json();
        let b = generate(&cfg).unwrap().to_json();
        assert_eq!(a, b);
        cfg.seed = 9002;
        assert_ne!(generate(&cfg).unwrap().to_json(), a);
    }

    #[test]
    fn coordinates_and_costs_stay_in_range() {
        let mut cfg = GenConfig::new(
            Family::Custom {
                tasks: 100,
                branches: 20,
                hubs: 30,
            },
            0.5,
            7,
        );
        cfg.setup = Some(SetupMode::Uniform);
        let inst = generate(&cfg).unwrap();
        for v in 0..inst.n_vertices() {
            let pt = inst.point(v).unwrap();
            assert!(pt.iter().all(|x| (0.0..=1.0).contains(x)));
        }
        let setup = inst.variant.setup().unwrap();
        assert!(setup.iter().all(|c| (0.0..=1.2).contains(c)));

        cfg.setup = Some(SetupMode::SetOne);
        cfg.setup_scale = 2.0;
        let inst = generate(&cfg).unwrap();
        assert!(inst.variant.setup().unwrap().iter().all(|&c| c == 2.0));
    }

    #[test]
    fn tasks_have_no_duplicates_and_no_self_pairs() {
        let mut cfg = GenConfig::new(
            Family::Custom {
                tasks: 90, // dense: 90 of the 90 possible pairs
                branches: 10,
                hubs: 5,
            },
            0.5,
            3,
        );
        cfg.p = Some(2);
        let inst = generate(&cfg).unwrap();
        let unique: std::collections::HashSet<_> = inst.tasks.iter().collect();
        assert_eq!(unique.len(), 90);
        assert!(inst.tasks.iter().all(|&(a, b)| a != b));
    }

    #[test]
    fn infeasible_task_count_is_rejected() {
        let cfg = GenConfig {
            p: Some(1),
            ..GenConfig::new(
                Family::Custom {
                    tasks: 91,
                    branches: 10,
                    hubs: 5,
                },
                0.5,
                3,
            )
        };
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn both_directions_may_occur() {
        let mut cfg = GenConfig::new(
            Family::Custom {
                tasks: 6,
                branches: 3,
                hubs: 2,
            },
            0.5,
            1,
        );
        cfg.p = Some(1);
        let inst = generate(&cfg).unwrap();
        // all 6 ordered pairs of 3 branches, both directions present
        assert!(inst.tasks.contains(&(0, 1)) && inst.tasks.contains(&(1, 0)));
    }
}
