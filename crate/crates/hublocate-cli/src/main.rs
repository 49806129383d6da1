//! Command-line harness: generate instances, solve them, audit the proven
//! bounds, run benchmark sweeps and tabulate the guarantee curves.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when an audit or metric
//! check detects a violation.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use hublocate::audit::{audit_instance, AuditRow};
use hublocate::model::MetricCheckMode;
use hublocate::rng::SplitMix64;
use hublocate::{
    bounds, build_bap, build_pa, default_midpoint_mode, exact_hlp, generate, ilp_text,
    solve_bap, solve_pa, validate_metric, Family, FlpSolverKind, GenConfig, GreedyObjective,
    HlpInstance, HlpSolution, MidpointMode, SetupMode, SolveOptions, EXACT_FLP_LIMIT,
    EXACT_HLP_LIMIT,
};

mod csv_out;
use csv_out::OutputTarget;

#[derive(Parser)]
#[command(name = "hublocate", version, about = "Multi-allocation hub location benchmark harness")]
struct Cli {
    /// Worker threads for seed/instance fan-out (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance as JSON.
    Gen(GenArgs),
    /// Solve an instance with the reduction pipelines.
    Solve(SolveArgs),
    /// Solve an instance exactly by hub enumeration.
    Exact(ExactArgs),
    /// Audit every proven inequality on oracle-scale instances.
    Audit(AuditArgs),
    /// Benchmark sweep: generate, solve both pipelines, aggregate.
    Bench(BenchArgs),
    /// Tabulate the guarantee curves and their intersections.
    Bounds(BoundsArgs),
    /// Check the triangle inequality on an instance or its reduction.
    ValidateMetric(ValidateMetricArgs),
    /// Write the instance's integer program in LP format.
    ExportIlp(ExportIlpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Small,
    Medium,
    Big,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetupArg {
    Uniform,
    Set1,
}

impl From<SetupArg> for SetupMode {
    fn from(v: SetupArg) -> SetupMode {
        match v {
            SetupArg::Uniform => SetupMode::Uniform,
            SetupArg::Set1 => SetupMode::SetOne,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MidpointArg {
    Metric,
    Vector,
}

impl From<MidpointArg> for MidpointMode {
    fn from(v: MidpointArg) -> MidpointMode {
        match v {
            MidpointArg::Metric => MidpointMode::MetricClosure,
            MidpointArg::Vector => MidpointMode::VectorSpace,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GreedyObjectiveArg {
    Total,
    Max,
}

impl From<GreedyObjectiveArg> for GreedyObjective {
    fn from(v: GreedyObjectiveArg) -> GreedyObjective {
        match v {
            GreedyObjectiveArg::Total => GreedyObjective::Total,
            GreedyObjectiveArg::Max => GreedyObjective::Max,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Pa,
    Bap,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlpArg {
    Greedy,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionArg {
    None,
    Pa,
    Bap,
}

/// `--norm` accepts a number or `inf` for the max norm.
fn parse_norm(s: &str) -> Result<f64, String> {
    if s == "inf" || s == "infinity" {
        return Ok(f64::INFINITY);
    }
    let p: f64 = s.parse().map_err(|_| format!("bad norm {s:?}"))?;
    if p >= 1.0 {
        Ok(p)
    } else {
        Err("norm must be >= 1".into())
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Task count (custom family only).
    #[arg(long)]
    tasks: Option<usize>,
    /// Branch count (custom family only).
    #[arg(long)]
    branches: Option<usize>,
    /// Hub count (custom family only).
    #[arg(long)]
    hubs: Option<usize>,
    #[arg(long)]
    alpha: f64,
    /// Open-hub bound; selects the cardinality variants.
    #[arg(long)]
    p: Option<usize>,
    /// Set-up cost mode; selects the cost-bearing variants.
    #[arg(long, value_enum)]
    setup: Option<SetupArg>,
    /// Multiplier on every set-up cost.
    #[arg(long, default_value_t = 1.0)]
    setup_scale: f64,
    #[arg(long, value_parser = parse_norm, default_value = "2")]
    norm: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    algo: AlgoArg,
    #[arg(long, value_enum, default_value = "greedy")]
    flp: FlpArg,
    /// Mid-point definition (default: vector for coordinates, else metric).
    #[arg(long, value_enum)]
    midpoint: Option<MidpointArg>,
    #[arg(long, value_enum, default_value = "total")]
    greedy_objective: GreedyObjectiveArg,
    /// Facility enumeration limit for the exact sub-solver.
    #[arg(long, default_value_t = EXACT_FLP_LIMIT)]
    limit: usize,
    /// CSV file to append to (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    instance: PathBuf,
    /// Hub enumeration limit.
    #[arg(long, default_value_t = EXACT_HLP_LIMIT)]
    limit: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    /// Audit this instance file instead of generated ones.
    instance: Option<PathBuf>,
    /// Number of generated instances.
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 6)]
    max_branches: usize,
    #[arg(long, default_value_t = 8)]
    max_hubs: usize,
    #[arg(long, default_value_t = 10)]
    max_tasks: usize,
    /// Discount grid for generated instances.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict to one mid-point mode (default: both where applicable).
    #[arg(long, value_enum)]
    midpoint: Option<MidpointArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    tasks: Option<usize>,
    #[arg(long)]
    branches: Option<usize>,
    #[arg(long)]
    hubs: Option<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    alphas: Vec<f64>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, value_enum)]
    setup: Option<SetupArg>,
    #[arg(long, default_value_t = 1.0)]
    setup_scale: f64,
    #[arg(long, value_parser = parse_norm, default_value = "2")]
    norm: f64,
    /// Seeds per configuration.
    #[arg(long, default_value_t = 30)]
    seeds: u64,
    /// First seed of the sweep.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "greedy")]
    flp: FlpArg,
    #[arg(long, value_enum)]
    midpoint: Option<MidpointArg>,
    #[arg(long, value_enum, default_value = "total")]
    greedy_objective: GreedyObjectiveArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// FLP sub-solver guarantee.
    #[arg(long)]
    gamma: f64,
    /// Grid step over the discount factor.
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateMetricArgs {
    instance: PathBuf,
    /// Check the raw distances or a reduction's distances.
    #[arg(long, value_enum, default_value = "none")]
    reduction: ReductionArg,
    #[arg(long, value_enum)]
    midpoint: Option<MidpointArg>,
    /// Sampled triple count; exhaustive when omitted and small enough.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExportIlpArgs {
    instance: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let jobs = cli.jobs;
    let run = || match run_command(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    };
    match jobs {
        None => run(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build();
            match pool {
                Ok(pool) => pool.install(run),
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(1)
                }
            }
        }
    }
}

fn run_command(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::ValidateMetric(args) => cmd_validate_metric(args),
        Command::ExportIlp(args) => cmd_export_ilp(args),
    }
}

fn family_of(
    family: FamilyArg,
    tasks: Option<usize>,
    branches: Option<usize>,
    hubs: Option<usize>,
) -> Result<Family> {
    match family {
        FamilyArg::Small => Ok(Family::Small),
        FamilyArg::Medium => Ok(Family::Medium),
        FamilyArg::Big => Ok(Family::Big),
        FamilyArg::Custom => {
            let (Some(tasks), Some(branches), Some(hubs)) = (tasks, branches, hubs) else {
                bail!("--family custom needs --tasks, --branches and --hubs");
            };
            Ok(Family::Custom {
                tasks,
                branches,
                hubs,
            })
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let cfg = GenConfig {
        family: family_of(args.family, args.tasks, args.branches, args.hubs)?,
        alpha: args.alpha,
        norm_p: args.norm,
        seed: args.seed,
        p: args.p,
        setup: args.setup.map(Into::into),
        setup_scale: args.setup_scale,
    };
    let inst = generate(&cfg)?;
    let mut text = inst.to_json();
    text.push('\n');
    OutputTarget::new(args.out).write(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn solver_for(inst: &HlpInstance, flp: FlpArg) -> FlpSolverKind {
    match flp {
        FlpArg::Exact => FlpSolverKind::ExactEnumeration,
        FlpArg::Greedy => {
            FlpSolverKind::greedy_for(inst.variant.p(), inst.variant.setup().is_some())
        }
    }
}

fn flp_name(flp: FlpArg) -> &'static str {
    match flp {
        FlpArg::Greedy => "greedy",
        FlpArg::Exact => "exact",
    }
}

const SOLVE_HEADER: &str = "instance,algo,flp,objective,transport,setup,open_hubs,wall_ms";

fn solve_row(instance: &str, algo: &str, flp: &str, sol: &HlpSolution, wall_ms: f64) -> String {
    format!(
        "{instance},{algo},{flp},{},{},{},{},{wall_ms:.3}\n",
        sol.objective,
        sol.transport_cost,
        sol.setup_cost,
        sol.open_hubs.len()
    )
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let inst = HlpInstance::from_path(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let solver = solver_for(&inst, args.flp);
    let opts = SolveOptions {
        midpoint: args.midpoint.map(Into::into),
        greedy_objective: args.greedy_objective.into(),
        exact_limit: args.limit,
    };
    let name = args.instance.display().to_string();
    let flp = flp_name(args.flp);
    let mut rows = String::new();
    let timed = |f: &dyn Fn() -> hublocate::Result<HlpSolution>| -> Result<(HlpSolution, f64)> {
        let start = Instant::now();
        let sol = f()?;
        Ok((sol, start.elapsed().as_secs_f64() * 1e3))
    };
    match args.algo {
        AlgoArg::Pa => {
            let (sol, ms) = timed(&|| solve_pa(&inst, solver, &opts))?;
            rows.push_str(&solve_row(&name, "pa", flp, &sol, ms));
        }
        AlgoArg::Bap => {
            let (sol, ms) = timed(&|| solve_bap(&inst, solver, &opts))?;
            rows.push_str(&solve_row(&name, "bap", flp, &sol, ms));
        }
        AlgoArg::Both => {
            let (pa, pa_ms) = timed(&|| solve_pa(&inst, solver, &opts))?;
            let (bap, bap_ms) = timed(&|| solve_bap(&inst, solver, &opts))?;
            let best = if bap.objective < pa.objective {
                bap.clone()
            } else {
                pa.clone()
            };
            rows.push_str(&solve_row(&name, "pa", flp, &pa, pa_ms));
            rows.push_str(&solve_row(&name, "bap", flp, &bap, bap_ms));
            rows.push_str(&solve_row(&name, "both", flp, &best, pa_ms + bap_ms));
        }
    }
    OutputTarget::new(args.out).append_csv("# hublocate solve v1", SOLVE_HEADER, &rows)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact(args: ExactArgs) -> Result<ExitCode> {
    let inst = HlpInstance::from_path(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let start = Instant::now();
    let sol = exact_hlp(&inst, args.limit)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let name = args.instance.display().to_string();
    let rows = solve_row(&name, "exact", "-", &sol, ms);
    OutputTarget::new(args.out).append_csv("# hublocate solve v1", SOLVE_HEADER, &rows)?;
    Ok(ExitCode::SUCCESS)
}

const AUDIT_HEADER: &str = "instance,alpha,variant,midpoint,opt_hlp,opt_flp,pa,bap,combined,\
strategy1,strategy2,lemma5_slack,lemma1_slack,lemma2_slack,bap1_slack,combined_slack,\
s1_min_slack,s2_min_slack,opt_lb_slack,combined_ratio,violations";

fn audit_row_csv(row: &AuditRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        row.instance,
        row.alpha,
        row.variant,
        row.midpoint,
        row.opt_hlp,
        row.opt_flp,
        row.pa,
        row.bap,
        row.combined,
        row.strategy1,
        row.strategy2,
        row.lemma5_slack,
        row.lemma1_slack,
        row.lemma2_slack,
        row.bap1_slack,
        row.combined_slack,
        row.s1_min_slack,
        row.s2_min_slack,
        row.opt_lb_slack,
        row.combined_ratio,
        row.violations.join(";")
    )
}

/// Deterministic per-index audit sizes within the configured caps.
fn audit_gen_config(args: &AuditArgs, index: usize, alpha: f64) -> GenConfig {
    let mut mix = SplitMix64::new(args.seed.wrapping_add(index as u64));
    let branches = 3 + (mix.next_u64() as usize) % args.max_branches.saturating_sub(2).max(1);
    let hubs = 2 + (mix.next_u64() as usize) % args.max_hubs.saturating_sub(1).max(1);
    let max_tasks = (branches * (branches - 1)).min(args.max_tasks);
    let tasks = 1 + (mix.next_u64() as usize) % max_tasks;
    let p = 1 + (mix.next_u64() as usize) % hubs.min(4);
    let mut cfg = GenConfig::new(
        Family::Custom {
            tasks,
            branches,
            hubs,
        },
        alpha,
        mix.next_u64(),
    );
    cfg.p = Some(p);
    cfg
}

fn cmd_audit(args: AuditArgs) -> Result<ExitCode> {
    use rayon::prelude::*;

    let modes_for = |inst: &HlpInstance| -> Vec<MidpointMode> {
        match args.midpoint {
            Some(m) => vec![m.into()],
            None if inst.has_coordinates() => {
                vec![MidpointMode::VectorSpace, MidpointMode::MetricClosure]
            }
            None => vec![MidpointMode::MetricClosure],
        }
    };

    let rows: Vec<AuditRow> = match &args.instance {
        Some(path) => {
            let inst = HlpInstance::from_path(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let name = path.display().to_string();
            modes_for(&inst)
                .into_iter()
                .map(|mode| audit_instance(&inst, &name, mode))
                .collect::<hublocate::Result<_>>()?
        }
        None => {
            let units: Vec<(usize, usize)> = (0..args.instances)
                .flat_map(|i| (0..args.alphas.len()).map(move |a| (i, a)))
                .collect();
            let mut rows = units
                .par_iter()
                .map(|&(i, a)| {
                    let alpha = args.alphas[a];
                    let cfg = audit_gen_config(&args, i, alpha);
                    let inst = generate(&cfg)?;
                    let name = format!("gen-{i:04}");
                    let rows: hublocate::Result<Vec<AuditRow>> = modes_for(&inst)
                        .into_iter()
                        .map(|mode| audit_instance(&inst, &name, mode))
                        .collect();
                    rows.map(|r| ((i, a), r))
                })
                .collect::<hublocate::Result<Vec<_>>>()?;
            rows.sort_by_key(|(key, _)| *key);
            rows.into_iter().flat_map(|(_, r)| r).collect()
        }
    };

    let mut body = String::new();
    let mut violation_count = 0usize;
    for row in &rows {
        violation_count += row.violations.len();
        body.push_str(&audit_row_csv(row));
    }
    OutputTarget::new(args.out).write_csv("# hublocate audit v1", AUDIT_HEADER, &body)?;
    eprintln!(
        "audited {} rows, {} violation(s)",
        rows.len(),
        violation_count
    );
    Ok(if violation_count == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

const BENCH_HEADER: &str = "family,param,alpha,stat,bap,pa";

fn family_name(family: FamilyArg) -> &'static str {
    match family {
        FamilyArg::Small => "small",
        FamilyArg::Medium => "medium",
        FamilyArg::Big => "big",
        FamilyArg::Custom => "custom",
    }
}

fn param_label(p: Option<usize>, setup: Option<SetupArg>, scale: f64) -> String {
    let mut parts = Vec::new();
    if let Some(p) = p {
        parts.push(format!("p={p}"));
    }
    if let Some(setup) = setup {
        let mode: SetupMode = setup.into();
        if scale == 1.0 {
            parts.push(format!("setup={}", mode.name()));
        } else {
            parts.push(format!("setup={}*{scale}", mode.name()));
        }
    }
    parts.join(";")
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    use rayon::prelude::*;

    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    if args.p.is_none() && args.setup.is_none() {
        bail!("benchmark needs --p, --setup or both");
    }
    let family = family_of(args.family, args.tasks, args.branches, args.hubs)?;
    let label = param_label(args.p, args.setup, args.setup_scale);
    let fam_name = family_name(args.family);

    let units: Vec<(usize, u64)> = (0..args.alphas.len())
        .flat_map(|a| (0..args.seeds).map(move |s| (a, s)))
        .collect();
    let mut results: Vec<((usize, u64), f64, f64)> = units
        .par_iter()
        .map(|&(a, s)| {
            let cfg = GenConfig {
                family,
                alpha: args.alphas[a],
                norm_p: args.norm,
                seed: args.seed + s,
                p: args.p,
                setup: args.setup.map(Into::into),
                setup_scale: args.setup_scale,
            };
            let inst = generate(&cfg)?;
            let solver = solver_for(&inst, args.flp);
            let opts = SolveOptions {
                midpoint: args.midpoint.map(Into::into),
                greedy_objective: args.greedy_objective.into(),
                exact_limit: EXACT_FLP_LIMIT,
            };
            let pa = solve_pa(&inst, solver, &opts)?;
            let bap = solve_bap(&inst, solver, &opts)?;
            Ok(((a, s), bap.objective, pa.objective))
        })
        .collect::<hublocate::Result<_>>()?;
    results.sort_by_key(|(key, _, _)| *key);

    let mut body = String::new();
    for (a, &alpha) in args.alphas.iter().enumerate() {
        let block: Vec<&((usize, u64), f64, f64)> =
            results.iter().filter(|((ai, _), _, _)| *ai == a).collect();
        for ((_, s), bap, pa) in block.iter().copied() {
            body.push_str(&format!(
                "{fam_name},{label},{alpha},seed:{},{},{}\n",
                args.seed + s,
                bap,
                pa
            ));
        }
        let mut baps: Vec<f64> = block.iter().map(|(_, b, _)| *b).collect();
        let mut pas: Vec<f64> = block.iter().map(|(_, _, p)| *p).collect();
        let bap_mean = baps.iter().sum::<f64>() / baps.len() as f64;
        let pa_mean = pas.iter().sum::<f64>() / pas.len() as f64;
        baps.sort_by(f64::total_cmp);
        pas.sort_by(f64::total_cmp);
        body.push_str(&format!(
            "{fam_name},{label},{alpha},mean,{bap_mean},{pa_mean}\n"
        ));
        body.push_str(&format!(
            "{fam_name},{label},{alpha},median,{},{}\n",
            median(&baps),
            median(&pas)
        ));
    }
    OutputTarget::new(args.out).write_csv("# hublocate bench v1", BENCH_HEADER, &body)?;
    Ok(ExitCode::SUCCESS)
}

const BOUNDS_HEADER: &str = "alpha,bap1,bap2,pa1,pa2,combined";

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode> {
    if args.gamma <= 0.0 {
        bail!("--gamma must be positive");
    }
    if !(args.step > 0.0 && args.step <= 1.0) {
        bail!("--step must be in (0, 1]");
    }
    let gamma = args.gamma;
    let (bap_alpha, bap_value) = bounds::bap_guarantee(gamma);
    let (pa_alpha, pa_value) = bounds::pa_guarantee(gamma);
    let (comb_alpha, comb_value) = bounds::combined_guarantee(gamma);
    let summary = format!(
        "# gamma={gamma} bap_guarantee={bap_value:.6} (alpha={bap_alpha:.6}) \
pa_guarantee={pa_value:.6} (alpha={pa_alpha:.6}) \
combined_guarantee={comb_value:.6} (alpha={comb_alpha:.6})"
    );
    let steps = (1.0 / args.step).round() as usize;
    let mut body = String::new();
    for i in 1..=steps {
        let alpha = i as f64 * args.step;
        body.push_str(&format!(
            "{alpha},{},{},{},{},{}\n",
            bounds::bap1(alpha),
            bounds::bap2(alpha, gamma),
            bounds::pa1(alpha, gamma),
            bounds::pa2(alpha, gamma),
            bounds::pa2(alpha, gamma).min(bounds::bap1(alpha)),
        ));
    }
    let header = format!("# hublocate bounds v1\n{summary}");
    OutputTarget::new(args.out.clone()).write_csv(&header, BOUNDS_HEADER, &body)?;
    if args.out.is_some() {
        println!("{}", summary.trim_start_matches("# "));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate_metric(args: ValidateMetricArgs) -> Result<ExitCode> {
    let inst = HlpInstance::from_path(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let (n, label): (usize, &str) = match args.reduction {
        ReductionArg::None => (inst.n_vertices(), "instance distances"),
        ReductionArg::Pa => (2 * inst.tasks.len() + inst.hubs.len(), "pa reduction"),
        ReductionArg::Bap => (2 * inst.tasks.len() + inst.hubs.len(), "bap reduction"),
    };
    let mode = match args.samples {
        Some(n_triples) => MetricCheckMode::Sampled {
            n_triples,
            seed: args.seed,
        },
        None if n <= 128 => MetricCheckMode::Exhaustive,
        None => MetricCheckMode::Sampled {
            n_triples: 10_000,
            seed: args.seed,
        },
    };
    let report = match args.reduction {
        ReductionArg::None => validate_metric(|i, j| inst.d(i, j), n, mode),
        ReductionArg::Pa => {
            let midpoint = args
                .midpoint
                .map(Into::into)
                .unwrap_or_else(|| default_midpoint_mode(&inst));
            let flp = build_pa(&inst, midpoint)?;
            validate_metric(|i, j| flp.gamma_indexed(i, j), n, mode)
        }
        ReductionArg::Bap => {
            let flp = build_bap(&inst);
            validate_metric(|i, j| flp.gamma_indexed(i, j), n, mode)
        }
    };
    println!(
        "{label}: checked={} violations={} max_violation={}",
        report.checked, report.violation_count, report.max_violation
    );
    Ok(if report.is_metric() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_export_ilp(args: ExportIlpArgs) -> Result<ExitCode> {
    let inst = HlpInstance::from_path(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    OutputTarget::new(args.out).write(&ilp_text(&inst))?;
    Ok(ExitCode::SUCCESS)
}
