use std::io::Write;
use std::path::Path;

use anyhow::Context;
use labelsearch::cost::{ledger_total, perf_per_cost, scaling_table, write_scaling_csv, CostLedger};
use labelsearch::harness::{
    conventional_pipeline, generate_task, joint_report, scaling_experiment, ScalingConfig, SelfTrainingConfig,
    Summary, TaskSpec,
};
use labelsearch::io::{read_task, task_to_json, write_atomic};
use labelsearch::search::{
    chance_hit_experiment, exhaustive_search, heuristic_search, ExhaustiveConfig, HeuristicConfig, HeuristicKind,
    DEFAULT_CAP,
};
use labelsearch::stats::log2_slope;
use labelsearch::{LearnerKind, LinearFit64, ScalingRow64, SearchOutcome, Task64};
use serde::Serialize;

use crate::config::{
    BaselineArgs, BaselineMethod, ChanceHitArgs, CostLedgerArgs, CostTableArgs, GenDataArgs, NValues, RegimeArg,
    ScalingArgs, SearchArgs, SearchMethod,
};

/// Missing or inconsistent arguments discovered after merging the config
/// file; reported like any other usage error.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Usage(pub String);

fn need<T>(value: Option<T>, flag: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| Usage(format!("missing required argument {flag}")).into())
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => write_atomic(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn emit_summary<S: Serialize, R: Serialize>(out: Option<&Path>, summary: &Summary<S, R>) -> anyhow::Result<()> {
    emit(out, summary.to_json()?.as_bytes())
}

fn load_task(path: &Path) -> anyhow::Result<Task64> {
    read_task(path).with_context(|| format!("reading task {}", path.display()))
}

impl GenDataArgs {
    pub fn defaults() -> Self {
        Self {
            m: Some(8),
            n: Some(12),
            d: Some(2),
            sep: Some(4.0),
            sigma: Some(1.0),
            seed: Some(0),
            out: None,
        }
    }
}

pub fn gen_data(args: &GenDataArgs) -> anyhow::Result<()> {
    let spec = TaskSpec {
        m: need(args.m, "--m")?,
        n: need(args.n, "--n")?,
        d: need(args.d, "--d")?,
        separation: need(args.sep, "--sep")?,
        noise_sigma: need(args.sigma, "--sigma")?,
        seed: need(args.seed, "--seed")?,
    };
    let task = generate_task(&spec)?;
    emit(args.out.as_deref(), task_to_json(&task)?.as_bytes())
}

#[derive(Serialize)]
struct SearchReport {
    n: usize,
    m: usize,
    best_mu: f64,
    best_correct: usize,
    k_opt: u64,
    argmin: Vec<u64>,
    evaluations: u64,
    elapsed_secs: f64,
    mean_eval_secs: f64,
}

impl SearchReport {
    fn new(task: &Task64, out: SearchOutcome) -> Self {
        Self {
            n: task.n(),
            m: task.m(),
            best_mu: out.best_mu,
            best_correct: out.best_correct,
            k_opt: out.k_opt,
            argmin: out.argmin,
            evaluations: out.evaluations,
            elapsed_secs: out.elapsed.as_secs_f64(),
            mean_eval_secs: out.mean_eval_time.as_secs_f64(),
        }
    }
}

impl SearchArgs {
    pub fn defaults() -> Self {
        Self {
            method: None,
            task: None,
            learner: Some(LearnerKind::Centroid),
            workers: Some(default_workers()),
            cap: Some(DEFAULT_CAP),
            budget: Some(10_000),
            restarts: Some(4),
            t0: Some(2.0),
            gamma: Some(0.995),
            seed: Some(0),
            out: None,
        }
    }
}

pub fn search(args: &SearchArgs) -> anyhow::Result<()> {
    let method = need(args.method, "<METHOD>")?;
    let task = load_task(&need(args.task.clone(), "--task")?)?;
    let learner = need(args.learner, "--learner")?;
    let outcome = match method {
        SearchMethod::Exhaustive => {
            let config = ExhaustiveConfig {
                workers: need(args.workers, "--workers")?,
                cap: need(args.cap, "--cap")?,
            };
            exhaustive_search(&task, learner, config)?
        }
        SearchMethod::Random | SearchMethod::Greedy | SearchMethod::Anneal => {
            let kind = match method {
                SearchMethod::Random => HeuristicKind::Random,
                SearchMethod::Greedy => HeuristicKind::GreedyFlip,
                _ => HeuristicKind::Anneal,
            };
            let config = HeuristicConfig {
                kind,
                budget: need(args.budget, "--budget")?,
                restarts: need(args.restarts, "--restarts")?,
                t0: need(args.t0, "--t0")?,
                gamma: need(args.gamma, "--gamma")?,
                rng_seed: need(args.seed, "--seed")?,
            };
            heuristic_search(&task, learner, &config)?
        }
    };
    let summary = Summary::new(args, SearchReport::new(&task, outcome));
    emit_summary(args.out.as_deref(), &summary)
}

impl ChanceHitArgs {
    pub fn defaults() -> Self {
        Self {
            task: None,
            learner: Some(LearnerKind::Centroid),
            trials: Some(100_000),
            seed: Some(0),
            workers: Some(default_workers()),
            cap: Some(DEFAULT_CAP),
            out: None,
        }
    }
}

pub fn chance_hit(args: &ChanceHitArgs) -> anyhow::Result<()> {
    let task = load_task(&need(args.task.clone(), "--task")?)?;
    let config = ExhaustiveConfig {
        workers: need(args.workers, "--workers")?,
        cap: need(args.cap, "--cap")?,
    };
    let result = chance_hit_experiment(
        &task,
        need(args.learner, "--learner")?,
        need(args.trials, "--trials")?,
        need(args.seed, "--seed")?,
        config,
    )?;
    #[derive(Serialize)]
    struct Report {
        #[serde(flatten)]
        hit: labelsearch::search::ChanceHit,
        z_score: f64,
    }
    let z_score = result.z_score();
    emit_summary(args.out.as_deref(), &Summary::new(args, Report { hit: result, z_score }))
}

impl BaselineArgs {
    pub fn defaults() -> Self {
        Self {
            method: None,
            task: None,
            learner: Some(LearnerKind::Centroid),
            quantile: Some(0.25),
            max_rounds: Some(10),
            workers: Some(default_workers()),
            cap: Some(DEFAULT_CAP),
            out: None,
        }
    }
}

pub fn baseline(args: &BaselineArgs) -> anyhow::Result<()> {
    let method = need(args.method, "<METHOD>")?;
    let task = load_task(&need(args.task.clone(), "--task")?)?;
    let learner = need(args.learner, "--learner")?;
    let out = args.out.as_deref();
    match method {
        BaselineMethod::Conventional => {
            emit_summary(out, &Summary::new(args, conventional_pipeline(&task, learner)?))
        }
        BaselineMethod::Selftrain => {
            let st = SelfTrainingConfig {
                confidence_quantile: need(args.quantile, "--quantile")?,
                max_rounds: need(args.max_rounds, "--max-rounds")?,
            };
            let search = ExhaustiveConfig {
                workers: need(args.workers, "--workers")?,
                cap: need(args.cap, "--cap")?,
            };
            emit_summary(out, &Summary::new(args, joint_report(&task, learner, &st, search)?))
        }
    }
}

impl ScalingArgs {
    pub fn defaults() -> Self {
        Self {
            n: Some(NValues((12..=20).collect())),
            m: Some(16),
            d: Some(4),
            sep: Some(1.0),
            sigma: Some(1.0),
            seed: Some(0),
            learner: Some(LearnerKind::Centroid),
            workers: Some(default_workers()),
            repeats: Some(3),
            cap: Some(DEFAULT_CAP),
            out: None,
            summary: None,
        }
    }
}

pub fn scaling(args: &ScalingArgs) -> anyhow::Result<()> {
    let n_values = need(args.n.clone(), "--n")?.0;
    let config = ScalingConfig {
        template: TaskSpec {
            m: need(args.m, "--m")?,
            n: n_values.first().copied().unwrap_or(1) as usize,
            d: need(args.d, "--d")?,
            separation: need(args.sep, "--sep")?,
            noise_sigma: need(args.sigma, "--sigma")?,
            seed: need(args.seed, "--seed")?,
        },
        n_values,
        learner: need(args.learner, "--learner")?,
        workers: need(args.workers, "--workers")?,
        repeats: need(args.repeats, "--repeats")?,
        cap: need(args.cap, "--cap")?,
    };
    let report = scaling_experiment(&config)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    emit(args.out.as_deref(), &csv)?;
    if let Some(path) = &args.summary {
        let summary = Summary::new(args, &report).with_slope(report.fitted_slope, report.slope_stderr);
        emit_summary(Some(path), &summary)?;
    }
    Ok(())
}

impl CostTableArgs {
    pub fn defaults() -> Self {
        Self {
            n: Some(NValues((1..=24).collect())),
            tc_ms: Some(1.0),
            regimes: Some(["const:4", "poly:2", "exp:0.5"].map(|r| r.parse().expect("valid regime")).to_vec()),
            out: None,
            summary: None,
        }
    }
}

#[derive(Serialize)]
struct TableSlopes {
    rows: usize,
    classical: Option<f64>,
    constant: Option<f64>,
    polynomial: Option<f64>,
    exponential: Option<f64>,
    grover_queries: Option<f64>,
}

fn column_fit(ns: &[u32], cells: Vec<(u32, Option<f64>)>) -> Option<LinearFit64> {
    let (xs, ys): (Vec<u32>, Vec<f64>) = cells.into_iter().filter_map(|(n, v)| v.map(|v| (n, v))).unzip();
    if xs.len() < 2 || xs.len() * 2 < ns.len() {
        return None;
    }
    log2_slope(&xs, &ys).ok()
}

pub fn cost_table(args: &CostTableArgs) -> anyhow::Result<()> {
    let ns = need(args.n.clone(), "--n")?.0;
    let t_c = need(args.tc_ms, "--tc-ms")? / 1000.0;
    let regimes: Vec<_> = need(args.regimes.clone(), "--regimes")?.into_iter().map(|RegimeArg(r)| r).collect();
    let rows = scaling_table(&ns, t_c, &regimes)?;
    let mut csv = Vec::new();
    write_scaling_csv(&rows, &mut csv)?;
    emit(args.out.as_deref(), &csv)?;

    if let Some(path) = &args.summary {
        let fit = |f: fn(&ScalingRow64) -> Option<f64>| column_fit(&ns, rows.iter().map(|r| (r.n, f(r))).collect());
        let slope = |f| fit(f).map(|l| l.slope);
        let classical = fit(|r| Some(r.classical));
        let slopes = TableSlopes {
            rows: rows.len(),
            classical: classical.map(|l| l.slope),
            constant: slope(|r| r.constant),
            polynomial: slope(|r| r.polynomial),
            exponential: slope(|r| r.exponential),
            grover_queries: slope(|r| Some(r.grover_queries)),
        };
        let mut summary = Summary::new(args, slopes);
        if let Some(l) = classical {
            summary = summary.with_slope(l.slope, l.slope_stderr);
        }
        emit_summary(Some(path), &summary)?;
    }
    Ok(())
}

impl CostLedgerArgs {
    pub fn defaults() -> Self {
        Self {
            label: Some(0.0),
            curate: Some(0.0),
            compute: Some(0.0),
            latency: Some(0.0),
            risk: Some(0.0),
            quality: None,
            out: None,
        }
    }
}

pub fn cost_ledger(args: &CostLedgerArgs) -> anyhow::Result<()> {
    let ledger = CostLedger::new(
        need(args.label, "--label")?,
        need(args.curate, "--curate")?,
        need(args.compute, "--compute")?,
        need(args.latency, "--latency")?,
        need(args.risk, "--risk")?,
    )?;
    #[derive(Serialize)]
    struct Report {
        components: CostLedger<f64>,
        total: f64,
        perf_per_cost: Option<f64>,
    }
    let perf_per_cost = args.quality.map(|q| perf_per_cost(q, &ledger)).transpose()?;
    let report = Report {
        components: ledger,
        total: ledger_total(&ledger),
        perf_per_cost,
    };
    emit_summary(args.out.as_deref(), &Summary::new(args, report))
}

pub fn save_config(path: &Path, config: &crate::config::RunConfig) -> anyhow::Result<()> {
    write_atomic(path, config.to_json()?.as_bytes()).with_context(|| format!("writing {}", path.display()))
}
