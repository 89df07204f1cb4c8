mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use commands::Usage;
use config::{
    overlay, BaselineArgs, ChanceHitArgs, CostLedgerArgs, CostTableArgs, GenDataArgs, RunConfig, ScalingArgs,
    SearchArgs,
};

/// Exhaustive search over labelings of an unlabeled pool, scored on a small
/// trusted set, with heuristics, baselines and a runtime cost model.
#[derive(Parser, Debug)]
#[command(name = "labelsearch", version)]
struct Cli {
    /// JSON run configuration; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the fully resolved configuration of this run
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic two-Gaussian task file
    GenData(GenDataArgs),
    /// Search the labelings of a task's pool
    Search(SearchArgs),
    /// Compare uniform random labelings against the exact optimum count
    ChanceHit(ChanceHitArgs),
    /// Conventional or self-training baseline
    Baseline(BaselineArgs),
    /// Time exhaustive sweeps over a range of pool sizes
    Scaling(ScalingArgs),
    /// Analytical runtime and cost model
    #[command(subcommand)]
    CostModel(CostCommand),
}

#[derive(Subcommand, Debug)]
enum CostCommand {
    /// Runtime table under each speedup regime
    Table(CostTableArgs),
    /// Total cost and performance per cost
    Ledger(CostLedgerArgs),
}

fn resolve<T: Serialize + DeserializeOwned>(defaults: T, file: Option<&T>, flags: &T) -> anyhow::Result<T> {
    overlay(Some(&defaults), &overlay(file, flags)?)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut used = RunConfig::default();
    let task: Box<dyn FnOnce() -> anyhow::Result<()>> = match cli.command {
        Command::GenData(flags) => {
            let args = resolve(GenDataArgs::defaults(), file.gen_data.as_ref(), &flags)?;
            used.gen_data = Some(args.clone());
            Box::new(move || commands::gen_data(&args))
        }
        Command::Search(flags) => {
            let args = resolve(SearchArgs::defaults(), file.search.as_ref(), &flags)?;
            used.search = Some(args.clone());
            Box::new(move || commands::search(&args))
        }
        Command::ChanceHit(flags) => {
            let args = resolve(ChanceHitArgs::defaults(), file.chance_hit.as_ref(), &flags)?;
            used.chance_hit = Some(args.clone());
            Box::new(move || commands::chance_hit(&args))
        }
        Command::Baseline(flags) => {
            let args = resolve(BaselineArgs::defaults(), file.baseline.as_ref(), &flags)?;
            used.baseline = Some(args.clone());
            Box::new(move || commands::baseline(&args))
        }
        Command::Scaling(flags) => {
            let args = resolve(ScalingArgs::defaults(), file.scaling.as_ref(), &flags)?;
            used.scaling = Some(args.clone());
            Box::new(move || commands::scaling(&args))
        }
        Command::CostModel(CostCommand::Table(flags)) => {
            let args = resolve(CostTableArgs::defaults(), file.cost_model_table.as_ref(), &flags)?;
            used.cost_model_table = Some(args.clone());
            Box::new(move || commands::cost_table(&args))
        }
        Command::CostModel(CostCommand::Ledger(flags)) => {
            let args = resolve(CostLedgerArgs::defaults(), file.cost_model_ledger.as_ref(), &flags)?;
            used.cost_model_ledger = Some(args.clone());
            Box::new(move || commands::cost_ledger(&args))
        }
    };
    if let Some(path) = &cli.save_config {
        commands::save_config(path, &used)?;
    }
    task()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if err.use_stderr() => {
            let text = err.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
        Err(err) => err.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if let Some(usage) = err.downcast_ref::<Usage>() {
                Cli::command().error(ErrorKind::MissingRequiredArgument, &usage.0).exit();
            }
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
