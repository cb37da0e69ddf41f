use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use upcycle_cli::report::{self, ReportFormat};
use upcycle_cli::{catalog, config as config_file, planstr};
use upcycle_core::{
    baseline_evaluation, count_plans_with, evaluate_plan, normalize, rank_all_with,
    solve_all_local, solve_global_with, solve_local, EconomicConfig, Fleet, LocalPlanSpec,
    MetricKind, SolverOptions, SolverReport,
};

const BUNDLED_CATALOG: &str = include_str!("../../../data/servers.csv");

#[derive(Parser)]
#[command(
    name = "upcycle",
    version,
    about = "Evaluate and optimize server fleet upgrade plans",
    long_about = "Evaluates data-center upgrade plans under joint cost (TCO), carbon (CO2), and\n\
                  throughput (QPS) models, finds the best plan by exhaustive search, and builds\n\
                  greedy fixed-cycle plans for comparison."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Server catalog CSV; defaults to the bundled 2010-2021 catalog
    #[arg(long, value_name = "FILE")]
    servers: Option<PathBuf>,
    /// JSON config for the economic scenario (all keys optional)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Objective metric
    #[arg(long, default_value = "qps-per-tco-co2", value_name = "METRIC")]
    metric: MetricKind,
    /// Report format
    #[arg(long, default_value = "csv", value_name = "FMT")]
    format: ReportFormat,
    /// Write the report here instead of stdout (written atomically)
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Read the catalog's CapDram column as total DRAM per server rather
    /// than per DIMM
    #[arg(long)]
    dram_total: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one plan given as ID:YEAR,ID:YEAR,...
    Evaluate {
        /// Plan string, e.g. A:2010,B:2011,D:2013,H:2017
        #[arg(long, value_name = "PLAN")]
        plan: String,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustively rank every plan and report the best N
    SolveGlobal {
        /// How many top plans to report
        #[arg(long, default_value_t = 10, value_name = "N")]
        top: usize,
        /// Also write the complete ranking to this CSV file (large!)
        #[arg(long, value_name = "FILE")]
        rank_all: Option<PathBuf>,
        /// Worker threads for the search; 0 means all cores
        #[arg(long, default_value_t = 0, value_name = "N")]
        workers: usize,
        /// Only allow upgrades to models at least as new as the incumbent
        #[arg(long)]
        monotone_only: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Build the greedy plan for one fixed upgrade cadence
    SolveLocal {
        /// Cycle length in years (one of 1, 2, 3, 4, 6, 12; must divide the horizon)
        #[arg(long, value_name = "YEARS")]
        cycle: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Build greedy plans for every cadence that divides the horizon
    SolveAllLocal {
        #[command(flatten)]
        common: Common,
    },
    /// Count the plan space without evaluating it
    CountPlans {
        /// Only allow upgrades to models at least as new as the incumbent
        #[arg(long)]
        monotone_only: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn load_fleet(common: &Common) -> anyhow::Result<Fleet> {
    let fleet = match &common.servers {
        Some(path) => catalog::parse_fleet_csv_path(path)?,
        None => catalog::parse_fleet_csv(BUNDLED_CATALOG.as_bytes())
            .context("bundled catalog is invalid")?,
    };
    if !common.dram_total {
        return Ok(fleet);
    }
    let servers = fleet
        .servers()
        .iter()
        .cloned()
        .map(|mut s| {
            if s.dimm_count > 0 {
                s.cap_dram_gb /= s.dimm_count as f64;
            }
            s
        })
        .collect();
    Ok(Fleet::new(servers)?)
}

fn load_config(common: &Common) -> anyhow::Result<EconomicConfig> {
    match &common.config {
        Some(path) => Ok(config_file::load_config(path)?),
        None => Ok(EconomicConfig::default()),
    }
}

fn emit_report(report: &SolverReport, common: &Common) -> anyhow::Result<()> {
    let text = report::render(report, common.format)?;
    report::emit(&text, common.output.as_deref())?;
    Ok(())
}

fn single_plan_report(
    eval: upcycle_core::PlanEvaluation,
    kind: MetricKind,
    cfg: &EconomicConfig,
) -> SolverReport {
    SolverReport {
        ranked: vec![eval],
        total_plans: 1,
        objective: kind,
        config: cfg.clone(),
    }
}

fn run() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Evaluate { plan, common } => {
            let fleet = load_fleet(&common)?;
            let cfg = load_config(&common)?;
            let plan = planstr::parse_plan(&plan, &fleet, &cfg)?;
            let eval = evaluate_plan(&plan, &fleet, &cfg)?;
            let baseline = baseline_evaluation(&fleet, &cfg)?;
            let eval = normalize(&eval, &baseline)?;
            emit_report(&single_plan_report(eval, common.metric, &cfg), &common)
        }
        Command::SolveGlobal {
            top,
            rank_all,
            workers,
            monotone_only,
            common,
        } => {
            let fleet = load_fleet(&common)?;
            let cfg = load_config(&common)?;
            let opts = SolverOptions {
                workers,
                monotone_only,
            };
            let report = match rank_all {
                None => solve_global_with(&fleet, &cfg, common.metric, top, &opts)?,
                Some(path) => {
                    let full = rank_all_with(&fleet, &cfg, common.metric, &opts)?;
                    let rows = report::rows_from_report(&full)?;
                    report::write_csv_rows_atomic(&path, rows)?;
                    let keep = top.min(full.ranked.len());
                    SolverReport {
                        ranked: full.ranked[..keep].to_vec(),
                        ..full
                    }
                }
            };
            emit_report(&report, &common)
        }
        Command::SolveLocal { cycle, common } => {
            let fleet = load_fleet(&common)?;
            let cfg = load_config(&common)?;
            let spec = LocalPlanSpec {
                cycle_years: cycle,
                greedy_metric: common.metric,
            };
            let eval = solve_local(&fleet, &cfg, &spec)?;
            emit_report(&single_plan_report(eval, common.metric, &cfg), &common)
        }
        Command::SolveAllLocal { common } => {
            let fleet = load_fleet(&common)?;
            let cfg = load_config(&common)?;
            let report = solve_all_local(&fleet, &cfg, common.metric)?;
            emit_report(&report, &common)
        }
        Command::CountPlans {
            monotone_only,
            common,
        } => {
            let fleet = load_fleet(&common)?;
            let cfg = load_config(&common)?;
            let opts = SolverOptions {
                workers: 0,
                monotone_only,
            };
            let count = count_plans_with(&fleet, &cfg, &opts)?;
            report::emit(&format!("{count}\n"), common.output.as_deref())?;
            Ok(())
        }
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
