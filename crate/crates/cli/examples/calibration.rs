//! Energy-price calibration sweep: for each price in 0.02..=0.30 USD/kWh,
//! solve the full catalog globally and greedily, and print the rank-1 plan
//! plus the global-vs-local ratio. Used to pick the calibrated price in the
//! acceptance suite and the README reproduction notes.
//!
//! Run with: cargo run -p upcycle-cli --example calibration

use upcycle_cli::catalog::parse_fleet_csv;
use upcycle_core::{solve_all_local, solve_global, EconomicConfig, MetricKind};

const CATALOG: &str = include_str!("../../../data/servers.csv");

fn main() -> anyhow::Result<()> {
    let fleet = parse_fleet_csv(CATALOG.as_bytes())?;
    let kind = MetricKind::QpsPerTcoCo2;

    println!("price_usd_per_kwh,rank1_plan,rank1_objective,best_local_plan,global_over_local");
    for cents in 2u32..=30 {
        let cfg = EconomicConfig {
            energy_price: cents as f64 / 100.0,
            ..EconomicConfig::default()
        };
        let global = solve_global(&fleet, &cfg, kind, 1)?;
        let locals = solve_all_local(&fleet, &cfg, kind)?;
        let best = &global.ranked[0];
        let best_local = &locals.ranked[0];
        let ratio = best.objective(kind) / best_local.objective(kind);
        println!(
            "{:.2},\"{}\",{:.10},\"{}\",{:.6}",
            cfg.energy_price,
            best.plan,
            best.objective(kind),
            best_local.plan,
            ratio
        );
    }
    Ok(())
}
