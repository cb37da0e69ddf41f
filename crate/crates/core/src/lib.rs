//! Server fleet upgrade-plan modeling and exhaustive plan search.
//!
//! Given a catalog of server models (cost, power, throughput, manufacturing
//! carbon) and a multi-year horizon, this crate evaluates upgrade plans —
//! which server runs in which years — under joint cost (TCO), carbon (CO2),
//! and throughput (QPS) models, and searches the complete space of canonical
//! plans for the schedule that maximizes a chosen ratio objective. Fixed-
//! cycle greedy baselines are included for comparison.

pub mod config;
pub mod evaluate;
pub mod fleet;
pub mod metrics;
pub mod plan;
pub mod solver;

#[cfg(test)]
pub(crate) mod test_fixtures;

pub use config::{ConfigError, EconomicConfig, MetricKind, ParseMetricError};
pub use evaluate::{
    evaluate_plan, normalize, objective, EvalError, NormalizedValues, PlanEvaluation,
};
pub use fleet::{FieldError, Fleet, FleetError, ServerSpec};
pub use metrics::{
    aggregate_qps, capex, embodied_co2_kg, operational_co2_kg, opex, segment_carbon, segment_cost,
    segment_energy_kwh, SegmentCarbon, SegmentCost,
};
pub use plan::{validate_plan, PlanSegment, PlanViolation, UpgradePlan};
pub use solver::{
    baseline_evaluation, count_plans, count_plans_with, enumerate_global, for_each_global_plan,
    rank_all_with, rank_of_plan, rank_of_plan_with, solve_all_local, solve_global,
    solve_global_with, solve_local, LocalPlanSpec, SolverError, SolverOptions, SolverReport,
    LOCAL_CYCLES,
};
