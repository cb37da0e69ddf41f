//! Cost, energy, and carbon models for a single server segment, plus the
//! plan-level accumulation they feed.
//!
//! Every consumer of these numbers (the evaluator, the exhaustive solver's
//! precomputed tables, the greedy baseline) goes through the same functions
//! so that a given plan always produces bit-identical totals no matter which
//! code path computed them.

use thiserror::Error;

use crate::config::EconomicConfig;
use crate::fleet::{Fleet, ServerSpec};
use crate::plan::UpgradePlan;

/// Purchase cost of one server: CPUs plus DIMMs.
pub fn capex(server: &ServerSpec) -> f64 {
    server.cpu_count as f64 * server.cpu_cost + server.dimm_count as f64 * server.dimm_cost
}

/// Electricity consumed by a segment, in kWh.
pub fn segment_energy_kwh(server: &ServerSpec, duration_years: u32, cfg: &EconomicConfig) -> f64 {
    server.power_w / 1000.0 * cfg.hours_per_year * duration_years as f64
}

/// Electricity cost of a segment.
pub fn opex(server: &ServerSpec, duration_years: u32, cfg: &EconomicConfig) -> f64 {
    segment_energy_kwh(server, duration_years, cfg) * cfg.energy_price
}

/// Manufacturing carbon of one server, in kgCO2: per-CPU die production
/// (fab energy, fab gases, materials, scaled by yield) plus IC packaging,
/// plus per-DIMM DRAM production.
pub fn embodied_co2_kg(server: &ServerSpec) -> f64 {
    let die_kg_per_cpu = (server.ci_fab * server.epa + server.gpa + server.mpa)
        * server.die_area_cm2
        / server.yield_fraction;
    let packaging_kg_per_cpu = server.nr_ics as f64 * server.kr_packaging;
    server.cpu_count as f64 * (die_kg_per_cpu + packaging_kg_per_cpu)
        + server.dimm_count as f64 * server.cps_dram * server.cap_dram_gb
}

/// Carbon from the electricity a segment consumes, in kgCO2.
pub fn operational_co2_kg(server: &ServerSpec, duration_years: u32, cfg: &EconomicConfig) -> f64 {
    segment_energy_kwh(server, duration_years, cfg) * server.ci_op
}

/// Money side of one segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentCost {
    pub capex: f64,
    pub opex: f64,
    pub energy_kwh: f64,
}

/// Carbon side of one segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentCarbon {
    pub embodied_kg: f64,
    pub operational_kg: f64,
}

pub fn segment_cost(server: &ServerSpec, duration_years: u32, cfg: &EconomicConfig) -> SegmentCost {
    let energy_kwh = segment_energy_kwh(server, duration_years, cfg);
    SegmentCost {
        capex: capex(server),
        opex: energy_kwh * cfg.energy_price,
        energy_kwh,
    }
}

pub fn segment_carbon(
    server: &ServerSpec,
    duration_years: u32,
    cfg: &EconomicConfig,
) -> SegmentCarbon {
    SegmentCarbon {
        embodied_kg: embodied_co2_kg(server),
        operational_kg: segment_energy_kwh(server, duration_years, cfg) * server.ci_op,
    }
}

/// Running totals over a plan's canonical segments, accumulated left to
/// right. Segment order is part of the contract: reordering would change
/// floating-point rounding.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct PlanTotals {
    pub tco: f64,
    pub co2: f64,
    pub qps_years: f64,
}

impl PlanTotals {
    /// Fold one segment into the totals; this is the single place where the
    /// per-segment models combine into plan-level sums.
    #[inline]
    pub fn add_segment(&mut self, server: &ServerSpec, duration_years: u32, cfg: &EconomicConfig) {
        let cost = segment_cost(server, duration_years, cfg);
        let carbon = segment_carbon(server, duration_years, cfg);
        self.tco += cost.capex + cost.opex;
        self.co2 += carbon.embodied_kg + carbon.operational_kg;
        self.qps_years += server.qps * duration_years as f64;
    }
}

pub(crate) fn plan_totals<'a>(
    segments: impl IntoIterator<Item = (&'a ServerSpec, u32)>,
    cfg: &EconomicConfig,
) -> PlanTotals {
    let mut totals = PlanTotals::default();
    for (server, duration_years) in segments {
        totals.add_segment(server, duration_years, cfg);
    }
    totals
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown server id {id:?} in plan")]
pub struct UnknownServerId {
    pub id: String,
}

pub(crate) fn resolve_segments<'a>(
    plan: &'a UpgradePlan,
    fleet: &'a Fleet,
) -> Result<Vec<(&'a ServerSpec, u32)>, UnknownServerId> {
    plan.segments()
        .iter()
        .map(|seg| {
            fleet
                .get(&seg.server_id)
                .map(|server| (server, seg.duration_years))
                .ok_or_else(|| UnknownServerId {
                    id: seg.server_id.clone(),
                })
        })
        .collect()
}

/// Time-weighted mean throughput of a plan over the configured horizon:
/// `sum(qps_i * duration_i) / horizon_years`.
///
/// Assumes the plan is valid for `cfg` (in particular, that its segments sum
/// to the horizon); only unknown server ids are reported as errors.
pub fn aggregate_qps(
    plan: &UpgradePlan,
    fleet: &Fleet,
    cfg: &EconomicConfig,
) -> Result<f64, UnknownServerId> {
    let segments = resolve_segments(plan, fleet)?;
    let totals = plan_totals(segments, cfg);
    Ok(totals.qps_years / cfg.horizon_years() as f64)
}
