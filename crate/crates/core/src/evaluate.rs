use std::fmt;

use thiserror::Error;

use crate::config::{ConfigError, EconomicConfig, MetricKind};
use crate::fleet::Fleet;
use crate::metrics::{plan_totals, resolve_segments};
use crate::plan::{validate_plan, PlanViolation, UpgradePlan};

/// Everything we know about one plan under one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanEvaluation {
    /// The canonical form of the evaluated plan.
    pub plan: UpgradePlan,
    /// Time-weighted mean throughput over the horizon.
    pub qps: f64,
    /// Total cost of ownership: purchases plus electricity.
    pub tco: f64,
    /// Total carbon: embodied plus operational, kgCO2.
    pub co2: f64,
    pub qps_per_tco: f64,
    pub qps_per_co2: f64,
    pub qps_per_tco_co2: f64,
    /// Number of canonical segments, i.e. distinct hardware installations.
    pub n_upgrades: u32,
    /// Ratios against a baseline evaluation, when one has been applied.
    pub normalized: Option<NormalizedValues>,
}

/// A plan's values divided by a baseline plan's values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedValues {
    pub qps: f64,
    pub tco: f64,
    pub co2: f64,
    pub qps_per_tco: f64,
    pub qps_per_co2: f64,
    pub qps_per_tco_co2: f64,
}

impl PlanEvaluation {
    /// The raw value of the chosen ranking objective.
    pub fn objective(&self, kind: MetricKind) -> f64 {
        match kind {
            MetricKind::QpsPerTco => self.qps_per_tco,
            MetricKind::QpsPerCo2 => self.qps_per_co2,
            MetricKind::QpsPerTcoCo2 => self.qps_per_tco_co2,
        }
    }

    /// The normalized value of the chosen objective, if normalization ran.
    pub fn normalized_objective(&self, kind: MetricKind) -> Option<f64> {
        self.normalized.map(|n| match kind {
            MetricKind::QpsPerTco => n.qps_per_tco,
            MetricKind::QpsPerCo2 => n.qps_per_co2,
            MetricKind::QpsPerTcoCo2 => n.qps_per_tco_co2,
        })
    }
}

/// Violations wrapper so `EvalError` can display them as one message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanViolations(pub Vec<PlanViolation>);

impl fmt::Display for PlanViolations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid plan: {0}")]
    InvalidPlan(PlanViolations),
    #[error("baseline {field} must be strictly positive to normalize, got {value}")]
    NonPositiveBaseline { field: &'static str, value: f64 },
}

/// Evaluate a plan: canonicalize, validate, and compute raw totals and the
/// three ratio objectives. `normalized` is left unset; apply [`normalize`]
/// to fill it in.
pub fn evaluate_plan(
    plan: &UpgradePlan,
    fleet: &Fleet,
    cfg: &EconomicConfig,
) -> Result<PlanEvaluation, EvalError> {
    cfg.validate()?;
    let canonical = plan.canonicalize();
    let violations = validate_plan(&canonical, fleet, cfg);
    if !violations.is_empty() {
        return Err(EvalError::InvalidPlan(PlanViolations(violations)));
    }
    // Ids were just validated, so resolution cannot fail.
    let segments =
        resolve_segments(&canonical, fleet).expect("validated plan resolves against its fleet");
    let totals = plan_totals(segments, cfg);

    let qps = totals.qps_years / cfg.horizon_years() as f64;
    let tco = totals.tco;
    let co2 = totals.co2;
    let n_upgrades = canonical.segments().len() as u32;
    Ok(PlanEvaluation {
        plan: canonical,
        qps,
        tco,
        co2,
        qps_per_tco: qps / tco,
        qps_per_co2: qps / co2,
        qps_per_tco_co2: qps / (tco * co2),
        n_upgrades,
        normalized: None,
    })
}

/// Return a copy of `eval` with `normalized` filled in as ratios against
/// `baseline`. Every baseline value divided by must be strictly positive.
pub fn normalize(
    eval: &PlanEvaluation,
    baseline: &PlanEvaluation,
) -> Result<PlanEvaluation, EvalError> {
    let checks = [
        ("qps", baseline.qps),
        ("tco", baseline.tco),
        ("co2", baseline.co2),
        ("qps_per_tco", baseline.qps_per_tco),
        ("qps_per_co2", baseline.qps_per_co2),
        ("qps_per_tco_co2", baseline.qps_per_tco_co2),
    ];
    for (field, value) in checks {
        if value <= 0.0 || !value.is_finite() {
            return Err(EvalError::NonPositiveBaseline { field, value });
        }
    }
    let mut out = eval.clone();
    out.normalized = Some(NormalizedValues {
        qps: eval.qps / baseline.qps,
        tco: eval.tco / baseline.tco,
        co2: eval.co2 / baseline.co2,
        qps_per_tco: eval.qps_per_tco / baseline.qps_per_tco,
        qps_per_co2: eval.qps_per_co2 / baseline.qps_per_co2,
        qps_per_tco_co2: eval.qps_per_tco_co2 / baseline.qps_per_tco_co2,
    });
    Ok(out)
}

/// Free-function form of [`PlanEvaluation::objective`].
pub fn objective(eval: &PlanEvaluation, kind: MetricKind) -> f64 {
    eval.objective(kind)
}
