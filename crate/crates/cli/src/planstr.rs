//! Textual plan syntax: `ID:YEAR,ID:YEAR,...`
//!
//! Each pair names the server installed starting that year; a segment runs
//! until the next segment starts, and the last one until the end of the
//! horizon. This is the same syntax `UpgradePlan`'s `Display` produces, so
//! reports can be fed back in verbatim.

use thiserror::Error;
use upcycle_core::{validate_plan, EconomicConfig, Fleet, PlanSegment, PlanViolation, UpgradePlan};

#[derive(Debug, Error)]
pub enum PlanParseError {
    #[error("plan string is empty")]
    Empty,
    #[error("bad plan segment {token:?}: expected ID:YEAR")]
    BadToken { token: String },
    #[error("bad plan segment {token:?}: {year:?} is not a year")]
    BadYear { token: String, year: String },
    #[error("unknown server id {id:?}")]
    UnknownServer { id: String },
    #[error("segment years must be strictly increasing: {prev} then {next}")]
    NonIncreasingYears { prev: i32, next: i32 },
    #[error("plan must start in {expected}, not {found}")]
    WrongStartYear { expected: i32, found: i32 },
    #[error("segment year {year} is outside the horizon (last usable year is {last})")]
    BeyondHorizon { year: i32, last: i32 },
    #[error("invalid plan: {0}")]
    Invalid(String),
}

/// Parse a plan string against a fleet and config. The returned plan is
/// canonical (consecutive same-server segments merged) and fully validated.
pub fn parse_plan(
    text: &str,
    fleet: &Fleet,
    cfg: &EconomicConfig,
) -> Result<UpgradePlan, PlanParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(PlanParseError::Empty);
    }

    let mut starts: Vec<(String, i32)> = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        let (id, year_text) = token
            .split_once(':')
            .ok_or_else(|| PlanParseError::BadToken {
                token: token.to_string(),
            })?;
        let (id, year_text) = (id.trim(), year_text.trim());
        if id.is_empty() || year_text.is_empty() {
            return Err(PlanParseError::BadToken {
                token: token.to_string(),
            });
        }
        let year: i32 = year_text.parse().map_err(|_| PlanParseError::BadYear {
            token: token.to_string(),
            year: year_text.to_string(),
        })?;
        if fleet.get(id).is_none() {
            return Err(PlanParseError::UnknownServer { id: id.to_string() });
        }
        starts.push((id.to_string(), year));
    }

    for pair in starts.windows(2) {
        if pair[1].1 <= pair[0].1 {
            return Err(PlanParseError::NonIncreasingYears {
                prev: pair[0].1,
                next: pair[1].1,
            });
        }
    }
    let first_year = starts[0].1;
    if first_year != cfg.start_year {
        return Err(PlanParseError::WrongStartYear {
            expected: cfg.start_year,
            found: first_year,
        });
    }
    let last_usable = cfg.end_year - 1;
    if let Some(&(_, year)) = starts.iter().find(|(_, y)| *y > last_usable) {
        return Err(PlanParseError::BeyondHorizon {
            year,
            last: last_usable,
        });
    }

    let mut segments = Vec::with_capacity(starts.len());
    for (i, (id, year)) in starts.iter().enumerate() {
        let next_start = starts.get(i + 1).map_or(cfg.end_year, |(_, y)| *y);
        segments.push(PlanSegment {
            server_id: id.clone(),
            start_year: *year,
            duration_years: (next_start - year) as u32,
        });
    }
    let plan = UpgradePlan::new(segments).canonicalize();
    let violations: Vec<PlanViolation> = validate_plan(&plan, fleet, cfg);
    if !violations.is_empty() {
        let joined = violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(PlanParseError::Invalid(joined));
    }
    Ok(plan)
}
