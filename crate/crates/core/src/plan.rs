use std::fmt;

use crate::config::EconomicConfig;
use crate::fleet::Fleet;

/// One run of consecutive years on a single server model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanSegment {
    pub server_id: String,
    pub start_year: i32,
    pub duration_years: u32,
}

impl PlanSegment {
    pub fn new(server_id: impl Into<String>, start_year: i32, duration_years: u32) -> Self {
        PlanSegment {
            server_id: server_id.into(),
            start_year,
            duration_years,
        }
    }

    /// Year after the last one this segment covers.
    pub fn end_year(&self) -> i32 {
        self.start_year + self.duration_years as i32
    }
}

/// An upgrade schedule: which server runs in which years.
///
/// The canonical form merges consecutive segments that share a server, so a
/// segment boundary always means an actual hardware change. All evaluation
/// happens on the canonical form; `validate_plan` tells you whether a plan is
/// usable against a given fleet and horizon.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpgradePlan {
    segments: Vec<PlanSegment>,
}

impl UpgradePlan {
    pub fn new(segments: Vec<PlanSegment>) -> Self {
        UpgradePlan { segments }
    }

    pub fn segments(&self) -> &[PlanSegment] {
        &self.segments
    }

    pub fn into_segments(self) -> Vec<PlanSegment> {
        self.segments
    }

    pub fn total_duration_years(&self) -> u32 {
        self.segments.iter().map(|s| s.duration_years).sum()
    }

    /// The server scheduled for `year`, if the plan covers it.
    pub fn server_id_for_year(&self, year: i32) -> Option<&str> {
        self.segments
            .iter()
            .find(|s| s.start_year <= year && year < s.end_year())
            .map(|s| s.server_id.as_str())
    }

    pub fn is_canonical(&self) -> bool {
        self.segments
            .windows(2)
            .all(|pair| pair[0].server_id != pair[1].server_id)
    }

    /// Merge consecutive segments that keep the same server. Idempotent, and
    /// preserves both total duration and the year -> server assignment.
    pub fn canonicalize(&self) -> UpgradePlan {
        let mut merged: Vec<PlanSegment> = Vec::with_capacity(self.segments.len());
        for seg in &self.segments {
            match merged.last_mut() {
                Some(last) if last.server_id == seg.server_id => {
                    last.duration_years += seg.duration_years;
                }
                _ => merged.push(seg.clone()),
            }
        }
        UpgradePlan { segments: merged }
    }
}

/// Plans print as `ID:YEAR` pairs, e.g. `A:2010,B:2011,D:2013,H:2017`.
impl fmt::Display for UpgradePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", seg.server_id, seg.start_year)?;
        }
        Ok(())
    }
}

/// A reason a plan cannot be evaluated, tied to the first segment involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanViolation {
    /// Plan has no segments at all.
    Empty,
    /// First segment does not begin at the configured start year.
    WrongStartYear {
        segment: usize,
        found: i32,
        expected: i32,
    },
    /// A segment has zero duration.
    ZeroDuration { segment: usize },
    /// A segment does not begin where the previous one ended.
    NotContiguous {
        segment: usize,
        found: i32,
        expected: i32,
    },
    /// The plan does not end exactly at the horizon's end year.
    WrongEndYear {
        segment: usize,
        found: i32,
        expected: i32,
    },
    /// Segment references a server id missing from the fleet.
    UnknownServer { segment: usize, server_id: String },
    /// Segment starts before its server's entry year.
    NotAvailable {
        segment: usize,
        server_id: String,
        entry_year: i32,
        start_year: i32,
    },
    /// Two consecutive segments use the same server (non-canonical form).
    ConsecutiveRepeat { segment: usize, server_id: String },
}

impl PlanViolation {
    /// Index of the offending segment, if the violation is segment-scoped.
    pub fn segment(&self) -> Option<usize> {
        match *self {
            PlanViolation::Empty => None,
            PlanViolation::WrongStartYear { segment, .. }
            | PlanViolation::ZeroDuration { segment }
            | PlanViolation::NotContiguous { segment, .. }
            | PlanViolation::WrongEndYear { segment, .. }
            | PlanViolation::UnknownServer { segment, .. }
            | PlanViolation::NotAvailable { segment, .. }
            | PlanViolation::ConsecutiveRepeat { segment, .. } => Some(segment),
        }
    }
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanViolation::Empty => write!(f, "plan has no segments"),
            PlanViolation::WrongStartYear {
                segment,
                found,
                expected,
            } => write!(
                f,
                "segment {segment}: plan starts in {found} but the horizon starts in {expected}"
            ),
            PlanViolation::ZeroDuration { segment } => {
                write!(f, "segment {segment}: duration must be at least one year")
            }
            PlanViolation::NotContiguous {
                segment,
                found,
                expected,
            } => write!(
                f,
                "segment {segment}: starts in {found} but the previous segment ends in {expected}"
            ),
            PlanViolation::WrongEndYear {
                segment,
                found,
                expected,
            } => write!(
                f,
                "segment {segment}: plan ends in {found} but the horizon ends in {expected}"
            ),
            PlanViolation::UnknownServer { segment, server_id } => {
                write!(f, "segment {segment}: unknown server {server_id:?}")
            }
            PlanViolation::NotAvailable {
                segment,
                server_id,
                entry_year,
                start_year,
            } => write!(
                f,
                "segment {segment}: server {server_id:?} enters the market in {entry_year}, \
                 after the segment start {start_year}"
            ),
            PlanViolation::ConsecutiveRepeat { segment, server_id } => write!(
                f,
                "segment {segment}: repeats server {server_id:?} from the previous segment \
                 (canonicalize the plan first)"
            ),
        }
    }
}

/// Check a plan against a fleet and horizon; empty result means valid.
///
/// A valid plan starts at `cfg.start_year`, covers the horizon contiguously
/// with positive-length segments, ends at `cfg.end_year`, references only
/// fleet servers purchasable by each segment's start, and is in canonical
/// form. Violations are reported in segment order.
pub fn validate_plan(
    plan: &UpgradePlan,
    fleet: &Fleet,
    cfg: &EconomicConfig,
) -> Vec<PlanViolation> {
    let segments = plan.segments();
    if segments.is_empty() {
        return vec![PlanViolation::Empty];
    }

    let mut violations = Vec::new();
    if segments[0].start_year != cfg.start_year {
        violations.push(PlanViolation::WrongStartYear {
            segment: 0,
            found: segments[0].start_year,
            expected: cfg.start_year,
        });
    }

    let mut expected_start = segments[0].start_year;
    for (i, seg) in segments.iter().enumerate() {
        if seg.duration_years == 0 {
            violations.push(PlanViolation::ZeroDuration { segment: i });
        }
        if i > 0 && seg.start_year != expected_start {
            violations.push(PlanViolation::NotContiguous {
                segment: i,
                found: seg.start_year,
                expected: expected_start,
            });
        }
        expected_start = seg.start_year + seg.duration_years as i32;

        match fleet.get(&seg.server_id) {
            None => violations.push(PlanViolation::UnknownServer {
                segment: i,
                server_id: seg.server_id.clone(),
            }),
            Some(server) => {
                if server.entry_year > seg.start_year {
                    violations.push(PlanViolation::NotAvailable {
                        segment: i,
                        server_id: seg.server_id.clone(),
                        entry_year: server.entry_year,
                        start_year: seg.start_year,
                    });
                }
            }
        }

        if i > 0 && seg.server_id == segments[i - 1].server_id {
            violations.push(PlanViolation::ConsecutiveRepeat {
                segment: i,
                server_id: seg.server_id.clone(),
            });
        }
    }

    let last = segments.len() - 1;
    if expected_start != cfg.end_year {
        violations.push(PlanViolation::WrongEndYear {
            segment: last,
            found: expected_start,
            expected: cfg.end_year,
        });
    }

    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fleet::ServerSpec;

    fn spec(id: &str, entry_year: i32) -> ServerSpec {
        ServerSpec {
            id: id.to_string(),
            entry_year,
            cpu_count: 1,
            dimm_count: 2,
            cpu_cost: 100.0,
            dimm_cost: 10.0,
            qps: 1000.0,
            power_w: 50.0,
            utilization_pct: 100.0,
            ci_op: 0.23,
            nr_ics: 1,
            kr_packaging: 0.15,
            yield_fraction: 0.5,
            ci_fab: 0.295,
            epa: 1.0,
            gpa: 0.2,
            mpa: 0.5,
            die_area_cm2: 1.5,
            cps_dram: 0.3,
            cap_dram_gb: 8.0,
        }
    }

    fn fleet_abdh() -> Fleet {
        Fleet::new(vec![
            spec("A", 2010),
            spec("B", 2011),
            spec("D", 2013),
            spec("H", 2017),
        ])
        .unwrap()
    }

    fn cfg() -> EconomicConfig {
        EconomicConfig::default()
    }

    fn plan(parts: &[(&str, i32, u32)]) -> UpgradePlan {
        UpgradePlan::new(
            parts
                .iter()
                .map(|&(id, y, d)| PlanSegment::new(id, y, d))
                .collect(),
        )
    }

    #[test]
    fn display_formats_id_year_pairs() {
        let p = plan(&[
            ("A", 2010, 1),
            ("B", 2011, 2),
            ("D", 2013, 4),
            ("H", 2017, 5),
        ]);
        assert_eq!(p.to_string(), "A:2010,B:2011,D:2013,H:2017");
    }

    #[test]
    fn canonicalize_merges_consecutive_repeats() {
        let p = plan(&[("A", 2010, 1), ("A", 2011, 11)]);
        let c = p.canonicalize();
        assert_eq!(c, plan(&[("A", 2010, 12)]));

        let p = plan(&[
            ("A", 2010, 2),
            ("B", 2012, 1),
            ("B", 2013, 3),
            ("H", 2016, 6),
        ]);
        let c = p.canonicalize();
        assert_eq!(c, plan(&[("A", 2010, 2), ("B", 2012, 4), ("H", 2016, 6)]));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let p = plan(&[
            ("A", 2010, 1),
            ("A", 2011, 3),
            ("A", 2014, 2),
            ("B", 2016, 6),
        ]);
        let once = p.canonicalize();
        assert_eq!(once.canonicalize(), once);
        assert!(once.is_canonical());
        assert_eq!(once.total_duration_years(), p.total_duration_years());
    }

    #[test]
    fn canonicalize_preserves_year_assignment() {
        let p = plan(&[("A", 2010, 1), ("A", 2011, 11)]);
        let c = p.canonicalize();
        for year in 2010..2022 {
            assert_eq!(p.server_id_for_year(year), c.server_id_for_year(year));
        }
        assert_eq!(p.server_id_for_year(2022), None);
    }

    #[test]
    fn accepts_reference_plan() {
        let p = plan(&[
            ("A", 2010, 1),
            ("B", 2011, 2),
            ("D", 2013, 4),
            ("H", 2017, 5),
        ]);
        assert!(validate_plan(&p, &fleet_abdh(), &cfg()).is_empty());
    }

    #[test]
    fn accepts_single_segment_covering_horizon() {
        let p = plan(&[("A", 2010, 12)]);
        assert!(validate_plan(&p, &fleet_abdh(), &cfg()).is_empty());
    }

    #[test]
    fn rejects_unavailable_server() {
        let p = plan(&[("B", 2010, 12)]);
        let violations = validate_plan(&p, &fleet_abdh(), &cfg());
        assert_eq!(
            violations,
            vec![PlanViolation::NotAvailable {
                segment: 0,
                server_id: "B".to_string(),
                entry_year: 2011,
                start_year: 2010,
            }]
        );
        assert_eq!(violations[0].segment(), Some(0));
    }

    #[test]
    fn rejects_gaps_overlaps_and_bad_ends() {
        let gap = plan(&[("A", 2010, 2), ("B", 2013, 9)]);
        assert!(validate_plan(&gap, &fleet_abdh(), &cfg())
            .iter()
            .any(|v| matches!(v, PlanViolation::NotContiguous { segment: 1, .. })));

        let short = plan(&[("A", 2010, 5)]);
        assert_eq!(
            validate_plan(&short, &fleet_abdh(), &cfg()),
            vec![PlanViolation::WrongEndYear {
                segment: 0,
                found: 2015,
                expected: 2022
            }]
        );

        let late = plan(&[("A", 2011, 11)]);
        assert!(validate_plan(&late, &fleet_abdh(), &cfg())
            .iter()
            .any(|v| matches!(v, PlanViolation::WrongStartYear { .. })));
    }

    #[test]
    fn rejects_empty_zero_duration_unknown_and_repeat() {
        assert_eq!(
            validate_plan(&plan(&[]), &fleet_abdh(), &cfg()),
            vec![PlanViolation::Empty]
        );

        let zero = plan(&[("A", 2010, 0), ("B", 2010, 12)]);
        assert!(validate_plan(&zero, &fleet_abdh(), &cfg())
            .iter()
            .any(|v| matches!(v, PlanViolation::ZeroDuration { segment: 0 })));

        let unknown = plan(&[("Z", 2010, 12)]);
        assert!(validate_plan(&unknown, &fleet_abdh(), &cfg())
            .iter()
            .any(|v| matches!(v, PlanViolation::UnknownServer { .. })));

        let repeat = plan(&[("A", 2010, 6), ("A", 2016, 6)]);
        assert_eq!(
            validate_plan(&repeat, &fleet_abdh(), &cfg()),
            vec![PlanViolation::ConsecutiveRepeat {
                segment: 1,
                server_id: "A".to_string()
            }]
        );
        // ...and the canonical form of the same plan is valid.
        assert!(validate_plan(&repeat.canonicalize(), &fleet_abdh(), &cfg()).is_empty());
    }

    #[test]
    fn validity_matches_per_year_availability_coverage() {
        // A canonical plan is valid exactly when every horizon year is
        // assigned one server that is available in that year.
        let fleet = fleet_abdh();
        let config = cfg();
        let candidates = [
            plan(&[("A", 2010, 12)]),
            plan(&[("A", 2010, 1), ("B", 2011, 11)]),
            plan(&[("B", 2010, 12)]),
            plan(&[("A", 2010, 2), ("H", 2012, 10)]),
            plan(&[("A", 2010, 11)]),
        ];
        for p in candidates {
            let valid = validate_plan(&p, &fleet, &config).is_empty();
            let covered = (config.start_year..config.end_year).all(|year| {
                p.server_id_for_year(year)
                    .and_then(|id| fleet.get(id))
                    .is_some_and(|s| {
                        // The segment containing `year` must itself start at or
                        // after the server's entry; with contiguous coverage
                        // from start_year this reduces to the segment check.
                        let seg = p
                            .segments()
                            .iter()
                            .find(|seg| seg.start_year <= year && year < seg.end_year())
                            .unwrap();
                        s.entry_year <= seg.start_year
                    })
            }) && p.total_duration_years() == config.horizon_years()
                && p.segments().first().map(|s| s.start_year) == Some(config.start_year);
            assert_eq!(valid, covered, "plan {p}");
        }
    }
}
