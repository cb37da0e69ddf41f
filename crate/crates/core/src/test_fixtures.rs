//! Shared fixtures for the unit tests: a handful of catalog rows (values
//! match `data/servers.csv`) and small builders.

use crate::fleet::{Fleet, ServerSpec};
use crate::plan::{PlanSegment, UpgradePlan};

pub(crate) fn server_a() -> ServerSpec {
    ServerSpec {
        id: "A".to_string(),
        entry_year: 2010,
        cpu_count: 1,
        dimm_count: 2,
        cpu_cost: 589.0,
        dimm_cost: 20.0,
        qps: 278441.0,
        power_w: 130.0,
        utilization_pct: 100.0,
        ci_op: 0.23,
        nr_ics: 1,
        kr_packaging: 0.15,
        yield_fraction: 0.5,
        ci_fab: 0.295,
        epa: 0.41,
        gpa: 0.14,
        mpa: 0.5,
        die_area_cm2: 2.96,
        cps_dram: 0.6,
        cap_dram_gb: 4.0,
    }
}

pub(crate) fn server_b() -> ServerSpec {
    ServerSpec {
        id: "B".to_string(),
        entry_year: 2011,
        cpu_cost: 294.0,
        dimm_cost: 30.0,
        qps: 295443.0,
        power_w: 58.0,
        epa: 0.793,
        gpa: 0.17,
        die_area_cm2: 2.16,
        cps_dram: 0.6,
        cap_dram_gb: 8.0,
        ..server_a()
    }
}

pub(crate) fn server_d() -> ServerSpec {
    ServerSpec {
        id: "D".to_string(),
        entry_year: 2013,
        cpu_cost: 294.0,
        dimm_cost: 40.0,
        qps: 491887.0,
        power_w: 58.5,
        epa: 1.08,
        gpa: 0.18,
        die_area_cm2: 1.6,
        cps_dram: 0.315,
        cap_dram_gb: 8.0,
        ..server_a()
    }
}

pub(crate) fn server_g() -> ServerSpec {
    ServerSpec {
        id: "G".to_string(),
        entry_year: 2016,
        cpu_cost: 294.0,
        dimm_cost: 50.0,
        qps: 474667.0,
        power_w: 47.9,
        epa: 1.2,
        gpa: 0.2,
        die_area_cm2: 1.22,
        cps_dram: 0.065,
        cap_dram_gb: 16.0,
        ..server_a()
    }
}

pub(crate) fn server_h() -> ServerSpec {
    ServerSpec {
        id: "H".to_string(),
        entry_year: 2017,
        cpu_cost: 250.0,
        dimm_cost: 40.0,
        qps: 586973.0,
        power_w: 56.1,
        epa: 1.2,
        gpa: 0.2,
        die_area_cm2: 1.22,
        cps_dram: 0.065,
        cap_dram_gb: 16.0,
        ..server_a()
    }
}

/// Fleet containing exactly the servers used by the reference optimum.
pub(crate) fn fleet_abdh() -> Fleet {
    Fleet::new(vec![server_a(), server_b(), server_d(), server_h()]).unwrap()
}

pub(crate) fn plan(parts: &[(&str, i32, u32)]) -> UpgradePlan {
    UpgradePlan::new(
        parts
            .iter()
            .map(|&(id, y, d)| PlanSegment::new(id, y, d))
            .collect(),
    )
}
