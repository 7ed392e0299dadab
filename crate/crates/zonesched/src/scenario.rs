//! JSON scenario files: schema, parsing and validation.
//!
//! Top-level keys: `zones`, `applications`, `dependencies` (array of name
//! pairs), `cost_params`, `cut_schedule`, `arrivals`, `seed`. Each arrival
//! batch carries its own applications plus the dependency edges that become
//! active when the batch arrives; those edges may only reference
//! applications from the same or earlier batches.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use zonesched_core::model::{validate_scenario, RawApplication, RawScenario};
use zonesched_core::optimizer::CutSchedule;
use zonesched_core::{CostParams, Scenario, ValidationError, ZoneSpec};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario:\n{}", format_violations(.0))]
    Validation(Vec<ValidationError>),
    #[error("dependency `{a}`-`{b}` declared with batch {batch} references an application that arrives in a later batch")]
    ArrivalEdgeAhead { batch: u32, a: String, b: String },
    #[error("{0}")]
    CutSchedule(String),
}

fn format_violations(errors: &[ValidationError]) -> String {
    errors
        .iter()
        .map(|e| format!("  - {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Serialize, Deserialize)]
struct ApplicationDoc {
    name: String,
    #[serde(default)]
    cpu_req: i64,
    #[serde(default)]
    ram_req: i64,
    #[serde(default)]
    disk_req: i64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ZoneDoc {
    name: String,
    cpu_cap: u64,
    ram_cap: u64,
    disk_cap: u64,
    container_count: usize,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CostParamsDoc {
    intra_edge_cost: Option<u64>,
    core_edge_cost: Option<u64>,
    move_multiplier: Option<u64>,
    repetitions: Option<u32>,
    bandwidth_unit: Option<u64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct ArrivalDoc {
    #[serde(default)]
    applications: Vec<ApplicationDoc>,
    #[serde(default)]
    dependencies: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ScenarioDoc {
    zones: Vec<ZoneDoc>,
    applications: Vec<ApplicationDoc>,
    #[serde(default)]
    dependencies: Vec<(String, String)>,
    #[serde(default)]
    cost_params: Option<CostParamsDoc>,
    #[serde(default)]
    cut_schedule: Option<Vec<f64>>,
    #[serde(default)]
    arrivals: Vec<ArrivalDoc>,
    #[serde(default)]
    seed: Option<u64>,
    /// Reporting constant: the one-off bandwidth share attributed to moving
    /// applications, shown in text reports.
    #[serde(default)]
    move_traffic_pct: Option<f64>,
}

/// A parsed and validated scenario plus report-only settings.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub move_traffic_pct: f64,
}

pub fn parse_scenario_str(text: &str) -> Result<LoadedScenario, ScenarioError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut raw = RawScenario::default();
    for zone in &doc.zones {
        raw.zones.push(ZoneSpec {
            name: zone.name.clone(),
            cpu_cap: zone.cpu_cap,
            ram_cap: zone.ram_cap,
            disk_cap: zone.disk_cap,
            container_count: zone.container_count,
        });
    }
    let push_apps = |apps: &[ApplicationDoc], batch: u32, raw: &mut RawScenario| {
        for app in apps {
            raw.apps.push(RawApplication {
                name: app.name.clone(),
                cpu_req: app.cpu_req,
                ram_req: app.ram_req,
                disk_req: app.disk_req,
                arrival_batch: batch,
            });
        }
    };
    push_apps(&doc.applications, 0, &mut raw);
    raw.deps = doc.dependencies.clone();
    for (i, arrival) in doc.arrivals.iter().enumerate() {
        push_apps(&arrival.applications, i as u32 + 1, &mut raw);
        raw.deps.extend(arrival.dependencies.iter().cloned());
    }

    let (apps, zones, deps) = validate_scenario(&raw).map_err(ScenarioError::Validation)?;

    // Batch discipline: an edge declared with batch k (the top-level section
    // is batch 0) may only reference applications that have arrived by batch
    // k, and activates exactly at batch k.
    let index_of = |name: &str| apps.iter().position(|x| x.name == name);
    let mut edge_batches = std::collections::BTreeMap::new();
    let mut sections: Vec<(u32, &[(String, String)])> = vec![(0, &doc.dependencies[..])];
    for (i, arrival) in doc.arrivals.iter().enumerate() {
        sections.push((i as u32 + 1, &arrival.dependencies[..]));
    }
    for (batch, section) in sections {
        for (a, b) in section {
            let (ia, ib) = (
                index_of(a).expect("validated endpoint exists"),
                index_of(b).expect("validated endpoint exists"),
            );
            if apps[ia].arrival_batch > batch || apps[ib].arrival_batch > batch {
                return Err(ScenarioError::ArrivalEdgeAhead {
                    batch,
                    a: a.clone(),
                    b: b.clone(),
                });
            }
            edge_batches.insert((ia.min(ib), ia.max(ib)), batch);
        }
    }

    let defaults = CostParams::default();
    let cost_params = match &doc.cost_params {
        None => defaults,
        Some(doc) => CostParams {
            intra_edge_cost: doc.intra_edge_cost.unwrap_or(defaults.intra_edge_cost),
            core_edge_cost: doc.core_edge_cost.unwrap_or(defaults.core_edge_cost),
            move_multiplier: doc.move_multiplier.unwrap_or(defaults.move_multiplier),
            repetitions: doc.repetitions.unwrap_or(defaults.repetitions),
            bandwidth_unit: doc.bandwidth_unit.unwrap_or(defaults.bandwidth_unit),
        },
    };
    let cut_schedule = match doc.cut_schedule {
        None => CutSchedule::default(),
        Some(fractions) => {
            CutSchedule::new(fractions).map_err(|e| ScenarioError::CutSchedule(e.to_string()))?
        }
    };

    Ok(LoadedScenario {
        scenario: Scenario {
            apps,
            zones,
            deps,
            edge_batches,
            cost_params,
            cut_schedule,
            seed: doc.seed,
        },
        move_traffic_pct: doc.move_traffic_pct.unwrap_or(40.0),
    })
}

pub fn parse_scenario_file(path: &Path) -> Result<LoadedScenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_parses_with_defaults() {
        let text = r#"{
            "zones": [{"name":"zone0","cpu_cap":4,"ram_cap":8,"disk_cap":20,"container_count":4}],
            "applications": [{"name":"A0","cpu_req":1,"ram_req":2,"disk_req":5}]
        }"#;
        let loaded = parse_scenario_str(text).unwrap();
        assert_eq!(loaded.scenario.cost_params, CostParams::default());
        assert_eq!(loaded.scenario.deps.edge_count(), 0);
        assert_eq!(loaded.move_traffic_pct, 40.0);
    }

    #[test]
    fn missing_zones_is_a_parse_error() {
        let err = parse_scenario_str(r#"{"applications": []}"#).unwrap_err();
        match err {
            ScenarioError::Parse { message, .. } => assert!(message.contains("zones")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn validation_failures_are_aggregated() {
        let text = r#"{
            "zones": [{"name":"zone0","cpu_cap":4,"ram_cap":8,"disk_cap":20,"container_count":3}],
            "applications": [{"name":"A0","cpu_req":1,"ram_req":2,"disk_req":5}],
            "dependencies": [["A0","A9"]]
        }"#;
        match parse_scenario_str(text).unwrap_err() {
            ScenarioError::Validation(errors) => assert_eq!(errors.len(), 2),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn arrival_edges_must_not_reference_future_batches() {
        let text = r#"{
            "zones": [{"name":"zone0","cpu_cap":9,"ram_cap":9,"disk_cap":9,"container_count":4}],
            "applications": [{"name":"A0","cpu_req":1,"ram_req":1,"disk_req":1}],
            "arrivals": [
                {"applications": [{"name":"A1","cpu_req":1,"ram_req":1,"disk_req":1}],
                 "dependencies": [["A1","A2"]]},
                {"applications": [{"name":"A2","cpu_req":1,"ram_req":1,"disk_req":1}]}
            ]
        }"#;
        match parse_scenario_str(text).unwrap_err() {
            ScenarioError::ArrivalEdgeAhead { batch, .. } => assert_eq!(batch, 1),
            other => panic!("expected arrival edge error, got {other:?}"),
        }
    }

    #[test]
    fn arrival_apps_get_their_batch_number() {
        let text = r#"{
            "zones": [{"name":"zone0","cpu_cap":9,"ram_cap":9,"disk_cap":9,"container_count":4}],
            "applications": [{"name":"A0","cpu_req":1,"ram_req":1,"disk_req":1}],
            "arrivals": [
                {"applications": [{"name":"A1","cpu_req":1,"ram_req":1,"disk_req":1}],
                 "dependencies": [["A0","A1"]]}
            ]
        }"#;
        let loaded = parse_scenario_str(text).unwrap();
        assert_eq!(loaded.scenario.apps[0].arrival_batch, 0);
        assert_eq!(loaded.scenario.apps[1].arrival_batch, 1);
        assert_eq!(loaded.scenario.batch_count(), 2);
    }
}
