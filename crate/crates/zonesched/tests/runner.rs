//! Integration tests over the bundled scenarios and the CLI binary.

use std::path::PathBuf;
use std::process::Command;

use zonesched::report::{to_csv, to_text};
use zonesched::scenario::parse_scenario_file;
use zonesched_core::{run_pipeline, MetricsReport, RunReport};

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn run_bundled(name: &str) -> RunReport {
    let loaded = parse_scenario_file(&scenario_path(name)).expect("bundled scenario parses");
    run_pipeline(&loaded.scenario).expect("bundled scenario runs")
}

fn stage<'a>(report: &'a RunReport, name: &str) -> &'a MetricsReport {
    report
        .stages
        .iter()
        .find(|s| s.stage == name)
        .unwrap_or_else(|| panic!("stage `{name}` missing"))
}

#[test]
fn tc1_parses_to_the_documented_shape() {
    let loaded = parse_scenario_file(&scenario_path("tc1.json")).unwrap();
    assert_eq!(loaded.scenario.apps.len(), 40);
    assert_eq!(loaded.scenario.zones.len(), 4);
    assert_eq!(loaded.scenario.deps.edge_count(), 22);
}

#[test]
fn tc2_parses_to_the_documented_shape() {
    let loaded = parse_scenario_file(&scenario_path("tc2.json")).unwrap();
    assert_eq!(loaded.scenario.apps.len(), 200);
    assert_eq!(loaded.scenario.zones.len(), 10);
    assert_eq!(loaded.scenario.deps.edge_count(), 314);
}

#[test]
fn tc1_initial_deployment_matches_the_reference_run() {
    let report = run_bundled("tc1.json");
    let deploy = stage(&report, "deploy");
    assert_eq!(deploy.occupancy, vec![10, 10, 10, 10]);
    assert_eq!(deploy.cv, 0.0);
    assert_eq!(deploy.load_balance_pct, 100.0);
    assert_eq!((deploy.internal_deps, deploy.external_deps), (7, 15));
    assert_eq!((deploy.intra_cost_edges, deploy.core_edges), (82, 30));
    assert_eq!(deploy.traffic_cost, 3820);
    assert!((deploy.traffic_proportion_pct - 3.4107142857142856).abs() < 1e-12);
    assert!((deploy.traffic_proportion_pct_repeated - 34.107142857142854).abs() < 1e-12);
}

#[test]
fn tc1_cut_stage_matches_the_reference_run() {
    let report = run_bundled("tc1.json");
    let cut = stage(&report, "cut-final");
    assert_eq!(cut.external_deps, 1);
    assert_eq!(cut.internal_deps, 21);
    assert_eq!(cut.occupancy, vec![8, 12, 11, 9]);
    assert!((cut.load_balance_pct - 92.09430584957906).abs() < 1e-9);
    assert_eq!(cut.cumulative_moves, 14);
    assert_eq!(cut.cumulative_move_cost, 33600);
    assert_eq!((cut.intra_cost_edges, cut.core_edges), (84, 2));
    assert_eq!(cut.traffic_cost, 1040);
    assert!((cut.traffic_proportion_pct - 1.2093023255813953).abs() < 1e-12);
}

#[test]
fn tc1_rebalance_restores_perfect_balance_without_touching_traffic() {
    let report = run_bundled("tc1.json");
    let rebalance = stage(&report, "rebalance");
    assert_eq!(rebalance.occupancy, vec![10, 10, 10, 10]);
    assert_eq!(rebalance.load_balance_pct, 100.0);
    assert_eq!(rebalance.external_deps, 1);
    assert!((rebalance.traffic_proportion_pct - 1.2093023255813953).abs() < 1e-12);
    // the three rebalance moves add to the move bill but not to traffic
    assert_eq!(rebalance.cumulative_moves, 17);
    assert_eq!(rebalance.cumulative_move_cost, 40800);
}

#[test]
fn tc2_initial_deployment_matches_the_reference_run() {
    let report = run_bundled("tc2.json");
    let deploy = stage(&report, "deploy");
    assert_eq!(deploy.occupancy, vec![20; 10]);
    assert_eq!(deploy.load_balance_pct, 100.0);
    assert_eq!((deploy.internal_deps, deploy.external_deps), (33, 281));
    assert_eq!((deploy.intra_cost_edges, deploy.core_edges), (1256, 562));
    assert_eq!(deploy.traffic_cost, 68760);
    assert!((deploy.traffic_proportion_pct - 3.782178217821782).abs() < 1e-12);
}

#[test]
fn tc2_cut_reduces_external_dependencies_substantially() {
    let report = run_bundled("tc2.json");
    let deploy = stage(&report, "deploy");
    let cut = stage(&report, "cut-final");
    assert!(cut.external_deps * 2 < deploy.external_deps);
    assert!(cut.traffic_cost < deploy.traffic_cost);
    let rebalance = stage(&report, "rebalance");
    assert!(rebalance.load_balance_pct > cut.load_balance_pct);
    assert_eq!(rebalance.external_deps, cut.external_deps);
}

#[test]
fn arrival_batch_raises_then_cuts_external_dependencies() {
    let report = run_bundled("tc1_arrivals.json");
    // batch 0 must be identical to the plain tc1 run
    let plain = run_bundled("tc1.json");
    for name in ["deploy", "cut-final", "rebalance"] {
        assert_eq!(stage(&report, name), stage(&plain, name), "stage {name}");
    }
    let arrived = stage(&report, "arrival1-deploy");
    assert_eq!(arrived.occupancy, vec![15, 15, 15, 15]);
    assert_eq!(arrived.external_deps, 16);
    let cut = stage(&report, "arrival1-cut-final");
    assert_eq!(cut.external_deps, 4); // a 75% reduction
    let last = report.stages.last().unwrap();
    assert_eq!(last.stage, "arrival1-rebalance");
}

#[test]
fn text_report_draws_one_plus_per_hosted_application() {
    let report = run_bundled("tc1.json");
    let text = to_text(&report, 40.0);
    let deploy_block: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("== deploy =="))
        .take(5)
        .collect();
    assert_eq!(deploy_block[1], format!("zone0  :{}", "+".repeat(10)));
    assert_eq!(deploy_block[4], format!("zone3  :{}", "+".repeat(10)));

    let report = run_bundled("tc2.json");
    let text = to_text(&report, 40.0);
    let bars: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("== deploy =="))
        .skip(1)
        .take(10)
        .collect();
    assert_eq!(bars.len(), 10);
    for (i, line) in bars.iter().enumerate() {
        assert_eq!(*line, format!("zone{i}  :{}", "+".repeat(20)));
    }
}

#[test]
fn csv_report_is_byte_deterministic() {
    let a = to_csv(&run_bundled("tc1.json"));
    let b = to_csv(&run_bundled("tc1.json"));
    assert_eq!(a, b);
    assert!(a.starts_with("stage,occupancy,mu,sigma,cv,load_balance_pct,"));
}

#[test]
fn every_application_ends_up_placed_exactly_once() {
    for name in ["tc1.json", "tc2.json", "tc1_arrivals.json"] {
        let loaded = parse_scenario_file(&scenario_path(name)).unwrap();
        let report = run_pipeline(&loaded.scenario).unwrap();
        for app in 0..loaded.scenario.apps.len() {
            assert!(
                report.final_placement.slot_of(app).is_some(),
                "{name}: app {app} unplaced"
            );
        }
        let total: usize = report.final_placement.occupancy().iter().sum();
        assert_eq!(total, loaded.scenario.apps.len(), "{name}");
    }
}

mod cli {
    use super::*;

    fn bin() -> Command {
        Command::new(env!("CARGO_BIN_EXE_zonesched"))
    }

    #[test]
    fn run_twice_produces_identical_csv_bytes() {
        let out = |()| {
            bin()
                .args(["run", scenario_path("tc1.json").to_str().unwrap()])
                .args(["--format", "csv", "--seed", "1"])
                .output()
                .expect("binary runs")
        };
        let first = out(());
        let second = out(());
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout);
        assert!(!first.stdout.is_empty());
    }

    #[test]
    fn validate_reports_scenario_summary() {
        let out = bin()
            .args(["validate", scenario_path("tc2.json").to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("200 applications"));
        assert!(text.contains("314 dependencies"));
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        let dir = tempfile::tempdir().unwrap();

        // 1: validation error
        let bad = dir.path().join("bad.json");
        std::fs::write(
            &bad,
            r#"{"zones":[{"name":"z","cpu_cap":1,"ram_cap":1,"disk_cap":1,"container_count":3}],
                "applications":[{"name":"A","cpu_req":1,"ram_req":0,"disk_req":0}]}"#,
        )
        .unwrap();
        let out = bin().args(["validate", bad.to_str().unwrap()]).output().unwrap();
        assert_eq!(out.status.code(), Some(1));

        // 2: unschedulable
        let stuck = dir.path().join("stuck.json");
        std::fs::write(
            &stuck,
            r#"{"zones":[{"name":"z","cpu_cap":1,"ram_cap":1,"disk_cap":1,"container_count":2}],
                "applications":[{"name":"A","cpu_req":5,"ram_req":1,"disk_req":1}]}"#,
        )
        .unwrap();
        let out = bin()
            .args(["run", stuck.to_str().unwrap(), "--format", "csv"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2));
        // partial report still comes out
        assert!(String::from_utf8(out.stdout).unwrap().starts_with("stage,"));

        // 3: I/O error
        let out = bin()
            .args(["validate", dir.path().join("missing.json").to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(3));
    }

    #[test]
    fn synth_emits_a_runnable_scenario() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("synth.json");
        let out = bin()
            .args(["synth", "--apps", "40", "--edges", "22", "--seed", "1"])
            .args(["--out", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

        let loaded = parse_scenario_file(&path).unwrap();
        assert_eq!(loaded.scenario.apps.len(), 40);
        assert_eq!(loaded.scenario.deps.edge_count(), 22);
        let report = run_pipeline(&loaded.scenario).unwrap();
        assert_eq!(report.stages.first().unwrap().occupancy, vec![10, 10, 10, 10]);

        // same seed, same bytes
        let again = dir.path().join("synth2.json");
        bin()
            .args(["synth", "--apps", "40", "--edges", "22", "--seed", "1"])
            .args(["--out", again.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(&again).unwrap()
        );

        // infeasible profile
        let out = bin()
            .args(["synth", "--apps", "2", "--edges", "5", "--seed", "1"])
            .args(["--out", dir.path().join("x.json").to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(1));
    }

    #[test]
    fn cut_schedule_and_reps_overrides_apply() {
        let out = bin()
            .args(["run", scenario_path("tc1.json").to_str().unwrap()])
            .args(["--format", "csv", "--cut-schedule", "50,100", "--reps", "3"])
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("cut-50,"));
        assert!(!text.contains("cut-20,"));
        // reps=3: repeated proportion is 3x the single-round one
        let deploy = text.lines().find(|l| l.starts_with("deploy,")).unwrap();
        let cols: Vec<&str> = deploy.split(',').collect();
        let single: f64 = cols[11].parse().unwrap();
        let repeated: f64 = cols[12].parse().unwrap();
        assert!((repeated - 3.0 * single).abs() < 1e-9);
    }
}
