//! End-to-end execution: sort zones, deploy, cut, rebalance, then repeat
//! deploy/cut/rebalance for every arrival batch, capturing a metrics
//! snapshot at each stage boundary and cut checkpoint.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::metrics::MetricsReport;
use crate::model::{AppId, Placement, Scenario, ZoneSpec};
use crate::optimizer::{self, CutPoint, MoveRecord};
use crate::scheduler;
use crate::topology::{self, Topology};

/// Everything a run produced: one report per stage (in execution order), the
/// full move log, and the final placement. `zones` is the sorted order all
/// occupancy vectors refer to.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub zones: Vec<ZoneSpec>,
    pub stages: Vec<MetricsReport>,
    pub moves: Vec<MoveRecord>,
    pub final_placement: Placement,
}

/// Deployment ran out of hosting room. The partial report covers everything
/// up to the failure.
#[derive(Clone, Debug)]
pub enum PipelineError {
    Unschedulable { app: String, partial: RunReport },
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Unschedulable { app, .. } => {
                write!(f, "no zone can host application `{app}`")
            }
        }
    }
}

fn stage_label(batch: u32, stage: &str) -> String {
    if batch == 0 {
        stage.to_string()
    } else {
        format!("arrival{batch}-{stage}")
    }
}

/// Formats a cut fraction without a trailing `.0` for whole percentages.
fn fraction_label(fraction: f64) -> String {
    if fraction == libm::floor(fraction) {
        format!("{}", fraction as u64)
    } else {
        format!("{fraction}")
    }
}

/// Runs the whole pipeline over a validated scenario.
pub fn run_pipeline(scenario: &Scenario) -> Result<RunReport, PipelineError> {
    let zones = scheduler::sort_zones_ascending(&scenario.zones);
    let topo: Topology = topology::build_topology(&zones);
    let cp = &scenario.cost_params;
    let mut placement = Placement::new(scenario.apps.len(), &zones);
    let mut stages: Vec<MetricsReport> = Vec::new();
    let mut moves: Vec<MoveRecord> = Vec::new();

    let batches = scenario.batch_count().max(1);
    for batch in 0..batches {
        let active = scenario.active_deps(batch);
        let queue: Vec<AppId> = scenario
            .apps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.arrival_batch == batch)
            .map(|(i, _)| i)
            .collect();

        if let Err(err) =
            scheduler::deploy_round_robin(&queue, &scenario.apps, &zones, &mut placement)
        {
            return Err(PipelineError::Unschedulable {
                app: err.app,
                partial: RunReport {
                    zones,
                    stages,
                    moves,
                    final_placement: placement,
                },
            });
        }
        let snapshot = |label: String, p: &Placement, all_moves: &[MoveRecord]| {
            MetricsReport::capture(
                label,
                p,
                &active,
                &topo,
                cp,
                all_moves.len(),
                all_moves.iter().map(|m| m.cost).sum(),
            )
            .expect("all arrived dependency endpoints are placed")
        };
        stages.push(snapshot(stage_label(batch, "deploy"), &placement, &moves));

        let prior_moves = moves.clone();
        let cut_moves = optimizer::local_search_cut(
            &mut placement,
            &active,
            &topo,
            cp,
            &scenario.cut_schedule,
            &scenario.apps,
            &zones,
            |point, p, cut_moves| {
                let label = match point {
                    CutPoint::Fraction(f) => {
                        stage_label(batch, &format!("cut-{}", fraction_label(f)))
                    }
                    CutPoint::Final => stage_label(batch, "cut-final"),
                };
                let mut all = prior_moves.clone();
                all.extend_from_slice(cut_moves);
                stages.push(snapshot(label, p, &all));
            },
        );
        moves.extend(cut_moves);

        let rebalance_moves =
            optimizer::rebalance_independent(&mut placement, &active, cp, &scenario.apps, &zones);
        moves.extend(rebalance_moves);
        stages.push(snapshot(stage_label(batch, "rebalance"), &placement, &moves));
    }

    Ok(RunReport {
        zones,
        stages,
        moves,
        final_placement: placement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ApplicationSpec, CostParams, DependencyGraph};
    use crate::optimizer::CutSchedule;
    use alloc::vec;

    fn scenario(
        app_count: usize,
        zone_count: usize,
        containers: usize,
        edges: Vec<(usize, usize)>,
    ) -> Scenario {
        let apps = (0..app_count)
            .map(|i| ApplicationSpec {
                name: format!("A{i}"),
                cpu_req: 1,
                ram_req: 2,
                disk_req: 5,
                arrival_batch: 0,
            })
            .collect::<Vec<_>>();
        let zones = (0..zone_count)
            .map(|i| ZoneSpec {
                name: format!("zone{i}"),
                cpu_cap: containers as u64,
                ram_cap: 2 * containers as u64,
                disk_cap: 5 * containers as u64,
                container_count: containers,
            })
            .collect::<Vec<_>>();
        Scenario {
            deps: DependencyGraph::new(app_count, edges),
            edge_batches: Default::default(),
            apps,
            zones,
            cost_params: CostParams::default(),
            cut_schedule: CutSchedule::default(),
            seed: None,
        }
    }

    #[test]
    fn dependency_free_scenario_reports_ideal_metrics() {
        let report = run_pipeline(&scenario(8, 2, 8, vec![])).unwrap();
        assert!(report.moves.is_empty());
        let labels: Vec<_> = report.stages.iter().map(|s| s.stage.as_str()).collect();
        assert_eq!(labels, vec!["deploy", "cut-final", "rebalance"]);
        for stage in &report.stages {
            assert_eq!(stage.traffic_cost, 0);
            assert_eq!(stage.load_balance_pct, 100.0);
            assert_eq!(stage.performance_index, 100.0);
        }
    }

    #[test]
    fn unschedulable_keeps_partial_state() {
        let mut s = scenario(3, 1, 2, vec![]);
        s.apps[2].cpu_req = 1000;
        let err = run_pipeline(&s).unwrap_err();
        let PipelineError::Unschedulable { app, partial } = err;
        assert_eq!(app, "A2");
        assert_eq!(partial.final_placement.occupancy(), &[2]);
        assert!(partial.stages.is_empty());
    }

    #[test]
    fn arrival_batches_rerun_the_optimizer_stages() {
        let mut s = scenario(6, 2, 6, vec![(0, 4), (4, 5)]);
        s.apps[4].arrival_batch = 1;
        s.apps[5].arrival_batch = 1;
        let report = run_pipeline(&s).unwrap();
        let labels: Vec<_> = report.stages.iter().map(|s| s.stage.as_str()).collect();
        assert!(labels.contains(&"deploy"));
        assert!(labels.contains(&"arrival1-deploy"));
        assert!(labels.contains(&"arrival1-rebalance"));
        // batch-0 stages never see the yet-to-arrive dependency edges
        let deploy = report.stages.iter().find(|s| s.stage == "deploy").unwrap();
        assert_eq!(deploy.internal_deps + deploy.external_deps, 0);
        let arrived = report
            .stages
            .iter()
            .find(|s| s.stage == "arrival1-deploy")
            .unwrap();
        assert_eq!(arrived.internal_deps + arrived.external_deps, 2);
    }

    #[test]
    fn stage_order_is_deterministic() {
        let s = scenario(12, 3, 6, vec![(0, 1), (3, 4), (6, 7), (9, 10), (2, 5)]);
        let a = run_pipeline(&s).unwrap();
        let b = run_pipeline(&s).unwrap();
        assert_eq!(a, b);
    }
}
