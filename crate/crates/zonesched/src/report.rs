//! Report rendering: a fixed-column CSV for machine consumption and a text
//! format with per-zone occupancy bars in the simulator's console style.

use std::fmt::Write as _;

use zonesched_core::{MetricsReport, RunReport};

/// Fixed CSV column order; one row per stage report.
pub const CSV_HEADER: &str = "stage,occupancy,mu,sigma,cv,load_balance_pct,internal_deps,\
external_deps,intra_edges,core_edges,traffic_cost,traffic_pct,traffic_pct_repeated,moves,\
move_cost,performance_index";

fn occupancy_cell(occupancy: &[usize]) -> String {
    occupancy
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join("|")
}

fn csv_row(stage: &MetricsReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        stage.stage,
        occupancy_cell(&stage.occupancy),
        stage.mu,
        stage.sigma,
        stage.cv,
        stage.load_balance_pct,
        stage.internal_deps,
        stage.external_deps,
        stage.intra_cost_edges,
        stage.core_edges,
        stage.traffic_cost,
        stage.traffic_proportion_pct,
        stage.traffic_proportion_pct_repeated,
        stage.cumulative_moves,
        stage.cumulative_move_cost,
        stage.performance_index,
    )
}

/// Renders the run as CSV. An empty report still yields the header line.
pub fn to_csv(report: &RunReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for stage in &report.stages {
        out.push_str(&csv_row(stage));
        out.push('\n');
    }
    out
}

/// Renders one stage as occupancy bars plus the key statistics.
fn text_stage(out: &mut String, report: &RunReport, stage: &MetricsReport) {
    let _ = writeln!(out, "== {} ==", stage.stage);
    for (zone, count) in report.zones.iter().zip(&stage.occupancy) {
        let _ = writeln!(out, "{:<7}:{}", zone.name, "+".repeat(*count));
    }
    let _ = writeln!(
        out,
        "map[{}]",
        report
            .zones
            .iter()
            .zip(&stage.occupancy)
            .map(|(z, n)| format!("{}:{}", z.name, n))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(
        out,
        "dependencies: internal = {}, external = {}",
        stage.internal_deps, stage.external_deps
    );
    let _ = writeln!(
        out,
        "traffic edges: same-zone = {}, core = {}",
        stage.intra_cost_edges, stage.core_edges
    );
    let _ = writeln!(out, "traffic cost = {}", stage.traffic_cost);
    let _ = writeln!(
        out,
        "traffic proportion = {} (repeated: {})",
        stage.traffic_proportion_pct, stage.traffic_proportion_pct_repeated
    );
    let _ = writeln!(out, "coefficient variation = {}", stage.cv);
    let _ = writeln!(out, "load balancing = {}", stage.load_balance_pct);
    let _ = writeln!(
        out,
        "moving applications = {} (cost {})",
        stage.cumulative_moves, stage.cumulative_move_cost
    );
    let _ = writeln!(out, "performance index = {}", stage.performance_index);
    out.push('\n');
}

/// Renders the full run as text: a header, each stage, then the move log.
/// `move_traffic_pct` is the reporting constant for one-off move traffic.
pub fn to_text(report: &RunReport, move_traffic_pct: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "zonesched run: {} zones, {} stage reports",
        report.zones.len(),
        report.stages.len()
    );
    let _ = writeln!(out, "traffic for moving applications = {move_traffic_pct}%");
    let _ = writeln!(
        out,
        "arrival batches re-run the cut and rebalance stages over the whole system"
    );
    out.push('\n');
    for stage in &report.stages {
        text_stage(&mut out, report, stage);
    }
    let _ = writeln!(out, "== moves ==");
    if report.moves.is_empty() {
        let _ = writeln!(out, "(none)");
    }
    for m in &report.moves {
        let _ = writeln!(
            out,
            "{}: {} -> {} ({}, cost {})",
            m.app, m.from_zone, m.to_zone, m.reason, m.cost
        );
    }
    out
}
