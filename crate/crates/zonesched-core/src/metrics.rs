//! Statistics for one pipeline stage: occupancy dispersion (CV), the
//! load-balance percentage, traffic cost and proportion, and the performance
//! index.

use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{CostParams, DependencyGraph, Placement, UnplacedApplication};
use crate::topology::{self, Topology};

/// Weights of the performance index. The index is
/// `(alpha + beta) / (repeated traffic proportion + (100 - load balance) + EPSILON)`:
/// strictly decreasing in traffic, strictly increasing in load balance, and
/// capped at `alpha + beta` over `EPSILON` when both are ideal.
pub const DEFAULT_ALPHA: f64 = 50.0;
pub const DEFAULT_BETA: f64 = 50.0;
pub const EPSILON: f64 = 1.0;

fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Mean per-zone application count.
pub fn mean(occupancy: &[usize]) -> f64 {
    if occupancy.is_empty() {
        return 0.0;
    }
    occupancy.iter().sum::<usize>() as f64 / occupancy.len() as f64
}

/// Population standard deviation of the occupancy vector.
pub fn std_dev(occupancy: &[usize]) -> f64 {
    if occupancy.is_empty() {
        return 0.0;
    }
    let mu = mean(occupancy);
    let var = occupancy
        .iter()
        .map(|&n| {
            let d = n as f64 - mu;
            d * d
        })
        .sum::<f64>()
        / occupancy.len() as f64;
    sqrt(var)
}

/// Coefficient of variation, `sigma / mu`; 0 for an empty system.
pub fn cv(occupancy: &[usize]) -> f64 {
    let mu = mean(occupancy);
    if mu == 0.0 {
        return 0.0;
    }
    std_dev(occupancy) / mu
}

/// Load-balance percentage, `100 * (1 - cv / sqrt(|Z|))`, clamped to
/// `[0, 100]`. 100 at perfect balance, approaching the floor as all
/// applications pile into a single zone.
pub fn load_balance_pct(occupancy: &[usize]) -> f64 {
    if occupancy.is_empty() {
        return 100.0;
    }
    let pct = 100.0 * (1.0 - cv(occupancy) / sqrt(occupancy.len() as f64));
    pct.clamp(0.0, 100.0)
}

/// Priced traffic over all dependency edges for one request/response round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrafficMetrics {
    pub intra_cost_edges: u64,
    pub core_edges: u64,
    pub traffic_cost: u64,
    pub proportion_pct: f64,
    pub proportion_pct_repeated: f64,
}

impl TrafficMetrics {
    pub const ZERO: TrafficMetrics = TrafficMetrics {
        intra_cost_edges: 0,
        core_edges: 0,
        traffic_cost: 0,
        proportion_pct: 0.0,
        proportion_pct_repeated: 0.0,
    };
}

/// Proportion of the available bandwidth one round consumes:
/// `100 * cost / (bandwidth_unit * total path edges)`, 0 when no edges.
pub fn proportion_pct(traffic_cost: u64, total_edges: u64, cp: &CostParams) -> f64 {
    if total_edges == 0 {
        return 0.0;
    }
    100.0 * traffic_cost as f64 / (cp.bandwidth_unit * total_edges) as f64
}

/// Sums shortest-path edge profiles over every dependency edge and prices
/// them. Errors if any endpoint is unplaced.
pub fn traffic_metrics(
    placement: &Placement,
    deps: &DependencyGraph,
    topology: &Topology,
    cp: &CostParams,
) -> Result<TrafficMetrics, UnplacedApplication> {
    let mut intra = 0u64;
    let mut core = 0u64;
    for &(a, b) in deps.edges() {
        let profile = topology::classify_path(a, b, placement, topology)?;
        intra += profile.intra_edges;
        core += profile.core_edges;
    }
    let traffic_cost = intra * cp.intra_edge_cost + core * cp.core_edge_cost;
    let pct = proportion_pct(traffic_cost, intra + core, cp);
    Ok(TrafficMetrics {
        intra_cost_edges: intra,
        core_edges: core,
        traffic_cost,
        proportion_pct: pct,
        proportion_pct_repeated: cp.repetitions as f64 * pct,
    })
}

/// Performance index; see [`DEFAULT_ALPHA`]. `traffic_pct_repeated` is the
/// repeated-round traffic proportion, `load_balance` a percentage.
pub fn performance_index(traffic_pct_repeated: f64, load_balance: f64, alpha: f64, beta: f64) -> f64 {
    debug_assert!(alpha > 0.0 && beta > 0.0);
    (alpha + beta) / (traffic_pct_repeated + (100.0 - load_balance) + EPSILON)
}

/// Snapshot of every reported statistic for one pipeline stage.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub stage: String,
    pub occupancy: Vec<usize>,
    pub mu: f64,
    pub sigma: f64,
    pub cv: f64,
    pub load_balance_pct: f64,
    pub internal_deps: usize,
    pub external_deps: usize,
    pub intra_cost_edges: u64,
    pub core_edges: u64,
    pub traffic_cost: u64,
    pub traffic_proportion_pct: f64,
    pub traffic_proportion_pct_repeated: f64,
    pub cumulative_moves: usize,
    pub cumulative_move_cost: u64,
    pub performance_index: f64,
}

impl MetricsReport {
    /// Captures the current placement state under `stage`.
    pub fn capture(
        stage: String,
        placement: &Placement,
        deps: &DependencyGraph,
        topology: &Topology,
        cp: &CostParams,
        cumulative_moves: usize,
        cumulative_move_cost: u64,
    ) -> Result<MetricsReport, UnplacedApplication> {
        let occupancy = placement.occupancy().to_vec();
        let (internal, external) = crate::optimizer::count_dependencies(placement, deps)?;
        let traffic = traffic_metrics(placement, deps, topology, cp)?;
        let lb = load_balance_pct(&occupancy);
        Ok(MetricsReport {
            mu: mean(&occupancy),
            sigma: std_dev(&occupancy),
            cv: cv(&occupancy),
            load_balance_pct: lb,
            internal_deps: internal,
            external_deps: external,
            intra_cost_edges: traffic.intra_cost_edges,
            core_edges: traffic.core_edges,
            traffic_cost: traffic.traffic_cost,
            traffic_proportion_pct: traffic.proportion_pct,
            traffic_proportion_pct_repeated: traffic.proportion_pct_repeated,
            performance_index: performance_index(
                traffic.proportion_pct_repeated,
                lb,
                DEFAULT_ALPHA,
                DEFAULT_BETA,
            ),
            stage,
            occupancy,
            cumulative_moves,
            cumulative_move_cost,
        })
    }
}
