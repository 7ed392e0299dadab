//! Stage 2 and stage 3 of the pipeline: local-search reduction of cross-zone
//! dependency edges (treated as a maximum-cut style grouping problem) and
//! rebalancing of dependency-free applications.
//!
//! A move commits only when it strictly decreases the number of external
//! dependency edges; rejected moves restore the placement bit-exactly. That
//! strict-decrease rule is what guarantees termination.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{
    AppId, ApplicationSpec, CostParams, DependencyGraph, Placement, UnplacedApplication, ZoneId,
    ZoneSpec,
};
use crate::scheduler::can_host;
use crate::topology::{self, PathClass, PathProfile, Topology};

/// Why an application was relocated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveReason {
    DependencyCut,
    Rebalance,
}

impl fmt::Display for MoveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveReason::DependencyCut => write!(f, "dependency-cut"),
            MoveReason::Rebalance => write!(f, "rebalance"),
        }
    }
}

/// One committed relocation. Moving an application costs
/// `move_multiplier` times the cross-zone path cost, charged once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub app: String,
    pub from_zone: String,
    pub to_zone: String,
    pub reason: MoveReason,
    pub cost: u64,
}

/// Cost of relocating one application between zones.
pub fn move_cost(cp: &CostParams) -> u64 {
    cp.move_multiplier * topology::path_cost(&PathProfile::of(PathClass::CrossZone), cp)
}

/// Progressive reduction checkpoints, as percentages of the initial external
/// edge count. Strictly ascending, each within (0, 100].
#[derive(Clone, Debug, PartialEq)]
pub struct CutSchedule {
    fractions: Vec<f64>,
}

/// A cut-schedule fraction is out of range or out of order.
#[derive(Clone, Debug, PartialEq)]
pub struct InvalidCutSchedule(pub f64);

impl fmt::Display for InvalidCutSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cut-schedule fraction {} is not strictly ascending within (0, 100]",
            self.0
        )
    }
}

impl CutSchedule {
    pub fn new(fractions: Vec<f64>) -> Result<Self, InvalidCutSchedule> {
        let mut prev = 0.0;
        for &f in &fractions {
            if !(f > prev && f <= 100.0) {
                return Err(InvalidCutSchedule(f));
            }
            prev = f;
        }
        Ok(CutSchedule { fractions })
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    /// Cumulative-reduction thresholds for an initial external count.
    pub fn thresholds(&self, initial_external: usize) -> Vec<usize> {
        self.fractions
            .iter()
            .map(|f| libm::ceil(f * initial_external as f64 / 100.0) as usize)
            .collect()
    }
}

impl Default for CutSchedule {
    /// 20/40/60/80/100, the progressive reporting steps used throughout.
    fn default() -> Self {
        CutSchedule {
            fractions: alloc::vec![20.0, 40.0, 60.0, 80.0, 100.0],
        }
    }
}

/// Where a cut snapshot was taken: at a schedule fraction, or at the fixed
/// point of the search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CutPoint {
    Fraction(f64),
    Final,
}

/// Splits the dependency edges into (internal, external) counts: internal
/// edges have both endpoints in one zone. Errors if an endpoint is unplaced.
pub fn count_dependencies(
    placement: &Placement,
    deps: &DependencyGraph,
) -> Result<(usize, usize), UnplacedApplication> {
    let mut internal = 0;
    let mut external = 0;
    for &(a, b) in deps.edges() {
        let za = placement.zone_of(a).ok_or(UnplacedApplication(a))?;
        let zb = placement.zone_of(b).ok_or(UnplacedApplication(b))?;
        if za == zb {
            internal += 1;
        } else {
            external += 1;
        }
    }
    Ok((internal, external))
}

/// Number of the application's dependency edges that currently cross zones.
/// Edges to unplaced neighbours do not count.
pub fn external_degree(app: AppId, placement: &Placement, deps: &DependencyGraph) -> usize {
    let Some(zone) = placement.zone_of(app) else {
        return 0;
    };
    deps.neighbors(app)
        .iter()
        .filter(|&&n| matches!(placement.zone_of(n), Some(z) if z != zone))
        .count()
}

/// The application has no placed dependency neighbour in another zone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoExternalNeighbor(pub AppId);

/// Picks the cross-zone neighbour whose connecting path costs the most;
/// ties go to the lexicographically smaller neighbour name.
pub fn heaviest_neighbor(
    app: AppId,
    placement: &Placement,
    deps: &DependencyGraph,
    topology: &Topology,
    cp: &CostParams,
    apps: &[ApplicationSpec],
) -> Result<AppId, NoExternalNeighbor> {
    let zone = placement.zone_of(app).ok_or(NoExternalNeighbor(app))?;
    let mut best: Option<(u64, AppId)> = None;
    for &n in deps.neighbors(app) {
        match placement.zone_of(n) {
            Some(z) if z != zone => {}
            _ => continue,
        }
        let profile = topology::classify_path(app, n, placement, topology)
            .expect("both endpoints are placed");
        let cost = topology::path_cost(&profile, cp);
        let better = match best {
            None => true,
            Some((best_cost, best_app)) => {
                cost > best_cost
                    || (cost == best_cost && apps[n].name < apps[best_app].name)
            }
        };
        if better {
            best = Some((cost, n));
        }
    }
    best.map(|(_, n)| n).ok_or(NoExternalNeighbor(app))
}

/// Tentatively relocates `app` into the target zone's lowest-index free
/// container and commits only if the external edge count strictly dropped
/// and the zone could host it. Rejection restores the exact prior state and
/// is a normal outcome.
pub fn try_move(
    app: AppId,
    target_zone: ZoneId,
    placement: &mut Placement,
    deps: &DependencyGraph,
    cp: &CostParams,
    apps: &[ApplicationSpec],
    zones: &[ZoneSpec],
    reason: MoveReason,
) -> Option<MoveRecord> {
    let (from_zone, from_container) = placement.slot_of(app).expect("application placed");
    debug_assert_ne!(from_zone, target_zone, "target must differ from current zone");
    let spec = &apps[app];
    if !can_host(
        placement.residual(target_zone),
        spec,
        placement.occupancy()[target_zone],
        zones[target_zone].container_count,
    ) {
        return None;
    }
    let reqs = spec.requirements();
    // Only edges incident to `app` change, so the global external count
    // strictly decreases exactly when the app-local one does.
    let external_before = external_degree(app, placement, deps);
    placement.remove(app, &reqs);
    placement.place(app, &reqs, target_zone);
    let external_after = external_degree(app, placement, deps);
    if external_after < external_before {
        Some(MoveRecord {
            app: spec.name.clone(),
            from_zone: zones[from_zone].name.clone(),
            to_zone: zones[target_zone].name.clone(),
            reason,
            cost: move_cost(cp),
        })
    } else {
        placement.remove(app, &reqs);
        placement.place_at(app, &reqs, from_zone, from_container);
        None
    }
}

/// Local-search cut reduction. Sweeps the placed applications in descending
/// order of external-dependency degree (names break ties), moving each
/// toward its heaviest neighbour's zone, and repeats until a full sweep
/// commits nothing. `on_snapshot` fires whenever the cumulative reduction
/// first reaches a schedule threshold, and once more at the fixed point.
pub fn local_search_cut(
    placement: &mut Placement,
    deps: &DependencyGraph,
    topology: &Topology,
    cp: &CostParams,
    schedule: &CutSchedule,
    apps: &[ApplicationSpec],
    zones: &[ZoneSpec],
    mut on_snapshot: impl FnMut(CutPoint, &Placement, &[MoveRecord]),
) -> Vec<MoveRecord> {
    let (_, initial_external) =
        count_dependencies(placement, deps).expect("all dependency endpoints placed");
    let thresholds = schedule.thresholds(initial_external);
    let mut next_threshold = 0;
    let mut moves: Vec<MoveRecord> = Vec::new();

    loop {
        let mut order: Vec<AppId> = (0..apps.len())
            .filter(|&a| placement.zone_of(a).is_some())
            .collect();
        order.sort_by(|&a, &b| {
            external_degree(b, placement, deps)
                .cmp(&external_degree(a, placement, deps))
                .then_with(|| apps[a].name.cmp(&apps[b].name))
        });

        let mut committed = 0;
        for app in order {
            let Ok(neighbor) = heaviest_neighbor(app, placement, deps, topology, cp, apps) else {
                continue;
            };
            let target = placement.zone_of(neighbor).expect("neighbour is placed");
            if target == placement.zone_of(app).expect("app is placed") {
                continue;
            }
            let Some(record) =
                try_move(app, target, placement, deps, cp, apps, zones, MoveReason::DependencyCut)
            else {
                continue;
            };
            moves.push(record);
            committed += 1;
            let (_, external_now) =
                count_dependencies(placement, deps).expect("all dependency endpoints placed");
            let reduction = initial_external - external_now;
            while next_threshold < thresholds.len() && reduction >= thresholds[next_threshold] {
                on_snapshot(
                    CutPoint::Fraction(schedule.fractions[next_threshold]),
                    placement,
                    &moves,
                );
                next_threshold += 1;
            }
        }
        if committed == 0 {
            break;
        }
    }
    on_snapshot(CutPoint::Final, placement, &moves);
    moves
}

/// Scaled squared occupancy deviation, `sum((|Z| * n_i - total)^2)`. Integer
/// form of the variance, so improvement checks are exact: with the total
/// fixed, the load-balance percentage rises iff this falls.
fn balance_badness(occupancy: &[usize]) -> u128 {
    let zones = occupancy.len() as i128;
    let total: i128 = occupancy.iter().map(|&n| n as i128).sum();
    occupancy
        .iter()
        .map(|&n| {
            let d = zones * n as i128 - total;
            (d * d) as u128
        })
        .sum()
}

/// Stage 3: repeatedly relocates a dependency-free application from a zone
/// above mean occupancy to the lowest-occupancy zone that can host it,
/// committing only strict load-balance improvements. Stops at 100% balance
/// or when no movable independent application remains. Dependency counts are
/// untouched because only edge-free applications move.
pub fn rebalance_independent(
    placement: &mut Placement,
    deps: &DependencyGraph,
    cp: &CostParams,
    apps: &[ApplicationSpec],
    zones: &[ZoneSpec],
) -> Vec<MoveRecord> {
    let mut moves = Vec::new();
    loop {
        let badness = balance_badness(placement.occupancy());
        if badness == 0 {
            break; // load balance is exactly 100
        }
        let occupancy = placement.occupancy().to_vec();
        let total: usize = occupancy.iter().sum();

        // Overloaded zones, most loaded first; zone names break ties.
        let mut sources: Vec<ZoneId> = (0..zones.len())
            .filter(|&z| occupancy[z] * zones.len() > total)
            .collect();
        sources.sort_by(|&a, &b| {
            occupancy[b]
                .cmp(&occupancy[a])
                .then_with(|| zones[a].name.cmp(&zones[b].name))
        });

        let mut commit: Option<(AppId, ZoneId)> = None;
        'search: for &source in &sources {
            let mut candidates: Vec<AppId> = (0..apps.len())
                .filter(|&a| placement.zone_of(a) == Some(source) && deps.degree(a) == 0)
                .collect();
            candidates.sort_by(|&a, &b| apps[a].name.cmp(&apps[b].name));

            for app in candidates {
                let mut targets: Vec<ZoneId> =
                    (0..zones.len()).filter(|&z| z != source).collect();
                targets.sort_by(|&a, &b| {
                    occupancy[a]
                        .cmp(&occupancy[b])
                        .then_with(|| zones[a].name.cmp(&zones[b].name))
                });
                let Some(target) = targets.into_iter().find(|&z| {
                    can_host(
                        placement.residual(z),
                        &apps[app],
                        occupancy[z],
                        zones[z].container_count,
                    )
                }) else {
                    continue;
                };
                let mut next_occupancy = occupancy.clone();
                next_occupancy[source] -= 1;
                next_occupancy[target] += 1;
                if balance_badness(&next_occupancy) < badness {
                    commit = Some((app, target));
                    break 'search;
                }
                // The best target does not improve balance, so no target
                // does; the zone's other candidates would fare the same.
                break;
            }
        }

        let Some((app, target)) = commit else { break };
        let reqs = apps[app].requirements();
        let from_zone = placement.zone_of(app).expect("candidate is placed");
        placement.remove(app, &reqs);
        placement.place(app, &reqs, target);
        moves.push(MoveRecord {
            app: apps[app].name.clone(),
            from_zone: zones[from_zone].name.clone(),
            to_zone: zones[target].name.clone(),
            reason: MoveReason::Rebalance,
            cost: move_cost(cp),
        });
    }
    moves
}
