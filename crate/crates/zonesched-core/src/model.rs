//! Domain types shared by every stage: applications, zones, the dependency
//! graph, the mutable placement, cost parameters, and scenario validation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Index of an application in a scenario's application list.
pub type AppId = usize;
/// Index of a zone in the pipeline's (sorted) zone list.
pub type ZoneId = usize;

/// Resource bundle: CPU cores, RAM GiB, disk GiB. Whole units keep capacity
/// arithmetic exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Resources {
    pub cpu: u64,
    pub ram: u64,
    pub disk: u64,
}

impl Resources {
    pub fn new(cpu: u64, ram: u64, disk: u64) -> Self {
        Resources { cpu, ram, disk }
    }

    /// Componentwise `self >= other`.
    pub fn covers(&self, other: &Resources) -> bool {
        self.cpu >= other.cpu && self.ram >= other.ram && self.disk >= other.disk
    }

    pub fn checked_sub(&self, other: &Resources) -> Option<Resources> {
        Some(Resources {
            cpu: self.cpu.checked_sub(other.cpu)?,
            ram: self.ram.checked_sub(other.ram)?,
            disk: self.disk.checked_sub(other.disk)?,
        })
    }

    pub fn add(&self, other: &Resources) -> Resources {
        Resources {
            cpu: self.cpu + other.cpu,
            ram: self.ram + other.ram,
            disk: self.disk + other.disk,
        }
    }

    /// Scalar total used when ordering zones by capacity.
    pub fn total(&self) -> u64 {
        self.cpu + self.ram + self.disk
    }
}

/// An application to deploy: a name, its minimum resource requirements and
/// the arrival batch it belongs to (0 = initial wave).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApplicationSpec {
    pub name: String,
    pub cpu_req: u64,
    pub ram_req: u64,
    pub disk_req: u64,
    pub arrival_batch: u32,
}

impl ApplicationSpec {
    pub fn requirements(&self) -> Resources {
        Resources::new(self.cpu_req, self.ram_req, self.disk_req)
    }
}

/// A zone (pod): aggregate capacity plus a fixed number of containers, each
/// of which holds at most one application. The container count must be even
/// because pod switches connect containers pairwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZoneSpec {
    pub name: String,
    pub cpu_cap: u64,
    pub ram_cap: u64,
    pub disk_cap: u64,
    pub container_count: usize,
}

impl ZoneSpec {
    pub fn capacity(&self) -> Resources {
        Resources::new(self.cpu_cap, self.ram_cap, self.disk_cap)
    }
}

/// Undirected application dependency graph. Edges are stored with the lower
/// endpoint first; adjacency lists are kept sorted so iteration order is
/// deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DependencyGraph {
    edges: Vec<(AppId, AppId)>,
    adjacency: Vec<Vec<AppId>>,
}

impl DependencyGraph {
    /// Builds the graph over `app_count` vertices. Self-loops and duplicate
    /// edges are rejected by [`validate_scenario`]; this constructor assumes
    /// clean input and normalizes edge orientation.
    pub fn new(app_count: usize, mut edges: Vec<(AppId, AppId)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        let mut adjacency = vec![Vec::new(); app_count];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in adjacency.iter_mut() {
            list.sort_unstable();
        }
        DependencyGraph { edges, adjacency }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(AppId, AppId)] {
        &self.edges
    }

    pub fn neighbors(&self, app: AppId) -> &[AppId] {
        &self.adjacency[app]
    }

    pub fn degree(&self, app: AppId) -> usize {
        self.adjacency[app].len()
    }

    /// Restricts the graph to the edges satisfying `keep`, over the same
    /// vertex set. Used to select the sub-graph active in an arrival batch.
    pub fn filtered_edges(&self, keep: impl Fn(AppId, AppId) -> bool) -> DependencyGraph {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| keep(a, b))
            .collect();
        DependencyGraph::new(self.adjacency.len(), edges)
    }
}

/// Network cost parameters. Paper defaults: 10 units per non-core edge, 100
/// per core-tier edge, a 10x multiplier for application moves, 10 repeated
/// request/response rounds, and 1000 cost units of bandwidth per edge in the
/// proportion denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostParams {
    pub intra_edge_cost: u64,
    pub core_edge_cost: u64,
    pub move_multiplier: u64,
    pub repetitions: u32,
    pub bandwidth_unit: u64,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            intra_edge_cost: 10,
            core_edge_cost: 100,
            move_multiplier: 10,
            repetitions: 10,
            bandwidth_unit: 1000,
        }
    }
}

/// A complete experiment input: applications across all arrival batches, the
/// zones, the full dependency graph, cost parameters, the cut schedule and an
/// optional seed (used only when dependencies are synthesized).
///
/// An edge activates in the batch it was declared with (`edge_batches`,
/// keyed by normalized edge). Edges without an entry activate as soon as
/// both endpoints have arrived.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub apps: Vec<ApplicationSpec>,
    pub zones: Vec<ZoneSpec>,
    pub deps: DependencyGraph,
    pub edge_batches: BTreeMap<(AppId, AppId), u32>,
    pub cost_params: CostParams,
    pub cut_schedule: crate::optimizer::CutSchedule,
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn batch_count(&self) -> u32 {
        self.apps
            .iter()
            .map(|a| a.arrival_batch)
            .max()
            .map_or(0, |b| b + 1)
    }

    /// Batch in which an edge becomes active.
    pub fn edge_batch(&self, a: AppId, b: AppId) -> u32 {
        let key = (a.min(b), a.max(b));
        match self.edge_batches.get(&key) {
            Some(&batch) => batch,
            None => self.apps[a].arrival_batch.max(self.apps[b].arrival_batch),
        }
    }

    /// The dependency sub-graph active during `batch`: edges declared by
    /// then, between applications that have arrived by then.
    pub fn active_deps(&self, batch: u32) -> DependencyGraph {
        self.deps.filtered_edges(|a, b| {
            self.edge_batch(a, b) <= batch
                && self.apps[a].arrival_batch <= batch
                && self.apps[b].arrival_batch <= batch
        })
    }
}

/// A single validation defect. `validate_scenario` aggregates all of them
/// rather than stopping at the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationError {
    DuplicateName { entity: String },
    UnknownDependencyEndpoint { endpoint: String },
    NegativeRequirement { app: String, resource: &'static str },
    ZeroRequirements { app: String },
    OddContainerCount { zone: String, count: usize },
    SelfLoopDependency { app: String },
    DuplicateDependency { a: String, b: String },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::DuplicateName { entity } => {
                write!(f, "duplicate name `{entity}`")
            }
            ValidationError::UnknownDependencyEndpoint { endpoint } => {
                write!(f, "dependency endpoint `{endpoint}` names no application")
            }
            ValidationError::NegativeRequirement { app, resource } => {
                write!(f, "application `{app}` has a negative {resource} requirement")
            }
            ValidationError::ZeroRequirements { app } => {
                write!(f, "application `{app}` requests no resources at all")
            }
            ValidationError::OddContainerCount { zone, count } => {
                write!(
                    f,
                    "zone `{zone}` has container count {count}; it must be even and at least 2"
                )
            }
            ValidationError::SelfLoopDependency { app } => {
                write!(f, "application `{app}` depends on itself")
            }
            ValidationError::DuplicateDependency { a, b } => {
                write!(f, "dependency `{a}`-`{b}` is listed twice")
            }
        }
    }
}

/// Raw scenario input before name resolution: dependency edges are still
/// name pairs. Requirements are signed so that out-of-range values reach
/// validation instead of failing at the parsing layer.
#[derive(Clone, Debug, Default)]
pub struct RawScenario {
    pub apps: Vec<RawApplication>,
    pub zones: Vec<ZoneSpec>,
    pub deps: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct RawApplication {
    pub name: String,
    pub cpu_req: i64,
    pub ram_req: i64,
    pub disk_req: i64,
    pub arrival_batch: u32,
}

/// Checks every type invariant and resolves dependency endpoints to indices.
/// Returns the validated applications, zones and graph, or the full list of
/// violations. Validation is idempotent: feeding the output back in yields
/// the identical scenario.
pub fn validate_scenario(
    raw: &RawScenario,
) -> Result<(Vec<ApplicationSpec>, Vec<ZoneSpec>, DependencyGraph), Vec<ValidationError>> {
    let mut errors = Vec::new();

    let mut seen = BTreeSet::new();
    for app in &raw.apps {
        if !seen.insert(app.name.as_str()) {
            errors.push(ValidationError::DuplicateName {
                entity: app.name.clone(),
            });
        }
        for (value, resource) in [
            (app.cpu_req, "cpu"),
            (app.ram_req, "ram"),
            (app.disk_req, "disk"),
        ] {
            if value < 0 {
                errors.push(ValidationError::NegativeRequirement {
                    app: app.name.clone(),
                    resource,
                });
            }
        }
        if app.cpu_req <= 0 && app.ram_req <= 0 && app.disk_req <= 0 {
            errors.push(ValidationError::ZeroRequirements {
                app: app.name.clone(),
            });
        }
    }

    let mut zone_seen = BTreeSet::new();
    for zone in &raw.zones {
        if !zone_seen.insert(zone.name.as_str()) {
            errors.push(ValidationError::DuplicateName {
                entity: zone.name.clone(),
            });
        }
        if zone.container_count < 2 || zone.container_count % 2 != 0 {
            errors.push(ValidationError::OddContainerCount {
                zone: zone.name.clone(),
                count: zone.container_count,
            });
        }
    }

    let index_of = |name: &str| raw.apps.iter().position(|a| a.name == name);
    let mut edges = Vec::with_capacity(raw.deps.len());
    let mut edge_seen = BTreeSet::new();
    for (a, b) in &raw.deps {
        let (ia, ib) = (index_of(a), index_of(b));
        if ia.is_none() {
            errors.push(ValidationError::UnknownDependencyEndpoint {
                endpoint: a.clone(),
            });
        }
        if ib.is_none() {
            errors.push(ValidationError::UnknownDependencyEndpoint {
                endpoint: b.clone(),
            });
        }
        let (Some(ia), Some(ib)) = (ia, ib) else {
            continue;
        };
        if ia == ib {
            errors.push(ValidationError::SelfLoopDependency { app: a.clone() });
            continue;
        }
        let key = (ia.min(ib), ia.max(ib));
        if !edge_seen.insert(key) {
            errors.push(ValidationError::DuplicateDependency {
                a: a.clone(),
                b: b.clone(),
            });
            continue;
        }
        edges.push(key);
    }

    if !errors.is_empty() {
        return Err(errors);
    }

    let apps = raw
        .apps
        .iter()
        .map(|a| ApplicationSpec {
            name: a.name.clone(),
            cpu_req: a.cpu_req as u64,
            ram_req: a.ram_req as u64,
            disk_req: a.disk_req as u64,
            arrival_batch: a.arrival_batch,
        })
        .collect();
    let graph = DependencyGraph::new(raw.apps.len(), edges);
    Ok((apps, raw.zones.clone(), graph))
}

/// The mutable application-to-container mapping, together with per-zone
/// residual capacity and occupancy counters. Zones are addressed by their
/// index in the pipeline's sorted zone order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    slots: Vec<Vec<Option<AppId>>>,
    assigned: Vec<Option<(ZoneId, usize)>>,
    residual: Vec<Resources>,
    occupancy: Vec<usize>,
}

/// Raised when an operation needs a placed application that is not placed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnplacedApplication(pub AppId);

impl Placement {
    pub fn new(app_count: usize, zones: &[ZoneSpec]) -> Self {
        Placement {
            slots: zones.iter().map(|z| vec![None; z.container_count]).collect(),
            assigned: vec![None; app_count],
            residual: zones.iter().map(|z| z.capacity()).collect(),
            occupancy: vec![0; zones.len()],
        }
    }

    pub fn zone_count(&self) -> usize {
        self.slots.len()
    }

    pub fn zone_of(&self, app: AppId) -> Option<ZoneId> {
        self.assigned[app].map(|(z, _)| z)
    }

    pub fn slot_of(&self, app: AppId) -> Option<(ZoneId, usize)> {
        self.assigned[app]
    }

    pub fn occupancy(&self) -> &[usize] {
        &self.occupancy
    }

    pub fn residual(&self, zone: ZoneId) -> &Resources {
        &self.residual[zone]
    }

    pub fn lowest_free_container(&self, zone: ZoneId) -> Option<usize> {
        self.slots[zone].iter().position(Option::is_none)
    }

    /// Places an unplaced application into the zone's lowest-index free
    /// container. The caller checks capacity via [`crate::scheduler::can_host`]
    /// first; this panics if the zone cannot take the application.
    pub fn place(&mut self, app: AppId, reqs: &Resources, zone: ZoneId) -> usize {
        let container = self
            .lowest_free_container(zone)
            .expect("no free container in target zone");
        self.place_at(app, reqs, zone, container);
        container
    }

    /// Places into a specific container; used to restore a rejected move
    /// bit-exactly.
    pub fn place_at(&mut self, app: AppId, reqs: &Resources, zone: ZoneId, container: usize) {
        assert!(self.assigned[app].is_none(), "application already placed");
        assert!(self.slots[zone][container].is_none(), "container occupied");
        self.slots[zone][container] = Some(app);
        self.assigned[app] = Some((zone, container));
        self.residual[zone] = self.residual[zone]
            .checked_sub(reqs)
            .expect("zone residual capacity exceeded");
        self.occupancy[zone] += 1;
    }

    /// Removes a placed application, returning the slot it held.
    pub fn remove(&mut self, app: AppId, reqs: &Resources) -> (ZoneId, usize) {
        let (zone, container) = self.assigned[app].expect("application not placed");
        self.slots[zone][container] = None;
        self.assigned[app] = None;
        self.residual[zone] = self.residual[zone].add(reqs);
        self.occupancy[zone] -= 1;
        (zone, container)
    }

    /// Verifies every placement invariant against the authoritative specs.
    /// Test and property-check helper; not used on the hot path.
    pub fn check_invariants(&self, apps: &[ApplicationSpec], zones: &[ZoneSpec]) -> bool {
        if self.slots.len() != zones.len() {
            return false;
        }
        let mut seen = BTreeSet::new();
        for (zone, slots) in self.slots.iter().enumerate() {
            if slots.len() != zones[zone].container_count {
                return false;
            }
            let mut used = Resources::default();
            let mut count = 0;
            for (container, slot) in slots.iter().enumerate() {
                if let Some(app) = *slot {
                    if !seen.insert(app) || self.assigned[app] != Some((zone, container)) {
                        return false;
                    }
                    used = used.add(&apps[app].requirements());
                    count += 1;
                }
            }
            if count != self.occupancy[zone] || count > zones[zone].container_count {
                return false;
            }
            match zones[zone].capacity().checked_sub(&used) {
                Some(residual) if residual == self.residual[zone] => {}
                _ => return false,
            }
        }
        self.assigned
            .iter()
            .enumerate()
            .all(|(app, slot)| slot.is_none() || seen.contains(&app))
    }
}
