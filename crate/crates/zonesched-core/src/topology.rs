//! Three-tier fat-tree model and path pricing.
//!
//! Each zone gets one pod switch per container pair (containers `2k` and
//! `2k+1` attach to pod switch `k`), an aggregation switch per pod switch,
//! and the fabric has one core switch per zone. Only the shortest path
//! between two containers is priced: edges incident to a core switch cost
//! `core_edge_cost`, every other edge costs `intra_edge_cost`.

use alloc::vec::Vec;

use crate::model::{AppId, CostParams, Placement, UnplacedApplication, ZoneSpec};

/// Immutable switch-level description of the fabric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    pod_switches_per_zone: Vec<usize>,
    core_switches: usize,
}

impl Topology {
    pub fn pod_switches(&self, zone: usize) -> usize {
        self.pod_switches_per_zone[zone]
    }

    /// Aggregation tier mirrors the pod tier within each zone.
    pub fn aggregation_switches(&self, zone: usize) -> usize {
        self.pod_switches_per_zone[zone]
    }

    pub fn core_switches(&self) -> usize {
        self.core_switches
    }

    /// Pod switch a container attaches to: pairwise in index order.
    pub fn attachment(&self, container: usize) -> usize {
        container / 2
    }
}

/// Where the shortest path between two placed applications runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathClass {
    /// Both containers hang off one pod switch: container-switch-container.
    SameSwitch,
    /// Same zone, different pod switches: up to aggregation and back.
    SameZoneCrossSwitch,
    /// Different zones: through the core tier.
    CrossZone,
}

/// Edge counts along the shortest path, split by pricing tier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathProfile {
    pub class: PathClass,
    pub intra_edges: u64,
    pub core_edges: u64,
}

impl PathProfile {
    pub fn of(class: PathClass) -> Self {
        let (intra_edges, core_edges) = match class {
            PathClass::SameSwitch => (2, 0),
            PathClass::SameZoneCrossSwitch => (4, 0),
            PathClass::CrossZone => (4, 2),
        };
        PathProfile {
            class,
            intra_edges,
            core_edges,
        }
    }
}

/// Builds the fabric for the given (validated) zones. Deterministic.
pub fn build_topology(zones: &[ZoneSpec]) -> Topology {
    Topology {
        pod_switches_per_zone: zones.iter().map(|z| z.container_count / 2).collect(),
        core_switches: zones.len(),
    }
}

/// Classifies the shortest path between two placed applications.
pub fn classify_path(
    a: AppId,
    b: AppId,
    placement: &Placement,
    topology: &Topology,
) -> Result<PathProfile, UnplacedApplication> {
    debug_assert_ne!(a, b, "path endpoints must differ");
    let (zone_a, container_a) = placement.slot_of(a).ok_or(UnplacedApplication(a))?;
    let (zone_b, container_b) = placement.slot_of(b).ok_or(UnplacedApplication(b))?;
    let class = if zone_a != zone_b {
        PathClass::CrossZone
    } else if topology.attachment(container_a) == topology.attachment(container_b) {
        PathClass::SameSwitch
    } else {
        PathClass::SameZoneCrossSwitch
    };
    Ok(PathProfile::of(class))
}

/// Prices a path profile: `intra_edges * intra_edge_cost + core_edges * core_edge_cost`.
pub fn path_cost(profile: &PathProfile, cp: &CostParams) -> u64 {
    profile.intra_edges * cp.intra_edge_cost + profile.core_edges * cp.core_edge_cost
}
