//! Capacity-aware round-robin deployment.
//!
//! Zones are sorted by ascending total capacity, applications are taken from
//! a queue in input order, and a cursor cycles over the zones: each
//! application lands in the first zone at or after the cursor that can host
//! it, in that zone's lowest-index free container, and the cursor advances
//! past the chosen zone.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{AppId, ApplicationSpec, Placement, Resources, ZoneId, ZoneSpec};

/// One deployment decision, in queue order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentRecord {
    pub app: AppId,
    pub zone: ZoneId,
    pub container: usize,
}

/// No zone can host the application. Previously assigned applications keep
/// their placement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unschedulable {
    pub app: String,
}

impl fmt::Display for Unschedulable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no zone can host application `{}`", self.app)
    }
}

/// Orders zones by ascending total capacity (cpu + ram + disk), ties by name.
pub fn sort_zones_ascending(zones: &[ZoneSpec]) -> Vec<ZoneSpec> {
    let mut sorted = zones.to_vec();
    sorted.sort_by(|a, b| {
        a.capacity()
            .total()
            .cmp(&b.capacity().total())
            .then_with(|| a.name.cmp(&b.name))
    });
    sorted
}

/// True iff the zone's residual covers the requirements and a container is
/// still free. Boundary equality is admitted.
pub fn can_host(
    residual: &Resources,
    app: &ApplicationSpec,
    occupancy: usize,
    container_count: usize,
) -> bool {
    occupancy < container_count && residual.covers(&app.requirements())
}

/// Deploys `queue` (application ids, in order) over the sorted zones. On
/// failure the placement retains everything assigned so far.
pub fn deploy_round_robin(
    queue: &[AppId],
    apps: &[ApplicationSpec],
    zones: &[ZoneSpec],
    placement: &mut Placement,
) -> Result<Vec<AssignmentRecord>, Unschedulable> {
    let mut log = Vec::with_capacity(queue.len());
    let mut cursor = 0usize;
    for &app in queue {
        debug_assert!(placement.zone_of(app).is_none(), "application already placed");
        let spec = &apps[app];
        let chosen = (0..zones.len()).map(|k| (cursor + k) % zones.len()).find(|&z| {
            can_host(
                placement.residual(z),
                spec,
                placement.occupancy()[z],
                zones[z].container_count,
            )
        });
        let Some(zone) = chosen else {
            return Err(Unschedulable {
                app: spec.name.clone(),
            });
        };
        let container = placement.place(app, &spec.requirements(), zone);
        log.push(AssignmentRecord {
            app,
            zone,
            container,
        });
        cursor = (zone + 1) % zones.len();
    }
    Ok(log)
}
