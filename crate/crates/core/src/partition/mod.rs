//! Recursive partition hierarchy over the reduced lifts.

mod cells;
mod centerpoint;
mod hierarchy;
mod lifted;
mod verify;

pub use cells::{
    build_cell_assignment, exhaustive_split, is_strict, CellAssignment, Cut, Strategy,
};
pub use centerpoint::centerpoint_estimate;
pub use hierarchy::{
    build_hierarchy, depth_bound, HierarchyAudit, HierarchyNode, HierarchyParams, HierarchyTree,
    NodeAudit, Split, MAX_Q,
};
pub use lifted::{lift_point_set, HyperplaneSet, LiftedPointSet};
pub use verify::{
    audit_certificate, balance_bound, verify_balance, verify_uniformity, BalanceMode,
    BalanceReport, NodeCertificate,
};
