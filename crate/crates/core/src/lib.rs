//! Finding, verifying and classifying unitals in finite projective planes.
//!
//! The pipeline runs plane automorphism group, point orbits, the
//! orbit-union search for candidate point sets, independent unital
//! verification, and isomorphism classification of the induced designs.

pub mod autgroup;
pub mod design;
pub mod geometry;
pub mod isomorph;
pub mod orbit_search;
pub mod report;

pub use autgroup::{ColoredGraph, OrbitPartition, PermGroup, Perm};
pub use design::{
    induced_design, intersection_profile, is_unital, validate_plane, DesignError, DesignParams, InducedDesign,
    PointSet, ProjectivePlane, Unital, ValidationReport, Violation,
};
pub use geometry::{desarguesian_plane, hermitian_unital, FiniteField};
pub use isomorph::{analyze_design, are_isomorphic, canonical_certificate, find_isomorphism, unital_aut_group, Certificate};
pub use orbit_search::{
    exhaustive_search, orbit_union_search, run_campaign, subgroup_orbit_families, CampaignReport, OrbitFamily,
    SearchConfig, SearchError,
};
pub use report::{emit_report, parse_plane, store_results, ReportError, ReportFormat, UnitalRecord};
