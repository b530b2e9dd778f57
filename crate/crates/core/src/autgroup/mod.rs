//! Automorphism groups of vertex-colored graphs, and of projective planes
//! through their point-line incidence graphs.
//!
//! [`automorphism_group`] runs an individualization-refinement search
//! ([`search`]) for generators and then hands them to a Schreier-Sims
//! chain ([`PermGroup`]) for the exact order.

mod graph;
mod group;
mod partition;
mod perm;
mod search;

pub use graph::{design_to_graph, plane_to_graph, plane_to_graph_marked, ColoredGraph, GraphError};
pub use group::{group_order, point_orbits, GroupError, OrbitPartition, PermGroup};
pub use partition::{is_equitable, refine, OrderedPartition};
pub use perm::Perm;
pub use search::CanonicalForm;


use crate::design::{PointSet, ProjectivePlane};

/// Full color-preserving automorphism group of `g`.
///
/// Every generator is checked against the graph before it is accepted.
pub fn automorphism_group(g: &ColoredGraph) -> PermGroup {
    let outcome = search::search(g, false);
    checked_group(g, outcome.generators)
}

/// Canonical labelling of `g` together with its automorphism group.
pub fn canonical_form(g: &ColoredGraph) -> (CanonicalForm, PermGroup) {
    let outcome = search::search(g, true);
    let form = outcome.canonical.expect("canonical search always reaches a leaf");
    (form, checked_group(g, outcome.generators))
}

fn checked_group(g: &ColoredGraph, gens: Vec<Perm>) -> PermGroup {
    for gen in &gens {
        assert!(g.is_automorphism(gen), "search produced a non-automorphism");
    }
    PermGroup::new(g.num_vertices(), gens).expect("generators share the graph's degree")
}

/// Collineation group of a plane, acting on points `0..v` and lines
/// `v..2v`.
pub fn plane_automorphism_group(plane: &ProjectivePlane) -> PermGroup {
    automorphism_group(&plane_to_graph(plane))
}

/// Collineations of `plane` that map `set` onto itself.
pub fn setwise_stabilizer(plane: &ProjectivePlane, set: &PointSet) -> PermGroup {
    automorphism_group(&plane_to_graph_marked(plane, set))
}
