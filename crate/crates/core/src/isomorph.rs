//! Isomorphism of unital designs.
//!
//! Designs are compared through their point-block incidence graphs:
//! the certificate is the canonical form of that graph, so two designs
//! have equal certificates exactly when they are isomorphic, whatever
//! planes they came from.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::autgroup::{canonical_form, design_to_graph, OrbitPartition, Perm, PermGroup};
use crate::design::InducedDesign;

/// Canonical encoding of a design's incidence graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Certificate(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self, hex::FromHexError> {
        hex::decode(s).map(Certificate)
    }

    /// SHA-256 of the certificate, hex encoded. Used as a short key.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.0))
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Certificate({}..)", &self.digest()[..16])
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Certificate::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// Everything one canonical search yields for a design.
#[derive(Debug, Clone)]
pub struct DesignAnalysis {
    pub certificate: Certificate,
    /// `canonical_points[i]` is the design point given canonical label `i`.
    pub canonical_points: Vec<u32>,
    /// Automorphism group acting on the design's points.
    pub group: PermGroup,
    pub orbits: OrbitPartition,
}

pub fn analyze_design(design: &InducedDesign) -> DesignAnalysis {
    let v = design.num_points();
    let graph = design_to_graph(design);
    let (form, group) = canonical_form(&graph);
    // points carry color 0, so the canonical labelling lists them first
    let canonical_points = form.labelling[..v].to_vec();
    let point_gens: Vec<Perm> = group.generators().iter().map(|g| g.restrict(v)).collect();
    let group = PermGroup::new(v, point_gens).expect("restricted generators have degree v");
    let orbits = OrbitPartition::from_generators(v, group.generators());
    DesignAnalysis { certificate: Certificate(form.bytes), canonical_points, group, orbits }
}

pub fn canonical_certificate(design: &InducedDesign) -> Certificate {
    analyze_design(design).certificate
}

/// Automorphism group of the design, as permutations of its points, and
/// its point orbits.
pub fn unital_aut_group(design: &InducedDesign) -> (PermGroup, OrbitPartition) {
    let a = analyze_design(design);
    (a.group, a.orbits)
}

/// A point bijection `a -> b` mapping blocks onto blocks, if one exists.
/// Any returned map has been checked block by block.
pub fn find_isomorphism(a: &InducedDesign, b: &InducedDesign) -> Option<Vec<u32>> {
    if a.params != b.params || a.blocks.len() != b.blocks.len() {
        return None;
    }
    let ca = analyze_design(a);
    let cb = analyze_design(b);
    if ca.certificate != cb.certificate {
        return None;
    }
    let mut map = vec![0u32; a.num_points()];
    for (&pa, &pb) in ca.canonical_points.iter().zip(&cb.canonical_points) {
        map[pa as usize] = pb;
    }
    is_isomorphism(a, b, &map).then_some(map)
}

pub fn are_isomorphic(a: &InducedDesign, b: &InducedDesign) -> bool {
    find_isomorphism(a, b).is_some()
}

/// True when `map` sends the blocks of `a` exactly onto the blocks of `b`.
pub fn is_isomorphism(a: &InducedDesign, b: &InducedDesign, map: &[u32]) -> bool {
    if map.len() != a.num_points() || a.blocks.len() != b.blocks.len() {
        return false;
    }
    let target: BTreeSet<&Vec<u32>> = b.blocks.iter().collect();
    let image: BTreeSet<Vec<u32>> = a
        .blocks
        .iter()
        .map(|blk| {
            let mut m: Vec<u32> = blk.iter().map(|&p| map[p as usize]).collect();
            m.sort_unstable();
            m
        })
        .collect();
    image.len() == target.len() && image.iter().all(|blk| target.contains(blk))
}
