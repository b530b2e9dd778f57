//! Constructive ground truth: the desarguesian planes PG(2, q) and the
//! Hermitian unitals inside PG(2, q²).

mod field;

pub use field::{prime_power, FieldError, FiniteField, SUPPORTED_ORDERS};

use crate::design::{DesignError, PointSet, ProjectivePlane};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("hermitian unitals are generated for q in 2..=5, got {0}")]
    HermitianScope(usize),
}

/// Homogeneous coordinates normalised so the first nonzero entry is 1.
pub type ProjectivePoint = [u32; 3];

/// All normalised points of PG(2, F), in lexicographic order of their
/// encoded coordinates.
pub fn projective_points(field: &FiniteField) -> Vec<ProjectivePoint> {
    let q = field.order();
    let mut pts = Vec::with_capacity((q * q + q + 1) as usize);
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                let first = [x, y, z].into_iter().find(|&c| c != 0);
                if first == Some(1) {
                    pts.push([x, y, z]);
                }
            }
        }
    }
    pts
}

/// Index of the normalised form of `coords` in [`projective_points`] order.
pub fn point_index(field: &FiniteField, coords: [u32; 3]) -> Option<usize> {
    let lead = coords.into_iter().find(|&c| c != 0)?;
    let s = field.inv(lead)?;
    let [x, y, z] = coords.map(|c| field.mul(c, s));
    let q = field.order() as usize;
    let (x, y, z) = (x as usize, y as usize, z as usize);
    // points with x = 1 come after those with x = 0; within x = 0, y = 1
    // comes after the single point (0, 0, 1).
    Some(if x == 0 && y == 0 {
        0
    } else if x == 0 {
        1 + z
    } else {
        1 + q + y * q + z
    })
}

/// PG(2, q): points and lines are normalised vectors of GF(q)³, a point
/// lies on a line when their dot product vanishes.
pub fn desarguesian_plane(q: u32) -> Result<ProjectivePlane, GeometryError> {
    let field = FiniteField::with_order(q)?;
    let points = projective_points(&field);
    let lines: Vec<Vec<usize>> = points
        .iter()
        .map(|dual| {
            points
                .iter()
                .enumerate()
                .filter(|(_, pt)| {
                    let t = field.add(
                        field.add(field.mul(dual[0], pt[0]), field.mul(dual[1], pt[1])),
                        field.mul(dual[2], pt[2]),
                    );
                    t == 0
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(ProjectivePlane::new(q as usize, lines)?)
}

/// The Hermitian curve `x^(q+1) + y^(q+1) + z^(q+1) = 0` in PG(2, q²), as
/// point labels of [`desarguesian_plane`]`(q²)`.
pub fn hermitian_unital(q: usize) -> Result<PointSet, GeometryError> {
    if !(2..=5).contains(&q) {
        return Err(GeometryError::HermitianScope(q));
    }
    let field = FiniteField::with_order((q * q) as u32)?;
    let e = q as u64 + 1;
    let points = projective_points(&field);
    let members = points.iter().enumerate().filter_map(|(i, pt)| {
        let norm = pt.iter().fold(0, |acc, &c| field.add(acc, field.pow(c, e)));
        (norm == 0).then_some(i)
    });
    Ok(PointSet::new(members, points.len())?)
}
