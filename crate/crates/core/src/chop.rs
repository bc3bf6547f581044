//! Corner chopping: the effect of an equivariant blowup on a Delzant polygon.
//!
//! Chopping vertex `v` by `ε` replaces it with the two points at lattice
//! distance `ε` along its incident edges. This is allowed only when both
//! incident edges are strictly longer than `ε`.

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{self, int, PlanePoint, Rational};
use crate::polygon::{DelzantPolygon, Edge, ProfileEntry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChopError {
    #[error("chop size must be positive, got {0}")]
    NonPositiveSize(Rational),
    #[error("vertex index {index} out of range for a polygon with {len} vertices")]
    VertexOutOfRange { index: usize, len: usize },
    #[error("cannot chop vertex {vertex} by {size}: edge {edge} has size {edge_size}")]
    Infeasible { vertex: usize, edge: usize, size: Box<Rational>, edge_size: Box<Rational> },
    #[error("no vertex at {0}")]
    UnknownVertex(Box<PlanePoint>),
    #[error("chop bookkeeping mismatch: {0}")]
    Inconsistent(String),
}

/// One corner chop: where (pre-chop coordinates and index) and how much.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChopRecord {
    pub vertex_index: usize,
    pub vertex: PlanePoint,
    pub size: Rational,
}

/// Wire form `{ "vertex": ["x", "y"], "size": "p/q" }`; coordinates rather
/// than indices, so a record stays meaningful after re-indexing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChopRecordJson {
    pub vertex: [String; 2],
    pub size: String,
}

impl From<&ChopRecord> for ChopRecordJson {
    fn from(r: &ChopRecord) -> Self {
        Self {
            vertex: [lattice::format_rational(&r.vertex.x), lattice::format_rational(&r.vertex.y)],
            size: lattice::format_rational(&r.size),
        }
    }
}

pub fn feasible_vertices(p: &DelzantPolygon, size: &Rational) -> Vec<usize> {
    let edges = p.edges();
    let n = edges.len();
    (0..n).filter(|&i| edges[(i + n - 1) % n].size > *size && edges[i].size > *size).collect()
}

pub fn chop_corner(p: &DelzantPolygon, vertex: usize, size: &Rational) -> Result<DelzantPolygon, ChopError> {
    let n = p.len();
    if !size.is_positive() {
        return Err(ChopError::NonPositiveSize(size.clone()));
    }
    if vertex >= n {
        return Err(ChopError::VertexOutOfRange { index: vertex, len: n });
    }
    let prev = (vertex + n - 1) % n;
    let (incoming, outgoing) = (&p.edges()[prev], &p.edges()[vertex]);
    for (edge, e) in [(prev, incoming), (vertex, outgoing)] {
        if e.size <= *size {
            return Err(ChopError::Infeasible {
                vertex,
                edge,
                size: Box::new(size.clone()),
                edge_size: Box::new(e.size.clone()),
            });
        }
    }

    let v = &p.vertices()[vertex];
    let before = v.offset(-incoming.direction, size);
    let after = v.offset(outgoing.direction, size);
    let direction = incoming.direction + outgoing.direction;
    let cut = Edge { size: size.clone(), direction, normal: direction.rotate_ccw() };
    debug_assert_eq!(cut.normal, incoming.normal + outgoing.normal);

    let mut vertices = Vec::with_capacity(n + 1);
    let mut edges = Vec::with_capacity(n + 1);
    for i in 0..n {
        if i == vertex {
            vertices.push(before.clone());
            vertices.push(after.clone());
            edges.push(cut.clone());
            edges.push(Edge { size: &outgoing.size - size, ..outgoing.clone() });
        } else if i == prev {
            vertices.push(p.vertices()[i].clone());
            edges.push(Edge { size: &incoming.size - size, ..incoming.clone() });
        } else {
            vertices.push(p.vertices()[i].clone());
            edges.push(p.edges()[i].clone());
        }
    }
    Ok(DelzantPolygon::from_parts_unchecked(vertices, edges))
}

/// Chops the vertex located at `record.vertex`, ignoring the stored index.
pub fn replay_chop(p: &DelzantPolygon, record: &ChopRecord) -> Result<DelzantPolygon, ChopError> {
    let index = p
        .vertices()
        .iter()
        .position(|v| *v == record.vertex)
        .ok_or_else(|| ChopError::UnknownVertex(Box::new(record.vertex.clone())))?;
    chop_corner(p, index, &record.size)
}

/// What a chop did to the polygon, checked against the expected bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChopDiagnostics {
    pub edges_before: usize,
    pub edges_after: usize,
    pub area_before: Rational,
    pub area_after: Rational,
    pub new_edge_k: i64,
}

/// Verifies that `after` is `before` with vertex `vertex` chopped by `size`:
/// one more edge, area down by `size²/2`, a new `(-1, size)` edge, its two
/// neighbours with `k` lowered by one and shortened by `size`, and every other
/// entry unchanged.
pub fn chop_result_properties(
    before: &DelzantPolygon,
    after: &DelzantPolygon,
    vertex: usize,
    size: &Rational,
) -> Result<ChopDiagnostics, ChopError> {
    let fail = |msg: String| Err(ChopError::Inconsistent(msg));
    let n = before.len();
    if after.len() != n + 1 {
        return fail(format!("edge count {} -> {}, expected {}", n, after.len(), n + 1));
    }
    let (area_before, area_after) = (before.area(), after.area());
    if &area_before - &area_after != size * size / int(2) {
        return fail(format!("area {area_before} -> {area_after} for chop size {size}"));
    }
    let old = before.edge_profile().0;
    let new = after.edge_profile().0;
    // Edge `vertex` of `after` is the cut; edges before it keep their index,
    // edges from the old `vertex` onward shift by one.
    let m = n + 1;
    let prev_new = (vertex + m - 1) % m;
    let next_new = vertex + 1;
    let mut expected: Vec<ProfileEntry> = Vec::with_capacity(m);
    for j in 0..m {
        let e = if j == vertex {
            ProfileEntry::new(-1, size.clone())
        } else {
            let src = if j < vertex { j } else { j - 1 };
            let mut e = old[src].clone();
            if j == prev_new || j == next_new {
                e.k -= 1;
                e.size = &e.size - size;
            }
            e
        };
        expected.push(e);
    }
    if new != expected {
        return fail(format!("profile mismatch at chop of vertex {vertex}"));
    }
    Ok(ChopDiagnostics { edges_before: n, edges_after: m, area_before, area_after, new_edge_k: new[vertex].k })
}
