//! Delzant polygons and their edge profiles.
//!
//! A [`DelzantPolygon`] is stored counterclockwise. Edge `j` runs from vertex
//! `j` to vertex `j + 1`; it carries its lattice size, primitive direction and
//! primitive inward normal (the direction rotated by +90 degrees).

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    self, int, primitive_decompose, AffineUnimodularMap, LatticeError, LatticeVector, PlanePoint, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {index} repeats the previous vertex (zero-length edge)")]
    RepeatedVertex { index: usize },
    #[error("vertex {index} is collinear with its neighbours")]
    Collinear { index: usize },
    #[error("polygon is not convex at vertex {index}")]
    NotConvex { index: usize },
    #[error("edge directions at vertex {index} have determinant {det}, not a lattice basis")]
    NotUnimodular { index: usize, det: i64 },
    #[error("boundary winds around more than once")]
    SelfOverlapping,
    #[error("invalid edge profile: {0}")]
    InvalidProfile(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub size: Rational,
    pub direction: LatticeVector,
    pub normal: LatticeVector,
}

/// One entry `(k_j, a_j)` of an edge profile: the self-intersection number of
/// the edge and its lattice size. Ordered by `k` first, then by size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProfileEntry {
    pub k: i64,
    pub size: Rational,
}

impl ProfileEntry {
    pub fn new(k: i64, size: Rational) -> Self {
        Self { k, size }
    }
}

impl Serialize for ProfileEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.k, lattice::format_rational(&self.size)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProfileEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (k, size) = <(i64, String)>::deserialize(d)?;
        let size = lattice::parse_rational(&size).map_err(serde::de::Error::custom)?;
        Ok(Self { k, size })
    }
}

/// Cyclic sequence of `(k_j, a_j)` pairs, one per edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeProfile(pub Vec<ProfileEntry>);

impl EdgeProfile {
    pub fn new(entries: Vec<ProfileEntry>) -> Self {
        Self(entries)
    }

    pub fn from_pairs(pairs: &[(i64, Rational)]) -> Self {
        Self(pairs.iter().map(|(k, a)| ProfileEntry::new(*k, a.clone())).collect())
    }

    pub fn entries(&self) -> &[ProfileEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn k_sum(&self) -> i64 {
        self.0.iter().map(|e| e.k).sum()
    }
}

impl fmt::Display for EdgeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", e.k, e.size)?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DelzantPolygon {
    vertices: Vec<PlanePoint>,
    edges: Vec<Edge>,
}

impl DelzantPolygon {
    /// Validates `points` as a Delzant polygon. Clockwise input is reversed
    /// (keeping the first vertex first); reported vertex indices refer to the
    /// input order.
    pub fn from_vertices(mut points: Vec<PlanePoint>) -> Result<Self, PolygonError> {
        let n = points.len();
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        for i in 0..n {
            if points[i] == points[(i + 1) % n] {
                return Err(PolygonError::RepeatedVertex { index: (i + 1) % n });
            }
        }
        let twice_area: Rational = (0..n).map(|i| points[i].cross(&points[(i + 1) % n])).sum();
        let reversed = twice_area.is_negative();
        if reversed {
            points[1..].reverse();
        }
        let original = |i: usize| if reversed { (n - i) % n } else { i };

        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let d = &points[(i + 1) % n] - &points[i];
            let (size, direction) = primitive_decompose(&d.x, &d.y)?;
            edges.push(Edge { size, direction, normal: direction.rotate_ccw() });
        }
        for i in 0..n {
            let det = edges[(i + n - 1) % n].direction.det(edges[i].direction);
            let index = original(i);
            match det {
                0 => return Err(PolygonError::Collinear { index }),
                d if d < 0 => return Err(PolygonError::NotConvex { index }),
                1 => {}
                det => return Err(PolygonError::NotUnimodular { index, det }),
            }
        }
        // All turns are left turns; the directions must sweep the circle once.
        let descents = (0..n).filter(|&i| edges[(i + 1) % n].direction.angle_cmp(edges[i].direction).is_lt()).count();
        if descents != 1 {
            return Err(PolygonError::SelfOverlapping);
        }
        Ok(Self { vertices: points, edges })
    }

    /// Builds a polygon from already-computed parts. Used by corner chopping,
    /// which preserves validity by construction.
    pub(crate) fn from_parts_unchecked(vertices: Vec<PlanePoint>, edges: Vec<Edge>) -> Self {
        let p = Self { vertices, edges };
        debug_assert!(p.check_invariants().is_ok(), "{:?}", p.check_invariants());
        p
    }

    /// Re-runs the full validation on this polygon's vertices and compares.
    pub fn check_invariants(&self) -> Result<(), PolygonError> {
        let rebuilt = Self::from_vertices(self.vertices.clone())?;
        if rebuilt != *self {
            return Err(PolygonError::InvalidProfile("stored edges disagree with vertices".into()));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[PlanePoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The `(k_j, a_j)` sequence, where `u_{j-1} + u_{j+1} = -k_j u_j` for the
    /// inward normals `u`.
    pub fn edge_profile(&self) -> EdgeProfile {
        let n = self.edges.len();
        let entries = (0..n)
            .map(|j| {
                let prev = self.edges[(j + n - 1) % n].normal;
                let cur = self.edges[j].normal;
                let next = self.edges[(j + 1) % n].normal;
                let sum = prev + next;
                // (cur, next) is a positively oriented basis with det 1.
                debug_assert_eq!(sum.det(cur), 0);
                ProfileEntry::new(-sum.det(next), self.edges[j].size.clone())
            })
            .collect();
        EdgeProfile(entries)
    }

    /// Exact area (shoelace formula).
    pub fn area(&self) -> Rational {
        let n = self.vertices.len();
        let twice: Rational = (0..n).map(|i| self.vertices[i].cross(&self.vertices[(i + 1) % n])).sum();
        twice / int(2)
    }

    pub fn transform(&self, map: &AffineUnimodularMap) -> Result<Self, PolygonError> {
        Self::from_vertices(self.vertices.iter().map(|p| map.apply(p)).collect())
    }

    /// Rebuilds a polygon from a profile: `u_1 = (0, 1)`, `u_2 = (-1, 0)`,
    /// `u_{j+1} = -k_j u_j - u_{j-1}`, edges walked from the origin.
    pub fn from_profile(profile: &EdgeProfile) -> Result<Self, PolygonError> {
        let entries = profile.entries();
        let n = entries.len();
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        if let Some(j) = entries.iter().position(|e| !e.size.is_positive()) {
            return Err(PolygonError::InvalidProfile(format!("edge {j} has non-positive size")));
        }
        let mut normals = vec![LatticeVector::new(0, 1), LatticeVector::new(-1, 0)];
        for j in 1..=n {
            let u = normals[j].scale(-entries[j % n].k) - normals[j - 1];
            normals.push(u);
        }
        if normals[n] != normals[0] || normals[n + 1] != normals[1] {
            return Err(PolygonError::InvalidProfile("normal recursion does not close up".into()));
        }
        let mut vertices = Vec::with_capacity(n);
        let mut at = PlanePoint::origin();
        for (entry, u) in entries.iter().zip(&normals) {
            vertices.push(at.clone());
            at = at.offset(u.rotate_cw(), &entry.size);
        }
        if !at.x.is_zero() || !at.y.is_zero() {
            return Err(PolygonError::InvalidProfile("edges do not close up".into()));
        }
        let polygon = Self::from_vertices(vertices)?;
        if polygon.edge_profile() != *profile {
            return Err(PolygonError::InvalidProfile("profile is not realised by a convex polygon".into()));
        }
        Ok(polygon)
    }
}

impl fmt::Display for DelzantPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Vertices as `[["x", "y"], ...]` with exact rational strings.
pub fn vertices_to_strings(p: &DelzantPolygon) -> Vec<[String; 2]> {
    p.vertices().iter().map(|v| [lattice::format_rational(&v.x), lattice::format_rational(&v.y)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{random_unimodular_map, rat};

    fn pts(v: &[(Rational, Rational)]) -> Vec<PlanePoint> {
        v.iter().map(|(x, y)| PlanePoint::new(x.clone(), y.clone())).collect()
    }

    fn ipts(v: &[(i64, i64)]) -> Vec<PlanePoint> {
        v.iter().map(|&(x, y)| PlanePoint::new(int(x), int(y))).collect()
    }

    pub(crate) fn trapezoid(a: &Rational, b: &Rational, ell: i64) -> DelzantPolygon {
        let l = int(ell);
        DelzantPolygon::from_vertices(pts(&[
            (int(0), int(0)),
            (a + &l * b, int(0)),
            (a - &l * b, b.clone()),
            (int(0), b.clone()),
        ]))
        .unwrap()
    }

    #[test]
    fn square_and_simplex() {
        let sq = DelzantPolygon::from_vertices(ipts(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        assert!(sq.edges().iter().all(|e| e.size == int(1)));
        assert_eq!(sq.area(), int(1));
        assert_eq!(sq.edge_profile(), EdgeProfile::from_pairs(&[(0, int(1)), (0, int(1)), (0, int(1)), (0, int(1))]));

        let simplex = DelzantPolygon::from_vertices(ipts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(simplex.area(), rat(1, 2));
    }

    #[test]
    fn non_unimodular_vertex_is_reported() {
        let err = DelzantPolygon::from_vertices(ipts(&[(0, 0), (2, 0), (0, 1)])).unwrap_err();
        assert_eq!(err, PolygonError::NotUnimodular { index: 2, det: 2 });
    }

    #[test]
    fn clockwise_input_is_normalised() {
        let cw = DelzantPolygon::from_vertices(ipts(&[(0, 0), (0, 1), (1, 1), (1, 0)])).unwrap();
        assert_eq!(cw.vertices()[0], PlanePoint::origin());
        assert_eq!(cw.vertices()[1], PlanePoint::new(int(1), int(0)));
        assert_eq!(cw.area(), int(1));
        // index refers to the caller's order
        let err = DelzantPolygon::from_vertices(ipts(&[(0, 0), (0, 1), (2, 0)])).unwrap_err();
        assert_eq!(err, PolygonError::NotUnimodular { index: 1, det: 2 });
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            DelzantPolygon::from_vertices(ipts(&[(0, 0), (1, 0)])).unwrap_err(),
            PolygonError::TooFewVertices(2)
        );
        assert_eq!(
            DelzantPolygon::from_vertices(ipts(&[(0, 0), (1, 0), (1, 0), (0, 1)])).unwrap_err(),
            PolygonError::RepeatedVertex { index: 2 }
        );
        assert_eq!(
            DelzantPolygon::from_vertices(ipts(&[(0, 0), (1, 0), (2, 0), (0, 1)])).unwrap_err(),
            PolygonError::Collinear { index: 1 }
        );
        assert!(matches!(
            DelzantPolygon::from_vertices(ipts(&[(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)])).unwrap_err(),
            PolygonError::NotConvex { .. }
        ));
    }

    #[test]
    fn rectangle_and_simplex_profiles() {
        let (a, b) = (rat(5, 2), rat(1, 3));
        let rect = DelzantPolygon::from_vertices(pts(&[
            (int(0), int(0)),
            (a.clone(), int(0)),
            (a.clone(), b.clone()),
            (int(0), b.clone()),
        ]))
        .unwrap();
        assert_eq!(
            rect.edge_profile(),
            EdgeProfile::from_pairs(&[(0, a.clone()), (0, b.clone()), (0, a.clone()), (0, b.clone())])
        );

        let lam = rat(7, 4);
        let simplex =
            DelzantPolygon::from_vertices(pts(&[(int(0), int(0)), (lam.clone(), int(0)), (int(0), lam.clone())]))
                .unwrap();
        let normals: Vec<_> = simplex.edges().iter().map(|e| e.normal).collect();
        assert_eq!(normals, vec![LatticeVector::new(0, 1), LatticeVector::new(-1, -1), LatticeVector::new(1, 0)]);
        assert_eq!(
            simplex.edge_profile(),
            EdgeProfile::from_pairs(&[(1, lam.clone()), (1, lam.clone()), (1, lam.clone())])
        );
        assert_eq!(simplex.area(), &lam * &lam / int(2));
    }

    #[test]
    fn hirzebruch_profile_and_area() {
        let (a, b) = (int(1), rat(1, 3));
        for ell in 0..3 {
            let h = trapezoid(&a, &b, ell);
            let l = int(ell);
            let normals: Vec<_> = h.edges().iter().map(|e| e.normal).collect();
            assert_eq!(normals[1], LatticeVector::new(-1, -2 * ell));
            // bottom, right, top, left
            assert_eq!(
                h.edge_profile(),
                EdgeProfile::from_pairs(&[
                    (2 * ell, &a + &l * &b),
                    (0, b.clone()),
                    (-2 * ell, &a - &l * &b),
                    (0, b.clone()),
                ])
            );
            assert_eq!(h.area(), &a * &b);
        }
    }

    #[test]
    fn profile_reconstruction() {
        let unit = EdgeProfile::from_pairs(&[(0, int(1)), (0, int(1)), (0, int(1)), (0, int(1))]);
        let sq = DelzantPolygon::from_profile(&unit).unwrap();
        assert_eq!(sq.edge_profile(), unit);
        assert_eq!(sq.area(), int(1));

        let lam = rat(2, 3);
        let tri = EdgeProfile::from_pairs(&[(1, lam.clone()), (1, lam.clone()), (1, lam.clone())]);
        let p = DelzantPolygon::from_profile(&tri).unwrap();
        assert_eq!(p.edge_profile(), tri);
        assert_eq!(p.area(), &lam * &lam / int(2));

        let flat = EdgeProfile::from_pairs(&[(0, int(1)), (0, int(1)), (0, int(1))]);
        assert!(matches!(DelzantPolygon::from_profile(&flat), Err(PolygonError::InvalidProfile(_))));

        // monodromy fine, but sizes do not close
        let open = EdgeProfile::from_pairs(&[(0, int(1)), (0, int(2)), (0, int(1)), (0, int(1))]);
        assert!(matches!(DelzantPolygon::from_profile(&open), Err(PolygonError::InvalidProfile(_))));
    }

    #[test]
    fn transformed_profile_is_rotation_or_reflection() {
        let h = trapezoid(&int(2), &rat(1, 2), 1);
        let prof = h.edge_profile().0;
        let n = prof.len();
        for seed in 0..100 {
            let m = random_unimodular_map(seed, 8);
            let q = h.transform(&m).unwrap();
            assert_eq!(q.area(), h.area());
            let qp = q.edge_profile().0;
            let mut expected = prof.clone();
            if m.det() < 0 {
                expected.reverse();
            }
            assert!((0..n).any(|r| {
                let mut rot = expected.clone();
                rot.rotate_left(r);
                rot == qp
            }));
        }
    }

    #[test]
    fn profile_serialises_as_pairs() {
        let prof = EdgeProfile::from_pairs(&[(-1, rat(1, 3)), (2, int(4))]);
        let json = serde_json::to_string(&prof).unwrap();
        assert_eq!(json, r#"[[-1,"1/3"],[2,"4"]]"#);
        let back: EdgeProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, prof);
    }
}
