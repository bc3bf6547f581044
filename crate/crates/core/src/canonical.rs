//! Canonical forms of Delzant polygons up to AGL(2, ℤ).
//!
//! Two Delzant polygons are congruent exactly when their edge profiles agree
//! up to rotation and reversal, so the lexicographically least of the `2N`
//! dihedral images of the profile is a complete invariant.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::polygon::{DelzantPolygon, EdgeProfile, ProfileEntry};

/// The dihedral-minimal rotation of an edge profile. Serialises exactly like
/// [`EdgeProfile`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalProfile(Vec<ProfileEntry>);

impl CanonicalProfile {
    pub fn entries(&self) -> &[ProfileEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_profile(&self) -> EdgeProfile {
        EdgeProfile::new(self.0.clone())
    }
}

impl fmt::Display for CanonicalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_profile().fmt(f)
    }
}

/// Index of the lexicographically least rotation of `seq`, comparing in place.
fn least_rotation(seq: &[ProfileEntry]) -> usize {
    let n = seq.len();
    let cmp_rot = |a: usize, b: usize| {
        (0..n).map(|i| seq[(a + i) % n].cmp(&seq[(b + i) % n])).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    };
    (1..n).fold(0, |best, r| if cmp_rot(r, best).is_lt() { r } else { best })
}

pub fn canonicalize(profile: &EdgeProfile) -> CanonicalProfile {
    let forward = profile.entries();
    let backward: Vec<ProfileEntry> = forward.iter().rev().cloned().collect();
    let rotated = |seq: &[ProfileEntry]| {
        let r = least_rotation(seq);
        seq[r..].iter().chain(&seq[..r]).cloned().collect::<Vec<_>>()
    };
    let a = rotated(forward);
    let b = rotated(&backward);
    CanonicalProfile(a.min(b))
}

pub fn canonical_form(p: &DelzantPolygon) -> CanonicalProfile {
    canonicalize(&p.edge_profile())
}

pub fn congruent(p: &DelzantPolygon, q: &DelzantPolygon) -> bool {
    p.len() == q.len() && canonical_form(p) == canonical_form(q)
}
