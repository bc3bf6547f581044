//! Exact enumeration of toric actions on symplectic blowups of ℂP².
//!
//! A toric action on `(M_k, ω_{λ;δ1,…,δk})` is determined by its momentum
//! polygon, a Delzant polygon, up to AGL(2, ℤ). For a reduced blowup vector
//! every such polygon is obtained from a Hirzebruch trapezoid by chopping
//! corners of sizes `δ, δ3, …, δk`. This crate performs that enumeration with
//! exact rational arithmetic and classifies the results by their canonical
//! edge profiles.
//!
//! Module map:
//! - [`lattice`]: rationals, lattice vectors, affine unimodular maps
//! - [`polygon`]: Delzant polygons and `(k_j, a_j)` edge profiles
//! - [`canonical`]: AGL(2, ℤ) canonical forms and congruence
//! - [`chop`]: corner chopping
//! - [`blowup`]: blowup vectors, reduction, nonexistence criteria, bounds
//! - [`census`]: the search engine
//! - [`cli`]: command-line driver and JSON/SVG/table output

pub mod blowup;
pub mod canonical;
pub mod census;
pub mod chop;
pub mod cli;
pub mod lattice;
pub mod par;
pub mod polygon;

pub use blowup::{BlowupError, BlowupVector, BoundReport, DerivedParams, NonexistenceReason, Verdict};
pub use canonical::{canonical_form, canonicalize, congruent, CanonicalProfile};
pub use census::{
    audit_search_order, run_census, run_census_batch, trapezoid_seeds, ActionClass, CensusError, CensusOptions,
    CensusResult, OrderAudit, SearchOrder, TrapezoidSeed,
};
pub use chop::{chop_corner, feasible_vertices, ChopRecord};
pub use lattice::{
    primitive_decompose, random_unimodular_map, AffineUnimodularMap, LatticeVector, PlanePoint, Rational,
};
pub use par::Jobs;
pub use polygon::{DelzantPolygon, EdgeProfile, ProfileEntry};
