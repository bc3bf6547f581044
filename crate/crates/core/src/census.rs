//! The census of toric actions on a blowup of ℂP².
//!
//! Starting from every Hirzebruch trapezoid `H_{a,b,2ℓ}` with `0 ≤ ℓ < a/b`,
//! the engine chops corners of sizes `δ, δ3, …, δk` in every possible way and
//! collects the final polygons up to AGL(2, ℤ).
//!
//! Search states are memoized on `(canonical profile, remaining sizes)`:
//! chopping commutes with AGL(2, ℤ), so congruent states with the same
//! remaining sizes produce the same classes. The sequential DFS is the
//! reference; the parallel mode splits the search at depth one and merges the
//! per-branch results in DFS order, which yields the same classes and the same
//! provenance.

use std::collections::HashSet;

use num_traits::Zero;
use thiserror::Error;

use crate::blowup::{BlowupError, BlowupVector, BoundReport, DerivedParams, Verdict};
use crate::canonical::{canonical_form, CanonicalProfile};
use crate::chop::{chop_corner, feasible_vertices, replay_chop, ChopError, ChopRecord};
use crate::lattice::{PlanePoint, Rational};
use crate::par::{map_ordered, Jobs, PoolError};
use crate::polygon::{DelzantPolygon, PolygonError};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Chop(#[from] ChopError),
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error("census post-condition failed: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrapezoidSeed {
    pub ell: u64,
    pub polygon: DelzantPolygon,
}

/// `H_{a,b,2ℓ}`: vertices `(0,0), (a+ℓb, 0), (a−ℓb, b), (0, b)`.
pub fn hirzebruch_trapezoid(a: &Rational, b: &Rational, ell: u64) -> Result<DelzantPolygon, PolygonError> {
    let l = Rational::from_integer(ell.into());
    let zero = Rational::zero();
    DelzantPolygon::from_vertices(vec![
        PlanePoint::new(zero.clone(), zero.clone()),
        PlanePoint::new(a + &l * b, zero.clone()),
        PlanePoint::new(a - &l * b, b.clone()),
        PlanePoint::new(zero, b.clone()),
    ])
}

/// One seed per integer `ℓ` with `0 ≤ ℓ < a/b`, in increasing order.
pub fn trapezoid_seeds(params: &DerivedParams) -> Result<Vec<TrapezoidSeed>, PolygonError> {
    let (a, b) = (&params.a, &params.b);
    let mut seeds = Vec::new();
    let mut ell = 0u64;
    while Rational::from_integer(ell.into()) * b < *a {
        seeds.push(TrapezoidSeed { ell, polygon: hirzebruch_trapezoid(a, b, ell)? });
        ell += 1;
    }
    Ok(seeds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchOrder {
    /// Every distinct ordering of the chop sizes.
    #[default]
    AllOrders,
    /// Only the written order `δ, δ3, …, δk`.
    WrittenOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CensusOptions {
    pub order: SearchOrder,
    pub jobs: Jobs,
}

impl CensusOptions {
    pub fn sequential() -> Self {
        Self { order: SearchOrder::AllOrders, jobs: Jobs::SEQUENTIAL }
    }
}

/// Memoization key: the canonical profile plus the sorted remaining sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateKey {
    canonical: CanonicalProfile,
    remaining: Vec<Rational>,
}

pub fn census_state_key(p: &DelzantPolygon, remaining: &[Rational]) -> StateKey {
    let mut remaining = remaining.to_vec();
    remaining.sort();
    StateKey { canonical: canonical_form(p), remaining }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub ell: u64,
    pub chops: Vec<ChopRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionClass {
    pub canonical: CanonicalProfile,
    pub representative: DelzantPolygon,
    pub provenance: Provenance,
}

/// Rebuilds a polygon from a seed and a list of chops located by coordinates.
pub fn replay_provenance(params: &DerivedParams, provenance: &Provenance) -> Result<DelzantPolygon, CensusError> {
    let mut p = hirzebruch_trapezoid(&params.a, &params.b, provenance.ell)?;
    for rec in &provenance.chops {
        p = replay_chop(&p, rec)?;
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusResult {
    pub vector: BlowupVector,
    pub params: DerivedParams,
    pub order: SearchOrder,
    /// Sorted by canonical profile; pairwise non-congruent.
    pub classes: Vec<ActionClass>,
    pub bound_report: BoundReport,
    pub nonexistence: Verdict,
}

impl CensusResult {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn canonical_profiles(&self) -> Vec<CanonicalProfile> {
        self.classes.iter().map(|c| c.canonical.clone()).collect()
    }
}

struct Found {
    canonical: CanonicalProfile,
    polygon: DelzantPolygon,
    ell: u64,
    chops: Vec<ChopRecord>,
}

struct Child {
    record: ChopRecord,
    polygon: DelzantPolygon,
    remaining: Vec<Rational>,
}

fn children(order: SearchOrder, p: &DelzantPolygon, remaining: &[Rational]) -> Result<Vec<Child>, ChopError> {
    let picks: Vec<usize> = match order {
        SearchOrder::WrittenOrder => vec![0],
        SearchOrder::AllOrders => (0..remaining.len()).filter(|&i| !remaining[..i].contains(&remaining[i])).collect(),
    };
    let mut out = Vec::new();
    for i in picks {
        let size = &remaining[i];
        let mut rest = remaining.to_vec();
        rest.remove(i);
        for v in feasible_vertices(p, size) {
            out.push(Child {
                record: ChopRecord { vertex_index: v, vertex: p.vertices()[v].clone(), size: size.clone() },
                polygon: chop_corner(p, v, size)?,
                remaining: rest.clone(),
            });
        }
    }
    Ok(out)
}

struct Explorer {
    order: SearchOrder,
    visited: HashSet<StateKey>,
    seen: HashSet<CanonicalProfile>,
    found: Vec<Found>,
}

impl Explorer {
    fn new(order: SearchOrder) -> Self {
        Self { order, visited: HashSet::new(), seen: HashSet::new(), found: Vec::new() }
    }

    fn explore(
        &mut self,
        ell: u64,
        p: &DelzantPolygon,
        remaining: &[Rational],
        path: &mut Vec<ChopRecord>,
    ) -> Result<(), ChopError> {
        if remaining.is_empty() {
            let canonical = canonical_form(p);
            if self.seen.insert(canonical.clone()) {
                self.found.push(Found { canonical, polygon: p.clone(), ell, chops: path.clone() });
            }
            return Ok(());
        }
        for child in children(self.order, p, remaining)? {
            if self.visited.insert(census_state_key(&child.polygon, &child.remaining)) {
                path.push(child.record);
                self.explore(ell, &child.polygon, &child.remaining, path)?;
                path.pop();
            }
        }
        Ok(())
    }
}

struct Task {
    ell: u64,
    record: ChopRecord,
    polygon: DelzantPolygon,
    remaining: Vec<Rational>,
}

fn search(seeds: &[TrapezoidSeed], sizes: &[Rational], opts: CensusOptions) -> Result<Vec<Found>, CensusError> {
    if opts.jobs.is_sequential() {
        let mut ex = Explorer::new(opts.order);
        for seed in seeds {
            ex.visited.insert(census_state_key(&seed.polygon, sizes));
            ex.explore(seed.ell, &seed.polygon, sizes, &mut Vec::new())?;
        }
        return Ok(ex.found);
    }

    // Depth-one split, deduplicated in DFS order.
    let mut visited = HashSet::new();
    let mut tasks = Vec::new();
    for seed in seeds {
        for child in children(opts.order, &seed.polygon, sizes)? {
            if visited.insert(census_state_key(&child.polygon, &child.remaining)) {
                tasks.push(Task {
                    ell: seed.ell,
                    record: child.record,
                    polygon: child.polygon,
                    remaining: child.remaining,
                });
            }
        }
    }
    let per_task = map_ordered(opts.jobs, &tasks, |t| {
        let mut ex = Explorer::new(opts.order);
        let mut path = vec![t.record.clone()];
        ex.explore(t.ell, &t.polygon, &t.remaining, &mut path).map(|_| ex.found)
    })?;
    let mut seen = HashSet::new();
    let mut merged = Vec::new();
    for found in per_task {
        for f in found? {
            if seen.insert(f.canonical.clone()) {
                merged.push(f);
            }
        }
    }
    Ok(merged)
}

fn check_class(v: &BlowupVector, class: &ActionClass) -> Result<(), CensusError> {
    let fail = |what: &str| Err(CensusError::Invariant(format!("{what} for class {}", class.canonical)));
    let p = &class.representative;
    let n = p.len();
    if p.check_invariants().is_err() {
        return fail("invalid Delzant polygon");
    }
    if n != v.k() + 3 {
        return fail("wrong edge count");
    }
    if p.edge_profile().k_sum() != 12 - 3 * n as i64 {
        return fail("self-intersection sum is not 12 - 3N");
    }
    if p.area() != v.expected_area() {
        return fail("area differs from (λ² − Σδ²)/2");
    }
    if canonical_form(p) != class.canonical {
        return fail("representative does not match its canonical profile");
    }
    Ok(())
}

/// Runs the census on a reduced vector.
pub fn run_census(v: &BlowupVector, opts: CensusOptions) -> Result<CensusResult, CensusError> {
    if !v.is_reduced() {
        return Err(BlowupError::NotReduced.into());
    }
    let params = v.derived_params()?;
    let sizes = v.chop_sizes()?;
    let seeds = trapezoid_seeds(&params)?;
    let found = search(&seeds, &sizes, opts)?;

    let mut classes: Vec<ActionClass> = found
        .into_iter()
        .map(|f| ActionClass {
            canonical: f.canonical,
            representative: f.polygon,
            provenance: Provenance { ell: f.ell, chops: f.chops },
        })
        .collect();
    classes.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    for class in &classes {
        check_class(v, class)?;
    }
    Ok(CensusResult {
        vector: v.clone(),
        params,
        order: opts.order,
        classes,
        bound_report: v.bound_report()?,
        nonexistence: v.nonexistence_check()?,
    })
}

/// Runs independent censuses, one per vector, in parallel across vectors.
pub fn run_census_batch(
    vectors: &[BlowupVector],
    order: SearchOrder,
    jobs: Jobs,
) -> Result<Vec<Result<CensusResult, CensusError>>, CensusError> {
    let opts = CensusOptions { order, jobs: Jobs::SEQUENTIAL };
    Ok(map_ordered(jobs, vectors, |v| run_census(v, opts))?)
}

/// Comparison of the written-order search against the all-orders search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderAudit {
    pub all_orders: usize,
    pub written_order: usize,
    pub missing_from_written: Vec<CanonicalProfile>,
    pub extra_in_written: Vec<CanonicalProfile>,
}

impl OrderAudit {
    pub fn agrees(&self) -> bool {
        self.missing_from_written.is_empty() && self.extra_in_written.is_empty()
    }

    pub fn compare(all: &CensusResult, written: &CensusResult) -> Self {
        let a: HashSet<_> = all.canonical_profiles().into_iter().collect();
        let w: HashSet<_> = written.canonical_profiles().into_iter().collect();
        let mut missing: Vec<_> = a.difference(&w).cloned().collect();
        let mut extra: Vec<_> = w.difference(&a).cloned().collect();
        missing.sort();
        extra.sort();
        Self { all_orders: a.len(), written_order: w.len(), missing_from_written: missing, extra_in_written: extra }
    }
}

pub fn audit_search_order(v: &BlowupVector, jobs: Jobs) -> Result<OrderAudit, CensusError> {
    let all = run_census(v, CensusOptions { order: SearchOrder::AllOrders, jobs })?;
    let written = run_census(v, CensusOptions { order: SearchOrder::WrittenOrder, jobs })?;
    Ok(OrderAudit::compare(&all, &written))
}
