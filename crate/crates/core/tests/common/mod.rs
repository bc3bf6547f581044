//! Shared helpers for the integration tests: an independent brute-force
//! census, explicit congruence search, polygon checks and a seeded sampler of
//! reduced blowup vectors.

#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_census::chop::chop_corner;
use toric_census::lattice::{rat, LatticeVector, PlanePoint, Rational};
use toric_census::{BlowupVector, DelzantPolygon};

pub fn vector(s: &str) -> BlowupVector {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Delzant validity, `N = k + 3`, `Σ k_j = 12 − 3N`, and the area formula.
pub fn check_polygon(v: &BlowupVector, p: &DelzantPolygon) -> Result<(), String> {
    p.check_invariants().map_err(|e| format!("invalid polygon {p}: {e}"))?;
    let n = p.len();
    if n != v.k() + 3 {
        return Err(format!("{p}: {n} edges, expected {}", v.k() + 3));
    }
    let ksum = p.edge_profile().k_sum();
    if ksum != 12 - 3 * n as i64 {
        return Err(format!("{p}: k-sum {ksum}, expected {}", 12 - 3 * n as i64));
    }
    if p.area() != v.expected_area() {
        return Err(format!("{p}: area {}, expected {}", p.area(), v.expected_area()));
    }
    Ok(())
}

fn apply(m: [[i64; 2]; 2], t: &PlanePoint, p: &PlanePoint) -> PlanePoint {
    let c = |n: i64| Rational::from_integer(BigInt::from(n));
    PlanePoint::new(c(m[0][0]) * &p.x + c(m[0][1]) * &p.y + &t.x, c(m[1][0]) * &p.x + c(m[1][1]) * &p.y + &t.y)
}

/// The two primitive edge vectors leaving vertex `i`.
fn corner(p: &DelzantPolygon, i: usize) -> (LatticeVector, LatticeVector) {
    let n = p.len();
    let e = p.edges();
    (e[i].direction, -e[(i + n - 1) % n].direction)
}

/// Searches for `x ↦ Mx + t` with `M ∈ GL(2, ℤ)` carrying the vertex set of
/// `p` onto that of `q`. Any such map is pinned down by where one corner goes,
/// so trying every corner of `q` in both orientations is exhaustive.
pub fn explicit_map(p: &DelzantPolygon, q: &DelzantPolygon) -> Option<([[i64; 2]; 2], PlanePoint)> {
    if p.len() != q.len() {
        return None;
    }
    let (u, w) = corner(p, 0);
    let det = u.x * w.y - u.y * w.x;
    let inv = [[w.y * det, -w.x * det], [-u.y * det, u.x * det]];
    let targets: Vec<&PlanePoint> = q.vertices().iter().collect();
    for j in 0..q.len() {
        let (u2, w2) = corner(q, j);
        for (a, b) in [(u2, w2), (w2, u2)] {
            let c = [[a.x, b.x], [a.y, b.y]];
            let m = [
                [c[0][0] * inv[0][0] + c[0][1] * inv[1][0], c[0][0] * inv[0][1] + c[0][1] * inv[1][1]],
                [c[1][0] * inv[0][0] + c[1][1] * inv[1][0], c[1][0] * inv[0][1] + c[1][1] * inv[1][1]],
            ];
            let zero = PlanePoint::origin();
            let moved = apply(m, &zero, &p.vertices()[0]);
            let t = PlanePoint::new(&q.vertices()[j].x - &moved.x, &q.vertices()[j].y - &moved.y);
            if p.vertices().iter().all(|v| targets.contains(&&apply(m, &t, v))) {
                return Some((m, t));
            }
        }
    }
    None
}

fn permutations(items: &[Rational]) -> Vec<Vec<Rational>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

fn chop_all(p: &DelzantPolygon, sizes: &[Rational], leaves: &mut Vec<DelzantPolygon>) {
    let Some((first, rest)) = sizes.split_first() else {
        leaves.push(p.clone());
        return;
    };
    for v in 0..p.len() {
        if let Ok(next) = chop_corner(p, v, first) {
            chop_all(&next, rest, leaves);
        }
    }
}

/// Every seed, every ordering of the chop sizes, every feasible vertex, with
/// no memoisation; classes are separated by [`explicit_map`] alone.
pub fn brute_force_classes(v: &BlowupVector) -> Vec<DelzantPolygon> {
    let (l, d) = (v.lambda(), v.deltas());
    let delta = l - &d[0] - &d[1];
    let a = l - &d[1];
    let b = l - &d[0];
    let zero = rat(0, 1);
    let mut sizes = vec![delta];
    sizes.extend(d[2..].iter().cloned());

    let mut leaves = Vec::new();
    let mut ell = 0i64;
    while rat(ell, 1) * &b < a {
        let lb = rat(ell, 1) * &b;
        let seed = DelzantPolygon::from_vertices(vec![
            PlanePoint::new(zero.clone(), zero.clone()),
            PlanePoint::new(&a + &lb, zero.clone()),
            PlanePoint::new(&a - &lb, b.clone()),
            PlanePoint::new(zero.clone(), b.clone()),
        ])
        .expect("trapezoid is Delzant");
        let mut seen = HashSet::new();
        for order in permutations(&sizes) {
            if seen.insert(order.clone()) {
                chop_all(&seed, &order, &mut leaves);
            }
        }
        ell += 1;
    }

    let mut reps: Vec<DelzantPolygon> = Vec::new();
    for leaf in leaves {
        if !reps.iter().any(|r| explicit_map(&leaf, r).is_some()) {
            reps.push(leaf);
        }
    }
    reps
}

/// Uniform rational strictly inside `(lo, hi)` with denominator at most `max_denom`.
pub fn rational_between(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, max_denom: i64) -> Option<Rational> {
    for _ in 0..64 {
        let q = rng.gen_range(1..=max_denom);
        let qq = rat(q, 1);
        let lo_n = (lo * &qq).floor().to_integer();
        let hi_n = (hi * &qq).ceil().to_integer();
        let (lo_n, hi_n): (i64, i64) = (lo_n.try_into().ok()?, hi_n.try_into().ok()?);
        let cands: Vec<i64> = (lo_n..=hi_n).filter(|&p| rat(p, q) > *lo && rat(p, q) < *hi).collect();
        if let Some(&p) = cands.choose(rng) {
            return Some(rat(p, q));
        }
    }
    None
}

/// Random reduced vector with `k` blowups and every denominator at most 60.
///
/// Half the draws pick each entry independently; the other half take a
/// decreasing tail, which is where the bound's hypotheses tend to hold.
pub fn random_reduced_vector(rng: &mut ChaCha8Rng) -> BlowupVector {
    const DEN: i64 = 60;
    loop {
        let k = rng.gen_range(3..=5);
        let Some(lambda) = rational_between(rng, &rat(1, 2), &rat(3, 1), DEN) else { continue };
        let deltas: Option<Vec<Rational>> = if rng.gen_bool(0.5) {
            (0..k).map(|_| rational_between(rng, &rat(0, 1), &lambda, DEN)).collect()
        } else {
            let mut d = Vec::with_capacity(k);
            let first = rational_between(rng, &rat(0, 1), &lambda, DEN);
            let second = first.as_ref().and_then(|f| rational_between(rng, &rat(0, 1), &(&lambda - f), DEN));
            match (first, second) {
                (Some(f), Some(s)) => {
                    let rest = &lambda - &f - &s;
                    d.push(f);
                    d.push(s);
                    let mut cap = rest.min(d[1].clone());
                    for _ in 2..k {
                        match rational_between(rng, &rat(0, 1), &cap, DEN) {
                            Some(x) => {
                                cap = &x / rat(2, 1);
                                d.push(x);
                            }
                            None => break,
                        }
                    }
                    (d.len() == k).then_some(d)
                }
                _ => None,
            }
        };
        let Some(mut deltas) = deltas else { continue };
        deltas.sort_by(|a, b| b.cmp(a));
        if let Ok(v) = BlowupVector::new(lambda, deltas) {
            if v.is_reduced() {
                return v;
            }
        }
    }
}

/// Applies random Cremona moves on random triples and random permutations.
/// The result represents the same class, so `reduce` must undo it.
pub fn scramble(v: &BlowupVector, rng: &mut ChaCha8Rng, moves: usize) -> BlowupVector {
    let mut lambda = v.lambda().clone();
    let mut d = v.deltas().to_vec();
    for _ in 0..moves {
        d.shuffle(rng);
        let (d1, d2, d3) = (d[0].clone(), d[1].clone(), d[2].clone());
        let s = &d1 + &d2 + &d3 - &lambda;
        d[0] = &lambda - &d2 - &d3;
        d[1] = &lambda - &d1 - &d3;
        d[2] = &lambda - &d1 - &d2;
        lambda = &lambda - &s;
        if d.iter().any(|x| *x <= rat(0, 1)) || lambda <= rat(0, 1) {
            // undo: the move is an involution
            let (e1, e2, e3) = (d[0].clone(), d[1].clone(), d[2].clone());
            let s2 = &e1 + &e2 + &e3 - &lambda;
            d[0] = &lambda - &e2 - &e3;
            d[1] = &lambda - &e1 - &e3;
            d[2] = &lambda - &e1 - &e2;
            lambda = &lambda - &s2;
        }
    }
    d.shuffle(rng);
    BlowupVector::new(lambda, d).expect("positive entries")
}
