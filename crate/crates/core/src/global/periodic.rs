//! The rational periodic points of a morphism.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rayon::prelude::*;

use super::bound::required_precision;
use super::hensel::{hensel_lift, lll_reconstruct, newton_applies, ResidueVector};
use crate::error::Result;
use crate::modp::periods::PrimeData;
use crate::poly::map::HomogeneousMap;
use crate::poly::point::RationalProjPoint;

/// Rational periodic points with their minimal periods, sorted by point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PeriodicPointSet {
    pub points: BTreeMap<RationalProjPoint, u64>,
}

impl PeriodicPointSet {
    /// Cycles as point lists starting from their smallest point, sorted.
    pub fn cycles(&self, f: &HomogeneousMap) -> Result<Vec<Vec<RationalProjPoint>>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (p, &n) in &self.points {
            if seen.contains(p) {
                continue;
            }
            let orbit = f.iterate_point(p, n as usize - 1)?;
            seen.extend(orbit.iter().cloned());
            out.push(orbit);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Smallest `s >= 1` with `f^s(P) = P`, searching up to `limit`.
pub fn exact_period(f: &HomogeneousMap, p: &RationalProjPoint, limit: u64) -> Result<Option<u64>> {
    let mut q = f.evaluate(p)?;
    for s in 1..=limit {
        if &q == p {
            return Ok(Some(s));
        }
        q = f.evaluate(&q)?;
    }
    Ok(None)
}

/// Lifts every local periodic point at `lift` whose local period divides a
/// candidate `n`, reconstructs, and keeps the exact solutions of `f^n(P) = P`.
///
/// The first member of each local cycle is lifted first; a later member is
/// skipped when it is the reduction of a known solution and its lift is unique.
pub fn rational_periodic_points(
    f: &HomogeneousMap,
    candidates: &BTreeSet<u64>,
    lift: &PrimeData,
    bound: &BigInt,
    precision: u32,
    branch_cap: usize,
) -> Result<PeriodicPointSet> {
    let plan: Vec<LiftStep> = candidates.iter().map(|&n| LiftStep { period: n, prime: lift.prime, precision }).collect();
    rational_periodic_points_planned(f, &plan, std::slice::from_ref(lift), bound, branch_cap)
}

/// The prime used to lift solutions of `f^n(P) = P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LiftStep {
    pub period: u64,
    pub prime: u64,
    pub precision: u32,
}

/// Seeds for period `n` at which `d(f^n) - I` is singular modulo the prime,
/// and all seeds for `n`.
pub fn seed_counts(lift: &PrimeData, n: u64) -> (u64, u64) {
    let mut singular = 0;
    let mut total = 0;
    for (c, orders) in lift.cycles.iter().zip(&lift.orders) {
        if !n.is_multiple_of(c.minimal_period) {
            continue;
        }
        let k = c.members.len() as u64;
        total += k;
        // an eigenvalue of the cycle multiplier that is an (n/m)-th root of unity
        let r = (n / c.minimal_period) as u128;
        if orders.iter().any(|o| r.is_multiple_of(*o)) {
            singular += k;
        }
    }
    (singular, total)
}

/// Per candidate period, the analyzed prime with the fewest singular seeds,
/// then the fewest seeds, then the smallest prime.
pub fn plan_lifting(candidates: &BTreeSet<u64>, data: &[PrimeData], bound: &BigInt, dimension: usize) -> Vec<LiftStep> {
    candidates
        .iter()
        .map(|&n| {
            let best = data.iter().min_by_key(|d| (seed_counts(d, n), d.prime)).expect("at least one prime");
            LiftStep { period: n, prime: best.prime, precision: required_precision(bound, best.prime, dimension) }
        })
        .collect()
}

/// Runs a lifting plan; `data` must contain every prime named in it.
pub fn rational_periodic_points_planned(
    f: &HomogeneousMap,
    plan: &[LiftStep],
    data: &[PrimeData],
    bound: &BigInt,
    branch_cap: usize,
) -> Result<PeriodicPointSet> {
    let mut found: BTreeMap<RationalProjPoint, u64> = BTreeMap::new();
    for step in plan {
        let n = step.period;
        let lift = data.iter().find(|d| d.prime == step.prime).expect("planned prime analyzed");
        let cycles: Vec<&[u64]> = lift.cycles.iter().filter(|c| n % c.minimal_period == 0).map(|c| c.members.as_slice()).collect();
        let heads: Vec<u64> = cycles.iter().map(|m| m[0]).collect();
        let rest: Vec<u64> = cycles.iter().flat_map(|m| m[1..].iter().copied()).collect();
        for seeds in [heads, rest] {
            let known = reductions(&found, lift);
            let results: Vec<Result<Vec<(RationalProjPoint, u64)>>> =
                seeds.par_iter().map(|&s| lift_seed(f, n, s, lift, &known, bound, step.precision, branch_cap)).collect();
            for r in results {
                for (pt, k) in r? {
                    found.entry(pt).or_insert(k);
                }
            }
        }
    }
    Ok(PeriodicPointSet { points: found })
}

/// Solutions of `f^n(P) = P` reducing to seed `s`, with their orbits.
#[allow(clippy::too_many_arguments)]
fn lift_seed(
    f: &HomogeneousMap,
    n: u64,
    s: u64,
    lift: &PrimeData,
    known: &BTreeMap<u64, Vec<u64>>,
    bound: &BigInt,
    precision: u32,
    branch_cap: usize,
) -> Result<Vec<(RationalProjPoint, u64)>> {
    let seed = lift.graph.indexer().point_of(s);
    let approx = ResidueVector::from_mod_p(&seed);
    let explained = known.get(&s).is_some_and(|ks| ks.iter().any(|k| n.is_multiple_of(*k)));
    if explained && newton_applies(f, n as usize, &approx)? {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for l in hensel_lift(f, n as usize, &approx, precision, branch_cap)? {
        let Some(pt) = lll_reconstruct(&l, bound)? else { continue };
        if pt.reduce(lift.prime) != seed || f.iterate_point(&pt, n as usize)?.last() != Some(&pt) {
            continue;
        }
        let k = exact_period(f, &pt, n)?.expect("verified periodic");
        out.extend(f.iterate_point(&pt, k as usize - 1)?.into_iter().map(|q| (q, k)));
    }
    Ok(out)
}

/// Periods of the known solutions, keyed by the index of their reduction.
fn reductions(found: &BTreeMap<RationalProjPoint, u64>, lift: &PrimeData) -> BTreeMap<u64, Vec<u64>> {
    let mut m: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (pt, &k) in found {
        m.entry(lift.graph.indexer().index_of_point(&pt.reduce(lift.prime))).or_default().push(k);
    }
    m
}
