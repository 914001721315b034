//! Multipliers and possible global periods from local cycle data.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use rayon::prelude::*;

use super::graph::{build_orbit_graph, find_cycles, LocalCycle, OrbitGraphModP};
use crate::algebra::finite_field::eigenvalue_orders;
use crate::algebra::matrix::Matrix;
use crate::algebra::scalar::{is_prime, Fp};
use crate::error::{Error, Result};
use crate::poly::map::HomogeneousMap;
use crate::poly::reduction::good_reduction_test;

/// Jacobian of `f̄^m` at the cycle representative, in the chart of its trailing 1.
pub fn multiplier_matrix(f: &HomogeneousMap, cycle: &LocalCycle, p: u64) -> Result<Matrix<Fp>> {
    let x = cycle.representative.as_fp();
    let c = cycle.representative.chart();
    let ring = f.over(&Fp::from_u64(1, p));
    let (image, m) = ring.iterate_jacobian(&x, cycle.minimal_period as usize, c)?;
    let expected: Vec<Fp> = x.iter().enumerate().filter(|(i, _)| *i != c).map(|(_, v)| *v).collect();
    debug_assert_eq!(image, expected, "representative is not periodic");
    Ok(m)
}

/// Exponent range for the p-part of a period over Q.
pub fn max_p_exponent(p: u64) -> u32 {
    if p == 2 {
        3
    } else {
        1
    }
}

/// Least common multiples of all nonempty subsets.
pub fn subset_lcms(orders: &BTreeSet<u128>) -> BTreeSet<u128> {
    let mut out: BTreeSet<u128> = BTreeSet::new();
    for &o in orders {
        let prev: Vec<u128> = out.iter().copied().collect();
        out.insert(o);
        for q in prev {
            out.insert(q.lcm(&o));
        }
    }
    out
}

/// Candidate periods contributed by one cycle.
pub fn cycle_periods(m: u64, orders: &BTreeSet<u128>, p: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::from([m]);
    for r in subset_lcms(orders) {
        let mut v = m as u128 * r;
        for _ in 0..=max_p_exponent(p) {
            if let Ok(x) = u64::try_from(v) {
                out.insert(x);
            }
            v *= p as u128;
        }
    }
    out
}

/// Everything computed at one prime.
#[derive(Clone, Debug)]
pub struct PrimeData {
    pub prime: u64,
    pub graph: OrbitGraphModP,
    pub cycles: Vec<LocalCycle>,
    /// Eigenvalue orders of each cycle's multiplier matrix, parallel to `cycles`.
    pub orders: Vec<BTreeSet<u128>>,
    pub periods: BTreeSet<u64>,
}

pub fn analyze_prime(f: &HomogeneousMap, p: u64, max_points: u64) -> Result<PrimeData> {
    if !good_reduction_test(f, p) {
        return Err(Error::BadPrime(p));
    }
    let graph = build_orbit_graph(f, p, max_points)?;
    let cycles = find_cycles(&graph);
    let mut orders = Vec::with_capacity(cycles.len());
    let mut periods = BTreeSet::new();
    for c in &cycles {
        let m = multiplier_matrix(f, c, p)?;
        let o = eigenvalue_orders(&m);
        periods.extend(cycle_periods(c.minimal_period, &o, p));
        orders.push(o);
    }
    Ok(PrimeData { prime: p, graph, cycles, orders, periods })
}

pub fn possible_periods_for_prime(f: &HomogeneousMap, p: u64, max_points: u64) -> Result<BTreeSet<u64>> {
    Ok(analyze_prime(f, p, max_points)?.periods)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PeriodCandidates {
    pub per_prime: BTreeMap<u64, BTreeSet<u64>>,
    pub intersection: BTreeSet<u64>,
}

/// Analyzes each prime (in parallel) and intersects the period sets.
pub fn intersect_periods(f: &HomogeneousMap, primes: &[u64], max_points: u64) -> Result<(PeriodCandidates, Vec<PrimeData>)> {
    if primes.is_empty() {
        return Err(Error::EmptyPrimeList);
    }
    let data: Vec<PrimeData> = primes.par_iter().map(|&p| analyze_prime(f, p, max_points)).collect::<Result<_>>()?;
    let mut per_prime = BTreeMap::new();
    let mut intersection: Option<BTreeSet<u64>> = None;
    for d in &data {
        per_prime.insert(d.prime, d.periods.clone());
        intersection = Some(match intersection {
            None => d.periods.clone(),
            Some(s) => s.intersection(&d.periods).copied().collect(),
        });
    }
    Ok((PeriodCandidates { per_prime, intersection: intersection.unwrap() }, data))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePolicy {
    pub min_prime: u64,
    pub max_prime: u64,
}

impl Default for PrimePolicy {
    fn default() -> Self {
        PrimePolicy { min_prime: 2, max_prime: 997 }
    }
}

/// The `count` smallest primes of good reduction in the policy window.
pub fn select_primes(f: &HomogeneousMap, count: usize, policy: PrimePolicy) -> Result<Vec<u64>> {
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for p in policy.min_prime..=policy.max_prime {
        if !is_prime(p) {
            continue;
        }
        if good_reduction_test(f, p) {
            good.push(p);
            if good.len() == count {
                return Ok(good);
            }
        } else {
            bad.push(p);
        }
    }
    Err(Error::NotEnoughPrimes { wanted: count, max_prime: policy.max_prime, bad })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::graph::DEFAULT_MAX_TABLE_POINTS;
    use crate::poly::parse::parse_map;

    const CAP: u64 = DEFAULT_MAX_TABLE_POINTS;

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn worked_example_periods() {
        let f = parse_map("z^2 - 7/4").unwrap();
        assert_eq!(possible_periods_for_prime(&f, 3, CAP).unwrap(), set(&[1, 2]));
        let p5 = possible_periods_for_prime(&f, 5, CAP).unwrap();
        assert!(p5.is_superset(&set(&[1, 2, 8])));
        assert_eq!(p5, set(&[1, 2, 8, 40]));
        let p7 = possible_periods_for_prime(&f, 7, CAP).unwrap();
        assert!(p7.is_superset(&set(&[1, 2, 3, 6])));
        let (cand, _) = intersect_periods(&f, &[3, 5, 7], CAP).unwrap();
        assert_eq!(cand.intersection, set(&[1, 2]));
        assert!(matches!(intersect_periods(&f, &[], CAP), Err(Error::EmptyPrimeList)));
        assert!(matches!(intersect_periods(&f, &[2, 3], CAP), Err(Error::BadPrime(2))));
    }

    #[test]
    fn worked_example_multipliers() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let d = analyze_prime(&f, 5, CAP).unwrap();
        let c = d.cycles.iter().find(|c| c.members.contains(&d.graph.indexer().index_of(&[1, 1]))).unwrap();
        let m = multiplier_matrix(&f, c, 5).unwrap();
        assert_eq!(m.get(0, 0).value(), 2);
        let d3 = analyze_prime(&f, 3, CAP).unwrap();
        for c in &d3.cycles {
            assert_eq!(multiplier_matrix(&f, c, 3).unwrap().get(0, 0).value(), 0);
        }
    }

    #[test]
    fn diagonal_multiplier() {
        let f = parse_map("[x^2, y^2, z^2]").unwrap();
        let d = analyze_prime(&f, 5, CAP).unwrap();
        let c = d.cycles.iter().find(|c| c.representative.coords() == [1, 1, 1]).unwrap();
        let m = multiplier_matrix(&f, c, 5).unwrap();
        assert_eq!(m, Matrix::from_rows(vec![vec![Fp::new(2, 5), Fp::new(0, 5)], vec![Fp::new(0, 5), Fp::new(2, 5)]]));
    }

    #[test]
    fn prime_selection() {
        assert_eq!(select_primes(&parse_map("z^2 - 7/4").unwrap(), 3, PrimePolicy::default()).unwrap(), vec![3, 5, 7]);
        assert_eq!(select_primes(&parse_map("z^2").unwrap(), 2, PrimePolicy::default()).unwrap(), vec![2, 3]);
        // resultant 30^2 * ... : bad at 2, 3, 5
        let f = parse_map("z^2 + 1/30").unwrap();
        assert_eq!(select_primes(&f, 1, PrimePolicy::default()).unwrap(), vec![7]);
        assert!(matches!(select_primes(&f, 5, PrimePolicy { min_prime: 2, max_prime: 13 }), Err(Error::NotEnoughPrimes { .. })));
    }

    #[test]
    fn partition_and_superset() {
        for (m, p) in [("z^2 - 29/16", 7u64), ("[x^2 - 21/16*z^2, y^2 - 2*z^2, z^2]", 5), ("-5/4 z + 1/z", 3)] {
            let f = parse_map(m).unwrap();
            let d = analyze_prime(&f, p, CAP).unwrap();
            let sum: u64 = d.cycles.iter().map(|c| c.minimal_period + c.tail_points).sum();
            assert_eq!(sum, d.graph.indexer().total());
            for c in &d.cycles {
                assert!(d.periods.contains(&c.minimal_period));
            }
        }
    }
}
