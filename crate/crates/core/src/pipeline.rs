//! The full computation for one map, with its configuration and report.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::closure::{preperiodic_closure, PreperiodicGraph};
use crate::error::{Error, Result};
use crate::global::{
    height_bound, nullstellensatz_certificate, plan_lifting, rational_periodic_points_planned, required_precision, HeightBound, LiftStep,
    DEFAULT_BRANCH_CAP,
};
use crate::modp::{analyze_prime, intersect_periods, max_table_points, select_primes, PeriodCandidates, PrimePolicy};
use crate::poly::map::HomogeneousMap;
use crate::poly::parse::parse_map;
use crate::poly::point::RationalProjPoint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeChoice {
    Explicit(Vec<u64>),
    /// The given number of smallest primes of good reduction.
    Auto(usize),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub primes: PrimeChoice,
    /// Lift every period at this prime; by default each period picks the
    /// analyzed prime with the fewest singular seeds.
    pub lift_prime: Option<u64>,
    /// Replaces the computed height bound.
    pub height_override: Option<BigInt>,
    /// Accept a height override below the computed bound.
    pub allow_unsafe_height: bool,
    /// Candidate periods above this are not lifted; the result is then marked incomplete.
    pub max_candidate_period: Option<u64>,
    pub max_table_points: u64,
    pub branch_cap: usize,
    pub prime_policy: PrimePolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            primes: PrimeChoice::Auto(3),
            lift_prime: None,
            height_override: None,
            allow_unsafe_height: false,
            max_candidate_period: None,
            max_table_points: max_table_points(),
            branch_cap: DEFAULT_BRANCH_CAP,
            prime_policy: PrimePolicy::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicEntry {
    pub point: RationalProjPoint,
    pub period: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cycles: Vec<u64>,
    pub components: Vec<usize>,
    pub total: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultDocument {
    pub map: String,
    pub dimension: usize,
    pub degree: u32,
    pub primes: Vec<u64>,
    /// Primes of bad reduction passed over while choosing primes.
    pub bad_primes: Vec<u64>,
    pub height_bound: HeightBound,
    /// The bound actually used.
    #[serde(serialize_with = "ser_bigint")]
    pub height_cap: BigInt,
    pub lifting: Vec<LiftStep>,
    pub periods: PeriodCandidates,
    pub skipped_periods: Vec<u64>,
    /// False when periods were skipped or an unsafe height bound was used.
    pub complete: bool,
    pub periodic: Vec<PeriodicEntry>,
    pub graph: PreperiodicGraph,
    pub summary: Summary,
    /// Milliseconds per stage.
    pub timings: BTreeMap<String, f64>,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Primes to use and the bad primes skipped on the way.
pub fn choose_primes(f: &HomogeneousMap, cfg: &RunConfig) -> Result<(Vec<u64>, Vec<u64>)> {
    match &cfg.primes {
        PrimeChoice::Explicit(ps) => {
            if ps.is_empty() {
                return Err(Error::EmptyPrimeList);
            }
            let mut v = ps.clone();
            v.sort_unstable();
            v.dedup();
            Ok((v, Vec::new()))
        }
        PrimeChoice::Auto(k) => {
            let good = select_primes(f, *k, cfg.prime_policy)?;
            let top = *good.last().unwrap_or(&0);
            let bad = (cfg.prime_policy.min_prime..=top)
                .filter(|&p| crate::algebra::scalar::is_prime(p) && !good.contains(&p))
                .collect();
            Ok((good, bad))
        }
    }
}

/// The computed bound, or the override when it is acceptable.
pub fn effective_height_cap(computed: &HeightBound, cfg: &RunConfig) -> Result<BigInt> {
    match &cfg.height_override {
        None => Ok(computed.cap.clone()),
        Some(b) if b >= &computed.cap || cfg.allow_unsafe_height => Ok(b.clone()),
        Some(b) => Err(Error::UnsoundConfig(format!(
            "height bound {} is below the proven bound {}; pass the unsafe option to use it anyway",
            b, computed.cap
        ))),
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1000.0
}

pub fn periods_only(f: &HomogeneousMap, cfg: &RunConfig) -> Result<(Vec<u64>, Vec<u64>, PeriodCandidates)> {
    nullstellensatz_certificate(f)?;
    let (primes, bad) = choose_primes(f, cfg)?;
    let (cand, _) = intersect_periods(f, &primes, cfg.max_table_points)?;
    Ok((primes, bad, cand))
}

pub fn run_text(text: &str, cfg: &RunConfig) -> Result<ResultDocument> {
    run(&parse_map(text)?, cfg)
}

pub fn run(f: &HomogeneousMap, cfg: &RunConfig) -> Result<ResultDocument> {
    let mut timings = BTreeMap::new();
    // the certificate doubles as the morphism check, so it runs before prime selection
    let t = Instant::now();
    let cert = nullstellensatz_certificate(f)?;
    let bound = height_bound(f, &cert);
    let cap = effective_height_cap(&bound, cfg)?;
    timings.insert("height_bound".to_string(), ms(t));

    let t = Instant::now();
    let (primes, bad_primes) = choose_primes(f, cfg)?;
    timings.insert("prime_selection".to_string(), ms(t));

    let t = Instant::now();
    let (periods, data) = intersect_periods(f, &primes, cfg.max_table_points)?;
    timings.insert("local_cycles".to_string(), ms(t));

    let (candidates, skipped): (BTreeSet<u64>, Vec<u64>) = match cfg.max_candidate_period {
        None => (periods.intersection.clone(), Vec::new()),
        Some(c) => (
            periods.intersection.iter().copied().filter(|&n| n <= c).collect(),
            periods.intersection.iter().copied().filter(|&n| n > c).collect(),
        ),
    };
    let mut data = data;
    let plan = match cfg.lift_prime {
        Some(q) => {
            if !data.iter().any(|d| d.prime == q) {
                data.push(analyze_prime(f, q, cfg.max_table_points)?);
            }
            let precision = required_precision(&cap, q, f.dimension());
            candidates.iter().map(|&n| LiftStep { period: n, prime: q, precision }).collect()
        }
        None => plan_lifting(&candidates, &data, &cap, f.dimension()),
    };

    let t = Instant::now();
    let periodic = rational_periodic_points_planned(f, &plan, &data, &cap, cfg.branch_cap)?;
    timings.insert("lifting".to_string(), ms(t));

    let t = Instant::now();
    let graph = preperiodic_closure(f, &periodic)?;
    timings.insert("preimages".to_string(), ms(t));

    let summary = Summary { cycles: graph.cycle_lengths(), components: graph.component_sizes(), total: graph.len() };
    let complete = skipped.is_empty() && cap >= bound.cap;
    Ok(ResultDocument {
        map: f.render(),
        dimension: f.dimension(),
        degree: f.degree(),
        primes,
        bad_primes,
        height_bound: bound,
        height_cap: cap,
        lifting: plan,
        periods,
        skipped_periods: skipped,
        complete,
        periodic: periodic.points.iter().map(|(p, &n)| PeriodicEntry { point: p.clone(), period: n }).collect(),
        graph,
        summary,
        timings,
    })
}
