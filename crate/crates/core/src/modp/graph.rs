//! The functional graph of a reduced map on P^N(F_p).

use std::sync::atomic::{AtomicU64, Ordering};

use super::indexer::PointIndexer;
use crate::algebra::scalar::Fp;
use crate::error::{Error, Result};
use crate::poly::map::HomogeneousMap;
use crate::poly::point::ProjPointModP;

pub const DEFAULT_MAX_TABLE_POINTS: u64 = 200_000_000;
pub const MAX_TABLE_POINTS_ENV: &str = "PREPER_MAX_TABLE_POINTS";

/// Table size guard, overridable through `PREPER_MAX_TABLE_POINTS`.
pub fn max_table_points() -> u64 {
    std::env::var(MAX_TABLE_POINTS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_TABLE_POINTS)
}

/// Evaluates `f̄` on raw normalized coordinates with machine arithmetic.
#[derive(Clone, Debug)]
pub struct ModPEvaluator {
    p: u64,
    degree: usize,
    terms: Vec<Vec<(Vec<u32>, u64)>>,
    inverses: Vec<u64>,
    evaluations: std::sync::Arc<AtomicU64>,
}

impl ModPEvaluator {
    pub fn new(f: &HomogeneousMap, p: u64) -> Self {
        let terms = f
            .integer_terms()
            .iter()
            .map(|t| t.iter().map(|(e, c)| (e.clone(), Fp::from_bigint(c, p).value())).filter(|(_, c)| *c != 0).collect())
            .collect();
        let inverses = if p <= 1 << 20 {
            let mut inv = vec![0u64; p as usize];
            if p > 1 {
                inv[1] = 1;
            }
            for a in 2..p {
                inv[a as usize] = (p - (p / a) * inv[(p % a) as usize] % p) % p;
            }
            inv
        } else {
            Vec::new()
        };
        ModPEvaluator { p, degree: f.degree() as usize, terms, inverses, evaluations: Default::default() }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    fn inv(&self, a: u64) -> u64 {
        if !self.inverses.is_empty() {
            return self.inverses[a as usize];
        }
        crate::algebra::scalar::Scalar::inv(&Fp::from_u64(a, self.p)).unwrap().value()
    }

    /// Normalized image, or `None` when every coordinate vanishes.
    pub fn eval(&self, x: &[u64]) -> Option<Vec<u64>> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let p = self.p as u128;
        let pw: Vec<Vec<u128>> = x
            .iter()
            .map(|&xi| {
                let mut v = vec![1u128];
                for k in 1..=self.degree {
                    v.push(v[k - 1] * xi as u128 % p);
                }
                v
            })
            .collect();
        let mut out: Vec<u64> = self
            .terms
            .iter()
            .map(|terms| {
                let mut acc = 0u128;
                for (e, c) in terms {
                    let mut t = *c as u128;
                    for (i, &k) in e.iter().enumerate() {
                        if k > 0 {
                            t = t * pw[i][k as usize] % p;
                        }
                    }
                    acc += t;
                    if acc >= p << 64 {
                        acc %= p;
                    }
                }
                (acc % p) as u64
            })
            .collect();
        let last = out.iter().rposition(|&c| c != 0)?;
        let inv = self.inv(out[last]) as u128;
        for c in &mut out {
            *c = (*c as u128 * inv % p) as u64;
        }
        Some(out)
    }
}

/// `next[i]` is the index of `f̄(point i)`.
#[derive(Clone, Debug)]
pub struct OrbitGraphModP {
    indexer: PointIndexer,
    next: Vec<u32>,
    evaluations: u64,
}

impl OrbitGraphModP {
    pub fn indexer(&self) -> &PointIndexer {
        &self.indexer
    }

    pub fn next(&self) -> &[u32] {
        &self.next
    }

    /// Number of map evaluations performed while building the table.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn image(&self, i: u64) -> u64 {
        self.next[i as usize] as u64
    }
}

/// Builds the full table of forward images, evaluating each point once.
pub fn build_orbit_graph(f: &HomogeneousMap, p: u64, max_points: u64) -> Result<OrbitGraphModP> {
    let indexer = PointIndexer::new(f.dimension(), p)?;
    let total = indexer.total();
    if total > max_points || total > u32::MAX as u64 {
        return Err(Error::Resource(format!(
            "P^{} over F_{} has {} points, above the table limit {}; use smaller primes or raise {}",
            f.dimension(),
            p,
            total,
            max_points,
            MAX_TABLE_POINTS_ENV
        )));
    }
    let ev = ModPEvaluator::new(f, p);
    let mut next = Vec::with_capacity(total as usize);
    let n = f.dimension();
    // walk points in index order without recomputing coordinates from scratch
    let mut coords = vec![0u64; n + 1];
    for k in (0..=n).rev() {
        coords.iter_mut().for_each(|c| *c = 0);
        coords[k] = 1;
        let count = indexer_group_size(p, k);
        for _ in 0..count {
            let img = ev.eval(&coords).ok_or_else(|| {
                Error::IndeterminatePoint(format!("{} mod {}", ProjPointModP::from_normalized(coords.clone(), p), p))
            })?;
            next.push(indexer.index_of(&img) as u32);
            // increment the base-p counter x_0 .. x_{k-1}
            for j in (0..k).rev() {
                coords[j] += 1;
                if coords[j] < p {
                    break;
                }
                coords[j] = 0;
            }
        }
    }
    Ok(OrbitGraphModP { indexer, next, evaluations: ev.evaluations() })
}

fn indexer_group_size(p: u64, k: usize) -> u64 {
    p.pow(k as u32)
}

/// A cycle of the reduced map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCycle {
    /// Point of smallest index on the cycle.
    pub representative: ProjPointModP,
    pub minimal_period: u64,
    /// Strictly preperiodic points draining into the cycle.
    pub tail_points: u64,
    /// Indices along the cycle starting at the representative.
    pub members: Vec<u64>,
}

/// All cycles, ordered by smallest point index on the cycle.
pub fn find_cycles(g: &OrbitGraphModP) -> Vec<LocalCycle> {
    let total = g.next.len();
    const UNSEEN: u32 = u32::MAX;
    const ACTIVE: u32 = u32::MAX - 1;
    // component id per point
    let mut comp = vec![UNSEEN; total];
    let mut cycles: Vec<(Vec<u64>, u64)> = Vec::new();
    let mut path = Vec::new();
    for start in 0..total {
        if comp[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut i = start;
        while comp[i] == UNSEEN {
            comp[i] = ACTIVE;
            path.push(i);
            i = g.next[i] as usize;
        }
        let id = if comp[i] == ACTIVE {
            // new cycle beginning at i
            let pos = path.iter().position(|&x| x == i).unwrap();
            let members: Vec<u64> = path[pos..].iter().map(|&x| x as u64).collect();
            let id = cycles.len() as u32;
            cycles.push((members, 0));
            id
        } else {
            comp[i]
        };
        for &x in &path {
            comp[x] = id;
        }
    }
    for &c in &comp {
        cycles[c as usize].1 += 1;
    }
    let mut out: Vec<LocalCycle> = cycles
        .into_iter()
        .map(|(members, size)| {
            let m = members.len();
            let start = (0..m).min_by_key(|&k| members[k]).unwrap();
            let rotated: Vec<u64> = (0..m).map(|k| members[(start + k) % m]).collect();
            LocalCycle {
                representative: g.indexer.point_of(rotated[0]),
                minimal_period: m as u64,
                tail_points: size - m as u64,
                members: rotated,
            }
        })
        .collect();
    out.sort_by_key(|c| c.members[0]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_map;

    fn lengths(f: &str, p: u64) -> Vec<u64> {
        let g = build_orbit_graph(&parse_map(f).unwrap(), p, DEFAULT_MAX_TABLE_POINTS).unwrap();
        let mut v: Vec<u64> = find_cycles(&g).iter().map(|c| c.minimal_period).collect();
        v.sort();
        v
    }

    #[test]
    fn worked_example_mod_3() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let g = build_orbit_graph(&f, 3, DEFAULT_MAX_TABLE_POINTS).unwrap();
        assert_eq!(g.evaluations(), 4);
        let ix = g.indexer();
        let inf = ix.index_of(&[1, 0]);
        let zero = ix.index_of(&[0, 1]);
        assert_eq!(g.image(inf), inf);
        assert_eq!(g.image(g.image(zero)), zero);
        assert_ne!(g.image(zero), zero);
        assert_eq!(lengths("z^2 - 7/4", 3), vec![1, 2]);
    }

    #[test]
    fn worked_example_mod_5_and_7() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let g = build_orbit_graph(&f, 5, DEFAULT_MAX_TABLE_POINTS).unwrap();
        let one = g.indexer().index_of(&[1, 1]);
        assert_eq!(g.image(g.image(one)), one);
        assert_ne!(g.image(one), one);
        assert_eq!(lengths("z^2 - 7/4", 7), vec![1, 1, 1, 2]);
    }

    #[test]
    fn squaring_fixes_zero_and_infinity() {
        let g = build_orbit_graph(&parse_map("z^2").unwrap(), 11, DEFAULT_MAX_TABLE_POINTS).unwrap();
        let ix = g.indexer();
        assert_eq!(g.image(ix.index_of(&[1, 0])), ix.index_of(&[1, 0]));
        assert_eq!(g.image(ix.index_of(&[0, 1])), ix.index_of(&[0, 1]));
    }

    #[test]
    fn powers_mod_3() {
        // x -> x^d on F_3: 0, 1, inf fixed; 2 fixed for odd d, maps to 1 for even d
        assert_eq!(lengths("z^3", 3), vec![1, 1, 1, 1]);
        assert_eq!(lengths("z^2", 3), vec![1, 1, 1]);
    }

    #[test]
    fn memory_guard() {
        let f = parse_map("z^2").unwrap();
        assert!(matches!(build_orbit_graph(&f, 101, 50), Err(Error::Resource(_))));
    }

    #[test]
    fn bad_reduction_is_reported() {
        let f = parse_map("z^2 - 7/4").unwrap();
        assert!(matches!(build_orbit_graph(&f, 2, DEFAULT_MAX_TABLE_POINTS), Err(Error::IndeterminatePoint(_))));
    }
}
