#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use preper::algebra::lll::{lll_reduce, squared_norm, LllParams};
use preper::algebra::{Matrix, Rational};
use preper::closure::PreperiodicGraph;
use preper::modp::{LocalCycle, OrbitGraphModP};
use preper::poly::reduction::{good_reduction_test, resultant_p1};
use preper::poly::{HomogeneousMap, MultiPoly, RationalProjPoint, DEFAULT_DEGREE_CAP};

pub fn q(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// `[F, G]` from coefficients `x^d, x^(d-1) y, ..., y^d` of `F` then `G`;
/// `None` unless it is a morphism of degree `d`.
pub fn p1_map(d: u32, coeffs: &[Rational]) -> Option<HomogeneousMap> {
    assert_eq!(coeffs.len(), 2 * (d as usize + 1));
    let form = |cs: &[Rational]| MultiPoly::from_terms(2, cs.iter().enumerate().map(|(i, c)| (vec![d - i as u32, i as u32], c.clone())));
    let f = HomogeneousMap::new(vec![form(&coeffs[..=d as usize]), form(&coeffs[d as usize + 1..])]).ok()?;
    (f.degree() == d && !resultant_p1(&f).ok()?.is_zero()).then_some(f)
}

/// `[a x^d + b z^d, c y^d + e z^d, g z^d]`, a morphism when `a c g != 0`.
pub fn p2_monomial_map(d: u32, [a, b, c, e, g]: [i64; 5]) -> Option<HomogeneousMap> {
    if a == 0 || c == 0 || g == 0 {
        return None;
    }
    let t = |x: u32, y: u32, z: u32, v: i64| (vec![x, y, z], q(v, 1));
    HomogeneousMap::new(vec![
        MultiPoly::from_terms(3, [t(d, 0, 0, a), t(0, 0, d, b)]),
        MultiPoly::from_terms(3, [t(0, d, 0, c), t(0, 0, d, e)]),
        MultiPoly::from_terms(3, [t(0, 0, d, g)]),
    ])
    .ok()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Cycles are disjoint and closed under the map, and every point drains into exactly one of them.
pub fn check_orbit_partition(g: &OrbitGraphModP, cycles: &[LocalCycle]) -> Result<(), String> {
    let total = g.indexer().total();
    let mut owner = vec![usize::MAX; total as usize];
    let mut accounted = 0;
    for (k, c) in cycles.iter().enumerate() {
        ensure!(c.members.len() as u64 == c.minimal_period, "cycle length {} != period {}", c.members.len(), c.minimal_period);
        for (i, &m) in c.members.iter().enumerate() {
            ensure!(owner[m as usize] == usize::MAX, "point {} on two cycles", m);
            owner[m as usize] = k;
            ensure!(g.image(m) == c.members[(i + 1) % c.members.len()], "cycle not closed at {}", m);
        }
        accounted += c.minimal_period + c.tail_points;
    }
    ensure!(accounted == total, "cycles and tails cover {} of {} points", accounted, total);
    for i in 0..total {
        let mut x = i;
        for _ in 0..total {
            if owner[x as usize] != usize::MAX {
                break;
            }
            x = g.image(x);
        }
        ensure!(owner[x as usize] != usize::MAX, "point {} reaches no cycle", i);
    }
    Ok(())
}

/// Nodes split into components, one cycle each, images stay inside the node set.
pub fn check_graph_partition(g: &PreperiodicGraph) -> Result<(), String> {
    let n = g.len();
    ensure!(g.components.iter().map(|c| c.size).sum::<usize>() == n, "component sizes do not sum to {}", n);
    let mut cycle_of = vec![None; n];
    for i in 0..n {
        let mut x = i;
        for _ in 0..=n {
            x = g.nodes[x].image;
        }
        // x is now on the cycle below i; label by its smallest node
        let mut y = g.nodes[x].image;
        let mut min = x;
        while y != x {
            min = min.min(y);
            y = g.nodes[y].image;
        }
        cycle_of[i] = Some(min);
        let mut z = g.nodes[i].image;
        let mut back = z == i;
        for _ in 0..n {
            z = g.nodes[z].image;
            back |= z == i;
        }
        ensure!((g.nodes[i].preperiod == 0) == back, "preperiod of {} disagrees with the graph", g.nodes[i].point);
    }
    let heads: BTreeSet<usize> = cycle_of.iter().map(|c| c.unwrap()).collect();
    ensure!(heads.len() == g.components.len(), "{} cycles but {} components", heads.len(), g.components.len());
    for c in &g.components {
        let Some(start) = g.index_of(&c.cycle_start) else { return Err(format!("{} is not a node", c.cycle_start)) };
        let size = cycle_of.iter().filter(|h| h.unwrap() == cycle_of[start].unwrap()).count();
        ensure!(size == c.size, "component of {} has {} nodes, recorded {}", c.cycle_start, size, c.size);
        ensure!(g.nodes[start].period == c.cycle_length, "cycle length of {}", c.cycle_start);
    }
    Ok(())
}

/// Some prime from `PRIMES` at or after `start` where `f` has good reduction.
pub fn good_prime(f: &HomogeneousMap, start: usize) -> Option<u64> {
    (0..PRIMES.len()).map(|i| PRIMES[(start + i) % PRIMES.len()]).find(|&p| good_reduction_test(f, p))
}

pub const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Reducing `f^n(P)` mod `p` agrees with iterating the reduced map on the reduced point.
pub fn reduction_commutes(f: &HomogeneousMap, p0: &RationalProjPoint, p: u64, n: usize) -> Result<(), String> {
    let global = f.iterate_point(p0, n).map_err(|e| e.to_string())?.last().unwrap().reduce(p);
    let mut local = p0.reduce(p);
    for _ in 0..n {
        local = f.evaluate_mod_p(&local).map_err(|e| e.to_string())?;
    }
    ensure!(global == local, "f^{}({}) mod {}: {} vs {}", n, p0, p, global, local);
    Ok(())
}

/// The Jacobian of `f^n` in the last chart, computed three ways: chain rule along
/// unscaled iterates, product of one-step Jacobians, and the symbolic iterate.
/// `None` when the orbit meets the chart boundary.
pub fn chain_rule_holds(f: &HomogeneousMap, p0: &RationalProjPoint, n: usize) -> Option<Result<(), String>> {
    let c = f.dimension();
    let orbit = f.iterate_point(p0, n).ok()?;
    if orbit.iter().any(|x| x.coords()[c].is_zero()) {
        return None;
    }
    let x: Vec<Rational> = p0.as_rationals();
    let xs: Vec<Rational> = x.iter().map(|v| v / &x[c]).collect();
    let (_, direct) = f.over(&Rational::zero()).iterate_jacobian(&xs, n, c).ok()?;
    let mut product = Matrix::identity(c, &Rational::one());
    for pt in &orbit[..n] {
        product = f.jacobian(c, &pt.as_rationals()).ok()?.mul(&product);
    }
    let symbolic = f.iterate_symbolic(n as u32, DEFAULT_DEGREE_CAP).ok()?.jacobian(c, &x).ok()?;
    Some((|| {
        ensure!(direct == product, "chain rule differs from step product at {} (n = {})", p0, n);
        ensure!(symbolic == product, "symbolic iterate differs at {} (n = {})", p0, n);
        Ok(())
    })())
}

/// LLL keeps the lattice (unimodular change of basis) and its first vector is
/// within `2^(n-1)` of the shortest, found by exhaustive search. `None` for singular input.
pub fn lll_holds(rows: &[Vec<i64>]) -> Option<Result<(), String>> {
    let n = rows.len();
    let basis: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let to_q = |b: &[Vec<BigInt>]| Matrix::from_rows(b.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect());
    let b = to_q(&basis);
    if b.determinant().is_zero() {
        return None;
    }
    Some((|| {
        let red = lll_reduce(&basis, &LllParams::default()).map_err(|e| e.to_string())?;
        let r = to_q(&red);
        // R = T B with T integral and unimodular
        let t = r.mul(&b.inverse().unwrap());
        ensure!((0..n).all(|i| (0..n).all(|j| t.get(i, j).is_integer())), "change of basis is not integral");
        ensure!(t.determinant().abs() == Rational::one(), "change of basis is not unimodular");
        // v = c R with |v| <= |b_1| forces |c_i| <= |b_1| * |column i of R^-1|
        let b1 = squared_norm(&red[0]);
        let rinv = r.inverse().unwrap();
        let bounds: Vec<i64> = (0..n)
            .map(|i| {
                let col: Rational = (0..n).map(|k| rinv.get(k, i) * rinv.get(k, i)).sum();
                let sq = col * Rational::from_integer(b1.clone());
                let mut c = 0i64;
                while Rational::from_integer(BigInt::from((c + 1) * (c + 1))) <= sq {
                    c += 1;
                }
                c
            })
            .collect();
        let mut lambda = b1.clone();
        let mut c: Vec<i64> = bounds.iter().map(|&x| -x).collect();
        'outer: loop {
            if c.iter().any(|&x| x != 0) {
                let v: Vec<BigInt> = (0..n).map(|j| (0..n).map(|i| BigInt::from(c[i]) * &red[i][j]).sum()).collect();
                lambda = lambda.min(squared_norm(&v));
            }
            for i in 0..n {
                c[i] += 1;
                if c[i] <= bounds[i] {
                    continue 'outer;
                }
                c[i] = -bounds[i];
            }
            break;
        }
        ensure!(b1 <= (BigInt::one() << (n - 1)) * &lambda, "|b1|^2 = {} but shortest is {}", b1, lambda);
        Ok(())
    })())
}
