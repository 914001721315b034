//! Exhaustive search for preperiodic points of bounded height.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::Result;
use crate::poly::map::HomogeneousMap;
use crate::poly::point::RationalProjPoint;

/// `(preperiod, period)`
pub type Portrait = (u64, u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pre(u64, u64),
    Escapes,
}

#[derive(PartialEq, Eq)]
enum Outcome {
    Labelled,
    Escapes,
}

/// All normalized points of P^N(Q) with `H(P) <= h`, in no particular order.
pub fn points_up_to_height(n: usize, h: i64) -> Vec<RationalProjPoint> {
    raw_points_up_to_height(n, h).map(|v| RationalProjPoint::new(v.into_iter().map(BigInt::from).collect()).unwrap()).collect()
}

/// Coordinate vectors of the points above: last nonzero entry positive, gcd 1.
fn raw_points_up_to_height(n: usize, h: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut v = vec![-h; n + 1];
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let current = v.clone();
        let mut j = 0;
        while j <= n {
            v[j] += 1;
            if v[j] <= h {
                break;
            }
            v[j] = -h;
            j += 1;
        }
        done = j > n;
        if let Some(last) = current.iter().rposition(|&c| c != 0) {
            if current[last] > 0 && current.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1 {
                return Some(current);
            }
        }
    })
}

/// Machine-integer evaluation of `f`, when its coefficients fit.
struct SmallEval {
    terms: Vec<Vec<(Vec<u32>, i128)>>,
}

impl SmallEval {
    fn new(f: &HomogeneousMap) -> Option<Self> {
        let terms = f
            .integer_terms()
            .iter()
            .map(|t| t.iter().map(|(e, c)| Some((e.clone(), c.to_i128()?))).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(SmallEval { terms })
    }

    /// `None` on overflow.
    fn eval(&self, x: &[i64]) -> Option<Vec<i128>> {
        self.terms
            .iter()
            .map(|t| {
                t.iter().try_fold(0i128, |acc, (e, c)| {
                    let mut m = *c;
                    for (xi, &k) in x.iter().zip(e) {
                        for _ in 0..k {
                            m = m.checked_mul(*xi as i128)?;
                        }
                    }
                    acc.checked_add(m)
                })
            })
            .collect()
    }

    /// True when the image of `x` is known to have height above `cap`.
    fn escapes(&self, x: &[i64], cap: i64) -> bool {
        let Some(v) = self.eval(x) else { return false };
        let g = v.iter().fold(0i128, |g, c| g.gcd(c));
        g != 0 && v.iter().any(|c| (c / g).abs() > cap as i128)
    }
}

/// Preperiodic points of height at most `cap` whose forward orbits stay at
/// height at most `cap`, with their portraits. When `cap` is at least the
/// height bound of `f` this is exactly the set of rational preperiodic points
/// of height at most `cap`.
pub fn brute_force_preperiodic_oracle(f: &HomogeneousMap, cap: i64) -> Result<BTreeMap<RationalProjPoint, Portrait>> {
    let small = SmallEval::new(f);
    let pts: Vec<RationalProjPoint> = raw_points_up_to_height(f.dimension(), cap)
        .filter(|v| !small.as_ref().is_some_and(|s| s.escapes(v, cap)))
        .map(|v| RationalProjPoint::new(v.into_iter().map(BigInt::from).collect()).unwrap())
        .collect();
    let cap_big = BigInt::from(cap);
    // an orbit confined to the box repeats within this many steps
    let step_cap = pts.len() + 2;
    let mut status: HashMap<RationalProjPoint, Status> = HashMap::with_capacity(pts.len());
    for p in &pts {
        if status.contains_key(p) {
            continue;
        }
        let mut path: Vec<RationalProjPoint> = vec![p.clone()];
        let mut index: HashMap<RationalProjPoint, usize> = HashMap::from([(p.clone(), 0)]);
        let outcome = loop {
            if path.len() > step_cap {
                break Outcome::Escapes;
            }
            let q = f.evaluate(path.last().unwrap())?;
            if let Some(s) = status.get(&q) {
                break match *s {
                    Status::Escapes => Outcome::Escapes,
                    Status::Pre(m, n) => {
                        let k = path.len() as u64;
                        for (i, x) in path.iter().enumerate() {
                            status.insert(x.clone(), Status::Pre(m + k - i as u64, n));
                        }
                        Outcome::Labelled
                    }
                };
            }
            if let Some(&j) = index.get(&q) {
                let n = (path.len() - j) as u64;
                for (i, x) in path.iter().enumerate() {
                    let m = j.saturating_sub(i) as u64;
                    status.insert(x.clone(), Status::Pre(m, n));
                }
                break Outcome::Labelled;
            }
            if q.coords().iter().any(|c| c.abs() > cap_big) {
                break Outcome::Escapes;
            }
            index.insert(q.clone(), path.len());
            path.push(q);
        };
        if outcome == Outcome::Escapes {
            for x in path {
                status.insert(x, Status::Escapes);
            }
        }
    }
    let mut out = BTreeMap::new();
    for (p, s) in status {
        if let Status::Pre(m, n) = s {
            if !p.coords().iter().any(|c| c.abs() > cap_big) {
                out.insert(p, (m, n));
            }
        }
    }
    Ok(out)
}

/// Points with preperiod 0.
pub fn periodic_part(oracle: &BTreeMap<RationalProjPoint, Portrait>) -> BTreeMap<RationalProjPoint, u64> {
    oracle.iter().filter(|(_, (m, _))| *m == 0).map(|(p, (_, n))| (p.clone(), *n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_map;
    use num_traits::Zero;

    fn names(m: &BTreeMap<RationalProjPoint, Portrait>) -> Vec<String> {
        m.keys().map(|p| p.to_string()).collect()
    }

    #[test]
    fn worked_example() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let o = brute_force_preperiodic_oracle(&f, 5).unwrap();
        assert_eq!(names(&o), ["(1:0)", "(-1:2)", "(1:2)", "(-3:2)", "(3:2)"]);
        assert_eq!(o[&RationalProjPoint::from_ints(&[1, 2])], (0, 2));
        assert_eq!(o[&RationalProjPoint::from_ints(&[3, 2])], (1, 2));
    }

    #[test]
    fn shifted_square() {
        let f = parse_map("z^2 - 1").unwrap();
        let o = brute_force_preperiodic_oracle(&f, 2).unwrap();
        assert_eq!(o.len(), 4);
        assert_eq!(o[&RationalProjPoint::from_ints(&[0, 1])], (0, 2));
        assert_eq!(o[&RationalProjPoint::from_ints(&[1, 1])], (1, 2));
    }

    #[test]
    fn squaring() {
        let f = parse_map("z^2").unwrap();
        let o = brute_force_preperiodic_oracle(&f, 1).unwrap();
        assert_eq!(names(&o), ["(-1:1)", "(0:1)", "(1:0)", "(1:1)"]);
        assert_eq!(o[&RationalProjPoint::from_ints(&[-1, 1])], (1, 1));
    }

    #[test]
    fn enumeration_counts() {
        // P^1 points of height <= 1: (1:0), (0:1), (1:1), (-1:1)
        assert_eq!(points_up_to_height(1, 1).len(), 4);
        // P^2 points of height <= 1: (3^3 - 1) / 2
        assert_eq!(points_up_to_height(2, 1).len(), 13);
        assert!(points_up_to_height(1, 3).iter().all(|p| !p.coords().iter().all(|c| c.is_zero())));
    }
}
