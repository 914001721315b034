//! p-adic lifting of periodic points and their reconstruction by LLL.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::lll::{lll_reduce, primitive, squared_norm, LllParams};
use crate::algebra::matrix::Matrix;
use crate::algebra::scalar::{ModInt, Scalar};
use crate::error::{Error, Result};
use crate::poly::map::{HomogeneousMap, MapOver};
use crate::poly::point::{ProjPointModP, RationalProjPoint};

pub const DEFAULT_BRANCH_CAP: usize = 1_000_000;

/// Homogeneous coordinates modulo `p^precision`, with `entries[chart] = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueVector {
    pub entries: Vec<BigInt>,
    pub prime: u64,
    pub precision: u32,
    pub chart: usize,
}

impl ResidueVector {
    pub fn from_mod_p(pt: &ProjPointModP) -> Self {
        ResidueVector { entries: pt.to_bigints(), prime: pt.prime(), precision: 1, chart: pt.chart() }
    }

    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.prime).pow(self.precision)
    }

    fn affine(&self) -> Vec<BigInt> {
        self.entries.iter().enumerate().filter(|(i, _)| *i != self.chart).map(|(_, v)| v.clone()).collect()
    }

    fn with_affine(&self, x: &[BigInt], precision: u32) -> Self {
        let m = BigInt::from(self.prime).pow(precision);
        let mut entries = Vec::with_capacity(x.len() + 1);
        let mut it = x.iter();
        for i in 0..=x.len() {
            entries.push(if i == self.chart { BigInt::one() } else { it.next().unwrap().mod_floor(&m) });
        }
        ResidueVector { entries, prime: self.prime, precision, chart: self.chart }
    }
}

struct Lifter<'a> {
    f: &'a HomogeneousMap,
    n: usize,
    chart: usize,
}

impl Lifter<'_> {
    fn ring(&self, m: &Arc<BigInt>) -> MapOver<ModInt> {
        self.f.over(&ModInt::new(BigInt::one(), m.clone()))
    }

    fn hom(&self, x: &[BigInt], m: &Arc<BigInt>) -> Vec<ModInt> {
        let mut it = x.iter();
        (0..=x.len())
            .map(|i| if i == self.chart { ModInt::new(BigInt::one(), m.clone()) } else { ModInt::new(it.next().unwrap().clone(), m.clone()) })
            .collect()
    }

    /// `F^n(X) - X` modulo `m`, `None` if the image leaves the chart.
    fn residual(&self, ring: &MapOver<ModInt>, x: &[BigInt], m: &Arc<BigInt>) -> Option<Vec<BigInt>> {
        let mut v = self.hom(x, m);
        for _ in 0..self.n {
            v = ring.eval(&v);
        }
        let inv = v[self.chart].inv()?;
        let mut out = Vec::with_capacity(x.len());
        let mut k = 0;
        for (i, vi) in v.iter().enumerate() {
            if i == self.chart {
                continue;
            }
            out.push((vi.mul(&inv).value() - &x[k]).mod_floor(m));
            k += 1;
        }
        Some(out)
    }

    /// Newton step to modulus `m`: `X - (dF^n - I)^{-1} (F^n(X) - X)`.
    fn newton(&self, x: &[BigInt], m: &Arc<BigInt>) -> Result<Option<Vec<BigInt>>> {
        let ring = self.ring(m);
        let hx = self.hom(x, m);
        let (img, jac) = ring.iterate_jacobian(&hx, self.n, self.chart)?;
        let k = x.len();
        let one = ModInt::new(BigInt::one(), m.clone());
        let a = jac.sub(&Matrix::identity(k, &one));
        let Some(ainv) = a.inverse() else {
            return Ok(None);
        };
        let g: Vec<ModInt> = img.iter().zip(x).map(|(y, xi)| y.sub(&ModInt::new(xi.clone(), m.clone()))).collect();
        let delta = ainv.mul_vec(&g);
        Ok(Some(x.iter().zip(&delta).map(|(xi, di)| (xi - di.value()).mod_floor(m)).collect()))
    }
}

/// Whether `d(f^n) - I` is invertible modulo `p` at `approx`, so that its lift is unique.
pub fn newton_applies(f: &HomogeneousMap, n: usize, approx: &ResidueVector) -> Result<bool> {
    let lifter = Lifter { f, n, chart: approx.chart };
    let p = BigInt::from(approx.prime);
    let mp = Arc::new(p.clone());
    let xp: Vec<BigInt> = approx.affine().iter().map(|v| v.mod_floor(&p)).collect();
    let (_, jp) = lifter.ring(&mp).iterate_jacobian(&lifter.hom(&xp, &mp), n, approx.chart)?;
    let one_p = ModInt::new(BigInt::one(), mp.clone());
    Ok(jp.sub(&Matrix::identity(xp.len(), &one_p)).inverse().is_some())
}

/// Lifts a solution of `f^n(X) = X` modulo `p^l` to precision `target`.
///
/// With `d(f^n) - I` invertible modulo `p` the lift is unique and found by
/// Newton doubling. Otherwise every one of the `p^N` lifts is tried one digit
/// at a time, which may yield several candidates. An approximation that is not
/// a solution to begin with yields an empty list.
pub fn hensel_lift(f: &HomogeneousMap, n: usize, approx: &ResidueVector, target: u32, branch_cap: usize) -> Result<Vec<ResidueVector>> {
    let lifter = Lifter { f, n, chart: approx.chart };
    let p = BigInt::from(approx.prime);
    let m0 = Arc::new(approx.modulus());
    let x0 = approx.affine();
    match lifter.residual(&lifter.ring(&m0), &x0, &m0) {
        Some(r) if r.iter().all(|v| v.is_zero()) => {}
        _ => return Ok(Vec::new()),
    }
    if approx.precision >= target {
        return Ok(vec![approx.clone()]);
    }
    if newton_applies(f, n, approx)? {
        let mut x = x0;
        let mut prec = approx.precision;
        while prec < target {
            prec = (prec * 2).min(target);
            let m = Arc::new(p.pow(prec));
            x = lifter.newton(&x, &m)?.expect("invertible modulo p stays invertible");
        }
        return Ok(vec![approx.with_affine(&x, prec)]);
    }
    // Past the first digit F^n(x + p^l t) = F^n(x) + p^l J t mod p^(l+1), with
    // J = d(f^n) at the seed, so the admissible digit vectors t form the
    // solution set of (J - I) t = -r / p^l over F_p.
    let mp = Arc::new(p.clone());
    let xp: Vec<BigInt> = x0.iter().map(|v| v.mod_floor(&p)).collect();
    let (_, jp) = lifter.ring(&mp).iterate_jacobian(&lifter.hom(&xp, &mp), n, approx.chart)?;
    let a = jp.sub(&Matrix::identity(xp.len(), &ModInt::new(BigInt::one(), mp.clone())));
    let kernel = a.kernel();
    let mut cands = vec![x0];
    let mut prec = approx.precision;
    while prec < target && !cands.is_empty() {
        let step = p.pow(prec);
        prec += 1;
        let m = Arc::new(p.pow(prec));
        let ring = lifter.ring(&m);
        let mut next = Vec::new();
        for x in &cands {
            let Some(r) = lifter.residual(&ring, x, &m) else { continue };
            let b: Vec<ModInt> = r.iter().map(|ri| ModInt::new(-(ri / &step), mp.clone())).collect();
            let Some(t0) = a.solve(&b) else { continue };
            let mut coeffs = vec![0u64; kernel.len()];
            loop {
                let mut t: Vec<BigInt> = t0.iter().map(|v| v.value().clone()).collect();
                for (c, kv) in coeffs.iter().zip(&kernel) {
                    for (ti, ki) in t.iter_mut().zip(kv) {
                        *ti += ki.value() * BigInt::from(*c);
                    }
                }
                next.push(x.iter().zip(&t).map(|(xi, ti)| xi + &step * ti.mod_floor(&p)).collect::<Vec<BigInt>>());
                if next.len() > branch_cap {
                    return Err(Error::Resource(format!(
                        "exhaustive lifting at p = {} exceeded {} candidates; choose another lifting prime",
                        approx.prime, branch_cap
                    )));
                }
                if !advance(&mut coeffs, approx.prime) {
                    break;
                }
            }
        }
        cands = next;
    }
    Ok(cands.iter().map(|x| approx.with_affine(x, prec)).collect())
}

/// Next vector in base-`p` counting order; false after the last one.
fn advance(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// The point of height at most `b` congruent to `approx`, if the shortest
/// vector of the lattice spanned by `approx` and `p^l e_i` (`i != chart`) is one.
pub fn lll_reconstruct(approx: &ResidueVector, b: &BigInt) -> Result<Option<RationalProjPoint>> {
    let m = approx.modulus();
    let k = approx.entries.len();
    let mut basis = vec![approx.entries.clone()];
    for i in 0..k {
        if i != approx.chart {
            let mut e = vec![BigInt::zero(); k];
            e[i] = m.clone();
            basis.push(e);
        }
    }
    let reduced = lll_reduce(&basis, &LllParams::default())?;
    let shortest = reduced.iter().min_by_key(|v| squared_norm(v)).unwrap();
    let v = primitive(shortest);
    let pt = RationalProjPoint::new(v)?;
    if &pt.height() > b {
        return Ok(None);
    }
    Ok(Some(pt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_map;

    fn rv(entries: &[i64], p: u64, precision: u32, chart: usize) -> ResidueVector {
        ResidueVector { entries: entries.iter().map(|&v| BigInt::from(v)).collect(), prime: p, precision, chart }
    }

    #[test]
    fn lifts_half_mod_nine() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let out = hensel_lift(&f, 2, &rv(&[2, 1], 3, 1, 1), 2, DEFAULT_BRANCH_CAP).unwrap();
        assert_eq!(out, vec![rv(&[5, 1], 3, 2, 1)]);
        let pt = lll_reconstruct(&out[0], &BigInt::from(4)).unwrap().unwrap();
        assert_eq!(pt.to_string(), "(1:2)");
    }

    #[test]
    fn exact_solution_stays_put() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let out = hensel_lift(&f, 1, &rv(&[1, 0], 3, 1, 0), 8, DEFAULT_BRANCH_CAP).unwrap();
        assert_eq!(out, vec![rv(&[1, 0], 3, 8, 0)]);
        assert_eq!(lll_reconstruct(&out[0], &BigInt::one()).unwrap().unwrap().to_string(), "(1:0)");
    }

    #[test]
    fn non_solution_gives_nothing() {
        let f = parse_map("z^2 - 7/4").unwrap();
        assert!(hensel_lift(&f, 1, &rv(&[1, 1], 5, 1, 1), 4, DEFAULT_BRANCH_CAP).unwrap().is_empty());
    }

    #[test]
    fn parabolic_fixed_point_takes_exhaustive_branch() {
        // fixed point 0 with multiplier 1
        let f = parse_map("(2z^2 + z)/(9z^2 + 2z + 1)").unwrap();
        let out = hensel_lift(&f, 1, &rv(&[0, 1], 5, 1, 1), 4, DEFAULT_BRANCH_CAP).unwrap();
        assert!(out.len() > 1);
        assert!(out.contains(&rv(&[0, 1], 5, 4, 1)));
        let found: Vec<String> =
            out.iter().filter_map(|r| lll_reconstruct(r, &BigInt::from(3)).unwrap()).filter(|p| f.evaluate(p).unwrap() == *p).map(|p| p.to_string()).collect();
        assert!(found.contains(&"(0:1)".to_string()));
    }

    /// Tries every digit vector at every step.
    fn brute_lifts(f: &HomogeneousMap, n: usize, approx: &ResidueVector, target: u32) -> Vec<ResidueVector> {
        let lifter = Lifter { f, n, chart: approx.chart };
        let p = BigInt::from(approx.prime);
        let mut cands = vec![approx.affine()];
        for prec in approx.precision..target {
            let step = p.pow(prec);
            let m = Arc::new(p.pow(prec + 1));
            let ring = lifter.ring(&m);
            let mut next = Vec::new();
            for x in &cands {
                let mut digits = vec![0u64; x.len()];
                loop {
                    let y: Vec<BigInt> = x.iter().zip(&digits).map(|(xi, t)| xi + &step * BigInt::from(*t)).collect();
                    if lifter.residual(&ring, &y, &m).is_some_and(|r| r.iter().all(|v| v.is_zero())) {
                        next.push(y);
                    }
                    if !advance(&mut digits, approx.prime) {
                        break;
                    }
                }
            }
            cands = next;
        }
        let mut out: Vec<ResidueVector> = cands.iter().map(|x| approx.with_affine(x, target)).collect();
        out.sort_by(|a, b| a.entries.cmp(&b.entries));
        out
    }

    #[test]
    fn linearized_branch_matches_brute_force() {
        use crate::modp::periods::analyze_prime;
        let mut singular = 0;
        for (m, p) in [("(2z^2 + z)/(9z^2 + 2z + 1)", 5u64), ("[2*x^3 - 50*x*z^2 + 24*z^3, 5*y^3 - 53*y*z^2 + 24*z^3, 24*z^3]", 7), ("[x^2 - 21/16*z^2, y^2 - 2*z^2, z^2]", 5)] {
            let f = parse_map(m).unwrap();
            let data = analyze_prime(&f, p, 1 << 20).unwrap();
            for c in &data.cycles {
                let n = c.minimal_period as usize;
                let approx = ResidueVector::from_mod_p(&c.representative);
                if !newton_applies(&f, n, &approx).unwrap() {
                    singular += 1;
                }
                for target in 2..4 {
                    let mut fast = hensel_lift(&f, n, &approx, target, DEFAULT_BRANCH_CAP).unwrap();
                    fast.sort_by(|a, b| a.entries.cmp(&b.entries));
                    assert_eq!(fast, brute_lifts(&f, n, &approx, target), "{} at {} to {}", m, c.representative, target);
                }
            }
        }
        assert!(singular >= 3);
    }

    #[test]
    fn height_filter() {
        // 1/2 mod 9 cannot come from a point of height <= 1
        assert!(lll_reconstruct(&rv(&[5, 1], 3, 2, 1), &BigInt::one()).unwrap().is_none());
    }
}
