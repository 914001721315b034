//! Dynatomic and generalized dynatomic polynomials of maps of P^1.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::scalar::Rational;
use crate::error::{Error, Result};
use crate::poly::map::{HomogeneousMap, DEFAULT_DEGREE_CAP};
use crate::poly::multipoly::MultiPoly;
use crate::poly::point::RationalProjPoint;
use crate::poly::univariate::{rational_roots, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DynatomicKind {
    Phi,
    PhiStar,
}

/// A binary form in `(x, y)` with content 1 and positive lex-leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynatomicCycleP1 {
    pub kind: DynatomicKind,
    pub m: u32,
    pub n: u32,
    pub poly: MultiPoly<Rational>,
}

impl DynatomicCycleP1 {
    pub fn degree(&self) -> u32 {
        self.poly.homogeneous_degree().unwrap_or(0)
    }

    pub fn render(&self) -> String {
        self.poly.render(&["x", "y"])
    }

    /// The form at `y = 1`, in the variable `z`.
    pub fn render_affine(&self) -> String {
        affine(&self.poly).render(&["z"])
    }

    /// Rational roots in P^1 with their multiplicities.
    pub fn rational_roots(&self) -> Result<BTreeMap<RationalProjPoint, u32>> {
        root_multiplicities(&self.poly)
    }
}

fn affine(p: &MultiPoly<Rational>) -> MultiPoly<Rational> {
    MultiPoly::from_terms(1, p.terms().map(|(e, c)| (vec![e[0]], c.clone())))
}

fn normalize(p: &MultiPoly<Rational>) -> MultiPoly<Rational> {
    p.primitive_part().0
}

/// `(F_k, G_k)` for `k = 0..=top`, with `F_0 = x`, `G_0 = y`.
pub fn iterate_pairs(f: &HomogeneousMap, top: u32) -> Result<Vec<(MultiPoly<Rational>, MultiPoly<Rational>)>> {
    if f.dimension() != 1 {
        return Err(Error::Dimension { expected: 1, got: f.dimension() });
    }
    let degree = (f.degree() as u64).checked_pow(top).unwrap_or(u64::MAX);
    if degree > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCap { degree, cap: DEFAULT_DEGREE_CAP });
    }
    let one = Rational::one();
    let mut out = vec![(MultiPoly::var(2, 0, one.clone()), MultiPoly::var(2, 1, one))];
    for _ in 0..top {
        let (fk, gk) = out.last().unwrap();
        let subs = [fk.clone(), gk.clone()];
        let (nf, s) = f.coords()[0].substitute(&subs).primitive_part();
        // the same scalar on both coordinates keeps the pair a representative of f^k
        let ng = f.coords()[1].substitute(&subs).scale(&s.recip());
        out.push((nf, ng));
    }
    Ok(out)
}

/// `Φ_{m,n} = G_m F_{n+m} - F_m G_{n+m}`, not normalized.
fn phi_raw(pairs: &[(MultiPoly<Rational>, MultiPoly<Rational>)], m: u32, n: u32) -> MultiPoly<Rational> {
    let (fm, gm) = &pairs[m as usize];
    let (fnm, gnm) = &pairs[(n + m) as usize];
    gm.mul(fnm).sub(&fm.mul(gnm))
}

pub fn mobius(n: u32) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// `Π num / Π den`, failing unless the division is exact.
fn exact_quotient(num: &[MultiPoly<Rational>], den: &[MultiPoly<Rational>], what: &str) -> Result<MultiPoly<Rational>> {
    let one = MultiPoly::constant(2, Rational::one());
    let a = num.iter().fold(one.clone(), |acc, p| acc.mul(p));
    let b = den.iter().fold(one, |acc, p| acc.mul(p));
    a.div_exact(&b).ok_or_else(|| Error::Degeneracy(format!("{} is not a polynomial", what)))
}

pub fn dynatomic_poly(f: &HomogeneousMap, n: u32, kind: DynatomicKind) -> Result<DynatomicCycleP1> {
    generalized_dynatomic_poly(f, 0, n, kind)
}

/// `Φ_{m,n}` or `Φ*_{m,n}`; for `m = 0` these are `Φ_n` and `Φ*_n`.
pub fn generalized_dynatomic_poly(f: &HomogeneousMap, m: u32, n: u32, kind: DynatomicKind) -> Result<DynatomicCycleP1> {
    if n == 0 {
        return Err(Error::InvalidMap("period must be at least 1".into()));
    }
    let pairs = iterate_pairs(f, n + m)?;
    let poly = match kind {
        DynatomicKind::Phi => normalize(&phi_raw(&pairs, m, n)),
        DynatomicKind::PhiStar => {
            let mut num = Vec::new();
            let mut den = Vec::new();
            for d in divisors(n) {
                let (top, bottom) = (phi_raw(&pairs, m, d), if m > 0 { Some(phi_raw(&pairs, m - 1, d)) } else { None });
                match mobius(n / d) {
                    1 => {
                        num.push(normalize(&top));
                        den.extend(bottom.map(|b| normalize(&b)));
                    }
                    -1 => {
                        den.push(normalize(&top));
                        num.extend(bottom.map(|b| normalize(&b)));
                    }
                    _ => {}
                }
            }
            normalize(&exact_quotient(&num, &den, &format!("Phi*_({},{})", m, n))?)
        }
    };
    Ok(DynatomicCycleP1 { kind, m, n, poly })
}

/// `deg Φ_{m,n} = Σ_{j=0}^N d^(nj + mN)` for a degree `d` map of P^N.
pub fn degree_phi(big_n: u32, d: u32, m: u32, n: u32) -> BigInt {
    let d = BigInt::from(d);
    (0..=big_n).map(|j| d.pow(n * j + m * big_n)).sum()
}

/// Möbius sum of `deg Φ_{0,D}` for `m = 0`, of `deg Φ_{m,D} - deg Φ_{m-1,D}` otherwise.
pub fn degree_phi_star(big_n: u32, d: u32, m: u32, n: u32) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|dd| {
            let term = if m == 0 { degree_phi(big_n, d, 0, dd) } else { degree_phi(big_n, d, m, dd) - degree_phi(big_n, d, m - 1, dd) };
            term * BigInt::from(mobius(n / dd))
        })
        .sum()
}

/// Rational roots of a binary form and the exact power of each linear factor.
pub fn root_multiplicities(p: &MultiPoly<Rational>) -> Result<BTreeMap<RationalProjPoint, u32>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = BTreeMap::new();
    let deg = p.homogeneous_degree().unwrap_or(0);
    let top = p.terms().map(|(e, _)| e[0]).max().unwrap_or(0);
    if top < deg {
        out.insert(RationalProjPoint::from_ints(&[1, 0]), deg - top);
    }
    let mut coeffs = vec![Rational::zero(); top as usize + 1];
    for (e, c) in p.terms() {
        coeffs[e[0] as usize] = c.clone();
    }
    let mut q = UniPoly::new(coeffs);
    if q.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    for r in rational_roots(&q)? {
        let lin = UniPoly::new(vec![-r.clone(), Rational::one()]);
        let mut k = 0;
        loop {
            let (quot, rem) = q.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            q = quot;
            k += 1;
        }
        out.insert(RationalProjPoint::affine(&r), k);
    }
    Ok(out)
}

/// Multiplicities of the rational roots of `Φ_{m,n}` and `Φ*_{m,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityProfile {
    pub phi: BTreeMap<RationalProjPoint, u32>,
    pub phi_star: BTreeMap<RationalProjPoint, u32>,
}

/// Computes the profile and checks `a_P(m-1, n) <= a_P(m, n)` and
/// `a_P(m, e) <= a_P(m, n)` for `e | n` at every rational root.
pub fn multiplicity_profile(f: &HomogeneousMap, m: u32, n: u32) -> Result<MultiplicityProfile> {
    let phi = generalized_dynatomic_poly(f, m, n, DynatomicKind::Phi)?.rational_roots()?;
    let phi_star = generalized_dynatomic_poly(f, m, n, DynatomicKind::PhiStar)?.rational_roots()?;
    let mut lower = Vec::new();
    if m > 0 {
        lower.push((m - 1, n));
    }
    lower.extend(divisors(n).into_iter().filter(|&e| e < n).map(|e| (m, e)));
    for (a, b) in lower {
        let other = generalized_dynatomic_poly(f, a, b, DynatomicKind::Phi)?.rational_roots()?;
        for (p, k) in &other {
            if phi.get(p).copied().unwrap_or(0) < *k {
                return Err(Error::Degeneracy(format!("multiplicity of {} drops from Phi_({},{}) to Phi_({},{})", p, a, b, m, n)));
            }
        }
    }
    Ok(MultiplicityProfile { phi, phi_star })
}
