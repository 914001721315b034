//! Univariate polynomials over `F_p`, extension-field elements `F_p[x]/(g)`,
//! multiplicative orders and eigenvalue orders of matrices over `F_p`.

use std::collections::BTreeSet;

use super::matrix::Matrix;
use super::scalar::{factor_u128, Fp, Scalar};

/// Dense polynomial over `F_p`, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs, p }
    }

    pub fn from_fp(cs: &[Fp]) -> Self {
        let p = cs.first().map(|c| c.modulus()).expect("empty coefficient list");
        FpPoly::new(cs.iter().map(|c| c.value()).collect(), p)
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(vec![0, 1], p)
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(vec![1], p)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn mul(&self, rhs: &FpPoly) -> FpPoly {
        if self.is_zero() || rhs.is_zero() {
            return FpPoly::new(Vec::new(), self.p);
        }
        let p = self.p as u128;
        let mut out = vec![0u128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % p;
            }
        }
        FpPoly::new(out.into_iter().map(|v| v as u64).collect(), self.p)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, rhs: &FpPoly) -> (FpPoly, FpPoly) {
        let dr = rhs.degree().expect("division by zero polynomial");
        let p = self.p;
        let inv = Fp::from_u64(rhs.lead(), p).inv().unwrap().value();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dr {
            return (FpPoly::new(Vec::new(), p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dr];
        for i in (dr..rem.len()).rev() {
            let c = rem[i] % p;
            if c == 0 {
                continue;
            }
            let f = (c as u128 * inv as u128 % p as u128) as u64;
            quot[i - dr] = f;
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let idx = i - dr + j;
                let sub = (f as u128 * b as u128 % p as u128) as u64;
                rem[idx] = (rem[idx] + p - sub) % p;
            }
        }
        (FpPoly::new(quot, p), FpPoly::new(rem, p))
    }

    pub fn rem(&self, rhs: &FpPoly) -> FpPoly {
        self.div_rem(rhs).1
    }

    pub fn mul_mod(&self, rhs: &FpPoly, modulus: &FpPoly) -> FpPoly {
        self.mul(rhs).rem(modulus)
    }

    pub fn pow_mod(&self, mut e: u128, modulus: &FpPoly) -> FpPoly {
        let mut base = self.rem(modulus);
        let mut acc = FpPoly::one(self.p).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            e >>= 1;
        }
        acc
    }

    /// Monic irreducible factors with multiplicity, found by trial division
    /// over monic polynomials of increasing degree. Intended for small `p` and
    /// degree (Jacobians of maps on low-dimensional spaces).
    pub fn factor(&self) -> Vec<(FpPoly, usize)> {
        let p = self.p;
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        let mut rem = self.clone();
        let lead_inv = Fp::from_u64(rem.lead(), p).inv().unwrap().value();
        rem = rem.mul(&FpPoly::new(vec![lead_inv], p));
        let mut out: Vec<(FpPoly, usize)> = Vec::new();
        let mut k = 1;
        while rem.degree().unwrap_or(0) >= 2 * k {
            let count = (p as u128).pow(k as u32);
            for idx in 0..count {
                // monic candidate: base-p digits give the lower coefficients
                let mut cs = Vec::with_capacity(k + 1);
                let mut t = idx;
                for _ in 0..k {
                    cs.push((t % p as u128) as u64);
                    t /= p as u128;
                }
                cs.push(1);
                let g = FpPoly::new(cs, p);
                let mut mult = 0;
                loop {
                    let (qt, r) = rem.div_rem(&g);
                    if !r.is_zero() {
                        break;
                    }
                    rem = qt;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((g, mult));
                }
                if rem.degree().unwrap_or(0) < 2 * k {
                    break;
                }
            }
            k += 1;
        }
        if rem.degree().unwrap_or(0) >= 1 {
            match out.iter_mut().find(|(g, _)| *g == rem) {
                Some(entry) => entry.1 += 1,
                None => out.push((rem, 1)),
            }
        }
        debug_assert!(out.iter().map(|(g, m)| g.degree().unwrap() * m).sum::<usize>() == deg);
        out.sort_by(|a, b| (a.0.degree(), &a.0.coeffs).cmp(&(b.0.degree(), &b.0.coeffs)));
        out
    }
}

/// Smallest `r >= 1` with `a^r = 1`, or `None` for zero.
pub trait MultiplicativeOrder {
    fn multiplicative_order(&self) -> Option<u128>;
}

/// Order of `element` in a cyclic group of order `group_order`, given a power map.
fn order_in_group<T>(group_order: u128, pow: impl Fn(u128) -> T, is_one: impl Fn(&T) -> bool) -> u128 {
    let mut ord = group_order;
    for (q, _) in factor_u128(group_order) {
        while ord.is_multiple_of(q) && is_one(&pow(ord / q)) {
            ord /= q;
        }
    }
    ord
}

impl MultiplicativeOrder for Fp {
    fn multiplicative_order(&self) -> Option<u128> {
        if self.is_zero() {
            return None;
        }
        let n = (self.modulus() - 1) as u128;
        Some(order_in_group(n, |e| self.pow(e as u64), |v: &Fp| v.is_one()))
    }
}

/// Element of `F_p[x]/(g)` with `g` monic irreducible.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtFieldElem {
    value: FpPoly,
    minimal_poly: FpPoly,
}

impl ExtFieldElem {
    pub fn new(value: FpPoly, minimal_poly: FpPoly) -> Self {
        let value = value.rem(&minimal_poly);
        ExtFieldElem { value, minimal_poly }
    }

    /// The class of `x` in `F_p[x]/(g)`.
    pub fn generator(minimal_poly: FpPoly) -> Self {
        let p = minimal_poly.prime();
        ExtFieldElem::new(FpPoly::x(p), minimal_poly)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl MultiplicativeOrder for ExtFieldElem {
    fn multiplicative_order(&self) -> Option<u128> {
        if self.is_zero() {
            return None;
        }
        let p = self.minimal_poly.prime() as u128;
        let k = self.minimal_poly.degree().unwrap() as u32;
        let n = p.pow(k) - 1;
        let one = FpPoly::one(p as u64);
        Some(order_in_group(
            n,
            |e| self.value.pow_mod(e, &self.minimal_poly),
            |v: &FpPoly| *v == one,
        ))
    }
}

/// Multiplicative orders of the nonzero eigenvalues of a square matrix over `F_p`.
///
/// Factors the characteristic polynomial; each irreducible factor `g != x`
/// contributes the order of `x` in `F_p[x]/(g)`.
pub fn eigenvalue_orders(m: &Matrix<Fp>) -> BTreeSet<u128> {
    let mut out = BTreeSet::new();
    if m.rows() == 0 {
        return out;
    }
    let cp = FpPoly::from_fp(&m.charpoly());
    let p = cp.prime();
    for (g, _) in cp.factor() {
        if g == FpPoly::x(p) {
            continue;
        }
        let order = ExtFieldElem::generator(g).multiplicative_order().expect("nonzero root class");
        out.insert(order);
    }
    out
}
