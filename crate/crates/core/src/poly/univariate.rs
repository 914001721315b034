//! Univariate polynomials over Q and rational root extraction.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::matrix::Matrix;
use crate::algebra::scalar::{common_denominator, integer_content, is_prime, ModInt, Rational};
use crate::error::{Error, Result};

/// Dense polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) - rhs.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        let dr = rhs.degree().expect("division by zero polynomial");
        let lc = rhs.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dr {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dr];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dr] / &lc;
            if !c.is_zero() {
                for (j, r) in rhs.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * r;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dr);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den = common_denominator(self.coeffs.iter());
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let mut g = integer_content(ints.iter());
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        Self::new(ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect())
    }

    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.primitive()
    }

    fn integer_coeffs(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| c.to_integer()).collect()
    }
}

/// All rational roots of a nonzero polynomial, ascending.
///
/// The squarefree part is reduced modulo a small prime at which every root is
/// simple and the leading coefficient is a unit; roots there are lifted
/// p-adically past the root bound and checked exactly.
pub fn rational_roots(q: &UniPoly) -> Result<Vec<Rational>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if q.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut roots = BTreeSet::new();
    // strip factors of x so the root 0 is handled directly
    let shift = q.coeffs.iter().position(|c| !c.is_zero()).unwrap();
    if shift > 0 {
        roots.insert(Rational::zero());
    }
    let q = UniPoly::new(q.coeffs[shift..].to_vec());
    if q.degree() == Some(0) {
        return Ok(roots.into_iter().collect());
    }
    let sf = q.squarefree_part();
    let a = sf.integer_coeffs();
    let lead = a.last().unwrap().clone();
    let bound = a.iter().map(|c| c.abs()).max().unwrap() + lead.abs();
    let p = choose_prime(&a);
    // precision with p^k > 2 * bound
    let mut k = 1u32;
    let pb = BigInt::from(p);
    while pb.pow(k) <= &bound * 2 {
        k += 1;
    }
    for r0 in 0..p {
        let fr = eval_mod_u64(&a, r0, p);
        if fr != 0 {
            continue;
        }
        let lifted = newton_lift(&a, r0, p, k);
        let m = pb.pow(k);
        // y = lead * r is an integer of absolute value at most `bound`
        let mut y = (&lifted * &lead).mod_floor(&m);
        if &y * 2 > m {
            y -= &m;
        }
        let cand = Rational::new(y, lead.clone());
        if sf.eval(&cand).is_zero() {
            roots.insert(cand);
        }
    }
    Ok(roots.into_iter().collect())
}

fn eval_mod_u64(a: &[BigInt], x: u64, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut acc: u128 = 0;
    for c in a.iter().rev() {
        let cm = c.mod_floor(&pb).to_u64().unwrap() as u128;
        acc = (acc * x as u128 + cm) % p as u128;
    }
    acc as u64
}

/// Smallest prime not dividing the leading coefficient at which every root of
/// the reduction is simple.
fn choose_prime(a: &[BigInt]) -> u64 {
    let da: Vec<BigInt> = a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let lead = a.last().unwrap();
    let mut p = 2u64;
    loop {
        if is_prime(p) && !(lead % BigInt::from(p)).is_zero() {
            let ok = (0..p).all(|r| eval_mod_u64(a, r, p) != 0 || eval_mod_u64(&da, r, p) != 0);
            if ok {
                return p;
            }
        }
        p += 1;
    }
}

fn newton_lift(a: &[BigInt], r0: u64, p: u64, k: u32) -> BigInt {
    let pb = BigInt::from(p);
    let mut prec = 1u32;
    let mut r = BigInt::from(r0);
    while prec < k {
        prec = (prec * 2).min(k);
        let m = pb.pow(prec);
        let mut f = BigInt::zero();
        let mut df = BigInt::zero();
        for (i, c) in a.iter().enumerate().rev() {
            f = (f * &r + c).mod_floor(&m);
            if i > 0 {
                df = (df * &r + c * BigInt::from(i)).mod_floor(&m);
            }
        }
        let inv = crate::algebra::scalar::Scalar::inv(&ModInt::new(df, Arc::new(m.clone()))).expect("simple root has a unit derivative");
        r = (&r - f * inv.value()).mod_floor(&m);
    }
    r
}

/// Rational roots by the rational root theorem with divisor enumeration.
/// Exponential in the size of the coefficients; kept as an independent check.
pub fn rational_roots_by_divisors(q: &UniPoly) -> Result<Vec<Rational>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots = BTreeSet::new();
    let shift = q.coeffs.iter().position(|c| !c.is_zero()).unwrap();
    if shift > 0 {
        roots.insert(Rational::zero());
    }
    let q = UniPoly::new(q.coeffs[shift..].to_vec()).primitive();
    if q.degree() == Some(0) {
        return Ok(roots.into_iter().collect());
    }
    let a = q.integer_coeffs();
    let nums = divisors(&a[0].abs());
    let dens = divisors(&a.last().unwrap().abs());
    for s in &nums {
        for t in &dens {
            for sign in [1, -1] {
                let cand = Rational::new(s * sign, t.clone());
                if q.eval(&cand).is_zero() {
                    roots.insert(cand);
                }
            }
        }
    }
    Ok(roots.into_iter().collect())
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= *n {
        if (n % &i).is_zero() {
            out.push(i.clone());
            let j = n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

/// Homogeneous resultant of two binary forms given by coefficient lists
/// `[c_0, ..., c_d]` of `x^(d-i) y^i` (highest power of x first).
pub fn binary_resultant(f: &[Rational], g: &[Rational]) -> Rational {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return Rational::one();
    }
    let zero = Rational::zero();
    let mut s = Matrix::zeros(size, size, &zero);
    for i in 0..n {
        for (j, c) in f.iter().enumerate() {
            s.set(i, i + j, c.clone());
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().enumerate() {
            s.set(n + i, i + j, c.clone());
        }
    }
    s.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn simple_root_sets() {
        assert_eq!(rational_roots(&UniPoly::from_ints(&[-9, 0, 4])).unwrap(), vec![q(-3, 2), q(3, 2)]);
        assert!(rational_roots(&UniPoly::from_ints(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(rational_roots(&UniPoly::from_ints(&[0, -1, 0, 1])).unwrap(), vec![q(-1, 1), q(0, 1), q(1, 1)]);
        assert_eq!(rational_roots(&UniPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn repeated_roots() {
        // (2x - 1)^3 (x + 5)^2
        let a = UniPoly::from_ints(&[-1, 2]);
        let b = UniPoly::from_ints(&[5, 1]);
        let mut p = UniPoly::from_ints(&[1]);
        for f in [&a, &a, &a, &b, &b] {
            p = mul(&p, f);
        }
        assert_eq!(rational_roots(&p).unwrap(), vec![q(-5, 1), q(1, 2)]);
    }

    #[test]
    fn resultant_examples() {
        let f = [q(4, 1), q(0, 1), q(-7, 1)];
        let g = [q(0, 1), q(0, 1), q(4, 1)];
        assert_eq!(binary_resultant(&f, &g), q(256, 1));
        let f = [q(1, 1), q(0, 1), q(-1, 1)];
        let g = [q(0, 1), q(0, 1), q(1, 1)];
        assert_eq!(binary_resultant(&f, &g), q(1, 1));
    }

    fn mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut c = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        UniPoly::new(c)
    }

    proptest! {
        #[test]
        fn padic_matches_divisor_oracle(
            roots in prop::collection::vec((-12i64..12, 1i64..8), 1..4),
            extra in prop::collection::vec(-6i64..6, 0..3),
        ) {
            let mut p = UniPoly::from_ints(&[1]);
            for (s, t) in &roots {
                p = mul(&p, &UniPoly::from_ints(&[-s, *t]));
            }
            if extra.len() >= 2 {
                let mut e = extra.clone();
                e.push(1);
                p = mul(&p, &UniPoly::from_ints(&e));
            }
            prop_assert_eq!(rational_roots(&p).unwrap(), rational_roots_by_divisors(&p).unwrap());
        }
    }
}
