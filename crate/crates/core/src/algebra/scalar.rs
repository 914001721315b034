//! Coefficient rings used throughout: rationals, prime fields and `Z/p^k`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number; always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Minimal commutative-ring interface shared by every coefficient type.
///
/// Elements of `F_p` and `Z/p^k` carry their modulus, so constants are built
/// "like" an existing element. `inv` returns `None` for non-units.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: &BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Element of the prime field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Self {
        let v = value.rem_euclid(p as i64) as u64;
        Fp { value: v, modulus: p }
    }

    pub fn from_u64(value: u64, p: u64) -> Self {
        Fp { value: value % p, modulus: p }
    }

    pub fn from_bigint(value: &BigInt, p: u64) -> Self {
        let r = value.mod_floor(&BigInt::from(p));
        Fp { value: r.to_u64().unwrap(), modulus: p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Scalar for Fp {
    fn zero_like(&self) -> Self {
        Fp { value: 0, modulus: self.modulus }
    }
    fn one_like(&self) -> Self {
        Fp::from_u64(1, self.modulus)
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Fp::from_bigint(n, self.modulus)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        Fp { value: (self.value + rhs.value) % self.modulus, modulus: self.modulus }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Fp { value: (self.value + self.modulus - rhs.value) % self.modulus, modulus: self.modulus }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Fp { value: v as u64, modulus: self.modulus }
    }
    fn neg(&self) -> Self {
        Fp { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let g = (self.value as i128).extended_gcd(&(self.modulus as i128));
        if g.gcd != 1 {
            return None;
        }
        Some(Fp {
            value: g.x.rem_euclid(self.modulus as i128) as u64,
            modulus: self.modulus,
        })
    }
}

/// Element of `Z/MZ` for a big modulus `M` (used with `M = p^k`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModInt {
    value: BigInt,
    modulus: Arc<BigInt>,
}

impl ModInt {
    pub fn new(value: BigInt, modulus: Arc<BigInt>) -> Self {
        let value = value.mod_floor(&modulus);
        ModInt { value, modulus }
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> &Arc<BigInt> {
        &self.modulus
    }

    fn wrap(&self, v: BigInt) -> Self {
        ModInt::new(v, self.modulus.clone())
    }
}

impl Scalar for ModInt {
    fn zero_like(&self) -> Self {
        self.wrap(BigInt::zero())
    }
    fn one_like(&self) -> Self {
        self.wrap(BigInt::one())
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        self.wrap(n.clone())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.wrap(&self.value + &rhs.value)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.wrap(&self.value - &rhs.value)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.wrap(&self.value * &rhs.value)
    }
    fn neg(&self) -> Self {
        self.wrap(-&self.value)
    }
    fn inv(&self) -> Option<Self> {
        let g = self.value.extended_gcd(&self.modulus);
        if !g.gcd.abs().is_one() {
            return None;
        }
        Some(self.wrap(g.x))
    }
}

/// `H(q) = max(|numerator|, denominator)`.
pub fn rational_height(q: &Rational) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Gcd of the numerators (all values assumed integral); zero for an empty list.
pub fn integer_content<'a>(ns: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    ns.into_iter().fold(BigInt::zero(), |acc, n| acc.gcd(n))
}

/// Formats a rational as `a` or `a/b`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Natural logarithm of a positive integer, accurate for arbitrarily large values.
pub fn bigint_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 53;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Prime factorization by trial division; only meant for the small moduli we use.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut q = 2u128;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
