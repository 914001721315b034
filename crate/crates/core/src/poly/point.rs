//! Points of projective space over Q and over F_p.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::algebra::scalar::{common_denominator, integer_content, Fp, Rational};
use crate::error::{Error, Result};

/// A point of P^N(Q) with coprime integer coordinates whose last nonzero
/// coordinate is positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalProjPoint {
    coords: Vec<BigInt>,
}

impl RationalProjPoint {
    /// Normalizes arbitrary integer coordinates; errors on the zero vector.
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        let g = integer_content(coords.iter());
        if g.is_zero() {
            return Err(Error::IndeterminatePoint(format!("{:?}", coords)));
        }
        let last = coords.iter().rev().find(|c| !c.is_zero()).unwrap();
        let g = if last.is_negative() { -g } else { g };
        Ok(RationalProjPoint { coords: coords.into_iter().map(|c| c / &g).collect() })
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect()).expect("nonzero point")
    }

    pub fn from_rationals(qs: &[Rational]) -> Result<Self> {
        let den = common_denominator(qs.iter());
        Self::new(qs.iter().map(|q| (q * Rational::from_integer(den.clone())).to_integer()).collect())
    }

    /// The affine point `z` of P^1 as `(z:1)`.
    pub fn affine(z: &Rational) -> Self {
        Self::new(vec![z.numer().clone(), z.denom().clone()]).unwrap()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    /// Multiplicative height `max |x_i|`.
    pub fn height(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().unwrap()
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.coords.iter().map(|c| Rational::from_integer(c.clone())).collect()
    }

    /// Reduction modulo p. Coprime coordinates never all vanish.
    pub fn reduce(&self, p: u64) -> ProjPointModP {
        ProjPointModP::new(self.coords.iter().map(|c| Fp::from_bigint(c, p)).collect()).unwrap()
    }
}

impl Ord for RationalProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height().cmp(&other.height()).then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for RationalProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RationalProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl Serialize for RationalProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A point of P^N(F_p) whose last nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPointModP {
    coords: Vec<u64>,
    p: u64,
}

impl ProjPointModP {
    pub fn new(coords: Vec<Fp>) -> Result<Self> {
        let p = coords[0].modulus();
        let last = coords.iter().rev().find(|c| c.value() != 0);
        let Some(last) = last else {
            return Err(Error::IndeterminatePoint("(0:...:0) mod p".into()));
        };
        let inv = crate::algebra::scalar::Scalar::inv(last).unwrap();
        let coords = coords.iter().map(|c| (c.value() as u128 * inv.value() as u128 % p as u128) as u64).collect();
        Ok(ProjPointModP { coords, p })
    }

    /// Builds from already normalized raw values.
    pub(crate) fn from_normalized(coords: Vec<u64>, p: u64) -> Self {
        ProjPointModP { coords, p }
    }

    pub fn from_u64s(cs: &[u64], p: u64) -> Result<Self> {
        Self::new(cs.iter().map(|&c| Fp::from_u64(c, p)).collect())
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn as_fp(&self) -> Vec<Fp> {
        self.coords.iter().map(|&c| Fp::from_u64(c, self.p)).collect()
    }

    /// Position of the trailing 1, the affine chart the point lives in.
    pub fn chart(&self) -> usize {
        self.coords.iter().rposition(|&c| c != 0).unwrap()
    }

    /// Coordinates as integers in `[0, p)`.
    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.coords.iter().map(|&c| BigInt::from(c)).collect()
    }
}

impl fmt::Display for ProjPointModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// Symmetric residue of `a` modulo `m` in `(-m/2, m/2]`.
pub fn symmetric_residue(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Small helper for tests and display: the `u64` value of a residue.
pub fn residue_u64(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}
