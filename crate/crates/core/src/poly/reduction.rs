//! Good reduction and resultants.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::groebner::{buchberger, leading_monomial, MonomialOrder, DEFAULT_PAIR_CAP};
use super::map::HomogeneousMap;
use super::multipoly::MultiPoly;
use super::univariate::binary_resultant;
use crate::algebra::scalar::{Fp, Rational};
use crate::error::{Error, Result};

/// The reduction of `f` modulo `p` as forms over F_p.
pub fn reduce_map(f: &HomogeneousMap, p: u64) -> Vec<MultiPoly<Fp>> {
    let k = f.dimension() + 1;
    f.integer_terms()
        .iter()
        .map(|t| MultiPoly::from_terms(k, t.iter().map(|(e, c)| (e.clone(), Fp::from_bigint(c, p)))))
        .collect()
}

/// True when the reduced forms have no common zero in P^N over the algebraic
/// closure of F_p: the graded Gröbner basis must contain a pure power of
/// every variable among its leading monomials.
pub fn good_reduction_test(f: &HomogeneousMap, p: u64) -> bool {
    let gens: Vec<MultiPoly<Fp>> = reduce_map(f, p).into_iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return false;
    }
    let Ok(gb) = buchberger(&gens, MonomialOrder::GrevLex, DEFAULT_PAIR_CAP) else {
        return false;
    };
    let k = f.dimension() + 1;
    let leads: Vec<Vec<u32>> = gb.iter().filter_map(|g| leading_monomial(g, MonomialOrder::GrevLex)).collect();
    (0..k).all(|i| leads.iter().any(|e| e[i] > 0 && e.iter().enumerate().all(|(j, &v)| j == i || v == 0)))
}

/// Coefficients of a binary form of degree `d`, ordered `x^d, x^(d-1) y, ..., y^d`.
pub fn binary_coefficients(g: &MultiPoly<Rational>, d: u32) -> Vec<Rational> {
    (0..=d).map(|i| g.coeff(&[d - i, i]).cloned().unwrap_or_else(Rational::zero)).collect()
}

/// Resultant of the two coordinates of a map on P^1.
pub fn resultant_p1(f: &HomogeneousMap) -> Result<BigInt> {
    if f.dimension() != 1 {
        return Err(Error::Dimension { expected: 1, got: f.dimension() });
    }
    let d = f.degree();
    let r = binary_resultant(&binary_coefficients(&f.coords()[0], d), &binary_coefficients(&f.coords()[1], d));
    Ok(r.to_integer())
}

/// Prime divisors of the resultant of a map on P^1. Trial division runs to
/// 10^6; a cofactor above that, if any, is returned as a single entry.
pub fn bad_primes_p1(f: &HomogeneousMap) -> Result<BTreeSet<BigInt>> {
    let res = resultant_p1(f)?;
    if res.is_zero() {
        return Err(Error::NotAMorphism(format!("{} has resultant 0", f)));
    }
    let mut n = res.abs();
    let mut out = BTreeSet::new();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= n && p <= limit {
        if (&n % &p).is_zero() {
            out.insert(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += if p == BigInt::from(2u32) { BigInt::one() } else { BigInt::from(2u32) };
    }
    if !n.is_one() {
        out.insert(n);
    }
    Ok(out)
}

/// True when `p` divides every coefficient, which content normalization rules out.
pub fn reduces_to_zero(f: &HomogeneousMap, p: u64) -> bool {
    let pb = BigInt::from(p);
    f.integer_terms().iter().flatten().all(|(_, c)| c.mod_floor(&pb).is_zero())
}

/// Small-prime view of [`bad_primes_p1`].
pub fn bad_primes_p1_u64(f: &HomogeneousMap) -> Result<Vec<u64>> {
    Ok(bad_primes_p1(f)?.iter().filter_map(|p| p.to_u64()).collect())
}
