//! Rational preimages of a point.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::scalar::Rational;
use crate::error::{Error, Result};
use crate::poly::groebner::{buchberger, MonomialOrder, DEFAULT_PAIR_CAP};
use crate::poly::map::HomogeneousMap;
use crate::poly::multipoly::MultiPoly;
use crate::poly::point::RationalProjPoint;
use crate::poly::univariate::{rational_roots, UniPoly};

/// Every `Q` in P^N(Q) with `f(Q) = P`, sorted.
pub fn rational_preimages(f: &HomogeneousMap, p: &RationalProjPoint) -> Result<BTreeSet<RationalProjPoint>> {
    if p.dimension() != f.dimension() {
        return Err(Error::Dimension { expected: f.dimension(), got: p.dimension() });
    }
    let found = if f.dimension() == 1 { preimages_p1(f, p)? } else { preimages_by_elimination(f, p)? };
    let mut out = BTreeSet::new();
    for q in found {
        if &f.evaluate(&q)? == p {
            out.insert(q);
        }
    }
    Ok(out)
}

/// Roots of `y_P F(x, y) - x_P G(x, y)`.
fn preimages_p1(f: &HomogeneousMap, p: &RationalProjPoint) -> Result<Vec<RationalProjPoint>> {
    let pr = p.as_rationals();
    let h = f.coords()[0].scale(&pr[1]).sub(&f.coords()[1].scale(&pr[0]));
    let d = f.degree() as usize;
    let mut coeffs = vec![Rational::zero(); d + 1];
    for (e, c) in h.terms() {
        coeffs[e[0] as usize] = c.clone();
    }
    let mut out = Vec::new();
    if coeffs[d].is_zero() {
        out.push(RationalProjPoint::from_ints(&[1, 0]));
    }
    let q = UniPoly::new(coeffs);
    if !q.is_zero() {
        for z in rational_roots(&q)? {
            out.push(RationalProjPoint::affine(&z));
        }
    }
    Ok(out)
}

/// Splits P^N into the strata `q_c = 1, q_j = 0 (j > c)` and solves the
/// equations `f_i(Q) P_k - f_k(Q) P_i` on each stratum by lex elimination.
fn preimages_by_elimination(f: &HomogeneousMap, p: &RationalProjPoint) -> Result<Vec<RationalProjPoint>> {
    let n = f.dimension();
    let pr = p.as_rationals();
    let k = pr.iter().rposition(|c| !c.is_zero()).unwrap();
    let mut out = Vec::new();
    // stratum 0 is the single point (1:0:...:0)
    let mut e0 = vec![BigInt::zero(); n + 1];
    e0[0] = BigInt::one();
    out.push(RationalProjPoint::new(e0)?);
    for c in 1..=n {
        let subs: Vec<MultiPoly<Rational>> = (0..=n)
            .map(|j| match j.cmp(&c) {
                std::cmp::Ordering::Less => MultiPoly::var(c, j, Rational::one()),
                std::cmp::Ordering::Equal => MultiPoly::constant(c, Rational::one()),
                std::cmp::Ordering::Greater => MultiPoly::zero(c),
            })
            .collect();
        let fq: Vec<MultiPoly<Rational>> = f.coords().iter().map(|fi| fi.substitute(&subs)).collect();
        let gens: Vec<MultiPoly<Rational>> = (0..=n)
            .filter(|&i| i != k)
            .map(|i| fq[i].scale(&pr[k]).sub(&fq[k].scale(&pr[i])))
            .filter(|g| !g.is_zero())
            .map(|g| g.primitive_part().0)
            .collect();
        let basis = if gens.is_empty() { Vec::new() } else { buchberger(&gens, MonomialOrder::Lex, DEFAULT_PAIR_CAP)? };
        let mut sols = Vec::new();
        back_substitute(&basis, c, c, &mut vec![Rational::zero(); c], &mut sols)?;
        for s in sols {
            let mut coords = s;
            coords.push(Rational::one());
            coords.resize(n + 1, Rational::zero());
            out.push(RationalProjPoint::from_rationals(&coords)?);
        }
    }
    Ok(out)
}

/// Solves for variables `k-1, k-2, ..., 0` in turn, the later ones being fixed in `vals`.
fn back_substitute(basis: &[MultiPoly<Rational>], nvars: usize, k: usize, vals: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) -> Result<()> {
    if k == 0 {
        out.push(vals.clone());
        return Ok(());
    }
    let v = k - 1;
    let mut polys: Vec<UniPoly> = Vec::new();
    for g in basis {
        if g.terms().any(|(e, _)| e[..v].iter().any(|&a| a > 0)) {
            continue;
        }
        let mut s = g.clone();
        for (j, x) in vals.iter().enumerate().take(nvars).skip(k) {
            s = s.specialize(j, x);
        }
        let deg = s.degree_in(v).unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in s.terms() {
            coeffs[e[v] as usize] = c.clone();
        }
        let u = UniPoly::new(coeffs);
        if !u.is_zero() {
            polys.push(u);
        }
    }
    let Some(first) = polys.iter().min_by_key(|u| u.degree()) else {
        return Err(Error::Degeneracy(format!("preimage fibre is not finite in variable {}", v)));
    };
    for r in rational_roots(first)? {
        if polys.iter().all(|u| u.eval(&r).is_zero()) {
            vals[v] = r;
            back_substitute(basis, nvars, v, vals, out)?;
        }
    }
    vals[v] = Rational::zero();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_map;

    fn names(s: &BTreeSet<RationalProjPoint>) -> Vec<String> {
        s.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn worked_example() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let pre = |c: &[i64]| names(&rational_preimages(&f, &RationalProjPoint::from_ints(c)).unwrap());
        assert_eq!(pre(&[1, 2]), ["(-3:2)", "(3:2)"]);
        assert_eq!(pre(&[-3, 2]), ["(-1:2)", "(1:2)"]);
        assert_eq!(pre(&[1, 0]), ["(1:0)"]);
        assert!(pre(&[3, 2]).is_empty());
    }

    #[test]
    fn infinity_as_a_preimage() {
        // -5/4 z + 1/z sends 0 to infinity and infinity to infinity
        let f = parse_map("-5/4 z + 1/z").unwrap();
        let s = rational_preimages(&f, &RationalProjPoint::from_ints(&[1, 0])).unwrap();
        assert_eq!(names(&s), ["(0:1)", "(1:0)"]);
    }

    #[test]
    fn plane_map() {
        let f = parse_map("[x^2 - 21/16*z^2, y^2 - 2*z^2, z^2]").unwrap();
        // fixed point (-3/4, 2) has preimages (±3/4, ±2)
        let s = rational_preimages(&f, &RationalProjPoint::from_ints(&[-3, 8, 4])).unwrap();
        assert_eq!(names(&s), ["(-3:-8:4)", "(-3:8:4)", "(3:-8:4)", "(3:8:4)"]);
        // the line at infinity maps to itself
        let s = rational_preimages(&f, &RationalProjPoint::from_ints(&[1, 1, 0])).unwrap();
        assert_eq!(names(&s), ["(-1:1:0)", "(1:1:0)"]);
        let s = rational_preimages(&f, &RationalProjPoint::from_ints(&[1, 0, 0])).unwrap();
        assert_eq!(names(&s), ["(1:0:0)"]);
    }
}
