//! Sparse multivariate polynomials over a [`Scalar`] ring.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::scalar::{common_denominator, format_rational, integer_content, Rational, Scalar};

pub type Exponent = Vec<u32>;

/// Polynomial in `nvars` variables. Keys are exponent vectors; the map holds
/// only nonzero coefficients. `BTreeMap` order is lexicographic with variable
/// 0 most significant, so the last entry is the lex-leading term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<F> {
    nvars: usize,
    terms: BTreeMap<Exponent, F>,
}

impl<F: Scalar> MultiPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exp: Exponent, c: F) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MultiPoly { nvars, terms }
    }

    /// The variable `x_i` with coefficient `one`.
    pub fn var(nvars: usize, i: usize, one: F) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, one)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Option<&F> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: Exponent, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Lex-leading term (variable 0 most significant).
    pub fn leading_term(&self) -> Option<(&Exponent, &F)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// `Some(d)` when every term has total degree `d`; `None` for the zero
    /// polynomial or a non-homogeneous one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.mul(k))).filter(|(_, c)| !c.is_zero());
        MultiPoly { nvars: self.nvars, terms: terms.collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let one = match self.terms.values().next() {
            Some(c) => c.one_like(),
            None => return if k == 0 { panic!("0^0 without a coefficient ring") } else { self.clone() },
        };
        let mut acc = Self::constant(self.nvars, one);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> MultiPoly<G> {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f(c))).filter(|(_, c)| !c.is_zero());
        MultiPoly { nvars: self.nvars, terms: terms.collect() }
    }

    /// Evaluates at a point; `point.len()` must equal `nvars`.
    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars);
        let zero = point[0].zero_like();
        let mut acc = zero;
        // cache powers per variable
        let maxdeg: Vec<u32> = (0..self.nvars).map(|i| self.degree_in(i).unwrap_or(0)).collect();
        let powers: Vec<Vec<F>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut v = vec![x.one_like()];
                for k in 1..=d as usize {
                    let next = v[k - 1].mul(x);
                    v.push(next);
                }
                v
            })
            .collect();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c.mul(&c.from_int_like(&BigInt::from(e[i]))));
        }
        out
    }

    /// Substitutes polynomial `subs[i]` (all in a common ring of `m` variables)
    /// for variable `i`.
    pub fn substitute(&self, subs: &[MultiPoly<F>]) -> MultiPoly<F> {
        assert_eq!(subs.len(), self.nvars);
        let m = subs.first().map_or(0, |s| s.nvars);
        let mut out = MultiPoly::zero(m);
        let Some(one) = self.terms.values().next().map(|c| c.one_like()) else {
            return out;
        };
        let maxdeg: Vec<u32> = (0..self.nvars).map(|i| self.degree_in(i).unwrap_or(0)).collect();
        let powers: Vec<Vec<MultiPoly<F>>> = subs
            .iter()
            .zip(&maxdeg)
            .map(|(s, &d)| {
                let mut v = vec![MultiPoly::constant(m, one.clone())];
                for k in 1..=d as usize {
                    let next = v[k - 1].mul(s);
                    v.push(next);
                }
                v
            })
            .collect();
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Fixes variable `i` to the value `v`, keeping the number of variables.
    pub fn specialize(&self, i: usize, v: &F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[i];
            ne[i] = 0;
            out.add_term(ne, c.mul(&v.pow(k as u64)));
        }
        out
    }

    /// Exact division under lex order; `None` when `rhs` does not divide `self`.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let (le, lc) = rhs.leading_term()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((e, c)) = rem.leading_term() {
            if e.iter().zip(le).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponent = e.iter().zip(le).map(|(a, b)| a - b).collect();
            let qc = c.mul(&lc_inv);
            let t = Self::monomial(qe, qc);
            rem = rem.sub(&t.mul(rhs));
            quot = quot.add(&t);
        }
        Some(quot)
    }
}

impl MultiPoly<Rational> {
    /// Integer polynomial with content 1 proportional to `self`, together with
    /// the rational factor `s` such that `self = s * primitive`. The sign is
    /// chosen so the lex-leading coefficient is positive.
    pub fn primitive_part(&self) -> (MultiPoly<Rational>, Rational) {
        if self.is_zero() {
            return (self.clone(), Rational::one());
        }
        let den = common_denominator(self.terms.values());
        let ints: Vec<BigInt> = self.terms.values().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let mut content = integer_content(ints.iter());
        if self.leading_term().unwrap().1.is_negative() {
            content = -content;
        }
        let scale = Rational::new(den, content);
        let prim = self.scale(&scale);
        (prim, scale.recip())
    }

    /// Largest absolute value of an (integer) coefficient.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.numer().abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| One::is_one(c.denom()))
    }

    /// Renders in the map grammar using the given variable names.
    pub fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                .collect();
            if mono.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !One::is_one(&abs) {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.render(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> Rational {
        Rational::from_integer(BigInt::from(a))
    }

    fn x(i: usize) -> MultiPoly<Rational> {
        MultiPoly::var(2, i, q(1))
    }

    #[test]
    fn arithmetic_and_eval() {
        let p = x(0).mul(&x(0)).sub(&x(1).mul(&x(1)).scale(&q(7)));
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(p.eval(&[q(3), q(1)]), q(2));
        let d = p.derivative(0);
        assert_eq!(d, x(0).scale(&q(2)));
    }

    #[test]
    fn exact_division() {
        let a = x(0).sub(&x(1));
        let b = x(0).add(&x(1));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.add(&x(0)).div_exact(&a), None);
    }

    #[test]
    fn primitive_part_clears_denominators() {
        let p = x(0).mul(&x(0)).sub(&x(1).mul(&x(1)).scale(&Rational::new(7.into(), 4.into())));
        let (prim, s) = p.primitive_part();
        assert_eq!(prim.render(&["x", "y"]), "4*x^2 - 7*y^2");
        assert_eq!(prim.scale(&s), p);
    }

    #[test]
    fn substitution_composes() {
        // (x^2 - y^2) with x -> x^2 - y^2, y -> y^2
        let f0 = x(0).mul(&x(0)).sub(&x(1).mul(&x(1)));
        let g = vec![f0.clone(), x(1).mul(&x(1))];
        let comp = f0.substitute(&g);
        assert_eq!(comp.render(&["x", "y"]), "x^4 - 2*x^2*y^2");
    }
}
