//! Nullstellensatz certificates and the height bound for preperiodic points.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::algebra::matrix::Matrix;
use crate::algebra::scalar::{bigint_ln, common_denominator, Rational};
use crate::error::{Error, Result};
use crate::poly::map::HomogeneousMap;
use crate::poly::multipoly::MultiPoly;

/// All exponent vectors of total degree `d` in `k` variables, lex descending.
pub fn monomials(k: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(k - 1, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, d, &mut Vec::new(), &mut out);
    out
}

/// `delta * x_j^D = Σ_i f_i * g[i][j]` with integer `g` and a common positive
/// integer `delta`, `D = (N+1)(d-1)+1`.
#[derive(Clone, Debug)]
pub struct NullstellensatzCertificate {
    pub big_d: u32,
    pub g: Vec<Vec<MultiPoly<Rational>>>,
    pub delta: BigInt,
    /// Largest absolute value of a coefficient of `g`.
    pub max_g_height: BigInt,
}

impl NullstellensatzCertificate {
    /// Recomputes the identity exactly.
    pub fn verify(&self, f: &HomogeneousMap) -> bool {
        let k = f.dimension() + 1;
        (0..k).all(|j| {
            let mut sum = MultiPoly::zero(k);
            for i in 0..k {
                sum = sum.add(&f.coords()[i].mul(&self.g[i][j]));
            }
            let mut e = vec![0; k];
            e[j] = self.big_d;
            sum == MultiPoly::monomial(e, Rational::from_integer(self.delta.clone()))
        })
    }
}

pub fn nullstellensatz_certificate(f: &HomogeneousMap) -> Result<NullstellensatzCertificate> {
    let k = f.dimension() + 1;
    let d = f.degree();
    let big_d = k as u32 * (d - 1) + 1;
    let low = monomials(k, big_d - d);
    let high = monomials(k, big_d);
    let row_of = |e: &[u32]| high.binary_search_by(|m| e.cmp(m.as_slice())).unwrap();
    let zero = Rational::zero();
    let mut a = Matrix::zeros(high.len(), k * low.len(), &zero);
    for (i, fi) in f.coords().iter().enumerate() {
        for (t, m) in low.iter().enumerate() {
            let col = i * low.len() + t;
            for (e, c) in fi.terms() {
                let s: Vec<u32> = e.iter().zip(m).map(|(x, y)| x + y).collect();
                a.set(row_of(&s), col, c.clone());
            }
        }
    }
    let rhs: Vec<Vec<Rational>> = (0..k)
        .map(|j| {
            let mut b = vec![Rational::zero(); high.len()];
            let mut e = vec![0; k];
            e[j] = big_d;
            b[row_of(&e)] = Rational::one();
            b
        })
        .collect();
    let sols = a.solve_many(&rhs);
    let mut g = vec![Vec::with_capacity(k); k];
    for (j, sol) in sols.into_iter().enumerate() {
        let Some(sol) = sol else {
            return Err(Error::NotAMorphism(format!("x_{}^{} is not in the ideal of {}", j, big_d, f)));
        };
        for (i, gi) in g.iter_mut().enumerate() {
            let terms = low.iter().enumerate().map(|(t, m)| (m.clone(), sol[i * low.len() + t].clone()));
            gi.push(MultiPoly::from_terms(k, terms));
        }
    }
    let delta = common_denominator(g.iter().flatten().flat_map(|p| p.terms().map(|(_, c)| c)));
    let scale = Rational::from_integer(delta.clone());
    let g: Vec<Vec<MultiPoly<Rational>>> = g.iter().map(|row| row.iter().map(|p| p.scale(&scale)).collect()).collect();
    let max_g_height = g.iter().flatten().flat_map(|p| p.terms().map(|(_, c)| c.numer().abs())).max().unwrap_or_else(BigInt::zero);
    let cert = NullstellensatzCertificate { big_d, g, delta, max_g_height };
    debug_assert!(cert.verify(f));
    Ok(cert)
}

/// Every preperiodic point has `H(P) <= cap`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct HeightBound {
    /// `log M / (d - 1)`, for display.
    pub log_bound: f64,
    /// `M = max(C1, C2)` with `H(f(P))` within a factor `M` of `H(P)^d`.
    #[serde(serialize_with = "ser_bigint")]
    pub constant: BigInt,
    /// Largest integer not exceeding `M^(1/(d-1))`.
    #[serde(serialize_with = "ser_bigint")]
    pub cap: BigInt,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `C1 = H(f) * C(N+d, d)` bounds `H(f(P)) / H(P)^d` from above;
/// `C2 = (N+1) * C(N+D-d, D-d) * H(g)` bounds `H(P)^d / H(f(P))` from above.
pub fn height_bound(f: &HomogeneousMap, cert: &NullstellensatzCertificate) -> HeightBound {
    let n = f.dimension() as u64;
    let d = f.degree() as u64;
    let big_d = cert.big_d as u64;
    let c1 = f.coefficient_height() * binomial(BigInt::from(n + d), BigInt::from(d));
    let c2 = BigInt::from(n + 1) * binomial(BigInt::from(n + big_d - d), BigInt::from(big_d - d)) * &cert.max_g_height;
    let m = c1.max(c2);
    let cap = m.nth_root((d - 1) as u32);
    HeightBound { log_bound: bigint_ln(&m) / (d - 1) as f64, constant: m, cap }
}

/// Smallest `l` with `p^l >= 2^(N/2+1) * B^2 * sqrt(N+1)`, evaluated squared.
pub fn required_precision(b: &BigInt, p: u64, n: usize) -> u32 {
    let rhs = BigInt::one() << (n + 2) as u32;
    let rhs = rhs * b.pow(4) * BigInt::from(n + 1);
    let p2 = BigInt::from(p) * BigInt::from(p);
    let mut l = 0u32;
    let mut acc = BigInt::one();
    while acc < rhs {
        acc *= &p2;
        l += 1;
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_map;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(5, 6).len(), 210);
        assert_eq!(monomials(5, 4).len(), 70);
        assert_eq!(monomials(2, 3), vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
    }

    #[test]
    fn squaring_certificate_and_bound() {
        let f = parse_map("z^2").unwrap();
        let c = nullstellensatz_certificate(&f).unwrap();
        assert_eq!(c.big_d, 3);
        let x = MultiPoly::var(2, 0, Rational::one());
        let y = MultiPoly::var(2, 1, Rational::one());
        assert_eq!(c.g[0][0], x);
        assert!(c.g[1][0].is_zero() && c.g[0][1].is_zero());
        assert_eq!(c.g[1][1], y);
        assert_eq!(c.max_g_height, BigInt::one());
        let b = height_bound(&f, &c);
        assert_eq!(b.cap, BigInt::from(4));
        assert!((b.log_bound - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn worked_example_certificate() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let c = nullstellensatz_certificate(&f).unwrap();
        assert!(c.verify(&f));
        let b = height_bound(&f, &c);
        // every known preperiodic point has height at most 3
        assert!(b.cap >= BigInt::from(3));
    }

    #[test]
    fn not_a_morphism() {
        let f = parse_map("[x^2, x*y]").unwrap();
        assert!(matches!(nullstellensatz_certificate(&f), Err(Error::NotAMorphism(_))));
    }

    #[test]
    fn precision_examples() {
        assert_eq!(required_precision(&BigInt::from(100), 3, 1), 10);
        assert_eq!(required_precision(&BigInt::from(1), 2, 1), 2);
        // 7^l >= 8 * 10^6 * sqrt 5
        let l = required_precision(&BigInt::from(1000), 7, 4);
        let lhs = |l: u32| BigInt::from(7).pow(2 * l);
        let rhs = BigInt::from(64) * BigInt::from(10).pow(12) * BigInt::from(5);
        assert!(lhs(l) >= rhs && lhs(l - 1) < rhs);
    }

    #[test]
    fn scaling_a_coefficient() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let g = parse_map("z^2 - 70/4").unwrap();
        let (hf, hg) = (f.coefficient_height(), g.coefficient_height());
        assert!(hg >= hf && hg <= hf * 10);
        let bg = height_bound(&g, &nullstellensatz_certificate(&g).unwrap());
        assert!(bg.cap >= BigInt::from(1));
    }
}
