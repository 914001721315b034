//! Morphisms of P^N given by homogeneous forms with integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::multipoly::MultiPoly;
use super::point::{ProjPointModP, RationalProjPoint};
use crate::algebra::matrix::Matrix;
use crate::algebra::scalar::{common_denominator, integer_content, rational_height, Fp, Rational, Scalar};
use crate::error::{Error, Result};

pub const DEFAULT_DEGREE_CAP: u64 = 4096;

const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// Variable names used for printing and parsing a map on P^N.
pub fn variable_names(nvars: usize) -> Vec<String> {
    if nvars <= NAMES.len() {
        NAMES[..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (0..nvars).map(|i| format!("x{}", i)).collect()
    }
}

/// `f = [f_0, ..., f_N]`, homogeneous of a common degree, integer
/// coefficients with overall content 1, leading coefficient of `f_0` positive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousMap {
    degree: u32,
    coords: Vec<MultiPoly<Rational>>,
    int_terms: Vec<Vec<(Vec<u32>, BigInt)>>,
}

impl HomogeneousMap {
    /// Validates and normalizes. Degree 1 maps are accepted here; the parser
    /// enforces `d >= 2` for user input.
    pub fn new(coords: Vec<MultiPoly<Rational>>) -> Result<Self> {
        let nvars = coords.len();
        if nvars < 2 {
            return Err(Error::InvalidMap("need at least two coordinates".into()));
        }
        if coords.iter().any(|c| c.nvars() != nvars) {
            return Err(Error::InvalidMap("coordinate count does not match the number of variables".into()));
        }
        let mut degree = None;
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                return Err(Error::InvalidMap(format!("coordinate {} is zero", i)));
            }
            let Some(d) = c.homogeneous_degree() else {
                return Err(Error::InvalidMap(format!("coordinate {} is not homogeneous", i)));
            };
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => {
                    return Err(Error::InvalidMap(format!("coordinates have unequal degrees {} and {}", e, d)))
                }
                _ => {}
            }
        }
        let degree = degree.unwrap();
        let all: Vec<&Rational> = coords.iter().flat_map(|c| c.terms().map(|(_, v)| v)).collect();
        let den = common_denominator(all.iter().copied());
        let ints: Vec<BigInt> = all.iter().map(|v| (*v * Rational::from_integer(den.clone())).to_integer()).collect();
        let mut content = integer_content(ints.iter());
        if coords[0].leading_term().unwrap().1.is_negative() {
            content = -content;
        }
        let scale = Rational::new(den, content);
        let coords: Vec<MultiPoly<Rational>> = coords.iter().map(|c| c.scale(&scale)).collect();
        let int_terms = coords
            .iter()
            .map(|c| c.terms().map(|(e, v)| (e.clone(), v.to_integer())).collect())
            .collect();
        Ok(HomogeneousMap { degree, coords, int_terms })
    }

    /// `N`, the dimension of the projective space.
    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coords(&self) -> &[MultiPoly<Rational>] {
        &self.coords
    }

    /// Integer coefficient lists per coordinate.
    pub fn integer_terms(&self) -> &[Vec<(Vec<u32>, BigInt)>] {
        &self.int_terms
    }

    /// `H(f)`, the largest absolute value of a coefficient.
    pub fn coefficient_height(&self) -> BigInt {
        self.int_terms.iter().flatten().map(|(_, c)| c.abs()).max().unwrap()
    }

    fn eval_integer(&self, x: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree as usize;
        let powers: Vec<Vec<BigInt>> = x
            .iter()
            .map(|xi| {
                let mut v = vec![BigInt::one()];
                for k in 1..=d {
                    let next = &v[k - 1] * xi;
                    v.push(next);
                }
                v
            })
            .collect();
        self.int_terms
            .iter()
            .map(|terms| {
                let mut acc = BigInt::zero();
                for (e, c) in terms {
                    let mut t = c.clone();
                    for (i, &k) in e.iter().enumerate() {
                        if k > 0 {
                            t *= &powers[i][k as usize];
                        }
                    }
                    acc += t;
                }
                acc
            })
            .collect()
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.coords.len() {
            return Err(Error::Dimension { expected: self.coords.len(), got });
        }
        Ok(())
    }

    /// `f(P)`, normalized.
    pub fn evaluate(&self, p: &RationalProjPoint) -> Result<RationalProjPoint> {
        self.check_dim(p.coords().len())?;
        let v = self.eval_integer(p.coords());
        RationalProjPoint::new(v).map_err(|_| Error::IndeterminatePoint(p.to_string()))
    }

    /// `f̄(P̄)` over F_p.
    pub fn evaluate_mod_p(&self, p: &ProjPointModP) -> Result<ProjPointModP> {
        self.check_dim(p.coords().len())?;
        let v = self.eval_integer(&p.to_bigints());
        let prime = p.prime();
        ProjPointModP::new(v.iter().map(|c| Fp::from_bigint(c, prime)).collect())
            .map_err(|_| Error::IndeterminatePoint(format!("{} mod {}", p, prime)))
    }

    /// `[P, f(P), ..., f^n(P)]` by repeated evaluation.
    pub fn iterate_point(&self, p: &RationalProjPoint, n: usize) -> Result<Vec<RationalProjPoint>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(p.clone());
        for _ in 0..n {
            let next = self.evaluate(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }

    /// `self ∘ g`.
    pub fn compose_symbolic(&self, g: &HomogeneousMap, cap: u64) -> Result<HomogeneousMap> {
        self.check_dim(g.coords.len())?;
        let degree = self.degree as u64 * g.degree as u64;
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        let coords = self.coords.iter().map(|c| c.substitute(&g.coords)).collect();
        HomogeneousMap::new(coords)
    }

    /// `f^n` for `n >= 1`.
    pub fn iterate_symbolic(&self, n: u32, cap: u64) -> Result<HomogeneousMap> {
        assert!(n >= 1, "iterate_symbolic needs n >= 1");
        let degree = (self.degree as u64).checked_pow(n).unwrap_or(u64::MAX);
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose_symbolic(&acc, cap)?;
        }
        Ok(acc)
    }

    /// The map with coefficients sent into the ring of `like`.
    pub fn over<F: Scalar>(&self, like: &F) -> MapOver<F> {
        let coords: Vec<MultiPoly<F>> =
            self.int_terms.iter().map(|t| MultiPoly::from_terms(self.coords.len(), t.iter().map(|(e, c)| (e.clone(), like.from_int_like(c))))).collect();
        let partials = coords.iter().map(|c| (0..self.coords.len()).map(|j| c.derivative(j)).collect()).collect();
        MapOver { coords, partials, zero: like.zero_like() }
    }

    /// Affine Jacobian at chart `c` of the dehomogenized map, at the
    /// homogeneous point `x` (coordinate `c` must be nonzero). Rows and columns
    /// run over the indices other than `c`.
    pub fn jacobian<F: Scalar>(&self, chart: usize, x: &[F]) -> Result<Matrix<F>> {
        self.check_dim(x.len())?;
        let ring = self.over(&x[0]);
        let inv_xc = x[chart].inv().ok_or_else(|| Error::ChartBoundary(format!("coordinate {} vanishes", chart)))?;
        // rescale so x_c = 1
        let xs: Vec<F> = x.iter().map(|v| v.mul(&inv_xc)).collect();
        let (_, m) = ring.iterate_jacobian(&xs, 1, chart)?;
        Ok(m)
    }

    /// Renders the map in the bracketed input grammar.
    pub fn render(&self) -> String {
        let names = variable_names(self.coords.len());
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let parts: Vec<String> = self.coords.iter().map(|c| c.render(&refs)).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl fmt::Display for HomogeneousMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Log height `log max(|num|, den)` over the coefficients; 0 for the zero polynomial.
pub fn poly_height(g: &MultiPoly<Rational>) -> f64 {
    let h = poly_mult_height(g);
    crate::algebra::scalar::bigint_ln(&h)
}

/// Multiplicative height `max(|num|, den)` over the coefficients, at least 1.
pub fn poly_mult_height(g: &MultiPoly<Rational>) -> BigInt {
    g.terms().map(|(_, c)| rational_height(c)).max().unwrap_or_else(BigInt::one)
}

/// A map with coefficients in a fixed ring, plus its partial derivatives.
#[derive(Clone, Debug)]
pub struct MapOver<F> {
    coords: Vec<MultiPoly<F>>,
    partials: Vec<Vec<MultiPoly<F>>>,
    zero: F,
}

impl<F: Scalar> MapOver<F> {
    pub fn coords(&self) -> &[MultiPoly<F>] {
        &self.coords
    }

    /// Unscaled homogeneous image.
    pub fn eval(&self, x: &[F]) -> Vec<F> {
        self.coords.iter().map(|c| if c.is_zero() { self.zero.clone() } else { c.eval(x) }).collect()
    }

    /// `(∂f_i/∂x_j)` at `x`, of size `(N+1) x (N+1)`.
    pub fn homogeneous_jacobian(&self, x: &[F]) -> Matrix<F> {
        let rows = self
            .partials
            .iter()
            .map(|row| row.iter().map(|g| if g.is_zero() { self.zero.clone() } else { g.eval(x) }).collect())
            .collect();
        Matrix::from_rows(rows)
    }

    /// Affine image and Jacobian of `f^n` in chart `c` at the homogeneous
    /// point `x` with `x_c = 1`, via the chain rule along unscaled homogeneous
    /// iterates. Only the image needs to be off the chart boundary.
    pub fn iterate_jacobian(&self, x: &[F], n: usize, c: usize) -> Result<(Vec<F>, Matrix<F>)> {
        let k = x.len();
        let one = x[0].one_like();
        let mut v = x.to_vec();
        let mut jac = Matrix::identity(k, &one);
        for _ in 0..n {
            jac = self.homogeneous_jacobian(&v).mul(&jac);
            v = self.eval(&v);
        }
        let inv_wc = v[c].inv().ok_or_else(|| Error::ChartBoundary(format!("image coordinate {} is not a unit", c)))?;
        let affine: Vec<F> = (0..k).filter(|&i| i != c).map(|i| v[i].mul(&inv_wc)).collect();
        let others: Vec<usize> = (0..k).filter(|&i| i != c).collect();
        let mut m = Matrix::zeros(k - 1, k - 1, &self.zero);
        for (ri, &i) in others.iter().enumerate() {
            let fi = v[i].mul(&inv_wc);
            for (cj, &j) in others.iter().enumerate() {
                let val = jac.get(i, j).sub(&fi.mul(jac.get(c, j))).mul(&inv_wc);
                m.set(ri, cj, val);
            }
        }
        Ok((affine, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_map;

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    #[test]
    fn worked_example_evaluation() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let p = RationalProjPoint::from_ints(&[1, 2]);
        let orbit = f.iterate_point(&p, 2).unwrap();
        let s: Vec<String> = orbit.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["(1:2)", "(-3:2)", "(1:2)"]);
        let inf = RationalProjPoint::from_ints(&[1, 0]);
        assert_eq!(f.evaluate(&inf).unwrap(), inf);
        let a = ProjPointModP::from_u64s(&[1, 1], 5).unwrap();
        let b = f.evaluate_mod_p(&a).unwrap();
        assert_eq!(b.coords(), &[3, 1]);
        assert_eq!(f.evaluate_mod_p(&b).unwrap(), a);
    }

    #[test]
    fn squaring_orbit() {
        let f = parse_map("z^2").unwrap();
        let orbit = f.iterate_point(&RationalProjPoint::from_ints(&[2, 1]), 3).unwrap();
        let s: Vec<String> = orbit.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["(2:1)", "(4:1)", "(16:1)", "(256:1)"]);
        assert_eq!(f.iterate_point(&RationalProjPoint::from_ints(&[2, 1]), 0).unwrap().len(), 1);
    }

    #[test]
    fn symbolic_iteration() {
        let f = parse_map("[x^2, y^2]").unwrap();
        assert_eq!(f.iterate_symbolic(3, DEFAULT_DEGREE_CAP).unwrap().render(), "[x^8, y^8]");
        let g = parse_map("z^2 - 1").unwrap();
        assert_eq!(g.iterate_symbolic(2, DEFAULT_DEGREE_CAP).unwrap().render(), "[x^4 - 2*x^2*y^2, y^4]");
        assert!(matches!(g.iterate_symbolic(13, DEFAULT_DEGREE_CAP), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn jacobian_examples() {
        let f = parse_map("z^2 - 7/4").unwrap();
        let x = [Fp::new(1, 5), Fp::new(1, 5)];
        let j = f.jacobian(1, &x).unwrap();
        assert_eq!(j.get(0, 0).value(), 2);
        let g = parse_map("[x^2, y^2, z^2]").unwrap();
        let j = g.jacobian(2, &[q(1), q(1), q(1)]).unwrap();
        assert_eq!(j, Matrix::from_rows(vec![vec![q(2), q(0)], vec![q(0), q(2)]]));
        assert!(matches!(g.jacobian(2, &[q(1), q(1), q(0)]), Err(Error::ChartBoundary(_))));
    }

    #[test]
    fn content_and_sign_normalized() {
        let x = MultiPoly::var(2, 0, q(1));
        let y = MultiPoly::var(2, 1, q(1));
        let f = HomogeneousMap::new(vec![x.mul(&x).scale(&q(-6)), y.mul(&y).scale(&q(4))]).unwrap();
        assert_eq!(f.render(), "[3*x^2, -2*y^2]");
        assert_eq!(poly_height(&f.coords()[0]), 3f64.ln());
    }
}
