//! Exact LLL reduction of integer lattice bases.
//!
//! Gram-Schmidt data is kept in exact rationals; dimensions here are tiny
//! (at most `N + 1 <= 6`), so the basis is re-orthogonalized after each swap.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::Rational;
use crate::error::{Error, Result};

/// Reduction parameters. The defaults `delta = 3/4`, `eta = 0.501` match the
/// common computer-algebra defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct LllParams {
    pub delta: Rational,
    pub eta: Rational,
}

impl Default for LllParams {
    fn default() -> Self {
        LllParams {
            delta: Rational::new(3.into(), 4.into()),
            eta: Rational::new(501.into(), 1000.into()),
        }
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct GramSchmidt {
    /// mu[i][j] for j < i
    mu: Vec<Vec<Rational>>,
    /// squared norms of the orthogonalized vectors
    norms: Vec<Rational>,
}

fn gram_schmidt(basis: &[Vec<BigInt>]) -> GramSchmidt {
    let n = basis.len();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut norms = vec![Rational::zero(); n];
    // r[i][j] = <b_i, b*_j>
    let mut r = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut v = Rational::from_integer(dot(&basis[i], &basis[j]));
            for k in 0..j {
                v -= &mu[j][k] * &r[i][k];
            }
            r[i][j] = v.clone();
            if j < i {
                mu[i][j] = if norms[j].is_zero() { Rational::zero() } else { &v / &norms[j] };
            } else {
                norms[i] = v;
            }
        }
    }
    GramSchmidt { mu, norms }
}

fn round(q: &Rational) -> BigInt {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    (q + half).floor().to_integer()
}

/// LLL-reduces `basis` (row vectors). The lattice spanned is unchanged.
///
/// Fails with [`Error::DegenerateLattice`] when the input vectors are
/// linearly dependent.
pub fn lll_reduce(basis: &[Vec<BigInt>], params: &LllParams) -> Result<Vec<Vec<BigInt>>> {
    let n = basis.len();
    let mut b: Vec<Vec<BigInt>> = basis.to_vec();
    if n == 0 {
        return Ok(b);
    }
    let mut gs = gram_schmidt(&b);
    if gs.norms.iter().any(|x| x.is_zero()) {
        return Err(Error::DegenerateLattice);
    }
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            if gs.mu[k][j].abs() > params.eta {
                let q = round(&gs.mu[k][j]);
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = Rational::from_integer(q);
                for i in 0..j {
                    let v = &gs.mu[j][i] * &qr;
                    gs.mu[k][i] -= v;
                }
                gs.mu[k][j] -= &qr;
            }
        }
        let mu = &gs.mu[k][k - 1];
        let lovasz = (&params.delta - mu * mu) * &gs.norms[k - 1];
        if gs.norms[k] >= lovasz {
            k += 1;
        } else {
            b.swap(k, k - 1);
            gs = gram_schmidt(&b);
            k = (k - 1).max(1);
        }
    }
    Ok(b)
}

/// Gram determinant `det(B B^T)`, invariant under change of lattice basis.
pub fn gram_determinant(basis: &[Vec<BigInt>]) -> Rational {
    gram_schmidt(basis).norms.iter().fold(Rational::one(), |acc, x| acc * x)
}

pub fn squared_norm(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

/// Divides out the gcd of the entries (zero vector left untouched).
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}
