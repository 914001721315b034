//! Buchberger's algorithm over any field implementing [`Scalar`].

use std::cmp::Ordering;

use super::multipoly::MultiPoly;
use crate::algebra::scalar::Scalar;
use crate::error::{Error, Result};

pub const DEFAULT_PAIR_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Variable 0 largest.
    Lex,
    GrLex,
    GrevLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrLex => {
                let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
                da.cmp(&db).then_with(|| a.cmp(b))
            }
            MonomialOrder::GrevLex => {
                let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// Polynomial with terms sorted ascending in a fixed order; the leading term is last.
#[derive(Clone, Debug, PartialEq)]
struct GPoly<F> {
    terms: Vec<(Vec<u32>, F)>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

impl<F: Scalar> GPoly<F> {
    fn from_multi(p: &MultiPoly<F>, ord: MonomialOrder) -> Self {
        let mut terms: Vec<(Vec<u32>, F)> = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        terms.sort_by(|a, b| ord.cmp(&a.0, &b.0));
        GPoly { terms }
    }

    fn to_multi(&self, nvars: usize) -> MultiPoly<F> {
        MultiPoly::from_terms(nvars, self.terms.iter().cloned())
    }

    fn lead(&self) -> Option<&(Vec<u32>, F)> {
        self.terms.last()
    }

    fn monic(mut self) -> Self {
        if let Some((_, lc)) = self.terms.last() {
            let inv = lc.inv().expect("coefficients must form a field");
            for t in &mut self.terms {
                t.1 = t.1.mul(&inv);
            }
        }
        self
    }

    /// `self - c * x^m * g`.
    fn sub_mul(&self, c: &F, m: &[u32], g: &GPoly<F>, ord: MonomialOrder) -> GPoly<F> {
        let shifted = g.terms.iter().map(|(e, v)| (e.iter().zip(m).map(|(a, b)| a + b).collect::<Vec<u32>>(), v.mul(c)));
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (e, v) = b.next().unwrap();
                    out.push((e, v.neg()));
                }
                (Some(x), Some(y)) => match ord.cmp(&x.0, &y.0) {
                    Ordering::Less => out.push(a.next().unwrap()),
                    Ordering::Greater => {
                        let (e, v) = b.next().unwrap();
                        out.push((e, v.neg()));
                    }
                    Ordering::Equal => {
                        let (e, v) = a.next().unwrap();
                        let (_, w) = b.next().unwrap();
                        let s = v.sub(&w);
                        if !s.is_zero() {
                            out.push((e, s));
                        }
                    }
                },
            }
        }
        GPoly { terms: out }
    }
}

/// Full reduction of `f` by `basis`.
fn normal_form<F: Scalar>(f: &GPoly<F>, basis: &[GPoly<F>], ord: MonomialOrder) -> GPoly<F> {
    let mut p = f.clone();
    let mut rem: Vec<(Vec<u32>, F)> = Vec::new();
    while let Some((le, lc)) = p.lead().cloned() {
        match basis.iter().find(|g| divides(&g.lead().unwrap().0, &le)) {
            Some(g) => {
                let (ge, gc) = g.lead().unwrap();
                let m: Vec<u32> = le.iter().zip(ge).map(|(a, b)| a - b).collect();
                let c = lc.mul(&gc.inv().expect("field coefficients"));
                p = p.sub_mul(&c, &m, g, ord);
            }
            None => {
                rem.push(p.terms.pop().unwrap());
            }
        }
    }
    rem.reverse();
    GPoly { terms: rem }
}

fn s_poly<F: Scalar>(f: &GPoly<F>, g: &GPoly<F>, ord: MonomialOrder) -> GPoly<F> {
    let (fe, fc) = f.lead().unwrap();
    let (ge, gc) = g.lead().unwrap();
    let l = lcm(fe, ge);
    let mf: Vec<u32> = l.iter().zip(fe).map(|(a, b)| a - b).collect();
    let mg: Vec<u32> = l.iter().zip(ge).map(|(a, b)| a - b).collect();
    // (1/fc) x^mf f - (1/gc) x^mg g
    let zero = GPoly { terms: Vec::new() };
    let a = zero.sub_mul(&fc.inv().unwrap().neg(), &mf, f, ord);
    a.sub_mul(&gc.inv().unwrap(), &mg, g, ord)
}

/// Reduced Gröbner basis, sorted by leading monomial ascending. A unit ideal
/// returns `[1]`; the zero ideal returns `[]`.
pub fn buchberger<F: Scalar>(gens: &[MultiPoly<F>], ord: MonomialOrder, cap: usize) -> Result<Vec<MultiPoly<F>>> {
    let Some(nvars) = gens.first().map(|g| g.nvars()) else {
        return Ok(Vec::new());
    };
    let mut basis: Vec<GPoly<F>> = Vec::new();
    for g in gens {
        let gp = GPoly::from_multi(g, ord);
        let r = normal_form(&gp, &basis, ord);
        if r.lead().is_some() {
            basis.push(r.monic());
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut done = 0usize;
    while !pairs.is_empty() {
        if basis.iter().any(|g| g.lead().unwrap().0.iter().all(|&e| e == 0)) {
            break;
        }
        // normal strategy: smallest lcm, then smallest indices
        let (k, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = lcm(&basis[a.0].lead().unwrap().0, &basis[a.1].lead().unwrap().0);
                let lb = lcm(&basis[b.0].lead().unwrap().0, &basis[b.1].lead().unwrap().0);
                ord.cmp(&la, &lb).then_with(|| (a.1, a.0).cmp(&(b.1, b.0)))
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(k);
        let li = &basis[i].lead().unwrap().0;
        let lj = &basis[j].lead().unwrap().0;
        // first criterion: coprime leading monomials
        if li.iter().zip(lj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        // second criterion: a k whose leading monomial divides the lcm with both pairs already treated
        let l = lcm(li, lj);
        let in_queue = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
        if (0..basis.len()).any(|m| m != i && m != j && divides(&basis[m].lead().unwrap().0, &l) && !in_queue(i, m) && !in_queue(j, m)) {
            continue;
        }
        done += 1;
        if done > cap {
            return Err(Error::Resource(format!("Gröbner basis exceeded {} pair reductions", cap)));
        }
        let s = s_poly(&basis[i], &basis[j], ord);
        let r = normal_form(&s, &basis, ord);
        if r.lead().is_some() {
            let r = r.monic();
            let n = basis.len();
            basis.push(r);
            for m in 0..n {
                pairs.push((m, n));
            }
        }
    }
    // unit ideal
    if let Some(u) = basis.iter().find(|g| g.lead().unwrap().0.iter().all(|&e| e == 0)) {
        let one = u.lead().unwrap().1.one_like();
        return Ok(vec![MultiPoly::constant(nvars, one)]);
    }
    // minimal basis
    let mut minimal: Vec<GPoly<F>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let lg = &g.lead().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(o, h)| {
            let lh = &h.lead().unwrap().0;
            o != idx && divides(lh, lg) && (lh != lg || o < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    // interreduce
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<GPoly<F>> = minimal.iter().enumerate().filter(|(o, _)| *o != k).map(|(_, g)| g.clone()).collect();
        let (le, lc) = minimal[k].lead().unwrap().clone();
        let mut tail = minimal[k].clone();
        tail.terms.pop();
        let mut r = normal_form(&tail, &others, ord);
        let pos = r.terms.iter().position(|(e, _)| ord.cmp(e, &le) == Ordering::Greater).unwrap_or(r.terms.len());
        r.terms.insert(pos, (le, lc));
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| ord.cmp(&a.lead().unwrap().0, &b.lead().unwrap().0));
    Ok(reduced.iter().map(|g| g.to_multi(nvars)).collect())
}

/// Leading monomial of `p` under `ord`.
pub fn leading_monomial<F: Scalar>(p: &MultiPoly<F>, ord: MonomialOrder) -> Option<Vec<u32>> {
    p.terms().map(|(e, _)| e.clone()).max_by(|a, b| ord.cmp(a, b))
}

/// Remainder of `f` on division by `basis`.
pub fn reduce<F: Scalar>(f: &MultiPoly<F>, basis: &[MultiPoly<F>], ord: MonomialOrder) -> MultiPoly<F> {
    let b: Vec<GPoly<F>> = basis.iter().map(|g| GPoly::from_multi(g, ord)).collect();
    normal_form(&GPoly::from_multi(f, ord), &b, ord).to_multi(f.nvars())
}

/// Checks the Gröbner property directly: every S-polynomial reduces to zero.
pub fn is_groebner_basis<F: Scalar>(basis: &[MultiPoly<F>], ord: MonomialOrder) -> bool {
    let b: Vec<GPoly<F>> = basis.iter().map(|g| GPoly::from_multi(g, ord)).collect();
    for j in 0..b.len() {
        for i in 0..j {
            if normal_form(&s_poly(&b[i], &b[j], ord), &b, ord).lead().is_some() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{Fp, Rational};

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    fn x(i: usize) -> MultiPoly<Rational> {
        MultiPoly::var(2, i, q(1))
    }

    fn c(a: i64) -> MultiPoly<Rational> {
        MultiPoly::constant(2, q(a))
    }

    #[test]
    fn already_reduced() {
        let gens = vec![x(0).sub(&c(1)), x(1).sub(&c(2))];
        let gb = buchberger(&gens, MonomialOrder::Lex, DEFAULT_PAIR_CAP).unwrap();
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&gens[0]) && gb.contains(&gens[1]));
    }

    #[test]
    fn elimination_example() {
        let gens = vec![x(0).mul(&x(0)).sub(&x(1)), x(1).sub(&c(4))];
        let gb = buchberger(&gens, MonomialOrder::Lex, DEFAULT_PAIR_CAP).unwrap();
        assert!(gb.contains(&x(0).mul(&x(0)).sub(&c(4))));
        assert!(gb.contains(&x(1).sub(&c(4))));
        assert!(is_groebner_basis(&gb, MonomialOrder::Lex));
        // both claimed elements lie in the original ideal
        for g in &gb {
            let r = reduce(g, &gb, MonomialOrder::Lex);
            assert!(r.is_zero());
        }
    }

    #[test]
    fn inconsistent_is_unit() {
        let gens = vec![x(0), x(0).sub(&c(1))];
        let gb = buchberger(&gens, MonomialOrder::Lex, DEFAULT_PAIR_CAP).unwrap();
        assert_eq!(gb, vec![c(1)]);
    }

    #[test]
    fn grevlex_over_fp() {
        let p = 5;
        let one = Fp::new(1, p);
        let xv = |i| MultiPoly::var(3, i, one);
        // x^2 - y z, y^2 - x z, z^2 - x y: not zero dimensional (the point (1:1:1))
        let gens = vec![
            xv(0).mul(&xv(0)).sub(&xv(1).mul(&xv(2))),
            xv(1).mul(&xv(1)).sub(&xv(0).mul(&xv(2))),
            xv(2).mul(&xv(2)).sub(&xv(0).mul(&xv(1))),
        ];
        let gb = buchberger(&gens, MonomialOrder::GrevLex, DEFAULT_PAIR_CAP).unwrap();
        assert!(is_groebner_basis(&gb, MonomialOrder::GrevLex));
    }

    #[test]
    fn orders() {
        let o = MonomialOrder::GrevLex;
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(MonomialOrder::GrLex.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&[1, 0, 0], &[0, 5, 5]), Ordering::Greater);
    }
}
