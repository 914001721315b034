//! Text input for maps.
//!
//! Two forms are accepted:
//! - an affine rational function of one variable, e.g. `z^2 - 7/4` or
//!   `7/24*z - 7/(6z)`, homogenized to a map on P^1;
//! - a bracketed list of homogeneous forms, e.g. `[x^2 - 21/16*z^2, y^2 - 2*z^2, z^2]`,
//!   in the variables x, y, z, u, v, w.
//!
//! Multiplication may be implicit before a variable or a parenthesis.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::map::HomogeneousMap;
use super::multipoly::MultiPoly;
use super::univariate::UniPoly;
use crate::algebra::scalar::{Rational, Scalar};
use crate::error::{Error, Result};

const BRACKET_VARS: [char; 6] = ['x', 'y', 'z', 'u', 'v', 'w'];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(char),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((Tok::Num(text.parse().unwrap()), pos));
        } else if c.is_ascii_alphabetic() {
            if i + 1 < chars.len() && chars[i + 1].1.is_ascii_alphanumeric() {
                return Err(Error::Parse { pos, msg: "variables are single letters".into() });
            }
            out.push((Tok::Var(c), pos));
            i += 1;
        } else if "+-*/^()[],".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character '{}'", c) });
        }
    }
    Ok(out)
}

#[derive(Debug)]
enum Expr {
    Num(BigInt),
    Var(char),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse { pos: self.pos(), msg: format!("expected '{}'", c) })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else if matches!(self.peek(), Some(Tok::Var(_)) | Some(Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.at += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::Parse { pos, msg: "exponent too large".into() })?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(Error::Parse { pos, msg: "expected a nonnegative integer exponent".into() }),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Var(c)) => {
                self.at += 1;
                Ok(Expr::Var(c))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(Error::Parse { pos, msg: format!("unexpected '{}'", c) }),
            None => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
        }
    }
}

fn collect_vars(e: &Expr, out: &mut BTreeSet<char>) {
    match e {
        Expr::Num(_) => {}
        Expr::Var(c) => {
            out.insert(*c);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Expr::Neg(a) | Expr::Pow(a, _) => collect_vars(a, out),
    }
}

/// Numerator and denominator polynomials.
type Frac = (MultiPoly<Rational>, MultiPoly<Rational>);

fn one() -> Rational {
    Rational::one()
}

fn eval(e: &Expr, index: &dyn Fn(char) -> usize, nvars: usize, poly_den: bool) -> Result<Frac> {
    let constant = |q: Rational| MultiPoly::constant(nvars, q);
    Ok(match e {
        Expr::Num(n) => (constant(Rational::from_integer(n.clone())), constant(one())),
        Expr::Var(c) => (MultiPoly::var(nvars, index(*c), one()), constant(one())),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (an, ad) = eval(a, index, nvars, poly_den)?;
            let (bn, bd) = eval(b, index, nvars, poly_den)?;
            let l = an.mul(&bd);
            let r = bn.mul(&ad);
            let num = if matches!(e, Expr::Add(..)) { l.add(&r) } else { l.sub(&r) };
            (num, ad.mul(&bd))
        }
        Expr::Mul(a, b) => {
            let (an, ad) = eval(a, index, nvars, poly_den)?;
            let (bn, bd) = eval(b, index, nvars, poly_den)?;
            (an.mul(&bn), ad.mul(&bd))
        }
        Expr::Div(a, b, pos) => {
            let (an, ad) = eval(a, index, nvars, poly_den)?;
            let (bn, bd) = eval(b, index, nvars, poly_den)?;
            if bn.is_zero() {
                return Err(Error::Parse { pos: *pos, msg: "division by zero".into() });
            }
            if !poly_den && bn.total_degree() != Some(0) {
                return Err(Error::Parse { pos: *pos, msg: "division by a non-constant in a bracketed map".into() });
            }
            (an.mul(&bd), ad.mul(&bn))
        }
        Expr::Neg(a) => {
            let (n, d) = eval(a, index, nvars, poly_den)?;
            (n.neg(), d)
        }
        Expr::Pow(a, k) => {
            let (n, d) = eval(a, index, nvars, poly_den)?;
            if *k == 0 {
                (constant(one()), constant(one()))
            } else {
                (n.pow(*k), d.pow(*k))
            }
        }
    })
}

fn to_uni(p: &MultiPoly<Rational>) -> UniPoly {
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut cs = vec![Rational::zero(); deg + 1];
    for (e, c) in p.terms() {
        cs[e[0] as usize] = c.clone();
    }
    UniPoly::new(cs)
}

/// `y^d p(x/y)` as a form in (x, y).
fn homogenize(p: &UniPoly, d: usize) -> MultiPoly<Rational> {
    MultiPoly::from_terms(
        2,
        p.coeffs().iter().enumerate().filter(|(_, c)| !Scalar::is_zero(*c)).map(|(i, c)| (vec![i as u32, (d - i) as u32], c.clone())),
    )
}

/// Parses a map. `dimension_hint`, when given, must match the parsed `N`.
pub fn parse_map_with_hint(text: &str, dimension_hint: Option<usize>) -> Result<HomogeneousMap> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, at: 0, end: text.len() };
    let map = if parser.peek() == Some(&Tok::Op('[')) {
        parser.at += 1;
        let mut exprs = vec![parser.expr()?];
        while parser.eat(',') {
            exprs.push(parser.expr()?);
        }
        parser.expect(']')?;
        if parser.peek().is_some() {
            return Err(Error::Parse { pos: parser.pos(), msg: "trailing input after ']'".into() });
        }
        if exprs.len() < 2 {
            return Err(Error::Parse { pos: 0, msg: "a bracketed map needs at least two coordinates".into() });
        }
        bracket_map(&exprs)?
    } else {
        let e = parser.expr()?;
        if parser.peek().is_some() {
            return Err(Error::Parse { pos: parser.pos(), msg: "unexpected trailing input".into() });
        }
        affine_map(&e)?
    };
    if map.degree() < 2 {
        return Err(Error::InvalidMap(format!("degree {} < 2", map.degree())));
    }
    if let Some(n) = dimension_hint {
        if n != map.dimension() {
            return Err(Error::Dimension { expected: n, got: map.dimension() });
        }
    }
    Ok(map)
}

pub fn parse_map(text: &str) -> Result<HomogeneousMap> {
    parse_map_with_hint(text, None)
}

fn bracket_map(exprs: &[Expr]) -> Result<HomogeneousMap> {
    let k = exprs.len();
    let mut used = BTreeSet::new();
    for e in exprs {
        collect_vars(e, &mut used);
    }
    if let Some(bad) = used.iter().find(|c| !BRACKET_VARS.contains(c)) {
        return Err(Error::Parse { pos: 0, msg: format!("unknown variable '{}'", bad) });
    }
    // the first k of x,y,z,u,v,w; or exactly k of them in that order
    let names: Vec<char> = if used.iter().all(|c| BRACKET_VARS[..k.min(6)].contains(c)) {
        BRACKET_VARS[..k.min(6)].to_vec()
    } else if used.len() == k {
        BRACKET_VARS.iter().copied().filter(|c| used.contains(c)).collect()
    } else {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("{} coordinates need variables among {:?}", k, &BRACKET_VARS[..k.min(6)]),
        });
    };
    if names.len() != k {
        return Err(Error::Parse { pos: 0, msg: format!("at most {} coordinates are supported", BRACKET_VARS.len()) });
    }
    let index = |c: char| names.iter().position(|&n| n == c).unwrap();
    let mut coords = Vec::with_capacity(k);
    for e in exprs {
        let (n, d) = eval(e, &index, k, false)?;
        let dc = d.coeff(&vec![0; k]).cloned().unwrap();
        coords.push(n.scale(&dc.recip()));
    }
    HomogeneousMap::new(coords)
}

fn affine_map(e: &Expr) -> Result<HomogeneousMap> {
    let mut used = BTreeSet::new();
    collect_vars(e, &mut used);
    if used.len() > 1 {
        return Err(Error::Parse { pos: 0, msg: "an affine map uses a single variable; use brackets for P^N".into() });
    }
    let (n, d) = eval(e, &|_| 0, 1, true)?;
    let (num, den) = (to_uni(&n), to_uni(&d));
    let g = num.gcd(&den);
    let num = num.div_rem(&g).0;
    let den = den.div_rem(&g).0;
    let deg = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
    if num.is_zero() {
        return Err(Error::InvalidMap("the zero function is not a map".into()));
    }
    HomogeneousMap::new(vec![homogenize(&num, deg), homogenize(&den, deg)])
}
