//! Homogeneous polynomials in `X, Y, Z` with rational coefficients, and the
//! textual monomial syntax used in map files.
//!
//! Syntax: a sum of terms separated by `+`/`-`; a term is an optional
//! coefficient (`3`, `3/2`) followed by factors `X`, `Y`, `Z`, each with an
//! optional `^k`, joined by `*`. Examples: `X^2*Z^2`, `-3/2*X*Y + Z^2`, `1`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::parse_q;
use crate::Q;

/// Exponents of `X, Y, Z`.
pub type Exp = [u32; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    degree: u32,
    terms: BTreeMap<Exp, Q>,
}

fn exp_degree(e: &Exp) -> u32 {
    e[0] + e[1] + e[2]
}

impl HomPoly {
    pub fn zero(degree: u32) -> Self {
        HomPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exp: Exp, coef: Q) -> Self {
        let mut p = HomPoly::zero(exp_degree(&exp));
        if !coef.is_zero() {
            p.terms.insert(exp, coef);
        }
        p
    }

    /// `X`, `Y` or `Z` for `i = 0, 1, 2`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        HomPoly::monomial(e, Q::one())
    }

    /// Builds a polynomial, rejecting terms of the wrong degree and dropping
    /// zero coefficients.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (Exp, Q)>) -> Result<Self> {
        let mut p = HomPoly::zero(degree);
        for (e, c) in terms {
            if exp_degree(&e) != degree {
                return Err(Error::Parse(format!(
                    "monomial {e:?} has degree {}, expected {degree}",
                    exp_degree(&e)
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exp, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exp, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exp) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, s: &Q) -> HomPoly {
        let mut p = HomPoly::zero(self.degree);
        if s.is_zero() {
            return p;
        }
        for (e, c) in &self.terms {
            p.terms.insert(*e, c * s);
        }
        p
    }

    pub fn add(&self, other: &HomPoly) -> HomPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.degree, other.degree,
            "adding polynomials of different degree"
        );
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(*e, c.clone());
        }
        p
    }

    pub fn sub(&self, other: &HomPoly) -> HomPoly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        let mut p = HomPoly::zero(self.degree + other.degree);
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                p.add_term([e[0] + f[0], e[1] + f[1], e[2] + f[2]], c * d);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> HomPoly {
        let mut acc = HomPoly::monomial([0, 0, 0], Q::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, pt: &[Q; 3]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (e, c)| {
            let mut t = c.clone();
            for (v, &k) in pt.iter().zip(e) {
                for _ in 0..k {
                    t *= v;
                }
            }
            acc + t
        })
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> HomPoly {
        let mut p = HomPoly::zero(self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                p.add_term(f, c * Q::from_integer(e[i].into()));
            }
        }
        p
    }

    /// Parses the monomial syntax; the degree is taken from the terms.
    pub fn parse(s: &str) -> Result<HomPoly> {
        let terms = parse_terms(s)?;
        let degree = terms
            .first()
            .map(|(e, _)| exp_degree(e))
            .ok_or_else(|| Error::Parse(format!("empty polynomial {s:?}")))?;
        HomPoly::from_terms(degree, terms)
    }
}

fn parse_terms(s: &str) -> Result<Vec<(Exp, Q)>> {
    let bad = |msg: &str| Error::Parse(format!("{msg} in {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty polynomial"));
    }
    let mut out = Vec::new();
    let bytes = compact.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let mut sign = Q::one();
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
        } else if pos != 0 {
            return Err(bad("expected '+' or '-'"));
        }
        let end = compact[pos..]
            .find(['+', '-'])
            .map_or(compact.len(), |k| pos + k);
        let term = &compact[pos..end];
        if term.is_empty() {
            return Err(bad("empty term"));
        }
        let (e, c) = parse_term(term).map_err(|m| bad(&m))?;
        out.push((e, c * sign));
        pos = end;
    }
    Ok(out)
}

fn parse_term(t: &str) -> std::result::Result<(Exp, Q), String> {
    let mut coef = Q::one();
    let mut exp = [0u32; 3];
    for (k, factor) in t.split('*').enumerate() {
        if factor.is_empty() {
            return Err("empty factor".into());
        }
        let first = factor.as_bytes()[0];
        if first.is_ascii_digit() {
            if k != 0 {
                return Err(format!("coefficient {factor:?} must come first"));
            }
            coef = parse_q(factor).map_err(|e| e.to_string())?;
            continue;
        }
        let var = match first {
            b'X' => 0,
            b'Y' => 1,
            b'Z' => 2,
            _ => return Err(format!("unknown variable in {factor:?}")),
        };
        let power = match &factor[1..] {
            "" => 1,
            rest => rest
                .strip_prefix('^')
                .and_then(|n| n.parse::<u32>().ok())
                .ok_or_else(|| format!("bad exponent in {factor:?}"))?,
        };
        exp[var] += power;
    }
    Ok((exp, coef))
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest monomials first
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || exp_degree(e) == 0 {
                factors.push(a.to_string());
            }
            for (name, &p) in ["X", "Y", "Z"].iter().zip(e) {
                match p {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    _ => factors.push(format!("{name}^{p}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
