//! Multivariate polynomials with rational coefficients over named variables.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Sorted `(variable, exponent)` with positive exponents.
type Monomial = Vec<(String, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn constant(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Vec::new(), r);
        }
        Self { terms }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(name: &str) -> Self {
        Self {
            terms: BTreeMap::from([(vec![(name.to_string(), 1)], Rational::one())]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if no variable occurs.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms.keys().flatten().map(|(v, _)| v.clone()).collect()
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Replaces the listed variables by values; others stay symbolic.
    pub fn substitute(&self, values: &HashMap<String, Rational>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for (v, e) in m {
                match values.get(v) {
                    Some(x) => coef *= num_traits::pow(x.clone(), *e as usize),
                    None => rest.push((v.clone(), *e)),
                }
            }
            out.insert(rest, coef);
        }
        out
    }

    pub fn eval(&self, values: &HashMap<String, Rational>) -> Option<Rational> {
        self.substitute(values).as_constant()
    }

    /// For a polynomial of degree at most one in `var` with no other
    /// variables, returns `(a, b)` such that it equals `a·var + b`.
    pub fn as_affine_in(&self, var: &str) -> Option<(Rational, Rational)> {
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for (m, c) in &self.terms {
            match m.as_slice() {
                [] => b += c,
                [(v, 1)] if v == var => a += c,
                _ => return None,
            }
        }
        Some((a, b))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut exps: BTreeMap<String, u32> = BTreeMap::new();
                for (v, e) in m1.iter().chain(m2) {
                    *exps.entry(v.clone()).or_default() += e;
                }
                out.insert(exps.into_iter().collect(), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // constant last, higher degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let deg = |m: &Monomial| m.iter().map(|(_, e)| *e).sum::<u32>();
            deg(b).cmp(&deg(a)).then_with(|| a.cmp(b))
        });
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .iter()
                .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if m.is_empty() {
                write!(f, "{}", rational::format(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", rational::format(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}
