//! Sparse multivariate Laurent polynomials with exact integer coefficients.

mod sums;

pub use sums::*;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Terms are keyed by exponent vectors aligned with `vars`.
#[derive(Clone, Debug, Default)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        LaurentPoly {
            vars: Vec::new(),
            terms,
        }
    }

    /// The monomial `name^exp`.
    pub fn var_pow(name: &str, exp: i32) -> Self {
        LaurentPoly::monomial(&[name], &[exp], 1)
    }

    pub fn var(name: &str) -> Self {
        LaurentPoly::var_pow(name, 1)
    }

    pub fn monomial(vars: &[&str], exps: &[i32], coeff: impl Into<BigInt>) -> Self {
        assert_eq!(vars.len(), exps.len(), "one exponent per variable");
        let mut p = LaurentPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        };
        let c = coeff.into();
        if !c.is_zero() {
            p.terms.insert(exps.to_vec(), c);
        }
        p
    }

    /// `name + name^-1`.
    pub fn balanced(name: &str) -> Self {
        LaurentPoly::var(name) + LaurentPoly::var_pow(name, -1)
    }

    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i32>, BigInt)>,
    {
        let mut p = LaurentPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        };
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exps: Vec<i32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Re-expresses the polynomial over `vars`, which must contain every variable in use.
    pub fn over(&self, vars: &[String]) -> Self {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = LaurentPoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                match map[i] {
                    Some(j) => ne[j] = x,
                    None => assert_eq!(x, 0, "variable {} is in use", self.vars[i]),
                }
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    fn merged_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = LaurentPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exponent of `name` in each term, as (min, max). `None` for the zero polynomial.
    pub fn degree_range(&self, name: &str) -> Option<(i32, i32)> {
        let i = self.var_index(name);
        let exps = self.terms.keys().map(|e| i.map_or(0, |i| e[i]));
        exps.fold(None, |acc, x| {
            Some(acc.map_or((x, x), |(lo, hi): (i32, i32)| (lo.min(x), hi.max(x))))
        })
    }

    /// The inverse of a unit monomial `±m`.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if !c.abs().is_one() {
            return None;
        }
        let mut out = LaurentPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        out.add_term(e.iter().map(|x| -x).collect(), c.clone());
        Some(out)
    }

    /// Replaces `name` by `value`. Negative powers need `value` to be a unit monomial.
    pub fn substitute(&self, name: &str, value: &LaurentPoly) -> Result<Self> {
        let Some(i) = self.var_index(name) else {
            return Ok(self.clone());
        };
        let inverse = value.unit_inverse();
        let rest: Vec<String> = self.vars.iter().filter(|v| *v != name).cloned().collect();
        let mut powers: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        let mut out = LaurentPoly {
            vars: rest.clone(),
            terms: BTreeMap::new(),
        };
        let mut buckets: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let x = ne.remove(i);
            buckets
                .entry(x)
                .or_insert_with(|| LaurentPoly {
                    vars: rest.clone(),
                    terms: BTreeMap::new(),
                })
                .add_term(ne, c.clone());
        }
        for (x, coeff) in buckets {
            if let std::collections::btree_map::Entry::Vacant(e) = powers.entry(x) {
                let p = if x >= 0 {
                    value.pow(x as u32)
                } else {
                    let inv = inverse.as_ref().ok_or_else(|| {
                        Error::Polynomial(format!(
                            "cannot substitute non-unit {value} for {name} with exponent {x}"
                        ))
                    })?;
                    inv.pow((-x) as u32)
                };
                e.insert(p);
            }
            out = out + &coeff * &powers[&x];
        }
        Ok(out)
    }

    pub fn evaluate(&self, name: &str, value: i64) -> Result<Self> {
        self.substitute(name, &LaurentPoly::constant(value))
    }

    /// Evaluates every variable, requiring values of ±1 for variables with negative exponents.
    pub fn evaluate_all(&self, values: &[(&str, i64)]) -> Result<BigInt> {
        let mut p = self.clone();
        for &(n, v) in values {
            p = p.evaluate(n, v)?;
        }
        if p.terms.keys().any(|e| e.iter().any(|&x| x != 0)) {
            return Err(Error::Polynomial(format!(
                "variables remain after evaluation: {p}"
            )));
        }
        Ok(p.terms.values().cloned().sum())
    }

    /// Coefficient at the given named exponents (unnamed variables at 0).
    pub fn coeff(&self, exps: &[(&str, i32)]) -> BigInt {
        let mut key = vec![0; self.vars.len()];
        for &(n, x) in exps {
            match self.var_index(n) {
                Some(i) => key[i] = x,
                None if x == 0 => {}
                None => return BigInt::zero(),
            }
        }
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Applies `f` to every exponent vector, keeping coefficients.
    pub fn map_exponents(&self, vars: &[&str], f: impl Fn(&[i32]) -> Vec<i32>) -> Self {
        let mut out = LaurentPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    /// Small integer coefficient, if it fits.
    pub fn coeff_i64(&self, exps: &[(&str, i32)]) -> Option<i64> {
        self.coeff(exps).to_i64()
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let vars = self.merged_vars(other);
        self.over(&vars).terms == other.over(&vars).terms
    }
}

impl Eq for LaurentPoly {}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = if self.vars == rhs.vars {
            self.clone()
        } else {
            self.over(&self.merged_vars(rhs))
        };
        let r = if rhs.vars == out.vars {
            rhs.clone()
        } else {
            rhs.over(&out.vars)
        };
        for (e, c) in r.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl Add<&LaurentPoly> for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        &self + rhs
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        if self.vars == rhs.vars {
            for (e, c) in &rhs.terms {
                self.add_term(e.clone(), c.clone());
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let vars = self.merged_vars(rhs);
        let a = if self.vars == vars {
            self.clone()
        } else {
            self.over(&vars)
        };
        let b = if rhs.vars == vars {
            rhs.clone()
        } else {
            rhs.over(&vars)
        };
        let mut out = LaurentPoly {
            vars,
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                out.add_term(ea.iter().zip(eb).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Mul<&LaurentPoly> for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        &self * rhs
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing lexicographic exponent order, e.g. `q^2+2+q^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if c.is_negative() {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let factors: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &x)| x != 0)
                .map(|(v, &x)| {
                    if x == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{x}")
                    }
                })
                .collect();
            let a = c.abs();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
