//! Exact antisymmetric bilinear expressions over a finite symbol basis.
//!
//! A [`SymbolVector`] is an integer combination of named transcendentals such as
//! `log_x` or `pi_i`; [`wedge`] expands `a ^ b` bilinearly into a [`WedgeExpr`]
//! keyed by ordered symbol pairs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub const PI_I: &str = "pi_i";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolVector {
    coeffs: BTreeMap<String, BigInt>,
}

impl SymbolVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbol(name: &str) -> Self {
        let mut v = Self::new();
        v.add_term(name, BigInt::one());
        v
    }

    pub fn from_terms<I, S, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (S, C)>,
        S: AsRef<str>,
        C: Into<BigInt>,
    {
        let mut v = Self::new();
        for (s, c) in terms {
            v.add_term(s.as_ref(), c.into());
        }
        v
    }

    pub fn add_term(&mut self, name: &str, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(name.to_owned()).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(name);
        }
    }

    pub fn coeff(&self, name: &str) -> BigInt {
        self.coeffs.get(name).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BigInt)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, k: &BigInt) -> SymbolVector {
        let mut out = SymbolVector::new();
        for (s, c) in &self.coeffs {
            out.add_term(s, c * k);
        }
        out
    }
}

impl std::ops::Add for &SymbolVector {
    type Output = SymbolVector;
    fn add(self, rhs: &SymbolVector) -> SymbolVector {
        let mut out = self.clone();
        for (s, c) in &rhs.coeffs {
            out.add_term(s, c.clone());
        }
        out
    }
}

impl std::ops::Neg for &SymbolVector {
    type Output = SymbolVector;
    fn neg(self) -> SymbolVector {
        self.scaled(&BigInt::from(-1))
    }
}

impl fmt::Display for SymbolVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.coeffs.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}{s}")?;
            } else {
                write!(f, "{sign}{mag}*{s}")?;
            }
        }
        Ok(())
    }
}

/// Element of the exterior square, stored on pairs `(s, t)` with `s < t`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WedgeExpr {
    coeffs: BTreeMap<(String, String), BigInt>,
}

impl WedgeExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `coeff * (s ^ t)`, canonicalized.
    pub fn add_term(&mut self, s: &str, t: &str, coeff: BigInt) {
        if s == t || coeff.is_zero() {
            return;
        }
        let (key, coeff) = if s < t {
            ((s.to_owned(), t.to_owned()), coeff)
        } else {
            ((t.to_owned(), s.to_owned()), -coeff)
        };
        let entry = self.coeffs.entry(key.clone()).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// Coefficient of `s ^ t` (sign-adjusted when `s > t`).
    pub fn coeff(&self, s: &str, t: &str) -> BigInt {
        if s == t {
            return BigInt::zero();
        }
        if s < t {
            self.coeffs
                .get(&(s.to_owned(), t.to_owned()))
                .cloned()
                .unwrap_or_default()
        } else {
            -self.coeff(t, s)
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &str, &BigInt)> {
        self.coeffs
            .iter()
            .map(|((s, t), c)| (s.as_str(), t.as_str(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_scaled(&mut self, k: &BigInt, other: &WedgeExpr) {
        for ((s, t), c) in &other.coeffs {
            self.add_term(s, t, k * c);
        }
    }
}

impl fmt::Display for WedgeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((s, t), c)) in self.coeffs.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { " + " } else { "" };
            let sign = if c.is_negative() && i > 0 { " - " } else { sign };
            write!(f, "{sign}{}*({s}^{t})", c.abs())?;
        }
        Ok(())
    }
}

pub fn wedge(a: &SymbolVector, b: &SymbolVector) -> WedgeExpr {
    let mut out = WedgeExpr::zero();
    for (s, cs) in a.iter() {
        for (t, ct) in b.iter() {
            out.add_term(s, t, cs * ct);
        }
    }
    out
}

pub fn combine<'a, I>(terms: I) -> WedgeExpr
where
    I: IntoIterator<Item = (BigInt, &'a WedgeExpr)>,
{
    let mut out = WedgeExpr::zero();
    for (k, w) in terms {
        out.add_scaled(&k, w);
    }
    out
}

pub fn is_zero(w: &WedgeExpr) -> bool {
    w.is_zero()
}
