//! Laurent polynomials in `s` (with `s^2 = q`) over the Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gauss::{fmt_gauss, gauss_i, gauss_int, Gauss};

/// Exact scalar: `Σ c_e s^e` with `s^2 = q`.
///
/// Exponents are stored in units of `s`, so `q^k` has exponent `2k`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QScalar {
    terms: BTreeMap<i64, Gauss>,
}

impl QScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(gauss_int(1))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(gauss_int(n))
    }

    pub fn constant(c: Gauss) -> Self {
        Self::monomial(c, 0)
    }

    pub fn i() -> Self {
        Self::constant(gauss_i())
    }

    /// `c * s^e`.
    pub fn monomial(c: Gauss, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `s^e`.
    pub fn s_pow(e: i64) -> Self {
        Self::monomial(gauss_int(1), e)
    }

    /// `q^k = s^(2k)`.
    pub fn q_pow(k: i64) -> Self {
        Self::s_pow(2 * k)
    }

    pub fn s() -> Self {
        Self::s_pow(1)
    }

    pub fn q() -> Self {
        Self::s_pow(2)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterate `(s-exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Gauss)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Gauss {
        self.terms.get(&e).cloned().unwrap_or_else(Gauss::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn has_odd_exponent(&self) -> bool {
        self.terms.keys().any(|e| e.rem_euclid(2) == 1)
    }

    /// The constant value if the scalar has no `s`-dependence.
    pub fn as_constant(&self) -> Option<Gauss> {
        match self.terms.len() {
            0 => Some(Gauss::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, e: i64, c: Gauss) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Gauss::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Gauss) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Star-conjugation: fixes `s`, conjugates coefficients.
    pub fn star(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v.conj())).collect(),
        }
    }

    /// Substitute `s -> s^-1` (so `q -> q^-1`).
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (-e, v.clone())).collect(),
        }
    }

    /// Value at `s = 1`.
    pub fn at_one(&self) -> Gauss {
        self.terms.values().fold(Gauss::zero(), |acc, c| acc + c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact division; `None` when `other` does not divide `self` in the Laurent ring.
    pub fn checked_div(&self, other: &QScalar) -> Option<QScalar> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dlo, dhi) = (other.min_exp()?, other.max_exp()?);
        let lead = super::gauss::gauss_inv(&other.coeff(dhi));
        let mut rem = self.clone();
        let mut quot = QScalar::zero();
        // long division from the top exponent
        while let Some(rhi) = rem.max_exp() {
            let rlo = rem.min_exp().unwrap();
            if rhi - rlo < dhi - dlo {
                return None;
            }
            let c = rem.coeff(rhi) * &lead;
            let e = rhi - dhi;
            quot.add_term(e, c.clone());
            rem = &rem - &other.shift(e).scale(&c);
        }
        Some(quot)
    }
}

impl fmt::Display for QScalar {
    /// Canonical rendering: ascending exponents, `c*q^(e/2)` joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{}*q^({}/2)", fmt_gauss(c), e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        let mut out = QScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: &QScalar) -> QScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss::rat;

    #[test]
    fn canonical_text() {
        let x = QScalar::q() + QScalar::q_pow(-1);
        assert_eq!(x.to_string(), "1*q^(-2/2) + 1*q^(2/2)");
        assert_eq!(QScalar::zero().to_string(), "0");
        let y = QScalar::i().shift(1);
        assert_eq!(y.to_string(), "i*q^(1/2)");
        let h = QScalar::constant(gauss_rat_pair(1, 2, -3, 1));
        assert_eq!(h.to_string(), "(1/2-3*i)*q^(0/2)");
    }

    fn gauss_rat_pair(a: i64, b: i64, c: i64, d: i64) -> Gauss {
        Gauss::new(rat(a, b), rat(c, d))
    }

    #[test]
    fn division() {
        let a = QScalar::q() - QScalar::q_pow(-1);
        let b = QScalar::s() - QScalar::s_pow(-1);
        let c = a.checked_div(&b).unwrap();
        assert_eq!(c, QScalar::s() + QScalar::s_pow(-1));
        assert!(QScalar::one().checked_div(&b).is_none());
    }
}
