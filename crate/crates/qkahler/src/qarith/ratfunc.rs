//! Rational functions in `s` over `Q(i)`: the symbolic field.

use std::fmt;

use num_traits::{One, Zero};

use super::gauss::{fmt_gauss, gauss_int, Gauss};
use super::poly::Poly;
use super::qscalar::QScalar;

/// `num / den` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Gauss::one())
    }

    pub fn constant(c: Gauss) -> Self {
        Self {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn s() -> Self {
        Self::from_qscalar(&QScalar::s())
    }

    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let l = d.lead().unwrap().clone();
        if !l.is_one() {
            let inv = super::gauss::gauss_inv(&l);
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Self { num: n, den: d }
    }

    pub fn from_qscalar(x: &QScalar) -> Self {
        let Some(lo) = x.min_exp() else {
            return Self::zero();
        };
        let shift = (-lo).max(0);
        let hi = x.max_exp().unwrap() + shift;
        let mut coeffs = vec![Gauss::zero(); (hi + 1) as usize];
        for (e, c) in x.terms() {
            coeffs[(e + shift) as usize] = c.clone();
        }
        let num = Poly::from_coeffs(coeffs);
        let den = Poly::monomial(gauss_int(1), shift as usize);
        Self::new(num, den)
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial equal to `self`, if the denominator is a power of `s`.
    pub fn to_qscalar(&self) -> Option<QScalar> {
        let dd = self.den.degree().unwrap();
        if self.den.coeffs()[..dd].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = QScalar::zero();
        for (k, c) in self.num.coeffs().iter().enumerate() {
            out += &QScalar::monomial(c.clone(), k as i64 - dd as i64);
        }
        Some(out)
    }

    pub fn as_constant(&self) -> Option<Gauss> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.coeffs().first().cloned().unwrap_or_else(Gauss::zero))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }

    /// Conjugates coefficients; `s` is real.
    pub fn conj(&self) -> Self {
        Self {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    /// Substitute `s -> s0` in an arbitrary commutative ring.
    pub fn eval_with<T: Clone>(
        &self,
        s0: &T,
        zero: T,
        from: impl Fn(&Gauss) -> T + Copy,
        add: impl Fn(&T, &T) -> T + Copy,
        mul: impl Fn(&T, &T) -> T + Copy,
    ) -> (T, T) {
        (
            self.num.eval_with(s0, zero.clone(), from, add, mul),
            self.den.eval_with(s0, zero, from, add, mul),
        )
    }
}

fn fmt_poly(p: &Poly) -> String {
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        parts.push(format!("{}*q^({}/2)", fmt_gauss(c), k));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for RatFunc {
    /// Laurent polynomials use the canonical scalar form; genuine quotients print as `(num) / (den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_qscalar() {
            Some(x) => write!(f, "{x}"),
            None => write!(f, "({}) / ({})", fmt_poly(&self.num), fmt_poly(&self.den)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let a = RatFunc::from_qscalar(&(QScalar::q() - QScalar::q_pow(-1)));
        let b = RatFunc::from_qscalar(&(QScalar::s() - QScalar::s_pow(-1)));
        let c = a.mul(&b.inv().unwrap());
        assert_eq!(c.to_qscalar().unwrap(), QScalar::s() + QScalar::s_pow(-1));
        let z = c.sub(&c);
        assert!(z.is_zero());
        assert_eq!(
            RatFunc::from_qscalar(&QScalar::q_pow(-3)).to_qscalar().unwrap(),
            QScalar::q_pow(-3)
        );
    }
}
