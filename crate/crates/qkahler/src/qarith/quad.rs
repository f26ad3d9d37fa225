//! Exact arithmetic in `Q(i)(√d)` for a positive rational `d`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::{fmt_gauss, gauss_inv, gauss_rat, gauss_to_c64, rat_to_f64, Gauss};

/// `a + b·√d`; `d` is a positive rational that is not a perfect square.
#[derive(Clone, Debug)]
pub struct QuadExact {
    a: Gauss,
    b: Gauss,
    d: Option<Arc<BigRational>>,
}

/// Exact square root of a non-negative rational, if it exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl QuadExact {
    pub fn from_gauss(a: Gauss) -> Self {
        Self {
            a,
            b: Gauss::zero(),
            d: None,
        }
    }

    /// `√r` for a positive rational `r`.
    pub fn sqrt_of(r: &BigRational) -> Self {
        assert!(r.is_positive(), "square root of a non-positive rational");
        match rational_sqrt(r) {
            Some(root) => Self::from_gauss(gauss_rat(root)),
            None => Self {
                a: Gauss::zero(),
                b: Gauss::one(),
                d: Some(Arc::new(r.clone())),
            },
        }
    }

    fn norm(mut self) -> Self {
        if self.b.is_zero() {
            self.d = None;
        }
        self
    }

    fn radicand(&self, o: &Self) -> Option<Arc<BigRational>> {
        match (&self.d, &o.d) {
            (Some(x), Some(y)) => {
                assert!(x == y, "mixing square roots of different radicands");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    pub fn rational_part(&self) -> &Gauss {
        &self.a
    }

    pub fn surd_part(&self) -> &Gauss {
        &self.b
    }

    pub fn radicand_value(&self) -> Option<&BigRational> {
        self.d.as_deref()
    }

    pub fn zero() -> Self {
        Self::from_gauss(Gauss::zero())
    }

    pub fn one() -> Self {
        Self::from_gauss(Gauss::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d: self.radicand(o),
        }
        .norm()
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.radicand(o);
        let mut a = &self.a * &o.a;
        if let Some(dv) = &d {
            if !self.b.is_zero() && !o.b.is_zero() {
                a += &self.b * &o.b * gauss_rat((**dv).clone());
            }
        }
        let b = &self.a * &o.b + &self.b * &o.a;
        Self { a, b, d }.norm()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.b.is_zero() {
            return Some(Self::from_gauss(gauss_inv(&self.a)));
        }
        let d = self.d.clone().unwrap();
        let n = &self.a * &self.a - &self.b * &self.b * gauss_rat((*d).clone());
        let ni = gauss_inv(&n);
        Some(
            Self {
                a: &self.a * &ni,
                b: -(&self.b * &ni),
                d: Some(d),
            }
            .norm(),
        )
    }

    pub fn conj(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: self.b.conj(),
            d: self.d.clone(),
        }
    }

    pub fn to_c64(&self) -> num_complex::Complex<f64> {
        let mut z = gauss_to_c64(&self.a);
        if let Some(d) = &self.d {
            z += gauss_to_c64(&self.b) * rat_to_f64(d).sqrt();
        }
        z
    }

    pub fn is_real(&self) -> bool {
        self.a.im.is_zero() && self.b.im.is_zero()
    }

    /// Exact sign of the real part: -1, 0 or 1.
    pub fn real_sign(&self) -> i32 {
        let x = &self.a.re;
        let y = &self.b.re;
        let sx = sign(x);
        let sy = sign(y);
        if sy == 0 || self.d.is_none() {
            return sx;
        }
        if sx == 0 || sx == sy {
            return sy;
        }
        // x and y·√d have opposite signs: compare x^2 with y^2·d
        let d = self.d.as_deref().unwrap();
        let lhs = x * x;
        let rhs = y * y * d;
        if lhs > rhs {
            sx
        } else if lhs < rhs {
            sy
        } else {
            0
        }
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialEq for QuadExact {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b
    }
}

impl fmt::Display for QuadExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.d {
            None => write!(f, "{}", fmt_gauss(&self.a)),
            Some(d) => {
                let ds = if d.is_integer() {
                    d.numer().to_string()
                } else {
                    format!("{}/{}", d.numer(), d.denom())
                };
                if self.a.is_zero() {
                    write!(f, "{}*sqrt({})", fmt_gauss(&self.b), ds)
                } else {
                    write!(f, "{} + {}*sqrt({})", fmt_gauss(&self.a), fmt_gauss(&self.b), ds)
                }
            }
        }
    }
}

impl From<i64> for QuadExact {
    fn from(n: i64) -> Self {
        Self::from_gauss(gauss_rat(BigRational::from_integer(BigInt::from(n))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss::rat;

    #[test]
    fn sqrt_squares_to_radicand() {
        let r = rat(4, 5);
        let s = QuadExact::sqrt_of(&r);
        assert_eq!(s.mul(&s), QuadExact::from_gauss(gauss_rat(r)));
        let t = s.add(&QuadExact::one());
        assert_eq!(t.mul(&t.inv().unwrap()), QuadExact::one());
        let h = QuadExact::sqrt_of(&rat(9, 4));
        assert!(h.radicand_value().is_none());
    }

    #[test]
    fn exact_sign() {
        let s = QuadExact::sqrt_of(&rat(2, 1));
        // sqrt(2) - 1.5 < 0, sqrt(2) - 1.4 > 0
        let a = s.sub(&QuadExact::from_gauss(gauss_rat(rat(3, 2))));
        let b = s.sub(&QuadExact::from_gauss(gauss_rat(rat(7, 5))));
        assert_eq!(a.real_sign(), -1);
        assert_eq!(b.real_sign(), 1);
    }
}
