//! Evaluation of symbolic scalars at a concrete deformation parameter.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::gauss::{gauss_rat, gauss_to_c64, rat_to_f64, Gauss};
use super::qscalar::QScalar;
use super::quad::rational_sqrt;
use super::C64;

#[derive(Clone, Debug, PartialEq)]
pub enum Q0 {
    Rational(BigRational),
    Float(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    ExactRational,
    Floating,
}

/// A concrete value `q0 > 0` together with the arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPoint {
    pub q0: Q0,
    pub mode: EvalMode,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalValue {
    Exact(Gauss),
    Float(C64),
}

impl EvalValue {
    pub fn to_c64(&self) -> C64 {
        match self {
            EvalValue::Exact(g) => gauss_to_c64(g),
            EvalValue::Float(z) => *z,
        }
    }
}

impl EvalPoint {
    pub fn exact(q0: BigRational) -> Self {
        Self {
            q0: Q0::Rational(q0),
            mode: EvalMode::ExactRational,
        }
    }

    pub fn floating(q0: f64) -> Self {
        Self {
            q0: Q0::Float(q0),
            mode: EvalMode::Floating,
        }
    }

    pub fn q0_f64(&self) -> f64 {
        match &self.q0 {
            Q0::Rational(r) => rat_to_f64(r),
            Q0::Float(x) => *x,
        }
    }

    pub fn q0_rational(&self) -> Option<&BigRational> {
        match &self.q0 {
            Q0::Rational(r) => Some(r),
            Q0::Float(_) => None,
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match &self.q0 {
            Q0::Rational(r) => r.is_positive(),
            Q0::Float(x) => *x > 0.0 && x.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain("evaluation point needs q0 > 0".into()))
        }
    }
}

/// Parse a positive rational such as `4/5`, `1`, or `0.8`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Domain(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((i, f)) = t.split_once('.') {
        let digits = format!("{i}{f}");
        let n = BigInt::from_str(&digits).map_err(|_| bad())?;
        let d = BigInt::from(10u32).pow(f.len() as u32);
        return Ok(BigRational::new(n, d));
    }
    Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
}

impl FromStr for EvalPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(EvalPoint::exact(parse_rational(s)?))
    }
}

impl fmt::Display for EvalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.q0 {
            Q0::Rational(r) => write!(f, "{}", r),
            Q0::Float(x) => write!(f, "{x}"),
        }
    }
}

fn rat_pow(r: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    let mut out = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    out
}

/// Substitute `s = √q0`.
///
/// Exact mode needs `√q0` rational whenever odd powers of `s` occur.
pub fn evaluate(x: &QScalar, at: &EvalPoint) -> Result<EvalValue> {
    at.check()?;
    match (&at.q0, at.mode) {
        (Q0::Rational(q0), EvalMode::ExactRational) => {
            let root = rational_sqrt(q0);
            let mut acc = Gauss::zero();
            for (e, c) in x.terms() {
                let factor = match &root {
                    Some(r) => rat_pow(r, e),
                    None if e % 2 == 0 => rat_pow(q0, e / 2),
                    None => {
                        return Err(Error::Precision(format!(
                            "odd power s^{e} with irrational sqrt({q0}); use floating mode"
                        )))
                    }
                };
                acc += c * gauss_rat(factor);
            }
            Ok(EvalValue::Exact(acc))
        }
        (Q0::Float(_), EvalMode::ExactRational) => Err(Error::Precision("exact evaluation needs a rational q0".into())),
        (_, EvalMode::Floating) => {
            let s0 = at.q0_f64().sqrt();
            let mut acc = Complex::new(0.0, 0.0);
            for (e, c) in x.terms() {
                acc += gauss_to_c64(c) * s0.powi(e as i32);
            }
            Ok(EvalValue::Float(acc))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss::rat;

    #[test]
    fn exact_and_float_modes() {
        let one = evaluate(&QScalar::one(), &EvalPoint::exact(rat(3, 7))).unwrap();
        assert_eq!(one, EvalValue::Exact(Gauss::new(rat(1, 1), rat(0, 1))));
        let s = QScalar::s();
        assert!(matches!(
            evaluate(&s, &EvalPoint::exact(rat(1, 2))),
            Err(Error::Precision(_))
        ));
        let v = evaluate(&s, &EvalPoint::exact(rat(4, 9))).unwrap();
        assert_eq!(v, EvalValue::Exact(Gauss::new(rat(2, 3), rat(0, 1))));
        let f = evaluate(&s, &EvalPoint::floating(0.5)).unwrap().to_c64();
        assert!((f.re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(evaluate(&s, &EvalPoint::exact(rat(-1, 2))).is_err());
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("4/5").unwrap(), rat(4, 5));
        assert_eq!(parse_rational("0.8").unwrap(), rat(4, 5));
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
