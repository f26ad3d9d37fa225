//! Quantum integers, factorials, binomials and the alternative integers `(k)_α`.

use crate::error::{Error, Result};

use super::qscalar::QScalar;

/// `[m]_q = q^-(m-1) + q^-(m-3) + ... + q^(m-1)`, extended by `[-m] = -[m]`.
pub fn qint_signed(m: i64) -> QScalar {
    let k = m.abs();
    let mut out = QScalar::zero();
    let mut e = -(k - 1);
    while e < k {
        out += &QScalar::q_pow(e);
        e += 2;
    }
    if m < 0 {
        -out
    } else {
        out
    }
}

/// The quantum integer `[m]_q` for `m >= 0`.
pub fn qint(m: i64) -> Result<QScalar> {
    if m < 0 {
        return Err(Error::Domain(format!("qint of negative integer {m}")));
    }
    Ok(qint_signed(m))
}

/// `[m]_q! = [1][2]...[m]`.
pub fn qfact(m: i64) -> Result<QScalar> {
    if m < 0 {
        return Err(Error::Domain(format!("qfact of negative integer {m}")));
    }
    Ok((1..=m).fold(QScalar::one(), |acc, k| &acc * &qint_signed(k)))
}

/// `[n r]_q = [n]! / ([r]! [n-r]!)`, computed by exact Laurent division.
pub fn qbinom(n: i64, r: i64) -> Result<QScalar> {
    if r < 0 || r > n {
        return Err(Error::Domain(format!("qbinom({n}, {r}) needs 0 <= r <= n")));
    }
    let num = qfact(n)?;
    let den = &qfact(r)? * &qfact(n - r)?;
    num.checked_div(&den)
        .ok_or_else(|| Error::Structure(format!("inexact division in qbinom({n}, {r})")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AltVariant {
    /// `1 + α + ... + α^k` (k+1 terms).
    Inclusive,
    /// `1 + α + ... + α^(k-1)` (k terms).
    Exclusive,
}

/// The alternative quantum integer `(k)_α`.
pub fn altint(k: i64, alpha: &QScalar, variant: AltVariant) -> Result<QScalar> {
    if k < 0 {
        return Err(Error::Domain(format!("altint of negative integer {k}")));
    }
    let top = match variant {
        AltVariant::Inclusive => k,
        AltVariant::Exclusive => k - 1,
    };
    let mut out = QScalar::zero();
    let mut p = QScalar::one();
    for _ in 0..=top {
        if top < 0 {
            break;
        }
        out += &p;
        p = &p * alpha;
    }
    Ok(out)
}

/// Quantum integer in an arbitrary base `p` (the Hodge parameter), extended to negative `m`.
pub fn qint_in<F: super::Field>(m: i64, p: &F) -> F {
    let k = m.abs();
    let mut out = F::zero();
    let mut e = -(k - 1);
    while e < k {
        out = out.add(&p.pow_i(e));
        e += 2;
    }
    if m < 0 {
        out.neg()
    } else {
        out
    }
}

/// `[m]_p!` in an arbitrary base.
pub fn qfact_in<F: super::Field>(m: i64, p: &F) -> F {
    (1..=m).fold(F::one(), |acc, k| acc.mul(&qint_in(k, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss::{gauss_int, rat};
    use crate::qarith::{evaluate, EvalPoint, EvalValue};
    use num_complex::Complex;

    fn at_one(x: &QScalar) -> i64 {
        let v = x.at_one();
        assert_eq!(v.im, rat(0, 1));
        assert!(v.re.is_integer());
        v.re.to_integer().try_into().unwrap()
    }

    #[test]
    fn small_values() {
        assert!(qint(0).unwrap().is_zero());
        assert!(qint(1).unwrap().is_one());
        assert!(qint(-1).is_err());
        assert!(qfact(0).unwrap().is_one());
        assert_eq!(qfact(2).unwrap(), QScalar::q() + QScalar::q_pow(-1));
        assert_eq!(at_one(&qfact(3).unwrap()), 6);
        assert!(qbinom(5, 0).unwrap().is_one());
        assert_eq!(qbinom(2, 1).unwrap(), qint(2).unwrap());
        assert_eq!(at_one(&qbinom(4, 2).unwrap()), 6);
        assert!(qbinom(2, 3).is_err());
        assert!(qbinom(2, -1).is_err());
    }

    #[test]
    fn qint_three_at_two() {
        // [3]_p at p = 2 means q = 2, i.e. s = sqrt(2)
        let v = evaluate(&qint(3).unwrap(), &EvalPoint::exact(rat(2, 1))).unwrap();
        assert_eq!(v, EvalValue::Exact(Complex::new(rat(21, 4), rat(0, 1))));
        let v = evaluate(&qint(2).unwrap(), &EvalPoint::exact(rat(1, 2))).unwrap();
        assert_eq!(v, EvalValue::Exact(Complex::new(rat(5, 2), rat(0, 1))));
    }

    #[test]
    fn altint_variants() {
        let a = QScalar::q_pow(-1);
        assert!(altint(0, &a, AltVariant::Inclusive).unwrap().is_one());
        assert_eq!(
            altint(2, &a, AltVariant::Exclusive).unwrap(),
            QScalar::one() + a.clone()
        );
        let one = QScalar::one();
        for k in 0..6 {
            let v = altint(k, &one, AltVariant::Exclusive).unwrap();
            assert_eq!(v, QScalar::constant(gauss_int(k)));
        }
    }

    #[test]
    fn base_p_integers() {
        let p = num_complex::Complex::new(2.0f64, 0.0);
        assert!((qint_in(3, &p) - Complex::new(5.25, 0.0)).norm() < 1e-14);
        assert!((qint_in(-2, &p) + Complex::new(2.5, 0.0)).norm() < 1e-14);
    }
}
