//! The scalar fields used by the linear-algebra layer, and specialization of symbolic scalars into them.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::{gauss_to_c64, Gauss};
use super::qscalar::QScalar;
use super::quad::QuadExact;
use super::ratfunc::RatFunc;

pub type C64 = Complex<f64>;

/// Absolute tolerance used by the floating field.
pub const FLOAT_TOL: f64 = 1e-10;

pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    fn from_gauss(g: &Gauss) -> Self;
    fn to_c64(&self) -> C64;
    /// `false` for floating-point fields, whose zero test is tolerance based.
    fn is_exact() -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_gauss(&super::gauss::gauss_int(n))
    }

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv().expect("division by zero"))
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn pow_i(&self, k: i64) -> Self {
        let base = if k < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Size of a residual: the modulus for numeric fields; symbolic fields report 0 or 1.
    fn residual_size(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Direct conversion for fields that contain `s` symbolically.
    fn from_symbolic(_x: &QScalar) -> Option<Self> {
        None
    }

    /// Numeric value with `s = s0` for fields that keep `s` symbolic.
    fn approx_at(&self, _s0: f64) -> C64 {
        self.to_c64()
    }

    /// Magnitude used to choose pivots.
    fn pivot_size(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else if Self::is_exact() {
            1.0
        } else {
            self.to_c64().norm()
        }
    }
}

impl Field for C64 {
    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.norm() <= FLOAT_TOL
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(Complex::new(1.0, 0.0) / self)
        }
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_gauss(g: &Gauss) -> Self {
        gauss_to_c64(g)
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
    fn conj(&self) -> Self {
        RatFunc::conj(self)
    }
    fn from_gauss(g: &Gauss) -> Self {
        RatFunc::constant(g.clone())
    }
    fn to_c64(&self) -> C64 {
        panic!("a symbolic rational function has no numeric value without an evaluation point")
    }
    fn is_exact() -> bool {
        true
    }
    fn residual_size(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn from_symbolic(x: &QScalar) -> Option<Self> {
        Some(RatFunc::from_qscalar(x))
    }
    fn approx_at(&self, s0: f64) -> C64 {
        let (n, d) = self.eval_with(
            &C64::new(s0, 0.0),
            C64::new(0.0, 0.0),
            gauss_to_c64,
            |a, b| a + b,
            |a, b| a * b,
        );
        n / d
    }
    fn pivot_size(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            // prefer simple pivots to limit expression swell
            1.0 / (1.0 + self.numer().coeffs().len() as f64 + self.denom().coeffs().len() as f64)
        }
    }
}

impl Field for QuadExact {
    fn zero() -> Self {
        QuadExact::zero()
    }
    fn one() -> Self {
        QuadExact::one()
    }
    fn is_zero(&self) -> bool {
        QuadExact::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        QuadExact::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        QuadExact::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        QuadExact::mul(self, o)
    }
    fn neg(&self) -> Self {
        QuadExact::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        QuadExact::inv(self)
    }
    fn conj(&self) -> Self {
        QuadExact::conj(self)
    }
    fn from_gauss(g: &Gauss) -> Self {
        QuadExact::from_gauss(g.clone())
    }
    fn to_c64(&self) -> C64 {
        QuadExact::to_c64(self)
    }
    fn is_exact() -> bool {
        true
    }
}

/// A specialization of the symbolic variable `s` into a field `F`.
#[derive(Clone, Debug)]
pub struct Ctx<F: Field> {
    s: F,
    s_inv: F,
    /// `s^e` for `-POW_CACHE <= e <= POW_CACHE`.
    pows: Vec<F>,
    /// The rational value of `q` behind a floating context.
    rational_q: Option<BigRational>,
}

const POW_CACHE: i64 = 64;

impl<F: Field> Ctx<F> {
    pub fn new(s: F) -> Self {
        let s_inv = s.inv().expect("s must be nonzero");
        let mut pows = vec![F::one(); (2 * POW_CACHE + 1) as usize];
        for e in 1..=POW_CACHE {
            let up = pows[(POW_CACHE + e - 1) as usize].mul(&s);
            let down = pows[(POW_CACHE - e + 1) as usize].mul(&s_inv);
            pows[(POW_CACHE + e) as usize] = up;
            pows[(POW_CACHE - e) as usize] = down;
        }
        Self {
            s,
            s_inv,
            pows,
            rational_q: None,
        }
    }

    pub fn s(&self) -> &F {
        &self.s
    }

    pub fn q(&self) -> F {
        self.s.mul(&self.s)
    }

    /// For floating contexts, the small-denominator rational that `q` rounds from.
    pub fn rational_q(&self) -> Option<&BigRational> {
        self.rational_q.as_ref()
    }

    pub fn s_pow(&self, e: i64) -> F {
        if e.abs() <= POW_CACHE {
            return self.pows[(e + POW_CACHE) as usize].clone();
        }
        if e >= 0 {
            self.s.pow_i(e)
        } else {
            self.s_inv.pow_i(-e)
        }
    }

    pub fn scalar(&self, x: &QScalar) -> F {
        if let Some(v) = F::from_symbolic(x) {
            return v;
        }
        let mut acc = F::zero();
        for (e, c) in x.terms() {
            acc = acc.add(&F::from_gauss(c).mul(&self.s_pow(e)));
        }
        acc
    }

    pub fn ratfunc(&self, r: &RatFunc) -> F {
        let (n, d) = r.eval_with(
            &self.s,
            F::zero(),
            |g| F::from_gauss(g),
            |a, b| a.add(b),
            |a, b| a.mul(b),
        );
        n.div(&d)
    }
}

impl Ctx<RatFunc> {
    /// The identity specialization; the only supported context over [`RatFunc`].
    pub fn symbolic() -> Self {
        Ctx::new(RatFunc::s())
    }
}

impl Ctx<QuadExact> {
    pub fn exact_at(q0: &BigRational) -> Self {
        Ctx::new(QuadExact::sqrt_of(q0))
    }
}

impl Ctx<C64> {
    pub fn float_at(q0: f64) -> Self {
        let mut ctx = Ctx::new(Complex::new(q0.sqrt(), 0.0));
        ctx.rational_q = Some(rationalize(q0));
        ctx
    }
}

/// The continued-fraction convergent of `x` with the smallest denominator that rounds to `x`.
pub fn rationalize(x: f64) -> BigRational {
    let exact = BigRational::from_float(x).expect("finite q");
    let tol = exact.abs() * BigRational::from_float(4.0 * f64::EPSILON).unwrap();
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (exact.floor().to_integer(), BigInt::one());
    let mut rest = exact.clone() - exact.floor();
    while !rest.is_zero() {
        let approx = BigRational::new(p1.clone(), q1.clone());
        if (approx - &exact).abs() <= tol {
            break;
        }
        rest = rest.recip();
        let a = rest.floor().to_integer();
        rest = &rest - rest.floor();
        (p0, p1) = (p1.clone(), &a * &p1 + p0);
        (q0, q1) = (q1.clone(), &a * &q1 + q0);
    }
    BigRational::new(p1, q1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss::rat;

    #[test]
    fn contexts_agree() {
        let x = QScalar::s_pow(3) - QScalar::q_pow(-2) + QScalar::i();
        let exact = Ctx::exact_at(&rat(4, 5)).scalar(&x).to_c64();
        let float = Ctx::float_at(0.8).scalar(&x);
        assert!((exact - float).norm() < 1e-12);
        assert_eq!(Ctx::float_at(0.8).rational_q(), Some(&rat(4, 5)));
        assert_eq!(rationalize(1.0 / 3.0), rat(1, 3));
        assert_eq!(rationalize(0.5), rat(1, 2));
        let r = RatFunc::from_qscalar(&x);
        let sym = Ctx::symbolic().scalar(&x);
        assert_eq!(sym, r);
        let back = Ctx::exact_at(&rat(4, 5)).ratfunc(&r).to_c64();
        assert!((back - float).norm() < 1e-12);
    }
}
