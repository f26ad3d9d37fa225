//! Gaussian rationals `Q(i)`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Gauss = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss_int(n: i64) -> Gauss {
    Complex::new(rat(n, 1), BigRational::zero())
}

pub fn gauss_rat(r: BigRational) -> Gauss {
    Complex::new(r, BigRational::zero())
}

pub fn gauss_i() -> Gauss {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn gauss_inv(z: &Gauss) -> Gauss {
    let n = &z.re * &z.re + &z.im * &z.im;
    Complex::new(&z.re / &n, -&z.im / &n)
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // very large numerators: scale down by shifting
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n.max(d) - 900).max(0);
        let num = r.numer() >> shift as usize;
        let den = r.denom() >> shift as usize;
        num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN)
    })
}

pub fn gauss_to_c64(z: &Gauss) -> Complex<f64> {
    Complex::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Text form used inside canonical scalar strings: `3/2`, `-i`, `2/3*i`, `(1+2*i)`.
pub fn fmt_gauss(z: &Gauss) -> String {
    if z.im.is_zero() {
        return fmt_rat(&z.re);
    }
    let imag = if z.im.is_one() {
        "i".to_string()
    } else if (-&z.im).is_one() {
        "-i".to_string()
    } else {
        format!("{}*i", fmt_rat(&z.im))
    };
    if z.re.is_zero() {
        imag
    } else if z.im.is_negative() {
        format!("({}{})", fmt_rat(&z.re), imag)
    } else {
        format!("({}+{})", fmt_rat(&z.re), imag)
    }
}
