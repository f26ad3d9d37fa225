//! Dense univariate polynomials over `Q(i)`, used as numerators and denominators of [`RatFunc`](super::RatFunc).

use num_traits::{One, Zero};

use super::gauss::{gauss_inv, Gauss};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    /// Little-endian coefficients, no trailing zeros.
    coeffs: Vec<Gauss>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Gauss::one())
    }

    pub fn constant(c: Gauss) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Gauss, k: usize) -> Self {
        let mut v = vec![Gauss::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Gauss>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Gauss] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Gauss> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = o.coeffs.get(i);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(v)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Gauss::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn scale(&self, c: &Gauss) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Gauss::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn conj(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = gauss_inv(d.lead().unwrap());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Gauss::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    rem[k + j] -= t;
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&gauss_inv(l)),
        }
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    /// Lowest index with a nonzero coefficient.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Horner evaluation into any ring with the needed operations.
    pub fn eval_with<T: Clone>(
        &self,
        x: &T,
        zero: T,
        from: impl Fn(&Gauss) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        let mut acc = zero;
        for c in self.coeffs.iter().rev() {
            acc = add(&mul(&acc, x), &from(c));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss::gauss_int;

    fn p(v: &[i64]) -> Poly {
        Poly::from_coeffs(v.iter().map(|&c| gauss_int(c)).collect())
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[1, 1]); // 1 + x
        let b = p(&[-1, 0, 1]); // x^2 - 1
        let c = p(&[2, 0, 0, 1]);
        let g = Poly::gcd(&a.mul(&c), &b.mul(&c));
        assert_eq!(g, a.mul(&c).monic());
        let (q, r) = b.div_rem(&a);
        assert!(r.is_zero());
        assert_eq!(q, p(&[-1, 1]));
    }
}
