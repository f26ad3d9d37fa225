//! Noncommutative polynomials and two-fold tensors with `QScalar` coefficients.

use std::collections::BTreeMap;

use crate::qarith::QScalar;

/// A word in the generators, stored by generator index.
pub type Word = Vec<u8>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NCPoly {
    terms: BTreeMap<Word, QScalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, QScalar::one())
    }

    pub fn scalar(c: QScalar) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn term(w: Word, c: QScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn generator(g: u8) -> Self {
        Self::word(vec![g])
    }

    pub fn add_term(&mut self, w: Word, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NCPoly, c: &QScalar) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QScalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, QScalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &[u8]) -> QScalar {
        self.terms.get(w).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn add(&self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(o, &QScalar::one());
        out
    }

    pub fn sub(&self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(o, &QScalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &QScalar) -> NCPoly {
        let mut out = NCPoly::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(&QScalar::from_int(-1))
    }

    /// Concatenation product, without reduction.
    pub fn concat(&self, o: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    /// Map every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&QScalar) -> QScalar) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Constant term.
    pub fn constant_term(&self) -> QScalar {
        self.coeff(&[])
    }
}

impl FromIterator<(Word, QScalar)> for NCPoly {
    fn from_iter<I: IntoIterator<Item = (Word, QScalar)>>(iter: I) -> Self {
        let mut p = NCPoly::zero();
        for (w, c) in iter {
            p.add_term(w, c);
        }
        p
    }
}

/// Elements of `A ⊗ A`, with words on both legs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor {
    terms: BTreeMap<(Word, Word), QScalar>,
}

impl Tensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut t = Self::zero();
        t.add_term(Vec::new(), Vec::new(), QScalar::one());
        t
    }

    pub fn add_term(&mut self, l: Word, r: Word, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((l, r)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &QScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, l: &[u8], r: &[u8]) -> QScalar {
        self.terms
            .get(&(l.to_vec(), r.to_vec()))
            .cloned()
            .unwrap_or_else(QScalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, o: &Tensor, c: &QScalar) {
        for ((l, r), x) in &o.terms {
            self.add_term(l.clone(), r.clone(), x * c);
        }
    }

    pub fn sub(&self, o: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_scaled(o, &QScalar::from_int(-1));
        out
    }
}

impl FromIterator<((Word, Word), QScalar)> for Tensor {
    fn from_iter<I: IntoIterator<Item = ((Word, Word), QScalar)>>(iter: I) -> Self {
        let mut t = Tensor::zero();
        for ((l, r), c) in iter {
            t.add_term(l, r, c);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let mut p = NCPoly::word(vec![0, 1]);
        p.add_term(vec![0, 1], QScalar::from_int(-1));
        assert!(p.is_zero());
        let mut t = Tensor::one();
        t.add_term(vec![], vec![], QScalar::from_int(-1));
        assert!(t.is_zero());
        let x = NCPoly::word(vec![0]).concat(&NCPoly::word(vec![1]));
        assert_eq!(x, NCPoly::word(vec![0, 1]));
    }
}
