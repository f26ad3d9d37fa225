//! The local exterior algebra of quantum projective space `CP^n`.
//!
//! Generators `x_i = e⁺_i` and `y_i = e⁻_i` satisfy
//!
//! ```text
//! x_j x_i = -q x_i x_j,   y_j y_i = -q^-1 y_i y_j     (i < j)
//! y_j x_i = -q^-1 x_i y_j                              (i != j)
//! y_i x_i = -q^-2 x_i y_i + Σ_{k<i} (1 - q^-2) q^(2(i-k)) x_k y_k
//! x_i x_i = y_i y_i = 0
//! ```
//!
//! and the graded star `x_i* = y_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::qarith::{qbinom, QScalar};
use crate::rewrite::{Algebra, NCPoly, Word};

/// Basis label `e⁺_K ∧ e⁻_L` with strictly increasing 1-based index lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormLabel {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

impl FormLabel {
    pub fn bidegree(&self) -> (usize, usize) {
        (self.plus.len(), self.minus.len())
    }
}

impl fmt::Display for FormLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.plus.is_empty() && self.minus.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .plus
            .iter()
            .map(|i| format!("e+{i}"))
            .chain(self.minus.iter().map(|i| format!("e-{i}")))
            .collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// An element of the local exterior algebra of a given rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalForm {
    pub n: usize,
    pub poly: NCPoly,
}

/// Presentation text of the rank-`n` local exterior algebra.
pub fn presentation_text(n: usize) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "algebra Lambda(CP^{n})");
    let gens: Vec<String> = (1..=n)
        .map(|i| format!("x{i}"))
        .chain((1..=n).map(|i| format!("y{i}")))
        .collect();
    let _ = writeln!(t, "generators {}", gens.join(" "));
    let plus: Vec<String> = (1..=n).map(|i| format!("x{i}=1")).collect();
    let minus: Vec<String> = (1..=n).map(|i| format!("y{i}=1")).collect();
    let _ = writeln!(t, "grading plus {}", plus.join(" "));
    let _ = writeln!(t, "grading minus {}", minus.join(" "));
    let _ = writeln!(t, "stargrading on");
    for i in 1..=n {
        let _ = writeln!(t, "rule x{i} x{i} -> 0");
        let _ = writeln!(t, "rule y{i} y{i} -> 0");
        for j in (i + 1)..=n {
            let _ = writeln!(t, "rule x{j} x{i} -> -q x{i} x{j}");
            let _ = writeln!(t, "rule y{j} y{i} -> -q^-1 y{i} y{j}");
        }
        for j in 1..=n {
            if i != j {
                let _ = writeln!(t, "rule y{j} x{i} -> -q^-1 x{i} y{j}");
            }
        }
        let mut rhs = format!("-q^-2 x{i} y{i}");
        for k in 1..i {
            let _ = write!(rhs, " + (1 - q^-2) q^{} x{k} y{k}", 2 * (i - k));
        }
        let _ = writeln!(t, "rule y{i} x{i} -> {rhs}");
        let _ = writeln!(t, "star x{i} -> y{i}");
        let _ = writeln!(t, "star y{i} -> x{i}");
    }
    t
}

/// The local exterior algebra `Φ(Ω^(•,•))` of `CP^n`.
#[derive(Debug)]
pub struct ExteriorAlgebra {
    n: usize,
    alg: Algebra,
}

impl ExteriorAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::Domain(format!("rank {n} outside 1..=4")));
        }
        let alg = Algebra::from_text(&presentation_text(n))?;
        Ok(Self { n, alg })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    fn check(&self, x: &LocalForm) -> Result<()> {
        if x.n != self.n {
            return Err(Error::Rank(format!("form of rank {} used with rank {}", x.n, self.n)));
        }
        Ok(())
    }

    fn form(&self, poly: NCPoly) -> LocalForm {
        LocalForm { n: self.n, poly }
    }

    pub fn one(&self) -> LocalForm {
        self.form(NCPoly::one())
    }

    /// `e⁺_i`, 1-based.
    pub fn e_plus(&self, i: usize) -> LocalForm {
        assert!((1..=self.n).contains(&i));
        self.form(NCPoly::generator((i - 1) as u8))
    }

    /// `e⁻_i`, 1-based.
    pub fn e_minus(&self, i: usize) -> LocalForm {
        assert!((1..=self.n).contains(&i));
        self.form(NCPoly::generator((self.n + i - 1) as u8))
    }

    pub fn scale(&self, x: &LocalForm, c: &QScalar) -> LocalForm {
        self.form(x.poly.scale(c))
    }

    pub fn add(&self, x: &LocalForm, y: &LocalForm) -> Result<LocalForm> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.form(x.poly.add(&y.poly)))
    }

    pub fn wedge(&self, x: &LocalForm, y: &LocalForm) -> Result<LocalForm> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.form(self.alg.mul(&x.poly, &y.poly)?))
    }

    /// The antilinear graded involution with `e⁺_i ↦ e⁻_i`.
    pub fn star_local(&self, x: &LocalForm) -> Result<LocalForm> {
        self.check(x)?;
        Ok(self.form(self.alg.star(&x.poly)?))
    }

    /// `i Σ_i q^(n-2i) e⁺_i ∧ e⁻_i`.
    pub fn kappa_local(&self) -> LocalForm {
        let mut p = NCPoly::zero();
        for i in 1..=self.n {
            let c = &QScalar::i() * &QScalar::q_pow(self.n as i64 - 2 * i as i64);
            p.add_term(vec![(i - 1) as u8, (self.n + i - 1) as u8], c);
        }
        self.form(p)
    }

    pub fn label(&self, w: &[u8]) -> FormLabel {
        let mut l = FormLabel {
            plus: Vec::new(),
            minus: Vec::new(),
        };
        for &g in w {
            let g = g as usize;
            if g < self.n {
                l.plus.push(g + 1);
            } else {
                l.minus.push(g - self.n + 1);
            }
        }
        l
    }

    pub fn word_of(&self, l: &FormLabel) -> Word {
        l.plus
            .iter()
            .map(|&i| (i - 1) as u8)
            .chain(l.minus.iter().map(|&i| (self.n + i - 1) as u8))
            .collect()
    }

    pub fn bidegree(&self, w: &[u8]) -> (usize, usize) {
        self.label(w).bidegree()
    }

    /// Normal words of bidegree `(a, b)`.
    pub fn basis(&self, a: usize, b: usize) -> Vec<Word> {
        self.alg
            .normal_words(a + b)
            .into_iter()
            .filter(|w| self.bidegree(w) == (a, b))
            .collect()
    }

    /// All normal words ordered by total degree, then bidegree `(a, b)` with `a` descending.
    pub fn full_basis(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for k in 0..=2 * self.n {
            for a in (0..=k.min(self.n)).rev() {
                let b = k - a;
                if b <= self.n {
                    out.extend(self.basis(a, b));
                }
            }
        }
        out
    }

    /// Bidegree of a homogeneous form.
    pub fn form_bidegree(&self, x: &LocalForm) -> Option<(usize, usize)> {
        let mut it = x.poly.terms().map(|(w, _)| self.bidegree(w));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn terms(&self, x: &LocalForm) -> BTreeMap<FormLabel, QScalar> {
        x.poly.terms().map(|(w, c)| (self.label(w), c.clone())).collect()
    }

    pub fn display(&self, x: &LocalForm) -> String {
        if x.poly.is_zero() {
            return "0".into();
        }
        x.poly
            .terms()
            .map(|(w, c)| format!("({c})*{}", self.label(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `dim Φ(Ω^(a,b))` by enumeration, with degree totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimsTable {
    pub n: usize,
    /// `by_bidegree[a][b]`.
    pub by_bidegree: Vec<Vec<usize>>,
    /// `by_degree[k]`.
    pub by_degree: Vec<usize>,
}

impl DimsTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("a,b,dim\n");
        for a in 0..=self.n {
            for b in 0..=self.n {
                let _ = writeln!(s, "{a},{b},{}", self.by_bidegree[a][b]);
            }
        }
        s
    }

    /// The classical values `binom(n,a) binom(n,b)` and `binom(2n,k)`.
    pub fn matches_classical(&self) -> bool {
        let at_one = |n: i64, r: i64| -> usize {
            let v = qbinom(n, r).unwrap().at_one();
            v.re.to_integer().try_into().unwrap()
        };
        let n = self.n as i64;
        (0..=n).all(|a| (0..=n).all(|b| self.by_bidegree[a as usize][b as usize] == at_one(n, a) * at_one(n, b)))
            && (0..=2 * n).all(|k| self.by_degree[k as usize] == at_one(2 * n, k))
    }
}

pub fn dims(n: usize) -> Result<DimsTable> {
    let ext = ExteriorAlgebra::new(n)?;
    let mut by_bidegree = vec![vec![0; n + 1]; n + 1];
    let mut by_degree = vec![0; 2 * n + 1];
    for a in 0..=n {
        for b in 0..=n {
            let d = ext.basis(a, b).len();
            by_bidegree[a][b] = d;
            by_degree[a + b] += d;
        }
    }
    Ok(DimsTable {
        n,
        by_bidegree,
        by_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_and_confluence() {
        for n in 1..=3 {
            let ext = ExteriorAlgebra::new(n).unwrap();
            assert!(ext.algebra().check_confluence().unwrap().is_confluent(), "n = {n}");
        }
        let ext = ExteriorAlgebra::new(2).unwrap();
        let w = ext.wedge(&ext.e_plus(2), &ext.e_plus(1)).unwrap();
        let expect = ext.scale(&ext.wedge(&ext.e_plus(1), &ext.e_plus(2)).unwrap(), &-QScalar::q());
        assert_eq!(w, expect);
        assert!(ext.wedge(&ext.e_plus(1), &ext.e_plus(1)).unwrap().poly.is_zero());
        let w = ext.wedge(&ext.e_minus(2), &ext.e_minus(1)).unwrap();
        let expect = ext.scale(
            &ext.wedge(&ext.e_minus(1), &ext.e_minus(2)).unwrap(),
            &-QScalar::q_pow(-1),
        );
        assert_eq!(w, expect);
    }

    #[test]
    fn dimension_tables() {
        let d1 = dims(1).unwrap();
        assert_eq!(d1.by_bidegree, vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(dims(2).unwrap().by_degree[2], 6);
        assert_eq!(dims(3).unwrap().by_degree[3], 20);
        for n in 1..=3 {
            assert!(dims(n).unwrap().matches_classical());
        }
    }

    #[test]
    fn star_and_kappa() {
        let ext = ExteriorAlgebra::new(2).unwrap();
        assert_eq!(ext.star_local(&ext.e_plus(1)).unwrap(), ext.e_minus(1));
        assert_eq!(ext.star_local(&ext.one()).unwrap(), ext.one());
        let k = ext.kappa_local();
        assert_eq!(ext.star_local(&k).unwrap(), k);
        assert_eq!(ext.form_bidegree(&k), Some((1, 1)));
        assert!(matches!(
            ext.wedge(&k, &ExteriorAlgebra::new(1).unwrap().one()),
            Err(Error::Rank(_))
        ));
    }
}
