//! Presented algebras: normal forms by rewriting, termination and confluence checks.

mod ncpoly;
mod presentation;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::qarith::QScalar;

pub use ncpoly::{NCPoly, Tensor, Word};
pub use presentation::{parse_poly, parse_scalar, parse_tensor, Presentation, Rule};

/// Maximum recursion depth of a single reduction.
pub const DEFAULT_BUDGET: usize = 4096;

type Terms = Arc<Vec<(Word, QScalar)>>;

/// A presentation together with a memoized normal-form engine.
///
/// Reduction always rewrites the rightmost redex of `u·g` with `u` already normal,
/// so normal forms are cached per `(u, g)`.
#[derive(Debug)]
pub struct Algebra {
    pres: Presentation,
    rules_by_last: Vec<Vec<usize>>,
    memo: RwLock<HashMap<Word, Terms>>,
    budget: usize,
}

/// Outcome of the overlap check.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfluenceReport {
    pub overlaps_checked: usize,
    /// Overlap words whose two reductions disagree.
    pub failures: Vec<Word>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Algebra {
    /// Build the engine; checks that every rule decreases in the monomial order
    /// and preserves every declared grading.
    pub fn new(pres: Presentation) -> Result<Self> {
        let n = pres.generators.len();
        let mut rules_by_last = vec![Vec::new(); n];
        for (i, r) in pres.rules.iter().enumerate() {
            rules_by_last[*r.lhs.last().unwrap() as usize].push(i);
        }
        let alg = Self {
            pres,
            rules_by_last,
            memo: RwLock::new(HashMap::new()),
            budget: DEFAULT_BUDGET,
        };
        alg.check_rules()?;
        Ok(alg)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::new(Presentation::parse(text)?)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn generator_count(&self) -> usize {
        self.pres.generators.len()
    }

    pub fn generator(&self, name: &str) -> Result<u8> {
        self.pres
            .generator_index(name)
            .ok_or_else(|| Error::Domain(format!("unknown generator {name:?}")))
    }

    pub fn gen_poly(&self, name: &str) -> Result<NCPoly> {
        Ok(NCPoly::generator(self.generator(name)?))
    }

    /// Parse a polynomial in this algebra's generators and reduce it.
    pub fn parse(&self, text: &str) -> Result<NCPoly> {
        let p = parse_poly(text, &self.pres.generators, 1, 1)?;
        self.nf(&p)
    }

    fn weight(&self, w: &[u8]) -> i64 {
        w.iter().map(|&g| self.pres.order_weights[g as usize]).sum()
    }

    /// The monomial order: weighted degree, then length, then lexicographic.
    pub fn compare(&self, a: &[u8], b: &[u8]) -> Ordering {
        self.weight(a)
            .cmp(&self.weight(b))
            .then(a.len().cmp(&b.len()))
            .then(a.cmp(b))
    }

    pub fn degree(&self, w: &[u8], grading: usize) -> i64 {
        let g = &self.pres.gradings[grading].1;
        w.iter().map(|&x| g[x as usize]).sum()
    }

    pub fn grading(&self, name: &str) -> Result<usize> {
        self.pres
            .grading_index(name)
            .ok_or_else(|| Error::Domain(format!("unknown grading {name:?}")))
    }

    fn check_rules(&self) -> Result<()> {
        for r in &self.pres.rules {
            for (w, _) in r.rhs.terms() {
                if self.compare(w, &r.lhs) != Ordering::Less {
                    return Err(Error::Confluence(format!(
                        "rule {} -> ... does not decrease: {} is not smaller",
                        self.pres.word_name(&r.lhs),
                        self.pres.word_name(w)
                    )));
                }
                for (gi, (name, _)) in self.pres.gradings.iter().enumerate() {
                    if self.degree(w, gi) != self.degree(&r.lhs, gi) {
                        return Err(Error::Inconsistent(format!(
                            "rule for {} breaks the {name} grading",
                            self.pres.word_name(&r.lhs)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// A word is normal when no rule's left side occurs in it.
    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.pres
            .rules
            .iter()
            .all(|r| !w.windows(r.lhs.len()).any(|x| x == r.lhs.as_slice()))
    }

    fn matching_rule(&self, w: &[u8]) -> Option<usize> {
        let last = *w.last()? as usize;
        self.rules_by_last[last]
            .iter()
            .copied()
            .find(|&i| w.ends_with(&self.pres.rules[i].lhs))
    }

    /// Normal form of `u·g` where `u` is normal.
    fn mul_gen(&self, u: &[u8], g: u8, depth: usize) -> Result<Terms> {
        let mut key = u.to_vec();
        key.push(g);
        if let Some(t) = self.memo.read().unwrap().get(&key) {
            return Ok(t.clone());
        }
        if depth > self.budget {
            return Err(Error::Confluence(format!(
                "reduction budget of {} exhausted at {}",
                self.budget,
                self.pres.word_name(&key)
            )));
        }
        let out: Terms = match self.matching_rule(&key) {
            None => Arc::new(vec![(key.clone(), QScalar::one())]),
            Some(ri) => {
                let rule = &self.pres.rules[ri];
                let prefix = &key[..key.len() - rule.lhs.len()];
                let mut acc = NCPoly::zero();
                for (w, c) in rule.rhs.terms() {
                    let part = self.extend(prefix, w, depth + 1)?;
                    acc.add_scaled(&part, c);
                }
                Arc::new(acc.into_terms().collect())
            }
        };
        self.memo.write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Normal form of `u·w` where `u` is normal.
    fn extend(&self, u: &[u8], w: &[u8], depth: usize) -> Result<NCPoly> {
        let mut cur = NCPoly::word(u.to_vec());
        for &g in w {
            let mut next = NCPoly::zero();
            for (v, c) in cur.terms() {
                for (x, d) in self.mul_gen(v, g, depth)?.iter() {
                    next.add_term(x.clone(), c * d);
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    pub fn nf_word(&self, w: &[u8]) -> Result<NCPoly> {
        self.extend(&[], w, 0)
    }

    pub fn nf(&self, p: &NCPoly) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            out.add_scaled(&self.nf_word(w)?, c);
        }
        Ok(out)
    }

    /// Product of two elements; inputs need not be normal.
    pub fn mul(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        let a = self.nf(a)?;
        let mut out = NCPoly::zero();
        for (u, c) in a.terms() {
            for (w, d) in b.terms() {
                out.add_scaled(&self.extend(u, w, 0)?, &(c * d));
            }
        }
        Ok(out)
    }

    pub fn mul_all(&self, factors: &[NCPoly]) -> Result<NCPoly> {
        let mut acc = NCPoly::one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &NCPoly, k: u32) -> Result<NCPoly> {
        let mut acc = NCPoly::one();
        for _ in 0..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    pub fn commutator(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        Ok(self.mul(a, b)?.sub(&self.mul(b, a)?))
    }

    /// Normal words of exactly the given length, in increasing order.
    pub fn normal_words(&self, len: usize) -> Vec<Word> {
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &layer {
                for g in 0..self.generator_count() as u8 {
                    let mut x = w.clone();
                    x.push(g);
                    if self.matching_rule(&x).is_none() {
                        next.push(x);
                    }
                }
            }
            layer = next;
        }
        layer.sort_by(|a, b| self.compare(a, b));
        layer
    }

    /// Normal words of length at most `len`.
    pub fn normal_words_up_to(&self, len: usize) -> Vec<Word> {
        (0..=len).flat_map(|l| self.normal_words(l)).collect()
    }

    /// Check every overlap and inclusion ambiguity between left-hand sides.
    pub fn check_confluence(&self) -> Result<ConfluenceReport> {
        let rules = &self.pres.rules;
        let mut checked = 0;
        let mut failures = Vec::new();
        for (i, r1) in rules.iter().enumerate() {
            for (j, r2) in rules.iter().enumerate() {
                let (u, v) = (&r1.lhs, &r2.lhs);
                // overlaps: a proper suffix of u is a proper prefix of v
                for k in 1..u.len().min(v.len()) {
                    if u[u.len() - k..] != v[..k] {
                        continue;
                    }
                    let mut w = u.clone();
                    w.extend_from_slice(&v[k..]);
                    let left = NCPoly::word(Vec::new())
                        .concat(&r1.rhs)
                        .concat(&NCPoly::word(v[k..].to_vec()));
                    let right = NCPoly::word(u[..u.len() - k].to_vec()).concat(&r2.rhs);
                    checked += 1;
                    if self.nf(&left)? != self.nf(&right)? {
                        failures.push(w);
                    }
                }
                // inclusions: v occurs inside u
                if i != j && v.len() <= u.len() {
                    for p in 0..=u.len() - v.len() {
                        if u[p..p + v.len()] != v[..] {
                            continue;
                        }
                        let left = r1.rhs.clone();
                        let right = NCPoly::word(u[..p].to_vec())
                            .concat(&r2.rhs)
                            .concat(&NCPoly::word(u[p + v.len()..].to_vec()));
                        checked += 1;
                        if self.nf(&left)? != self.nf(&right)? {
                            failures.push(u.clone());
                        }
                    }
                }
            }
        }
        Ok(ConfluenceReport {
            overlaps_checked: checked,
            failures,
        })
    }

    /// Like [`check_confluence`](Self::check_confluence) but an error on failure.
    pub fn require_confluent(&self) -> Result<ConfluenceReport> {
        let rep = self.check_confluence()?;
        if let Some(w) = rep.failures.first() {
            return Err(Error::Confluence(format!(
                "ambiguity at {} does not resolve",
                self.pres.word_name(w)
            )));
        }
        Ok(rep)
    }

    /// The star involution: antilinear, antimultiplicative, with the
    /// Koszul sign when the presentation declares a graded star.
    pub fn star(&self, p: &NCPoly) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let mut factors = Vec::with_capacity(w.len());
            for g in w.iter().rev() {
                let img = self
                    .pres
                    .star
                    .get(g)
                    .ok_or_else(|| Error::Domain(format!("no star for {}", self.pres.generators[*g as usize])))?;
                factors.push(img.clone());
            }
            let mut term = self.mul_all(&factors)?;
            let m = w.len();
            if self.pres.graded_star && (m * m.saturating_sub(1) / 2) % 2 == 1 {
                term = term.neg();
            }
            out.add_scaled(&term, &c.star());
        }
        Ok(out)
    }

    /// The part of `p` of degree `d` in the given grading.
    pub fn graded_part(&self, p: &NCPoly, grading: usize, d: i64) -> NCPoly {
        p.terms()
            .filter(|(w, _)| self.degree(w, grading) == d)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }

    /// The common degree of all terms, if homogeneous.
    pub fn homogeneous_degree(&self, p: &NCPoly, grading: usize) -> Option<i64> {
        let mut it = p.terms().map(|(w, _)| self.degree(w, grading));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn display(&self, p: &NCPoly) -> String {
        self.pres.poly_name(p)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QPLANE: &str = "generators x y\nrule y x -> q x y\n";

    #[test]
    fn quantum_plane_normal_form() {
        let a = Algebra::from_text(QPLANE).unwrap();
        let x = a.gen_poly("x").unwrap();
        let y = a.gen_poly("y").unwrap();
        let yx2 = a.mul_all(&[y.clone(), x.clone(), x.clone()]).unwrap();
        assert_eq!(yx2, NCPoly::term(vec![0, 0, 1], QScalar::q_pow(2)));
        assert!(a.check_confluence().unwrap().is_confluent());
        assert_eq!(a.normal_words(3).len(), 4);
    }

    #[test]
    fn rejects_increasing_rules() {
        let e = Algebra::from_text("generators x y\nrule x y -> y x\n").unwrap_err();
        assert!(matches!(e, Error::Confluence(_)));
        let e = Algebra::from_text("generators x y\ngrading g x=1 y=2\nrule y x -> x x\n").unwrap_err();
        assert!(matches!(e, Error::Inconsistent(_)));
    }

    #[test]
    fn detects_nonconfluence() {
        let a = Algebra::from_text(
            "generators x y z\nrule z y -> y z\nrule y x -> x y\nrule z x -> 2 x z\nrule z y x -> x\n",
        )
        .unwrap();
        let rep = a.check_confluence().unwrap();
        assert!(!rep.is_confluent());
        assert!(a.require_confluent().is_err());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let a = Algebra::from_text("generators x y\nrule y x -> q x y\n")
            .unwrap()
            .with_budget(0);
        assert!(a.nf_word(&[1, 1, 0]).is_err());
    }
}
