//! The quantum group `O_q(SU_2)`: Hopf structure, the dual pairing with `U_q(sl_2)`,
//! the two induced actions, and the Haar state.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qarith::{Ctx, Field, QScalar, RatFunc};
use crate::rewrite::{Algebra, NCPoly, Presentation, Tensor, Word};

/// The bundled presentation of `O_q(SU_2)`.
pub const SUQ2_PRESENTATION: &str = include_str!("../data/suq2.pres");

/// Generators of `U_q(sl_2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UGen {
    E,
    F,
    K,
    Kinv,
}

impl UGen {
    pub const ALL: [UGen; 4] = [UGen::E, UGen::F, UGen::K, UGen::Kinv];

    pub fn name(self) -> &'static str {
        match self {
            UGen::E => "E",
            UGen::F => "F",
            UGen::K => "K",
            UGen::Kinv => "Kinv",
        }
    }

    pub fn from_name(name: &str) -> Option<UGen> {
        UGen::ALL.into_iter().find(|g| g.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn counit(self) -> QScalar {
        match self {
            UGen::E | UGen::F => QScalar::zero(),
            UGen::K | UGen::Kinv => QScalar::one(),
        }
    }

    /// `ΔE = E⊗K⁻¹ + K⊗E`, `ΔF = F⊗K⁻¹ + K⊗F`, `ΔK = K⊗K`.
    pub fn coproduct(self) -> Vec<(UGen, UGen)> {
        match self {
            UGen::E => vec![(UGen::E, UGen::Kinv), (UGen::K, UGen::E)],
            UGen::F => vec![(UGen::F, UGen::Kinv), (UGen::K, UGen::F)],
            UGen::K => vec![(UGen::K, UGen::K)],
            UGen::Kinv => vec![(UGen::Kinv, UGen::Kinv)],
        }
    }
}

/// Elements of the free algebra on `E, F, K, K⁻¹`; relations are imposed through the pairing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UElem {
    terms: BTreeMap<Vec<UGen>, QScalar>,
}

impl UElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: Vec<UGen>) -> Self {
        let mut x = Self::zero();
        x.add_term(w, QScalar::one());
        x
    }

    pub fn gen(g: UGen) -> Self {
        Self::word(vec![g])
    }

    pub fn add_term(&mut self, w: Vec<UGen>, c: QScalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<UGen>, &QScalar)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &UElem) -> UElem {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &QScalar) -> UElem {
        let mut out = UElem::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, o: &UElem) -> UElem {
        self.add(&o.scale(&QScalar::from_int(-1)))
    }

    pub fn mul(&self, o: &UElem) -> UElem {
        let mut out = UElem::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    /// Parse a product such as `E*F*K` or `Kinv`.
    pub fn parse_word(text: &str) -> Result<UElem> {
        let mut w = Vec::new();
        for part in text.split('*').map(str::trim).filter(|p| !p.is_empty()) {
            let g =
                UGen::from_name(part).ok_or_else(|| Error::Domain(format!("unknown U_q(sl_2) generator {part:?}")))?;
            w.push(g);
        }
        Ok(UElem::word(w))
    }

    /// The defining relations, each written as an element that must act as zero.
    pub fn relations() -> Vec<(&'static str, UElem)> {
        use UGen::*;
        let g = UElem::gen;
        let q = QScalar::q();
        let qi = QScalar::q_pow(-1);
        vec![
            ("K*Kinv = 1", g(K).mul(&g(Kinv)).sub(&UElem::one())),
            ("Kinv*K = 1", g(Kinv).mul(&g(K)).sub(&UElem::one())),
            ("K*E = q*E*K", g(K).mul(&g(E)).sub(&g(E).mul(&g(K)).scale(&q))),
            ("K*F = q^-1*F*K", g(K).mul(&g(F)).sub(&g(F).mul(&g(K)).scale(&qi))),
            (
                "(q-q^-1)[E,F] = K^2-K^-2",
                g(E).mul(&g(F))
                    .sub(&g(F).mul(&g(E)))
                    .scale(&(&q - &qi))
                    .sub(&g(K).mul(&g(K)))
                    .add(&g(Kinv).mul(&g(Kinv))),
            ),
        ]
    }
}

impl fmt::Display for UElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|g| g.name()).collect::<Vec<_>>().join("*")
                };
                format!("({c})*{word}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Which weight of a bi-graded element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Eigenvalue exponent of `K` under the left-covariant action `X ▷ a`.
    Right,
    /// Eigenvalue exponent of `K` under `a ◁ X`.
    Left,
}

/// One named structural check and its outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Default)]
struct HaarTable {
    max_len: usize,
    values: HashMap<Word, RatFunc>,
}

type ActionMemo = RwLock<HashMap<(UGen, Word), NCPoly>>;

/// A compact quantum group given by a presentation and a pairing with `U_q(sl_2)`.
#[derive(Debug)]
pub struct QuantumGroup {
    alg: Algebra,
    pairing: HashMap<(UGen, u8), QScalar>,
    coproduct: Vec<Tensor>,
    counit: Vec<QScalar>,
    antipode: Vec<NCPoly>,
    /// `X ▷ g` per `(X, g)`.
    act_gen: Vec<Vec<NCPoly>>,
    /// `g ◁ X` per `(X, g)`.
    leg_gen: Vec<Vec<NCPoly>>,
    right_memo: ActionMemo,
    left_memo: ActionMemo,
    right_grading: usize,
    left_grading: usize,
    haar: RwLock<Arc<HaarTable>>,
}

fn missing(what: &str, g: &str) -> Error {
    Error::Inconsistent(format!("presentation gives no {what} for generator {g}"))
}

impl QuantumGroup {
    pub fn from_presentation(pres: Presentation) -> Result<Self> {
        let alg = Algebra::new(pres)?;
        let p = alg.presentation();
        let n = p.generators.len();
        let mut coproduct = Vec::with_capacity(n);
        let mut counit = Vec::with_capacity(n);
        let mut antipode = Vec::with_capacity(n);
        for g in 0..n as u8 {
            let name = &p.generators[g as usize];
            coproduct.push(p.coproduct.get(&g).cloned().ok_or_else(|| missing("coproduct", name))?);
            counit.push(p.counit.get(&g).cloned().ok_or_else(|| missing("counit", name))?);
            antipode.push(p.antipode.get(&g).cloned().ok_or_else(|| missing("antipode", name))?);
            if !p.star.contains_key(&g) {
                return Err(missing("star", name));
            }
        }
        let mut pairing = HashMap::new();
        for (dual, g, v) in &p.pairing {
            let x =
                UGen::from_name(dual).ok_or_else(|| Error::Inconsistent(format!("unknown dual generator {dual:?}")))?;
            pairing.insert((x, *g), v.clone());
        }
        let right_grading = alg.grading("right")?;
        let left_grading = alg.grading("left")?;
        let mut qg = Self {
            alg,
            pairing,
            coproduct,
            counit,
            antipode,
            act_gen: Vec::new(),
            leg_gen: Vec::new(),
            right_memo: RwLock::new(HashMap::new()),
            left_memo: RwLock::new(HashMap::new()),
            right_grading,
            left_grading,
            haar: RwLock::new(Arc::new(HaarTable::default())),
        };
        let mut act_gen = Vec::new();
        let mut leg_gen = Vec::new();
        for x in UGen::ALL {
            let mut act_row = Vec::new();
            let mut leg_row = Vec::new();
            for g in 0..n {
                let mut act = NCPoly::zero();
                let mut leg = NCPoly::zero();
                for ((l, r), c) in qg.coproduct[g].terms() {
                    act.add_scaled(&qg.alg.nf_word(l)?, &(c * &qg.pair_word(&[x], r)));
                    leg.add_scaled(&qg.alg.nf_word(r)?, &(c * &qg.pair_word(&[x], l)));
                }
                act_row.push(act);
                leg_row.push(leg);
            }
            act_gen.push(act_row);
            leg_gen.push(leg_row);
        }
        qg.act_gen = act_gen;
        qg.leg_gen = leg_gen;
        Ok(qg)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_presentation(Presentation::parse(text)?)
    }

    /// The process-wide instance built from the bundled presentation.
    pub fn suq2() -> &'static QuantumGroup {
        static INSTANCE: OnceLock<QuantumGroup> = OnceLock::new();
        INSTANCE.get_or_init(|| QuantumGroup::from_text(SUQ2_PRESENTATION).expect("bundled presentation is valid"))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn gen(&self, name: &str) -> NCPoly {
        self.alg.gen_poly(name).expect("known generator")
    }

    pub fn parse(&self, text: &str) -> Result<NCPoly> {
        self.alg.parse(text)
    }

    pub fn mul(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        self.alg.mul(a, b)
    }

    pub fn star(&self, a: &NCPoly) -> Result<NCPoly> {
        self.alg.star(a)
    }

    // ---- Hopf structure ----

    pub fn tensor_mul(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        let mut out = Tensor::zero();
        for ((l1, r1), c1) in x.terms() {
            for ((l2, r2), c2) in y.terms() {
                let l = self.alg.mul(&NCPoly::word(l1.clone()), &NCPoly::word(l2.clone()))?;
                let r = self.alg.mul(&NCPoly::word(r1.clone()), &NCPoly::word(r2.clone()))?;
                let c = c1 * c2;
                for (lw, lc) in l.terms() {
                    for (rw, rc) in r.terms() {
                        out.add_term(lw.clone(), rw.clone(), &(&c * lc) * rc);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Δ`, extended multiplicatively; the result has normal words on both legs.
    pub fn coproduct(&self, a: &NCPoly) -> Result<Tensor> {
        let mut out = Tensor::zero();
        for (w, c) in a.terms() {
            let mut acc = Tensor::one();
            for &g in w {
                acc = self.tensor_mul(&acc, &self.coproduct[g as usize])?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    pub fn counit(&self, a: &NCPoly) -> QScalar {
        let mut out = QScalar::zero();
        for (w, c) in a.terms() {
            let v = w.iter().fold(c.clone(), |acc, &g| &acc * &self.counit[g as usize]);
            out += &v;
        }
        out
    }

    /// The antipode, extended antimultiplicatively.
    pub fn antipode(&self, a: &NCPoly) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in a.terms() {
            let factors: Vec<NCPoly> = w.iter().rev().map(|&g| self.antipode[g as usize].clone()).collect();
            out.add_scaled(&self.alg.mul_all(&factors)?, c);
        }
        Ok(out)
    }

    // ---- pairing ----

    /// `⟨X, w⟩` for a word `X` in `U_q(sl_2)` and an arbitrary word `w` (not necessarily normal).
    pub fn pair_word(&self, x: &[UGen], w: &[u8]) -> QScalar {
        if x.is_empty() {
            return w.iter().fold(QScalar::one(), |acc, &g| &acc * &self.counit[g as usize]);
        }
        if w.is_empty() {
            return x.iter().fold(QScalar::one(), |acc, g| &acc * &g.counit());
        }
        if w.len() == 1 && x.len() == 1 {
            return self.pairing.get(&(x[0], w[0])).cloned().unwrap_or_default();
        }
        let mut out = QScalar::zero();
        if w.len() >= 2 {
            // ⟨X, g w'⟩ = ⟨X₍₁₎, g⟩⟨X₍₂₎, w'⟩
            for (x1, x2) in word_coproduct(x) {
                let a = self.pair_word(&x1, &w[..1]);
                if a.is_zero() {
                    continue;
                }
                out += &(&a * &self.pair_word(&x2, &w[1..]));
            }
        } else {
            // ⟨X₀ X', g⟩ = ⟨X₀, g₍₁₎⟩⟨X', g₍₂₎⟩
            for ((l, r), c) in self.coproduct[w[0] as usize].terms() {
                let a = self.pair_word(&x[..1], l);
                if a.is_zero() {
                    continue;
                }
                out += &(&(c * &a) * &self.pair_word(&x[1..], r));
            }
        }
        out
    }

    pub fn pair(&self, x: &UElem, a: &NCPoly) -> QScalar {
        let mut out = QScalar::zero();
        for (xw, c) in x.terms() {
            for (w, d) in a.terms() {
                out += &(&(c * d) * &self.pair_word(xw, w));
            }
        }
        out
    }

    // ---- actions ----

    fn act_word(&self, x: UGen, w: &[u8], left: bool) -> Result<NCPoly> {
        let memo = if left { &self.left_memo } else { &self.right_memo };
        let key = (x, w.to_vec());
        if let Some(v) = memo.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let out = if w.is_empty() {
            NCPoly::scalar(x.counit())
        } else {
            let table = if left { &self.leg_gen } else { &self.act_gen };
            let mut acc = NCPoly::zero();
            for (x1, x2) in x.coproduct() {
                let head = &table[x1.index()][w[0] as usize];
                if head.is_zero() {
                    continue;
                }
                let tail = self.act_word(x2, &w[1..], left)?;
                if tail.is_zero() {
                    continue;
                }
                acc = acc.add(&self.alg.mul(head, &tail)?);
            }
            acc
        };
        memo.write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    fn act_gen_poly(&self, x: UGen, a: &NCPoly, left: bool) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in a.terms() {
            out.add_scaled(&self.act_word(x, w, left)?, c);
        }
        Ok(out)
    }

    /// `X ▷ a = a₍₁₎⟨X, a₍₂₎⟩`; a left module-algebra action, `X ▷ (Y ▷ a) = XY ▷ a`.
    pub fn right_action(&self, x: &UElem, a: &NCPoly) -> Result<NCPoly> {
        let a = self.alg.nf(a)?;
        let mut out = NCPoly::zero();
        for (xw, c) in x.terms() {
            let mut cur = a.clone();
            for &g in xw.iter().rev() {
                cur = self.act_gen_poly(g, &cur, false)?;
            }
            out.add_scaled(&cur, c);
        }
        Ok(out)
    }

    /// `a ◁ X = ⟨X, a₍₁₎⟩a₍₂₎`; a right action, `(a ◁ X) ◁ Y = a ◁ XY`.
    pub fn left_leg_action(&self, x: &UElem, a: &NCPoly) -> Result<NCPoly> {
        let a = self.alg.nf(a)?;
        let mut out = NCPoly::zero();
        for (xw, c) in x.terms() {
            let mut cur = a.clone();
            for &g in xw {
                cur = self.act_gen_poly(g, &cur, true)?;
            }
            out.add_scaled(&cur, c);
        }
        Ok(out)
    }

    /// Shorthand for a single generator acting by `▷`.
    pub fn act(&self, x: UGen, a: &NCPoly) -> Result<NCPoly> {
        self.right_action(&UElem::gen(x), a)
    }

    // ---- weights ----

    pub fn weight(&self, w: &[u8], side: Side) -> i64 {
        match side {
            Side::Right => self.alg.degree(w, self.right_grading),
            Side::Left => self.alg.degree(w, self.left_grading),
        }
    }

    /// Common `(right, left)` weight of all terms, if bi-homogeneous.
    pub fn biweight(&self, a: &NCPoly) -> Option<(i64, i64)> {
        let mut it = a
            .terms()
            .map(|(w, _)| (self.weight(w, Side::Right), self.weight(w, Side::Left)));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn weight_component(&self, a: &NCPoly, side: Side, value: i64) -> NCPoly {
        a.terms()
            .filter(|(w, _)| self.weight(w, side) == value)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }

    // ---- Haar state ----

    fn solve_haar(&self, max_len: usize) -> Result<HaarTable> {
        let words = self.alg.normal_words_up_to(max_len);
        let unknowns: Vec<Word> = words
            .iter()
            .filter(|w| !w.is_empty() && self.weight(w, Side::Right) == 0 && self.weight(w, Side::Left) == 0)
            .cloned()
            .collect();
        let index: HashMap<&Word, usize> = unknowns.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let n = unknowns.len();
        let mut rows: Vec<Vec<RatFunc>> = Vec::new();
        let mut push_equation = |img: &NCPoly| -> Result<()> {
            let mut row = vec![RatFunc::zero(); n + 1];
            for (w, c) in img.terms() {
                if self.weight(w, Side::Right) != 0 || self.weight(w, Side::Left) != 0 {
                    continue;
                }
                let c = RatFunc::from_qscalar(c);
                if w.is_empty() {
                    row[n] = row[n].sub(&c);
                } else {
                    let i = *index
                        .get(w)
                        .ok_or_else(|| Error::Inconsistent("invariance equation leaves the truncation".into()))?;
                    row[i] = row[i].add(&c);
                }
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
            Ok(())
        };
        for w in &words {
            let (r, l) = (self.weight(w, Side::Right), self.weight(w, Side::Left));
            let p = NCPoly::word(w.clone());
            // h(X ▷ w) = ε(X) h(w) and h(w ◁ X) = ε(X) h(w) for X = E, F
            if l == 0 && (r == -2 || r == 2) {
                let x = if r == -2 { UGen::E } else { UGen::F };
                push_equation(&self.act_gen_poly(x, &p, false)?)?;
            }
            if r == 0 && (l == -2 || l == 2) {
                let x = if l == 2 { UGen::E } else { UGen::F };
                push_equation(&self.act_gen_poly(x, &p, true)?)?;
            }
        }
        let mut values = HashMap::new();
        if n > 0 {
            let m = Matrix::from_fn(rows.len(), n + 1, |r, c| rows[r][c].clone());
            let (red, pivots) = m.rref();
            if pivots.contains(&n) {
                return Err(Error::Inconsistent("Haar invariance equations are inconsistent".into()));
            }
            if pivots.len() < n {
                return Err(Error::Inconsistent(format!(
                    "Haar invariance equations leave {} values undetermined",
                    n - pivots.len()
                )));
            }
            for (i, w) in unknowns.iter().enumerate() {
                values.insert(w.clone(), red.get(i, n).clone());
            }
        }
        values.insert(Vec::new(), RatFunc::one());
        Ok(HaarTable { max_len, values })
    }

    fn haar_table(&self, len: usize) -> Result<Arc<HaarTable>> {
        {
            let t = self.haar.read().unwrap();
            if t.max_len >= len && !t.values.is_empty() {
                return Ok(t.clone());
            }
        }
        let mut t = self.haar.write().unwrap();
        if t.max_len < len || t.values.is_empty() {
            let target = len.max(2 * t.max_len).max(4);
            *t = Arc::new(self.solve_haar(target + target % 2)?);
        }
        Ok(t.clone())
    }

    /// The Haar state on a normal-form element, as a rational function of `s`.
    pub fn haar(&self, a: &NCPoly) -> Result<RatFunc> {
        let a = self.alg.nf(a)?;
        let len = a.terms().map(|(w, _)| w.len()).max().unwrap_or(0);
        let table = self.haar_table(len)?;
        let mut out = RatFunc::zero();
        for (w, c) in a.terms() {
            if let Some(v) = table.values.get(w) {
                out = out.add(&v.mul(&RatFunc::from_qscalar(c)));
            }
        }
        Ok(out)
    }

    /// The Haar state specialized into a field.
    pub fn haar_in<F: Field>(&self, ctx: &Ctx<F>, a: &NCPoly) -> Result<F> {
        let a = self.alg.nf(a)?;
        let len = a.terms().map(|(w, _)| w.len()).max().unwrap_or(0);
        let table = self.haar_table(len)?;
        let mut out = F::zero();
        for (w, c) in a.terms() {
            if let Some(v) = table.values.get(w) {
                out = out.add(&ctx.ratfunc(v).mul(&ctx.scalar(c)));
            }
        }
        Ok(out)
    }

    /// The Haar inner product `⟨x, y⟩ = h(x y*)`.
    pub fn haar_inner(&self, x: &NCPoly, y: &NCPoly) -> Result<RatFunc> {
        self.haar(&self.alg.mul(x, &self.alg.star(y)?)?)
    }

    // ---- validation ----

    /// Check the Hopf and pairing axioms on generators, relations and short words.
    pub fn validate(&self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let mut record = |name: String, passed: bool| out.push(Check { name, passed });
        let p = self.alg.presentation();

        let conf = self.alg.check_confluence()?;
        record(
            format!("confluence ({} ambiguities)", conf.overlaps_checked),
            conf.is_confluent(),
        );

        let mut delta_ok = true;
        let mut eps_ok = true;
        let mut s_ok = true;
        let mut star_ok = true;
        for r in &p.rules {
            let lhs = NCPoly::word(r.lhs.clone());
            delta_ok &= self.coproduct(&lhs)? == self.coproduct(&r.rhs)?;
            eps_ok &= self.counit(&lhs) == self.counit(&r.rhs);
            s_ok &= self.antipode(&lhs)? == self.antipode(&r.rhs)?;
            star_ok &= self.alg.star(&lhs)? == self.alg.star(&r.rhs)?;
        }
        record("coproduct respects relations".into(), delta_ok);
        record("counit respects relations".into(), eps_ok);
        record("antipode respects relations".into(), s_ok);
        record("star respects relations".into(), star_ok);

        let mut coassoc = true;
        let mut counital = true;
        let mut antipodal = true;
        let mut star_inv = true;
        let mut star_delta = true;
        for g in 0..self.alg.generator_count() as u8 {
            let x = NCPoly::generator(g);
            let d = &self.coproduct[g as usize];
            let mut left: BTreeMap<(Word, Word, Word), QScalar> = BTreeMap::new();
            let mut right: BTreeMap<(Word, Word, Word), QScalar> = BTreeMap::new();
            for ((l, r), c) in d.terms() {
                for ((ll, lr), c2) in self.coproduct(&NCPoly::word(l.clone()))?.terms() {
                    *left.entry((ll.clone(), lr.clone(), r.clone())).or_default() += &(c * c2);
                }
                for ((rl, rr), c2) in self.coproduct(&NCPoly::word(r.clone()))?.terms() {
                    *right.entry((l.clone(), rl.clone(), rr.clone())).or_default() += &(c * c2);
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            coassoc &= left == right;

            let mut el = NCPoly::zero();
            let mut er = NCPoly::zero();
            let mut sl = NCPoly::zero();
            let mut sr = NCPoly::zero();
            for ((l, r), c) in d.terms() {
                let (lp, rp) = (NCPoly::word(l.clone()), NCPoly::word(r.clone()));
                el.add_scaled(&rp, &(c * &self.counit(&lp)));
                er.add_scaled(&lp, &(c * &self.counit(&rp)));
                sl.add_scaled(&self.alg.mul(&self.antipode(&lp)?, &rp)?, c);
                sr.add_scaled(&self.alg.mul(&lp, &self.antipode(&rp)?)?, c);
            }
            counital &= el == x && er == x;
            let unit = NCPoly::scalar(self.counit(&x));
            antipodal &= sl == unit && sr == unit;
            star_inv &= self.alg.star(&self.alg.star(&x)?)? == x;
            // Δ(x*) = Δ(x)^{*⊗*}
            let dstar = self.coproduct(&self.alg.star(&x)?)?;
            let mut conj = Tensor::zero();
            for ((l, r), c) in d.terms() {
                let ls = self.alg.star(&NCPoly::word(l.clone()))?;
                let rs = self.alg.star(&NCPoly::word(r.clone()))?;
                for (lw, lc) in ls.terms() {
                    for (rw, rc) in rs.terms() {
                        conj.add_term(lw.clone(), rw.clone(), &(&c.star() * lc) * rc);
                    }
                }
            }
            star_delta &= dstar == conj;
        }
        record("coassociativity".into(), coassoc);
        record("counit axiom".into(), counital);
        record("antipode axiom".into(), antipodal);
        record("star is an involution".into(), star_inv);
        record("coproduct is a *-map".into(), star_delta);

        let uwords = u_words(3);
        let mut a_rel = true;
        for x in &uwords {
            for r in &p.rules {
                let lhs = self.pair_word(x, &r.lhs);
                let rhs = self.pair(&UElem::word(x.clone()), &r.rhs);
                a_rel &= lhs == rhs;
            }
        }
        record(
            "pairing vanishes on O_q(SU_2) relations (U-words of length <= 3)".into(),
            a_rel,
        );

        let a_words = self.alg.normal_words_up_to(4);
        let mut u_rel = true;
        for (_, rel) in UElem::relations() {
            for w in &a_words {
                u_rel &= self.pair(&rel, &NCPoly::word(w.clone())).is_zero();
            }
        }
        record(
            "pairing vanishes on U_q(sl_2) relations (words of length <= 4)".into(),
            u_rel,
        );

        let mut act_ok = true;
        for x in u_words(2) {
            for w in self.alg.normal_words_up_to(3) {
                let a = NCPoly::word(w);
                let xe = UElem::word(x.clone());
                act_ok &= self.counit(&self.right_action(&xe, &a)?) == self.pair(&xe, &a);
                act_ok &= self.counit(&self.left_leg_action(&xe, &a)?) == self.pair(&xe, &a);
            }
        }
        record("actions are compatible with the pairing".into(), act_ok);
        Ok(out)
    }

    /// [`validate`](Self::validate), failing on the first unsatisfied check.
    pub fn require_valid(&self) -> Result<()> {
        for c in self.validate()? {
            if !c.passed {
                return Err(Error::Inconsistent(format!("check failed: {}", c.name)));
            }
        }
        Ok(())
    }
}

/// All words in `E, F, K, K⁻¹` of length at most `n`.
pub fn u_words(n: usize) -> Vec<Vec<UGen>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for g in UGen::ALL {
                let mut x: Vec<UGen> = w.clone();
                x.push(g);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn word_coproduct(x: &[UGen]) -> Vec<(Vec<UGen>, Vec<UGen>)> {
    let mut acc = vec![(Vec::new(), Vec::new())];
    for g in x {
        let mut next = Vec::with_capacity(acc.len() * 2);
        for (l, r) in &acc {
            for (g1, g2) in g.coproduct() {
                let mut l2: Vec<UGen> = l.clone();
                l2.push(g1);
                let mut r2: Vec<UGen> = r.clone();
                r2.push(g2);
                next.push((l2, r2));
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::qint;

    fn qg() -> &'static QuantumGroup {
        QuantumGroup::suq2()
    }

    #[test]
    fn presentation_is_valid() {
        for c in qg().validate().unwrap() {
            assert!(c.passed, "{}", c.name);
        }
    }

    #[test]
    fn generator_actions() {
        let g = |n: &str| qg().gen(n);
        assert_eq!(qg().act(UGen::E, &g("b")).unwrap(), g("a"));
        assert_eq!(qg().act(UGen::E, &g("d")).unwrap(), g("c"));
        assert_eq!(qg().act(UGen::F, &g("a")).unwrap(), g("b"));
        assert_eq!(qg().act(UGen::F, &g("c")).unwrap(), g("d"));
        assert!(qg().act(UGen::E, &g("a")).unwrap().is_zero());
        assert_eq!(qg().act(UGen::K, &g("b")).unwrap(), g("b").scale(&QScalar::s_pow(-1)));
    }

    #[test]
    fn haar_on_powers_of_bc() {
        let bc = qg().parse("b c").unwrap();
        let mut p = NCPoly::one();
        for n in 0..5 {
            let expect = RatFunc::from_qscalar(&QScalar::from_int(if n % 2 == 0 { 1 } else { -1 }))
                .mul(&RatFunc::from_qscalar(&qint(n + 1).unwrap()).inv().unwrap());
            assert_eq!(qg().haar(&p).unwrap(), expect, "n = {n}");
            p = qg().mul(&p, &bc).unwrap();
        }
        assert!(qg().haar(&qg().gen("a")).unwrap().is_zero());
    }

    #[test]
    fn inconsistent_pairing_is_rejected() {
        let broken = SUQ2_PRESENTATION.replace("pairing E    b -> 1", "pairing E    b -> 1\npairing E    a -> 1");
        let g = QuantumGroup::from_text(&broken).unwrap();
        assert!(g.require_valid().is_err());
    }
}
