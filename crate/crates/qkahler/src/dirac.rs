//! The Dolbeault double complex of the Podleś sphere and its line-bundle twists.
//!
//! A form in `Ω^(a,b) ⊗ ℰ_k` is a sum of `x ⊗ v` with `x ∈ O_q(SU_2)` of right weight
//! `-k + 2a - 2b` and `v` a local form of bidegree `(a, b)`. The differentials are
//!
//! ```text
//! ∂̄(x ⊗ v) = (FK ▷ x) ⊗ (e⁻ ∧ v),     ∂(x ⊗ v) = -q (EK ▷ x) ⊗ (e⁺ ∧ v)
//! ```
//!
//! and the inner product is `⟨x ⊗ v, y ⊗ u⟩ = h(x y*) g(v, u)`.
//!
//! Inside one Peter–Weyl block and one left weight every bidegree holds at most one basis
//! vector, so all operators are assembled from scalars read off top words.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exterior::ExteriorAlgebra;
use crate::hopf::{QuantumGroup, Side, UElem, UGen};
use crate::kahler::{GradedSpace, HodgeData, KahlerEngine, Relation, Report};
use crate::linalg::{inner, Matrix};
use crate::peter_weyl::{build_blocks_filtered, top_matrix};
use crate::qarith::gauss::gauss_i;
use crate::qarith::{altint, qint_signed, AltVariant, Ctx, Field, QScalar};
use crate::rewrite::{NCPoly, Word};

/// Bidegrees of the local exterior algebra of `CP^1`.
pub const SLOTS: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// Right weight carried by the slot `(a, b)` of `Ω ⊗ ℰ_k`.
pub fn slot_weight(k: i64, (a, b): (usize, usize)) -> i64 {
    -k + 2 * a as i64 - 2 * b as i64
}

/// The coefficient of `EK` in `∂`.
pub fn del_dressing() -> QScalar {
    -QScalar::q()
}

/// `θ(k) = q^(1-k) [k]_q`, the curvature scale of `ℰ_k`.
pub fn theta_formula(k: i64) -> QScalar {
    &QScalar::q_pow(1 - k) * &qint_signed(k)
}

/// Human-readable spin of a block label.
pub fn spin_label(label: usize) -> String {
    if label.is_multiple_of(2) {
        (label / 2).to_string()
    } else {
        format!("{label}/2")
    }
}

/// The local data of `CP^1` at Hodge parameter 1.
#[derive(Clone, Debug)]
pub struct LocalCalculus<F: Field> {
    pub space: GradedSpace<F>,
    pub hodge: HodgeData<F>,
    index: [usize; 4],
}

impl<F: Field> LocalCalculus<F> {
    pub fn new(ctx: &Ctx<F>) -> Result<Self> {
        let ext = ExteriorAlgebra::new(1)?;
        let eng = KahlerEngine::from_exterior(&ext, ctx)?;
        let hodge = eng.hodge(&F::one())?;
        let space = eng.space;
        let mut index = [0; 4];
        for (t, &(a, b)) in SLOTS.iter().enumerate() {
            index[t] = space.indices_of(a, b)[0];
        }
        Ok(Self { space, hodge, index })
    }

    pub fn slot_index(&self, slot: (usize, usize)) -> usize {
        self.index[SLOTS.iter().position(|&s| s == slot).expect("not a slot")]
    }

    /// Coefficient of `target` in `x ∧ v_slot` for `x` a local basis element.
    fn wedge_coeff(&self, x: (usize, usize), slot: (usize, usize), target: (usize, usize)) -> F {
        let w = self.space.wedge(
            &self.space.basis_vector(self.slot_index(x)),
            &self.space.basis_vector(self.slot_index(slot)),
        );
        w[self.slot_index(target)].clone()
    }

    pub fn metric(&self, slot: (usize, usize)) -> F {
        let i = self.slot_index(slot);
        self.hodge.gram.get(i, i).clone()
    }

    /// Coefficient of `κ` on `e⁺ ∧ e⁻`.
    pub fn kappa_coeff(&self) -> F {
        self.space.kappa()[self.slot_index((1, 1))].clone()
    }
}

/// One basis vector `v ⊗ e_slot` of a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub left_weight: i64,
    pub slot: (usize, usize),
    pub right_weight: i64,
    pub top: Word,
}

/// One Peter–Weyl block of the complex, with all operators as matrices on its cells.
#[derive(Clone, Debug)]
pub struct ComplexBlock<F: Field> {
    pub label: usize,
    pub cells: Vec<Cell>,
    /// Diagonal of the Gram matrix.
    pub gram: Vec<F>,
    pub dbar: Matrix<F>,
    pub del: Matrix<F>,
    pub dbar_adj: Matrix<F>,
    pub del_adj: Matrix<F>,
    /// `-∗∂∗` and `-∗∂̄∗`.
    pub dbar_adj_hodge: Matrix<F>,
    pub del_adj_hodge: Matrix<F>,
    pub lefschetz: Matrix<F>,
    pub dual_lefschetz: Matrix<F>,
    pub star: Matrix<F>,
}

/// Adjoint for a diagonal real Gram matrix.
fn diag_adjoint<F: Field>(a: &Matrix<F>, gram: &[F]) -> Matrix<F> {
    Matrix::from_fn(a.cols(), a.rows(), |j, i| {
        a.get(i, j).conj().mul(&gram[i]).div(&gram[j])
    })
}

impl<F: Field> ComplexBlock<F> {
    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn spin(&self) -> String {
        spin_label(self.label)
    }

    pub fn gram_matrix(&self) -> Matrix<F> {
        Matrix::diagonal(&self.gram)
    }

    pub fn indices_of(&self, slot: (usize, usize)) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.cells[i].slot == slot).collect()
    }

    pub fn indices_where(&self, f: impl Fn((usize, usize)) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&i| f(self.cells[i].slot)).collect()
    }

    fn diag_of(&self, f: impl Fn((usize, usize)) -> i64) -> Matrix<F> {
        Matrix::diagonal(&self.cells.iter().map(|c| F::from_int(f(c.slot))).collect::<Vec<_>>())
    }

    /// `(-1)^(a+b)`.
    pub fn parity(&self) -> Matrix<F> {
        self.diag_of(|(a, b)| if (a + b) % 2 == 0 { 1 } else { -1 })
    }

    /// Counting operator `deg - 1`.
    pub fn counting(&self) -> Matrix<F> {
        self.diag_of(|(a, b)| (a + b) as i64 - 1)
    }

    pub fn d(&self) -> Matrix<F> {
        self.del.add(&self.dbar)
    }

    pub fn d_adj(&self) -> Matrix<F> {
        self.del_adj.add(&self.dbar_adj)
    }

    pub fn dirac(&self, op: Operator) -> Matrix<F> {
        match op {
            Operator::Dbar => self.dbar.add(&self.dbar_adj),
            Operator::Del => self.del.add(&self.del_adj),
            Operator::D => self.d().add(&self.d_adj()),
        }
    }

    pub fn laplacian(&self, op: Operator) -> Matrix<F> {
        let (x, y) = match op {
            Operator::Dbar => (&self.dbar, &self.dbar_adj),
            Operator::Del => (&self.del, &self.del_adj),
            Operator::D => return self.d().anticommutator(&self.d_adj()),
        };
        x.anticommutator(y)
    }

    /// `∇² = ∂∂̄ + ∂̄∂`.
    pub fn curvature(&self) -> Matrix<F> {
        self.del.anticommutator(&self.dbar)
    }

    pub fn inner(&self, x: &[F], y: &[F]) -> F {
        inner(&self.gram_matrix(), x, y)
    }

    /// Square of the largest entry of the first-order operators; residual scale in floating mode.
    pub fn scale(&self) -> f64 {
        let m = [&self.dbar, &self.del, &self.dbar_adj, &self.del_adj]
            .iter()
            .map(|a| a.max_residual())
            .fold(1.0, f64::max);
        m * m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    /// `∂̄`, on `Ω^(0,•)` when restricted.
    Dbar,
    /// `∂`, on `Ω^(•,0)` when restricted.
    Del,
    /// `d = ∂ + ∂̄`.
    D,
}

impl Operator {
    pub fn name(self) -> &'static str {
        match self {
            Operator::Dbar => "dbar",
            Operator::Del => "del",
            Operator::D => "d",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "dbar" => Some(Operator::Dbar),
            "del" => Some(Operator::Del),
            "d" => Some(Operator::D),
            _ => None,
        }
    }

    /// The slots of its natural subcomplex.
    pub fn keeps(self, (a, b): (usize, usize)) -> bool {
        match self {
            Operator::Dbar => a == 0,
            Operator::Del => b == 0,
            Operator::D => true,
        }
    }
}

/// The truncated twisted double complex `Ω^(•,•) ⊗ ℰ_k` over blocks of label `≤ 2L + |k|`.
#[derive(Clone, Debug)]
pub struct TruncatedComplex<F: Field> {
    pub cutoff: usize,
    pub twist: i64,
    pub blocks: Vec<ComplexBlock<F>>,
    pub local: LocalCalculus<F>,
    ctx: Ctx<F>,
}

/// The untwisted complex with spin cutoff `cutoff`.
pub fn build_complex<F: Field>(ctx: &Ctx<F>, cutoff: usize) -> Result<TruncatedComplex<F>> {
    build_twisted(ctx, cutoff, 0)
}

/// The complex twisted by `ℰ_k`.
pub fn build_twisted<F: Field>(ctx: &Ctx<F>, cutoff: usize, k: i64) -> Result<TruncatedComplex<F>> {
    if k.unsigned_abs() as usize > 2 * cutoff.max(1) {
        return Err(Error::Cutoff(format!(
            "twist {k} needs a cutoff of at least {}",
            k.unsigned_abs().div_ceil(2)
        )));
    }
    let qg = QuantumGroup::suq2();
    let local = LocalCalculus::new(ctx)?;
    let max_label = 2 * cutoff + k.unsigned_abs() as usize;
    let weights: Vec<i64> = SLOTS.iter().map(|&s| slot_weight(k, s)).collect();
    let trunc = build_blocks_filtered(qg, max_label, ctx, |w| weights.contains(&w))?;
    let fk = UElem::word(vec![UGen::F, UGen::K]);
    let ek = UElem::word(vec![UGen::E, UGen::K]);
    let lambda0 = ctx.scalar(&del_dressing());
    let lift = |m: &Matrix<F>, cells: &[Cell], pos: &HashMap<(i64, (usize, usize)), usize>| -> Matrix<F> {
        let mut out = Matrix::zeros(cells.len(), cells.len());
        for (j, c) in cells.iter().enumerate() {
            for &s in &SLOTS {
                let v = m.get(local.slot_index(s), local.slot_index(c.slot));
                if v.is_zero() {
                    continue;
                }
                if let Some(&i) = pos.get(&(c.left_weight, s)) {
                    out.set(i, j, v.clone());
                }
            }
        }
        out
    };
    let mut blocks = Vec::new();
    for label in (0..=max_label).filter(|l| (*l as i64 - k).rem_euclid(2) == 0) {
        let pw = &trunc.blocks[label];
        let by_weight: HashMap<(i64, i64), usize> = pw
            .basis
            .iter()
            .enumerate()
            .map(|(i, v)| ((v.right_weight, v.left_weight), i))
            .collect();
        let mut lefts: Vec<i64> = pw.basis.iter().map(|v| v.left_weight).collect();
        lefts.sort_unstable_by(|a, b| b.cmp(a));
        lefts.dedup();
        let mut cells = Vec::new();
        let mut gram = Vec::new();
        for &m in &lefts {
            for &s in &SLOTS {
                let w = slot_weight(k, s);
                if let Some(&i) = by_weight.get(&(w, m)) {
                    let v = &pw.basis[i];
                    cells.push(Cell {
                        left_weight: m,
                        slot: s,
                        right_weight: w,
                        top: v.top.clone(),
                    });
                    gram.push(v.norm.mul(&local.metric(s)));
                }
            }
        }
        if cells.is_empty() {
            continue;
        }
        let pos: HashMap<(i64, (usize, usize)), usize> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.left_weight, c.slot), i))
            .collect();
        let n = cells.len();
        let mut dbar = Matrix::zeros(n, n);
        let mut del = Matrix::zeros(n, n);
        for (j, c) in cells.iter().enumerate() {
            let (a, b) = c.slot;
            // (X, local generator, target slot, prefactor)
            let mut moves = Vec::new();
            if b == 0 {
                moves.push((&fk, (0, 1), (a, 1), F::one(), true));
            }
            if a == 0 {
                moves.push((&ek, (1, 0), (1, b), lambda0.clone(), false));
            }
            for (x, gen, target, pre, is_dbar) in moves {
                let i = pos.get(&(c.left_weight, target)).copied();
                let rows: Vec<Word> = i.map(|i| vec![cells[i].top.clone()]).unwrap_or_default();
                let m = top_matrix(ctx, &rows, std::slice::from_ref(&c.top), |w| {
                    qg.right_action(x, &NCPoly::word(w.clone()))
                })?;
                let Some(i) = i else { continue };
                let coeff = m.get(0, 0).mul(&local.wedge_coeff(gen, c.slot, target)).mul(&pre);
                if is_dbar {
                    dbar.set(i, j, coeff);
                } else {
                    del.set(i, j, coeff);
                }
            }
        }
        let star = lift(&local.hodge.star, &cells, &pos);
        let lefschetz = lift(&local.space.lefschetz(), &cells, &pos);
        let dual_lefschetz = lift(&local.hodge.lambda, &cells, &pos);
        let dbar_adj = diag_adjoint(&dbar, &gram);
        let del_adj = diag_adjoint(&del, &gram);
        let dbar_adj_hodge = star.mul(&del).mul(&star).neg();
        let del_adj_hodge = star.mul(&dbar).mul(&star).neg();
        let block = ComplexBlock {
            label,
            cells,
            gram,
            dbar,
            del,
            dbar_adj,
            del_adj,
            dbar_adj_hodge,
            del_adj_hodge,
            lefschetz,
            dual_lefschetz,
            star,
        };
        let fail = |identity: &str| Error::Build {
            block: spin_label(label),
            identity: identity.into(),
        };
        if !block.dbar.mul(&block.dbar).is_zero() {
            return Err(fail("∂̄² = 0"));
        }
        if !block.del.mul(&block.del).is_zero() {
            return Err(fail("∂² = 0"));
        }
        if k == 0 && !block.curvature().is_zero() {
            return Err(fail("∂∂̄ + ∂̄∂ = 0"));
        }
        blocks.push(block);
    }
    Ok(TruncatedComplex {
        cutoff,
        twist: k,
        blocks,
        local,
        ctx: ctx.clone(),
    })
}

/// `FK ▷ (xy) = (FK ▷ x) y + x (FK ▷ y)` and the same for `EK`, for Podleś-sphere words `x, y`.
pub fn leibniz_check(max_len: usize) -> Result<Report> {
    let qg = QuantumGroup::suq2();
    let alg = qg.algebra();
    let words: Vec<Word> = alg
        .normal_words_up_to(max_len)
        .into_iter()
        .filter(|w| !w.is_empty() && qg.weight(w, Side::Right) == 0)
        .collect();
    let mut r = Report::new("Leibniz rule on the Podleś sphere");
    for (name, x) in [
        ("∂̄ Leibniz", UElem::word(vec![UGen::F, UGen::K])),
        ("∂ Leibniz", UElem::word(vec![UGen::E, UGen::K])),
    ] {
        let mut ok = true;
        for u in &words {
            for v in &words {
                let pu = NCPoly::word(u.clone());
                let pv = NCPoly::word(v.clone());
                let lhs = qg.right_action(&x, &qg.mul(&pu, &pv)?)?;
                let rhs = qg
                    .mul(&qg.right_action(&x, &pu)?, &pv)?
                    .add(&qg.mul(&pu, &qg.right_action(&x, &pv)?)?);
                ok &= lhs.sub(&rhs).is_zero();
            }
        }
        r.push(Relation::flag(name, ok).with_note(format!("{} pairs", words.len() * words.len())));
    }
    Ok(r)
}

/// Aggregates named blockwise residual matrices into one relation per name.
struct Collector {
    entries: Vec<(String, f64, bool, Vec<String>, bool)>,
}

impl Collector {
    fn new() -> Self {
        Self { entries: Vec::new() }
    }

    /// Residuals are relative to `scale` in floating mode.
    fn add<F: Field>(&mut self, name: &str, block: &str, diff: &Matrix<F>, required: bool) {
        self.add_rel(name, block, diff, 1.0, required)
    }

    fn add_rel<F: Field>(&mut self, name: &str, block: &str, diff: &Matrix<F>, scale: f64, required: bool) {
        let (res, ok) = if F::is_exact() {
            (diff.max_residual(), diff.is_zero())
        } else {
            let r = diff.max_residual() / scale.max(1.0);
            (r, r <= crate::qarith::FLOAT_TOL)
        };
        match self.entries.iter_mut().find(|e| e.0 == name) {
            Some(e) => {
                e.1 = e.1.max(res);
                e.2 &= ok;
                if !ok {
                    e.3.push(block.to_string());
                }
            }
            None => self.entries.push((
                name.to_string(),
                res,
                ok,
                if ok { vec![] } else { vec![block.to_string()] },
                required,
            )),
        }
    }

    fn flag(&mut self, name: &str, block: &str, ok: bool) {
        let diff = Matrix::from_fn(1, 1, |_, _| crate::qarith::C64::new(if ok { 0.0 } else { 1.0 }, 0.0));
        self.add(name, block, &diff, true);
    }

    fn into_report(self, title: String) -> Report {
        let mut r = Report::new(title);
        for (name, residual, pass, blocks, required) in self.entries {
            let mut rel = Relation {
                name,
                residual,
                pass,
                required,
                note: String::new(),
                blocks: Vec::new(),
            };
            if !blocks.is_empty() {
                rel.note = format!("fails on blocks {}", blocks.join(","));
                rel.blocks = blocks;
            }
            r.push(rel);
        }
        r
    }
}

/// The eight Kähler (Nakano) identities for given operators.
#[allow(clippy::too_many_arguments)]
fn kahler_identities<F: Field>(
    c: &mut Collector,
    prefix: &str,
    block: &str,
    l: &Matrix<F>,
    lam: &Matrix<F>,
    del: &Matrix<F>,
    dbar: &Matrix<F>,
    del_adj: &Matrix<F>,
    dbar_adj: &Matrix<F>,
    scale: f64,
) {
    let i = F::from_gauss(&gauss_i());
    let mi = i.neg();
    let sc = scale;
    c.add_rel(&format!("{prefix}[∂,L] = 0"), block, &del.commutator(l), sc, true);
    c.add_rel(&format!("{prefix}[∂̄,L] = 0"), block, &dbar.commutator(l), sc, true);
    c.add_rel(
        &format!("{prefix}[∂†,Λ] = 0"),
        block,
        &del_adj.commutator(lam),
        sc,
        true,
    );
    c.add_rel(
        &format!("{prefix}[∂̄†,Λ] = 0"),
        block,
        &dbar_adj.commutator(lam),
        sc,
        true,
    );
    c.add_rel(
        &format!("{prefix}[L,∂†] = i∂̄"),
        block,
        &l.commutator(del_adj).sub(&dbar.scale(&i)),
        sc,
        true,
    );
    c.add_rel(
        &format!("{prefix}[L,∂̄†] = -i∂"),
        block,
        &l.commutator(dbar_adj).sub(&del.scale(&mi)),
        sc,
        true,
    );
    c.add_rel(
        &format!("{prefix}[Λ,∂] = i∂̄†"),
        block,
        &lam.commutator(del).sub(&dbar_adj.scale(&i)),
        sc,
        true,
    );
    c.add_rel(
        &format!("{prefix}[Λ,∂̄] = -i∂†"),
        block,
        &lam.commutator(dbar).sub(&del_adj.scale(&mi)),
        sc,
        true,
    );
}

impl<F: Field> TruncatedComplex<F> {
    pub fn ctx(&self) -> &Ctx<F> {
        &self.ctx
    }

    pub fn block(&self, label: usize) -> Option<&ComplexBlock<F>> {
        self.blocks.iter().find(|b| b.label == label)
    }

    fn title(&self, what: &str) -> String {
        if self.twist == 0 {
            format!("{what} (cutoff {})", self.cutoff)
        } else {
            format!("{what} (ℰ_{}, cutoff {})", self.twist, self.cutoff)
        }
    }

    /// Gram adjoints against the Hodge-conjugation formulae.
    pub fn adjoint_report(&self) -> Report {
        let mut c = Collector::new();
        for b in &self.blocks {
            let s = b.spin();
            let sc = b.scale();
            c.add_rel("∂̄† = -∗∂∗", &s, &b.dbar_adj.sub(&b.dbar_adj_hodge), sc, true);
            c.add_rel("∂† = -∗∂̄∗", &s, &b.del_adj.sub(&b.del_adj_hodge), sc, true);
        }
        c.into_report(self.title("adjoints"))
    }

    /// Fail with a convention error when the two adjoint routes disagree.
    pub fn require_adjoints_agree(&self) -> Result<()> {
        let r = self.adjoint_report();
        match r.failures().first() {
            None => Ok(()),
            Some(f) => Err(Error::Convention(format!("{} ({})", f.name, f.note))),
        }
    }

    /// Structural checks on Dirac and Laplace operators.
    pub fn dirac_report(&self) -> Report {
        let mut c = Collector::new();
        let two = F::from_int(2);
        for b in &self.blocks {
            let s = b.spin();
            let sc = b.scale();
            c.add_rel("∂̄(1) = 0", &s, &Matrix::from_fn(1, 1, |_, _| F::zero()), sc, true);
            for op in [Operator::Dbar, Operator::Del, Operator::D] {
                let dm = b.dirac(op);
                let adj = diag_adjoint(&dm, &b.gram);
                c.add_rel(&format!("D_{} self-adjoint", op.name()), &s, &dm.sub(&adj), sc, true);
                c.add_rel(
                    &format!("Δ_{} = D_{}²", op.name(), op.name()),
                    &s,
                    &b.laplacian(op).sub(&dm.mul(&dm)),
                    sc,
                    true,
                );
                c.add_rel(
                    &format!("D_{} γ + γ D_{} = 0", op.name(), op.name()),
                    &s,
                    &dm.anticommutator(&b.parity()),
                    sc,
                    true,
                );
            }
            if self.twist == 0 {
                c.add_rel(
                    "Δ_d = 2Δ_∂",
                    &s,
                    &b.laplacian(Operator::D).sub(&b.laplacian(Operator::Del).scale(&two)),
                    sc,
                    true,
                );
                c.add_rel(
                    "Δ_d = 2Δ_∂̄",
                    &s,
                    &b.laplacian(Operator::D).sub(&b.laplacian(Operator::Dbar).scale(&two)),
                    sc,
                    true,
                );
            }
            let lap = b.laplacian(Operator::Dbar);
            let harm = lap.nullspace();
            let mut ok = true;
            for v in &harm {
                ok &= b.dbar.apply(v).iter().all(F::is_zero) && b.dbar_adj.apply(v).iter().all(F::is_zero);
            }
            let kernel_both = {
                let mut stacked = Matrix::zeros(2 * b.dim(), b.dim());
                for i in 0..b.dim() {
                    for j in 0..b.dim() {
                        stacked.set(i, j, b.dbar.get(i, j).clone());
                        stacked.set(i + b.dim(), j, b.dbar_adj.get(i, j).clone());
                    }
                }
                stacked.nullity()
            };
            ok &= kernel_both == harm.len();
            c.flag("ker Δ_∂̄ = ker ∂̄ ∩ ker ∂̄†", &s, ok);
        }
        c.into_report(self.title("Dirac and Laplace operators"))
    }

    /// The eight Kähler identities and their corollaries, also for the opposite structure.
    pub fn kahler_identity_report(&self) -> Report {
        let mut c = Collector::new();
        for b in &self.blocks {
            let s = b.spin();
            let sc = b.scale();
            kahler_identities(
                &mut c,
                "",
                &s,
                &b.lefschetz,
                &b.dual_lefschetz,
                &b.del,
                &b.dbar,
                &b.del_adj,
                &b.dbar_adj,
                b.scale(),
            );
            c.add_rel("∂∂̄† + ∂̄†∂ = 0", &s, &b.del.anticommutator(&b.dbar_adj), sc, true);
            c.add_rel("∂†∂̄ + ∂̄∂† = 0", &s, &b.del_adj.anticommutator(&b.dbar), sc, true);
            if self.twist == 0 {
                c.add_rel(
                    "Δ_∂ = Δ_∂̄",
                    &s,
                    &b.laplacian(Operator::Del).sub(&b.laplacian(Operator::Dbar)),
                    sc,
                    true,
                );
            } else {
                let i = F::from_gauss(&gauss_i());
                let an = b.curvature().scale(&i).commutator(&b.dual_lefschetz);
                c.add_rel(
                    "Δ_∂̄ = Δ_∂ + [i∇²,Λ]",
                    &s,
                    &b.laplacian(Operator::Dbar).sub(&b.laplacian(Operator::Del)).sub(&an),
                    sc,
                    true,
                );
            }
            kahler_identities(
                &mut c,
                "opposite: ",
                &s,
                &b.lefschetz.neg(),
                &b.dual_lefschetz.neg(),
                &b.dbar,
                &b.del,
                &b.dbar_adj,
                &b.del_adj,
                b.scale(),
            );
        }
        c.into_report(self.title("Kähler identities"))
    }

    /// Dimensions of `ker ∂̄ / im ∂̄` and `ker ∂ / im ∂` per bidegree, and of harmonic forms.
    pub fn cohomology(&self) -> Cohomology {
        let mut out = Cohomology::default();
        for b in &self.blocks {
            for &s in &SLOTS {
                let cols = b.indices_of(s);
                if cols.is_empty() {
                    continue;
                }
                let all: Vec<usize> = (0..b.dim()).collect();
                let dim_ker = |m: &Matrix<F>| cols.len() - m.submatrix(&all, &cols).rank();
                let rank_into = |m: &Matrix<F>, src: Option<(usize, usize)>| match src {
                    Some(src) => {
                        let sc = b.indices_of(src);
                        if sc.is_empty() {
                            0
                        } else {
                            m.submatrix(&cols, &sc).rank()
                        }
                    }
                    None => 0,
                };
                let (a, bb) = s;
                let dbar_src = (bb > 0).then(|| (a, bb - 1));
                let del_src = (a > 0).then(|| (a - 1, bb));
                *out.dbar.entry(s).or_insert(0) += dim_ker(&b.dbar) - rank_into(&b.dbar, dbar_src);
                *out.del.entry(s).or_insert(0) += dim_ker(&b.del) - rank_into(&b.del, del_src);
                let lap = b.laplacian(Operator::Dbar).submatrix(&cols, &cols);
                *out.harmonic.entry(s).or_insert(0) += lap.nullity();
            }
        }
        for &s in &SLOTS {
            for m in [&mut out.dbar, &mut out.del, &mut out.harmonic] {
                m.entry(s).or_insert(0);
            }
        }
        out
    }

    /// Hodge decomposition `Ω = H ⊕ im ∂̄ ⊕ im ∂̄†` blockwise.
    pub fn hodge_decomposition_report(&self) -> Report {
        let mut c = Collector::new();
        for b in &self.blocks {
            let s = b.spin();
            let harm = b.laplacian(Operator::Dbar).nullspace();
            let im = b.dbar.column_space();
            let im_adj = b.dbar_adj.column_space();
            let orth = |xs: &[Vec<F>], ys: &[Vec<F>]| xs.iter().all(|x| ys.iter().all(|y| b.inner(x, y).is_zero()));
            c.flag("H ⊥ im ∂̄", &s, orth(&harm, &im));
            c.flag("H ⊥ im ∂̄†", &s, orth(&harm, &im_adj));
            c.flag("im ∂̄ ⊥ im ∂̄†", &s, orth(&im, &im_adj));
            c.flag(
                "dim H + rk ∂̄ + rk ∂̄† = dim",
                &s,
                harm.len() + im.len() + im_adj.len() == b.dim(),
            );
            let r = b.dbar.rank();
            c.flag(
                "∂̄: im ∂̄† ≅ im ∂̄",
                &s,
                b.dbar.mul(&b.dbar_adj).rank() == r && b.dbar_adj.rank() == r,
            );
        }
        let coh = self.cohomology();
        let mut r = c.into_report(self.title("Hodge decomposition"));
        r.push(Relation::flag("cohomology = harmonic forms", coh.dbar == coh.harmonic));
        r
    }

    /// Spectrum of a Laplacian (or its Dirac operator) on the natural subcomplex of `op`.
    pub fn spectrum(&self, op: Operator, dirac: bool, q0: f64) -> SpectrumTable {
        let s0 = q0.sqrt();
        let mut rows = Vec::new();
        for b in &self.blocks {
            let idx = b.indices_where(|s| op.keeps(s));
            if idx.is_empty() {
                continue;
            }
            let lap = b.laplacian(op).submatrix(&idx, &idx);
            let values: Vec<F> = (0..idx.len()).map(|i| lap.get(i, i).clone()).collect();
            let mut groups: Vec<(F, usize)> = Vec::new();
            for v in values {
                match groups.iter_mut().find(|(g, _)| g.sub(&v).is_zero()) {
                    Some(g) => g.1 += 1,
                    None => groups.push((v, 1)),
                }
            }
            let mut block_rows: Vec<SpectrumRow> = Vec::new();
            for (v, mult) in groups {
                let x = v.approx_at(s0).re;
                if !dirac || v.is_zero() {
                    block_rows.push(SpectrumRow {
                        block: b.spin(),
                        label: b.label,
                        operator: format!("{}{}", if dirac { "D_" } else { "Δ_" }, op.name()),
                        exact: v.to_string(),
                        value: if dirac { 0.0 } else { x },
                        multiplicity: mult,
                        kernel: v.is_zero(),
                    });
                } else {
                    for sign in [-1.0, 1.0] {
                        block_rows.push(SpectrumRow {
                            block: b.spin(),
                            label: b.label,
                            operator: format!("D_{}", op.name()),
                            exact: format!("{}sqrt({v})", if sign < 0.0 { "-" } else { "" }),
                            value: sign * x.sqrt(),
                            multiplicity: mult / 2,
                            kernel: false,
                        });
                    }
                }
            }
            block_rows.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
            rows.extend(block_rows);
        }
        SpectrumTable { rows }
    }

    /// The nonzero eigenvalue of `Δ_op` on each integral-spin block and its multiplicity.
    pub fn block_eigenvalues(&self, op: Operator) -> Vec<(usize, Vec<(F, usize)>)> {
        self.blocks
            .iter()
            .map(|b| {
                let idx = b.indices_where(|s| op.keeps(s));
                let lap = b.laplacian(op).submatrix(&idx, &idx);
                let mut groups: Vec<(F, usize)> = Vec::new();
                for i in 0..idx.len() {
                    let v = lap.get(i, i).clone();
                    match groups.iter_mut().find(|(g, _)| g.sub(&v).is_zero()) {
                        Some(g) => g.1 += 1,
                        None => groups.push((v, 1)),
                    }
                }
                (b.label, groups)
            })
            .collect()
    }

    /// `true` when every Laplacian is diagonal in the cell basis.
    pub fn laplacians_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| {
            [Operator::Dbar, Operator::Del, Operator::D].iter().all(|&op| {
                let m = b.laplacian(op);
                (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j).is_zero()))
            })
        })
    }

    /// Curvature of the Chern connection `∂ + ∂̄` on `ℰ_k`.
    pub fn curvature_check(&self, q0: f64) -> Result<CurvatureReport<F>> {
        let i = F::from_gauss(&gauss_i());
        let minus_i = i.neg();
        let mut theta: Option<F> = None;
        for b in &self.blocks {
            let nab = b.curvature();
            for r in 0..b.dim() {
                for col in 0..b.dim() {
                    let l = b.lefschetz.get(r, col);
                    if !l.is_zero() && theta.is_none() {
                        theta = Some(nab.get(r, col).div(&minus_i.mul(l)));
                    }
                }
            }
        }
        let theta = theta.unwrap_or_else(F::zero);
        let mut c = Collector::new();
        for b in &self.blocks {
            let s = b.spin();
            let sc = b.scale();
            let diff = b.curvature().sub(&b.lefschetz.scale(&minus_i.mul(&theta)));
            if !diff.is_zero() {
                return Err(Error::Structure(format!(
                    "∇² is not proportional to κ on block {s} of ℰ_{}",
                    self.twist
                )));
            }
            c.add_rel("∇² = -iθκ", &s, &diff, sc, true);
            let an = b.curvature().scale(&i).commutator(&b.dual_lefschetz);
            c.add_rel(
                "[i∇²,Λ] = θ(deg - 1)",
                &s,
                &an.sub(&b.counting().scale(&theta)),
                sc,
                true,
            );
        }
        let mut report = c.into_report(self.title("curvature"));
        let ctx = &self.ctx;
        let k = self.twist;
        let expected = ctx.scalar(&theta_formula(k));
        report.push(Relation::flag("θ = q^(1-k) [k]_q", theta.sub(&expected).is_zero()));
        let mut candidates = Vec::new();
        if k >= 0 {
            for (name, alpha) in [("q^-1", QScalar::q_pow(-1)), ("q^-2", QScalar::q_pow(-2))] {
                for (vname, variant) in [
                    ("inclusive", AltVariant::Inclusive),
                    ("exclusive", AltVariant::Exclusive),
                ] {
                    let v = ctx.scalar(&altint(k, &alpha, variant)?);
                    candidates.push((format!("({k})_{{{name}}} {vname}"), theta.sub(&v).is_zero()));
                }
            }
        }
        let value = theta.approx_at(q0.sqrt()).re;
        Ok(CurvatureReport {
            twist: k,
            theta,
            theta_float: value,
            candidates,
            report,
        })
    }

    /// Lower bound `c_ℱ` of `[i∇²,Λ]` per bidegree, the spectral bound, and the Euler characteristic.
    pub fn fredholm_gate(&self, q0: f64) -> Result<FredholmReport> {
        let curv = self.curvature_check(q0)?;
        let s0 = q0.sqrt();
        let theta = curv.theta_float;
        let mut bounds = BTreeMap::new();
        let mut holds = true;
        for &(a, b) in &SLOTS {
            let cf = theta * ((a + b) as f64 - 1.0) + 0.0;
            bounds.insert((a, b), cf);
        }
        for blk in &self.blocks {
            let lap = blk.laplacian(Operator::Dbar);
            for (i, cell) in blk.cells.iter().enumerate() {
                let v = lap.get(i, i).approx_at(s0).re;
                if v < bounds[&cell.slot] - 1e-9 * (1.0 + v.abs()) {
                    holds = false;
                }
            }
        }
        let coh = self.cohomology();
        let chi = coh.dbar[&(0, 0)] as i64 - coh.dbar[&(0, 1)] as i64;
        let mut report = Report::new(self.title("Fredholm gate"));
        report.push(Relation::flag("spec Δ_∂̄ ≥ c_ℱ per bidegree", holds));
        report.push(
            Relation::flag("c_ℱ > 0 on odd forms", bounds[&(0, 1)] > 0.0 && bounds[&(1, 0)] > 0.0)
                .informational()
                .with_note("[i∇²,Λ] = ±θ(k-n) vanishes on degree n = 1"),
        );
        Ok(FredholmReport {
            twist: self.twist,
            bounds,
            euler_characteristic: chi,
            report,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cohomology {
    pub dbar: BTreeMap<(usize, usize), usize>,
    pub del: BTreeMap<(usize, usize), usize>,
    pub harmonic: BTreeMap<(usize, usize), usize>,
}

impl Cohomology {
    /// `Σ (-1)^b dim H^(0,b)_∂̄`.
    pub fn chi_dbar(&self) -> i64 {
        self.dbar[&(0, 0)] as i64 - self.dbar[&(0, 1)] as i64
    }

    /// `Σ (-1)^a dim H^(a,0)_∂`.
    pub fn chi_del(&self) -> i64 {
        self.del[&(0, 0)] as i64 - self.del[&(1, 0)] as i64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRow {
    pub block: String,
    pub label: usize,
    pub operator: String,
    pub exact: String,
    pub value: f64,
    pub multiplicity: usize,
    pub kernel: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("block,eigenvalue_exact,eigenvalue_float,multiplicity\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{:.12e},{}\n",
                r.block,
                r.exact.replace(',', ";"),
                r.value,
                r.multiplicity
            ));
        }
        s
    }

    pub fn kernel_dim(&self) -> usize {
        self.rows.iter().filter(|r| r.kernel).map(|r| r.multiplicity).sum()
    }
}

#[derive(Clone, Debug)]
pub struct CurvatureReport<F: Field> {
    pub twist: i64,
    pub theta: F,
    pub theta_float: f64,
    /// Which alternative-integer candidates equal `θ`.
    pub candidates: Vec<(String, bool)>,
    pub report: Report,
}

#[derive(Clone, Debug)]
pub struct FredholmReport {
    pub twist: i64,
    pub bounds: BTreeMap<(usize, usize), f64>,
    pub euler_characteristic: i64,
    pub report: Report,
}

/// Cohomology at the cutoff, after checking it agrees with the cutoff below.
pub fn stable_cohomology<F: Field>(ctx: &Ctx<F>, cutoff: usize, k: i64) -> Result<Cohomology> {
    let top = build_twisted(ctx, cutoff, k)?.cohomology();
    if cutoff == 0 {
        return Err(Error::Cutoff("stability needs a cutoff of at least 1".into()));
    }
    let below = build_twisted(ctx, cutoff - 1, k);
    match below {
        Ok(c) if c.cohomology() == top => Ok(top),
        Ok(_) => Err(Error::Cutoff(format!(
            "cohomology of ℰ_{k} changes between cutoffs {} and {cutoff}",
            cutoff - 1
        ))),
        Err(Error::Cutoff(m)) => Err(Error::Cutoff(m)),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub twist: i64,
    pub h00: usize,
    pub h01: usize,
    pub index_dbar: i64,
    pub index_del: i64,
}

/// Index of `D_∂̄` on `Ω^(0,•) ⊗ ℰ_k`, checked for cutoff stability.
pub fn index<F: Field>(ctx: &Ctx<F>, cutoff: usize, k: i64) -> Result<IndexReport> {
    let coh = stable_cohomology(ctx, cutoff, k)?;
    Ok(IndexReport {
        twist: k,
        h00: coh.dbar[&(0, 0)],
        h01: coh.dbar[&(0, 1)],
        index_dbar: coh.chi_dbar(),
        index_del: coh.chi_del(),
    })
}

/// `dim ker ∂̄_{ℰ_k}` on sections.
pub fn borel_weil_dims<F: Field>(ctx: &Ctx<F>, cutoff: usize, k: i64) -> Result<usize> {
    Ok(build_twisted(ctx, cutoff, k)?.cohomology().dbar[&(0, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss::rat;
    use crate::qarith::{qint_in, QuadExact, C64};

    fn exact() -> Ctx<QuadExact> {
        Ctx::exact_at(&rat(4, 5))
    }

    #[test]
    fn untwisted_complex_builds_and_adjoints_agree() {
        let c = build_complex(&exact(), 2).unwrap();
        assert!(c.laplacians_diagonal());
        let r = c.adjoint_report();
        assert!(r.passed(), "{r}");
        let r = c.kahler_identity_report();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn spectrum_ratios() {
        let ctx = exact();
        let c = build_complex(&ctx, 3).unwrap();
        let q = ctx.q();
        let evs = c.block_eigenvalues(Operator::Dbar);
        let mu1 = evs
            .iter()
            .find(|(l, _)| *l == 2)
            .unwrap()
            .1
            .iter()
            .find(|(v, _)| !v.is_zero())
            .unwrap()
            .0
            .clone();
        for (label, groups) in evs {
            let j = (label / 2) as i64;
            for (v, m) in groups {
                if v.is_zero() {
                    assert_eq!((j, m), (0, 1));
                } else {
                    assert_eq!(m as i64, 4 * j + 2);
                    let want = qint_in(j, &q).mul(&qint_in(j + 1, &q)).div(&qint_in(2, &q));
                    assert_eq!(v.div(&mu1), want);
                }
            }
        }
    }

    #[test]
    fn twisted_sections() {
        let ctx = exact();
        for k in 0..=3 {
            assert_eq!(borel_weil_dims(&ctx, 2, k).unwrap(), (k + 1) as usize);
            assert_eq!(borel_weil_dims(&ctx, 2, -k - 1).unwrap(), 0);
        }
    }

    #[test]
    fn curvature_matches_formula() {
        let ctx = exact();
        for k in [-2, -1, 0, 1, 2] {
            let c = build_twisted(&ctx, 2, k).unwrap();
            let cr = c.curvature_check(0.8).unwrap();
            assert!(cr.report.passed(), "{}", cr.report);
        }
    }

    #[test]
    fn numeric_mode_agrees() {
        let c = build_complex(&Ctx::<C64>::float_at(0.5), 2).unwrap();
        let r = c.kahler_identity_report();
        assert!(r.passed(), "{r}");
        assert_eq!(c.cohomology().chi_dbar(), 1);
    }
}
