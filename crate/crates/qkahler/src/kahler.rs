//! Lefschetz, Hodge and metric operators on a finite-dimensional bigraded algebra with a
//! distinguished central real `(1,1)`-form `κ`.
//!
//! All operators are matrices in a fixed basis of homogeneous elements. The Hodge map is built
//! from the Lefschetz decomposition by the Weil-type formula
//!
//! ```text
//! ∗_p(L^j α) = (-1)^(k(k+1)/2) i^(a-b) [j]_p! / [n-j-k]_p! · L^(n-j-k) α,   α ∈ P^(a,b), k = a+b
//! ```
//!
//! and the metric is `g(ω, ν) = ⟨1⟩ ∗(ω ∧ ∗(ν*))`.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exterior::ExteriorAlgebra;
use crate::linalg::{gram_adjoint, inner, is_positive_definite_exact, Matrix};
use crate::qarith::gauss::gauss_i;
use crate::qarith::{qfact_in, qint_in, Ctx, Field, QuadExact};

/// One checked identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
    /// Informational relations are reported but do not affect the verdict.
    pub required: bool,
    pub note: String,
    /// Blocks on which the relation failed, when it is checked blockwise.
    pub blocks: Vec<String>,
}

impl Relation {
    pub fn from_matrix<F: Field>(name: impl Into<String>, diff: &Matrix<F>) -> Self {
        Self {
            name: name.into(),
            residual: diff.max_residual(),
            pass: diff.is_zero(),
            required: true,
            note: String::new(),
            blocks: Vec::new(),
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            residual: if pass { 0.0 } else { 1.0 },
            pass,
            required: true,
            note: String::new(),
            blocks: Vec::new(),
        }
    }

    pub fn informational(mut self) -> Self {
        self.required = false;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match (self.pass, self.required) {
            (true, _) => "ok",
            (false, true) => "FAIL",
            (false, false) => "fails (informational)",
        };
        write!(f, "{:<48} residual={:<10.3e} {}", self.name, self.residual, verdict)?;
        if !self.note.is_empty() {
            write!(f, "  [{}]", self.note)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub relations: Vec<Relation>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            relations: Vec::new(),
        }
    }

    pub fn push(&mut self, r: Relation) {
        self.relations.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.relations.extend(other.relations);
    }

    pub fn passed(&self) -> bool {
        self.relations.iter().filter(|r| r.required).all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&Relation> {
        self.relations.iter().filter(|r| r.required && !r.pass).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for r in &self.relations {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// A bigraded algebra with basis, product table, antilinear involution and a Kähler form.
#[derive(Clone, Debug)]
pub struct GradedSpace<F: Field> {
    n: usize,
    labels: Vec<String>,
    bidegrees: Vec<(usize, usize)>,
    /// `wedge[i][j]`: sparse coordinates of `b_i ∧ b_j`.
    wedge: Vec<Vec<Vec<(usize, F)>>>,
    /// Column `j` holds `b_j*`.
    star: Matrix<F>,
    kappa: Vec<F>,
    unit: usize,
}

impl<F: Field> GradedSpace<F> {
    /// Assemble from raw data. `product(i, j)` returns dense coordinates of `b_i ∧ b_j`.
    pub fn new(
        n: usize,
        labels: Vec<String>,
        bidegrees: Vec<(usize, usize)>,
        product: impl Fn(usize, usize) -> Vec<F>,
        star: Matrix<F>,
        kappa: Vec<F>,
    ) -> Result<Self> {
        let dim = bidegrees.len();
        if labels.len() != dim || star.rows() != dim || star.cols() != dim || kappa.len() != dim {
            return Err(Error::Rank("inconsistent sizes in graded space data".into()));
        }
        let unit = bidegrees
            .iter()
            .position(|&b| b == (0, 0))
            .ok_or_else(|| Error::Structure("no degree-zero basis element".into()))?;
        let wedge = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        product(i, j)
                            .into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            n,
            labels,
            bidegrees,
            wedge,
            star,
            kappa,
            unit,
        })
    }

    /// The specialization of a local exterior algebra.
    pub fn from_exterior(ext: &ExteriorAlgebra, ctx: &Ctx<F>) -> Result<Self> {
        let basis = ext.full_basis();
        let index: HashMap<Vec<u8>, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let alg = ext.algebra();
        let dim = basis.len();
        let coords = |p: &crate::rewrite::NCPoly| -> Result<Vec<F>> {
            let mut v = vec![F::zero(); dim];
            for (w, c) in p.terms() {
                let i = index
                    .get(w)
                    .ok_or_else(|| Error::Structure(format!("word {w:?} is not a basis element")))?;
                v[*i] = ctx.scalar(c);
            }
            Ok(v)
        };
        let mut products = vec![vec![Vec::new(); dim]; dim];
        for (i, wi) in basis.iter().enumerate() {
            for (j, wj) in basis.iter().enumerate() {
                let mut w = wi.clone();
                w.extend_from_slice(wj);
                products[i][j] = coords(&alg.nf_word(&w)?)?;
            }
        }
        let mut star = Matrix::zeros(dim, dim);
        for (j, w) in basis.iter().enumerate() {
            let s = alg.star(&crate::rewrite::NCPoly::word(w.clone()))?;
            for (i, c) in coords(&s)?.into_iter().enumerate() {
                star.set(i, j, c);
            }
        }
        let kappa = coords(&ext.kappa_local().poly)?;
        let labels = basis.iter().map(|w| ext.label(w).to_string()).collect();
        let bidegrees = basis.iter().map(|w| ext.bidegree(w)).collect();
        Self::new(
            ext.rank(),
            labels,
            bidegrees,
            |i, j| products[i][j].clone(),
            star,
            kappa,
        )
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.bidegrees.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn bidegree(&self, i: usize) -> (usize, usize) {
        self.bidegrees[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        let (a, b) = self.bidegrees[i];
        a + b
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn indices_of(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.bidegrees[i] == (a, b)).collect()
    }

    pub fn indices_of_degree(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == k).collect()
    }

    pub fn kappa(&self) -> &[F] {
        &self.kappa
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[i] = F::one();
        v
    }

    pub fn wedge(&self, x: &[F], y: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.mul(yj);
                for (k, t) in &self.wedge[i][j] {
                    out[*k] = out[*k].add(&c.mul(t));
                }
            }
        }
        out
    }

    /// The matrix of `ω ↦ x ∧ ω`.
    pub fn left_mult(&self, x: &[F]) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim()).map(|j| self.wedge(x, &self.basis_vector(j))).collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// Matrix of the involution on basis elements; `x* = S · conj(x)`.
    pub fn star_matrix(&self) -> &Matrix<F> {
        &self.star
    }

    pub fn star_of(&self, x: &[F]) -> Vec<F> {
        let c: Vec<F> = x.iter().map(|v| v.conj()).collect();
        self.star.apply(&c)
    }

    /// The opposite structure: bigrading `(a, b) ↦ (b, a)` and Kähler form `-κ`.
    pub fn opposite(&self) -> Self {
        let mut out = self.clone();
        out.kappa = self.kappa.iter().map(|c| c.neg()).collect();
        out.bidegrees = self.bidegrees.iter().map(|&(a, b)| (b, a)).collect();
        out
    }

    pub fn lefschetz(&self) -> Matrix<F> {
        self.left_mult(&self.kappa)
    }

    /// `H = (k - n)` on degree-`k` forms.
    pub fn counting(&self) -> Matrix<F> {
        self.diag(|i| F::from_int(self.degree(i) as i64 - self.n as i64))
    }

    /// `H_p = [k - n]_p`.
    pub fn counting_p(&self, p: &F) -> Matrix<F> {
        self.diag(|i| qint_in(self.degree(i) as i64 - self.n as i64, p))
    }

    /// `K_p = p^(k - n)`.
    pub fn k_p(&self, p: &F) -> Matrix<F> {
        self.diag(|i| p.pow_i(self.degree(i) as i64 - self.n as i64))
    }

    /// `(-1)^k`.
    pub fn parity(&self) -> Matrix<F> {
        self.diag(|i| F::from_int(if self.degree(i).is_multiple_of(2) { 1 } else { -1 }))
    }

    fn diag(&self, f: impl Fn(usize) -> F) -> Matrix<F> {
        Matrix::diagonal(&(0..self.dim()).map(f).collect::<Vec<_>>())
    }

    /// `L^(n-k): Ω^k → Ω^(2n-k)` must be bijective for `k < n`.
    pub fn check_hermitian(&self) -> Result<()> {
        let l = self.lefschetz();
        for k in 0..self.n {
            let src = self.indices_of_degree(k);
            let dst = self.indices_of_degree(2 * self.n - k);
            let mut m = Matrix::identity(self.dim());
            for _ in 0..(self.n - k) {
                m = l.mul(&m);
            }
            let block = m.submatrix(&dst, &src);
            if src.len() != dst.len() || block.rank() != src.len() {
                return Err(Error::NotHermitian(format!(
                    "L^{} is not bijective from degree {k} to degree {}",
                    self.n - k,
                    2 * self.n - k
                )));
            }
        }
        Ok(())
    }

    /// Lefschetz decomposition into `L^j P^(a,b)` pieces.
    pub fn lefschetz_decomposition(&self) -> Result<LefschetzDecomposition<F>> {
        self.check_hermitian()?;
        let l = self.lefschetz();
        let mut powers = vec![Matrix::identity(self.dim())];
        for _ in 0..=self.n {
            let next = l.mul(powers.last().unwrap());
            powers.push(next);
        }
        let mut components = Vec::new();
        for k in 0..=self.n {
            for a in (0..=k).rev() {
                let b = k - a;
                if a > self.n || b > self.n {
                    continue;
                }
                let idx = self.indices_of(a, b);
                if idx.is_empty() {
                    continue;
                }
                let all: Vec<usize> = (0..self.dim()).collect();
                let restricted = powers[self.n - k + 1].submatrix(&all, &idx);
                for v in restricted.nullspace() {
                    let mut full = vec![F::zero(); self.dim()];
                    for (t, &i) in idx.iter().enumerate() {
                        full[i] = v[t].clone();
                    }
                    for j in 0..=(self.n - k) {
                        components.push(Component {
                            primitive: (a, b),
                            j,
                            vector: powers[j].apply(&full),
                            source: full.clone(),
                        });
                    }
                }
            }
        }
        if components.len() != self.dim() {
            return Err(Error::Structure(format!(
                "Lefschetz decomposition has {} pieces for dimension {}",
                components.len(),
                self.dim()
            )));
        }
        let mut blocks = Vec::new();
        let mut seen = Vec::new();
        for i in 0..self.dim() {
            let bd = self.bidegree(i);
            if seen.contains(&bd) {
                continue;
            }
            seen.push(bd);
            let idx = self.indices_of(bd.0, bd.1);
            let comps: Vec<usize> = (0..components.len())
                .filter(|&c| {
                    let (a, b) = components[c].primitive;
                    let j = components[c].j;
                    (a + j, b + j) == bd
                })
                .collect();
            if comps.len() != idx.len() {
                return Err(Error::Structure(format!("Lefschetz pieces do not span Ω^{bd:?}")));
            }
            let c = Matrix::from_fn(idx.len(), idx.len(), |r, s| components[comps[s]].vector[idx[r]].clone());
            let inv = c
                .inverse()
                .ok_or_else(|| Error::Structure(format!("Lefschetz pieces are dependent in Ω^{bd:?}")))?;
            blocks.push(DecompBlock {
                indices: idx,
                components: comps,
                inverse: inv,
            });
        }
        Ok(LefschetzDecomposition { components, blocks })
    }
}

#[derive(Clone, Debug)]
pub struct Component<F: Field> {
    /// Bidegree of the primitive part.
    pub primitive: (usize, usize),
    pub j: usize,
    /// `L^j α`.
    pub vector: Vec<F>,
    /// `α`.
    pub source: Vec<F>,
}

#[derive(Clone, Debug)]
struct DecompBlock<F: Field> {
    indices: Vec<usize>,
    components: Vec<usize>,
    /// Inverse of the matrix whose columns are the piece vectors restricted to `indices`.
    inverse: Matrix<F>,
}

#[derive(Clone, Debug)]
pub struct LefschetzDecomposition<F: Field> {
    pub components: Vec<Component<F>>,
    blocks: Vec<DecompBlock<F>>,
}

impl<F: Field> LefschetzDecomposition<F> {
    /// `dim P^(a,b)`.
    pub fn primitive_dim(&self, a: usize, b: usize) -> usize {
        self.components
            .iter()
            .filter(|c| c.primitive == (a, b) && c.j == 0)
            .count()
    }

    /// The linear map acting on the piece `L^j P^(a,b)` by `f(piece)` (a vector).
    pub fn assemble(&self, dim: usize, f: impl Fn(&Component<F>) -> Vec<F>) -> Matrix<F> {
        let mut out = Matrix::zeros(dim, dim);
        for blk in &self.blocks {
            let images: Vec<Vec<F>> = blk.components.iter().map(|&c| f(&self.components[c])).collect();
            for (col, &i) in blk.indices.iter().enumerate() {
                for r in 0..dim {
                    let mut acc = F::zero();
                    for (t, img) in images.iter().enumerate() {
                        let w = blk.inverse.get(t, col);
                        if !w.is_zero() && !img[r].is_zero() {
                            acc = acc.add(&img[r].mul(w));
                        }
                    }
                    out.set(r, i, acc);
                }
            }
        }
        out
    }

    /// The operator `Σ j · π_j`, with `π_j` the projection onto `L^j P`.
    pub fn lefschetz_degree(&self, dim: usize) -> Matrix<F> {
        self.assemble(dim, |c| {
            c.vector.iter().map(|v| v.mul(&F::from_int(c.j as i64))).collect()
        })
    }
}

/// Hodge, metric and dual Lefschetz operators for one value of the Hodge parameter `p`.
#[derive(Clone, Debug)]
pub struct HodgeData<F: Field> {
    pub p: F,
    pub star: Matrix<F>,
    pub star_inv: Matrix<F>,
    pub gram: Matrix<F>,
    pub lambda: Matrix<F>,
}

fn i_pow<F: Field>(e: i64) -> F {
    F::from_gauss(&gauss_i()).pow_i(e.rem_euclid(4))
}

impl<F: Field> GradedSpace<F> {
    /// The Hodge map `∗_p`.
    pub fn hodge_star(&self, decomp: &LefschetzDecomposition<F>, p: &F) -> Matrix<F> {
        let n = self.n as i64;
        let l = self.lefschetz();
        decomp.assemble(self.dim(), |c| {
            let (a, b) = c.primitive;
            let k = (a + b) as i64;
            let j = c.j as i64;
            let sign = if (k * (k + 1) / 2) % 2 == 0 {
                F::one()
            } else {
                F::from_int(-1)
            };
            let coeff = sign
                .mul(&i_pow::<F>(a as i64 - b as i64))
                .mul(&qfact_in(j, p))
                .div(&qfact_in(n - j - k, p));
            let mut v = c.source.clone();
            for _ in 0..(n - j - k) {
                v = l.apply(&v);
            }
            v.iter().map(|x| x.mul(&coeff)).collect()
        })
    }

    /// `G_ij = g(b_i, b_j)`.
    pub fn metric_gram(&self, star: &Matrix<F>) -> Matrix<F> {
        let dim = self.dim();
        let star_of_conj: Vec<Vec<F>> = (0..dim).map(|j| star.apply(&self.star.column(j))).collect();
        Matrix::from_fn(dim, dim, |i, j| {
            let w = self.wedge(&self.basis_vector(i), &star_of_conj[j]);
            star.apply(&w)[self.unit].clone()
        })
    }

    pub fn hodge(&self, decomp: &LefschetzDecomposition<F>, p: &F) -> Result<HodgeData<F>> {
        let star = self.hodge_star(decomp, p);
        let star_inv = star.mul(&self.parity());
        let gram = self.metric_gram(&star);
        let lambda = star_inv.mul(&self.lefschetz()).mul(&star);
        Ok(HodgeData {
            p: p.clone(),
            star,
            star_inv,
            gram,
            lambda,
        })
    }

    pub fn metric(&self, gram: &Matrix<F>, x: &[F], y: &[F]) -> F {
        inner(gram, x, y)
    }
}

/// Everything needed for the local identity checks at one Hodge parameter.
#[derive(Clone, Debug)]
pub struct KahlerEngine<F: Field> {
    pub space: GradedSpace<F>,
    pub decomp: LefschetzDecomposition<F>,
}

impl<F: Field> KahlerEngine<F> {
    pub fn new(space: GradedSpace<F>) -> Result<Self> {
        let decomp = space.lefschetz_decomposition()?;
        Ok(Self { space, decomp })
    }

    pub fn from_exterior(ext: &ExteriorAlgebra, ctx: &Ctx<F>) -> Result<Self> {
        Self::new(GradedSpace::from_exterior(ext, ctx)?)
    }

    pub fn hodge(&self, p: &F) -> Result<HodgeData<F>> {
        self.space.hodge(&self.decomp, p)
    }

    /// The classical `sl_2` relations at `p = 1`.
    pub fn verify_sl2(&self) -> Result<Report> {
        let sp = &self.space;
        let h = self.hodge(&F::one())?;
        let l = sp.lefschetz();
        let hh = sp.counting();
        let two = F::from_int(2);
        let mut r = Report::new(format!("sl2 relations, n = {}", sp.n));
        r.push(Relation::from_matrix("[L,Λ] = H", &l.commutator(&h.lambda).sub(&hh)));
        r.push(Relation::from_matrix(
            "[H,L] = 2L",
            &hh.commutator(&l).sub(&l.scale(&two)),
        ));
        r.push(Relation::from_matrix(
            "[H,Λ] = -2Λ",
            &hh.commutator(&h.lambda).add(&h.lambda.scale(&two)),
        ));
        r.push(
            Relation::from_matrix("[H,L] = 2H (literal)", &hh.commutator(&l).sub(&hh.scale(&two)))
                .informational()
                .with_note("misprint; the intended relation is [H,L] = 2L"),
        );
        let adj = gram_adjoint(&l, &h.gram, &h.gram)?;
        r.push(Relation::from_matrix("Λ = L† for g", &adj.sub(&h.lambda)));
        Ok(r)
    }

    /// The `U_p(sl_2)` relations for a Hodge parameter `p`.
    pub fn verify_upsl2(&self, p: &F) -> Result<Report> {
        let sp = &self.space;
        let h = self.hodge(p)?;
        let l = sp.lefschetz();
        let hp = sp.counting_p(p);
        let kp = sp.k_p(p);
        let p2 = p.mul(p);
        let p2_inv = p2
            .inv()
            .ok_or_else(|| Error::Domain("Hodge parameter is zero".into()))?;
        let two_p = qint_in(2, p);
        let two_p2 = qint_in(2, &p2);
        let mut r = Report::new(format!("U_p(sl2) relations, n = {}, p = {}", sp.n, p));
        r.push(Relation::from_matrix(
            "[L,Λ_p] = H_p",
            &l.commutator(&h.lambda).sub(&hp),
        ));
        r.push(Relation::from_matrix(
            "[H_p,L]_{p^-2} = [2]_p L K_p",
            &hp.twisted_commutator(&l, &p2_inv).sub(&l.mul(&kp).scale(&two_p)),
        ));
        let lhs3 = hp.twisted_commutator(&h.lambda, &p2);
        r.push(Relation::from_matrix(
            "[H_p,Λ_p]_{p^2} = -[2]_p Λ_p K_p",
            &lhs3.add(&h.lambda.mul(&kp).scale(&two_p)),
        ));
        r.push(
            Relation::from_matrix(
                "[H_p,Λ_p]_{p^2} = -[2]_{p^2} K_p Λ_p (literal)",
                &lhs3.add(&kp.mul(&h.lambda).scale(&two_p2)),
            )
            .informational()
            .with_note("misprinted form; holds only at p = ±1"),
        );
        r.push(Relation::from_matrix(
            "K_p L = p^2 L K_p",
            &kp.mul(&l).sub(&l.mul(&kp).scale(&p2)),
        ));
        Ok(r)
    }

    /// Properties of `∗_p` and of the metric.
    pub fn verify_hodge(&self, p: &F) -> Result<Report> {
        let sp = &self.space;
        let h = self.hodge(p)?;
        let n = sp.n;
        let mut r = Report::new(format!("Hodge map and metric, n = {n}, p = {p}"));
        r.push(Relation::from_matrix(
            "∗² = (-1)^k",
            &h.star.mul(&h.star).sub(&sp.parity()),
        ));
        let mut maps_bidegree = true;
        for i in 0..sp.dim() {
            for j in 0..sp.dim() {
                if h.star.get(i, j).is_zero() {
                    continue;
                }
                let (a, b) = sp.bidegree(j);
                if sp.bidegree(i) != (n - b, n - a) {
                    maps_bidegree = false;
                }
            }
        }
        r.push(Relation::flag("∗ Ω^(a,b) ⊂ Ω^(n-b,n-a)", maps_bidegree));
        let s = sp.star_matrix();
        r.push(Relation::from_matrix(
            "∗(ω*) = (∗ω)*",
            &h.star.mul(s).sub(&s.mul(&h.star.conj())),
        ));
        let mut vol = sp.basis_vector(sp.unit);
        for _ in 0..n {
            vol = sp.wedge(&sp.kappa, &vol);
        }
        let fact = qfact_in(n as i64, p).inv().expect("[n]_p! vanishes");
        let diff: Vec<F> = h
            .star
            .column(sp.unit)
            .iter()
            .zip(&vol)
            .map(|(a, b)| a.sub(&b.mul(&fact)))
            .collect();
        r.push(Relation::from_matrix(
            "∗1 = κ^n / [n]_p!",
            &Matrix::from_columns(sp.dim(), &[diff]),
        ));
        r.push(Relation::from_matrix(
            "g Hermitian",
            &h.gram.sub(&h.gram.conj_transpose()),
        ));
        let mut orth = true;
        let comps = &self.decomp.components;
        for (x, cx) in comps.iter().enumerate() {
            for cy in comps.iter().skip(x + 1) {
                if (cx.primitive, cx.j) != (cy.primitive, cy.j) && !inner(&h.gram, &cx.vector, &cy.vector).is_zero() {
                    orth = false;
                }
            }
        }
        r.push(Relation::flag("Lefschetz pieces g-orthogonal", orth));
        let mut bideg_orth = true;
        for i in 0..sp.dim() {
            for j in 0..sp.dim() {
                if sp.bidegree(i) != sp.bidegree(j) && !h.gram.get(i, j).is_zero() {
                    bideg_orth = false;
                }
            }
        }
        r.push(Relation::flag("bidegrees g-orthogonal", bideg_orth));
        Ok(r)
    }

    /// Grading operators `γ, τ, τ̄, λ`.
    pub fn grading_operators(&self) -> GradingOperators<F> {
        let sp = &self.space;
        let gamma = sp.parity();
        let tau = sp.diag(|i| F::from_int(sp.bidegree(i).0 as i64));
        let s = sp.star_matrix();
        let tau_bar = s.mul(&tau.conj()).mul(&s.conj());
        let lambda = self.decomp.lefschetz_degree(sp.dim());
        GradingOperators {
            gamma,
            tau,
            tau_bar,
            lambda,
        }
    }

    pub fn verify_gradings(&self) -> Result<Report> {
        let sp = &self.space;
        let g = self.grading_operators();
        let h = self.hodge(&F::one())?;
        let mut r = Report::new(format!("grading operators, n = {}", sp.n));
        let id = Matrix::identity(sp.dim());
        r.push(Relation::from_matrix("γ² = 1", &g.gamma.mul(&g.gamma).sub(&id)));
        let ops = [("γ", &g.gamma), ("τ", &g.tau), ("τ̄", &g.tau_bar), ("λ", &g.lambda)];
        for (x, (nx, mx)) in ops.iter().enumerate() {
            for (ny, my) in ops.iter().skip(x + 1) {
                r.push(Relation::from_matrix(format!("[{nx},{ny}] = 0"), &mx.commutator(my)));
            }
        }
        let tb_diag = sp.diag(|i| F::from_int(sp.bidegree(i).1 as i64));
        r.push(Relation::from_matrix(
            "τ̄ = antiholomorphic degree",
            &g.tau_bar.sub(&tb_diag),
        ));
        let n_id = id.scale(&F::from_int(sp.n as i64));
        r.push(Relation::from_matrix(
            "∗τ∗⁻¹ = n - τ̄",
            &h.star.mul(&g.tau).mul(&h.star_inv).sub(&n_id.sub(&g.tau_bar)),
        ));
        let lk = g.lambda.apply(&sp.kappa);
        let diff: Vec<F> = lk.iter().zip(&sp.kappa).map(|(a, b)| a.sub(b)).collect();
        r.push(Relation::from_matrix(
            "λ(κ) = κ",
            &Matrix::from_columns(sp.dim(), &[diff]),
        ));
        Ok(r)
    }

    /// Compare with the structure `-κ`.
    pub fn verify_opposite(&self, p: &F) -> Result<Report> {
        let sp = &self.space;
        let opp = KahlerEngine::new(sp.opposite())?;
        let h = self.hodge(p)?;
        let ho = opp.hodge(p)?;
        let sign = F::from_int(if sp.n.is_multiple_of(2) { 1 } else { -1 });
        let mut r = Report::new(format!("opposite structure, n = {}", sp.n));
        r.push(Relation::from_matrix("g_{-κ} = g_κ", &ho.gram.sub(&h.gram)));
        r.push(Relation::from_matrix(
            "∗_{-κ} = (-1)^n ∗_κ",
            &ho.star.sub(&h.star.scale(&sign)),
        ));
        r.push(Relation::from_matrix("Λ_{-κ} = -Λ_κ", &ho.lambda.add(&h.lambda)));
        let l = opp.space.lefschetz();
        r.push(Relation::from_matrix(
            "[L,Λ_p] = H_p for -κ",
            &l.commutator(&ho.lambda).sub(&opp.space.counting_p(p)),
        ));
        Ok(r)
    }

    /// All local checks for one Hodge parameter.
    pub fn local_suite(&self, p: &F) -> Result<Report> {
        let mut r = Report::new(format!("local Kähler identities, n = {}", self.space.n));
        r.extend(self.verify_sl2()?);
        r.extend(self.verify_upsl2(p)?);
        r.extend(self.verify_hodge(p)?);
        r.extend(self.verify_gradings()?);
        r.extend(self.verify_opposite(p)?);
        Ok(r)
    }
}

#[derive(Clone, Debug)]
pub struct GradingOperators<F: Field> {
    pub gamma: Matrix<F>,
    pub tau: Matrix<F>,
    pub tau_bar: Matrix<F>,
    pub lambda: Matrix<F>,
}

/// Exact positivity of the `p = 1` metric at a rational `q0 > 0`.
pub fn metric_positive_at(n: usize, q0: &BigRational) -> Result<bool> {
    let ext = ExteriorAlgebra::new(n)?;
    let ctx = Ctx::exact_at(q0);
    let eng = KahlerEngine::<QuadExact>::from_exterior(&ext, &ctx)?;
    let h = eng.hodge(&QuadExact::one())?;
    Ok(is_positive_definite_exact(&h.gram))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss::rat;
    use crate::qarith::{RatFunc, C64};

    #[test]
    fn symbolic_identities_hold_in_low_rank() {
        for n in 1..=2 {
            let ext = ExteriorAlgebra::new(n).unwrap();
            let ctx = Ctx::<RatFunc>::symbolic();
            let eng = KahlerEngine::from_exterior(&ext, &ctx).unwrap();
            let p = ctx.q();
            let rep = eng.local_suite(&p).unwrap();
            assert!(rep.passed(), "{rep}");
            assert!(!rep.get("[H,L] = 2H (literal)").unwrap().pass);
        }
    }

    #[test]
    fn primitive_dimensions_match_classical() {
        let ext = ExteriorAlgebra::new(2).unwrap();
        let eng = KahlerEngine::from_exterior(&ext, &Ctx::float_at(0.7)).unwrap();
        assert_eq!(eng.decomp.primitive_dim(0, 0), 1);
        assert_eq!(eng.decomp.primitive_dim(1, 0), 2);
        assert_eq!(eng.decomp.primitive_dim(1, 1), 3);
        assert_eq!(eng.decomp.primitive_dim(2, 0), 1);
    }

    #[test]
    fn local_metric_in_rank_one() {
        let ext = ExteriorAlgebra::new(1).unwrap();
        let ctx = Ctx::float_at(0.6);
        let eng = KahlerEngine::<C64>::from_exterior(&ext, &ctx).unwrap();
        let h = eng.hodge(&C64::new(1.0, 0.0)).unwrap();
        let sp = &eng.space;
        let plus = sp.indices_of(1, 0)[0];
        let minus = sp.indices_of(0, 1)[0];
        assert!((h.gram.get(plus, plus) - C64::new(0.6, 0.0)).norm() < 1e-12);
        assert!((h.gram.get(minus, minus) - C64::new(1.0 / 0.6, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_form_is_not_hermitian() {
        let ext = ExteriorAlgebra::new(1).unwrap();
        let sp = GradedSpace::from_exterior(&ext, &Ctx::float_at(0.5)).unwrap();
        let mut bad = sp.clone();
        bad.kappa = vec![C64::new(0.0, 0.0); sp.dim()];
        assert!(matches!(bad.lefschetz_decomposition(), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn positivity_at_sample_points() {
        for n in 1..=2 {
            for (a, b) in [(4, 5), (9, 10), (1, 1), (11, 10)] {
                assert!(metric_positive_at(n, &rat(a, b)).unwrap(), "n={n} q={a}/{b}");
            }
        }
    }
}
