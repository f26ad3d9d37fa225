//! Peter–Weyl blocks of `O_q(SU_2)`: Haar-orthogonal matrix-coefficient spaces.
//!
//! The block of label `n` (spin `n/2`) is spanned by one vector per normal word of length `n`:
//! the word minus its Haar projection onto the shorter normal words of the same bi-weight.
//! Every operator that commutes with the left coaction preserves blocks and the length
//! filtration, so its block matrix can be read off from top-length coefficients.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::hopf::{QuantumGroup, Side};
use crate::linalg::Matrix;
use num_complex::Complex;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::qarith::{Ctx, Field, QuadExact};
use crate::rewrite::{NCPoly, Word};

/// One basis vector of a block: `top` plus shorter words of the same bi-weight.
#[derive(Clone, Debug)]
pub struct BlockVector<F> {
    pub top: Word,
    pub right_weight: i64,
    pub left_weight: i64,
    /// Expansion in normal words, `top` first with coefficient 1.
    pub terms: Vec<(Word, F)>,
    /// `h(v v*)`.
    pub norm: F,
}

#[derive(Clone, Debug)]
pub struct Block<F: Field> {
    pub label: usize,
    pub basis: Vec<BlockVector<F>>,
    pub gram: Matrix<F>,
}

impl<F: Field> Block<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Multiplicity of each right weight.
    pub fn weight_histogram(&self) -> BTreeMap<i64, usize> {
        let mut h = BTreeMap::new();
        for v in &self.basis {
            *h.entry(v.right_weight).or_insert(0) += 1;
        }
        h
    }
}

/// All blocks with label at most the cutoff (word length).
#[derive(Clone, Debug)]
pub struct Truncation<F: Field> {
    pub cutoff: usize,
    pub blocks: Vec<Block<F>>,
    ctx: Ctx<F>,
    index: HashMap<Word, (usize, usize)>,
}

/// Blocks of label `0..=cutoff` over the field of `ctx`.
pub fn build_blocks<F: Field>(qg: &QuantumGroup, cutoff: usize, ctx: &Ctx<F>) -> Result<Truncation<F>> {
    build_blocks_filtered(qg, cutoff, ctx, |_| true)
}

/// Like [`build_blocks`], keeping only basis vectors whose right weight satisfies `keep`.
pub fn build_blocks_filtered<F: Field>(
    qg: &QuantumGroup,
    cutoff: usize,
    ctx: &Ctx<F>,
    keep: impl Fn(i64) -> bool,
) -> Result<Truncation<F>> {
    let alg = qg.algebra();
    let mut chains: BTreeMap<(i64, i64), Vec<Word>> = BTreeMap::new();
    for w in alg.normal_words_up_to(cutoff) {
        let r = qg.weight(&w, Side::Right);
        if !keep(r) {
            continue;
        }
        chains.entry((r, qg.weight(&w, Side::Left))).or_default().push(w);
    }
    let mut blocks: Vec<Block<F>> = (0..=cutoff)
        .map(|label| Block {
            label,
            basis: Vec::new(),
            gram: Matrix::zeros(0, 0),
        })
        .collect();
    let chains: Vec<((i64, i64), Vec<Word>)> = chains.into_iter().collect();
    let vectors = chains
        .par_iter()
        .map(|((r, l), chain)| orthogonalize(qg, ctx, chain, *r, *l))
        .collect::<Result<Vec<_>>>()?;
    for v in vectors.into_iter().flatten() {
        blocks[v.top.len()].basis.push(v);
    }
    let mut index = HashMap::new();
    for b in &mut blocks {
        b.basis.sort_by_key(|v| Reverse((v.right_weight, v.left_weight)));
        let norms: Vec<F> = b.basis.iter().map(|v| v.norm.clone()).collect();
        b.gram = Matrix::diagonal(&norms);
        for (i, v) in b.basis.iter().enumerate() {
            index.insert(v.top.clone(), (b.label, i));
        }
    }
    Ok(Truncation {
        cutoff,
        blocks,
        ctx: ctx.clone(),
        index,
    })
}

/// Gram–Schmidt along a chain of words of one bi-weight, ordered by length.
///
/// The Haar Gram matrices are badly conditioned, so floating contexts run this
/// step exactly at their rational `q` and round the result.
fn orthogonalize<F: Field>(
    qg: &QuantumGroup,
    ctx: &Ctx<F>,
    chain: &[Word],
    r: i64,
    l: i64,
) -> Result<Vec<BlockVector<F>>> {
    let Some(q0) = ctx.rational_q().filter(|_| !F::is_exact()) else {
        return orthogonalize_in(qg, ctx, chain, r, l);
    };
    let round = |x: &QuadExact| -> F {
        let z = x.to_c64();
        let part = |v: f64| BigRational::from_float(v).expect("finite Haar value");
        F::from_gauss(&Complex::new(part(z.re), part(z.im)))
    };
    Ok(orthogonalize_in(qg, &Ctx::exact_at(q0), chain, r, l)?
        .into_iter()
        .map(|v| BlockVector {
            top: v.top,
            right_weight: v.right_weight,
            left_weight: v.left_weight,
            terms: v.terms.iter().map(|(w, c)| (w.clone(), round(c))).collect(),
            norm: round(&v.norm),
        })
        .collect())
}

fn orthogonalize_in<F: Field>(
    qg: &QuantumGroup,
    ctx: &Ctx<F>,
    chain: &[Word],
    r: i64,
    l: i64,
) -> Result<Vec<BlockVector<F>>> {
    let m = chain.len();
    let mut g = Matrix::<F>::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let x = NCPoly::word(chain[i].clone());
            let y = NCPoly::word(chain[j].clone());
            let v = qg.haar_in(ctx, &qg.mul(&x, &qg.star(&y)?)?)?;
            g.set(j, i, v.conj());
            g.set(i, j, v);
        }
    }
    // rows of t: coefficients of v_k in the chain words
    let mut t: Vec<Vec<F>> = Vec::with_capacity(m);
    let mut norms: Vec<F> = Vec::with_capacity(m);
    for k in 0..m {
        let mut row = vec![F::zero(); m];
        row[k] = F::one();
        for j in 0..k {
            // ⟨u_k, v_j⟩ = Σ_i conj(t_ji) G_ki
            let mut ip = F::zero();
            for i in 0..=j {
                ip = ip.add(&t[j][i].conj().mul(g.get(k, i)));
            }
            let f = ip.div(&norms[j]);
            for i in 0..=j {
                row[i] = row[i].sub(&f.mul(&t[j][i]));
            }
        }
        let mut n = F::zero();
        for i in 0..=k {
            for j in 0..=k {
                n = n.add(&row[i].mul(&row[j].conj()).mul(g.get(i, j)));
            }
        }
        if n.is_zero() {
            return Err(Error::DegenerateMetric(format!(
                "Haar norm vanishes on the block vector of {}",
                qg.algebra().presentation().word_name(&chain[k])
            )));
        }
        norms.push(n);
        t.push(row);
    }
    Ok((0..m)
        .map(|k| {
            let mut terms = vec![(chain[k].clone(), F::one())];
            for i in (0..k).rev() {
                if !t[k][i].is_zero() {
                    terms.push((chain[i].clone(), t[k][i].clone()));
                }
            }
            BlockVector {
                top: chain[k].clone(),
                right_weight: r,
                left_weight: l,
                terms,
                norm: norms[k].clone(),
            }
        })
        .collect())
}

impl<F: Field> Truncation<F> {
    pub fn ctx(&self) -> &Ctx<F> {
        &self.ctx
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::dim).collect()
    }

    pub fn block(&self, label: usize) -> Option<&Block<F>> {
        self.blocks.get(label)
    }

    /// `(block label, position)` of the vector whose top word is `w`.
    pub fn locate(&self, w: &[u8]) -> Option<(usize, usize)> {
        self.index.get(w).copied()
    }

    pub fn vector(&self, w: &[u8]) -> Option<&BlockVector<F>> {
        let (b, i) = self.locate(w)?;
        Some(&self.blocks[b].basis[i])
    }

    /// Basis vectors of the given right weight, in block order.
    pub fn weight_slice(&self, w: i64) -> Vec<&BlockVector<F>> {
        self.blocks
            .iter()
            .flat_map(|b| b.basis.iter().filter(move |v| v.right_weight == w))
            .collect()
    }

    /// Coordinates `(label, position, coefficient)` of `x` in the block basis.
    pub fn coordinates(&self, x: &NCPoly) -> Result<Vec<(usize, usize, F)>> {
        let mut rest: BTreeMap<Word, F> = BTreeMap::new();
        for (w, c) in x.terms() {
            if w.len() > self.cutoff {
                return Err(Error::Span(format!(
                    "word of length {} exceeds the cutoff {}",
                    w.len(),
                    self.cutoff
                )));
            }
            rest.insert(w.clone(), self.ctx.scalar(c));
        }
        let mut out = Vec::new();
        loop {
            // longest remaining word first; block vectors are triangular in length
            let Some(top) = rest
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, _)| w.clone())
                .max_by_key(|w| w.len())
            else {
                break;
            };
            let (b, i) = self
                .locate(&top)
                .ok_or_else(|| Error::Span("element has a component outside the kept weights".into()))?;
            let v = &self.blocks[b].basis[i];
            let c = rest[&top].clone();
            for (w, f) in &v.terms {
                let e = rest.entry(w.clone()).or_insert_with(F::zero);
                *e = e.sub(&c.mul(f));
            }
            rest.remove(&top);
            out.push((b, i, c));
        }
        out.sort_by_key(|(b, i, _)| (*b, *i));
        Ok(out)
    }

    /// `h(x y*)` for elements inside the truncation.
    pub fn gram_inner(&self, x: &NCPoly, y: &NCPoly) -> Result<F> {
        let cx = self.coordinates(x)?;
        let cy = self.coordinates(y)?;
        let mut acc = F::zero();
        for (b, i, c) in &cx {
            for (b2, i2, d) in &cy {
                if b == b2 && i == i2 {
                    acc = acc.add(&c.mul(&d.conj()).mul(&self.blocks[*b].basis[*i].norm));
                }
            }
        }
        Ok(acc)
    }

    /// Expand a block vector as an element of the algebra (over `F`).
    pub fn expansion(&self, label: usize, pos: usize) -> &[(Word, F)] {
        &self.blocks[label].basis[pos].terms
    }
}

/// Matrix of a block-preserving operator on the top words of one block.
///
/// `image(w)` returns the operator applied to the normal word `w`; only its length-`label`
/// coefficients are used. Rows and columns follow `rows` and `cols` (top words).
pub fn top_matrix<F: Field>(
    ctx: &Ctx<F>,
    rows: &[Word],
    cols: &[Word],
    mut image: impl FnMut(&Word) -> Result<NCPoly>,
) -> Result<Matrix<F>> {
    let pos: HashMap<&Word, usize> = rows.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (j, w) in cols.iter().enumerate() {
        let len = w.len();
        for (x, c) in image(w)?.terms() {
            if x.len() != len {
                continue;
            }
            match pos.get(x) {
                Some(&i) => m.add_at(i, j, &ctx.scalar(c)),
                None => {
                    return Err(Error::Structure(format!(
                        "operator leaves the block: top word of length {len} maps outside the target basis"
                    )))
                }
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{UElem, UGen};
    use crate::qarith::gauss::rat;
    use crate::qarith::{QuadExact, RatFunc};

    fn exact() -> Ctx<QuadExact> {
        Ctx::exact_at(&rat(4, 5))
    }

    #[test]
    fn block_dimensions() {
        let qg = QuantumGroup::suq2();
        let t = build_blocks(qg, 3, &exact()).unwrap();
        assert_eq!(t.dims(), vec![1, 4, 9, 16]);
        assert_eq!(t.blocks[0].gram, Matrix::identity(1));
    }

    #[test]
    fn weight_zero_slice() {
        let qg = QuantumGroup::suq2();
        let t = build_blocks(qg, 4, &exact()).unwrap();
        let per_block: Vec<usize> = t
            .blocks
            .iter()
            .map(|b| b.basis.iter().filter(|v| v.right_weight == 0).count())
            .collect();
        assert_eq!(per_block, vec![1, 0, 3, 0, 5]);
        assert!(t.weight_slice(5).is_empty());
    }

    #[test]
    fn blocks_are_orthogonal() {
        let qg = QuantumGroup::suq2();
        let ctx = exact();
        let t = build_blocks(qg, 3, &ctx).unwrap();
        let to_poly = |v: &BlockVector<QuadExact>| -> Vec<(Word, QuadExact)> { v.terms.clone() };
        // pairwise inner products of expansions computed from word-level Haar values
        let ip = |x: &[(Word, QuadExact)], y: &[(Word, QuadExact)]| {
            let mut acc = QuadExact::zero();
            for (u, c) in x {
                for (w, d) in y {
                    let p = qg
                        .mul(&NCPoly::word(u.clone()), &qg.star(&NCPoly::word(w.clone())).unwrap())
                        .unwrap();
                    let h = qg.haar_in(&ctx, &p).unwrap();
                    acc = acc.add(&c.mul(&d.conj()).mul(&h));
                }
            }
            acc
        };
        let all: Vec<&BlockVector<QuadExact>> = t.blocks.iter().flat_map(|b| b.basis.iter()).collect();
        for (i, x) in all.iter().enumerate().step_by(3) {
            for y in all.iter().skip(i + 1).step_by(2) {
                assert!(ip(&to_poly(x), &to_poly(y)).is_zero());
            }
            assert_eq!(ip(&to_poly(x), &to_poly(x)), x.norm);
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let qg = QuantumGroup::suq2();
        let t = build_blocks(qg, 2, &Ctx::symbolic()).unwrap();
        let x = qg.parse("a d + 2 b").unwrap();
        let coords = t.coordinates(&x).unwrap();
        assert!(!coords.is_empty());
        let g = t.gram_inner(&x, &x).unwrap();
        let direct = qg.haar_inner(&x, &x).unwrap();
        assert_eq!(g, direct);
        assert!(t.coordinates(&qg.parse("a a a").unwrap()).is_err());
        assert_eq!(t.gram_inner(&NCPoly::one(), &NCPoly::one()).unwrap(), RatFunc::one());
    }

    #[test]
    fn right_action_preserves_blocks() {
        let qg = QuantumGroup::suq2();
        let ctx = exact();
        let t = build_blocks(qg, 3, &ctx).unwrap();
        for b in &t.blocks {
            let tops: Vec<Word> = b.basis.iter().map(|v| v.top.clone()).collect();
            for x in [UGen::E, UGen::F, UGen::K] {
                top_matrix(&ctx, &tops, &tops, |w| {
                    qg.right_action(&UElem::gen(x), &NCPoly::word(w.clone()))
                })
                .unwrap();
            }
        }
    }
}
