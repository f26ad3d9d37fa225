//! Dense matrices over a [`Field`], exact elimination, Gram adjoints and Hermitian spectra.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qarith::{Field, C64};

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn diagonal(d: &[F]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Self {
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &F) {
        let i = r * self.cols + c;
        self.data[i] = self.data[i].add(v);
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn map_into<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sum");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in difference");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|a| a.conj())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Largest residual size over the entries.
    pub fn max_residual(&self) -> f64 {
        self.data.iter().map(|a| a.residual_size()).fold(0.0, f64::max)
    }

    /// `AB - BA`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self))
    }

    /// `AB - t·BA`.
    pub fn twisted_commutator(&self, o: &Self, t: &F) -> Self {
        self.mul(o).sub(&o.mul(self).scale(t))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    pub fn trace(&self) -> F {
        let mut acc = F::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        let scale = if F::is_exact() {
            1.0
        } else {
            self.data.iter().map(|a| a.to_c64().norm()).fold(1.0, f64::max)
        };
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for r in row..m.rows {
                let sz = m.get(r, col).pivot_size();
                let usable = if F::is_exact() {
                    sz > 0.0
                } else {
                    sz > crate::qarith::FLOAT_TOL * scale
                };
                if usable && best.is_none_or(|(_, b)| sz > b) {
                    best = Some((r, sz));
                    if F::is_exact() && sz >= 1.0 {
                        break;
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).inv().unwrap();
            for c in col..m.cols {
                let v = m.get(row, c).mul(&inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() && F::is_exact() {
                    continue;
                }
                for c in col..m.cols {
                    let rv = m.get(row, c);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c).sub(&f.mul(rv));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : Ax = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.get(i, free).neg();
            }
            out.push(v);
        }
        out
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                F::one()
            } else {
                F::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |r, c| red.get(r, c + n).clone()))
    }

    /// Solve `AX = B` for square invertible `A`.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        Some(self.inverse()?.mul(b))
    }

    /// Column space basis (the pivot columns).
    pub fn column_space(&self) -> Vec<Vec<F>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn to_c64(&self) -> Matrix<C64> {
        self.map_into(|a| a.to_c64())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[Self]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

/// Sesquilinear form `⟨x, y⟩ = Σ x_i conj(y_j) G_ij` for a Gram matrix `G_ij = ⟨e_i, e_j⟩`.
pub fn inner<F: Field>(gram: &Matrix<F>, x: &[F], y: &[F]) -> F {
    let mut acc = F::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let g = gram.get(i, j);
            if !g.is_zero() {
                acc = acc.add(&xi.mul(&yj.conj()).mul(g));
            }
        }
    }
    acc
}

/// The adjoint of `A: V → W` with respect to Gram matrices on `V` (`gram_dom`) and `W` (`gram_cod`).
///
/// With `M = G^T` the relation `⟨Ax, y⟩ = ⟨x, A†y⟩` gives `A† = M_V^{-1} A^H M_W`.
pub fn gram_adjoint<F: Field>(a: &Matrix<F>, gram_dom: &Matrix<F>, gram_cod: &Matrix<F>) -> Result<Matrix<F>> {
    let m_dom = gram_dom.transpose();
    let m_cod = gram_cod.transpose();
    let inv = m_dom
        .inverse()
        .ok_or_else(|| Error::DegenerateMetric("singular Gram matrix".into()))?;
    Ok(inv.mul(&a.conj_transpose()).mul(&m_cod))
}

/// Eigenvalues of an operator that is self-adjoint for the Gram matrix `gram`, sorted ascending.
pub fn self_adjoint_eigenvalues(a: &Matrix<C64>, gram: &Matrix<C64>) -> Result<Vec<f64>> {
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = DMatrix::from_fn(n, n, |r, c| *gram.get(c, r));
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::DegenerateMetric("Gram matrix is not positive definite".into()))?;
    let l = chol.l();
    let lh = l.adjoint();
    let lh_inv = lh
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateMetric("singular Cholesky factor".into()))?;
    let am = DMatrix::from_fn(n, n, |r, c| *a.get(r, c));
    let s = &lh * am * lh_inv;
    let herm = (&s + s.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(vals)
}

/// Exact positivity test of a Hermitian Gram matrix via pivots of symmetric elimination.
pub fn is_positive_definite_exact(gram: &Matrix<crate::qarith::QuadExact>) -> bool {
    let n = gram.rows();
    let mut m = gram.clone();
    for k in 0..n {
        let p = m.get(k, k).clone();
        if !p.is_real() || p.real_sign() <= 0 {
            return false;
        }
        let inv = p.inv().unwrap();
        for r in (k + 1)..n {
            let f = m.get(r, k).mul(&inv);
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = m.get(r, c).sub(&f.mul(m.get(k, c)));
                m.set(r, c, v);
            }
        }
    }
    true
}

/// Cluster sorted eigenvalues into `(value, multiplicity)` with relative tolerance `tol`.
pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((c, m)) if (v - *c).abs() <= tol * (1.0 + c.abs()) => {
                *c = (*c * *m as f64 + v) / (*m as f64 + 1.0);
                *m += 1;
            }
            _ => out.push((v, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss::rat;
    use crate::qarith::{Gauss, QuadExact, RatFunc};

    fn q(n: i64, d: i64) -> QuadExact {
        QuadExact::from_gauss(Gauss::new(rat(n, d), rat(0, 1)))
    }

    #[test]
    fn inverse_and_nullspace() {
        let a = Matrix::from_fn(3, 3, |r, c| q((r * 3 + c) as i64 + if r == c { 1 } else { 0 }, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        let b = Matrix::from_fn(2, 3, |r, c| q((r + 1) as i64 * (c as i64 + 1), 1));
        assert_eq!(b.rank(), 1);
        let ns = b.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(b.apply(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn symbolic_elimination() {
        let s = RatFunc::s();
        let a = Matrix::from_fn(2, 2, |r, c| if r == c { s.clone() } else { RatFunc::one() });
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
    }

    #[test]
    fn adjoint_is_adjoint() {
        let g = Matrix::from_fn(2, 2, |r, c| {
            if r == c {
                C64::new(2.0 + r as f64, 0.0)
            } else if r == 0 {
                C64::new(0.5, 0.25)
            } else {
                C64::new(0.5, -0.25)
            }
        });
        let a = Matrix::from_fn(2, 2, |r, c| C64::new(r as f64 + 0.3, c as f64 - 1.0));
        let ad = gram_adjoint(&a, &g, &g).unwrap();
        let x = vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.1)];
        let y = vec![C64::new(0.3, -1.0), C64::new(2.0, 0.7)];
        let lhs = inner(&g, &a.apply(&x), &y);
        let rhs = inner(&g, &x, &ad.apply(&y));
        assert!((lhs - rhs).norm() < 1e-12);
        let h = a.add(&ad);
        let ev = self_adjoint_eigenvalues(&h, &g).unwrap();
        assert_eq!(ev.len(), 2);
    }

    #[test]
    fn clustering() {
        let c = cluster(&[0.0, 1.0, 1.0 + 1e-13, 2.0], 1e-10);
        assert_eq!(c.len(), 3);
        assert_eq!(c[1].1, 2);
    }
}
