//! Python bindings for `qkahler`.
//!
//! Values of `q` are passed as strings such as `"4/5"` and computed exactly.

#![allow(clippy::useless_conversion)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qkahler::dirac::{self, build_twisted, Operator, TruncatedComplex};
use qkahler::exterior;
use qkahler::hopf::QuantumGroup;
use qkahler::kahler::{KahlerEngine, Report};
use qkahler::qarith::gauss::rat_to_f64;
use qkahler::qarith::{self, parse_rational, Ctx, EvalPoint, QuadExact};
use qkahler::{ledger, Error};

/// `(name, passed, residual, required)` for each relation of a report.
type Relations = Vec<(String, bool, f64, bool)>;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Parse { .. } | Error::Cutoff(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_q(q: &str) -> PyResult<BigRational> {
    let r = parse_rational(q).map_err(py_err)?;
    if rat_to_f64(&r) <= 0.0 {
        return Err(PyValueError::new_err(format!("q must be positive, got {q}")));
    }
    Ok(r)
}

fn operator(name: &str) -> PyResult<Operator> {
    Operator::from_name(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown operator {name:?}; use dbar, del or d")))
}

fn relations(r: &Report) -> Relations {
    r.relations
        .iter()
        .map(|x| (x.name.clone(), x.pass, x.residual, x.required))
        .collect()
}

/// The quantum integer `[m]_q` as a Laurent polynomial in `s = √q`.
#[pyfunction]
fn qint(m: i64) -> PyResult<String> {
    Ok(qarith::qint(m).map_err(py_err)?.to_string())
}

/// The Gaussian binomial `[n choose r]_q`.
#[pyfunction]
fn qbinom(n: i64, r: i64) -> PyResult<String> {
    Ok(qarith::qbinom(n, r).map_err(py_err)?.to_string())
}

/// `[m]_q` evaluated exactly at a rational `q`.
#[pyfunction]
fn qint_at(m: i64, q: &str) -> PyResult<String> {
    let x = qarith::qint(m).map_err(py_err)?;
    let v = qarith::evaluate(&x, &EvalPoint::exact(parse_q(q)?)).map_err(py_err)?;
    Ok(match v {
        qarith::EvalValue::Exact(g) => qarith::gauss::fmt_gauss(&g),
        qarith::EvalValue::Float(z) => z.to_string(),
    })
}

#[pyfunction]
fn ledger_hash() -> String {
    ledger::ledger_hash()
}

#[pyfunction]
fn ledger_text() -> &'static str {
    ledger::LEDGER
}

/// `dim Φ(Ω^(a,b))` for the local calculus of `CP^n`, indexed `[a][b]`.
#[pyfunction]
fn dims(n: usize) -> PyResult<Vec<Vec<usize>>> {
    Ok(exterior::dims(n).map_err(py_err)?.by_bidegree)
}

/// Run the local identity suite for `CP^n` at Hodge parameter `p = q`.
#[pyfunction]
fn verify_local(n: usize, q: &str) -> PyResult<(bool, Relations)> {
    let ctx = Ctx::exact_at(&parse_q(q)?);
    let ext = exterior::ExteriorAlgebra::new(n).map_err(py_err)?;
    let eng = KahlerEngine::<QuadExact>::from_exterior(&ext, &ctx).map_err(py_err)?;
    let r = eng.local_suite(&ctx.q()).map_err(py_err)?;
    Ok((r.passed(), relations(&r)))
}

/// The quantum group `O_q(SU_2)` with symbolic `q`.
#[pyclass(name = "SUq2", frozen)]
struct PySuq2;

#[pymethods]
impl PySuq2 {
    #[new]
    fn new() -> Self {
        PySuq2
    }

    /// Normal form of an expression in `a, b, c, d`.
    fn normal_form(&self, expr: &str) -> PyResult<String> {
        let qg = QuantumGroup::suq2();
        let p = qg.parse(expr).map_err(py_err)?;
        Ok(qg.algebra().display(&qg.algebra().nf(&p).map_err(py_err)?))
    }

    /// The Haar state of an expression, as a rational function of `s = √q`.
    fn haar(&self, expr: &str) -> PyResult<String> {
        let qg = QuantumGroup::suq2();
        Ok(qg.haar(&qg.parse(expr).map_err(py_err)?).map_err(py_err)?.to_string())
    }

    /// The Haar state evaluated exactly at a rational `q`.
    fn haar_at(&self, expr: &str, q: &str) -> PyResult<String> {
        let qg = QuantumGroup::suq2();
        let ctx = Ctx::exact_at(&parse_q(q)?);
        Ok(qg
            .haar_in(&ctx, &qg.parse(expr).map_err(py_err)?)
            .map_err(py_err)?
            .to_string())
    }

    /// Names and outcomes of the Hopf-algebra axiom checks.
    fn validate(&self) -> PyResult<Vec<(String, bool)>> {
        Ok(QuantumGroup::suq2()
            .validate()
            .map_err(py_err)?
            .into_iter()
            .map(|c| (c.name, c.passed))
            .collect())
    }
}

/// The truncated Dolbeault complex of the Podleś sphere twisted by `ℰ_k`.
#[pyclass(name = "PodlesComplex", frozen)]
struct PyComplex {
    inner: TruncatedComplex<QuadExact>,
    q: f64,
}

#[pymethods]
impl PyComplex {
    #[new]
    #[pyo3(signature = (q, cutoff, twist = 0))]
    fn new(q: &str, cutoff: usize, twist: i64) -> PyResult<Self> {
        let r = parse_q(q)?;
        let inner = build_twisted(&Ctx::exact_at(&r), cutoff, twist).map_err(py_err)?;
        Ok(Self {
            inner,
            q: rat_to_f64(&r),
        })
    }

    #[getter]
    fn cutoff(&self) -> usize {
        self.inner.cutoff
    }

    #[getter]
    fn twist(&self) -> i64 {
        self.inner.twist
    }

    /// Block labels (word lengths) present in the truncation.
    fn labels(&self) -> Vec<usize> {
        self.inner.blocks.iter().map(|b| b.label).collect()
    }

    /// Rows `(block, exact, value, multiplicity)` of the spectrum.
    #[pyo3(signature = (operator = "dbar", dirac = false))]
    fn spectrum(&self, operator: &str, dirac: bool) -> PyResult<Vec<(String, String, f64, usize)>> {
        let t = self.inner.spectrum(self::operator(operator)?, dirac, self.q);
        Ok(t.rows
            .into_iter()
            .map(|r| (r.block, r.exact, r.value, r.multiplicity))
            .collect())
    }

    /// `dim H^(a,b)` for the `∂̄`-complex, keyed by `(a, b)`.
    fn cohomology(&self) -> BTreeMap<(usize, usize), usize> {
        self.inner.cohomology().dbar
    }

    /// Holomorphic Euler characteristic of the truncation.
    fn euler_characteristic(&self) -> i64 {
        self.inner.cohomology().chi_dbar()
    }

    fn kahler_identities(&self) -> (bool, Relations) {
        let r = self.inner.kahler_identity_report();
        (r.passed(), relations(&r))
    }

    fn hodge_decomposition(&self) -> (bool, Relations) {
        let r = self.inner.hodge_decomposition_report();
        (r.passed(), relations(&r))
    }

    /// `θ` in `∇² = -iθκ`, exactly and as a float.
    fn curvature(&self) -> PyResult<(String, f64)> {
        let c = self.inner.curvature_check(self.q).map_err(py_err)?;
        Ok((c.theta.to_string(), c.theta_float))
    }

    fn __repr__(&self) -> String {
        format!(
            "PodlesComplex(q={}, cutoff={}, twist={}, blocks={})",
            self.q,
            self.inner.cutoff,
            self.inner.twist,
            self.inner.blocks.len()
        )
    }
}

/// `(h00, h01, index_dbar, index_del)`, after a cutoff-stability check.
#[pyfunction]
#[pyo3(signature = (q, cutoff, twist = 0))]
fn index(q: &str, cutoff: usize, twist: i64) -> PyResult<(usize, usize, i64, i64)> {
    let ctx = Ctx::exact_at(&parse_q(q)?);
    let r = dirac::index(&ctx, cutoff, twist).map_err(py_err)?;
    Ok((r.h00, r.h01, r.index_dbar, r.index_del))
}

#[pymodule]
fn qkahler_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(qint, m)?)?;
    m.add_function(wrap_pyfunction!(qbinom, m)?)?;
    m.add_function(wrap_pyfunction!(qint_at, m)?)?;
    m.add_function(wrap_pyfunction!(ledger_hash, m)?)?;
    m.add_function(wrap_pyfunction!(ledger_text, m)?)?;
    m.add_function(wrap_pyfunction!(dims, m)?)?;
    m.add_function(wrap_pyfunction!(verify_local, m)?)?;
    m.add_function(wrap_pyfunction!(index, m)?)?;
    m.add_class::<PySuq2>()?;
    m.add_class::<PyComplex>()?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_names_resolve() {
        assert!(operator("dbar").is_ok());
        assert!(operator("del").is_ok());
        assert!(operator("d").is_ok());
    }

    #[test]
    fn relation_rows_keep_order() {
        let mut r = Report::new("t");
        r.push(qkahler::kahler::Relation::flag("x", true));
        r.push(qkahler::kahler::Relation::flag("y", false));
        let rows = relations(&r);
        assert_eq!(rows[0].0, "x");
        assert!(!rows[1].1);
    }
}
