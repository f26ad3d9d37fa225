use std::collections::BTreeMap;

use qkahler::dirac::{self, build_complex, build_twisted, stable_cohomology, Operator};
use qkahler::exterior::{dims as exterior_dims, ExteriorAlgebra};
use qkahler::hopf::QuantumGroup;
use qkahler::kahler::{KahlerEngine, Report};
use qkahler::ledger::ledger_hash;
use qkahler::peter_weyl::build_blocks;
use qkahler::qarith::gauss::rat_to_f64;
use qkahler::qarith::{Ctx, Field};
use qkahler::{Error, Result};

use crate::output::*;
use crate::{Common, Format, Mode, OperatorArg, Outcome};

/// Run `$body` with `$ctx` bound to the context selected by `$common.mode`.
macro_rules! with_ctx {
    ($common:expr, |$ctx:ident| $body:expr) => {
        match $common.mode {
            Mode::Exact => {
                let $ctx = Ctx::exact_at(&$common.q);
                $body
            }
            Mode::Numeric => {
                let $ctx = Ctx::float_at(rat_to_f64(&$common.q));
                $body
            }
            Mode::Symbolic => {
                let $ctx = Ctx::symbolic();
                $body
            }
        }
    };
}

fn envelope(c: &Common) -> Envelope {
    Envelope {
        q: match c.mode {
            Mode::Symbolic => "q".to_string(),
            _ => c.q.to_string(),
        },
        cutoff: c.cutoff,
        mode: c.mode.name(),
        ledger_hash: ledger_hash(),
    }
}

fn csv_preamble(e: &Envelope) -> String {
    format!(
        "# qkahler q={} cutoff={} mode={} ledger-hash={}\n",
        e.q, e.cutoff, e.mode, e.ledger_hash
    )
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output is serializable");
    s.push('\n');
    s
}

fn operator(op: OperatorArg) -> Operator {
    match op {
        OperatorArg::Dbar => Operator::Dbar,
        OperatorArg::Del => Operator::Del,
        OperatorArg::D => Operator::D,
    }
}

fn summarize(reports: &[Report]) {
    for r in reports {
        let verdict = if r.passed() { "pass" } else { "FAIL" };
        let worst = r
            .relations
            .iter()
            .filter(|x| x.required)
            .map(|x| x.residual)
            .fold(0.0, f64::max);
        eprintln!(
            "{verdict:<4}  {:<56} relations={:<3} max residual={worst:.3e}",
            r.title,
            r.relations.len()
        );
    }
}

fn local_reports<F: Field>(ctx: &Ctx<F>, n: usize) -> Result<Vec<Report>> {
    let eng = KahlerEngine::from_exterior(&ExteriorAlgebra::new(n)?, ctx)?;
    let mut reports = vec![eng.local_suite(&ctx.q())?];
    if n == 1 {
        reports.push(dirac::leibniz_check(4)?);
    }
    Ok(reports)
}

fn global_reports<F: Field>(ctx: &Ctx<F>, cutoff: usize, q0: f64) -> Result<Vec<Report>> {
    let mut reports = local_reports(ctx, 1)?;
    let c = build_complex(ctx, cutoff)?;
    reports.push(c.adjoint_report());
    reports.push(c.dirac_report());
    reports.push(c.kahler_identity_report());
    reports.push(c.hodge_decomposition_report());
    stable_cohomology(ctx, cutoff, 0)?;
    for k in [-2i64, -1, 1, 2] {
        if k.unsigned_abs() as usize > 2 * cutoff.max(1) {
            continue;
        }
        let t = build_twisted(ctx, cutoff, k)?;
        let mut r = t.kahler_identity_report();
        r.title = format!("Akizuki-Nakano: {}", r.title);
        reports.push(r);
        reports.push(t.curvature_check(q0)?.report);
    }
    Ok(reports)
}

pub fn verify(c: &Common, n: Option<usize>) -> Result<Outcome> {
    let q0 = rat_to_f64(&c.q);
    let reports = with_ctx!(c, |ctx| match n {
        Some(n) => local_reports(&ctx, n)?,
        None => global_reports(&ctx, c.cutoff, q0)?,
    });
    summarize(&reports);
    let mode = c.mode.name();
    let out = VerifyOut {
        envelope: envelope(c),
        suites: reports.iter().map(|r| SuiteOut::from_report(r, mode)).collect(),
        failures: reports.iter().flat_map(failures_of).collect(),
    };
    Ok(Outcome {
        passed: out.failures.is_empty(),
        text: json(&out),
    })
}

pub fn spectrum(c: &Common, twist: i64, op: OperatorArg, dirac: bool, format: Format) -> Result<Outcome> {
    let q0 = rat_to_f64(&c.q);
    let op = operator(op);
    let table = with_ctx!(c, |ctx| build_twisted(&ctx, c.cutoff, twist)?.spectrum(op, dirac, q0));
    let env = envelope(c);
    let text = match format {
        Format::Csv => csv_preamble(&env) + &table.to_csv(),
        Format::Json => json(&SpectrumOut {
            envelope: env,
            operator: format!("{}{}", if dirac { "D_" } else { "Δ_" }, op.name()),
            twist,
            rows: table
                .rows
                .iter()
                .map(|r| SpectrumRowOut {
                    block: r.block.clone(),
                    eigenvalue_exact: r.exact.clone(),
                    eigenvalue_float: r.value,
                    multiplicity: r.multiplicity,
                })
                .collect(),
        }),
    };
    Ok(Outcome { text, passed: true })
}

pub fn index(c: &Common, twist: i64) -> Result<Outcome> {
    let r = with_ctx!(c, |ctx| dirac::index(&ctx, c.cutoff, twist)?);
    let out = IndexOut {
        envelope: envelope(c),
        twist,
        h00: r.h00,
        h01: r.h01,
        index_dbar: r.index_dbar,
        index_del: r.index_del,
    };
    eprintln!("index(D_∂̄) = {}, index(D_∂) = {}", r.index_dbar, r.index_del);
    Ok(Outcome {
        passed: r.index_dbar == r.index_del || twist != 0,
        text: json(&out),
    })
}

fn bundle_in<F: Field>(ctx: &Ctx<F>, c: &Common, k: i64) -> Result<BundleOut> {
    let q0 = rat_to_f64(&c.q);
    let idx = dirac::index(ctx, c.cutoff, k)?;
    let t = build_twisted(ctx, c.cutoff, k)?;
    let coh = t.cohomology();
    let curv = t.curvature_check(q0)?;
    let fred = t.fredholm_gate(q0)?;
    let mut identities = t.kahler_identity_report();
    identities.title = format!("Akizuki-Nakano: {}", identities.title);
    let reports = [curv.report.clone(), fred.report.clone(), identities];
    summarize(&reports);
    let mode = c.mode.name();
    Ok(BundleOut {
        envelope: envelope(c),
        k,
        holomorphic_sections: coh.dbar[&(0, 0)],
        cohomology: coh.dbar.iter().map(|(&(a, b), &d)| (format!("{a},{b}"), d)).collect(),
        index: idx.index_dbar,
        theta_exact: curv.theta.to_string(),
        theta_float: curv.theta_float,
        theta_matches: curv.candidates.iter().filter(|x| x.1).map(|x| x.0.clone()).collect(),
        fredholm_bounds: fred
            .bounds
            .iter()
            .map(|(&(a, b), &v)| (format!("{a},{b}"), v))
            .collect(),
        suites: reports.iter().map(|r| SuiteOut::from_report(r, mode)).collect(),
        failures: reports.iter().flat_map(failures_of).collect(),
    })
}

pub fn bundle(c: &Common, k: i64) -> Result<Outcome> {
    let out = with_ctx!(c, |ctx| bundle_in(&ctx, c, k)?);
    Ok(Outcome {
        passed: out.failures.is_empty(),
        text: json(&out),
    })
}

pub fn dims(n: usize, format: Format) -> Result<Outcome> {
    if !(1..=4).contains(&n) {
        return Err(Error::Domain(format!("rank must lie in 1..=4, got {n}")));
    }
    let t = exterior_dims(n)?;
    let classical = t.matches_classical();
    let text = match format {
        Format::Csv => format!("# qkahler n={n} ledger-hash={}\n{}", ledger_hash(), t.to_csv()),
        Format::Json => json(&DimsOut {
            n,
            ledger_hash: ledger_hash(),
            by_bidegree: t.by_bidegree.clone(),
            by_degree: t.by_degree.clone(),
            classical,
        }),
    };
    Ok(Outcome {
        text,
        passed: classical,
    })
}

pub fn blocks(c: &Common) -> Result<Outcome> {
    let qg = QuantumGroup::suq2();
    let blocks: Vec<BlockOut> = with_ctx!(c, |ctx| build_blocks(qg, c.cutoff, &ctx)?
        .blocks
        .iter()
        .map(|b| BlockOut {
            label: b.label,
            dim: b.dim(),
            weight_histogram: b.weight_histogram(),
        })
        .collect());
    let passed = blocks.iter().all(|b| b.dim == (b.label + 1) * (b.label + 1));
    Ok(Outcome {
        text: json(&BlocksOut {
            envelope: envelope(c),
            blocks,
        }),
        passed,
    })
}

/// The failure record printed when a command aborts.
pub fn error_record(e: &Error) -> String {
    let failure = match e {
        Error::Build { block, identity } => Failure {
            suite: "build".into(),
            relation: identity.clone(),
            block: Some(block.clone()),
            residual: None,
        },
        Error::Cutoff(msg) => Failure {
            suite: "cutoff stability".into(),
            relation: msg.clone(),
            block: None,
            residual: None,
        },
        other => Failure {
            suite: "input".into(),
            relation: other.to_string(),
            block: None,
            residual: None,
        },
    };
    let mut wrapped = BTreeMap::new();
    wrapped.insert("failures", vec![failure]);
    json(&wrapped)
}
