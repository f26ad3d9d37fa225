//! Serializable output records.

use std::collections::BTreeMap;

use serde::Serialize;

use qkahler::kahler::Report;

/// Metadata stamped on every JSON document.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope {
    pub q: String,
    pub cutoff: usize,
    pub mode: &'static str,
    #[serde(rename = "ledger-hash")]
    pub ledger_hash: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationOut {
    pub relation: String,
    pub mode: &'static str,
    pub residual: f64,
    pub pass: bool,
    pub required: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOut {
    pub suite: String,
    pub passed: bool,
    pub relations: Vec<RelationOut>,
}

/// A machine-readable failure record.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub suite: String,
    pub relation: String,
    pub block: Option<String>,
    pub residual: Option<f64>,
}

impl SuiteOut {
    pub fn from_report(r: &Report, mode: &'static str) -> Self {
        Self {
            suite: r.title.clone(),
            passed: r.passed(),
            relations: r
                .relations
                .iter()
                .map(|x| RelationOut {
                    relation: x.name.clone(),
                    mode,
                    residual: x.residual,
                    pass: x.pass,
                    required: x.required,
                    note: x.note.clone(),
                })
                .collect(),
        }
    }
}

pub fn failures_of(r: &Report) -> Vec<Failure> {
    let mut out = Vec::new();
    for x in r.failures() {
        if x.blocks.is_empty() {
            out.push(Failure {
                suite: r.title.clone(),
                relation: x.name.clone(),
                block: None,
                residual: Some(x.residual),
            });
        }
        for b in &x.blocks {
            out.push(Failure {
                suite: r.title.clone(),
                relation: x.name.clone(),
                block: Some(b.clone()),
                residual: Some(x.residual),
            });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOut {
    #[serde(flatten)]
    pub envelope: Envelope,
    pub suites: Vec<SuiteOut>,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRowOut {
    pub block: String,
    pub eigenvalue_exact: String,
    pub eigenvalue_float: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumOut {
    #[serde(flatten)]
    pub envelope: Envelope,
    pub operator: String,
    pub twist: i64,
    pub rows: Vec<SpectrumRowOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexOut {
    #[serde(flatten)]
    pub envelope: Envelope,
    pub twist: i64,
    pub h00: usize,
    pub h01: usize,
    pub index_dbar: i64,
    pub index_del: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleOut {
    #[serde(flatten)]
    pub envelope: Envelope,
    pub k: i64,
    pub holomorphic_sections: usize,
    /// Keys are bidegrees written `a,b`.
    pub cohomology: BTreeMap<String, usize>,
    pub index: i64,
    pub theta_exact: String,
    pub theta_float: f64,
    pub theta_matches: Vec<String>,
    pub fredholm_bounds: BTreeMap<String, f64>,
    pub suites: Vec<SuiteOut>,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockOut {
    pub label: usize,
    pub dim: usize,
    pub weight_histogram: BTreeMap<i64, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlocksOut {
    #[serde(flatten)]
    pub envelope: Envelope,
    pub blocks: Vec<BlockOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsOut {
    pub n: usize,
    #[serde(rename = "ledger-hash")]
    pub ledger_hash: String,
    pub by_bidegree: Vec<Vec<usize>>,
    pub by_degree: Vec<usize>,
    pub classical: bool,
}
