//! JSON views of core results and the run manifest.

use std::path::Path;

use cfi_core::bounds::{MismatchReport, TableArtifact};
use cfi_core::estimate::within_sigmas;
use cfi_core::games::GameEstimate;
use cfi_core::LogProb;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// A probability that may be far below `f64` range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbJson {
    pub log10: Option<f64>,
    /// Scientific notation, six digits; `0` for an exact zero.
    pub value: String,
}

impl From<LogProb> for ProbJson {
    fn from(p: LogProb) -> Self {
        Self {
            log10: (!p.is_exact_zero()).then(|| p.log10()),
            value: format!("{p:.6}"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterpretationJson {
    pub name: String,
    pub value: ProbJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MismatchEntryJson {
    pub location: String,
    pub printed: ProbJson,
    pub interpretations: Vec<InterpretationJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MismatchJson {
    pub artifact: String,
    pub note: String,
    pub entries: Vec<MismatchEntryJson>,
}

impl From<&MismatchReport> for MismatchJson {
    fn from(r: &MismatchReport) -> Self {
        Self {
            artifact: r.artifact.into(),
            note: r.note.clone(),
            entries: r
                .entries
                .iter()
                .map(|e| MismatchEntryJson {
                    location: e.location.clone(),
                    printed: e.printed.into(),
                    interpretations: e
                        .interpretations
                        .iter()
                        .map(|i| InterpretationJson {
                            name: i.name.into(),
                            value: i.value.into(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellProvenance {
    pub row: String,
    pub col: String,
    pub provenance: String,
}

pub fn provenance_of(table: &TableArtifact) -> Vec<CellProvenance> {
    let mut out = Vec::new();
    for (r, row) in table.rows.iter().enumerate() {
        for (c, col) in table.cols.iter().enumerate() {
            out.push(CellProvenance {
                row: row.clone(),
                col: col.clone(),
                provenance: table.cell(r, c).provenance.id().into(),
            });
        }
    }
    out
}

/// An analytic value attached to a game report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyticJson {
    pub name: String,
    pub value: ProbJson,
    /// Wilson interval at z = 3 contains the value.
    pub within_3_sigma: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameReport {
    pub game: String,
    pub scheme: String,
    pub adversary: String,
    pub q: u64,
    pub seed: u64,
    pub trials: u64,
    pub successes: u64,
    pub disqualified: u64,
    pub freshness_waived: u64,
    pub privileged: u64,
    pub point: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub analytic: Vec<AnalyticJson>,
}

impl GameReport {
    pub fn new(est: &GameEstimate, seed: u64) -> Self {
        let mut report = Self {
            game: est.game.id().into(),
            scheme: est.scheme.id().into(),
            adversary: est.adversary.clone(),
            q: est.q,
            seed,
            trials: est.trials,
            successes: est.successes,
            disqualified: est.disqualified,
            freshness_waived: est.freshness_waived,
            privileged: est.privileged,
            point: est.point,
            wilson_lo: est.wilson_lo,
            wilson_hi: est.wilson_hi,
            analytic: Vec::new(),
        };
        if let Some(b) = est.analytic_log10_bound {
            report.attach("bound", LogProb::from_log10(b));
        }
        report
    }

    pub fn attach(&mut self, name: &str, value: LogProb) {
        let within = within_sigmas(value.value(), self.successes, self.trials, 3.0);
        self.analytic.push(AnalyticJson {
            name: name.into(),
            value: value.into(),
            within_3_sigma: within,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactRecord {
    pub file: String,
    pub sha256: String,
}

impl ArtifactRecord {
    pub fn of(file: &str, bytes: &[u8]) -> Self {
        Self {
            file: file.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Everything needed to reproduce a run: the resolved argument list
/// (seed included) and digests of what it wrote.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub table_id: Option<String>,
    pub parameters: serde_json::Value,
    pub provenance: Vec<CellProvenance>,
    pub mismatches: Vec<MismatchJson>,
    pub artifacts: Vec<ArtifactRecord>,
}

impl Manifest {
    pub fn new(argv: Vec<String>, seed: Option<u64>, parameters: serde_json::Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            argv,
            seed,
            table_id: None,
            parameters,
            provenance: Vec::new(),
            mismatches: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::format("manifest", e))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::format("JSON output", e))
}
