//! On-disk JSON schemas and their conversions to core types.
//!
//! All artifacts are versioned JSON. Amplitudes are stored as [re, im]
//! pairs; serde_json writes shortest round-trip decimals, so parsing a
//! serialized file reproduces every f64 bit-exactly and re-serializing
//! yields byte-identical output.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use mubs_core::geom::{IncidenceStructure, Kind};
use mubs_core::gf::FieldSpec;
use mubs_core::linalg::{Basis, CVec};
use mubs_core::mub::{Method, MubSet};
use mubs_core::phase::PhaseOperator;
use mubs_core::search::SearchReport;

pub const SCHEMA_VERSION: u32 = 1;

fn vec_to_pairs(v: &CVec) -> Vec<[f64; 2]> {
    v.amps().iter().map(|a| [a.re, a.im]).collect()
}

fn pairs_to_vec(pairs: &[[f64; 2]]) -> CVec {
    CVec::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
}

/// A set of bases: each basis a list of vectors, each vector a list of
/// [re, im] pairs in index order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MubFile {
    pub schema_version: u32,
    pub dim: usize,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDesc>,
    pub bases: Vec<Vec<Vec<[f64; 2]>>>,
}

impl MubFile {
    pub fn from_set(set: &MubSet) -> MubFile {
        MubFile {
            schema_version: SCHEMA_VERSION,
            dim: set.dim(),
            method: set.method().to_string(),
            field: set.field().map(|f| FieldDesc {
                p: f.p(),
                m: f.m(),
                modulus: f.modulus().to_vec(),
            }),
            bases: set
                .bases()
                .iter()
                .map(|b| b.vectors().iter().map(vec_to_pairs).collect())
                .collect(),
        }
    }

    pub fn to_set(&self) -> Result<MubSet> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema_version {}", self.schema_version);
        }
        let method: Method = self
            .method
            .parse()
            .map_err(|e: String| anyhow!("{e}"))?;
        let field = match &self.field {
            Some(f) => Some(
                FieldSpec::with_modulus(f.p, f.m, &f.modulus)
                    .with_context(|| "invalid field descriptor")?,
            ),
            None => None,
        };
        if self.bases.is_empty() {
            bail!("file contains no bases");
        }
        let mut bases = Vec::with_capacity(self.bases.len());
        for (i, raw) in self.bases.iter().enumerate() {
            let vectors: Vec<CVec> = raw
                .iter()
                .map(|pairs| {
                    if pairs.len() != self.dim {
                        bail!("basis {i}: vector has {} amplitudes, expected {}", pairs.len(), self.dim);
                    }
                    Ok(pairs_to_vec(pairs))
                })
                .collect::<Result<_>>()?;
            bases.push(
                Basis::new(vectors, format!("basis {i}"))
                    .map_err(|e| anyhow!("basis {i}: {e}"))?,
            );
        }
        Ok(MubSet::new(self.dim, bases, method, field))
    }
}

/// A flat list of vectors for SIC-POVM verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SicFile {
    pub schema_version: u32,
    pub dim: usize,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

impl SicFile {
    pub fn from_vectors(dim: usize, vectors: &[CVec]) -> SicFile {
        SicFile {
            schema_version: SCHEMA_VERSION,
            dim,
            vectors: vectors.iter().map(vec_to_pairs).collect(),
        }
    }

    pub fn to_vectors(&self) -> Result<Vec<CVec>> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema_version {}", self.schema_version);
        }
        Ok(self.vectors.iter().map(|p| pairs_to_vec(p)).collect())
    }
}

/// Incidence structure: {"kind", "order", "points": count, "lines": [[...]]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneFile {
    pub kind: String,
    pub order: u64,
    pub points: usize,
    pub lines: Vec<Vec<usize>>,
}

impl PlaneFile {
    pub fn from_structure(s: &IncidenceStructure) -> PlaneFile {
        PlaneFile {
            kind: s.kind.to_string(),
            order: s.order,
            points: s.points(),
            lines: s.lines.clone(),
        }
    }

    pub fn to_structure(&self) -> Result<IncidenceStructure> {
        let kind = match self.kind.as_str() {
            "projective" => Kind::Projective,
            "affine" => Kind::Affine,
            "raw" => Kind::Raw,
            other => bail!("unknown structure kind '{other}'"),
        };
        let s = IncidenceStructure {
            kind,
            order: self.order,
            point_labels: (0..self.points).map(|i| format!("p{i}")).collect(),
            lines: self.lines.clone(),
            classes: None,
        };
        s.well_formed().map_err(|e| anyhow!("malformed incidence: {e}"))?;
        Ok(s)
    }
}

/// One phase operator, {"dim", "spectrum", "matrix"} plus its provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseOpEntry {
    pub dim: usize,
    pub label: String,
    pub spectrum: Vec<f64>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseFile {
    pub schema_version: u32,
    pub dim: usize,
    pub operators: Vec<PhaseOpEntry>,
}

impl PhaseFile {
    pub fn from_operators(dim: usize, ops: &[PhaseOperator]) -> PhaseFile {
        PhaseFile {
            schema_version: SCHEMA_VERSION,
            dim,
            operators: ops
                .iter()
                .map(|op| PhaseOpEntry {
                    dim: op.dim(),
                    label: op.source_basis_label().to_string(),
                    spectrum: op.spectrum().to_vec(),
                    matrix: (0..op.dim())
                        .map(|r| {
                            (0..op.dim())
                                .map(|c| {
                                    let z = op.matrix().get(r, c);
                                    [z.re, z.im]
                                })
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Search outcome with the winning candidate embedded as a MubFile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReportFile {
    pub schema_version: u32,
    pub dim: usize,
    pub target_bases: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub restarts: u32,
    pub max_iters: u32,
    pub success: bool,
    pub best_residual: f64,
    pub best_restart: u32,
    pub restart_residuals: Vec<f64>,
    pub iterations: Vec<u32>,
    /// Fixed disclaimer: a residual above tolerance says nothing about
    /// whether the sought set exists.
    pub note: String,
    pub best_set: MubFile,
}

impl SearchReportFile {
    pub fn from_report(report: &SearchReport, restarts: u32, max_iters: u32) -> SearchReportFile {
        SearchReportFile {
            schema_version: SCHEMA_VERSION,
            dim: report.dim,
            target_bases: report.target_bases,
            seed: report.seed,
            tolerance: report.tolerance,
            restarts,
            max_iters,
            success: report.success,
            best_residual: report.best_residual,
            best_restart: report.best_restart,
            restart_residuals: report.restart_residuals.clone(),
            iterations: report.iterations.clone(),
            note: "best residual over the configured restarts; a residual above \
                   tolerance is not evidence that no such set exists"
                .to_string(),
            best_set: MubFile::from_set(&report.best_set),
        }
    }
}

/// The checker report in its wire form:
/// {"dim", "bases", "max_deviation", "verdict", "pairs": [{"i","j","dev"}]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReportFile {
    pub dim: usize,
    pub bases: usize,
    pub max_deviation: f64,
    pub verdict: String,
    pub pairs: Vec<PairEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub dev: f64,
}

impl VerifyReportFile {
    pub fn from_report(r: &mubs_core::check::MubReport) -> VerifyReportFile {
        VerifyReportFile {
            dim: r.dim,
            bases: r.basis_count,
            max_deviation: r.max_deviation,
            verdict: if r.pass { "pass" } else { "fail" }.to_string(),
            pairs: r
                .pair_deviations
                .iter()
                .map(|p| PairEntry { i: p.i, j: p.j, dev: p.deviation })
                .collect(),
        }
    }
}

/// Field tables in wire form: {"p", "m", "modulus", "trace"}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldFile {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
    pub trace: Vec<u64>,
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json_string(value))
        .with_context(|| format!("cannot write {}", path.display()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}
