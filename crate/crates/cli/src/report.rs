//! JSON report layout. Field order is fixed by declaration order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use pconvex::geometry::{DomainSpec, FamilyReport, GeomParams, ReplayReport};
use pconvex::sigma::{SigmaEstimate, SigmaParams, SigmaZeroSet};
use pconvex::verdict::{OperatorClass, Verdict};
use pconvex::Subspace;

use crate::config::Command;
use crate::inputs::OperatorInput;

pub const TOOL: &str = "pconvex";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub command: Command,
    pub seed: u64,
    pub convention: String,
    pub inputs: Inputs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
    pub result: CommandResult,
    pub exports: Vec<ExportRef>,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub operator: Option<OperatorInput>,
    pub domain: Option<DomainSpec>,
    pub subspace: Option<Subspace>,
    pub sigma_params: Option<SigmaParams>,
    pub geom_params: Option<GeomParams>,
}

/// One exported slice file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportRef {
    /// Certificate id (`R3/base/slice-0`) or family slice id (`slice-3`).
    pub id: String,
    pub format: String,
    pub path: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CommandResult {
    Classify(Box<ClassifyResult>),
    Sigma(SigmaResult),
    Minprinciple(MinPrincipleResult),
    Verdict(Box<Verdict>),
    Augmented(Box<Verdict>),
    Presets(PresetsResult),
    Replay(ReplayResult),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyResult {
    pub principal_part: String,
    pub augmented: String,
    pub operator_class: OperatorClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaResult {
    /// `sigma` or `sigma0`.
    pub functional: String,
    pub subspace: Subspace,
    pub estimate: SigmaEstimate,
    /// Exact zero set of `σ` on lines, when the operator class provides one.
    pub exact_zero_set: Option<SigmaZeroSet>,
    /// Exact answer to "is the functional zero on this subspace", when known.
    pub exact_is_zero: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinPrincipleResult {
    pub subspace: Subspace,
    pub family: FamilyReport,
    /// Replay of the aggregate certificate, if there is one.
    pub replay: Option<ReplayReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetEntry {
    pub name: String,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetsResult {
    pub presets: Vec<PresetEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplayEntry {
    pub id: String,
    pub valid: bool,
    pub replay: ReplayReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplayResult {
    pub source: String,
    pub certificates: Vec<ReplayEntry>,
    /// Exports listed in the source report that are missing on disk.
    pub missing_exports: Vec<String>,
    pub all_valid: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
