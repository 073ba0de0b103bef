//! Re-checks certificates stored in a report or a certificate file.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};

use pconvex::geometry::{product_lift, replay, Certificate, Domain};
use pconvex::presets;

use crate::args::Cli;
use crate::config::Command;
use crate::report::{CommandResult, Inputs, Report, ReplayEntry, ReplayResult};
use crate::{inputs, CliError, EXIT_FAILURE, EXIT_OK};

/// Certificates of a report, each with the domain label it refers to.
fn certificates_of(report: &Report) -> Vec<(String, String, Certificate)> {
    match &report.result {
        CommandResult::Verdict(v) | CommandResult::Augmented(v) => v
            .certificates
            .iter()
            .map(|c| (c.id.clone(), c.domain.clone(), c.certificate.clone()))
            .collect(),
        CommandResult::Minprinciple(m) => m
            .family
            .per_slice
            .iter()
            .filter_map(|s| s.report.certificate().map(|c| (format!("slice-{}", s.slice_id), "base".into(), c.clone())))
            .collect(),
        _ => Vec::new(),
    }
}

fn export_exists(path: &str, report_dir: Option<&Path>) -> bool {
    let p = Path::new(path);
    p.exists() || (p.is_relative() && report_dir.is_some_and(|d| d.join(p).exists()))
}

fn load(path: &Path, cli: &Cli) -> anyhow::Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let flag_domain = match &cli.domain {
        Some(d) => Some(inputs::load_domain(&serde_json::Value::String(d.clone()), None)?),
        None => None,
    };
    let report_dir = path.parent();
    let (source_seed, items, base, missing, mut echo) = if let Ok(report) = serde_json::from_str::<Report>(&text) {
        let (domain, spec) = match (flag_domain, &report.inputs.domain) {
            (Some(d), _) => d,
            (None, Some(spec)) => (Domain::try_from(spec.clone()).map_err(|e| anyhow!("{e}"))?, spec.clone()),
            (None, None) => bail!("report has no domain; pass --domain"),
        };
        let missing = report
            .exports
            .iter()
            .filter(|e| !export_exists(&e.path, report_dir))
            .map(|e| e.path.clone())
            .collect();
        let echo = Inputs {
            domain: Some(spec),
            ..report.inputs.clone()
        };
        (report.seed, certificates_of(&report), domain, missing, echo)
    } else {
        let cert: Certificate = serde_json::from_str(&text)
            .with_context(|| format!("{} is neither a report nor a certificate", path.display()))?;
        let (domain, spec) = flag_domain.ok_or_else(|| anyhow!("replaying a certificate file needs --domain"))?;
        let echo = Inputs {
            domain: Some(spec),
            ..Inputs::default()
        };
        let id = format!("slice-{}", cert.slice_id);
        (pconvex::DEFAULT_SEED, vec![(id, "base".to_string(), cert)], domain, Vec::new(), echo)
    };
    let lifted = product_lift(&base);
    let mut entries = Vec::new();
    for (id, label, cert) in items {
        let dom = if label == "lifted" { &lifted } else { &base };
        let rep = replay(dom, &cert).with_context(|| format!("certificate {id} does not fit the domain"))?;
        entries.push(ReplayEntry {
            id,
            valid: rep.valid,
            replay: rep,
        });
    }
    let all_valid = entries.iter().all(|e| e.valid) && missing.is_empty();
    echo.geom_params = None;
    Ok(Report {
        tool: crate::report::TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema_version: crate::report::SCHEMA_VERSION,
        command: Command::Replay,
        seed: source_seed,
        convention: presets::CONVENTION.into(),
        inputs: echo,
        timings_ms: None,
        result: CommandResult::Replay(ReplayResult {
            source: path.to_string_lossy().into_owned(),
            certificates: entries,
            missing_exports: missing,
            all_valid,
        }),
        exports: Vec::new(),
        exit_code: if all_valid { EXIT_OK } else { EXIT_FAILURE },
    })
}

/// `--replay <file>`: exit 0 when every certificate replays and every export exists.
pub fn run_replay(path: &Path, cli: &Cli) -> Result<(Report, Option<PathBuf>), CliError> {
    let report = load(path, cli).map_err(CliError::config)?;
    Ok((report, cli.out.clone()))
}
