//! Command-line front end: configs, dispatch, reports and slice exports.

pub mod args;
pub mod config;
pub mod export;
pub mod inputs;
pub mod replay;
pub mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};

use pconvex::analysis::{EllipticStatus, SemiEllipticStatus};
use pconvex::geometry::{build_slice, min_principle_family, product_lift, replay as replay_certificate, Certificate, Domain, SliceGrid};
use pconvex::sigma::{sigma0_estimate, sigma_estimate, sigma_zero_subspace_exact};
use pconvex::verdict::{augmented_verdict, classify_operator, convexity_verdict, Answer, OperatorClass, Verdict};
use pconvex::{presets, Polynomial, Subspace};

use config::{Command, Format, RunConfig};
use report::{
    ClassifyResult, CommandResult, ExportRef, Inputs, MinPrincipleResult, PresetEntry, PresetsResult, Report, SigmaResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_REFUSAL: i32 = 3;

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn config(error: anyhow::Error) -> Self {
        Self { code: EXIT_CONFIG, error }
    }

    pub fn failure(error: anyhow::Error) -> Self {
        Self { code: EXIT_FAILURE, error }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

struct Resolved {
    operator: Option<Polynomial>,
    domain: Option<Domain>,
    subspace: Option<Subspace>,
    inputs: Inputs,
}

fn resolve(cfg: &RunConfig) -> anyhow::Result<Resolved> {
    cfg.validate()?;
    let mut inputs = Inputs::default();
    let operator = if cfg.operator.is_some() || cfg.preset.is_some() || cfg.polynomial.is_some() {
        let (p, echo) = inputs::resolve_operator(
            cfg.operator.as_deref(),
            cfg.preset.as_deref(),
            cfg.polynomial.as_deref(),
            cfg.nvars,
        )?;
        inputs.operator = Some(echo);
        Some(p)
    } else {
        None
    };
    let domain = match &cfg.domain {
        Some(v) if cfg.command != Command::Presets => {
            let (d, spec) = inputs::load_domain(v, cfg.base_dir.as_deref())?;
            inputs.domain = Some(spec);
            Some(d)
        }
        _ => None,
    };
    if let (Some(p), Some(d)) = (&operator, &domain) {
        if p.nvars() != d.ambient() {
            bail!("operator has {} variables but the domain lives in R^{}", p.nvars(), d.ambient());
        }
    }
    let ambient = operator.as_ref().map(Polynomial::nvars).or(domain.as_ref().map(Domain::ambient));
    let subspace = match (&cfg.subspace, ambient) {
        (Some(text), Some(n)) => Some(inputs::parse_subspace(text, n)?),
        (Some(_), None) => bail!("a subspace needs an operator or a domain to fix the dimension"),
        _ => None,
    };
    inputs.subspace = subspace.clone();
    match cfg.command {
        Command::Sigma => inputs.sigma_params = Some(cfg.sigma_params.clone()),
        Command::Minprinciple | Command::Verdict | Command::Augmented => inputs.geom_params = Some(cfg.geom_params.clone()),
        Command::Classify | Command::Presets | Command::Replay => {}
    }
    Ok(Resolved {
        operator,
        domain,
        subspace,
        inputs,
    })
}

/// Whether the classification stopped inside a tolerance band.
fn band_refusal(class: &OperatorClass) -> bool {
    class.ellipticity.status == EllipticStatus::Unknown
        || class
            .semi_elliptic
            .as_ref()
            .is_some_and(|s| s.status == SemiEllipticStatus::Undecided)
}

fn verdict_exit(v: &Verdict) -> i32 {
    if v.surjective == Answer::Unknown && band_refusal(&v.operator_class) {
        EXIT_REFUSAL
    } else {
        EXIT_OK
    }
}

fn need<T>(v: Option<T>, what: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| anyhow!("missing {what}"))
}

fn compute(cfg: &RunConfig, r: &Resolved) -> anyhow::Result<(CommandResult, i32)> {
    Ok(match cfg.command {
        Command::Replay => bail!("replay runs through --replay"),
        Command::Presets => (
            CommandResult::Presets(PresetsResult {
                presets: presets::catalog()
                    .into_iter()
                    .map(|(name, description)| PresetEntry {
                        name: name.into(),
                        description: description.into(),
                    })
                    .collect(),
            }),
            EXIT_OK,
        ),
        Command::Classify => {
            let p = need(r.operator.as_ref(), "operator")?;
            let class = classify_operator(p)?;
            let code = if band_refusal(&class) { EXIT_REFUSAL } else { EXIT_OK };
            let principal = p.principal_part()?.to_string();
            (
                CommandResult::Classify(Box::new(ClassifyResult {
                    principal_part: principal,
                    augmented: p.augment().to_string(),
                    operator_class: class,
                })),
                code,
            )
        }
        Command::Sigma => {
            let p = need(r.operator.as_ref(), "operator")?;
            let v = need(r.subspace.clone(), "subspace")?;
            let (functional, estimate) = if cfg.sigma0 {
                ("sigma0", sigma0_estimate(p, &v, &cfg.sigma_params)?)
            } else {
                ("sigma", sigma_estimate(p, &v, &cfg.sigma_params)?)
            };
            let exact = sigma_zero_subspace_exact(p);
            let exact_is_zero = match &exact {
                _ if cfg.sigma0 => None,
                Some(z) if z.rule == "acts_along_elliptic" => Some(z.subspace.includes(&v)),
                Some(z) if v.dim() == 1 => Some(z.subspace.includes(&v)),
                _ => None,
            };
            (
                CommandResult::Sigma(SigmaResult {
                    functional: functional.into(),
                    subspace: v,
                    estimate,
                    exact_zero_set: exact,
                    exact_is_zero,
                }),
                EXIT_OK,
            )
        }
        Command::Minprinciple => {
            let d = need(r.domain.as_ref(), "domain")?;
            let w = need(r.subspace.clone(), "subspace")?;
            let family = min_principle_family(d, &w, &cfg.geom_params)?;
            let replay = match family.aggregate.certificate() {
                Some(c) => Some(replay_certificate(d, c)?),
                None => None,
            };
            (
                CommandResult::Minprinciple(MinPrincipleResult {
                    subspace: w,
                    family,
                    replay,
                }),
                EXIT_OK,
            )
        }
        Command::Verdict | Command::Augmented => {
            let p = need(r.operator.as_ref(), "operator")?;
            let d = need(r.domain.as_ref(), "domain")?;
            let v = if cfg.command == Command::Verdict {
                convexity_verdict(p, d, &cfg.geom_params)?
            } else {
                augmented_verdict(p, d, &cfg.geom_params)?
            };
            let code = verdict_exit(&v);
            let boxed = Box::new(v);
            if cfg.command == Command::Verdict {
                (CommandResult::Verdict(boxed), code)
            } else {
                (CommandResult::Augmented(boxed), code)
            }
        }
    })
}

fn file_stem(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

/// Slices worth exporting: every certificate, plus the first family slice.
fn export_targets(cfg: &RunConfig, r: &Resolved, result: &CommandResult) -> anyhow::Result<Vec<(String, SliceGrid, Option<Certificate>)>> {
    let mut out = Vec::new();
    match result {
        CommandResult::Verdict(v) | CommandResult::Augmented(v) => {
            let base = need(r.domain.as_ref(), "domain")?;
            let lifted = product_lift(base);
            for c in &v.certificates {
                let dom = if c.domain == "lifted" { &lifted } else { base };
                out.push((c.id.clone(), export::certificate_slice(dom, &c.certificate)?, Some(c.certificate.clone())));
            }
        }
        CommandResult::Minprinciple(m) => {
            let d = need(r.domain.as_ref(), "domain")?;
            let extent = cfg.geom_params.extent_for(m.subspace.dim().min(3))?;
            for s in &m.family.per_slice {
                let cert = s.report.certificate().cloned();
                if cert.is_none() && s.slice_id != 0 {
                    continue;
                }
                if s.basis.len() > 3 {
                    continue;
                }
                let grid = match &cert {
                    Some(c) => export::certificate_slice(d, c)?,
                    None => {
                        let w = Subspace::from_vectors(d.ambient(), &s.basis)?;
                        build_slice(d, &s.origin, &w, cfg.geom_params.h, &extent)?
                    }
                };
                out.push((format!("slice-{}", s.slice_id), grid, cert));
            }
        }
        _ => {}
    }
    Ok(out)
}

fn write_exports(cfg: &RunConfig, r: &Resolved, result: &CommandResult) -> anyhow::Result<Vec<ExportRef>> {
    let wants_cert_json = cfg.output.wants(Format::Json);
    if !cfg.output.exports_enabled() && !wants_cert_json {
        return Ok(Vec::new());
    }
    let targets = export_targets(cfg, r, result)?;
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    let dir = cfg.output.resolved_export_dir();
    std::fs::create_dir_all(&dir).with_context(|| format!("cannot create export directory {}", dir.display()))?;
    let mut refs = Vec::new();
    let mut emit = |id: &str, format: &str, path: PathBuf, body: String| -> anyhow::Result<()> {
        std::fs::write(&path, body).with_context(|| format!("cannot write {}", path.display()))?;
        refs.push(ExportRef {
            id: id.into(),
            format: format.into(),
            path: path.to_string_lossy().into_owned(),
        });
        Ok(())
    };
    for (id, grid, cert) in &targets {
        let stem = file_stem(id);
        if cfg.output.wants(Format::Csv) {
            emit(id, "csv", dir.join(format!("{stem}.csv")), export::slice_csv(grid))?;
        }
        if cfg.output.wants(Format::Svg) {
            let title = format!("{id}: d_X on slice through {:?}", grid.origin);
            emit(id, "svg", dir.join(format!("{stem}.svg")), export::slice_svg(grid, cert.as_ref(), &title))?;
        }
        if let (true, Some(c)) = (wants_cert_json, cert) {
            let body = serde_json::to_string_pretty(c)? + "\n";
            emit(id, "certificate", dir.join(format!("{stem}.cert.json")), body)?;
        }
    }
    Ok(refs)
}

fn seed_of(cfg: &RunConfig) -> u64 {
    match cfg.command {
        Command::Sigma => cfg.sigma_params.seed,
        _ => cfg.geom_params.seed,
    }
}

/// Runs one command and builds its report; nothing is written except exports.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let t0 = Instant::now();
    let resolved = resolve(cfg).map_err(CliError::config)?;
    let t1 = Instant::now();
    let (result, exit_code) = compute(cfg, &resolved).map_err(CliError::config)?;
    let compute_ms = ms(t1);
    let t2 = Instant::now();
    let exports = write_exports(cfg, &resolved, &result).map_err(CliError::failure)?;
    let export_ms = ms(t2);
    let timings_ms = (!cfg.output.canonical).then(|| {
        BTreeMap::from([
            ("compute".to_string(), compute_ms),
            ("exports".to_string(), export_ms),
            ("total".to_string(), ms(t0)),
        ])
    });
    Ok(Report {
        tool: report::TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema_version: report::SCHEMA_VERSION,
        command: cfg.command,
        seed: seed_of(cfg),
        convention: presets::CONVENTION.into(),
        inputs: resolved.inputs,
        timings_ms,
        result,
        exports,
        exit_code,
    })
}

/// Writes the report to the configured path, or stdout.
pub fn emit_report(report: &Report, path: Option<&Path>) -> anyhow::Result<()> {
    let text = report.to_json();
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            }
            std::fs::write(p, text).with_context(|| format!("cannot write report {}", p.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses arguments, runs, writes the report and returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.replay {
        Some(path) => replay::run_replay(path, &cli),
        None => args::build_config(&cli).map_err(CliError::config).and_then(|cfg| {
            let report = run(&cfg)?;
            Ok((report, cfg.output.report.clone()))
        }),
    };
    match outcome {
        Ok((report, path)) => match emit_report(&report, path.as_deref()) {
            Ok(()) => report.exit_code,
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_FAILURE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
