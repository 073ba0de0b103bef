//! Run configuration: file format, command-line overrides, validation.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use pconvex::geometry::{Extent, GeomParams};
use pconvex::sigma::SigmaParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    Sigma,
    Minprinciple,
    Verdict,
    Augmented,
    Presets,
    /// Set by `--replay`; not selectable as a command.
    #[value(skip)]
    Replay,
}

impl Command {
    pub fn needs_operator(self) -> bool {
        !matches!(self, Command::Presets | Command::Minprinciple | Command::Replay)
    }

    pub fn needs_domain(self) -> bool {
        matches!(self, Command::Minprinciple | Command::Verdict | Command::Augmented)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Report path; stdout when absent.
    pub report: Option<PathBuf>,
    /// Directory for slice exports; defaults to the report's directory.
    pub export_dir: Option<PathBuf>,
    pub formats: Vec<Format>,
    /// Omit timings so identical runs give byte-identical reports.
    pub canonical: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            report: None,
            export_dir: None,
            formats: vec![Format::Json],
            canonical: false,
        }
    }
}

impl OutputConfig {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    pub fn exports_enabled(&self) -> bool {
        self.wants(Format::Csv) || self.wants(Format::Svg)
    }

    pub fn resolved_export_dir(&self) -> PathBuf {
        if let Some(d) = &self.export_dir {
            return d.clone();
        }
        match self.report.as_ref().and_then(|r| r.parent()) {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("exports"),
        }
    }
}

/// Everything a run needs. Loaded from TOML or JSON, then overridden by flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Preset name or polynomial text, told apart automatically.
    #[serde(default)]
    pub operator: Option<String>,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub polynomial: Option<String>,
    /// Number of variables for polynomial text (default: highest index used).
    #[serde(default)]
    pub nvars: Option<usize>,
    /// Inline domain table, or a path to a domain file.
    #[serde(default)]
    pub domain: Option<serde_json::Value>,
    /// Subspace spec such as `e1,e2` or `[1,1,0],[0,0,1]`.
    #[serde(default)]
    pub subspace: Option<String>,
    /// `sigma` command: evaluate `σ⁰` instead of `σ`.
    #[serde(default)]
    pub sigma0: bool,
    #[serde(default)]
    pub sigma_params: SigmaParams,
    #[serde(default)]
    pub geom_params: GeomParams,
    #[serde(default)]
    pub output: OutputConfig,
    /// Directory that relative paths inside the config refer to.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            operator: None,
            preset: None,
            polynomial: None,
            nvars: None,
            domain: None,
            subspace: None,
            sigma0: false,
            sigma_params: SigmaParams::default(),
            geom_params: GeomParams::default(),
            output: OutputConfig::default(),
            base_dir: None,
        }
    }

    /// Reads a config file; `.json` is JSON, anything else TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: RunConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).with_context(|| format!("invalid JSON config {}", path.display()))?
        } else {
            toml::from_str(&text).with_context(|| format!("invalid TOML config {}", path.display()))?
        };
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let sources = [&self.operator, &self.preset, &self.polynomial]
            .iter()
            .filter(|s| s.is_some())
            .count();
        if self.command.needs_operator() && sources != 1 {
            bail!("exactly one operator source is required (operator, preset or polynomial), found {sources}");
        }
        if sources > 1 {
            bail!("at most one operator source may be given, found {sources}");
        }
        if self.command.needs_domain() && self.domain.is_none() {
            bail!("command {:?} needs a domain", self.command);
        }
        if matches!(self.command, Command::Minprinciple | Command::Sigma) && self.subspace.is_none() {
            bail!("command {:?} needs a subspace (--W)", self.command);
        }
        if self.output.formats.is_empty() {
            bail!("at least one output format is required");
        }
        self.sigma_params.validate()?;
        self.geom_params.validate()?;
        Ok(())
    }
}

/// `2` → half-width 2; `-2:2,-1:1` → explicit box.
pub fn parse_extent(text: &str) -> Result<(Option<f64>, Option<Extent>)> {
    let text = text.trim();
    if !text.contains(':') {
        let half: f64 = text.parse().with_context(|| format!("invalid extent '{text}'"))?;
        return Ok((Some(half), None));
    }
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in text.split(',') {
        let (a, b) = part
            .split_once(':')
            .with_context(|| format!("extent interval '{part}' must look like lo:hi"))?;
        lo.push(a.trim().parse::<f64>().with_context(|| format!("invalid extent bound '{a}'"))?);
        hi.push(b.trim().parse::<f64>().with_context(|| format!("invalid extent bound '{b}'"))?);
    }
    Ok((None, Some(Extent { lo, hi })))
}

/// `0,0,0.25;0,0,0.5` → two points.
pub fn parse_points(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|c| c.trim().parse::<f64>().with_context(|| format!("invalid coordinate '{c}'")))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extent_forms() {
        assert_eq!(parse_extent("2").unwrap(), (Some(2.0), None));
        let (_, e) = parse_extent("-2:2, -1:0.5").unwrap();
        assert_eq!(e.unwrap(), Extent { lo: vec![-2.0, -1.0], hi: vec![2.0, 0.5] });
        assert!(parse_extent("a").is_err());
        assert!(parse_extent("1:").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_points("0,0,0.25;1,2,3").unwrap(), vec![vec![0.0, 0.0, 0.25], vec![1.0, 2.0, 3.0]]);
        assert!(parse_points("0,x").is_err());
    }

    #[test]
    fn toml_config() {
        let text = r#"
            command = "verdict"
            operator = "heat2"
            [domain]
            type = "complement_affine"
            point = [0.0, 0.0]
            [geom_params]
            h = 0.01
            [output]
            formats = ["json", "svg"]
        "#;
        let cfg: RunConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.command, Command::Verdict);
        assert_eq!(cfg.geom_params.h, 0.01);
        assert!(cfg.output.wants(Format::Svg));
        cfg.validate().unwrap();
        let bad: RunConfig = toml::from_str("command = \"verdict\"\noperator = \"heat2\"\npreset = \"heat2\"").unwrap();
        assert!(bad.validate().is_err());
        assert!(toml::from_str::<RunConfig>("command = \"verdict\"\nbogus = 1").is_err());
    }
}
