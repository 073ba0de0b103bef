//! Command-line flags and their merge onto a config file.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Parser;

use crate::config::{parse_extent, parse_points, Command, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "pconvex", version, about = "P-convexity and surjectivity checks for constant-coefficient operators")]
pub struct Cli {
    /// Command to run; may instead come from --config.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// TOML or JSON run configuration; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Preset name (see `presets`) or polynomial text such as "i*x1 - x2^2".
    #[arg(long)]
    pub op: Option<String>,
    /// Number of variables for polynomial text.
    #[arg(long)]
    pub nvars: Option<usize>,
    /// Domain file (TOML or JSON), or inline JSON.
    #[arg(long)]
    pub domain: Option<String>,
    /// Subspace: "e1,e2", "full", or vectors "[1,1,0],[0,0,1]".
    #[arg(long = "W", visible_alias = "V", allow_hyphen_values = true)]
    pub subspace: Option<String>,
    /// Lattice spacing of slice grids.
    #[arg(long)]
    pub h: Option<f64>,
    /// Slice window: half-width ("2") or explicit box ("-2:2,-1:1").
    #[arg(long, allow_hyphen_values = true)]
    pub extent: Option<String>,
    /// Slice origins: "0,0,0.25;0,0,0.5".
    #[arg(long, allow_hyphen_values = true)]
    pub offsets: Option<String>,
    /// Number of default slice origins.
    #[arg(long)]
    pub n_offsets: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Evaluate the variant functional with all radii (`sigma` only).
    #[arg(long)]
    pub sigma0: bool,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for slice exports.
    #[arg(long)]
    pub export_dir: Option<PathBuf>,
    /// Output formats, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub formats: Option<Vec<Format>>,
    /// Leave timings out so identical runs give identical bytes.
    #[arg(long)]
    pub canonical: bool,
    /// Replay the certificates of a report (or a single certificate file).
    #[arg(long)]
    pub replay: Option<PathBuf>,
}

/// Loads `--config` (if any) and applies the flags on top.
pub fn build_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match (&cli.config, cli.command) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(c)) => RunConfig::new(c),
        (None, None) => bail!("no command given; use one of classify, sigma, minprinciple, verdict, augmented, presets"),
    };
    if let Some(c) = cli.command {
        cfg.command = c;
    }
    if let Some(op) = &cli.op {
        cfg.operator = Some(op.clone());
        cfg.preset = None;
        cfg.polynomial = None;
    }
    if cli.nvars.is_some() {
        cfg.nvars = cli.nvars;
    }
    if let Some(d) = &cli.domain {
        cfg.domain = Some(serde_json::Value::String(d.clone()));
        // Flag paths are relative to the working directory.
        if cli.config.is_some() {
            cfg.domain = Some(serde_json::Value::String(absolute(d)));
        }
    }
    if cli.subspace.is_some() {
        cfg.subspace = cli.subspace.clone();
    }
    if let Some(h) = cli.h {
        cfg.geom_params.h = h;
    }
    if let Some(e) = &cli.extent {
        let (half, ext) = parse_extent(e)?;
        if let Some(hw) = half {
            cfg.geom_params.half_width = hw;
            cfg.geom_params.extent = None;
        }
        if ext.is_some() {
            cfg.geom_params.extent = ext;
        }
    }
    if let Some(o) = &cli.offsets {
        cfg.geom_params.offsets = Some(parse_points(o)?);
    }
    if let Some(n) = cli.n_offsets {
        cfg.geom_params.n_offsets = n;
    }
    if let Some(s) = cli.seed {
        cfg.geom_params.seed = s;
        cfg.sigma_params.seed = s;
    }
    if cli.sigma0 {
        cfg.sigma0 = true;
    }
    if cli.out.is_some() {
        cfg.output.report = cli.out.clone();
    }
    if cli.export_dir.is_some() {
        cfg.output.export_dir = cli.export_dir.clone();
    }
    if let Some(f) = &cli.formats {
        let mut f = f.clone();
        f.sort();
        f.dedup();
        cfg.output.formats = f;
    }
    if cli.canonical {
        cfg.output.canonical = true;
    }
    Ok(cfg)
}

fn absolute(p: &str) -> String {
    let path = std::path::Path::new(p);
    if path.is_absolute() || p.trim_start().starts_with('{') {
        return p.to_string();
    }
    std::env::current_dir()
        .map(|d| d.join(path).to_string_lossy().into_owned())
        .unwrap_or_else(|_| p.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("pconvex").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_defaults() {
        let cli = parse(&[
            "minprinciple",
            "--domain",
            "d.toml",
            "--W",
            "e1,e2",
            "--h",
            "0.02",
            "--extent",
            "-1:1,-2:2",
            "--seed",
            "7",
            "--formats",
            "svg,json,svg",
        ]);
        let cfg = build_config(&cli).unwrap();
        assert_eq!(cfg.command, Command::Minprinciple);
        assert_eq!(cfg.geom_params.h, 0.02);
        assert_eq!(cfg.geom_params.extent.as_ref().unwrap().hi, vec![1.0, 2.0]);
        assert_eq!(cfg.sigma_params.seed, 7);
        assert_eq!(cfg.output.formats, vec![Format::Json, Format::Svg]);
        assert_eq!(cfg.subspace.as_deref(), Some("e1,e2"));
    }

    #[test]
    fn v_alias_and_missing_command() {
        let cli = parse(&["sigma", "--op", "laplace3-sub", "--V", "e3"]);
        assert_eq!(cli.subspace.as_deref(), Some("e3"));
        assert!(build_config(&parse(&["--op", "heat2"])).is_err());
        assert!(Cli::try_parse_from(["pconvex", "frobnicate"]).is_err());
    }
}
