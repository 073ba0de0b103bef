//! Resolution of operator text, subspace specs and domain files.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use pconvex::geometry::{Domain, DomainSpec};
use pconvex::{parse_polynomial, parse_polynomial_in, presets, Polynomial, Subspace};

/// Where the operator came from, echoed in reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorInput {
    /// `preset` or `polynomial`.
    pub source: String,
    /// Text as given.
    pub given: String,
    /// Canonical polynomial text.
    pub polynomial: String,
    pub nvars: usize,
}

fn looks_like_polynomial(text: &str) -> bool {
    let b = text.as_bytes();
    b.windows(2).any(|w| w[0] == b'x' && w[1].is_ascii_digit())
        || text.chars().all(|c| c.is_ascii_digit() || "+-*/^(). i".contains(c))
}

fn parse_poly(text: &str, nvars: Option<usize>) -> Result<Polynomial> {
    let p = match nvars {
        Some(n) => parse_polynomial_in(text, n),
        None => parse_polynomial(text),
    };
    p.map_err(|e| anyhow!("malformed polynomial '{text}': {e}"))
}

pub fn resolve_operator(
    auto: Option<&str>,
    preset: Option<&str>,
    polynomial: Option<&str>,
    nvars: Option<usize>,
) -> Result<(Polynomial, OperatorInput)> {
    let (source, given, p) = match (auto, preset, polynomial) {
        (Some(t), None, None) if looks_like_polynomial(t) => ("polynomial", t, parse_poly(t, nvars)?),
        (Some(t), None, None) | (None, Some(t), None) => (
            "preset",
            t,
            presets::by_name(t.trim()).map_err(|e| anyhow!("{e}; run `pconvex presets` for the list"))?,
        ),
        (None, None, Some(t)) => ("polynomial", t, parse_poly(t, nvars)?),
        _ => bail!("exactly one operator source is required"),
    };
    if source == "preset" {
        if let Some(n) = nvars {
            if n != p.nvars() {
                bail!("preset '{given}' has {} variables but nvars = {n}", p.nvars());
            }
        }
    }
    if p.is_zero() {
        bail!("the zero polynomial is not an operator");
    }
    let input = OperatorInput {
        source: source.into(),
        given: given.into(),
        polynomial: p.to_string(),
        nvars: p.nvars(),
    };
    Ok((p, input))
}

/// `e1,e3`, `full`, `0`, or explicit vectors `[1,1,0],[0,0,1]`.
pub fn parse_subspace(text: &str, n: usize) -> Result<Subspace> {
    let t = text.trim();
    match t {
        "full" | "R^n" => return Ok(Subspace::full(n)),
        "0" | "trivial" | "{0}" => return Ok(Subspace::trivial(n)),
        _ => {}
    }
    if t.starts_with('[') {
        let vectors: Vec<Vec<f64>> =
            serde_json::from_str(&format!("[{t}]")).with_context(|| format!("invalid subspace vectors '{t}'"))?;
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            bail!("subspace vector has {} entries, expected {n}", v.len());
        }
        return Subspace::from_vectors(n, &vectors).map_err(|e| anyhow!("{e}"));
    }
    let mut idx = Vec::new();
    for tok in t.split(',') {
        let tok = tok.trim();
        let j: usize = tok
            .strip_prefix('e')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| anyhow!("invalid subspace token '{tok}'; use e1,e2 or [..] vectors"))?;
        if j == 0 || j > n {
            bail!("basis vector {tok} out of range for dimension {n}");
        }
        idx.push(j - 1);
    }
    Ok(Subspace::coordinate(n, &idx))
}

/// Replaces `grid_file` nodes by `grid` nodes read from disk.
fn expand_grid_files(v: &mut Value, base: Option<&Path>) -> Result<()> {
    let Value::Object(map) = v else { return Ok(()) };
    if map.get("type").and_then(Value::as_str) == Some("grid_file") {
        let rel = map
            .get("path")
            .and_then(Value::as_str)
            .ok_or_else(|| anyhow!("grid_file needs a path"))?;
        let path = match base {
            Some(b) => b.join(rel),
            None => rel.into(),
        };
        let bytes = std::fs::read(&path).with_context(|| format!("cannot read grid file {}", path.display()))?;
        let spec = read_grid_file(&bytes).with_context(|| format!("invalid grid file {}", path.display()))?;
        *v = serde_json::to_value(spec)?;
        return Ok(());
    }
    for (_, child) in map.iter_mut() {
        match child {
            Value::Array(items) => {
                for it in items {
                    expand_grid_files(it, base)?;
                }
            }
            Value::Object(_) => expand_grid_files(child, base)?,
            _ => {}
        }
    }
    Ok(())
}

/// Grid file: one ASCII header line
/// `pconvex-grid shape=<s1,..> spacing=<h> lo=<l1,..>` followed by
/// `s1·…·sk` raw bytes in row-major order (nonzero = inside).
pub fn read_grid_file(bytes: &[u8]) -> Result<DomainSpec> {
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| anyhow!("missing header line"))?;
    let header = std::str::from_utf8(&bytes[..nl])?.trim();
    let mut parts = header.split_whitespace();
    if parts.next() != Some("pconvex-grid") {
        bail!("header must start with 'pconvex-grid'");
    }
    let (mut shape, mut spacing, mut lo) = (None, None, None);
    for p in parts {
        let (k, v) = p.split_once('=').ok_or_else(|| anyhow!("bad header field '{p}'"))?;
        match k {
            "shape" => shape = Some(v.split(',').map(str::parse).collect::<std::result::Result<Vec<usize>, _>>()?),
            "spacing" => spacing = Some(v.parse::<f64>()?),
            "lo" => lo = Some(v.split(',').map(str::parse).collect::<std::result::Result<Vec<f64>, _>>()?),
            _ => bail!("unknown header field '{k}'"),
        }
    }
    let shape = shape.ok_or_else(|| anyhow!("header lacks shape"))?;
    let body = &bytes[nl + 1..];
    let total: usize = shape.iter().product();
    if body.len() != total {
        bail!("grid body has {} bytes, shape needs {total}", body.len());
    }
    Ok(DomainSpec::Grid {
        lo: lo.unwrap_or_else(|| vec![0.0; shape.len()]),
        spacing: spacing.ok_or_else(|| anyhow!("header lacks spacing"))?,
        shape,
        cells: body.iter().map(|&b| b != 0).collect(),
    })
}

fn parse_domain_text(text: &str, json: bool) -> Result<Value> {
    if json {
        Ok(serde_json::from_str(text)?)
    } else {
        Ok(toml::from_str(text)?)
    }
}

/// Loads a domain given inline (table or JSON text) or as a path.
pub fn load_domain(v: &Value, base: Option<&Path>) -> Result<(Domain, DomainSpec)> {
    let (mut value, dir) = match v {
        Value::String(s) if s.trim_start().starts_with('{') => (parse_domain_text(s, true)?, base.map(Path::to_path_buf)),
        Value::String(s) => {
            let path = match base {
                Some(b) => b.join(s),
                None => s.into(),
            };
            let text =
                std::fs::read_to_string(&path).with_context(|| format!("cannot read domain file {}", path.display()))?;
            let json = path.extension().is_some_and(|e| e == "json");
            let value = parse_domain_text(&text, json).with_context(|| format!("invalid domain file {}", path.display()))?;
            (value, path.parent().map(Path::to_path_buf))
        }
        other => (other.clone(), base.map(Path::to_path_buf)),
    };
    expand_grid_files(&mut value, dir.as_deref())?;
    let spec: DomainSpec = serde_json::from_value(value).context("invalid domain description")?;
    let domain = Domain::try_from(spec.clone()).map_err(|e| anyhow!("{e}"))?;
    Ok((domain, spec))
}
