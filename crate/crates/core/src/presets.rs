//! Named operator symbols.
//!
//! Convention: time-first. `heat(n) = i·x1 − Σ_{j≥2} x_j²`,
//! `schrodinger(n) = x1 − Σ_{j≥2} x_j²`, `wave(n) = x1² − Σ_{j≥2} x_j²`.
//! Every functional computed by the crate is invariant under `ξ ↦ −ξ` and
//! under conjugating coefficients, so this choice only fixes file outputs.

use crate::error::{Error, Result};
use crate::poly::{parse_polynomial_in, Polynomial};
use crate::rational::ComplexRational;

pub const CONVENTION: &str =
    "time-first: heat(n) = i*x1 - sum_{j>=2} x_j^2, schrodinger(n) = x1 - sum_{j>=2} x_j^2, wave(n) = x1^2 - sum_{j>=2} x_j^2";

fn sum_squares(from: usize, to: usize) -> String {
    (from..=to)
        .map(|j| format!("x{j}^2"))
        .collect::<Vec<_>>()
        .join(" - ")
}

pub fn laplace(n: usize) -> Polynomial {
    let text = (1..=n).map(|j| format!("x{j}^2")).collect::<Vec<_>>().join(" + ");
    parse_polynomial_in(&text, n).expect("preset parses")
}

/// Laplacian in the first `n − 1` variables, viewed in ℝⁿ.
pub fn laplace_sub(n: usize) -> Polynomial {
    laplace(n - 1).embed(n)
}

fn time_first(lead: &str, n: usize) -> Polynomial {
    let text = if n == 1 {
        lead.to_string()
    } else {
        format!("{lead} - {}", sum_squares(2, n))
    };
    parse_polynomial_in(&text, n).expect("preset parses")
}

pub fn heat(n: usize) -> Polynomial {
    time_first("i*x1", n)
}

pub fn schrodinger(n: usize) -> Polynomial {
    time_first("x1", n)
}

pub fn wave(n: usize) -> Polynomial {
    time_first("x1^2", n)
}

/// `⟨N, x⟩ + c`.
pub fn transport(normal: &[ComplexRational], c: ComplexRational) -> Polynomial {
    let n = normal.len();
    let mut p = Polynomial::constant(n, c);
    for (j, nj) in normal.iter().enumerate() {
        p = p.add(&Polynomial::var(n, j).scale(nj));
    }
    p
}

pub fn cauchy_riemann() -> Polynomial {
    parse_polynomial_in("x1 + i*x2", 2).expect("preset parses")
}

/// Names accepted by [`by_name`], with a one-line description each.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("laplace<n>", "x1^2 + ... + xn^2, e.g. laplace3"),
        ("laplace<n>-sub", "Laplacian in x1..x(n-1) inside R^n, e.g. laplace3-sub"),
        ("heat<n>", "i*x1 - x2^2 - ... - xn^2 (time first)"),
        ("schrodinger<n>", "x1 - x2^2 - ... - xn^2 (time first)"),
        ("wave<n>", "x1^2 - x2^2 - ... - xn^2 (time first)"),
        ("transport:<N1>,<N2>,...[:<c>]", "N1*x1 + ... + Nn*xn + c, entries are polynomial constants such as 1, i, 2-i"),
        ("cauchy-riemann", "x1 + i*x2"),
    ]
}

fn parse_constant(text: &str) -> Result<ComplexRational> {
    let p = parse_polynomial_in(text.trim(), 0)?;
    Ok(p.coefficient(&[]))
}

/// Looks up a preset such as `heat2`, `laplace3-sub` or `transport:1,i,0`.
pub fn by_name(name: &str) -> Result<Polynomial> {
    let unknown = || Error::InvalidParams(format!("unknown preset '{name}'"));
    if name == "cauchy-riemann" {
        return Ok(cauchy_riemann());
    }
    if let Some(rest) = name.strip_prefix("transport:") {
        let mut parts = rest.splitn(2, ':');
        let normal = parts
            .next()
            .unwrap_or("")
            .split(',')
            .map(parse_constant)
            .collect::<Result<Vec<_>>>()?;
        let c = match parts.next() {
            Some(c) => parse_constant(c)?,
            None => ComplexRational::zero(),
        };
        if normal.is_empty() || normal.iter().all(ComplexRational::is_zero) {
            return Err(Error::InvalidParams("transport direction must be nonzero".into()));
        }
        return Ok(transport(&normal, c));
    }
    let (stem, sub) = match name.strip_suffix("-sub") {
        Some(s) => (s, true),
        None => (name, false),
    };
    let split = stem.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?;
    let (family, digits) = stem.split_at(split);
    let n: usize = digits.parse().map_err(|_| unknown())?;
    if n == 0 || n > 16 {
        return Err(Error::InvalidParams(format!("preset dimension {n} out of range 1..=16")));
    }
    match (family, sub) {
        ("laplace", false) => Ok(laplace(n)),
        ("laplace", true) if n >= 2 => Ok(laplace_sub(n)),
        ("heat", false) if n >= 2 => Ok(heat(n)),
        ("schrodinger", false) if n >= 2 => Ok(schrodinger(n)),
        ("wave", false) if n >= 2 => Ok(wave(n)),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("heat2").unwrap(), parse_polynomial("i*x1 - x2^2").unwrap());
        assert_eq!(by_name("laplace3").unwrap(), parse_polynomial("x1^2+x2^2+x3^2").unwrap());
        let sub = by_name("laplace3-sub").unwrap();
        assert_eq!(sub.nvars(), 3);
        assert_eq!(sub.degree(), 2);
        assert_eq!(by_name("wave2").unwrap(), parse_polynomial("x1^2 - x2^2").unwrap());
        assert_eq!(
            by_name("transport:1,i,0").unwrap(),
            parse_polynomial_in("x1 + i*x2", 3).unwrap()
        );
        assert_eq!(
            by_name("transport:1,0:2").unwrap(),
            parse_polynomial_in("x1 + 2", 2).unwrap()
        );
        assert_eq!(by_name("cauchy-riemann").unwrap(), parse_polynomial("x1 + i*x2").unwrap());
        assert!(by_name("heat").is_err());
        assert!(by_name("biharmonic2").is_err());
        assert!(by_name("transport:0,0").is_err());
    }
}
