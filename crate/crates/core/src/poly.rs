//! Exact multivariate polynomials with complex rational coefficients.
//!
//! Terms are stored sparsely in a `BTreeMap` keyed by multi-index, so
//! iteration order (and hence every derived float computation) is
//! deterministic. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::ComplexRational;

/// Exponent vector `α`, one entry per variable.
pub type MultiIndex = Vec<u32>;

/// Largest exponent accepted anywhere in a polynomial.
pub const MAX_EXPONENT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PolyText", try_from = "PolyText")]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<MultiIndex, ComplexRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: ComplexRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_{index+1}` (zero-based `index`).
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut alpha = vec![0; nvars];
        alpha[index] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(alpha, ComplexRational::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, ComplexRational)>,
    {
        let mut p = Self::zero(nvars);
        for (alpha, c) in terms {
            if alpha.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: alpha.len(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    /// Adds `c·x^α`, dropping the entry if the sum cancels.
    pub fn add_term(&mut self, alpha: MultiIndex, c: ComplexRational) {
        debug_assert_eq!(alpha.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&alpha);
                }
            }
            None => {
                self.terms.insert(alpha, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ComplexRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, alpha: &[u32]) -> ComplexRational {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial (check [`Self::is_zero`]).
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|a| a.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Largest exponent of `x_{j+1}` over all terms.
    pub fn partial_degree(&self, j: usize) -> u32 {
        self.terms.keys().map(|a| a[j]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|a| a.iter().sum::<u32>() == d)
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.iter().sum::<u32>() == d)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    /// Top-degree homogeneous part `P_m`.
    pub fn principal_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.homogeneous_part(self.degree()))
    }

    /// `P⁺(x_1,…,x_{n+1}) = P(x_1,…,x_n)`.
    pub fn augment(&self) -> Self {
        self.embed(self.nvars + 1)
    }

    /// Same polynomial viewed in `nvars ≥ self.nvars()` variables.
    pub fn embed(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars, "embed cannot drop variables");
        Self {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| {
                    let mut b = a.clone();
                    b.resize(nvars, 0);
                    (b, c.clone())
                })
                .collect(),
        }
    }

    /// Drops the last variable; `None` if it occurs in some term.
    pub fn drop_last_variable(&self) -> Option<Self> {
        if self.nvars == 0 || self.partial_degree(self.nvars - 1) > 0 {
            return None;
        }
        Some(Self {
            nvars: self.nvars - 1,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a[..self.nvars - 1].to_vec(), c.clone()))
                .collect(),
        })
    }

    /// `∂P/∂x_{j+1}`.
    pub fn derivative(&self, j: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, c) in &self.terms {
            if a[j] == 0 {
                continue;
            }
            let mut b = a.clone();
            b[j] -= 1;
            let k = BigRational::from_integer(BigInt::from(a[j]));
            out.add_term(b, c.scale(&k));
        }
        out
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, d) in &self.terms {
            out.add_term(a.clone(), d * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let e: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, c * d);
            }
        }
        out
    }

    /// Repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.nvars, ComplexRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|a| a.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Largest coefficient modulus, as a float.
    pub fn coefficient_scale(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_f64())
            .fold(0.0, f64::max)
    }

    /// Substitutes `x_i = Σ_j columns[j][i]·y_j` exactly; the result lives in
    /// `columns.len()` variables.
    pub fn compose_linear(&self, columns: &[Vec<BigRational>]) -> Result<Self> {
        let k = columns.len();
        for col in columns {
            if col.len() != self.nvars {
                return Err(Error::DimensionMismatch {
                    expected: self.nvars,
                    got: col.len(),
                });
            }
        }
        let forms: Vec<Self> = (0..self.nvars)
            .map(|i| {
                let mut f = Self::zero(k);
                for (j, col) in columns.iter().enumerate() {
                    let mut alpha = vec![0; k];
                    alpha[j] = 1;
                    f.add_term(alpha, ComplexRational::from_real(col[i].clone()));
                }
                f
            })
            .collect();
        let mut powers: Vec<Vec<Self>> = forms
            .iter()
            .map(|f| vec![Self::constant(k, ComplexRational::one()), f.clone()])
            .collect();
        let mut out = Self::zero(k);
        for (alpha, c) in &self.terms {
            let mut term = Self::constant(k, c.clone());
            for (i, &e) in alpha.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&forms[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        self.check_dim(point.len())?;
        Ok(self.to_numeric().eval_complex(point))
    }

    pub fn evaluate_real(&self, point: &[f64]) -> Result<Complex64> {
        self.check_dim(point.len())?;
        Ok(self.to_numeric().eval(point))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got,
            });
        }
        Ok(())
    }

    /// Float snapshot for repeated evaluation.
    pub fn to_numeric(&self) -> NumericPoly {
        NumericPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(a, c)| (a.as_slice(), c.to_complex64())),
        )
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first, then lexicographically descending.
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (k, (alpha, c)) in entries.into_iter().enumerate() {
            let mono: Vec<String> = alpha
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, e)
                    }
                })
                .collect();
            let (negative, mag) = if c.is_real() && c.re < BigRational::zero() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let unit = mag == ComplexRational::one();
            match (mono.is_empty(), unit) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{}*{}", mag, mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Serialized form: the variable count and the canonical text.
#[derive(Serialize, Deserialize)]
struct PolyText {
    nvars: usize,
    text: String,
}

impl From<Polynomial> for PolyText {
    fn from(p: Polynomial) -> Self {
        Self {
            nvars: p.nvars,
            text: p.to_string(),
        }
    }
}

impl TryFrom<PolyText> for Polynomial {
    type Error = Error;

    fn try_from(t: PolyText) -> Result<Self> {
        parse_polynomial_in(&t.text, t.nvars)
    }
}

/// Neumaier-compensated accumulator.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// Float copy of a polynomial used by the numeric searches.
///
/// Terms are stored flat: coefficient `k` multiplies the factors
/// `x_var^exp` listed in `factors[offsets[k]..offsets[k+1]]`.
#[derive(Clone, Debug)]
pub struct NumericPoly {
    nvars: usize,
    coeffs: Vec<Complex64>,
    offsets: Vec<usize>,
    factors: Vec<(usize, u32)>,
}

impl NumericPoly {
    fn from_terms<'a, I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a [u32], Complex64)>,
    {
        let mut out = Self {
            nvars,
            coeffs: Vec::new(),
            offsets: vec![0],
            factors: Vec::new(),
        };
        for (alpha, c) in terms {
            out.coeffs.push(c);
            out.factors.extend(
                alpha
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| (j, e)),
            );
            out.offsets.push(out.factors.len());
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn monomial<T, F>(&self, k: usize, one: T, mut mul: F) -> T
    where
        F: FnMut(T, usize, u32) -> T,
    {
        let mut m = one;
        for &(j, e) in &self.factors[self.offsets[k]..self.offsets[k + 1]] {
            m = mul(m, j, e);
        }
        m
    }

    /// Evaluation at a real point with compensated accumulation of terms.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for (k, c) in self.coeffs.iter().enumerate() {
            let m = self.monomial(k, 1.0, |m, j, e| m * x[j].powi(e as i32));
            re.add(c.re * m);
            im.add(c.im * m);
        }
        Complex64::new(re.value(), im.value())
    }

    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for (k, c) in self.coeffs.iter().enumerate() {
            let m = self.monomial(k, Complex64::new(1.0, 0.0), |m, j, e| m * z[j].powu(e));
            let t = c * m;
            re.add(t.re);
            im.add(t.im);
        }
        Complex64::new(re.value(), im.value())
    }

    pub fn abs(&self, x: &[f64]) -> f64 {
        self.eval(x).norm()
    }

    pub fn derivative(&self, j: usize) -> Self {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut alpha = vec![0u32; self.nvars];
            for &(v, e) in &self.factors[self.offsets[k]..self.offsets[k + 1]] {
                alpha[v] = e;
            }
            if alpha[j] > 0 {
                let d = *c * alpha[j] as f64;
                alpha[j] -= 1;
                terms.push((alpha, d));
            }
        }
        Self::from_terms(self.nvars, terms.iter().map(|(a, c)| (a.as_slice(), *c)))
    }
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    Parser::new(text).parse(None)
}

/// Parses into a fixed number of variables; indices above `nvars` are an error.
pub fn parse_polynomial_in(text: &str, nvars: usize) -> Result<Polynomial> {
    Parser::new(text).parse(Some(nvars))
}

#[derive(Debug)]
enum Expr {
    Num(ComplexRational),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32, usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    max_var: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
            max_var: 0,
        }
    }

    fn parse(mut self, nvars: Option<usize>) -> Result<Polynomial> {
        self.skip_ws();
        if self.pos == self.src.len() {
            return Err(self.error("empty expression"));
        }
        let expr = self.expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.error("unexpected character"));
        }
        let n = match nvars {
            Some(n) if self.max_var > n => {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: format!("variable x{} exceeds {} variables", self.max_var, n),
                })
            }
            Some(n) => n,
            None => self.max_var.max(1),
        };
        lower(&expr, n)
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                b'-' => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                // Juxtaposition: "2x1", "3(x1+x2)".
                c if c.is_ascii_digit() || c == b'x' || c == b'i' || c == b'(' => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
            let value: u64 = digits.parse().unwrap_or(u64::MAX);
            if value > MAX_EXPONENT {
                return Err(Error::ExponentOverflow { pos: at, value });
            }
            return Ok(Expr::Pow(Box::new(base), value as u32, at));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Expr::Num(ComplexRational::i()))
            }
            Some(b'x') => {
                self.pos += 1;
                let at = self.pos;
                let digits = self.digits();
                let index: usize = digits
                    .parse()
                    .map_err(|_| Error::Syntax {
                        pos: at,
                        msg: "expected a variable index after 'x'".into(),
                    })?;
                if index == 0 {
                    return Err(Error::Syntax {
                        pos: at,
                        msg: "variables are numbered from x1".into(),
                    });
                }
                self.max_var = self.max_var.max(index);
                Ok(Expr::Var(index - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let int = self.digits();
                let mut value = BigRational::from_integer(int.parse::<BigInt>().unwrap());
                if self.src.get(self.pos) == Some(&b'.') {
                    self.pos += 1;
                    let frac = self.digits();
                    if !frac.is_empty() {
                        let num: BigInt = frac.parse().unwrap();
                        let den = num_traits::pow(BigInt::from(10), frac.len());
                        value += BigRational::new(num, den);
                    }
                }
                Ok(Expr::Num(ComplexRational::from_real(value)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn lower(e: &Expr, n: usize) -> Result<Polynomial> {
    Ok(match e {
        Expr::Num(c) => Polynomial::constant(n, c.clone()),
        Expr::Var(j) => Polynomial::var(n, *j),
        Expr::Add(a, b) => lower(a, n)?.add(&lower(b, n)?),
        Expr::Sub(a, b) => lower(a, n)?.sub(&lower(b, n)?),
        Expr::Mul(a, b) => lower(a, n)?.mul(&lower(b, n)?),
        Expr::Neg(a) => lower(a, n)?.neg(),
        Expr::Div(a, b, at) => {
            let d = lower(b, n)?;
            if !d.is_constant() || d.is_zero() {
                return Err(Error::Syntax {
                    pos: *at,
                    msg: "divisor must be a nonzero constant".into(),
                });
            }
            let c = d.coefficient(&vec![0; n]).inv().expect("nonzero");
            lower(a, n)?.scale(&c)
        }
        Expr::Pow(a, k, at) => {
            let base = lower(a, n)?;
            if base.max_exponent() as u64 * *k as u64 > MAX_EXPONENT {
                return Err(Error::ExponentOverflow {
                    pos: *at,
                    value: base.max_exponent() as u64 * *k as u64,
                });
            }
            base.pow(*k)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn c(n: i64) -> ComplexRational {
        ComplexRational::from_int(n)
    }

    #[test]
    fn parses_laplacian() {
        let p = parse_polynomial("x1^2 + x2^2").unwrap();
        assert_eq!(p.nvars(), 2);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn parses_heat_symbol() {
        let p = parse_polynomial("i*x1 - x2^2 - x3^2").unwrap();
        assert_eq!(p.nvars(), 3);
        assert_eq!(p.coefficient(&[1, 0, 0]), ComplexRational::i());
        assert_eq!(p.coefficient(&[0, 2, 0]), c(-1));
    }

    #[test]
    fn expands_binomial() {
        let p = parse_polynomial("(x1+x2)^2").unwrap();
        let expect = Polynomial::from_terms(
            2,
            [(vec![2, 0], c(1)), (vec![1, 1], c(2)), (vec![0, 2], c(1))],
        )
        .unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn rationals_decimals_and_juxtaposition() {
        let p = parse_polynomial("3/4 x1 + 0.25x1 + 2i").unwrap();
        assert_eq!(p.coefficient(&[1]), c(1));
        assert_eq!(p.coefficient(&[0]), &c(2) * &ComplexRational::i());
        let q = parse_polynomial("x1/(1+i)").unwrap();
        assert_eq!(
            q.coefficient(&[1]),
            ComplexRational::new(
                BigRational::new(1.into(), 2.into()),
                BigRational::new((-1).into(), 2.into())
            )
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_polynomial("x1 + * x2") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_polynomial("x0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("(x1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("x1/x2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial(""), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_polynomial_in("x3", 2),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn exponent_overflow() {
        assert!(matches!(
            parse_polynomial("x1^70000"),
            Err(Error::ExponentOverflow { pos: 3, value: 70000 })
        ));
        assert!(matches!(
            parse_polynomial("(x1^300)^300"),
            Err(Error::ExponentOverflow { .. })
        ));
        assert!(parse_polynomial("x1^65536").is_ok());
    }

    #[test]
    fn evaluation_examples() {
        let heat2 = parse_polynomial("i*x1 - x2^2").unwrap();
        let v = heat2.evaluate_real(&[1.0, 1.0]).unwrap();
        assert_eq!(v, Complex64::new(-1.0, 1.0));
        let lap = parse_polynomial("x1^2 + x2^2").unwrap();
        assert_eq!(lap.evaluate_real(&[3.0, 4.0]).unwrap().re, 25.0);
        let sq = parse_polynomial("(x1+x2)^2").unwrap();
        assert_eq!(sq.evaluate_real(&[1.0, -1.0]).unwrap(), Complex64::new(0.0, 0.0));
        let z = heat2
            .evaluate(&[Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0)])
            .unwrap();
        // i*i - (1+i)^2 = -1 - 2i
        assert_eq!(z, Complex64::new(-1.0, -2.0));
        assert!(matches!(
            heat2.evaluate_real(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn principal_part_examples() {
        let heat2 = parse_polynomial("i*x1 - x2^2").unwrap();
        assert_eq!(heat2.principal_part().unwrap(), parse_polynomial("-x2^2").unwrap().embed(2));
        let p = parse_polynomial("x1*x2 + x1").unwrap();
        assert_eq!(p.principal_part().unwrap(), parse_polynomial("x1*x2").unwrap());
        let lap3 = parse_polynomial("x1^2+x2^2+x3^2").unwrap();
        assert_eq!(lap3.principal_part().unwrap(), lap3);
        assert_eq!(Polynomial::zero(2).principal_part(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn augment_examples() {
        let heat2 = parse_polynomial("i*x1 - x2^2").unwrap();
        let plus = heat2.augment();
        assert_eq!(plus.nvars(), 3);
        for s in [-3.0, 0.0, 7.5] {
            assert_eq!(
                plus.evaluate_real(&[0.3, -1.2, s]).unwrap(),
                heat2.evaluate_real(&[0.3, -1.2]).unwrap()
            );
        }
        let z = Polynomial::zero(2).augment();
        assert!(z.is_zero());
        assert_eq!(z.nvars(), 3);
        assert_eq!(plus.drop_last_variable().unwrap(), heat2);
        assert!(heat2.drop_last_variable().is_none());
    }

    #[test]
    fn display_round_trips() {
        for text in ["i*x1 - x2^2 - x3^2", "(x1+x2)^2", "x1 + i*x2 + 3/2", "-x1^3*x2 + (1 + 2*i)*x2"] {
            let p = parse_polynomial(text).unwrap();
            let q = parse_polynomial_in(&p.to_string(), p.nvars()).unwrap();
            assert_eq!(p, q, "{text} -> {p}");
        }
    }

    #[test]
    fn compose_with_diagonal_line() {
        // x1^2 on span{(1,1)} gives y^2.
        let p = parse_polynomial_in("x1^2", 2).unwrap();
        let one = BigRational::one();
        let q = p.compose_linear(&[vec![one.clone(), one]]).unwrap();
        assert_eq!(q, parse_polynomial("x1^2").unwrap());
    }
}
