//! Symbolic and numeric analysis of symbols: dependence subspace, restriction,
//! ellipticity on a subspace, semi-ellipticity, and the real zero set of a
//! homogeneous polynomial.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{MultiIndex, NumericPoly, Polynomial};
use crate::sphere;
use crate::subspace::Subspace;

/// Relative threshold below which a sphere minimum counts as a zero.
pub const EPS_REL: f64 = 1e-7;

/// `ε_ell` for a polynomial: `1e-7` times its largest coefficient modulus.
pub fn epsilon_for(p: &Polynomial) -> f64 {
    EPS_REL * p.coefficient_scale().max(f64::MIN_POSITIVE)
}

/// Smallest `W` such that `P(x + ξ) = P(x)` for every `ξ ⟂ W`.
///
/// `D_v P ≡ 0` iff `v` is orthogonal to every vector `(∂_1 c_α, …, ∂_n c_α)`
/// collecting, for a fixed monomial, the real or imaginary parts of the
/// coefficients of the partial derivatives. `W` is the span of those vectors.
pub fn dependence_subspace(p: &Polynomial) -> Subspace {
    let n = p.nvars();
    let derivs: Vec<Polynomial> = (0..n).map(|j| p.derivative(j)).collect();
    let monomials: BTreeSet<MultiIndex> = derivs
        .iter()
        .flat_map(|d| d.terms().map(|(a, _)| a.clone()))
        .collect();
    let mut vectors = Vec::with_capacity(2 * monomials.len());
    for alpha in &monomials {
        let coeffs: Vec<_> = derivs.iter().map(|d| d.coefficient(alpha)).collect();
        let re: Vec<BigRational> = coeffs.iter().map(|c| c.re.clone()).collect();
        let im: Vec<BigRational> = coeffs.iter().map(|c| c.im.clone()).collect();
        for v in [re, im] {
            if v.iter().any(|x| !x.is_zero()) {
                vectors.push(v);
            }
        }
    }
    Subspace::from_rational(n, vectors).expect("rational span is well formed")
}

fn check_ambient(p: &Polynomial, v: &Subspace) -> Result<()> {
    if p.nvars() != v.ambient() {
        return Err(Error::DimensionMismatch {
            expected: p.nvars(),
            got: v.ambient(),
        });
    }
    Ok(())
}

/// Whether `P` restricted to `V` is the zero polynomial.
///
/// Decided exactly on the rational spanning set of `V`; if that restriction is
/// nonzero, the restriction along the orthonormal float basis is accepted as
/// zero when all its coefficients are below `1e-12` times the coefficient scale.
pub fn vanishes_on_subspace(p: &Polynomial, v: &Subspace) -> Result<bool> {
    check_ambient(p, v)?;
    if v.is_trivial() {
        return Ok(p.coefficient(&vec![0; p.nvars()]).is_zero());
    }
    let exact = p.compose_linear(v.rational_span())?;
    if exact.is_zero() {
        return Ok(true);
    }
    let float = restrict_to_subspace(p, v)?;
    let tol = 1e-12 * p.coefficient_scale().max(f64::MIN_POSITIVE);
    Ok(float.coefficient_scale() <= tol)
}

/// `y ↦ P(Σ y_j b_j)` for the orthonormal basis `b_j` of `W`, with the float
/// basis entries taken as exact rationals.
pub fn restrict_to_subspace(p: &Polynomial, w: &Subspace) -> Result<Polynomial> {
    check_ambient(p, w)?;
    if w.is_trivial() {
        return Err(Error::TrivialSubspace);
    }
    let columns: Vec<Vec<BigRational>> = w.basis().iter().map(|b| linalg::from_f64(b)).collect();
    p.compose_linear(&columns)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticStatus {
    Elliptic,
    NotElliptic,
    /// Minimum inside the refusal band `[ε, 10ε)`.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticReport {
    pub status: EllipticStatus,
    pub elliptic: bool,
    /// Minimum of `|P_m|` over the unit sphere of `W`.
    pub c_lower: f64,
    /// Unit vector of the ambient space where `|P_m|` is smallest; reported
    /// when not elliptic.
    pub witness: Option<Vec<f64>>,
    pub epsilon: f64,
    pub samples: usize,
}

/// Ellipticity of `P` as a polynomial on `W`: the principal part restricted to
/// `W` has no zero on the unit sphere of `W`.
pub fn is_elliptic_on(p: &Polynomial, w: &Subspace) -> Result<EllipticReport> {
    check_ambient(p, w)?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let dep = dependence_subspace(p);
    if !(w.includes(&dep) || w.contains_subspace(&dep, 1e-9)) {
        return Err(Error::NotActingAlong);
    }
    let pm = p.principal_part()?;
    if pm.is_constant() {
        let c = pm.coefficient_scale();
        return Ok(EllipticReport {
            status: EllipticStatus::Elliptic,
            elliptic: true,
            c_lower: c,
            witness: None,
            epsilon: EPS_REL * c,
            samples: 0,
        });
    }
    let restricted = restrict_to_subspace(&pm, w)?;
    let eps = epsilon_for(&restricted);
    let num = restricted.to_numeric();
    let m = sphere::minimize(w.dim(), &|u: &[f64]| num.abs(u));
    let witness = w.from_coords(&m.argmin);
    let status = band(m.value, eps);
    Ok(EllipticReport {
        status,
        elliptic: status == EllipticStatus::Elliptic,
        c_lower: m.value,
        witness: (status != EllipticStatus::Elliptic).then_some(witness),
        epsilon: eps,
        samples: m.samples,
    })
}

fn band(min: f64, eps: f64) -> EllipticStatus {
    if min >= 10.0 * eps {
        EllipticStatus::Elliptic
    } else if min < eps {
        EllipticStatus::NotElliptic
    } else {
        EllipticStatus::Unknown
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemiEllipticStatus {
    SemiElliptic,
    /// The canonical weights fail: a term exceeds weight 1 or the weighted
    /// principal part has a nontrivial real zero.
    Refused,
    /// Weighted sphere minimum inside the refusal band.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiEllipticity {
    pub status: SemiEllipticStatus,
    /// The accepted weights `m_j`; present only when semi-elliptic.
    pub weights: Option<Vec<u32>>,
    /// Candidate weights `m_j = deg_{x_j} P` (1 for absent variables).
    pub candidate: Vec<u32>,
    /// Terms with `|α:𝐦| = 1`.
    pub weighted_principal: Option<Polynomial>,
    /// Point of the weighted unit sphere `Σ ξ_j^{2L/m_j} = 1` where the
    /// weighted principal part is smallest; reported on refusal.
    pub witness: Option<Vec<f64>>,
    pub min_value: Option<f64>,
    pub reason: Option<String>,
}

/// Tests semi-ellipticity for the canonical weights `m_j = deg_{x_j} P`.
pub fn semi_elliptic_weights(p: &Polynomial) -> Result<SemiEllipticity> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let n = p.nvars();
    let m: Vec<u32> = (0..n).map(|j| p.partial_degree(j).max(1)).collect();
    let l = m.iter().fold(1u64, |acc, &x| acc.lcm(&(x as u64)));
    let weight = |a: &MultiIndex| -> u64 {
        a.iter()
            .zip(&m)
            .map(|(&e, &mj)| e as u64 * (l / mj as u64))
            .sum()
    };
    let mut refused = SemiEllipticity {
        status: SemiEllipticStatus::Refused,
        weights: None,
        candidate: m.clone(),
        weighted_principal: None,
        witness: None,
        min_value: None,
        reason: None,
    };
    if let Some((a, _)) = p.terms().find(|(a, _)| weight(a) > l) {
        refused.reason = Some(format!("term with exponents {a:?} has weight above 1"));
        return Ok(refused);
    }
    let principal = Polynomial::from_terms(
        n,
        p.terms()
            .filter(|(a, _)| weight(a) == l)
            .map(|(a, c)| (a.clone(), c.clone())),
    )?;
    let eps = epsilon_for(&principal);
    let num = principal.to_numeric();
    let exps: Vec<f64> = m.iter().map(|&mj| mj as f64 / l as f64).collect();
    let phi = |u: &[f64]| -> Vec<f64> {
        u.iter()
            .zip(&exps)
            .map(|(&x, &e)| x.signum() * x.abs().powf(e))
            .collect()
    };
    let f = |u: &[f64]| num.abs(&phi(u));
    let best = sphere::minimize(n, &f);
    let status = band(best.value, eps);
    refused.weighted_principal = Some(principal);
    refused.min_value = Some(best.value);
    match status {
        EllipticStatus::Elliptic => Ok(SemiEllipticity {
            status: SemiEllipticStatus::SemiElliptic,
            weights: Some(m),
            ..refused
        }),
        EllipticStatus::NotElliptic => {
            refused.witness = Some(phi(&best.argmin));
            refused.reason = Some("weighted principal part has a real zero".into());
            Ok(refused)
        }
        EllipticStatus::Unknown => {
            refused.status = SemiEllipticStatus::Undecided;
            refused.witness = Some(phi(&best.argmin));
            refused.reason = Some("weighted sphere minimum inside the refusal band".into());
            Ok(refused)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroSetReport {
    SubspaceZeroSet {
        subspace: Subspace,
    },
    /// Two real zeros whose span contains `direction`, where `|Q| = value`.
    NotSubspace {
        zero_a: Vec<f64>,
        zero_b: Vec<f64>,
        direction: Vec<f64>,
        value: f64,
    },
    TrivialZeroSet,
    Unknown {
        reason: String,
    },
}

impl ZeroSetReport {
    /// The zero set as a subspace (trivial for `TrivialZeroSet`).
    pub fn as_subspace(&self, ambient: usize) -> Option<Subspace> {
        match self {
            Self::SubspaceZeroSet { subspace } => Some(subspace.clone()),
            Self::TrivialZeroSet => Some(Subspace::trivial(ambient)),
            _ => None,
        }
    }
}

/// Nearest fraction with denominator at most 12 within `2e-3`.
fn snap(x: f64) -> Option<BigRational> {
    for den in 1..=12i64 {
        let num = (x * den as f64).round();
        if (x - num / den as f64).abs() <= 2e-3 {
            return Some(BigRational::new((num as i64).into(), den.into()));
        }
    }
    None
}

/// Float reduced row echelon form of the rows of `m` (partial pivoting).
fn float_rref(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let p = (r..rows.len())
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .unwrap();
        if rows[p][col].abs() < 1e-8 {
            continue;
        }
        rows.swap(r, p);
        let piv = rows[r][col];
        for x in rows[r].iter_mut() {
            *x /= piv;
        }
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][col];
                for j in 0..ncols {
                    rows[i][j] -= f * rows[r][j];
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Whether `num` vanishes (within `tol`) at 200 seeded random points of `c`.
fn vanishes_at_samples(num: &NumericPoly, c: &Subspace, tol: f64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
    (0..200).all(|_| {
        let y: Vec<f64> = (0..c.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = c.from_coords(&y);
        num.abs(&x) <= tol
    })
}

/// Structure of the real zero set `{x : Q(x) = 0}` of a homogeneous `Q`.
pub fn zero_set_structure(q: &Polynomial) -> Result<ZeroSetReport> {
    if !q.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = q.nvars();
    if q.is_zero() {
        return Ok(ZeroSetReport::SubspaceZeroSet {
            subspace: Subspace::full(n),
        });
    }
    if q.is_constant() {
        return Ok(ZeroSetReport::TrivialZeroSet);
    }
    // Q depends only on the W-component, so its zero set is Z_R ⊕ W^⊥ where
    // Z_R is the zero set of the restriction R to W.
    let w = dependence_subspace(q);
    let w_perp = w.complement();
    let r = restrict_to_subspace(q, &w)?;
    let k = w.dim();
    let eps = epsilon_for(&r);
    let num = r.to_numeric();
    let f = |u: &[f64]| num.abs(u);
    let sampled = sphere::sample(k, &f);
    let step = 2.0 * sphere::spacing_for(k);
    let starts = sampled.spread_starts(64, 0.05);
    let mut refined: Vec<(Vec<f64>, f64)> = starts
        .iter()
        .map(|&i| sphere::refine(&f, sampled.point(i), step))
        .collect();
    let min = refined.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    if min >= 10.0 * eps {
        return Ok(if w_perp.is_trivial() {
            ZeroSetReport::TrivialZeroSet
        } else {
            ZeroSetReport::SubspaceZeroSet { subspace: w_perp }
        });
    }
    if min >= eps {
        return Ok(ZeroSetReport::Unknown {
            reason: format!("sphere minimum {min:.3e} inside the refusal band"),
        });
    }
    refined.retain(|(_, v)| *v < eps);
    let mut zeros: Vec<Vec<f64>> = refined
        .into_iter()
        .map(|(mut u, _)| {
            if let Some(&lead) = u.iter().find(|x| x.abs() > 1e-9) {
                if lead < 0.0 {
                    u.iter_mut().for_each(|x| *x = -*x);
                }
            }
            u
        })
        .collect();
    zeros.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    if let Some(candidate) = fit_zero_subspace(&r, &num, &zeros, eps)? {
        let lifted: Vec<Vec<f64>> = candidate.basis().iter().map(|y| w.from_coords(y)).collect();
        let zc = Subspace::from_vectors(n, &lifted)?.sum(&w_perp)?;
        return Ok(ZeroSetReport::SubspaceZeroSet { subspace: zc });
    }

    for (ia, za) in zeros.iter().enumerate() {
        for zb in &zeros[ia + 1..] {
            for s in [1.0, -1.0] {
                let v = linalg::add(za, &linalg::scaled(zb, s));
                let nv = linalg::norm(&v);
                if nv < 1e-6 {
                    continue;
                }
                let v = linalg::scaled(&v, 1.0 / nv);
                let value = num.abs(&v);
                if value >= 10.0 * eps {
                    return Ok(ZeroSetReport::NotSubspace {
                        zero_a: w.from_coords(za),
                        zero_b: w.from_coords(zb),
                        direction: w.from_coords(&v),
                        value,
                    });
                }
            }
        }
    }
    Ok(ZeroSetReport::Unknown {
        reason: "near-zero directions neither form a confirmed subspace nor yield a witness".into(),
    })
}

/// Fits a subspace to the sampled zeros of `r` and confirms it.
fn fit_zero_subspace(
    r: &Polynomial,
    num: &NumericPoly,
    zeros: &[Vec<f64>],
    eps: f64,
) -> Result<Option<Subspace>> {
    let k = r.nvars();
    if zeros.is_empty() {
        return Ok(None);
    }
    let mat = DMatrix::from_fn(zeros.len(), k, |i, j| zeros[i][j]);
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.max();
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let rank = order
        .iter()
        .filter(|&&i| svd.singular_values[i] > 1e-2 * smax)
        .count();
    if rank >= k {
        return Ok(None);
    }
    let rows: Vec<Vec<f64>> = order[..rank]
        .iter()
        .map(|&i| v_t.row(i).iter().copied().collect())
        .collect();
    let float_c = Subspace::from_vectors(k, &rows)?;

    let snapped: Option<Vec<Vec<BigRational>>> = float_rref(rows)
        .iter()
        .map(|row| row.iter().map(|&x| snap(x)).collect())
        .collect();
    let exact_c = snapped.and_then(|rows| Subspace::from_rational(k, rows).ok());
    let c = match exact_c {
        Some(c) if c.dim() == rank && vanishes_on_subspace(r, &c)? => c,
        _ => {
            let tol = 1e-9 * r.coefficient_scale();
            if !vanishes_at_samples(num, &float_c, tol) {
                return Ok(None);
            }
            float_c
        }
    };
    if zeros.iter().any(|z| !c.contains(z, 1e-3)) {
        return Ok(None);
    }
    let comp = c.complement();
    if comp.is_trivial() {
        return Ok(None);
    }
    let on_comp = restrict_to_subspace(r, &comp)?.to_numeric();
    let m = sphere::minimize(comp.dim(), &|u: &[f64]| on_comp.abs(u));
    if m.value < 10.0 * eps {
        return Ok(None);
    }
    Ok(Some(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, parse_polynomial_in};

    fn poly(s: &str, n: usize) -> Polynomial {
        parse_polynomial_in(s, n).unwrap()
    }

    #[test]
    fn vanishing_on_a_subspace_does_not_give_invariance() {
        // x1*x2 is zero on span{e1} yet still depends on x1.
        let p = poly("x1*x2", 2);
        let e1 = Subspace::coordinate(2, &[0]);
        assert!(vanishes_on_subspace(&p, &e1).unwrap());
        assert!(!dependence_subspace(&p).complement().includes(&e1));
        // Composing with a map whose kernel is the subspace does give it.
        let q = poly("x2^3 - x2", 2);
        assert!(dependence_subspace(&q).complement().includes(&e1));
    }

    #[test]
    fn dependence_examples() {
        assert_eq!(
            dependence_subspace(&poly("x1^2+x2^2", 3)),
            Subspace::coordinate(3, &[0, 1])
        );
        let d = dependence_subspace(&poly("(x1+x2)^2", 2));
        assert_eq!(d, Subspace::from_vectors(2, &[vec![1.0, 1.0]]).unwrap());
        assert_eq!(dependence_subspace(&poly("i*x1 - x2^2", 2)), Subspace::full(2));
        assert!(dependence_subspace(&poly("5", 2)).is_trivial());
    }

    #[test]
    fn vanishing_examples() {
        let e1 = Subspace::coordinate(2, &[0]);
        assert!(vanishes_on_subspace(&poly("-x2^2", 2), &e1).unwrap());
        assert!(!vanishes_on_subspace(&poly("x1^2+x2^2", 2), &e1).unwrap());
        let s = 0.5f64.sqrt();
        let anti = Subspace::from_vectors(2, &[vec![s, -s]]).unwrap();
        assert!(vanishes_on_subspace(&poly("(x1+x2)^2", 2), &anti).unwrap());
    }

    #[test]
    fn restriction_examples() {
        let r = restrict_to_subspace(&poly("x1^2+x2^2", 3), &Subspace::coordinate(3, &[0, 1])).unwrap();
        assert_eq!(r, parse_polynomial("x1^2+x2^2").unwrap());
        let diag = Subspace::from_vectors(2, &[vec![1.0, 1.0]]).unwrap();
        let r = restrict_to_subspace(&poly("x1^2", 2), &diag).unwrap();
        assert!((r.evaluate_real(&[1.0]).unwrap().re - 0.5).abs() < 1e-15);
        let r = restrict_to_subspace(&poly("5", 2), &diag).unwrap();
        assert_eq!(r, parse_polynomial("5").unwrap());
        assert_eq!(
            restrict_to_subspace(&poly("x1", 2), &Subspace::trivial(2)),
            Err(Error::TrivialSubspace)
        );
    }

    #[test]
    fn ellipticity_examples() {
        let lap = is_elliptic_on(&poly("x1^2+x2^2", 2), &Subspace::full(2)).unwrap();
        assert!(lap.elliptic);
        assert!((lap.c_lower - 1.0).abs() < 1e-9);
        let wave = is_elliptic_on(&poly("x1^2-x2^2", 2), &Subspace::full(2)).unwrap();
        assert_eq!(wave.status, EllipticStatus::NotElliptic);
        let w = wave.witness.unwrap();
        assert!((w[0].abs() - 0.5f64.sqrt()).abs() < 1e-6);
        assert!((w[1].abs() - 0.5f64.sqrt()).abs() < 1e-6);
        let sub = is_elliptic_on(&poly("x1^2+x2^2", 3), &Subspace::coordinate(3, &[0, 1])).unwrap();
        assert!(sub.elliptic);
        assert_eq!(
            is_elliptic_on(&poly("x1^2+x2^2", 3), &Subspace::coordinate(3, &[0])),
            Err(Error::NotActingAlong)
        );
    }

    #[test]
    fn semi_ellipticity_examples() {
        let heat = semi_elliptic_weights(&poly("i*x1 - x2^2 - x3^2", 3)).unwrap();
        assert_eq!(heat.status, SemiEllipticStatus::SemiElliptic);
        assert_eq!(heat.weights, Some(vec![1, 2, 2]));
        let lap = semi_elliptic_weights(&poly("x1^2+x2^2", 2)).unwrap();
        assert_eq!(lap.weights, Some(vec![2, 2]));
        let wave = semi_elliptic_weights(&poly("x1^2-x2^2", 2)).unwrap();
        assert_eq!(wave.status, SemiEllipticStatus::Refused);
        let w = wave.witness.unwrap();
        assert!((w[0].abs() - w[1].abs()).abs() < 1e-6);
        assert!(wave.min_value.unwrap() < 1e-7);
        assert_eq!(
            semi_elliptic_weights(&poly("3", 2)),
            Err(Error::ConstantPolynomial)
        );
        // Candidate weights (1, 1) give x1*x2 weight 2.
        let mixed = semi_elliptic_weights(&poly("x1*x2 + x1", 2)).unwrap();
        assert_eq!(mixed.status, SemiEllipticStatus::Refused);
    }

    #[test]
    fn zero_set_examples() {
        assert_eq!(
            zero_set_structure(&poly("-x2^2", 2)).unwrap(),
            ZeroSetReport::SubspaceZeroSet {
                subspace: Subspace::coordinate(2, &[0])
            }
        );
        assert_eq!(
            zero_set_structure(&poly("x1^2+x2^2+x3^2", 3)).unwrap(),
            ZeroSetReport::TrivialZeroSet
        );
        match zero_set_structure(&poly("x1^2-x2^2", 2)).unwrap() {
            ZeroSetReport::NotSubspace {
                zero_a,
                zero_b,
                direction,
                value,
            } => {
                assert!((zero_a[0].abs() - zero_a[1].abs()).abs() < 1e-6);
                assert!((zero_b[0].abs() - zero_b[1].abs()).abs() < 1e-6);
                assert!((value - 1.0).abs() < 1e-6);
                assert!((direction[0].abs() - 1.0).abs() < 1e-6 || (direction[1].abs() - 1.0).abs() < 1e-6);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            zero_set_structure(&poly("x1 + 1", 1)),
            Err(Error::NotHomogeneous)
        );
    }

    #[test]
    fn zero_set_inside_dependence_subspace() {
        // Depends on every variable, vanishes exactly on span{(1,1,0)}.
        let q = poly("(x1-x2)^2*(x1^2+x2^2+x3^2) + x3^4", 3);
        match zero_set_structure(&q).unwrap() {
            ZeroSetReport::SubspaceZeroSet { subspace } => {
                assert_eq!(subspace, Subspace::from_vectors(3, &[vec![1.0, 1.0, 0.0]]).unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
