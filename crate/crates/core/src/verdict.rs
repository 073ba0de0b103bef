//! Rule engine: operator class + geometry reports → cited conclusions.
//!
//! Rule precedence, per property: R1 > R2 > R3/R4 > R6 > R5. The first rule
//! that settles a property decides it; every rule that applies is recorded
//! in the trace. A `No` is only ever produced by an equivalence rule backed by
//! a failing certificate that replays at half spacing.

use serde::{Deserialize, Serialize};

use crate::analysis::{
    dependence_subspace, is_elliptic_on, semi_elliptic_weights, zero_set_structure, EllipticReport, SemiEllipticStatus,
    SemiEllipticity, ZeroSetReport,
};
use crate::error::{Error, Result};
use crate::geometry::{
    min_principle_family, product_lift, replay, Domain, FamilyReport, GeomParams, MinPrincipleReport, ReplayReport,
};
use crate::poly::Polynomial;
use crate::sigma::{sigma_zero_subspace_exact, SigmaZeroSet};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActsAlong {
    pub subspace: Subspace,
    /// Minimum of `|P_m|` on the unit sphere of the subspace.
    pub c_lower: f64,
}

/// `P = ⟨N, x⟩ + c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstOrder {
    pub normal_re: Vec<f64>,
    pub normal_im: Vec<f64>,
    pub constant: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorClass {
    pub nvars: usize,
    pub degree: u32,
    pub elliptic: bool,
    pub ellipticity: EllipticReport,
    pub dependence_subspace: Subspace,
    /// Set when `P` is elliptic on its dependence subspace.
    pub acts_along: Option<ActsAlong>,
    pub semi_elliptic: Option<SemiEllipticity>,
    pub principal_zero_set: ZeroSetReport,
    pub first_order: Option<FirstOrder>,
    /// Exact `{x : σ_P(x) = 0}` when the symbol is in a settled class.
    pub sigma_zero_set: Option<SigmaZeroSet>,
}

impl OperatorClass {
    /// The principal zero set when it is a line.
    pub fn characteristic_line(&self) -> Option<Subspace> {
        self.principal_zero_set
            .as_subspace(self.nvars)
            .filter(|z| z.dim() == 1)
    }

    pub fn is_semi_elliptic(&self) -> bool {
        self.semi_elliptic
            .as_ref()
            .is_some_and(|s| s.status == SemiEllipticStatus::SemiElliptic)
    }
}

pub fn classify_operator(p: &Polynomial) -> Result<OperatorClass> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.nvars();
    let full = Subspace::full(n);
    let ellipticity = is_elliptic_on(p, &full)?;
    let dep = dependence_subspace(p);
    let acts_along = if dep.is_trivial() {
        None
    } else {
        let r = is_elliptic_on(p, &dep)?;
        r.elliptic.then_some(ActsAlong {
            subspace: dep.clone(),
            c_lower: r.c_lower,
        })
    };
    let semi_elliptic = if p.is_constant() {
        None
    } else {
        Some(semi_elliptic_weights(p)?)
    };
    let principal_zero_set = if p.is_constant() {
        ZeroSetReport::TrivialZeroSet
    } else {
        zero_set_structure(&p.principal_part()?)?
    };
    let first_order = (p.degree() == 1).then(|| {
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        for (alpha, c) in p.terms() {
            if let Some(j) = alpha.iter().position(|&e| e == 1) {
                let z = c.to_complex64();
                re[j] = z.re;
                im[j] = z.im;
            }
        }
        let c0 = p.coefficient(&vec![0; n]).to_complex64();
        FirstOrder {
            normal_re: re,
            normal_im: im,
            constant: [c0.re, c0.im],
        }
    });
    Ok(OperatorClass {
        nvars: n,
        degree: p.degree(),
        elliptic: ellipticity.elliptic,
        ellipticity,
        dependence_subspace: dep,
        acts_along,
        semi_elliptic,
        principal_zero_set,
        first_order,
        sigma_zero_set: sigma_zero_subspace_exact(p),
    })
}

/// Identifiers and statements of the rules.
pub mod rules {
    pub const R1: (&str, &str) = (
        "R1",
        "P elliptic: every open set X is P-convex for supports and for singular supports",
    );
    pub const R2: (&str, &str) = (
        "R2",
        "P acts along W and is elliptic on W: X is P-convex for supports iff it is P-convex for singular supports iff d_X satisfies the minimum principle in x+W for every x in X",
    );
    pub const R3: (&str, &str) = (
        "R3",
        "the real zeros of the principal part form a line spanned by N: X is P-convex for supports iff d_X satisfies the minimum principle in every characteristic hyperplane x+N^perp",
    );
    pub const R4: (&str, &str) = (
        "R4",
        "{x : sigma_P(x) = 0} = W^perp and sigma_P(W^perp) = 0: X is P-convex for singular supports iff d_X satisfies the minimum principle in x+W for every x in X",
    );
    pub const R5: (&str, &str) = (
        "R5",
        "the real zeros of the principal part lie in W^perp and d_X satisfies the minimum principle in x+W for every x: X is P-convex for supports",
    );
    pub const R6: (&str, &str) = (
        "R6",
        "X convex: X is P-convex for supports and for singular supports for every P",
    );
    pub const S: (&str, &str) = (
        "S",
        "P(D) is surjective on D'(X) iff X is P-convex for supports and for singular supports",
    );
    pub const A1: (&str, &str) = (
        "A1",
        "P acts along W and is elliptic on W, and P(D) is surjective on D'(X): P+(D) is surjective on D'(X x R)",
    );
    pub const A2: (&str, &str) = (
        "A2",
        "the real zeros of the principal part form a line and P(D) is surjective on D'(X): P+(D) is surjective on D'(X x R)",
    );
    pub const A3: (&str, &str) = (
        "A3",
        "P semi-elliptic with principal zero set Z: X x R is P+-convex for singular supports iff d_X satisfies the minimum principle in x+Z^perp for every x in X",
    );
    pub const AL: (&str, &str) = (
        "AL",
        "lifted evaluation: the rule table applied to P+ on X x R, with d_{X x R}(x, s) = d_X(x)",
    );
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleApplication {
    pub id: String,
    pub citation: String,
    /// What the rule concluded, or why it did not decide.
    pub outcome: String,
    /// Whether this application set the reported answer.
    pub decisive: bool,
}

/// A failing certificate behind a `No`, with its replay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRef {
    /// Stable id such as `R3/slice-0`.
    pub id: String,
    pub rule: String,
    /// `base` (X) or `lifted` (X × ℝ).
    pub domain: String,
    pub certificate: crate::geometry::Certificate,
    pub replay: ReplayReport,
}

/// A minimum-principle family commissioned by a rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryCheck {
    pub rule: String,
    pub domain: String,
    pub subspace: Subspace,
    pub family: FamilyReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AugmentedDetail {
    /// The rule table applied to `P⁺` on `X × ℝ`.
    pub lifted_supports: Answer,
    pub lifted_sing_supports: Answer,
    /// Singular supports of `X × ℝ` decided on `X` through `x + Z^⊥`
    /// (semi-elliptic symbols only).
    pub sing_supports_via_z_perp: Option<Answer>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub operator_class: OperatorClass,
    pub domain: String,
    pub supports: Answer,
    pub sing_supports: Answer,
    pub surjective: Answer,
    pub augmented_surjective: Answer,
    pub rules: Vec<RuleApplication>,
    pub certificates: Vec<CertificateRef>,
    /// Resolution qualifiers for answers resting on a finite grid.
    pub qualifiers: Vec<String>,
    pub checks: Vec<GeometryCheck>,
    pub augmented: Option<AugmentedDetail>,
}

/// Yes iff both are Yes, No iff either is No.
pub fn surjectivity_verdict(supports: Answer, sing_supports: Answer) -> Answer {
    match (supports, sing_supports) {
        (Answer::No, _) | (_, Answer::No) => Answer::No,
        (Answer::Yes, Answer::Yes) => Answer::Yes,
        _ => Answer::Unknown,
    }
}

/// Outcome of a geometric equivalence check.
struct Geo {
    answer: Answer,
    outcome: String,
    qualifier: Option<String>,
    certificate: Option<CertificateRef>,
}

struct Engine<'a> {
    domain: &'a Domain,
    label: &'static str,
    geom: &'a GeomParams,
    rules: Vec<RuleApplication>,
    certificates: Vec<CertificateRef>,
    qualifiers: Vec<String>,
    checks: Vec<GeometryCheck>,
}

impl<'a> Engine<'a> {
    fn record(&mut self, rule: (&str, &str), outcome: String, decisive: bool) {
        self.rules.push(RuleApplication {
            id: rule.0.into(),
            citation: rule.1.into(),
            outcome,
            decisive,
        });
    }

    /// Minimum principle in `x + w` over the configured family.
    fn check(&mut self, rule: &str, w: &Subspace) -> Result<Geo> {
        let family = min_principle_family(self.domain, w, self.geom)?;
        let geo = match &family.aggregate {
            MinPrincipleReport::HoldsUpTo {
                h,
                extent,
                slices_checked,
                ..
            } => Geo {
                answer: Answer::Yes,
                outcome: format!(
                    "minimum principle in x+{} holds on {slices_checked} slices",
                    w.describe()
                ),
                qualifier: Some(format!(
                    "{rule} on {}: minimum principle in x+{} verified at h = {h} on extent lo={:?} hi={:?} over {slices_checked} slices",
                    self.label,
                    w.describe(),
                    extent.lo,
                    extent.hi
                )),
                certificate: None,
            },
            MinPrincipleReport::FailsCertificate(c) => {
                let rep = replay(self.domain, c)?;
                if rep.valid {
                    Geo {
                        answer: Answer::No,
                        outcome: format!(
                            "minimum principle in x+{} fails on slice {} (interior min {:.6} < boundary min {:.6} - {})",
                            w.describe(),
                            c.slice_id,
                            c.interior_min,
                            c.boundary_min,
                            c.margin
                        ),
                        qualifier: None,
                        certificate: Some(CertificateRef {
                            id: format!("{rule}/{}/slice-{}", self.label, c.slice_id),
                            rule: rule.into(),
                            domain: self.label.into(),
                            certificate: c.clone(),
                            replay: rep,
                        }),
                    }
                } else {
                    Geo {
                        answer: Answer::Unknown,
                        outcome: format!(
                            "candidate failure on slice {} did not replay at half spacing",
                            c.slice_id
                        ),
                        qualifier: None,
                        certificate: None,
                    }
                }
            }
            MinPrincipleReport::Inconclusive { reason } => Geo {
                answer: Answer::Unknown,
                outcome: format!("geometry inconclusive: {reason}"),
                qualifier: None,
                certificate: None,
            },
        };
        self.checks.push(GeometryCheck {
            rule: rule.into(),
            domain: self.label.into(),
            subspace: w.clone(),
            family,
        });
        Ok(geo)
    }

    fn apply_geo(&mut self, rule: (&str, &str), geo: Geo, decisive: bool) -> Answer {
        if decisive && geo.answer != Answer::Unknown {
            if let Some(q) = geo.qualifier {
                self.qualifiers.push(q);
            }
            if let Some(c) = geo.certificate {
                self.certificates.push(c);
            }
        }
        self.record(rule, geo.outcome, decisive && geo.answer != Answer::Unknown);
        geo.answer
    }
}

struct Decision {
    supports: Answer,
    sing_supports: Answer,
}

fn settle(slot: &mut Answer, value: Answer) -> bool {
    if *slot == Answer::Unknown && value != Answer::Unknown {
        *slot = value;
        true
    } else {
        false
    }
}

fn run_rules(class: &OperatorClass, engine: &mut Engine) -> Result<Decision> {
    let n = class.nvars;
    let mut d = Decision {
        supports: Answer::Unknown,
        sing_supports: Answer::Unknown,
    };

    if class.elliptic {
        d.supports = Answer::Yes;
        d.sing_supports = Answer::Yes;
        engine.record(rules::R1, "elliptic: supports yes, singular supports yes".into(), true);
    }

    if d.supports == Answer::Unknown || d.sing_supports == Answer::Unknown {
        if let Some(aa) = &class.acts_along {
            let geo = engine.check("R2", &aa.subspace)?;
            let a = geo.answer;
            let decisive = a != Answer::Unknown;
            engine.apply_geo(rules::R2, geo, decisive);
            settle(&mut d.supports, a);
            settle(&mut d.sing_supports, a);
        }
    }

    if d.supports == Answer::Unknown {
        if let Some(z) = class.characteristic_line() {
            let hyper = z.complement();
            if hyper.is_trivial() {
                engine.record(rules::R3, "characteristic hyperplanes are points; nothing to check".into(), false);
            } else {
                let geo = engine.check("R3", &hyper)?;
                let a = geo.answer;
                engine.apply_geo(rules::R3, geo, true);
                settle(&mut d.supports, a);
            }
        }
    }

    if d.sing_supports == Answer::Unknown {
        if let Some(sz) = &class.sigma_zero_set {
            // The settled classes also give σ_P(W^⊥) = 0 on the whole zero set.
            if sz.rule == "augmented_semi_elliptic" {
                let w = sz.subspace.complement();
                if w.is_trivial() {
                    engine.record(rules::R4, "W is trivial; nothing to check".into(), false);
                } else {
                    let geo = engine.check("R4", &w)?;
                    let a = geo.answer;
                    engine.apply_geo(rules::R4, geo, true);
                    settle(&mut d.sing_supports, a);
                }
            }
        }
    }

    if engine.domain.is_convex() && (d.supports == Answer::Unknown || d.sing_supports == Answer::Unknown) {
        let s = settle(&mut d.supports, Answer::Yes);
        let ss = settle(&mut d.sing_supports, Answer::Yes);
        engine.record(
            rules::R6,
            format!("{} is convex by construction", engine.domain.describe()),
            s || ss,
        );
    }

    if d.supports == Answer::Unknown {
        if let Some(z) = class.principal_zero_set.as_subspace(n) {
            if z.dim() >= 2 && !z.is_full() {
                let w = z.complement();
                let geo = engine.check("R5", &w)?;
                if geo.answer == Answer::Yes {
                    engine.apply_geo(rules::R5, geo, true);
                    d.supports = Answer::Yes;
                } else {
                    // Sufficiency only: a failure here proves nothing.
                    let outcome = format!("{}; sufficient condition not met", geo.outcome);
                    engine.record(rules::R5, outcome, false);
                }
            }
        }
    }
    Ok(d)
}

fn new_engine<'a>(domain: &'a Domain, label: &'static str, geom: &'a GeomParams) -> Engine<'a> {
    Engine {
        domain,
        label,
        geom,
        rules: Vec::new(),
        certificates: Vec::new(),
        qualifiers: Vec::new(),
        checks: Vec::new(),
    }
}

fn check_dims(p: &Polynomial, x: &Domain) -> Result<()> {
    if p.nvars() != x.ambient() {
        return Err(Error::DimensionMismatch {
            expected: x.ambient(),
            got: p.nvars(),
        });
    }
    x.validate()
}

/// P-convexity of `X` for supports and singular supports, and surjectivity of `P(D)`.
pub fn convexity_verdict(p: &Polynomial, x: &Domain, geom: &GeomParams) -> Result<Verdict> {
    check_dims(p, x)?;
    geom.validate()?;
    let class = classify_operator(p)?;
    let mut engine = new_engine(x, "base", geom);
    let d = run_rules(&class, &mut engine)?;
    let surjective = surjectivity_verdict(d.supports, d.sing_supports);
    engine.record(rules::S, format!("surjective: {surjective:?}").to_lowercase(), surjective != Answer::Unknown);
    Ok(Verdict {
        operator_class: class,
        domain: x.describe(),
        supports: d.supports,
        sing_supports: d.sing_supports,
        surjective,
        augmented_surjective: Answer::Unknown,
        rules: engine.rules,
        certificates: engine.certificates,
        qualifiers: engine.qualifiers,
        checks: engine.checks,
        augmented: None,
    })
}

/// Adds the surjectivity of `P⁺(D)` on `X × ℝ` to [`convexity_verdict`].
pub fn augmented_verdict(p: &Polynomial, x: &Domain, geom: &GeomParams) -> Result<Verdict> {
    let mut v = convexity_verdict(p, x, geom)?;
    let class = v.operator_class.clone();

    let lifted_x = product_lift(x);
    let lifted_p = p.augment();
    let lifted_class = classify_operator(&lifted_p)?;
    let mut lifted = new_engine(&lifted_x, "lifted", geom);
    let ld = run_rules(&lifted_class, &mut lifted)?;
    let lifted_surj = surjectivity_verdict(ld.supports, ld.sing_supports);

    let mut base = new_engine(x, "base", geom);
    let mut via_z = None;
    if class.is_semi_elliptic() {
        if let Some(z) = class.principal_zero_set.as_subspace(class.nvars) {
            let w = z.complement();
            if !w.is_trivial() {
                let geo = base.check("A3", &w)?;
                let a = geo.answer;
                base.apply_geo(rules::A3, geo, true);
                via_z = Some(a);
            }
        }
    }

    let mut augmented = Answer::Unknown;
    if v.surjective == Answer::Yes && class.acts_along.is_some() {
        augmented = Answer::Yes;
        base.record(rules::A1, "P(D) surjective and P elliptic along its dependence subspace".into(), true);
    } else if v.surjective == Answer::Yes && class.characteristic_line().is_some() {
        augmented = Answer::Yes;
        base.record(rules::A2, "P(D) surjective and principal zero set is a line".into(), true);
    }
    let lifted_decisive = augmented == Answer::Unknown && lifted_surj != Answer::Unknown;
    if lifted_decisive {
        augmented = lifted_surj;
    }
    if augmented == Answer::Unknown && via_z == Some(Answer::No) {
        augmented = Answer::No;
        if let Some(r) = base.rules.iter_mut().find(|r| r.id == "A3") {
            r.decisive = true;
        }
    }

    for r in lifted.rules {
        v.rules.push(RuleApplication {
            id: format!("AL/{}", r.id),
            citation: format!("{}; {}", rules::AL.1, r.citation),
            outcome: r.outcome,
            decisive: lifted_decisive && r.decisive,
        });
    }
    v.rules.extend(base.rules);
    let keep_lifted_evidence = lifted_decisive || augmented == Answer::Unknown;
    if keep_lifted_evidence {
        v.certificates.extend(lifted.certificates);
        v.qualifiers.extend(lifted.qualifiers);
    }
    let a3_decides_no = augmented == Answer::No && !lifted_decisive;
    if a3_decides_no || via_z.is_some() {
        v.certificates.extend(base.certificates);
        v.qualifiers.extend(base.qualifiers);
    }
    if augmented == Answer::No && v.certificates.is_empty() {
        augmented = Answer::Unknown;
    }
    v.checks.extend(lifted.checks);
    v.checks.extend(base.checks);
    v.augmented_surjective = augmented;
    v.augmented = Some(AugmentedDetail {
        lifted_supports: ld.supports,
        lifted_sing_supports: ld.sing_supports,
        sing_supports_via_z_perp: via_z,
    });
    Ok(v)
}
