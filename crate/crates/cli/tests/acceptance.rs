//! Acceptance suite: one pass/fail line per criterion, non-zero exit if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pconvex::analysis::{dependence_subspace, semi_elliptic_weights, SemiEllipticStatus};
use pconvex::geometry::{
    build_slice, min_principle_slice, product_lift, Domain, Extent, MinPrincipleReport,
};
use pconvex::sigma::{p_tilde_sub, p_tilde_sub_with, sigma0_estimate, sigma_estimate, sigma_zero_subspace_exact, SigmaParams};
use pconvex::verdict::{Answer, Verdict};
use pconvex::{parse_polynomial_in, presets, Polynomial, Subspace};
use pconvex_cli::report::{CommandResult, Report};

const SEED: u64 = 20_240_601;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

/// Runs the binary and parses its report from stdout.
fn cli(args: &[&str]) -> Result<Report, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pconvex"))
        .args(args)
        .arg("--canonical")
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| format!("report does not parse: {e}"))
}

fn verdict_of(r: Report) -> Result<Verdict, String> {
    match r.result {
        CommandResult::Verdict(v) | CommandResult::Augmented(v) => Ok(*v),
        other => Err(format!("unexpected result {other:?}")),
    }
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn c1_heat_counterexample() -> Check {
    let h = 0.01;
    let v = verdict_of(cli(&[
        "verdict",
        "--op",
        "heat2",
        "--domain",
        &config("punctured-plane.toml"),
        "--h",
        "0.01",
        "--extent",
        "-2:2",
    ])?)?;
    ensure(v.supports == Answer::No, || format!("supports = {:?}", v.supports))?;
    let c = &v.certificates.first().ok_or("no certificate")?.certificate;
    // Time-first coordinates: the slice {x2 = 0.5} of the time-last form is {x1 = 0.5} here.
    ensure((c.origin[0] - 0.5).abs() < 1e-12, || format!("slice origin {:?}", c.origin))?;
    ensure(c.basis.len() == 1 && (c.basis[0][1].abs() - 1.0).abs() < 1e-12, || format!("basis {:?}", c.basis))?;
    ensure((c.interior_min - 0.5).abs() <= 2.0 * h, || format!("interior_min {}", c.interior_min))?;
    ensure((c.boundary_min - 1.25f64.sqrt()).abs() <= 2.0 * h, || format!("boundary_min {}", c.boundary_min))?;
    ensure(v.certificates[0].replay.valid, || "certificate does not replay".into())?;
    Ok(format!("interior_min {:.4}, boundary_min {:.4}", c.interior_min, c.boundary_min))
}

fn c2_subspace_elliptic_dichotomy() -> Check {
    let h = 0.05;
    let v = verdict_of(cli(&["verdict", "--op", "laplace3-sub", "--domain", &config("punctured-space.toml")])?)?;
    ensure(v.supports == Answer::No && v.sing_supports == Answer::No, || {
        format!("punctured space: {:?}/{:?}", v.supports, v.sing_supports)
    })?;
    let check = v.checks.first().ok_or("no geometry check")?;
    for x3 in [0.25f64, 0.5, 1.0] {
        for sign in [1.0, -1.0] {
            let slice = check
                .family
                .per_slice
                .iter()
                .find(|s| (s.origin[2] - sign * x3).abs() < 1e-12)
                .ok_or_else(|| format!("no slice at x3 = {}", sign * x3))?;
            let MinPrincipleReport::FailsCertificate(c) = &slice.report else {
                return Err(format!("slice at x3 = {} does not fail: {:?}", sign * x3, slice.report.status()));
            };
            ensure((c.interior_min - x3).abs() <= 2.0 * h, || format!("x3 = {x3}: interior {}", c.interior_min))?;
        }
    }
    let v = verdict_of(cli(&["verdict", "--op", "laplace3-sub", "--domain", &config("axis-complement.toml")])?)?;
    ensure(v.supports == Answer::Yes && v.sing_supports == Answer::Yes, || {
        format!("axis complement: {:?}/{:?}", v.supports, v.sing_supports)
    })?;
    let check = v.checks.first().ok_or("no geometry check")?;
    match &check.family.aggregate {
        MinPrincipleReport::HoldsUpTo { h: hh, slices_checked, .. } if *hh == h && *slices_checked == 20 => {}
        other => return Err(format!("axis complement aggregate {other:?}")),
    }
    Ok("No/No on the punctured space, Yes/Yes on the axis complement".into())
}

fn c3_elliptic_zeros_separation() -> Check {
    let p = presets::laplace_sub(3);
    let params = SigmaParams::default();
    let e3 = sigma_estimate(&p, &Subspace::coordinate(3, &[2]), &params).map_err(|e| e.to_string())?;
    let e1 = sigma_estimate(&p, &Subspace::coordinate(3, &[0]), &params).map_err(|e| e.to_string())?;
    ensure(e3.value <= 0.05, || format!("sigma(e3) = {}", e3.value))?;
    ensure(e1.value >= 0.2, || format!("sigma(e1) = {}", e1.value))?;
    let z = sigma_zero_subspace_exact(&p).ok_or("no exact zero set")?;
    ensure(z.subspace == Subspace::coordinate(3, &[2]), || format!("zero set {}", z.subspace.describe()))?;
    Ok(format!("sigma(e3) = {:.4}, sigma(e1) = {:.4}", e3.value, e1.value))
}

fn random_line(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() > 0.01 {
            return v;
        }
    }
}

fn c4_augmented_sigma_consistency() -> Check {
    let params = SigmaParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for (name, p) in [("heat2", presets::heat(2)), ("laplace2", presets::laplace(2))] {
        let plus = p.augment();
        for _ in 0..10 {
            let u = random_line(&mut rng, 2);
            let v = Subspace::from_vectors(2, &[u]).map_err(|e| e.to_string())?;
            let s0 = sigma0_estimate(&p, &v, &params).map_err(|e| e.to_string())?.value;
            let flat = sigma_estimate(&plus, &v.lift(), &params).map_err(|e| e.to_string())?.value;
            let thick = sigma_estimate(&plus, &v.lift_with_line(), &params).map_err(|e| e.to_string())?.value;
            worst = worst.max((flat - s0).abs()).max((thick - s0).abs());
            ensure((flat - s0).abs() <= 0.1, || format!("{name} {}: V'x0 {flat} vs sigma0 {s0}", v.describe()))?;
            ensure((thick - s0).abs() <= 0.1, || format!("{name} {}: V'xR {thick} vs sigma0 {s0}", v.describe()))?;
        }
    }
    Ok(format!("largest gap {worst:.4}"))
}

fn c5_semi_ellipticity() -> Check {
    for n in 2..=4 {
        let s = semi_elliptic_weights(&presets::heat(n)).map_err(|e| e.to_string())?;
        let mut m = vec![2u32; n];
        m[0] = 1;
        ensure(s.status == SemiEllipticStatus::SemiElliptic && s.weights == Some(m.clone()), || {
            format!("heat{n}: {:?} {:?}", s.status, s.weights)
        })?;
    }
    let w = semi_elliptic_weights(&presets::wave(2)).map_err(|e| e.to_string())?;
    ensure(w.status == SemiEllipticStatus::Refused, || format!("wave2 status {:?}", w.status))?;
    let witness = w.witness.ok_or("wave2 refusal has no witness")?;
    let q = w.weighted_principal.ok_or("wave2 refusal has no weighted principal part")?;
    let value = q.evaluate_real(&witness).map_err(|e| e.to_string())?.norm();
    ensure(value < 1e-7, || format!("weighted principal part at witness = {value}"))?;
    Ok(format!("wave2 witness value {value:.1e}"))
}

/// `Q(Lx)` with `Q` random of degree at most 4, `Q(0) = 0` and `ker L = V`,
/// so the result vanishes on `V`.
fn invariant_polynomial(rng: &mut ChaCha8Rng) -> Result<(Polynomial, Subspace), String> {
    let n = rng.gen_range(2..=4usize);
    let k = rng.gen_range(1..n);
    let v = loop {
        let vecs: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-3..=3) as f64).collect()).collect();
        if let Ok(s) = Subspace::from_vectors(n, &vecs) {
            if s.dim() == k {
                break s;
            }
        }
    };
    let rows = v.complement().rational_span().to_vec();
    let m = rows.len();
    let mut terms = Vec::new();
    let nterms = rng.gen_range(2..=6);
    for _ in 0..nterms {
        let deg = rng.gen_range(1..=4u32);
        let mut alpha = vec![0u32; m];
        for _ in 0..deg {
            alpha[rng.gen_range(0..m)] += 1;
        }
        let c: i32 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let mono: Vec<String> = alpha.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| format!("x{}^{e}", i + 1)).collect();
        terms.push(format!("{c}*{}", mono.join("*")));
    }
    let q = parse_polynomial_in(&terms.join(" + "), m).map_err(|e| e.to_string())?;
    let columns: Vec<Vec<_>> = (0..n).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    let p = q.compose_linear(&columns).map_err(|e| e.to_string())?;
    Ok((p, v))
}

fn c6_invariant_subspace() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let (p, v) = invariant_polynomial(&mut rng)?;
        let n = p.nvars();
        let w = dependence_subspace(&p);
        ensure(w.complement().includes(&v), || format!("case {case}: {p} depends on directions in V"))?;
        for _ in 0..200 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let coeffs: Vec<f64> = (0..v.dim()).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let shift = v.from_coords(&coeffs);
            let y: Vec<f64> = x.iter().zip(&shift).map(|(a, b)| a + b).collect();
            let a = p.evaluate_real(&x).map_err(|e| e.to_string())?;
            let b = p.evaluate_real(&y).map_err(|e| e.to_string())?;
            let on_v = p.evaluate_real(&shift).map_err(|e| e.to_string())?.norm();
            let scale = a.norm().max(b.norm()).max(1.0);
            ensure(on_v <= 1e-9 * scale.max(p.coefficient_scale()), || format!("case {case}: {p} is {on_v:e} on V"))?;
            let rel = (a - b).norm() / scale;
            worst = worst.max(rel);
            ensure(rel <= 1e-9, || format!("case {case}: {p} changes by {rel:e} along V"))?;
        }
    }
    Ok(format!("largest relative change {worst:.1e}"))
}

fn lipschitz_domains() -> Vec<(&'static str, Domain)> {
    let ball = Domain::ball(vec![0.3, -0.2, 0.1], 1.7).unwrap();
    vec![
        ("full", Domain::FullSpace(3)),
        ("ball", ball.clone()),
        ("box", Domain::open_box(vec![-1.0, -2.0, -0.5], vec![1.5, 1.0, 2.0]).unwrap()),
        ("halfspace", Domain::halfspace(vec![1.0, -2.0, 0.5], 0.3).unwrap()),
        ("complement_affine", Domain::complement_of_affine(vec![0.2, 0.0, -0.4], &[vec![1.0, 1.0, 0.0]]).unwrap()),
        (
            "intersection",
            Domain::intersection(vec![ball, Domain::halfspace(vec![0.0, 1.0, 1.0], -0.2).unwrap()]).unwrap(),
        ),
        ("product", product_lift(&Domain::punctured(vec![0.5, -0.5]).unwrap())),
    ]
}

fn c7_lipschitz_and_monotonicity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for (name, x) in lipschitz_domains() {
        let mut pairs = 0;
        while pairs < 10_000 {
            let a: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let b: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let (Ok(da), Ok(db)) = (x.boundary_distance(&a), x.boundary_distance(&b)) else { continue };
            pairs += 1;
            if da.is_infinite() || db.is_infinite() {
                ensure(da == db, || format!("{name}: mixed infinite distances"))?;
                continue;
            }
            let dist = a.iter().zip(&b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
            ensure((da - db).abs() <= dist + 1e-9, || format!("{name}: |{da} - {db}| > {dist}"))?;
        }
    }

    let params = SigmaParams::default();
    let symbols = [presets::heat(3), presets::wave(3), presets::laplace_sub(3), parse_polynomial_in("x1*x2*x3 + i*x1 - 2", 3).unwrap()];
    for k in 0..1000 {
        let p = &symbols[k % symbols.len()];
        let xi: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let t = rng.gen_range(0.0..4.0);
        let dt = rng.gen_range(0.0..2.0);
        let u = random_line(&mut rng, 3);
        let w = random_line(&mut rng, 3);
        let line = Subspace::from_vectors(3, std::slice::from_ref(&u)).map_err(|e| e.to_string())?;
        let plane = Subspace::from_vectors(3, &[u, w]).map_err(|e| e.to_string())?;
        let chain = [Subspace::trivial(3), line, plane, Subspace::full(3)];
        let vals: Vec<f64> = chain
            .iter()
            .map(|v| p_tilde_sub_with(p, v, &xi, t, &params))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let later = p_tilde_sub_with(p, &chain[2], &xi, t + dt, &params).map_err(|e| e.to_string())?;
        let tol = 1e-6 * later.max(vals[3]).max(1e-300);
        ensure(vals.windows(2).all(|w| w[0] <= w[1] + tol), || format!("tuple {k}: not monotone in V: {vals:?}"))?;
        ensure(vals[2] <= later + tol, || format!("tuple {k}: not monotone in t: {} > {later}", vals[2]))?;
    }

    for p in [presets::heat(2), presets::laplace(3), presets::wave(2), presets::cauchy_riemann()] {
        let s = sigma_estimate(&p, &Subspace::full(p.nvars()), &params).map_err(|e| e.to_string())?;
        ensure((s.value - 1.0).abs() <= 1e-12, || format!("sigma({p}, R^n) = {}", s.value))?;
    }
    Ok("7 domain variants x 1e4 pairs, 1e3 monotonicity tuples, sigma(R^n) = 1".into())
}

fn c8_lifting() -> Check {
    let h = 0.02;
    let mut compared = 0;
    for (name, base) in [
        ("ball", Domain::ball(vec![0.0, 0.0], 1.0).unwrap()),
        ("punctured", Domain::punctured(vec![0.0, 0.0]).unwrap()),
    ] {
        let lifted = product_lift(&base);
        let mut subspaces: Vec<Subspace> = (0..6)
            .map(|j| {
                let a = std::f64::consts::PI * j as f64 / 6.0;
                Subspace::from_vectors(2, &[vec![a.cos(), a.sin()]]).unwrap()
            })
            .collect();
        subspaces.push(Subspace::full(2));
        for w in &subspaces {
            for off in [[0.0, 0.0], [0.0, 0.5], [0.3, -0.25], [-0.6, 0.1], [0.9, 0.9]] {
                let ext = Extent::cube(w.dim(), 2.0);
                let b = build_slice(&base, &off, w, h, &ext).map_err(|e| e.to_string())?;
                let rb = min_principle_slice(&b);
                for t in [0.0, 0.7] {
                    let l = build_slice(&lifted, &[off[0], off[1], t], &w.lift(), h, &ext).map_err(|e| e.to_string())?;
                    let rl = min_principle_slice(&l);
                    ensure(rb.status() == rl.status(), || {
                        format!("{name} {} at {off:?}: base {} vs lifted {}", w.describe(), rb.status(), rl.status())
                    })?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} (W, offset) pairs agree"))
}

fn rule_trace_ok(v: &Verdict) -> Result<(), String> {
    ensure(!v.rules.is_empty(), || "empty rule trace".into())?;
    for r in &v.rules {
        ensure(!r.citation.trim().is_empty() && !r.outcome.trim().is_empty(), || format!("rule {} lacks a citation", r.id))?;
    }
    Ok(())
}

fn decisive(v: &Verdict, id: &str) -> bool {
    v.rules.iter().any(|r| r.id == id && r.decisive)
}

fn c9_augmented_verdicts() -> Check {
    let v = verdict_of(cli(&["augmented", "--op", "heat2", "--domain", &config("unit-disk.toml")])?)?;
    ensure(v.surjective == Answer::Yes && v.augmented_surjective == Answer::Yes, || {
        format!("heat2 on the disk: {:?}/{:?}", v.surjective, v.augmented_surjective)
    })?;
    ensure(decisive(&v, "A2"), || "heat2 on the disk is not decided by the characteristic-line case".into())?;
    rule_trace_ok(&v)?;
    let v = verdict_of(cli(&["augmented", "--op", "laplace3-sub", "--domain", &config("axis-complement.toml")])?)?;
    ensure(v.augmented_surjective == Answer::Yes, || format!("axis complement: {:?}", v.augmented_surjective))?;
    ensure(decisive(&v, "A1"), || "axis complement is not decided by the acting-along case".into())?;
    rule_trace_ok(&v)?;
    Ok("A2 on the disk, A1 on the axis complement".into())
}

fn c10_oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let symbols: Vec<Polynomial> = vec![
        presets::heat(2),
        presets::wave(2),
        parse_polynomial_in("x1^3 - 2*x1*x2 + i*x2 + 1", 2).unwrap(),
        parse_polynomial_in("x1^2 - 3*x1 + i", 1).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let p = &symbols[case % symbols.len()];
        let n = p.nvars();
        let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let t = rng.gen_range(0.1..3.0);
        let (v, oracle) = if n == 1 {
            let m = 20_001;
            let sup = (0..m)
                .map(|i| {
                    let s = -t + 2.0 * t * i as f64 / (m - 1) as f64;
                    p.evaluate_real(&[xi[0] + s]).unwrap().norm()
                })
                .fold(0.0, f64::max);
            (Subspace::full(1), sup)
        } else if case % 2 == 0 {
            let m = 301;
            let mut sup: f64 = 0.0;
            for i in 0..m {
                for j in 0..m {
                    let a = -t + 2.0 * t * i as f64 / (m - 1) as f64;
                    let b = -t + 2.0 * t * j as f64 / (m - 1) as f64;
                    if a * a + b * b <= t * t {
                        sup = sup.max(p.evaluate_real(&[xi[0] + a, xi[1] + b]).unwrap().norm());
                    }
                }
            }
            (Subspace::full(2), sup)
        } else {
            let u = random_line(&mut rng, 2);
            let v = Subspace::from_vectors(2, &[u]).unwrap();
            let b = &v.basis()[0];
            let m = 20_001;
            let sup = (0..m)
                .map(|i| {
                    let s = -t + 2.0 * t * i as f64 / (m - 1) as f64;
                    p.evaluate_real(&[xi[0] + s * b[0], xi[1] + s * b[1]]).unwrap().norm()
                })
                .fold(0.0, f64::max);
            (v, sup)
        };
        let got = p_tilde_sub(p, &v, &xi, t).map_err(|e| e.to_string())?;
        let rel = (got - oracle).abs() / oracle.max(1e-300);
        worst = worst.max(rel);
        ensure(rel <= 0.01, || format!("case {case}: {got} vs oracle {oracle} for {p}"))?;
    }
    Ok(format!("largest relative error {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("heat counterexample on the punctured plane", c1_heat_counterexample, Some(Duration::from_secs(10))),
        ("subspace-elliptic dichotomy", c2_subspace_elliptic_dichotomy, Some(Duration::from_secs(30))),
        ("zero set of sigma separates directions", c3_elliptic_zeros_separation, Some(Duration::from_secs(20))),
        ("augmented sigma matches sigma0", c4_augmented_sigma_consistency, Some(Duration::from_secs(60))),
        ("semi-ellipticity weights", c5_semi_ellipticity, None),
        ("invariance along annihilated subspaces", c6_invariant_subspace, None),
        ("Lipschitz and monotonicity suites", c7_lipschitz_and_monotonicity, None),
        ("lifting preserves slice status", c8_lifting, None),
        ("augmented surjectivity verdicts", c9_augmented_verdicts, None),
        ("P-tilde against brute force", c10_oracle_equivalence, None),
    ];
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let mut outcome = f();
        let elapsed = t0.elapsed();
        if let (Ok(_), Some(lim)) = (&outcome, limit) {
            if elapsed > *lim {
                outcome = Err(format!("took {:.1} s, limit {} s", elapsed.as_secs_f64(), lim.as_secs()));
            }
        }
        match outcome {
            Ok(detail) => println!("acceptance {:>2} PASS  {name} ({detail}; {:.2} s)", k + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name}: {why} ({:.2} s)", k + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
