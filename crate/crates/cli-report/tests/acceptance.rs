//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use angle_relations::{f_aux, sweep as angle_sweep, Regime};
use cli_report::{run_sweep, MeshConfig, RunConfig};
use moving_plane_audit::{
    check_w_negative, default_hw_radii, hw_exponent, monotonicity_x1, monotonicity_x2_half, neumann_tangential_value,
    subcap_directional_sign, symmetry_rate_row, Audit, Side, KAPPA,
};
use rayon::prelude::*;
use sector_fem::{principal_eigenvalue, solve_semilinear, FemSpace, NonlinearitySpec, ScalarField, SolveOptions};
use sector_geometry::{critical_angles, derive_constants, theta_a, theta_b, Point, SectorSpec};
use sector_mesh::{generate, Mesh, MeshOptions};
use sobolev_mp::{
    bessel_j0_first_zero, bump_family, check_barrier_narrow, check_barrier_sector, default_sobolev_constant,
    failure_measure, fit_through_origin, negative_test, norms, reflect_double, small_volume_threshold, sobolev_table,
    verify_small_volume_mp, Slice, DEFAULT_RESOLUTION,
};
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn solve(mesh: Mesh) -> ScalarField {
    let space = FemSpace::new(Arc::new(mesh));
    solve_semilinear(&space, &NonlinearitySpec::default(), &SolveOptions::default()).expect("const(1) solve").0
}

/// The four audited sectors with their `h = 0.02` solutions and solutions on the refined meshes.
struct Fields {
    entries: Vec<(SectorSpec, Audit, ScalarField)>,
    elapsed: Duration,
}

fn audited_sectors() -> Vec<SectorSpec> {
    [(2.0 * PI / 3.0, PI / 3.0), (2.0 * PI / 3.0, 5.0 * PI / 12.0), (2.0 * PI / 3.0, PI / 2.0), (PI, 7.0 * PI / 12.0)]
        .iter()
        .map(|&(a, b)| SectorSpec::new(a, b).unwrap())
        .collect()
}

fn solve_fields() -> Fields {
    let start = Instant::now();
    let entries = audited_sectors()
        .par_iter()
        .map(|spec| {
            let mesh = generate(spec, MeshOptions::new(0.02)).expect("mesh");
            let fine = solve(mesh.refine());
            (*spec, Audit::new(solve(mesh), KAPPA), fine)
        })
        .collect();
    Fields { entries, elapsed: start.elapsed() }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let n = 20;
    for i in 1..=n {
        let alpha = PI * i as f64 / n as f64;
        for j in 1..=n {
            let beta = alpha * j as f64 / (n + 1) as f64;
            let c = derive_constants(&SectorSpec::new(alpha, beta).map_err(|e| e.to_string())?);
            let (ha, hb) = (alpha / 2.0, beta / 2.0);
            let a = -((alpha - beta) / 2.0).sin() / hb.sin();
            let l_n = ha.sin() / hb.sin();
            let p = Point::new(l_n * hb.cos(), l_n * hb.sin());
            let o = Point::new(-a, 0.0);
            let d = p - o;
            let lambda_c = if a == 0.0 { 0.0 } else { (d.cross(o) / d.cross(Point::unit(-hb))).abs() };
            let expected = [
                (c.a, a),
                (c.l_n, l_n),
                (c.lambda_c, lambda_c),
                (c.lambda_sharp, ((alpha - beta) / 2.0).sin() / beta.sin()),
                (c.l_perp, (l_n * beta.cos()).max(0.0)),
                (c.lambda_max, (1.0 - a) / hb.cos()),
            ];
            for (got, want) in expected {
                worst = worst.max((got - want).abs());
            }
        }
    }
    let t = within(start, Duration::from_secs(1), "grid")?;
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("{} sectors, max deviation {worst:.1e}, {t:.2?}", n * n))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let summaries: Vec<_> =
        Regime::ALL.par_iter().enumerate().map(|(k, &r)| angle_sweep(r, 10_000, 100 + k as u64, 1e-10)).collect();
    let mut parts = Vec::new();
    for s in &summaries {
        ensure(s.samples == 10_000, || format!("regime {}: {} samples", s.regime.label(), s.samples))?;
        ensure(s.passed(1e-10), || {
            format!("regime {}: min margin {:e} at {:?}", s.regime.label(), s.min_margin, s.worst)
        })?;
        parts.push(format!("({}) {:.1e}", s.regime.label(), s.min_margin));
    }
    for eps in [0.0, 0.25, 1.0, 10.0] {
        let v = f_aux(0.0, 3f64.sqrt(), eps);
        ensure(v.abs() <= 1e-12, || format!("f_aux(0, sqrt 3, {eps}) = {v:e}"))?;
    }
    let t = within(start, Duration::from_secs(10), "angle sweep")?;
    Ok(format!("min margins {}, {t:.2?}", parts.join(" ")))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let spec = SectorSpec::spherical(PI / 2.0).map_err(|e| e.to_string())?;
    let exact = |p: Point| 0.25 * (1.0 - p.norm2());
    let errs: Vec<f64> = [0.08, 0.04, 0.02]
        .par_iter()
        .map(|&h| solve(generate(&spec, MeshOptions::new(h)).unwrap()).l2_error(exact))
        .collect();
    let rates: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let t = within(start, Duration::from_secs(60), "convergence study")?;
    ensure(rates.iter().all(|&r| r >= 1.8), || format!("rates {rates:?} from errors {errs:?}"))?;
    Ok(format!(
        "L2 errors {errs:?}, rates {rates:.3?}, {t:.2?}",
        errs = errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>()
    ))
}

fn criterion_4() -> Outcome {
    let j0 = bessel_j0_first_zero();
    ensure((j0 - 2.404_825_557_7).abs() <= 1e-9, || format!("j0 = {j0}"))?;
    let spec = SectorSpec::spherical(PI / 2.0).map_err(|e| e.to_string())?;
    let mesh = generate(&spec, MeshOptions::new(0.01)).map_err(|e| e.to_string())?;
    let ep = principal_eigenvalue(&FemSpace::new(Arc::new(mesh))).map_err(|e| e.to_string())?;
    let rel = (ep.value - j0 * j0).abs() / (j0 * j0);
    ensure(rel <= 0.01, || format!("lambda_1 = {} vs j0^2 = {}", ep.value, j0 * j0))?;
    Ok(format!("lambda_1 = {:.5} vs j0^2 = {:.5}, relative gap {rel:.1e}", ep.value, j0 * j0))
}

fn criterion_5(f: &Fields) -> Outcome {
    ensure(f.elapsed < Duration::from_secs(300), || format!("solves took {:?}", f.elapsed))?;
    let mut parts = Vec::new();
    for (spec, audit, fine) in &f.entries {
        let rate = symmetry_rate_row(audit, fine).map_err(|e| e.to_string())?;
        let rate_value = -rate.max_violation.unwrap_or(f64::NAN);
        ensure(rate.pass, || format!("({:.4}, {:.4}): {rate:?}", spec.alpha(), spec.beta()))?;
        for row in [monotonicity_x1(audit), monotonicity_x2_half(audit)] {
            ensure(row.pass && row.n_points > 0, || format!("({:.4}, {:.4}): {row:?}", spec.alpha(), spec.beta()))?;
        }
        parts.push(format!("{rate_value:.2}"));
    }
    Ok(format!("symmetry rates {}, monotone rows pass, solves {:.2?}", parts.join(" "), f.elapsed))
}

fn criterion_6(f: &Fields) -> Outcome {
    let mut rows = 0;
    for (spec, audit, _) in &f.entries {
        let k = derive_constants(spec);
        for frac in [0.5, 1.0, 1.5] {
            let lambda = (frac * k.lambda_sharp).min(0.999 * k.lambda_max);
            let j = critical_angles(spec, lambda).map_err(|e| e.to_string())?;
            let thetas = j.sample(5);
            ensure(thetas.len() == 5, || format!("J_lambda sample {thetas:?}"))?;
            for theta in thetas {
                let row = check_w_negative(audit, lambda, theta, None).map_err(|e| e.to_string())?;
                ensure(row.pass, || format!("{row:?}"))?;
                rows += 1;
            }
        }
    }
    let spec = SectorSpec::new(5.0 * PI / 6.0, 5.0 * PI / 12.0).map_err(|e| e.to_string())?;
    let audit = Audit::new(solve(generate(&spec, MeshOptions::new(0.02)).map_err(|e| e.to_string())?), KAPPA);
    let k = derive_constants(&spec);
    let lambda = 0.5 * (k.lambda_sharp + k.lambda_c);
    let theta = 0.5 * (theta_a(&spec, lambda) + theta_b(&spec, lambda));
    let (sub, full) = subcap_directional_sign(&audit, k.lambda_sharp, lambda, theta).map_err(|e| e.to_string())?;
    ensure(sub.pass && sub.n_points > 0, || format!("sub-cap {sub:?}"))?;
    ensure(!full.pass && full.is_expected_fail() && !full.is_regression(), || format!("full line {full:?}"))?;
    Ok(format!(
        "{rows} w rows pass; contrast at lambda {lambda:.4}, theta {theta:.4}: sub-cap {:.2e}, full line {:.2e} (expected-fail)",
        sub.max_violation.unwrap_or(f64::NAN),
        full.max_violation.unwrap_or(f64::NAN)
    ))
}

fn criterion_7(f: &Fields) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut slopes = Vec::new();
    for (spec, audit, _) in &f.entries {
        for frac in [0.25, 0.5, 0.75] {
            for side in [Side::Lower, Side::Upper] {
                let v = neumann_tangential_value(audit.field(), frac * spec.l_n(), side).map_err(|e| e.to_string())?;
                worst = worst.max(v);
            }
        }
        let lambda = spec.l_n() / 2.0;
        let fit = hw_exponent(audit.field(), lambda, &default_hw_radii(spec, lambda, audit.h()))
            .map_err(|e| e.to_string())?;
        let slope = fit.slope;
        ensure((0.8..=1.2).contains(&slope), || format!("({:.4}, {:.4}): {fit:?}", spec.alpha(), spec.beta()))?;
        slopes.push(slope);
    }
    ensure(worst < -1e-4, || format!("largest tangential derivative {worst:e}"))?;
    Ok(format!("largest tangential derivative {worst:.3e}, exponents {slopes:.3?}"))
}

fn criterion_8() -> Outcome {
    for c0 in [0.5, 1.0, 10.0] {
        let r = check_barrier_narrow(c0, 10_000, 7).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("narrow {r:?}"))?;
    }
    for (c0, beta) in [(1.0, PI / 3.0), (4.0, PI), (0.25, 1.5 * PI)] {
        let r = check_barrier_sector(c0, beta, 10_000, 11).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("sector {r:?}"))?;
    }
    let c0 = 4.0;
    let constant = default_sobolev_constant().map_err(|e| e.to_string())?;
    let mut points = Vec::new();
    for beta in [PI / 6.0, PI / 3.0, PI / 2.0] {
        let slice = Slice::new(beta, 0.05).map_err(|e| e.to_string())?;
        let threshold = small_volume_threshold(c0, beta, constant).map_err(|e| e.to_string())?;
        let report = verify_small_volume_mp(&slice, c0, threshold, 24, 100).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("small volume {report:?}"))?;
        let neg = negative_test(&slice, c0 * (1.0 - 1e-6), 1.05).map_err(|e| e.to_string())?;
        ensure(neg.detected, || format!("negative test {neg:?}"))?;
        points.push((beta, failure_measure(&slice, c0 * (1.0 - 1e-6), 1e-6).map_err(|e| e.to_string())?));
    }
    let fit = fit_through_origin(&points);
    ensure(fit.max_rel_deviation <= 0.2, || format!("{fit:?} from {points:?}"))?;
    Ok(format!(
        "barriers negative, small-volume and negative tests pass, linear fit deviation {:.3}",
        fit.max_rel_deviation
    ))
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0f64;
    for beta in [PI / 8.0, PI / 3.0, PI / 2.0] {
        for v in bump_family(beta, 1.0).map_err(|e| e.to_string())? {
            let w = reflect_double(&v, beta).map_err(|e| e.to_string())?;
            let (lq, gp) = norms(&v, 1.0, 2.0, 256);
            let (lq2, gp2) = norms(&w, 1.0, 2.0, 256);
            worst = worst.max((lq2 - 2f64.sqrt() * lq).abs() / lq2.max(1.0));
            worst = worst.max((gp2 - 2.0 * gp).abs() / gp2.max(1.0));
        }
    }
    ensure(worst <= 1e-10, || format!("reflection identities off by {worst:e}"))?;
    let betas = [PI / 8.0, PI / 4.0, PI / 2.0, PI];
    let rows = sobolev_table(&betas, 1.0, DEFAULT_RESOLUTION).map_err(|e| e.to_string())?;
    for w in rows.windows(2) {
        ensure(w[1].l_beta <= w[0].l_beta * (1.0 + 1e-3), || format!("L at {} exceeds L at {}", w[1].beta, w[0].beta))?;
    }
    let hi = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
    let lo = rows.iter().map(|r| r.scaled).fold(f64::INFINITY, f64::min);
    ensure(hi <= 4.0 * lo, || format!("scaled band [{lo}, {hi}]"))?;
    Ok(format!("identities to {worst:.1e}, doubling monotone on 3 pairs, scaled band [{lo:.4}, {hi:.4}]"))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = RunConfig {
        alpha: vec![2.0 * PI / 3.0, 5.0 * PI / 6.0],
        beta: vec![PI / 3.0, PI / 2.0],
        mesh: MeshConfig { h: 0.06, symmetric: false },
        seed: 7,
        ..RunConfig::default()
    };
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(&cfg_path, cfg.to_toml()).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("sweep{k}.csv"));
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_sector-symmetry"))
            .args(["sweep", "--config"])
            .arg(&cfg_path)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.code().is_some_and(|c| c <= 1), || format!("sweep exited {:?}", status.status))?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    let mut lib = Vec::new();
    run_sweep(&cfg).map_err(|e| e.to_string())?.write_csv(&mut lib).map_err(|e| e.to_string())?;
    ensure(outputs[0] == outputs[1], || "two command runs differ".into())?;
    ensure(outputs[0] == lib, || "command and library runs differ".into())?;
    Ok(format!("{} bytes identical across two runs and the library path", outputs[0].len()))
}

fn report(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default())
    });
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("{tag} criterion {n:>2} ({name}): {detail} [{:.2?}]", start.elapsed());
    outcome.is_ok()
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report(1, "geometry closed forms", criterion_1);
    ok &= report(2, "angle relations sweep", criterion_2);
    ok &= report(3, "solver convergence", criterion_3);
    ok &= report(4, "principal eigenvalue", criterion_4);
    let fields = solve_fields();
    ok &= report(5, "symmetry and monotonicity", || criterion_5(&fields));
    ok &= report(6, "moving-plane negativity", || criterion_6(&fields));
    ok &= report(7, "Neumann machinery", || criterion_7(&fields));
    ok &= report(8, "barriers and small volume", criterion_8);
    ok &= report(9, "Sobolev instrumentation", criterion_9);
    ok &= report(10, "determinism", criterion_10);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
