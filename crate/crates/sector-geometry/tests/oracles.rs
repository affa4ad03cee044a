//! Independent oracles for derived values: closed forms rederived from scratch, brute-force
//! scans, and bisection cross-checks.

use sector_geometry::constants::{beta_flat, zeta_flat};
use sector_geometry::critical::{theta_a, theta_b, theta_b_inverse};
use sector_geometry::domain::{default_theta1, theta_check, theta_hat};
use sector_geometry::*;
use std::f64::consts::{FRAC_PI_2, PI};

/// `a = −sin((α−β)/2)/sin(β/2)`, the signed offset from the law of sines in triangle `V O P₊`.
fn oracle_a(alpha: f64, beta: f64) -> f64 {
    -((alpha - beta) / 2.0).sin() / (beta / 2.0).sin()
}

fn grid(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..=n {
        let alpha = PI * i as f64 / n as f64;
        for j in 1..=n {
            let beta = alpha * j as f64 / (n + 1) as f64;
            out.push((alpha, beta));
        }
    }
    out
}

#[test]
fn constants_match_exact_trig_oracle() {
    for (alpha, beta) in grid(20) {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        let c = derive_constants(&spec);
        let a = oracle_a(alpha, beta);
        let l_n = (alpha / 2.0).sin() / (beta / 2.0).sin();
        // O, P₊ from the frame: |P₊ − O| = 1 and P₊ on the ray at angle β/2.
        let p = Point::new(l_n * (beta / 2.0).cos(), l_n * (beta / 2.0).sin());
        assert!(((p.x + a).powi(2) + p.y.powi(2) - 1.0).abs() < 1e-12);
        assert!((c.a - a).abs() < 1e-12);
        assert!((c.l_n - l_n).abs() < 1e-12);
        assert!((c.lambda_sharp - ((alpha - beta) / 2.0).sin() / beta.sin()).abs() < 1e-12);
        assert!((c.l_perp - (l_n * beta.cos()).max(0.0)).abs() < 1e-12);
        assert!((c.lambda_max - (1.0 - a) / (beta / 2.0).cos()).abs() < 1e-12);
        // λ_C: pivot of the line through O and P₊, found by intersecting that line with the lower ray.
        let o = Point::new(-a, 0.0);
        let lower = Point::unit(-beta / 2.0);
        let d = p - o;
        let t = d.cross(o) / d.cross(lower);
        let lambda_c = if a == 0.0 { 0.0 } else { t.abs() };
        assert!((c.lambda_c - lambda_c).abs() < 1e-12, "alpha {alpha} beta {beta}");
    }
}

#[test]
fn l_star_matches_closed_form() {
    for (alpha, beta) in grid(12) {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        let l_n = spec.l_n();
        let closed = l_n * (beta.cos() - beta.sin() / ((PI + 3.0 * beta) / 4.0).tan());
        let ls = derive_constants(&spec).l_star.unwrap();
        assert!((ls - closed).abs() < 1e-11);
        assert!(ls > 0.0 && ls < l_n);
        assert!((theta_b_inverse(&spec, (PI + 3.0 * beta) / 4.0) - closed).abs() < 1e-12);
    }
}

#[test]
fn l_star_is_absent_for_spherical_sector() {
    let spec = SectorSpec::spherical(1.2).unwrap();
    assert!(derive_constants(&spec).l_star.is_none());
}

/// `T ∩ Σ̄ ≠ ∅` tested on a dense boundary polygon: a line meets a convex set iff its
/// boundary vertices are not all strictly on one side.
fn line_meets_sector(spec: &SectorSpec, lambda: f64, theta: f64) -> bool {
    let line = MovingLine::new(spec, lambda, theta);
    spec.boundary_polygon(4096).iter().any(|&p| line.signed_dist(p) >= 0.0)
}

#[test]
fn lambda_m_matches_bisection_on_emptiness() {
    for (alpha, beta) in [(2.0 * PI / 3.0, 5.0 * PI / 12.0), (PI, 7.0 * PI / 12.0), (2.0, 0.6)] {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        for k in 1..=30 {
            let theta = (PI + beta) / 2.0 * k as f64 / 30.0;
            let (mut lo, mut hi) = (0.0, 10.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if line_meets_sector(&spec, mid, theta) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let lm = lambda_m(&spec, theta).unwrap();
            assert!((lo - lm).abs() < 1e-5 * lm.max(1.0), "theta {theta}: bisection {lo} closed {lm}");
        }
    }
}

/// `O` strictly on the domain side of `T_{λ,ϑ}` while `P₊` is strictly on the other: `ϑ ∉ J_λ`.
fn separates_center_and_mixed_point(spec: &SectorSpec, lambda: f64, theta: f64) -> bool {
    let line = MovingLine::new(spec, lambda, theta);
    line.signed_dist(spec.center()) > 0.0 && line.signed_dist(spec.p_plus()) < 0.0
}

#[test]
fn lambda_flat_matches_brute_force_scan() {
    for (alpha, beta) in [(PI, 7.0 * PI / 12.0), (PI, PI / 3.0), (5.0 * PI / 6.0, PI / 4.0), (2.0 * PI / 3.0, PI / 2.0)]
    {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        let c = derive_constants(&spec);
        let bf = beta_flat(beta);
        let angles: Vec<f64> = (1..=20_000).map(|k| bf * k as f64 / 20_000.0).collect();
        let good = |lam: f64| !angles.iter().any(|&t| separates_center_and_mixed_point(&spec, lam, t));
        let top = c.lambda_c * 1.01 + 1e-9;
        let n = 2000;
        let mut tail_start = top;
        for k in (1..=n).rev() {
            let lam = top * k as f64 / n as f64;
            if !good(lam) {
                break;
            }
            tail_start = lam;
        }
        let tol = 2e-3 * c.lambda_c.max(1e-3);
        assert!(
            (tail_start - c.lambda_flat).abs() <= tol || (c.lambda_flat == 0.0 && tail_start <= top / n as f64),
            "alpha {alpha} beta {beta}: scan {tail_start} closed {}",
            c.lambda_flat
        );
    }
}

#[test]
fn zeta_flat_bounds_lambda_star() {
    for k in 1..30 {
        let beta = PI * k as f64 / 30.0;
        let spec = SectorSpec::relaxed(PI, beta).unwrap();
        let zf = zeta_flat(beta);
        for i in 0..=200 {
            let th = beta / 2.0 + (beta_flat(beta) - beta / 2.0) * i as f64 / 200.0;
            assert!(zeta(&spec, th).unwrap() <= zf + 1e-12);
        }
    }
}

#[test]
fn check_line_equals_mirrored_hat_line() {
    for (alpha, beta) in [(2.0 * PI / 3.0, 5.0 * PI / 12.0), (PI, 7.0 * PI / 12.0), (2.5, 0.9)] {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        for &(lam, th) in &[(0.3, 1.4), (0.8, 1.7), (0.5, beta + 0.2)] {
            let lc = lambda_check(&spec, lam, th).unwrap();
            let lh = lambda_hat(&spec, lam, th).unwrap();
            let check = MovingLine::new(&spec, lc, theta_check(&spec, th));
            let hat = MovingLine::mirrored(&spec, lh, theta_hat(&spec, th));
            let t = MovingLine::new(&spec, lam, th);
            for s in [0.0, 0.4, 1.3] {
                let x = t.reflect(spec.upper_dir() * s);
                assert!(check.signed_dist(x).abs() < 1e-12);
                assert!(hat.signed_dist(x).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn h_values_reflect_the_neumann_lines() {
    let spec = SectorSpec::new(2.0 * PI / 3.0, 5.0 * PI / 12.0).unwrap();
    let beta = spec.beta();
    for &(lam, th) in &[(0.2, 1.2), (0.5, 1.5), (0.35, 1.0)] {
        let t = MovingLine::new(&spec, lam, th);
        let h = HValues::new(&spec, lam, th);
        let l1 = MovingLine::new(&spec, h.h1.unwrap(), 2.0 * th - beta);
        let l3 = MovingLine::new(&spec, h.h3.unwrap(), 2.0 * th + beta - PI);
        let t_beta = MovingLine::new(&spec, 0.0, beta);
        let t_minus_beta = MovingLine::new(&spec, 0.0, -beta);
        for s in [-1.0, 0.3, 2.0] {
            let x = t_beta.pivot() + t_beta.direction() * s;
            let y = t_minus_beta.pivot() + t_minus_beta.direction() * s;
            assert!(l1.signed_dist(t.reflect(x)).abs() < 1e-12);
            assert!(l3.signed_dist(t.reflect(y)).abs() < 1e-12);
        }
    }
}

#[test]
fn radial_moving_domain_at_half_beta_matches_brute_force() {
    let spec = SectorSpec::spherical(PI / 2.0).unwrap();
    let theta = spec.beta() / 2.0;
    for lam in [0.2, 0.5, 0.8] {
        let d = moving_domain(&spec, lam, theta, None).unwrap();
        assert!(!d.is_empty());
        let cut = -lam * (spec.beta() / 2.0).sin();
        let n = 300;
        for i in 0..n {
            for j in 0..n {
                let x = Point::new(1.2 * (i as f64 + 0.31) / n as f64, -1.0 + 2.0 * (j as f64 + 0.47) / n as f64);
                let refl = Point::new(x.x, 2.0 * cut - x.y);
                let brute = spec.contains(x) && x.y < cut && spec.contains(refl);
                assert_eq!(d.contains(x), brute, "x = {x:?}");
            }
        }
    }
}

#[test]
fn domain_polygon_agrees_with_membership_away_from_boundary() {
    let spec = SectorSpec::new(2.0 * PI / 3.0, 5.0 * PI / 12.0).unwrap();
    for &(lam, th) in &[(0.3, 0.5), (0.5, 1.3), (0.9, 1.7), (0.2, 1.9)] {
        let d = moving_domain(&spec, lam, th, None).unwrap();
        if d.is_empty() {
            continue;
        }
        let n = 150;
        for i in 0..n {
            for j in 0..n {
                let x = Point::new(-0.2 + 1.8 * i as f64 / n as f64, -1.2 + 2.4 * j as f64 / n as f64);
                let near = d.pieces().iter().any(|p| sector_geometry::point::dist_to_segment(x, p.start, p.end) < 1e-4);
                if near {
                    continue;
                }
                let poly_in = winding_inside(&d.polygon, x);
                assert_eq!(poly_in, d.contains(x), "lambda {lam} theta {th} x {x:?}");
            }
        }
    }
}

fn winding_inside(poly: &[Point], x: Point) -> bool {
    let n = poly.len();
    (0..n).all(|i| (poly[(i + 1) % n] - poly[i]).cross(x - poly[i]) > 0.0)
}

#[test]
fn default_theta1_convention() {
    assert_eq!(default_theta1(1.0), 0.0);
    assert!((default_theta1(2.0) - (4.0 - PI)).abs() < 1e-15);
}

#[test]
fn critical_angle_monotonicity_on_grid() {
    for (alpha, beta) in [(2.0 * PI / 3.0, PI / 3.0), (PI, 7.0 * PI / 12.0), (1.5, 0.3)] {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        let mut prev = (f64::MIN, f64::MIN);
        for k in 1..=1000 {
            let lam = 3.0 * k as f64 / 1000.0;
            let cur = (theta_a(&spec, lam), theta_b(&spec, lam));
            assert!(cur.0 > prev.0 && cur.1 > prev.1);
            prev = cur;
        }
    }
}

#[test]
fn theta_b_at_right_angle_for_l_perp() {
    let spec = SectorSpec::new(2.0 * PI / 3.0, PI / 3.0).unwrap();
    let c = derive_constants(&spec);
    assert!((theta_b(&spec, c.l_perp) - FRAC_PI_2).abs() < 1e-14);
}
