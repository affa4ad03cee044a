use proptest::prelude::*;
use sector_fem::Coefficient;
use sector_geometry::Point;
use sobolev_mp::*;
use std::f64::consts::PI;

#[test]
fn first_zero_matches_table() {
    let z = bessel_j0_first_zero();
    assert!((z - 2.404_825_557_7).abs() < 1e-9);
    assert!(bessel_j0(z).abs() < 1e-11);
}

#[test]
fn j0_matches_integral_oracle() {
    for k in 0..400 {
        let x = 0.1 * k as f64;
        let oracle = j0_trapezoid(x, 400);
        assert!((bessel_j0(x) - oracle).abs() < 1e-12, "x = {x}");
        assert_eq!(bessel_j0(-x), bessel_j0(x));
    }
}

#[test]
fn narrow_barrier_is_strict_upper_solution() {
    for c0 in [0.5, 1.0, 10.0] {
        let r = check_barrier_narrow(c0, 10_000, 7).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn sector_barrier_is_strict_upper_solution() {
    for (c0, beta) in [(1.0, PI / 3.0), (4.0, PI), (0.25, 1.5 * PI)] {
        let r = check_barrier_sector(c0, beta, 10_000, 11).unwrap();
        assert!(r.passed(), "{r:?}");
        let fd = r.max_fd_rel_error.unwrap();
        assert!(fd < 1e-6, "finite-difference Laplacian off by {fd:e}");
    }
}

#[test]
fn bessel_barrier_has_zero_normal_derivative_on_the_flat_boundary() {
    let eta = sector_band_threshold(1.0).unwrap();
    for rho in [0.3, 1.0, 2.0] {
        // ∂/∂x₂ at x₂ = 0 by a centered difference; g depends only on |x|.
        let d = 1e-6;
        let up = bessel_barrier(Point::new(rho, d), eta);
        let down = bessel_barrier(Point::new(rho, -d), eta);
        assert!((up - down).abs() / (2.0 * d) < 1e-9);
    }
}

#[test]
fn reflection_norm_identities() {
    for beta in [PI / 8.0, PI / 3.0, PI / 2.0] {
        for v in bump_family(beta, 1.0).unwrap() {
            let w = reflect_double(&v, beta).unwrap();
            let (lq, gp) = norms(&v, 1.0, 2.0, 256);
            let (lq2, gp2) = norms(&w, 1.0, 2.0, 256);
            assert!((lq2 - 2f64.sqrt() * lq).abs() <= 1e-10 * lq2.max(1.0), "{v:?}");
            assert!((gp2 - 2.0 * gp).abs() <= 1e-10 * gp2.max(1.0), "{v:?}");
        }
    }
}

#[test]
fn ratio_is_dilation_invariant() {
    let v = TestFunction::new(PI / 2.0, Point::unit(PI / 4.0) * 0.5, 1.0, 2.0).unwrap();
    let a = sobolev_ratio(&v, 1.0, 2, 256).unwrap();
    let b = sobolev_ratio(&v.dilate(2.0), 1.0, 2, 256).unwrap();
    assert!((a - b).abs() < 1e-12 * a);
}

#[test]
fn interior_bump_ratio_does_not_see_the_boundary() {
    // Center at distance 3 on the bisector, radius 1: inside the sector once sin(β/2) ≥ 1/3.
    let ratios: Vec<f64> = [PI / 2.0, PI]
        .iter()
        .map(|&b| {
            let v = TestFunction::new(b, Point::unit(b / 2.0) * 3.0, 1.0, 2.0).unwrap();
            sobolev_ratio(&v, 1.0, 2, 512).unwrap()
        })
        .collect();
    assert!((ratios[0] - ratios[1]).abs() < 2e-3 * ratios[0], "{ratios:?}");
}

#[test]
fn lower_bound_curve_orders_and_scales() {
    let rows = sobolev_table(&[PI / 8.0, PI / 4.0, PI / 2.0, PI], 1.0, DEFAULT_RESOLUTION).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].l_beta <= w[0].l_beta * (1.0 + 1e-3), "{rows:?}");
    }
    let hi = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
    let lo = rows.iter().map(|r| r.scaled).fold(f64::INFINITY, f64::min);
    assert!(hi <= 4.0 * lo, "{rows:?}");
    // The relative isoperimetric inequality in convex cones bounds C_β β^{1/2} by 2^{−1/2}.
    assert!(hi <= 0.5f64.sqrt());
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), rows.len() + 1);
}

#[test]
fn zero_gradient_is_rejected() {
    let mut v = TestFunction::new(1.0, Point::ORIGIN, 1.0, 1.0).unwrap();
    v.center = Point::new(3.0, -2.5);
    assert!(matches!(sobolev_ratio(&v, 1.0, 2, 64), Err(SobolevError::ZeroGradient)));
}

#[test]
fn small_volume_principle_on_slices() {
    let c0 = 4.0;
    let constant = default_sobolev_constant().unwrap();
    let mut points = Vec::new();
    for beta in [PI / 6.0, PI / 3.0, PI / 2.0] {
        let slice = Slice::new(beta, 0.05).unwrap();
        let threshold = small_volume_threshold(c0, beta, constant).unwrap();
        let report = verify_small_volume_mp(&slice, c0, threshold, 24, 100).unwrap();
        assert!(report.passed(), "{report:?}");
        let neg = negative_test(&slice, c0 * (1.0 - 1e-6), 1.05).unwrap();
        assert!(neg.detected, "{neg:?}");
        let m = failure_measure(&slice, c0 * (1.0 - 1e-6), 1e-6).unwrap();
        assert!(m > threshold, "failure {m} below conservative threshold {threshold}");
        points.push((beta, m));
    }
    let fit = fit_through_origin(&points);
    assert!(fit.max_rel_deviation <= 0.2, "{fit:?} {points:?}");
}

#[test]
fn zero_coefficient_keeps_the_sign_for_any_measure() {
    let slice = Slice::new(PI / 3.0, 0.05).unwrap();
    let n = slice.space().mesh().n_vertices();
    for rho in [0.1, 1.0, 10.0, 100.0] {
        let dirichlet = Coefficient::Nodal((0..n).map(|v| -((v % 7) as f64) / 7.0).collect());
        let m = slice.max_solution(rho, Coefficient::Constant(0.0), Coefficient::Constant(1.0), dirichlet).unwrap();
        assert!(m <= SIGN_TOL, "rho {rho}: {m}");
    }
}

#[test]
fn half_coefficient_on_a_thin_slice_is_nonpositive() {
    let c0 = 4.0;
    let slice = Slice::new(PI / 6.0, 0.05).unwrap();
    let n = slice.space().mesh().n_vertices();
    let dirichlet = Coefficient::Nodal((0..n).map(|v| -((v % 5) as f64) / 5.0).collect());
    let m = slice.max_solution(0.3, Coefficient::Constant(c0 / 2.0), Coefficient::Constant(0.0), dirichlet).unwrap();
    assert!(m <= SIGN_TOL, "{m}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reflection_identities_hold_for_random_bumps(
        beta in 0.3f64..3.0, d in 0.0f64..3.0, phi in 0.0f64..1.0, e in 1.0f64..4.0,
    ) {
        let v = TestFunction::new(beta, Point::unit(phi * beta) * d, 1.0, e).unwrap();
        let w = v.reflect_double().unwrap();
        let (lq, gp) = norms(&v, 1.0, 2.0, 64);
        let (lq2, gp2) = norms(&w, 1.0, 2.0, 64);
        prop_assert!((lq2 - 2f64.sqrt() * lq).abs() <= 1e-10 * lq2.max(1.0));
        prop_assert!((gp2 - 2.0 * gp).abs() <= 1e-10 * gp2.max(1.0));
    }
}
