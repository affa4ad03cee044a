//! Property tests for reflections, critical angles and continuation quantities.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sector_geometry::*;
use std::f64::consts::PI;

fn spec_strategy() -> impl Strategy<Value = SectorSpec> {
    (0.2f64..PI, 0.05f64..0.95).prop_map(|(alpha, frac)| SectorSpec::new(alpha, alpha * frac).unwrap())
}

#[test]
fn reflection_is_an_involution_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = SectorSpec::new(2.0 * PI / 3.0, 5.0 * PI / 12.0).unwrap();
    for _ in 0..10_000 {
        let lam = rng.gen_range(0.0..3.0);
        let th = rng.gen_range(1e-3..PI);
        let line =
            if rng.gen_bool(0.5) { MovingLine::new(&spec, lam, th) } else { MovingLine::mirrored(&spec, lam, th) };
        let x = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        assert!(reflect(&line, reflect(&line, x)).dist(x) < 1e-14);
    }
}

#[test]
fn zeta_is_continuous_at_the_switch() {
    for k in 1..=100 {
        let beta = PI * k as f64 / 101.0;
        let spec = SectorSpec::relaxed(PI, beta).unwrap();
        let sw = (PI + 3.0 * beta) / 4.0;
        let left = (2.0 * sw - beta).sin() / (beta.sin() + (2.0 * sw - beta).sin());
        let right = (sw - beta).sin() / sw.sin();
        assert!((left - right).abs() < 1e-12);
        assert!((zeta(&spec, sw).unwrap() - right).abs() < 1e-12);
    }
}

#[test]
fn hat_below_check_exactly_past_the_switch() {
    for k in 1..40 {
        let beta = PI * k as f64 / 40.0;
        let spec = SectorSpec::relaxed(PI, beta).unwrap();
        let sw = (PI + 3.0 * beta) / 4.0;
        let top = (PI + beta) / 2.0;
        for i in 1..200 {
            let th = beta + (top - beta) * i as f64 / 200.0;
            if (th - sw).abs() < 1e-9 {
                continue;
            }
            let (Ok(h), Ok(c)) = (lambda_hat(&spec, 1.0, th), lambda_check(&spec, 1.0, th)) else { continue };
            assert_eq!(h < c, th > sw, "beta {beta} theta {th}");
            assert!((lambda_star(&spec, 1.0, th).unwrap() - h.min(c)).abs() < 1e-10 * h.min(c));
        }
    }
}

#[test]
fn theta_b_plus_theta_lambda_exceeds_bound() {
    for (alpha, beta) in
        [(PI, 0.4 * PI), (2.0 * PI / 3.0, 5.0 * PI / 12.0), (0.6 * PI, 0.45 * PI), (0.9 * PI, 0.34 * PI)]
    {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        let ls = l_star(&spec).unwrap();
        for k in 1..200 {
            let lam = ls * k as f64 / 200.0;
            let sum = theta_b(&spec, lam) + theta_lambda(&spec, lam).unwrap();
            assert!(sum > (PI + 3.0 * beta) / 2.0, "lambda {lam}");
        }
    }
}

#[test]
fn iota_is_strictly_increasing() {
    for (alpha, beta) in [(PI, PI / 2.0), (2.0 * PI / 3.0, 5.0 * PI / 12.0), (PI, PI / 4.0), (1.2, 0.5)] {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        let ls = l_star(&spec).unwrap();
        let mut prev = f64::MIN;
        for k in 1..=400 {
            let v = iota(&spec, ls * k as f64 / 400.0).unwrap();
            assert!(v > prev, "beta {beta} k {k}");
            prev = v;
        }
    }
}

#[test]
fn omega_bar_lower_bounds() {
    for (alpha, beta) in [(PI, 2.0 * PI / 3.0 - 0.01), (PI, PI / 2.0), (2.0 * PI / 3.0, 5.0 * PI / 12.0), (1.0, 0.3)] {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        let ls = l_star(&spec).unwrap();
        for k in 1..200 {
            let lam = ls * k as f64 / 200.0;
            let w = omega_bar(&spec, lam).unwrap();
            assert!(w > theta_b(&spec, lam));
            if beta <= PI / 2.0 {
                assert!(w > (PI + 3.0 * beta) / 4.0);
            }
        }
    }
}

#[test]
fn theta_lambda_is_decreasing() {
    let spec = SectorSpec::new(2.0 * PI / 3.0, PI / 3.0).unwrap();
    let top = spec.l_n() / (1.0 + spec.beta().sin());
    let mut prev = f64::MAX;
    for k in 1..500 {
        let t = theta_lambda(&spec, top * k as f64 / 500.0).unwrap();
        assert!(t < prev);
        prev = t;
    }
}

#[test]
fn continuation_threshold_below_neumann_length() {
    for i in 1..=20 {
        let alpha = PI * i as f64 / 20.0;
        for j in 1..20 {
            let spec = SectorSpec::new(alpha, alpha * j as f64 / 20.0).unwrap();
            let c = derive_constants(&spec);
            assert!((c.zeta_flat * c.lambda_c).max(c.lambda_flat) < c.l_n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reflection_preserves_distances(spec in spec_strategy(), lam in 0.0f64..2.0, th in 0.01f64..3.1,
                                      x in (-2.0f64..2.0, -2.0f64..2.0), y in (-2.0f64..2.0, -2.0f64..2.0)) {
        let line = MovingLine::new(&spec, lam, th);
        let (x, y) = (Point::new(x.0, x.1), Point::new(y.0, y.1));
        prop_assert!((line.reflect(x).dist(line.reflect(y)) - x.dist(y)).abs() < 1e-12);
        prop_assert!((line.signed_dist(line.reflect(x)) + line.signed_dist(x)).abs() < 1e-12);
    }

    #[test]
    fn domain_members_satisfy_defining_conditions(spec in spec_strategy(), lf in 0.05f64..0.95, tf in 0.02f64..0.98,
                                                  samples in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 50)) {
        let theta = (PI + spec.beta()) / 2.0 * tf;
        let lam = lambda_m(&spec, theta).unwrap() * lf;
        let d = moving_domain(&spec, lam, theta, None).unwrap();
        prop_assert!(!d.is_empty());
        let (lo, hi) = bbox(&d.polygon);
        for (u, v) in samples {
            let x = Point::new(lo.x + (hi.x - lo.x) * u, lo.y + (hi.y - lo.y) * v);
            if d.contains(x) {
                prop_assert!(spec.contains(x));
                prop_assert!(spec.contains(d.line().reflect(x)));
                let s = sigma(&spec, lam, x).unwrap();
                prop_assert!(s > d.theta1 && s < theta);
            }
        }
        let c = d.centroid().unwrap();
        prop_assert!(d.contains(c));
    }

    #[test]
    fn jmath_inverts_iota(alpha in 1.0f64..PI, frac in 0.1f64..0.95, f in 0.02f64..1.0) {
        let beta = (alpha * frac).min(PI / 2.0);
        let spec = SectorSpec::new(alpha, beta).unwrap();
        let ls = l_star(&spec).unwrap();
        let lam = f * iota(&spec, ls).unwrap();
        let j = jmath(&spec, lam).unwrap();
        prop_assert!((iota(&spec, j).unwrap() - lam).abs() < 1e-10);
    }

    #[test]
    fn admissible_set_has_stated_shape(spec in spec_strategy(), lam in 0.001f64..3.0) {
        let j = critical_angles(&spec, lam).unwrap();
        let top = (PI + spec.beta()) / 2.0;
        prop_assert!(j.contains(top));
        prop_assert!(j.contains(1e-9));
        prop_assert_eq!(j.theta_a_cap, j.theta_a.min(j.theta_b).min(top));
        if lam >= lambda_c(&spec) {
            prop_assert_eq!(j.intervals.len(), 1);
        }
    }
}

fn bbox(poly: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::MAX, f64::MAX);
    let mut hi = Point::new(f64::MIN, f64::MIN);
    for p in poly {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}
