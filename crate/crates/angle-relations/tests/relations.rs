//! Seeded sweeps of the four angle inequalities, the auxiliary function, and agreement with the
//! critical angles of the moving lines.

use angle_relations::*;
use proptest::prelude::*;
use sector_geometry::{lambda_c, theta_a, theta_b, SectorSpec};
use std::f64::consts::PI;

#[test]
fn every_regime_holds_on_ten_thousand_configs() {
    for (k, regime) in Regime::ALL.into_iter().enumerate() {
        let s = sweep(regime, 10_000, 100 + k as u64, 1e-10);
        assert_eq!(s.samples, 10_000);
        assert!(s.passed(1e-10), "{regime:?}: min margin {} at {:?}", s.min_margin, s.worst);
    }
}

#[test]
fn agrees_with_moving_line_angles() {
    for (alpha, beta) in [(2.0 * PI / 3.0, PI / 3.0), (PI, 7.0 * PI / 12.0), (2.3, 0.4), (1.2, 1.0)] {
        let spec = SectorSpec::new(alpha, beta).unwrap();
        let lc = lambda_c(&spec);
        for s in [0.01, 0.2, 0.5, 0.9, 0.999] {
            let c = TriangleConfig::new(alpha, beta, s).unwrap();
            let (ta, tb) = angles_at_p(&c).unwrap();
            let pts = c.points().unwrap();
            assert!((pts.p_bar.norm() - lc).abs() < 1e-12);
            assert!((ta - theta_a(&spec, s * lc)).abs() < 1e-10, "alpha {alpha} beta {beta} s {s}");
            assert!((tb - theta_b(&spec, s * lc)).abs() < 1e-10);
        }
    }
}

#[test]
fn f_aux_dominated_by_critical_kappa() {
    let k3 = 3f64.sqrt();
    for eps in [0.0, 0.1, 1.0, 5.0] {
        for i in 1..=200 {
            let t = 10.0 * i as f64 / 200.0;
            let top = f_aux(t, k3, eps);
            assert!(top < 0.0, "t {t} eps {eps}");
            for j in 1..=20 {
                let kappa = k3 * j as f64 / 20.0;
                assert!(f_aux(t, kappa, eps) <= top + 1e-15);
            }
        }
    }
}

#[test]
fn f_aux_increasing_in_kappa() {
    for eps in [0.0, 0.3, 2.0] {
        for i in 0..=50 {
            let t = 5.0 * i as f64 / 50.0;
            let mut prev = f64::MIN;
            for j in 1..=300 {
                let v = f_aux(t, 0.01 * j as f64, eps);
                assert!(v > prev);
                prev = v;
            }
        }
    }
}

proptest! {
    #[test]
    fn part_one_holds(alpha in 0.1f64..=PI, frac in 0.01f64..0.99, s in S_LAYER..(1.0 - S_LAYER)) {
        let c = TriangleConfig::new(alpha, alpha * frac, s).unwrap();
        prop_assert!(check_triangle_relations(&c).unwrap().m1 > 0.0);
    }

    #[test]
    fn margins_vanish_toward_the_vertex(alpha in 0.5f64..=PI, frac in 0.1f64..0.9) {
        let near = check_triangle_relations(&TriangleConfig::new(alpha, alpha * frac, 1e-8).unwrap()).unwrap();
        prop_assert!(near.m1 > 0.0 && near.m1 < 1e-5);
    }
}
