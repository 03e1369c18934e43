mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use bandflow::traveling_wave::{
    self, solve_c_of_h, solve_cbar, span, span_h, stationary_profile, x_minus, x_plus, DEFAULT_TOL,
};
use bandflow::{CoefficientPair, Error};
use common::*;

const CONSTANT_PAIRS: [(f64, f64); 4] = [(1.0, 0.5), (2.0, 0.3), (1.0, 0.9), (0.5, 0.1)];

#[test]
fn spans_match_closed_form() {
    for (alpha, beta) in CONSTANT_PAIRS {
        let pair = CoefficientPair::constant(alpha, beta).unwrap();
        for c in [0.1, 0.4, 0.9, 2.5] {
            let expect = alpha * constant_half_span(c, beta, FRAC_PI_2);
            let got = x_plus(&pair, c).unwrap();
            assert!((got - expect).abs() < 1e-11 * expect.max(1.0), "alpha={alpha} beta={beta} c={c}");
            assert!((x_minus(&pair, c).unwrap() + got).abs() < 1e-14);
            assert!((span(&pair, c).unwrap() - 2.0 * expect).abs() < 2e-11 * expect.max(1.0));
            let h: f64 = 3.0;
            let expect_h = 2.0 * alpha * constant_half_span(c, beta, h.atan());
            assert!((span_h(&pair, c, h).unwrap() - expect_h).abs() < 1e-11 * expect_h.max(1.0));
        }
    }
}

#[test]
fn speeds_match_closed_form() {
    for (alpha, beta) in CONSTANT_PAIRS {
        let pair = CoefficientPair::constant(alpha, beta).unwrap();
        let w = solve_cbar(&pair, DEFAULT_TOL).unwrap();
        let oracle = constant_cbar(alpha, beta);
        assert!((w.c - oracle).abs() < 1e-9, "cbar {} vs {oracle}", w.c);
        let rise = alpha * constant_half_rise(w.c, beta, FRAC_PI_2);
        assert!((w.height - rise).abs() < 1e-8, "height {} vs {rise}", w.height);
        for h in [2.0f64, 5.0, 20.0] {
            if alpha * h <= beta * (1.0 + h * h).sqrt() {
                continue;
            }
            let wh = solve_c_of_h(&pair, h, DEFAULT_TOL).unwrap();
            let oracle_h = constant_c_of_h(alpha, beta, h);
            assert!((wh.c - oracle_h).abs() < 1e-9, "c({h}) {} vs {oracle_h}", wh.c);
            assert!(wh.c < w.c);
        }
    }
}

#[test]
fn reference_pair_values() {
    let pair = CoefficientPair::constant(1.0, 0.5).unwrap();
    let w = solve_cbar(&pair, DEFAULT_TOL).unwrap();
    assert!((w.c - 0.671_385_753_721_932_4).abs() < 1e-8);
    let w5 = solve_c_of_h(&pair, 5.0, DEFAULT_TOL).unwrap();
    assert!((w5.c - 0.626_441_79).abs() < 1e-8);
    let p = w.profile.eval(0.8).unwrap();
    assert!((p.phi - 0.48043).abs() < 1e-5);
}

#[test]
fn profile_matches_rk4_for_bump_pair() {
    let bump = Bump {
        alpha: 1.0,
        eps: 0.2,
        beta: 0.5,
        delta: 0.1,
    };
    let pair = CoefficientPair::rational_bump(bump.alpha, bump.eps, bump.beta, bump.delta).unwrap();
    for wave in [
        solve_cbar(&pair, DEFAULT_TOL).unwrap(),
        solve_c_of_h(&pair, 5.0, DEFAULT_TOL).unwrap(),
    ] {
        let c = wave.c;
        let phi0 = wave.profile.eval(0.0).unwrap().phi;
        for (x, phi, psi) in rk4_profile(|q| bump.curvature(c, q), 0.9, 200, 0.05) {
            for s in [1.0, -1.0] {
                let p = wave.profile.eval(s * x).unwrap();
                assert!((p.phi - phi0 - phi).abs() < 1e-7, "phi at {}: {} vs {}", s * x, p.phi - phi0, phi);
                assert!((p.psi - s * psi).abs() < 1e-6 * psi.abs().max(1.0), "psi at {}", s * x);
            }
        }
    }
}

#[test]
fn grim_reaper_profile() {
    let pair = CoefficientPair::grim_reaper(1.0).unwrap();
    let w = solve_cbar(&pair, DEFAULT_TOL).unwrap();
    assert!((w.c - FRAC_PI_2).abs() < 1e-8);
    assert!(w.height.is_infinite());
    for k in 0..=18 {
        let x = -0.9 + 0.1 * k as f64;
        let p = w.profile.eval(x).unwrap();
        assert!((p.phi - grim_reaper(x)).abs() < 1e-6, "x = {x}");
        assert!((p.psi - (FRAC_PI_2 * x).tan()).abs() < 1e-6 * (1.0 + p.psi.abs()));
    }
    assert!(w.c < PI / 2.0 + 1e-12);
}

#[test]
fn stationary_profile_is_circle_arc() {
    let pair = CoefficientPair::constant(1.0, 0.5).unwrap();
    let st = stationary_profile(&pair, 1024).unwrap();
    for k in 0..=20 {
        let x = -1.0 + 0.1 * k as f64;
        let p = st.profile.eval(x).unwrap();
        assert!((p.phi - (2.0 - (4.0 - x * x).sqrt())).abs() < 1e-9, "x = {x}");
    }
    assert!((st.threshold() - 1.0 / 3f64.sqrt()).abs() < 1e-9);
}

#[test]
fn solver_errors() {
    let pair = CoefficientPair::constant(1.0, 0.5).unwrap();
    assert!(matches!(x_plus(&pair, -0.1), Err(Error::Domain(_))));
    let gr = CoefficientPair::grim_reaper(1.0).unwrap();
    assert!(matches!(x_plus(&gr, 0.0), Err(Error::DivergentIntegral(_))));
    // a0 h > -b0 sqrt(1+h^2) fails for small h when the forcing dominates
    let strong = CoefficientPair::constant(1.0, 0.9).unwrap();
    match solve_c_of_h(&strong, 0.5, DEFAULT_TOL) {
        Err(Error::Hypothesis(msg)) => assert!(msg.contains("a0*h > -b0*sqrt(1+h^2)")),
        other => panic!("expected a hypothesis error, got {other:?}"),
    }
    let bad = CoefficientPair::constant(1.0, -0.5).unwrap();
    assert!(matches!(solve_cbar(&bad, DEFAULT_TOL), Err(Error::InadmissiblePair(_))));
    let infinite = solve_c_of_h(&pair, f64::INFINITY, DEFAULT_TOL).unwrap();
    assert_eq!(infinite.h, None);
    assert!(traveling_wave::reconstruct_profile(&pair, 0.3, None, 64).is_ok());
}
