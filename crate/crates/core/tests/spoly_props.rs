use cmsimplex::specfun::log_gamma;
use cmsimplex::spoly::{
    asymptotic_constant, central_binomial_identity, det_covariance, gamma_ratio_residual, phi_eval,
    phi_integral, s_integral_exact, s_integral_limit, s_pointwise_limit, s_eval,
    weighted_integral_experiment, SPolyParams, TestFunction,
};
use cmsimplex::{Error, SimplexPoint};
use num_traits::ToPrimitive;

#[test]
fn integral_chain_reproduces_lattice_sum() {
    for d in 1..=3 {
        for m in [1u32, 2, 5, 13, 40] {
            let integral = s_integral_exact(SPolyParams::new(1, 1, m, d).unwrap()).unwrap();
            let scale = log_gamma((2 * m) as f64 + d as f64 + 1.0).unwrap() - 2.0 * log_gamma(m as f64 + 1.0).unwrap();
            let chained = integral * scale.exp();
            let lhs = central_binomial_identity(d, m).unwrap().lhs.to_f64().unwrap();
            assert!(((chained - lhs) / lhs).abs() <= 1e-10, "d={d} m={m}: {chained} vs {lhs}");
        }
    }
}

#[test]
fn phi_integral_approaches_constant() {
    for (d, resolutions) in [(1usize, [50u32, 200, 800]), (2, [30, 60, 120])] {
        let k = asymptotic_constant(d).unwrap();
        let errs: Vec<f64> = resolutions
            .iter()
            .map(|&r| (phi_integral(1, 1, d, r).unwrap() - k).abs())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "d={d}: {errs:?}");
    }
}

#[test]
fn general_limit_integrates_pointwise_limit() {
    // the general-(r,s) constant is the integral of the pointwise limit
    for (r, s) in [(1, 2), (2, 2), (2, 3)] {
        let quad = cmsimplex::spoly::simplex_midpoint(2, 120, |x| s_pointwise_limit(r, s, x)).unwrap();
        let quad11 = phi_integral(1, 1, 2, 120).unwrap();
        let want = s_integral_limit(r, s, 2).unwrap() / s_integral_limit(1, 1, 2).unwrap();
        assert!((quad / quad11 - want).abs() < 1e-12);
    }
}

#[test]
fn integrals_converge_for_general_pairs() {
    for (r, s) in [(1, 2), (2, 2), (2, 3)] {
        let limit = s_integral_limit(r, s, 1).unwrap();
        let err = |m: u32| {
            let v = (m as f64).sqrt() * s_integral_exact(SPolyParams::new(r, s, m, 1).unwrap()).unwrap();
            (v - limit).abs()
        };
        let (e1, e2, e3) = (err(50), err(200), err(800));
        assert!(e2 < e1 && e3 < e2, "({r},{s}): {e1} {e2} {e3}");
    }
}

#[test]
fn weighted_experiment_trends() {
    let one = |m| {
        weighted_integral_experiment(SPolyParams::new(1, 1, m, 1).unwrap(), TestFunction::One, 200)
            .unwrap()
            .abs()
    };
    let (a, b, c) = (one(10), one(40), one(160));
    assert!(b < a && c < b, "{a} {b} {c}");
    let coord = |m| {
        weighted_integral_experiment(SPolyParams::new(1, 2, m, 2).unwrap(), TestFunction::Coordinate(0), 120)
            .unwrap()
            .abs()
    };
    let (a, b) = (coord(10), coord(100));
    assert!(b < a, "{a} {b}");
}

#[test]
fn gamma_ratio_residual_stays_bounded() {
    let v: Vec<f64> = [10.0, 100.0, 1e3, 1e4].iter().map(|&m| gamma_ratio_residual(m).unwrap()).collect();
    assert!(v.iter().all(|&r| r < 0.05), "{v:?}");
    // m² residual tends to 1/128
    assert!((v[3] - 1.0 / 128.0).abs() < 1e-4);
}

#[test]
fn singular_points_are_rejected() {
    let edge = SimplexPoint::new(vec![0.0, 0.4]).unwrap();
    assert!(matches!(phi_eval(1, 1, &edge), Err(Error::Singular { index: 0, .. })));
    assert!(matches!(det_covariance(1, 1, &edge), Err(Error::Singular { .. })));
    let x = SimplexPoint::new(vec![0.3, 0.3]).unwrap();
    assert!(matches!(s_eval(SPolyParams::new(1, 1, 3, 3).unwrap(), &x), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn weighted_experiment_matches_exact_integral_for_constant_h() {
    // with h ≡ 1 the experiment equals m^{d/2} ∫S - ∫φ, known in closed form
    for m in [10u32, 40, 160] {
        let p = SPolyParams::new(1, 1, m, 1).unwrap();
        let v = weighted_integral_experiment(p, TestFunction::One, 400).unwrap();
        let exact = (m as f64).sqrt() * s_integral_exact(p).unwrap() - asymptotic_constant(1).unwrap();
        assert!((v - exact).abs() <= 0.05 * exact.abs(), "m={m}: {v} vs {exact}");
    }
}
