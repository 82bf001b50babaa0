use cmsimplex::monotone::{
    g_eval, h_derivative, h_prime_decomposed, linear_grid, ln_g_eval, random_instance, MonotoneInstance,
};
use cmsimplex::specfun::log_gamma;
use cmsimplex::{rng_for, SimplexPoint, WeightVector};

#[test]
fn g_decreasing_and_log_convex() {
    let grid = linear_grid(0.1, 10.0, 0.05).unwrap();
    for i in 0..40u64 {
        let inst = random_instance(1 + i as usize % 4, &mut rng_for(21, i)).unwrap();
        let lg: Vec<f64> = grid.iter().map(|&a| ln_g_eval(&inst, a).unwrap()).collect();
        for w in lg.windows(3) {
            assert!(w[1] < w[0]);
            assert!(w[0] + w[2] - 2.0 * w[1] > 0.0, "midpoint convexity");
        }
        let hp: Vec<f64> = grid.iter().map(|&a| h_derivative(&inst, a, 1).unwrap()).collect();
        assert!(hp.iter().all(|&v| v > 0.0));
        assert!(hp.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn log_convexity_margin_on_scaled_instances() {
    // ln g(a) + ln g(a + 2δ) - 2 ln g(a + δ) ≈ δ² h''-type term; with δ = 0.5 it clears 1e-10
    for i in 0..40u64 {
        let inst = random_instance(2, &mut rng_for(22, i)).unwrap();
        for a in [0.2, 1.0, 5.0] {
            let m = ln_g_eval(&inst, a).unwrap() + ln_g_eval(&inst, a + 1.0).unwrap()
                - 2.0 * ln_g_eval(&inst, a + 0.5).unwrap();
            assert!(m > 1e-10, "instance {i}, a = {a}: margin {m}");
        }
    }
}

#[test]
fn zero_weights_drop_out() {
    let x = SimplexPoint::new(vec![0.2, 0.5]).unwrap();
    let x3 = x.last();
    let full = MonotoneInstance::new(WeightVector::new(vec![1.5, 0.0, 2.5]).unwrap(), x).unwrap();
    for a in [0.3, 1.0, 4.0] {
        // reduced formula over the two active coordinates
        let reduced = log_gamma(4.0 * a + 1.0).unwrap()
            - log_gamma(1.5 * a + 1.0).unwrap()
            - log_gamma(2.5 * a + 1.0).unwrap()
            + a * (1.5 * 0.2f64.ln() + 2.5 * x3.ln());
        assert_eq!(ln_g_eval(&full, a).unwrap(), reduced);
        assert_eq!(g_eval(&full, a).unwrap(), reduced.exp());
    }
}

#[test]
fn decomposed_first_derivative_matches() {
    for i in 0..50u64 {
        let inst = random_instance(1 + i as usize % 5, &mut rng_for(23, i)).unwrap();
        for a in [0.1, 0.7, 3.0, 25.0, 400.0] {
            let direct = h_derivative(&inst, a, 1).unwrap();
            let split = h_prime_decomposed(&inst, a).unwrap();
            assert!((direct - split).abs() <= 1e-10 * direct.abs().max(1.0), "{direct} vs {split}");
        }
    }
}
