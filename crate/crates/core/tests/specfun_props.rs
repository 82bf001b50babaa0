use cmsimplex::specfun::{log_gamma, polygamma, PolyOrder};

fn grid() -> impl Iterator<Item = f64> {
    (0..=500).map(|i| 0.1 + 99.9 * i as f64 / 500.0)
}

#[test]
fn log_gamma_step_is_log() {
    for z in grid() {
        let step = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap();
        // absolute slack for z near 1 where ln z vanishes
        assert!((step - z.ln()).abs() <= 1e-12 * z.ln().abs().max(1.0), "z = {z}");
    }
}

#[test]
fn polygamma_signs_alternate() {
    for n in 1..=8u32 {
        let order = PolyOrder::new(n).unwrap();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        for z in grid().chain([1e-3, 0.5, 1e3, 1e6]) {
            let v = polygamma(order, z).unwrap();
            assert!(sign * v > 0.0, "ψ^({n})({z}) = {v}");
        }
    }
}

#[test]
fn invalid_arguments_are_rejected() {
    assert!(log_gamma(0.0).is_err());
    assert!(log_gamma(-1.5).is_err());
    assert!(log_gamma(f64::NAN).is_err());
    assert!(PolyOrder::new(9).is_err());
    assert!(polygamma(PolyOrder::TRIGAMMA, 0.0).is_err());
}
