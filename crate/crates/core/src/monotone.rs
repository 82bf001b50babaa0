//! The Γ-ratio function
//!
//! ```text
//! g(a) = Γ(aM + 1) / Π Γ(aγ_i + 1) · Π x_i^{aγ_i},   a > 0,
//! ```
//!
//! its log-derivatives `h^{(n)}` with `h = -ln g`, the auxiliary function
//! `J_u(y)`, the large-`a` limit of `h'`, and two independent certificates of
//! complete monotonicity of `g` on a grid.

use rand::Rng;
use rand_distr::Gamma;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::report::{Route, ScanReport, ScanRow};
use crate::simplex::{dirichlet_draw, SimplexPoint, WeightVector};
use crate::specfun::{ln_gamma_unchecked, polygamma_unchecked};

/// Highest order accepted by [`h_derivative`].
pub const MAX_H_ORDER: u32 = 7;
/// Largest grid accepted by [`cm_scan`].
pub const MAX_SCAN_GRID: usize = 1_000_000;

/// A weight vector and a strictly interior point of matching dimension.
///
/// Coordinates with `γ_i = 0` contribute `Γ(1) = 1` and `x_i^0 = 1`, so they
/// are dropped up front; every evaluation runs over the active coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneInstance {
    weights: WeightVector,
    point: SimplexPoint,
    total: f64,
    // (γ_i, ln x_i) for γ_i > 0
    active: Vec<(f64, f64)>,
    exponent_sign: f64,
}

impl MonotoneInstance {
    pub fn new(weights: WeightVector, point: SimplexPoint) -> Result<Self> {
        if weights.dim() != point.dim() {
            return Err(Error::DimensionMismatch {
                expected: weights.dim(),
                found: point.dim(),
            });
        }
        if !point.is_interior() {
            return domain("the point must lie in the interior of the simplex");
        }
        let xs: Vec<f64> = point.barycentric().collect();
        let active = weights.active().map(|i| (weights.weights()[i], xs[i].ln())).collect();
        Ok(MonotoneInstance {
            total: weights.total(),
            weights,
            point,
            active,
            exponent_sign: 1.0,
        })
    }

    /// Self-test hook: flips the sign of the `Π x_i^{aγ_i}` exponent, which
    /// turns `g` into an increasing function that any certificate must reject.
    pub fn corrupted(mut self) -> Self {
        self.exponent_sign = -self.exponent_sign;
        self
    }

    pub fn is_corrupted(&self) -> bool {
        self.exponent_sign < 0.0
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn point(&self) -> &SimplexPoint {
        &self.point
    }

    /// Number of coordinates with positive weight.
    pub fn active_len(&self) -> usize {
        self.active.len()
    }

    /// Fewer than two active coordinates: `g(a) = x_i^{aM}` and all
    /// derivatives of `h` beyond the first vanish.
    pub fn is_degenerate(&self) -> bool {
        self.active.len() < 2
    }

    fn ln_g(&self, a: f64) -> f64 {
        let m = self.total;
        let mut acc = ln_gamma_unchecked(a * m + 1.0);
        let mut linear = 0.0;
        for &(g, lx) in &self.active {
            acc -= ln_gamma_unchecked(a * g + 1.0);
            linear += g * lx;
        }
        acc + self.exponent_sign * a * linear
    }

    /// `h^{(n)}(a)` together with the magnitude of its largest term.
    fn h_derivative_with_scale(&self, a: f64, n: u32) -> (f64, f64) {
        let m = self.total;
        let ord = n - 1;
        let lead = -m.powi(n as i32) * polygamma_unchecked(ord, a * m + 1.0);
        let mut value = lead;
        let mut scale = lead.abs();
        let mut linear = 0.0;
        for &(g, lx) in &self.active {
            let t = g.powi(n as i32) * polygamma_unchecked(ord, a * g + 1.0);
            value += t;
            scale = scale.max(t.abs());
            linear += g * lx;
        }
        if n == 1 {
            let t = -self.exponent_sign * linear;
            value += t;
            scale = scale.max(t.abs());
        }
        (value, scale)
    }
}

fn check_a(a: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return domain(format!("a must be finite and positive, got {a}"));
    }
    Ok(())
}

/// `g(a)`; strictly positive, with `g(0+) = 1`.
pub fn g_eval(inst: &MonotoneInstance, a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(inst.ln_g(a).exp())
}

/// `ln g(a)`.
pub fn ln_g_eval(inst: &MonotoneInstance, a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(inst.ln_g(a))
}

/// `h^{(n)}(a)` for `h = -ln g` and `1 ≤ n ≤ 7`:
///
/// * `n = 1`: `-Mψ(aM+1) + Σ γ_i ψ(aγ_i+1) - Σ γ_i ln x_i`
/// * `n ≥ 2`: `-Mⁿ ψ^{(n-1)}(aM+1) + Σ γ_iⁿ ψ^{(n-1)}(aγ_i+1)`
pub fn h_derivative(inst: &MonotoneInstance, a: f64, n: u32) -> Result<f64> {
    check_a(a)?;
    if !(1..=MAX_H_ORDER).contains(&n) {
        return domain(format!("derivative order {n} outside 1..={MAX_H_ORDER}"));
    }
    Ok(inst.h_derivative_with_scale(a, n).0)
}

/// `h'(a)` through `R(z) = ψ(z) - ln z`:
/// `d/a - M R(aM) + Σ γ_i R(aγ_i) + Σ γ_i ln((γ_i/M)/x_i)`,
/// where `d + 1` is the number of active coordinates.
pub fn h_prime_decomposed(inst: &MonotoneInstance, a: f64) -> Result<f64> {
    check_a(a)?;
    let r = |z: f64| polygamma_unchecked(0, z) - z.ln();
    let m = inst.total;
    let d = inst.active.len() as f64 - 1.0;
    let mut acc = d / a - m * r(a * m);
    for &(g, _) in &inst.active {
        acc += g * r(a * g);
    }
    Ok(acc + kl_limit(inst))
}

/// `M · D_KL(γ/M ‖ x) = Σ γ_i ln((γ_i/M)/x_i)`, the limit of `h'(a)` as `a → ∞`.
pub fn kl_limit(inst: &MonotoneInstance) -> f64 {
    let m = inst.total;
    inst.active.iter().map(|&(g, lx)| g * ((g / m).ln() - lx)).sum()
}

/// `J_u(y) = 1/(y-1) - Σ_{i=1}^{d+1} 1/(y^{1/u_i} - 1)` for a probability
/// vector `u` with positive entries and `y > 1`.
pub fn j_eval(u: &[f64], y: f64) -> Result<f64> {
    if u.len() < 2 {
        return domain("u needs at least two entries");
    }
    if let Some(v) = u.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return domain(format!("u entries must be positive, got {v}"));
    }
    let total: f64 = u.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return domain(format!("u must sum to 1, sums to {total}"));
    }
    if !(y > 1.0) || y.is_nan() {
        return domain(format!("y must exceed 1, got {y}"));
    }
    let ln_y = (y - 1.0).ln_1p();
    let tail: f64 = u.iter().map(|&ui| 1.0 / (ln_y / ui).exp_m1()).sum();
    Ok(1.0 / (y - 1.0) - tail)
}

/// Tolerances of the two complete-monotonicity certificates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    /// Forward-difference step δ.
    pub diff_step: f64,
    /// Differences may dip to `-diff_tol · g(a)`.
    pub diff_tol: f64,
    /// Derivatives must exceed `deriv_floor` times their largest term.
    pub deriv_floor: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            diff_step: 0.05,
            diff_tol: 1e-7,
            deriv_floor: 1e-14,
        }
    }
}

/// Evenly spaced grid `lo, lo + step, ...` up to `hi` (inclusive within rounding).
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step > 0.0 && hi >= lo) {
        return domain(format!("bad grid {lo}:{hi}:{step}"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > MAX_SCAN_GRID {
        return Err(Error::Capacity {
            what: "scan grid",
            requested: count as u128,
            cap: MAX_SCAN_GRID as u128,
        });
    }
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn binomial_row(n: u32) -> Vec<f64> {
    let mut row = vec![1.0];
    for k in 1..=n {
        let prev = row[k as usize - 1];
        row.push(prev * (n - k + 1) as f64 / k as f64);
    }
    row
}

fn scan_point(inst: &MonotoneInstance, a: f64, max_order: u32, cfg: &ScanConfig) -> Vec<ScanRow> {
    let mut rows = Vec::with_capacity(2 * max_order as usize + 1);
    // derivative route: (-1)^n h^{(n+1)}(a) > 0 for n = 0..=max_order
    for n in 0..=max_order {
        let (h, scale) = inst.h_derivative_with_scale(a, n + 1);
        let value = if n % 2 == 0 { h } else { -h };
        let margin = if scale > 0.0 {
            value / scale - cfg.deriv_floor
        } else {
            -cfg.deriv_floor
        };
        rows.push(ScanRow {
            a,
            route: Route::Derivative,
            order: n,
            value,
            margin,
        });
    }
    // difference route: (-1)^n Δ^n g(a) ≥ -tol · g(a) for n = 1..=max_order,
    // evaluated on g(a + jδ)/g(a) since g itself underflows for large aM
    let ln_g0 = inst.ln_g(a);
    let ratio: Vec<f64> = (0..=max_order)
        .map(|j| (inst.ln_g(a + j as f64 * cfg.diff_step) - ln_g0).exp())
        .collect();
    let g0 = ln_g0.exp();
    for n in 1..=max_order {
        let c = binomial_row(n);
        let rel: f64 = (0..=n as usize)
            .map(|j| if j % 2 == 0 { c[j] * ratio[j] } else { -c[j] * ratio[j] })
            .sum();
        rows.push(ScanRow {
            a,
            route: Route::Difference,
            order: n,
            value: rel * g0,
            margin: rel + cfg.diff_tol,
        });
    }
    rows
}

/// Complete-monotonicity scan of `g` over `grid` with the default [`ScanConfig`].
pub fn cm_scan(inst: &MonotoneInstance, grid: &[f64], max_order: u32) -> Result<ScanReport> {
    cm_scan_with(inst, grid, max_order, &ScanConfig::default())
}

/// Runs both certificates at every grid point:
///
/// * derivative route: `(-1)^n h^{(n+1)}(a) > 0` for `0 ≤ n ≤ max_order`,
///   which makes `h'` completely monotonic and hence `g` as well;
/// * difference route: `(-1)^n Δ_δ^n g(a) ≥ -tol · g(a)` for `1 ≤ n ≤ max_order`.
///
/// Derivative margins are normalised by the largest polygamma term, difference
/// margins by `g(a)`. Degenerate instances (fewer than two active weights) are
/// rejected since their higher derivatives vanish identically.
pub fn cm_scan_with(
    inst: &MonotoneInstance,
    grid: &[f64],
    max_order: u32,
    cfg: &ScanConfig,
) -> Result<ScanReport> {
    if grid.is_empty() {
        return domain("scan grid is empty");
    }
    if grid.len() > MAX_SCAN_GRID {
        return Err(Error::Capacity {
            what: "scan grid",
            requested: grid.len() as u128,
            cap: MAX_SCAN_GRID as u128,
        });
    }
    if !(1..MAX_H_ORDER).contains(&max_order) {
        return domain(format!("max_order must be in 1..={}", MAX_H_ORDER - 1));
    }
    for w in grid.windows(2) {
        if !(w[0] < w[1]) {
            return domain("scan grid must be strictly increasing");
        }
    }
    for &a in grid {
        check_a(a)?;
    }
    if inst.is_degenerate() {
        return Err(Error::Degenerate(
            "fewer than two positive weights; higher derivatives of h vanish".into(),
        ));
    }
    let rows: Vec<ScanRow> = grid
        .par_iter()
        .map(|&a| scan_point(inst, a, max_order, cfg))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(ScanReport::from_rows(grid.to_vec(), max_order, rows))
}

/// Random interior instance of dimension `d`: `x ~ Dirichlet(1, ..., 1)`,
/// `M` log-uniform on `[0.1, 50]`, `γ = M · Dirichlet(1, ..., 1)`.
pub fn random_instance<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<MonotoneInstance> {
    if d == 0 {
        return domain("dimension d must be at least 1");
    }
    let flat = vec![Gamma::new(1.0, 1.0).expect("valid shape"); d + 1];
    loop {
        let x = dirichlet_draw(&flat, rng);
        let u = dirichlet_draw(&flat, rng);
        let total = rng.random_range(0.1f64.ln()..=50f64.ln()).exp();
        let gamma: Vec<f64> = u.iter().map(|v| v * total).collect();
        let point = SimplexPoint::new(x[..d].to_vec())?;
        if !point.is_interior() {
            continue;
        }
        let weights = WeightVector::new(gamma)?;
        return MonotoneInstance::new(weights, point);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symmetric() -> MonotoneInstance {
        MonotoneInstance::new(
            WeightVector::new(vec![1.0, 1.0]).unwrap(),
            SimplexPoint::new(vec![0.5]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn g_examples() {
        let inst = symmetric();
        assert!((g_eval(&inst, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((g_eval(&inst, 2.0).unwrap() - 0.375).abs() < 1e-14);
        assert!((g_eval(&inst, 1e-12).unwrap() - 1.0).abs() < 1e-10);
        assert!(g_eval(&inst, 0.0).is_err());
        assert!(g_eval(&inst, -1.0).is_err());
    }

    #[test]
    fn h_derivative_examples() {
        let inst = symmetric();
        let h1 = h_derivative(&inst, 1.0, 1).unwrap();
        assert!((h1 - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-14, "{h1}");
        assert!(h_derivative(&inst, 1.0, 2).unwrap() < 0.0);
        let far = h_derivative(&inst, 1e6, 1).unwrap();
        assert!(far > 0.0 && far < 1e-5, "{far}");
        assert!(h_derivative(&inst, 1.0, 0).is_err());
        assert!(h_derivative(&inst, 1.0, 8).is_err());
        assert!(h_derivative(&inst, 0.0, 1).is_err());
    }

    #[test]
    fn j_examples() {
        assert!((j_eval(&[0.5, 0.5], 4.0).unwrap() - 0.2).abs() < 1e-15);
        let t = 1.0 / 3.0;
        let j = j_eval(&[t, t, 1.0 - 2.0 * t], 2.0).unwrap();
        assert!((j - (1.0 - 3.0 / 7.0)).abs() < 1e-14, "{j}");
        let near = j_eval(&[t, t, 1.0 - 2.0 * t], 1.0 + 1e-6).unwrap();
        // J_u(y) → d/2 as y → 1
        assert!(near > 0.0 && (near - 1.0).abs() < 1e-3, "{near}");
        assert!(j_eval(&[0.5, 0.5], 1.0).is_err());
        assert!(j_eval(&[0.5, 0.4], 2.0).is_err());
        assert!(j_eval(&[1.0, 0.0], 2.0).is_err());
    }

    #[test]
    fn kl_examples() {
        assert!(kl_limit(&symmetric()).abs() < 1e-16);
        let inst = MonotoneInstance::new(
            WeightVector::new(vec![1.0, 0.0]).unwrap(),
            SimplexPoint::new(vec![0.5]).unwrap(),
        )
        .unwrap();
        assert!((kl_limit(&inst) - 2f64.ln()).abs() < 1e-15);
        let inst = MonotoneInstance::new(
            WeightVector::new(vec![1.0, 1.0]).unwrap(),
            SimplexPoint::new(vec![0.25]).unwrap(),
        )
        .unwrap();
        let want = 2.0 * (0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln());
        assert!((kl_limit(&inst) - want).abs() < 1e-15);
    }

    #[test]
    fn instance_validation() {
        let w = WeightVector::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert!(MonotoneInstance::new(w.clone(), SimplexPoint::new(vec![0.5]).unwrap()).is_err());
        assert!(MonotoneInstance::new(w, SimplexPoint::new(vec![0.5, 0.5]).unwrap()).is_err());
    }

    #[test]
    fn symmetric_scan_passes() {
        let grid = linear_grid(0.1, 10.0, 0.1).unwrap();
        assert_eq!(grid.len(), 100);
        let report = cm_scan(&symmetric(), &grid, 6).unwrap();
        assert!(report.pass, "{}", report.summary_line());
        assert_eq!(report.rows.len(), 100 * 13);
    }

    #[test]
    fn corrupted_scan_fails() {
        let grid = linear_grid(0.1, 10.0, 0.1).unwrap();
        let report = cm_scan(&symmetric().corrupted(), &grid, 6).unwrap();
        assert!(!report.pass);
        assert!(report.max_violation < 0.0);
        assert!(report.worst(Route::Difference) < 0.0);
        assert!(report.worst(Route::Derivative) < 0.0);
    }

    #[test]
    fn degenerate_and_bad_grids_are_rejected() {
        let single = MonotoneInstance::new(
            WeightVector::new(vec![0.0, 3.0]).unwrap(),
            SimplexPoint::new(vec![0.5]).unwrap(),
        )
        .unwrap();
        assert!(matches!(cm_scan(&single, &[1.0], 3), Err(Error::Degenerate(_))));
        let inst = symmetric();
        assert!(cm_scan(&inst, &[], 3).is_err());
        assert!(cm_scan(&inst, &[2.0, 1.0], 3).is_err());
        assert!(cm_scan(&inst, &[0.0, 1.0], 3).is_err());
        assert!(cm_scan(&inst, &[1.0], 7).is_err());
        assert!(matches!(linear_grid(0.0, 1.0, 1e-7), Err(Error::Capacity { .. })));
    }
}
