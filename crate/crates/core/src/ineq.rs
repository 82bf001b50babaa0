//! Generalized multinomial coefficients `C(a) = Γ(aM+1) / Π Γ(aγ_i+1)` and
//! three inequalities implied by the strict log-convexity of `a ↦ C(a) x^{aγ}`:
//!
//! * (a) weighted log-convexity `C(Σ λ_j a_j) ≤ Π C(a_j)^{λ_j}`;
//! * (b) superadditivity `Π C(a_j) < C(Σ a_j)`;
//! * (c) exchange `C(a1 + a2) C(a3) ≤ C(a1) C(a2 + a3)` for `a1 ≤ a3`.
//!
//! Every check returns a signed log-scale margin that is nonnegative when the
//! inequality holds.

use std::io::Write;

use rand::Rng;
use rand_distr::Gamma;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::report::{Route, ScanReport, ScanRow};
use crate::sample::fmt_f64;
use crate::simplex::{dirichlet_draw, WeightVector};
use crate::specfun::ln_gamma_unchecked;

/// Fuzz margins below this fail the run.
pub const FUZZ_TOLERANCE: f64 = 1e-10;

/// The weights `(γ, M)` of a generalized multinomial coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffInstance {
    weights: WeightVector,
}

impl CoeffInstance {
    pub fn new(weights: WeightVector) -> Self {
        CoeffInstance { weights }
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// At most one positive weight: `C ≡ 1`.
    pub fn is_degenerate(&self) -> bool {
        self.weights.active().count() < 2
    }

    fn ln_c(&self, a: f64) -> f64 {
        let mut acc = ln_gamma_unchecked(a * self.weights.total() + 1.0);
        for &g in self.weights.weights() {
            if g > 0.0 {
                acc -= ln_gamma_unchecked(a * g + 1.0);
            }
        }
        acc
    }
}

fn check_positive_args(a: &[f64]) -> Result<()> {
    if let Some(v) = a.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return domain(format!("arguments must be positive, got {v}"));
    }
    Ok(())
}

/// `ln C(a)`.
pub fn log_coeff(inst: &CoeffInstance, a: f64) -> Result<f64> {
    check_positive_args(&[a])?;
    Ok(inst.ln_c(a))
}

/// Margin of (a): `Σ λ_j ln C(a_j) - ln C(Σ λ_j a_j)`.
///
/// The mixture point is formed as `a_1 + Σ λ_j (a_j - a_1)` so that equal
/// arguments reproduce `a_1` exactly and the margin is exactly zero.
pub fn check_weighted_logconvexity(inst: &CoeffInstance, a: &[f64], lambda: &[f64]) -> Result<f64> {
    if a.len() < 2 || a.len() != lambda.len() {
        return domain("need k ≥ 2 arguments and one weight per argument");
    }
    check_positive_args(a)?;
    if let Some(l) = lambda.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
        return domain(format!("weights must lie in (0, 1), got {l}"));
    }
    let total: f64 = lambda.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return domain(format!("weights must sum to 1, sum to {total}"));
    }
    let base = a[0];
    let mix = base + a.iter().zip(lambda).map(|(aj, l)| l * (aj - base)).sum::<f64>();
    let ln_mix = inst.ln_c(mix);
    Ok(a.iter().zip(lambda).map(|(&aj, l)| l * (inst.ln_c(aj) - ln_mix)).sum())
}

/// Margin of (b): `ln C(Σ a_j) - Σ ln C(a_j)`.
pub fn check_superadditivity(inst: &CoeffInstance, a: &[f64]) -> Result<f64> {
    if a.len() < 2 {
        return domain("need k ≥ 2 arguments");
    }
    check_positive_args(a)?;
    let total: f64 = a.iter().sum();
    Ok(inst.ln_c(total) - a.iter().map(|&aj| inst.ln_c(aj)).sum::<f64>())
}

/// Margin of (c): `[ln C(a1) + ln C(a2+a3)] - [ln C(a1+a2) + ln C(a3)]`, for `a1 ≤ a3`.
pub fn check_exchange(inst: &CoeffInstance, a1: f64, a2: f64, a3: f64) -> Result<f64> {
    check_positive_args(&[a1, a2, a3])?;
    if a1 > a3 {
        return Err(crate::Error::Precondition(format!("a1 = {a1} exceeds a3 = {a3}")));
    }
    Ok((inst.ln_c(a1) - inst.ln_c(a1 + a2)) + (inst.ln_c(a2 + a3) - inst.ln_c(a3)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    LogConvexity,
    Superadditivity,
    Exchange,
}

impl Check {
    pub const ALL: [Check; 3] = [Check::LogConvexity, Check::Superadditivity, Check::Exchange];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::LogConvexity => "logconvexity",
            Check::Superadditivity => "superadditivity",
            Check::Exchange => "exchange",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzRecord {
    pub trial: usize,
    pub d: usize,
    pub total: f64,
    pub check: Check,
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub trials: usize,
    pub dmax: usize,
    pub seed: u64,
    /// Self-test hook: negate every margin before judging.
    pub flip_sign: bool,
}

impl FuzzConfig {
    pub fn new(trials: usize, dmax: usize, seed: u64) -> Self {
        FuzzConfig {
            trials,
            dmax,
            seed,
            flip_sign: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FuzzOutcome {
    pub report: ScanReport,
    pub records: Vec<FuzzRecord>,
}

impl FuzzOutcome {
    /// Smallest margin recorded for one check.
    pub fn min_margin(&self, check: Check) -> f64 {
        self.records
            .iter()
            .filter(|r| r.check == check)
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub const CSV_HEADER: &'static str = "trial,d,M,check,margin";

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.trial,
                r.d,
                fmt_f64(r.total),
                r.check.as_str(),
                fmt_f64(r.margin)
            )?;
        }
        Ok(())
    }
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..=hi.ln()).exp()
}

/// A random coefficient instance: `d` uniform on `1..=dmax`, `M` log-uniform
/// on `[0.1, 50]`, `γ = M · Dirichlet(1, ..., 1)`.
pub fn random_coeff_instance<R: Rng + ?Sized>(dmax: usize, rng: &mut R) -> Result<CoeffInstance> {
    let d = rng.random_range(1..=dmax.max(1));
    let total = log_uniform(rng, 0.1, 50.0);
    let flat = vec![Gamma::new(1.0, 1.0).expect("valid shape"); d + 1];
    let gamma: Vec<f64> = dirichlet_draw(&flat, rng).into_iter().map(|v| v * total).collect();
    Ok(CoeffInstance::new(WeightVector::new(gamma)?))
}

fn run_trial(cfg: &FuzzConfig, trial: usize) -> Result<Vec<FuzzRecord>> {
    let mut rng = crate::rng_for(cfg.seed, trial as u64);
    let inst = random_coeff_instance(cfg.dmax, &mut rng)?;
    let d = inst.weights.dim();
    let total = inst.weights.total();

    let k = rng.random_range(2..=5usize);
    let a: Vec<f64> = (0..k).map(|_| log_uniform(&mut rng, 0.05, 20.0)).collect();
    let flat = vec![Gamma::new(1.0, 1.0).expect("valid shape"); k];
    let mut lambda = dirichlet_draw(&flat, &mut rng);
    // keep every weight strictly inside (0, 1)
    for l in lambda.iter_mut() {
        *l = l.clamp(1e-12, 1.0 - 1e-12);
    }
    let s: f64 = lambda.iter().sum();
    lambda.iter_mut().for_each(|l| *l /= s);

    let mut triple: Vec<f64> = (0..3).map(|_| log_uniform(&mut rng, 0.05, 20.0)).collect();
    if triple[0] > triple[2] {
        triple.swap(0, 2);
    }

    let sign = if cfg.flip_sign { -1.0 } else { 1.0 };
    let margins = [
        (Check::LogConvexity, check_weighted_logconvexity(&inst, &a, &lambda)?),
        (Check::Superadditivity, check_superadditivity(&inst, &a)?),
        (Check::Exchange, check_exchange(&inst, triple[0], triple[1], triple[2])?),
    ];
    Ok(margins
        .into_iter()
        .map(|(check, m)| FuzzRecord {
            trial,
            d,
            total,
            check,
            margin: sign * m,
        })
        .collect())
}

/// Runs the three checks on `trials` random instances. Each trial draws from
/// its own stream of `seed`, so results do not depend on thread scheduling.
///
/// The report passes iff no margin falls below `-1e-10`.
pub fn fuzz_inequalities(cfg: &FuzzConfig) -> Result<FuzzOutcome> {
    if cfg.trials == 0 {
        return domain("fuzzing needs at least one trial");
    }
    if cfg.dmax == 0 {
        return domain("dmax must be at least 1");
    }
    let per_trial: Vec<Vec<FuzzRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<_>>()?;
    let records: Vec<FuzzRecord> = per_trial.into_iter().flatten().collect();
    let rows = records
        .iter()
        .map(|r| ScanRow {
            a: r.trial as f64,
            route: Route::Difference,
            order: r.check as u32,
            value: r.margin,
            margin: r.margin + FUZZ_TOLERANCE,
        })
        .collect();
    let grid = (0..cfg.trials).map(|t| t as f64).collect();
    let mut report = ScanReport::from_rows(grid, 0, rows);
    report.pass = report.max_violation >= 0.0;
    Ok(FuzzOutcome { report, records })
}
