//! Empirical and Bernstein cdf estimators on the simplex, plus the hypercube
//! cdf and density estimators.
//!
//! The empirical cdf counts observations dominated by the query point,
//! `F_n(y) = (1/n) #{j : y_j ≤ y}`. The hypercube cdf kernel is the product
//! of binomial pmfs `C(m,k_i) x_i^{k_i} (1-x_i)^{m-k_i}`. Density cells are
//! half-open, `(k/m, (k+1)/m]`, so observations with a zero coordinate fall
//! in no cell.

use std::collections::HashMap;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::sample::{fmt_f64, Domain, SampleSet};
use crate::simplex::{lattice_size, Lattice, SimplexPoint, DEFAULT_LATTICE_CAP};
use crate::specfun::ln_gamma_unchecked;
use crate::sum::PairwiseSum;

/// Dense cumulative-count grids up to this many cells; larger simplex
/// lattices fall back to direct counting.
const DENSE_GRID_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    SimplexCdf,
    HypercubeCdf,
    HypercubeDensity,
}

impl EstimatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::SimplexCdf => "simplex-cdf",
            EstimatorKind::HypercubeCdf => "hypercube-cdf",
            EstimatorKind::HypercubeDensity => "hypercube-density",
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            EstimatorKind::SimplexCdf => Domain::Simplex,
            _ => Domain::Hypercube,
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simplex-cdf" => Ok(EstimatorKind::SimplexCdf),
            "hypercube-cdf" => Ok(EstimatorKind::HypercubeCdf),
            "hypercube-density" => Ok(EstimatorKind::HypercubeDensity),
            other => Err(Error::Parse(format!(
                "unknown estimator kind {other:?} (expected simplex-cdf, hypercube-cdf or hypercube-density)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub m: u32,
    pub kind: EstimatorKind,
}

impl EstimatorConfig {
    pub fn new(m: u32, kind: EstimatorKind) -> Result<Self> {
        if m == 0 {
            return domain("estimator degree m must be at least 1");
        }
        Ok(EstimatorConfig { m, kind })
    }
}

fn check_point(samples: &SampleSet, y: &[f64]) -> Result<()> {
    if y.len() != samples.dim() {
        return Err(Error::DimensionMismatch {
            expected: samples.dim(),
            found: y.len(),
        });
    }
    if !samples.domain().contains(y) {
        return domain(format!("query point {y:?} lies outside the {:?} domain", samples.domain()));
    }
    Ok(())
}

/// `(1/n) #{j : y_j ≤ y componentwise}`.
pub fn empirical_cdf(samples: &SampleSet, y: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    check_point(samples, y)?;
    let hits = samples
        .points()
        .filter(|p| p.iter().zip(y).all(|(a, b)| a <= b))
        .count();
    Ok(hits as f64 / samples.len() as f64)
}

/// Smallest `k ∈ 0..=m` with `y ≤ k/m`, or `m + 1` when `y > 1`.
fn grid_bin(y: f64, m: u32) -> u32 {
    let mf = m as f64;
    let mut k = (y * mf).ceil().clamp(0.0, mf) as u32;
    while k > 0 && y <= (k - 1) as f64 / mf {
        k -= 1;
    }
    while k <= m && y > k as f64 / mf {
        k += 1;
    }
    k
}

fn bins(samples: &SampleSet, m: u32) -> Vec<Vec<u32>> {
    samples
        .points()
        .map(|p| p.iter().map(|&v| grid_bin(v, m)).collect())
        .collect()
}

/// `n F_n(k/m)` for every `k ∈ [0,m]^d`, row-major with the last coordinate fastest.
fn cumulative_counts(bins: &[Vec<u32>], d: usize, m: u32) -> Vec<u32> {
    let side = m as usize + 1;
    let len = side.pow(d as u32);
    let mut grid = vec![0u32; len];
    for b in bins {
        if b.iter().any(|&v| v > m) {
            continue;
        }
        let idx = b.iter().fold(0usize, |acc, &v| acc * side + v as usize);
        grid[idx] += 1;
    }
    // prefix sums along each axis
    let mut stride = 1;
    for _ in 0..d {
        for i in 0..len {
            if (i / stride) % side != 0 {
                grid[i] += grid[i - stride];
            }
        }
        stride *= side;
    }
    grid
}

/// `ln(x^k / k!)` for `k = 0..=m`, with `0^0 = 1`.
fn power_table(x: f64, m: u32) -> Vec<f64> {
    let lx = x.ln();
    (0..=m)
        .map(|k| match k {
            0 => 0.0,
            _ if x <= 0.0 => f64::NEG_INFINITY,
            _ => k as f64 * lx - ln_gamma_unchecked(k as f64 + 1.0),
        })
        .collect()
}

/// Binomial pmf `C(n,k) x^k (1-x)^{n-k}` for `k = 0..=n`.
fn binomial_table(n: u32, x: f64) -> Vec<f64> {
    let lead = ln_gamma_unchecked(n as f64 + 1.0);
    let up = power_table(x, n);
    let down = power_table(1.0 - x, n);
    (0..=n as usize)
        .map(|k| (lead + up[k] + down[n as usize - k]).exp())
        .collect()
}

/// Advances `k ∈ [0, side)^d` (last coordinate fastest); false once exhausted.
fn odometer(k: &mut [u32], side: u32) -> bool {
    for v in k.iter_mut().rev() {
        *v += 1;
        if *v < side {
            return true;
        }
        *v = 0;
    }
    false
}

#[derive(Debug, Clone)]
enum Fitted {
    /// `F_n(k/m)` in lattice order.
    SimplexCdf { lattice: Lattice, values: Vec<f64> },
    /// `F_n(k/m)` on `[0,m]^d`, row-major.
    HypercubeCdf { values: Vec<f64> },
    /// Non-empty cells and their empirical masses.
    HypercubeDensity { cells: Vec<(Vec<u32>, f64)> },
}

/// A Bernstein estimator fitted to a sample.
#[derive(Debug, Clone)]
pub struct Estimator {
    config: EstimatorConfig,
    dim: usize,
    fitted: Fitted,
}

impl Estimator {
    pub fn fit(config: EstimatorConfig, samples: &SampleSet) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if samples.domain() != config.kind.domain() {
            return domain(format!(
                "{} needs samples tagged {:?}, got {:?}",
                config.kind.as_str(),
                config.kind.domain(),
                samples.domain()
            ));
        }
        let (d, m) = (samples.dim(), config.m);
        let n = samples.len() as f64;
        let fitted = match config.kind {
            EstimatorKind::SimplexCdf => {
                let lattice = Lattice::new(d, m)?;
                let b = bins(samples, m);
                let mut values = Vec::with_capacity(lattice.len() as usize);
                let dense = (m as u128 + 1).checked_pow(d as u32).is_some_and(|c| c <= DENSE_GRID_CAP);
                if dense {
                    let grid = cumulative_counts(&b, d, m);
                    let side = m as usize + 1;
                    lattice.for_each(|k, _| {
                        let idx = k.iter().fold(0usize, |acc, &v| acc * side + v as usize);
                        values.push(grid[idx] as f64 / n);
                    });
                } else {
                    lattice.for_each(|k, _| {
                        let hits = b.iter().filter(|bj| bj.iter().zip(k).all(|(a, c)| a <= c)).count();
                        values.push(hits as f64 / n);
                    });
                }
                Fitted::SimplexCdf { lattice, values }
            }
            EstimatorKind::HypercubeCdf => {
                cube_capacity(d, m + 1)?;
                let grid = cumulative_counts(&bins(samples, m), d, m);
                Fitted::HypercubeCdf {
                    values: grid.into_iter().map(|c| c as f64 / n).collect(),
                }
            }
            EstimatorKind::HypercubeDensity => {
                cube_capacity(d, m)?;
                let mut counts: HashMap<Vec<u32>, u32> = HashMap::new();
                for b in bins(samples, m) {
                    if b.iter().all(|&v| (1..=m).contains(&v)) {
                        let cell = b.iter().map(|v| v - 1).collect();
                        *counts.entry(cell).or_default() += 1;
                    }
                }
                let mut cells: Vec<(Vec<u32>, f64)> =
                    counts.into_iter().map(|(c, k)| (c, k as f64 / n)).collect();
                cells.sort_by(|a, b| a.0.cmp(&b.0));
                Fitted::HypercubeDensity { cells }
            }
        };
        Ok(Estimator {
            config,
            dim: d,
            fitted,
        })
    }

    pub fn config(&self) -> EstimatorConfig {
        self.config
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if !self.config.kind.domain().contains(x) {
            return domain(format!("evaluation point {x:?} lies outside the {:?} domain", self.config.kind.domain()));
        }
        match &self.fitted {
            Fitted::SimplexCdf { lattice, values } => {
                Ok(simplex_mixture(lattice, values, &SimplexPoint::new(x.to_vec())?))
            }
            Fitted::HypercubeCdf { values } => Ok(self.cube_cdf(values, x)),
            Fitted::HypercubeDensity { cells } => Ok(self.cube_density(cells, x)),
        }
    }

    /// Evaluates at every grid point in parallel.
    pub fn eval_grid(&self, grid: &[Vec<f64>]) -> Result<Vec<f64>> {
        grid.par_iter().map(|x| self.eval(x)).collect()
    }

    fn cube_cdf(&self, values: &[f64], x: &[f64]) -> f64 {
        let m = self.config.m;
        let tables: Vec<Vec<f64>> = x.iter().map(|&xi| binomial_table(m, clamp_unit(xi))).collect();
        let mut k = vec![0u32; self.dim];
        let mut acc = PairwiseSum::new();
        let mut idx = 0;
        loop {
            let f = values[idx];
            if f != 0.0 {
                let w: f64 = k.iter().zip(&tables).map(|(&ki, t)| t[ki as usize]).product();
                acc.push(f * w);
            }
            idx += 1;
            if !odometer(&mut k, m + 1) {
                break;
            }
        }
        acc.total()
    }

    fn cube_density(&self, cells: &[(Vec<u32>, f64)], x: &[f64]) -> f64 {
        let m = self.config.m;
        let tables: Vec<Vec<f64>> = x.iter().map(|&xi| binomial_table(m - 1, clamp_unit(xi))).collect();
        let mut acc = PairwiseSum::new();
        for (cell, p) in cells {
            let w: f64 = cell.iter().zip(&tables).map(|(&c, t)| t[c as usize]).product();
            acc.push(p * w);
        }
        (m as f64).powi(self.dim as i32) * acc.total()
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

fn cube_capacity(d: usize, side: u32) -> Result<()> {
    let requested = (side as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if requested > DEFAULT_LATTICE_CAP as u128 {
        return Err(Error::Capacity {
            what: "hypercube grid",
            requested,
            cap: DEFAULT_LATTICE_CAP as u128,
        });
    }
    Ok(())
}

fn simplex_mixture(lattice: &Lattice, values: &[f64], x: &SimplexPoint) -> f64 {
    let m = lattice.degree();
    let d = lattice.dim();
    let tables: Vec<Vec<f64>> = x.barycentric().map(|xi| power_table(xi, m)).collect();
    let lead = ln_gamma_unchecked(m as f64 + 1.0);
    let mut acc = PairwiseSum::new();
    let mut idx = 0;
    lattice.for_each(|k, last| {
        let f = values[idx];
        idx += 1;
        if f == 0.0 {
            return;
        }
        let mut t = lead;
        for (i, &ki) in k.iter().enumerate() {
            t += tables[i][ki as usize];
        }
        t += tables[d][last as usize];
        acc.push(f * t.exp());
    });
    acc.total()
}

/// `Σ_{‖k‖≤m} F_n(k/m) P_{k,m}(x)`.
pub fn bernstein_cdf_simplex(samples: &SampleSet, m: u32, x: &SimplexPoint) -> Result<f64> {
    let est = Estimator::fit(EstimatorConfig::new(m, EstimatorKind::SimplexCdf)?, samples)?;
    est.eval(x.coords())
}

/// `Σ_{k∈[0,m]^d} F_n(k/m) Π C(m,k_i) x_i^{k_i} (1-x_i)^{m-k_i}`.
pub fn bernstein_cdf_hypercube(samples: &SampleSet, m: u32, x: &[f64]) -> Result<f64> {
    let est = Estimator::fit(EstimatorConfig::new(m, EstimatorKind::HypercubeCdf)?, samples)?;
    est.eval(x)
}

/// `m^d Σ_{k∈[0,m-1]^d} P_n((k/m, (k+1)/m]) Π C(m-1,k_i) x_i^{k_i} (1-x_i)^{m-1-k_i}`.
pub fn bernstein_density_hypercube(samples: &SampleSet, m: u32, x: &[f64]) -> Result<f64> {
    let est = Estimator::fit(EstimatorConfig::new(m, EstimatorKind::HypercubeDensity)?, samples)?;
    est.eval(x)
}

/// `max_i |a_i - b_i|`.
pub fn sup_error_on_grid(values: &[f64], reference: &[f64]) -> Result<f64> {
    if values.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            expected: reference.len(),
            found: values.len(),
        });
    }
    Ok(values
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// The points `k/g` for `‖k‖ ≤ g`.
pub fn simplex_grid(d: usize, g: u32) -> Result<Vec<Vec<f64>>> {
    let lattice = Lattice::new(d, g)?;
    let mut out = Vec::with_capacity(lattice.len() as usize);
    lattice.for_each(|k, _| out.push(k.iter().map(|&v| v as f64 / g as f64).collect()));
    Ok(out)
}

/// The points `k/g` for `k ∈ [0,g]^d`.
pub fn hypercube_grid(d: usize, g: u32) -> Result<Vec<Vec<f64>>> {
    if d == 0 || g == 0 {
        return domain("grid needs d ≥ 1 and g ≥ 1");
    }
    cube_capacity(d, g + 1)?;
    let mut out = Vec::new();
    let mut k = vec![0u32; d];
    loop {
        out.push(k.iter().map(|&v| v as f64 / g as f64).collect());
        if !odometer(&mut k, g + 1) {
            break;
        }
    }
    Ok(out)
}

/// The grid for an estimator's domain.
pub fn grid_for(kind: EstimatorKind, d: usize, g: u32) -> Result<Vec<Vec<f64>>> {
    match kind.domain() {
        Domain::Simplex => {
            lattice_size(d, g).ok_or_else(|| Error::Domain("grid too large".into()))?;
            simplex_grid(d, g)
        }
        Domain::Hypercube => hypercube_grid(d, g),
    }
}

/// Writes `x1,...,xd,value` rows.
pub fn write_grid_csv<W: Write>(grid: &[Vec<f64>], values: &[f64], mut w: W) -> Result<()> {
    let d = grid.first().map_or(0, Vec::len);
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.push("value".into());
    writeln!(w, "{}", header.join(","))?;
    for (x, v) in grid.iter().zip(values) {
        let row: Vec<String> = x.iter().chain(std::iter::once(v)).map(|&c| fmt_f64(c)).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
