//! The polynomial family
//!
//! ```text
//! S_{r,s,m}(x) = Σ_{‖k‖≤m} P_{rk,rm}(x) P_{sk,sm}(x),
//! ```
//!
//! its Gaussian limit, exact simplex integrals through Dirichlet normalising
//! constants, the central-binomial lattice identity in exact arithmetic, and
//! a midpoint rule on the simplex for weighted integrals.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::sample::fmt_f64;
use crate::simplex::{Lattice, SimplexPoint};
use crate::specfun::{ln_gamma_correction_unchecked, ln_gamma_diff_unchecked, ln_gamma_unchecked};
use crate::sum::PairwiseSum;

/// Coordinates at or below this make the Gaussian limit singular.
pub const SINGULAR_FLOOR: f64 = 1e-14;
/// Largest dimension accepted by [`central_binomial_identity`].
pub const MAX_IDENTITY_DIM: usize = 4;
/// Largest degree accepted by [`central_binomial_identity`].
pub const MAX_IDENTITY_DEGREE: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SPolyParams {
    pub r: u32,
    pub s: u32,
    pub m: u32,
    pub d: usize,
}

impl SPolyParams {
    pub fn new(r: u32, s: u32, m: u32, d: usize) -> Result<Self> {
        if r == 0 || s == 0 || m == 0 {
            return domain(format!("r, s and m must be positive (r={r}, s={s}, m={m})"));
        }
        if d == 0 {
            return domain("dimension d must be at least 1");
        }
        Ok(SPolyParams { r, s, m, d })
    }

    /// The covariance scale `rs(r+s)`.
    pub fn scale(&self) -> f64 {
        covariance_scale(self.r, self.s)
    }
}

fn covariance_scale(r: u32, s: u32) -> f64 {
    r as f64 * s as f64 * (r as f64 + s as f64)
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_dim(d: usize, x: &SimplexPoint) -> Result<()> {
    if x.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.dim(),
        });
    }
    Ok(())
}

/// Evaluates `S_{r,s,m}` at many points, sharing the log-factorial tables.
#[derive(Debug, Clone)]
pub struct SEvaluator {
    params: SPolyParams,
    lattice: Lattice,
    constant: f64,
    // -ln Γ(rk+1) - ln Γ(sk+1), k = 0..=m
    per_index: Vec<f64>,
}

impl SEvaluator {
    pub fn new(params: SPolyParams) -> Result<Self> {
        let lattice = Lattice::new(params.d, params.m)?;
        let (r, s, m) = (params.r as f64, params.s as f64, params.m as f64);
        let constant = ln_gamma_unchecked(r * m + 1.0) + ln_gamma_unchecked(s * m + 1.0);
        let per_index = (0..=params.m)
            .map(|k| {
                let k = k as f64;
                -ln_gamma_unchecked(r * k + 1.0) - ln_gamma_unchecked(s * k + 1.0)
            })
            .collect();
        Ok(SEvaluator {
            params,
            lattice,
            constant,
            per_index,
        })
    }

    pub fn params(&self) -> SPolyParams {
        self.params
    }

    pub fn eval(&self, x: &SimplexPoint) -> Result<f64> {
        check_dim(self.params.d, x)?;
        let rs = (self.params.r + self.params.s) as f64;
        // tables[i][k] = log contribution of coordinate i holding k
        let tables: Vec<Vec<f64>> = x
            .barycentric()
            .map(|xi| {
                let lx = xi.ln();
                self.per_index
                    .iter()
                    .enumerate()
                    .map(|(k, t)| match k {
                        0 => *t,
                        _ if xi <= 0.0 => f64::NEG_INFINITY,
                        _ => t + rs * k as f64 * lx,
                    })
                    .collect()
            })
            .collect();
        let d = self.params.d;
        let mut acc = PairwiseSum::new();
        self.lattice.for_each(|k, last| {
            let mut t = self.constant + tables[d][last as usize];
            for (i, &ki) in k.iter().enumerate() {
                t += tables[i][ki as usize];
            }
            acc.push(t.exp());
        });
        Ok(acc.total())
    }
}

/// `S_{r,s,m}(x)`.
pub fn s_eval(p: SPolyParams, x: &SimplexPoint) -> Result<f64> {
    SEvaluator::new(p)?.eval(x)
}

fn check_interior(x: &SimplexPoint) -> Result<()> {
    for (index, value) in x.barycentric().enumerate() {
        if value <= SINGULAR_FLOOR {
            return Err(Error::Singular {
                index,
                value,
                floor: SINGULAR_FLOOR,
            });
        }
    }
    Ok(())
}

/// `det Σ` for `Σ = rs(r+s)(diag(x) - xxᵀ)`, by the closed form
/// `(rs(r+s))^d Π_{i=1}^{d+1} x_i`.
pub fn det_covariance_closed_form(r: u32, s: u32, x: &SimplexPoint) -> Result<f64> {
    check_interior(x)?;
    let d = x.dim() as i32;
    Ok(covariance_scale(r, s).powi(d) * x.barycentric().product::<f64>())
}

/// `det Σ` from an LU factorisation of the dense `d × d` matrix.
pub fn det_covariance_dense(r: u32, s: u32, x: &SimplexPoint) -> Result<f64> {
    check_interior(x)?;
    let c = covariance_scale(r, s);
    let v = x.coords();
    let d = v.len();
    let sigma = DMatrix::from_fn(d, d, |i, j| {
        let diag = if i == j { v[i] } else { 0.0 };
        c * (diag - v[i] * v[j])
    });
    Ok(sigma.determinant())
}

/// Both determinant routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetRoutes {
    pub closed_form: f64,
    pub dense: f64,
}

impl DetRoutes {
    pub fn relative_gap(&self) -> f64 {
        ((self.closed_form - self.dense) / self.closed_form).abs()
    }
}

pub fn det_covariance(r: u32, s: u32, x: &SimplexPoint) -> Result<DetRoutes> {
    Ok(DetRoutes {
        closed_form: det_covariance_closed_form(r, s, x)?,
        dense: det_covariance_dense(r, s, x)?,
    })
}

/// `φ_{r,s}(x) = gcd(r,s)^d / ((2π)^{d/2} (det Σ)^{1/2})`.
///
/// For `gcd(r, s) = g > 1` the pointwise limit of `m^{d/2} S_{r,s,m}(x)` is
/// `φ_{r,s}(x) / g^d`; see [`s_pointwise_limit`].
pub fn phi_eval(r: u32, s: u32, x: &SimplexPoint) -> Result<f64> {
    if r == 0 || s == 0 {
        return domain("r and s must be positive");
    }
    let det = det_covariance_closed_form(r, s, x)?;
    let d = x.dim() as f64;
    let g = gcd(r, s) as f64;
    Ok(g.powf(d) / ((2.0 * PI).powf(d / 2.0) * det.sqrt()))
}

/// `lim_{m→∞} m^{d/2} S_{r,s,m}(x) = 1 / ((2π)^{d/2} (det Σ)^{1/2})`.
///
/// Summing the product of the two multinomial local limits over `k ∈ ℤ^d`
/// gives this Gaussian integral for every `(r, s)`; it agrees with
/// [`phi_eval`] exactly when `r` and `s` are coprime.
pub fn s_pointwise_limit(r: u32, s: u32, x: &SimplexPoint) -> Result<f64> {
    let g = gcd(r, s) as f64;
    Ok(phi_eval(r, s, x)? / g.powi(x.dim() as i32))
}

/// Exact central-binomial lattice identity
/// `Σ_{‖k‖≤m} Π_{i=1}^{d+1} C(2k_i, k_i) = 4^m Π_{j=1}^m ((d-1)/2 + j)/j`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub d: usize,
    pub m: u32,
    pub lhs: BigUint,
    pub rhs: BigRational,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.rhs.is_integer() && self.rhs.numer().to_biguint().as_ref() == Some(&self.lhs)
    }
}

fn central_binomials(m: u32) -> Vec<u128> {
    // C(2k, k) = C(2k-2, k-1) · 2(2k-1)/k; exact since the product is divisible by k
    let mut out = vec![1u128];
    for k in 1..=m as u128 {
        let prev = out[k as usize - 1];
        out.push(prev * 2 * (2 * k - 1) / k);
    }
    out
}

/// Checks the identity in exact integer and rational arithmetic.
pub fn central_binomial_identity(d: usize, m: u32) -> Result<IdentityReport> {
    if d == 0 {
        return domain("dimension d must be at least 1");
    }
    if d > MAX_IDENTITY_DIM || m > MAX_IDENTITY_DEGREE {
        return Err(Error::Capacity {
            what: "exact central-binomial identity",
            requested: crate::simplex::lattice_size(d, m).unwrap_or(u128::MAX),
            cap: crate::simplex::lattice_size(MAX_IDENTITY_DIM, MAX_IDENTITY_DEGREE).unwrap(),
        });
    }
    let table = central_binomials(m);
    let lattice = Lattice::new(d, m)?;
    // each product is at most 4^m ≤ 2^120, so u128 chunks flushed on overflow suffice
    let mut lhs = BigUint::zero();
    let mut chunk: u128 = 0;
    lattice.for_each(|k, last| {
        let prod = k.iter().fold(table[last as usize], |acc, &ki| acc * table[ki as usize]);
        match chunk.checked_add(prod) {
            Some(v) => chunk = v,
            None => {
                lhs += BigUint::from(chunk);
                chunk = prod;
            }
        }
    });
    lhs += BigUint::from(chunk);

    let mut rhs = BigRational::from_integer(num_bigint::BigInt::from(4u32).pow(m));
    for j in 1..=m as i64 {
        // ((d-1)/2 + j) / j = (d - 1 + 2j) / (2j)
        rhs *= BigRational::new((d as i64 - 1 + 2 * j).into(), (2 * j).into());
    }
    Ok(IdentityReport { d, m, lhs, rhs })
}

/// `∫_S S_{r,s,m}(x) dx` through the Dirichlet normalising constant:
///
/// ```text
/// Σ_k exp( ln C_{rm,rk} + ln C_{sm,sk} + Σ_i ln Γ((r+s)k_i + 1) - ln Γ((r+s)m + d + 1) )
/// ```
///
/// with `C_{n,j}` the multinomial coefficient.
pub fn s_integral_exact(p: SPolyParams) -> Result<f64> {
    let lattice = Lattice::new(p.d, p.m)?;
    let (r, s, m) = (p.r as f64, p.s as f64, p.m as f64);
    let constant = ln_gamma_unchecked(r * m + 1.0) + ln_gamma_unchecked(s * m + 1.0)
        - ln_gamma_unchecked((r + s) * m + p.d as f64 + 1.0);
    let per_index: Vec<f64> = (0..=p.m)
        .map(|k| {
            let k = k as f64;
            ln_gamma_unchecked((r + s) * k + 1.0)
                - ln_gamma_unchecked(r * k + 1.0)
                - ln_gamma_unchecked(s * k + 1.0)
        })
        .collect();
    let mut acc = PairwiseSum::new();
    lattice.for_each(|k, last| {
        let t = k.iter().fold(per_index[last as usize], |t, &ki| t + per_index[ki as usize]);
        acc.push((constant + t).exp());
    });
    Ok(acc.total())
}

/// `2^{-d} √π Γ(m+1) / (Γ(d/2 + 1/2) Γ(m + d/2 + 1))`, the `r = s = 1` integral.
pub fn s_integral_closed_form(d: usize, m: u32) -> Result<f64> {
    if d == 0 || m == 0 {
        return domain("d and m must be at least 1");
    }
    let half_d = d as f64 / 2.0;
    let ln_ratio = -ln_gamma_diff_unchecked(m as f64 + 1.0, half_d);
    Ok(asymptotic_constant(d)? * ln_ratio.exp())
}

/// `2^{-d} √π / Γ(d/2 + 1/2)`, the limit of `m^{d/2} ∫_S S_{1,1,m}`.
pub fn asymptotic_constant(d: usize) -> Result<f64> {
    if d == 0 {
        return domain("dimension d must be at least 1");
    }
    let d = d as f64;
    Ok((-d * std::f64::consts::LN_2 + 0.5 * PI.ln() - ln_gamma_unchecked(d / 2.0 + 0.5)).exp())
}

/// Limit of `m^{d/2} ∫_S S_{r,s,m}`, the integral of [`s_pointwise_limit`]:
/// `asymptotic_constant(d) · (2 / (rs(r+s)))^{d/2}`.
pub fn s_integral_limit(r: u32, s: u32, d: usize) -> Result<f64> {
    if r == 0 || s == 0 {
        return domain("r and s must be positive");
    }
    let ratio = 2.0 / covariance_scale(r, s);
    Ok(asymptotic_constant(d)? * ratio.powf(d as f64 / 2.0))
}

/// Bounded test functions for [`weighted_integral_experiment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Zero,
    One,
    /// `x_i` (zero-based).
    Coordinate(usize),
    /// `x_i x_j` (zero-based).
    Product(usize, usize),
    /// Indicator of `‖x‖ ≤ 1/2`.
    HalfSimplex,
}

impl TestFunction {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            TestFunction::Zero => 0.0,
            TestFunction::One => 1.0,
            TestFunction::Coordinate(i) => x[i],
            TestFunction::Product(i, j) => x[i] * x[j],
            TestFunction::HalfSimplex => {
                if x.iter().sum::<f64>() <= 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        let max = match *self {
            TestFunction::Coordinate(i) => i,
            TestFunction::Product(i, j) => i.max(j),
            _ => 0,
        };
        if max >= d {
            return domain(format!("test function index {max} out of range for d = {d}"));
        }
        Ok(())
    }

    /// Parses `zero`, `one`, `half`, `x<i>` or `x<i>*x<j>` (one-based).
    pub fn parse(s: &str) -> Result<Self> {
        let coord = |t: &str| -> Result<usize> {
            t.trim()
                .strip_prefix('x')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(|n| n - 1)
                .ok_or_else(|| Error::Parse(format!("unknown test function {s:?}")))
        };
        match s.trim() {
            "zero" => Ok(TestFunction::Zero),
            "one" => Ok(TestFunction::One),
            "half" => Ok(TestFunction::HalfSimplex),
            t => match t.split_once('*') {
                Some((a, b)) => Ok(TestFunction::Product(coord(a)?, coord(b)?)),
                None => Ok(TestFunction::Coordinate(coord(t)?)),
            },
        }
    }
}

/// Midpoint rule on the simplex: cube cells of side `1/resolution` whose
/// centre keeps every barycentric coordinate at least `1/(2·resolution)`
/// from zero, each weighted by `resolution^{-d}`.
pub fn simplex_midpoint<F>(d: usize, resolution: u32, mut f: F) -> Result<f64>
where
    F: FnMut(&SimplexPoint) -> Result<f64>,
{
    if resolution == 0 {
        return domain("resolution must be positive");
    }
    // centre sum (‖c‖ + d/2)/R ≤ 1 - 1/(2R)  ⇔  2‖c‖ ≤ 2R - d - 1
    let twice = 2 * resolution as i64 - d as i64 - 1;
    if twice < 0 {
        return Ok(0.0);
    }
    let lattice = Lattice::new(d, (twice / 2) as u32)?;
    let res = resolution as f64;
    let weight = res.powi(-(d as i32));
    let mut acc = PairwiseSum::new();
    let mut err = None;
    lattice.for_each(|c, _| {
        if err.is_some() {
            return;
        }
        let coords = c.iter().map(|&ci| (ci as f64 + 0.5) / res).collect();
        match SimplexPoint::new(coords).and_then(|x| f(&x)) {
            Ok(v) => acc.push(weight * v),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(acc.total()),
    }
}

/// Default quadrature resolution per axis: 200 for `d = 1`, 120 otherwise.
pub fn default_resolution(d: usize) -> u32 {
    if d <= 1 {
        200
    } else {
        120
    }
}

/// Midpoint rule in stick-breaking angles: `x_j = c_j sin²θ_j` with
/// `c_j = Π_{i<j} cos²θ_i` and `θ ∈ [0, π/2]^d`, `resolution` cells per axis.
///
/// The Jacobian `Π_j 2 c_j sinθ_j cosθ_j` cancels the `Π x_i^{-1/2}` boundary
/// singularity of `φ_{r,s}` and stretches boundary layers of width `1/m` to
/// width `m^{-1/2}`, where a uniform barycentric grid would need `R ≫ m`.
pub fn simplex_angular_midpoint<F>(d: usize, resolution: u32, mut f: F) -> Result<f64>
where
    F: FnMut(&SimplexPoint) -> Result<f64>,
{
    if d == 0 {
        return domain("dimension d must be at least 1");
    }
    if resolution == 0 {
        return domain("resolution must be positive");
    }
    let cells = (resolution as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if cells > crate::simplex::DEFAULT_LATTICE_CAP as u128 {
        return Err(Error::Capacity {
            what: "angular quadrature grid",
            requested: cells,
            cap: crate::simplex::DEFAULT_LATTICE_CAP as u128,
        });
    }
    let h = std::f64::consts::FRAC_PI_2 / resolution as f64;
    let (sin, cos): (Vec<f64>, Vec<f64>) = (0..resolution)
        .map(|i| ((i as f64 + 0.5) * h).sin_cos())
        .unzip();
    let weight = h.powi(d as i32);
    let mut idx = vec![0usize; d];
    let mut coords = vec![0.0; d];
    let mut acc = PairwiseSum::new();
    loop {
        let mut rest = 1.0;
        let mut jac = 1.0;
        for (j, &i) in idx.iter().enumerate() {
            let (sn, cs) = (sin[i], cos[i]);
            coords[j] = rest * sn * sn;
            jac *= 2.0 * rest * sn * cs;
            rest *= cs * cs;
        }
        let x = SimplexPoint::new(coords.clone())?;
        acc.push(weight * jac * f(&x)?);
        // odometer, last axis fastest
        let mut axis = d;
        loop {
            if axis == 0 {
                return Ok(acc.total());
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < resolution as usize {
                break;
            }
            idx[axis] = 0;
        }
    }
}

/// `∫_S h(x) (m^{d/2} S_{r,s,m}(x) - φ_{r,s}(x)) dx` by [`simplex_angular_midpoint`].
pub fn weighted_integral_experiment(p: SPolyParams, h: TestFunction, resolution: u32) -> Result<f64> {
    h.check_dim(p.d)?;
    if h == TestFunction::Zero {
        return Ok(0.0);
    }
    let eval = SEvaluator::new(p)?;
    let scale = (p.m as f64).powf(p.d as f64 / 2.0);
    simplex_angular_midpoint(p.d, resolution, |x| {
        let w = h.eval(x.coords());
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(w * (scale * eval.eval(x)? - phi_eval(p.r, p.s, x)?))
    })
}

/// Midpoint-rule integral of `φ_{r,s}` over the simplex.
pub fn phi_integral(r: u32, s: u32, d: usize, resolution: u32) -> Result<f64> {
    simplex_midpoint(d, resolution, |x| phi_eval(r, s, x))
}

/// `Γ(m+1) / (m^{1/2} Γ(m+1/2))`, with the `z ln z` parts of the two
/// log-gammas cancelled analytically.
pub fn gamma_ratio(m: f64) -> Result<f64> {
    Ok(ln_gamma_ratio(m)?.exp())
}

fn ln_gamma_ratio(m: f64) -> Result<f64> {
    if !(m.is_finite() && m >= 1.0) {
        return domain(format!("m must be at least 1, got {m}"));
    }
    let main = (m + 0.5) * (1.0 / m).ln_1p() - m * (0.5 / m).ln_1p() - 0.5;
    Ok(main + ln_gamma_correction_unchecked(m + 1.0) - ln_gamma_correction_unchecked(m + 0.5))
}

/// `m² |Γ(m+1)/(m^{1/2} Γ(m+1/2)) - 1 - 1/(8m)|`.
pub fn gamma_ratio_residual(m: f64) -> Result<f64> {
    let excess = ln_gamma_ratio(m)?.exp_m1() - 0.125 / m;
    Ok(m * m * excess.abs())
}

/// Empirical envelope for [`gamma_ratio_residual`] on `m ≥ 10`.
pub const GAMMA_RATIO_ENVELOPE: f64 = 0.05;

/// One row of a convergence table for `m^{d/2} ∫_S S_{r,s,m}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub d: usize,
    pub r: u32,
    pub s: u32,
    pub m: u32,
    pub value: f64,
    pub limit: f64,
    /// `m · |value - limit|`
    pub scaled_error: f64,
}

impl ConvergenceRow {
    pub fn error(&self) -> f64 {
        (self.value - self.limit).abs()
    }
}

pub fn convergence_table(d: usize, r: u32, s: u32, ms: &[u32]) -> Result<Vec<ConvergenceRow>> {
    let limit = s_integral_limit(r, s, d)?;
    ms.iter()
        .map(|&m| {
            let p = SPolyParams::new(r, s, m, d)?;
            let value = (m as f64).powf(d as f64 / 2.0) * s_integral_exact(p)?;
            Ok(ConvergenceRow {
                d,
                r,
                s,
                m,
                value,
                limit,
                scaled_error: m as f64 * (value - limit).abs(),
            })
        })
        .collect()
}

/// `m · |error|` stays within twice its value at the first `m`.
pub fn scaled_error_bounded(rows: &[ConvergenceRow]) -> bool {
    let Some(first) = rows.first() else {
        return false;
    };
    rows.iter().all(|r| r.scaled_error <= 2.0 * first.scaled_error)
}

pub const CONVERGENCE_CSV_HEADER: &str = "d,r,s,m,value,limit,scaled_error";

pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], mut w: W) -> Result<()> {
    writeln!(w, "{CONVERGENCE_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.d,
            r.r,
            r.s,
            r.m,
            fmt_f64(r.value),
            fmt_f64(r.limit),
            fmt_f64(r.scaled_error)
        )?;
    }
    Ok(())
}

/// One row of a local-limit comparison at a fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalLimitRow {
    pub d: usize,
    pub r: u32,
    pub s: u32,
    pub m: u32,
    /// `m^{d/2} S_{r,s,m}(x)`
    pub value: f64,
    pub phi: f64,
    pub abs_error: f64,
}

pub fn local_limit_table(r: u32, s: u32, x: &SimplexPoint, ms: &[u32]) -> Result<Vec<LocalLimitRow>> {
    let d = x.dim();
    let phi = phi_eval(r, s, x)?;
    ms.iter()
        .map(|&m| {
            let value = (m as f64).powf(d as f64 / 2.0) * s_eval(SPolyParams::new(r, s, m, d)?, x)?;
            Ok(LocalLimitRow {
                d,
                r,
                s,
                m,
                value,
                phi,
                abs_error: (value - phi).abs(),
            })
        })
        .collect()
}

pub const LOCAL_LIMIT_CSV_HEADER: &str = "d,r,s,m,value,phi,abs_error";

pub fn write_local_limit_csv<W: Write>(rows: &[LocalLimitRow], mut w: W) -> Result<()> {
    writeln!(w, "{LOCAL_LIMIT_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.d,
            r.r,
            r.s,
            r.m,
            fmt_f64(r.value),
            fmt_f64(r.phi),
            fmt_f64(r.abs_error)
        )?;
    }
    Ok(())
}
