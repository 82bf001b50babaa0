//! Simplex points, the multi-index lattice `{k : ‖k‖ ≤ m}`, multinomial
//! probabilities in log space, and Dirichlet sampling.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{domain, Error, Result};
use crate::sample::{Domain, SampleSet};
use crate::specfun::ln_gamma_unchecked;
use crate::sum::PairwiseSum;

/// Default cap on the number of lattice points a single operation may visit.
pub const DEFAULT_LATTICE_CAP: u64 = 100_000_000;

/// Slack allowed on `‖x‖ ≤ 1` before a point is rejected.
pub const SIMPLEX_SLACK: f64 = 1e-12;

/// A point of the closed d-simplex with its barycentric completion
/// `x_{d+1} = 1 - ‖x‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    coords: Vec<f64>,
    last: f64,
}

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return domain("simplex point needs at least one coordinate");
        }
        for (i, &c) in coords.iter().enumerate() {
            if !c.is_finite() || c < 0.0 {
                return domain(format!("coordinate {i} = {c} is not a finite nonnegative value"));
            }
        }
        let norm: f64 = coords.iter().sum();
        if norm > 1.0 + SIMPLEX_SLACK {
            return domain(format!("coordinates sum to {norm} > 1"));
        }
        let last = (1.0 - norm).max(0.0);
        Ok(SimplexPoint { coords, last })
    }

    /// The barycenter `(1/(d+1), ..., 1/(d+1))`.
    pub fn barycenter(d: usize) -> Result<Self> {
        Self::new(vec![1.0 / (d as f64 + 1.0); d])
    }

    /// Vertex `e_i` for `i < d`, or the origin for `i == d`.
    pub fn vertex(d: usize, i: usize) -> Result<Self> {
        if i > d {
            return domain(format!("vertex index {i} out of range for d = {d}"));
        }
        let mut c = vec![0.0; d];
        if i < d {
            c[i] = 1.0;
        }
        Self::new(c)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// `x_{d+1} = 1 - ‖x‖`, clamped at zero.
    pub fn last(&self) -> f64 {
        self.last
    }

    /// All `d + 1` barycentric coordinates.
    pub fn barycentric(&self) -> impl Iterator<Item = f64> + '_ {
        self.coords.iter().copied().chain(std::iter::once(self.last))
    }

    pub fn min_coordinate(&self) -> f64 {
        self.barycentric().fold(f64::INFINITY, f64::min)
    }

    pub fn is_interior(&self) -> bool {
        self.min_coordinate() > 0.0
    }
}

/// A lattice index `k` with `‖k‖ ≤ m` and completion `k_{d+1} = m - ‖k‖`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    k: Vec<u32>,
    m: u32,
}

impl MultiIndex {
    pub fn new(k: Vec<u32>, m: u32) -> Result<Self> {
        let norm: u64 = k.iter().map(|&v| v as u64).sum();
        if norm > m as u64 {
            return domain(format!("index norm {norm} exceeds degree {m}"));
        }
        Ok(MultiIndex { k, m })
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn entries(&self) -> &[u32] {
        &self.k
    }

    pub fn last(&self) -> u32 {
        self.m - self.k.iter().sum::<u32>()
    }

    pub fn barycentric(&self) -> impl Iterator<Item = u32> + '_ {
        self.k.iter().copied().chain(std::iter::once(self.last()))
    }
}

/// Nonnegative weights `(γ_1, ..., γ_{d+1})` with total mass `M > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    gamma: Vec<f64>,
    total: f64,
}

impl WeightVector {
    /// Builds from all `d + 1` weights; the total is their sum.
    pub fn new(gamma: Vec<f64>) -> Result<Self> {
        if gamma.len() < 2 {
            return domain("weight vector needs d + 1 ≥ 2 entries");
        }
        if let Some(g) = gamma.iter().find(|g| !g.is_finite() || **g < 0.0) {
            return domain(format!("weight {g} is not a finite nonnegative value"));
        }
        let total: f64 = gamma.iter().sum();
        if total <= 0.0 {
            return domain("total mass M must be positive");
        }
        Ok(WeightVector { gamma, total })
    }

    /// Builds from the first `d` weights and the total mass, completing
    /// `γ_{d+1} = M - ‖γ‖`.
    pub fn from_partial(gamma: &[f64], total: f64) -> Result<Self> {
        let norm: f64 = gamma.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return domain(format!("total mass {total} must be positive"));
        }
        if norm > total * (1.0 + 1e-12) {
            return domain(format!("‖γ‖ = {norm} exceeds M = {total}"));
        }
        let mut full = gamma.to_vec();
        full.push((total - norm).max(0.0));
        let mut w = Self::new(full)?;
        w.total = total;
        Ok(w)
    }

    pub fn dim(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// All `d + 1` weights.
    pub fn weights(&self) -> &[f64] {
        &self.gamma
    }

    /// Indices with strictly positive weight.
    pub fn active(&self) -> impl Iterator<Item = usize> + '_ {
        self.gamma.iter().enumerate().filter(|(_, g)| **g > 0.0).map(|(i, _)| i)
    }
}

/// `C(m + d, d)`, or `None` on overflow.
pub fn lattice_size(d: usize, m: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = acc.checked_mul(m as u128 + i)? / i;
    }
    Some(acc)
}

/// The lattice `{k ∈ ℕ₀^d : ‖k‖ ≤ m}` visited in lexicographic order.
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    d: usize,
    m: u32,
    len: u64,
}

impl Lattice {
    pub fn new(d: usize, m: u32) -> Result<Self> {
        Self::with_cap(d, m, DEFAULT_LATTICE_CAP)
    }

    pub fn with_cap(d: usize, m: u32, cap: u64) -> Result<Self> {
        if d == 0 {
            return domain("dimension d must be at least 1");
        }
        let size = lattice_size(d, m).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::Capacity {
                what: "simplex lattice",
                requested: size,
                cap: cap as u128,
            });
        }
        Ok(Lattice {
            d,
            m,
            len: size as u64,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Calls `f(k, k_{d+1})` for every index in lexicographic order on `(k_1, ..., k_d)`.
    pub fn for_each<F: FnMut(&[u32], u32)>(&self, mut f: F) {
        let d = self.d;
        let m = self.m;
        let mut k = vec![0u32; d];
        let mut norm = 0u32;
        loop {
            f(&k, m - norm);
            // odometer step, last coordinate fastest
            let mut i = d;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if norm < m {
                    k[i] += 1;
                    norm += 1;
                    break;
                }
                norm -= k[i];
                k[i] = 0;
            }
        }
    }

    pub fn indices(&self) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(self.len as usize);
        self.for_each(|k, _| {
            out.push(MultiIndex {
                k: k.to_vec(),
                m: self.m,
            })
        });
        out
    }
}

/// Every `k` with `‖k‖ ≤ m`, lexicographically ordered; `C(m+d, d)` entries.
pub fn enumerate_lattice(d: usize, m: u32) -> Result<Vec<MultiIndex>> {
    Ok(Lattice::new(d, m)?.indices())
}

/// `ln P_{k,m}(x)` with the convention `0 · ln 0 = 0`; `-∞` when some
/// `x_i = 0` carries `k_i > 0`.
pub fn multinomial_log_pmf(k: &MultiIndex, x: &SimplexPoint) -> Result<f64> {
    if k.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: x.dim(),
        });
    }
    Ok(log_pmf_parts(k.entries(), k.last(), k.degree(), x))
}

pub(crate) fn log_pmf_parts(k: &[u32], k_last: u32, m: u32, x: &SimplexPoint) -> f64 {
    let mut acc = ln_gamma_unchecked(m as f64 + 1.0);
    let pairs = k.iter().copied().chain(std::iter::once(k_last)).zip(x.barycentric());
    for (ki, xi) in pairs {
        if ki == 0 {
            continue;
        }
        if xi <= 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += ki as f64 * xi.ln() - ln_gamma_unchecked(ki as f64 + 1.0);
    }
    acc
}

/// `Σ_{‖k‖≤m} P_{k,m}(x)`, which is 1 by the multinomial theorem.
pub fn pmf_normalization_check(d: usize, m: u32, x: &SimplexPoint) -> Result<f64> {
    if x.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.dim(),
        });
    }
    let lattice = Lattice::new(d, m)?;
    let mut acc = PairwiseSum::new();
    lattice.for_each(|k, last| acc.push(log_pmf_parts(k, last, m, x).exp()));
    Ok(acc.total())
}

/// Draws one Dirichlet(α) vector (all `α.len()` components) by normalising
/// independent Gamma(α_i, 1) variates.
pub fn dirichlet_draw<R: Rng + ?Sized>(gammas: &[Gamma<f64>], rng: &mut R) -> Vec<f64> {
    loop {
        let draws: Vec<f64> = gammas.iter().map(|g| g.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        // all components can underflow for very small shapes; redraw
        if total > 0.0 {
            return draws.into_iter().map(|v| v / total).collect();
        }
    }
}

pub(crate) fn gamma_samplers(alpha: &[f64]) -> Result<Vec<Gamma<f64>>> {
    alpha
        .iter()
        .map(|&a| {
            if !(a.is_finite() && a > 0.0) {
                return domain(format!("Dirichlet parameter {a} must be positive"));
            }
            Gamma::new(a, 1.0).map_err(|e| Error::Domain(e.to_string()))
        })
        .collect()
}

/// `n` Dirichlet(α) draws on the `(α.len() - 1)`-simplex, deterministic in `seed`.
///
/// Each draw keeps the first `d = α.len() - 1` coordinates; the last is implied.
pub fn sample_dirichlet(alpha: &[f64], n: usize, seed: u64) -> Result<SampleSet> {
    if alpha.len() < 2 {
        return domain("Dirichlet sampling needs at least two parameters");
    }
    if n == 0 {
        return domain("sample count must be at least 1");
    }
    let gammas = gamma_samplers(alpha)?;
    let d = alpha.len() - 1;
    let mut rng = crate::rng_for(seed, 0);
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        let draw = dirichlet_draw(&gammas, &mut rng);
        data.extend_from_slice(&draw[..d]);
    }
    let provenance = format!(
        "dirichlet alpha=[{}] n={n} seed={seed}",
        alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
    );
    SampleSet::from_flat(d, data, Domain::Simplex, Some(provenance))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_small_cases() {
        let l = enumerate_lattice(1, 2).unwrap();
        let ks: Vec<_> = l.iter().map(|k| k.entries().to_vec()).collect();
        assert_eq!(ks, vec![vec![0], vec![1], vec![2]]);

        let l = enumerate_lattice(2, 2).unwrap();
        let ks: Vec<_> = l.iter().map(|k| k.entries().to_vec()).collect();
        assert_eq!(
            ks,
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![2, 0]]
        );

        let l = enumerate_lattice(3, 0).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].entries(), &[0, 0, 0]);
        assert_eq!(l[0].last(), 0);
    }

    #[test]
    fn lattice_capacity_is_enforced() {
        assert!(matches!(
            Lattice::with_cap(3, 10, 100),
            Err(Error::Capacity { requested: 286, .. })
        ));
        assert!(Lattice::new(0, 3).is_err());
        assert!(Lattice::new(40, 1000).is_err());
    }

    #[test]
    fn log_pmf_examples() {
        let x = SimplexPoint::new(vec![0.5]).unwrap();
        let k = MultiIndex::new(vec![1], 2).unwrap();
        assert!((multinomial_log_pmf(&k, &x).unwrap() - 0.5f64.ln()).abs() < 1e-15);

        let x = SimplexPoint::new(vec![0.3, 0.2, 0.1]).unwrap();
        let k = MultiIndex::new(vec![0, 0, 0], 0).unwrap();
        assert_eq!(multinomial_log_pmf(&k, &x).unwrap(), 0.0);

        let third = 1.0 / 3.0;
        let x = SimplexPoint::new(vec![third, third]).unwrap();
        let k = MultiIndex::new(vec![1, 1], 3).unwrap();
        assert!((multinomial_log_pmf(&k, &x).unwrap() - (2.0f64 / 9.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn log_pmf_boundary_convention() {
        let x = SimplexPoint::new(vec![0.0, 0.4]).unwrap();
        let zero_on_empty = MultiIndex::new(vec![0, 2], 3).unwrap();
        assert!(multinomial_log_pmf(&zero_on_empty, &x).unwrap().is_finite());
        let mass_on_empty = MultiIndex::new(vec![1, 1], 3).unwrap();
        assert_eq!(multinomial_log_pmf(&mass_on_empty, &x).unwrap(), f64::NEG_INFINITY);
        let wrong_dim = MultiIndex::new(vec![1], 3).unwrap();
        assert!(matches!(
            multinomial_log_pmf(&wrong_dim, &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn normalization_examples() {
        let x = SimplexPoint::new(vec![0.2, 0.3]).unwrap();
        assert!((pmf_normalization_check(2, 5, &x).unwrap() - 1.0).abs() < 1e-12);
        let x = SimplexPoint::new(vec![0.25]).unwrap();
        assert!((pmf_normalization_check(1, 1, &x).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn point_validation() {
        assert!(SimplexPoint::new(vec![0.7, 0.4]).is_err());
        assert!(SimplexPoint::new(vec![-0.1, 0.4]).is_err());
        assert!(SimplexPoint::new(vec![]).is_err());
        let p = SimplexPoint::new(vec![0.5, 0.5 + 1e-13]).unwrap();
        assert_eq!(p.last(), 0.0);
        assert!(!p.is_interior());
        assert!(SimplexPoint::barycenter(3).unwrap().is_interior());
    }

    #[test]
    fn weight_vector_completion() {
        let w = WeightVector::from_partial(&[1.0, 0.5], 2.0).unwrap();
        assert_eq!(w.weights(), &[1.0, 0.5, 0.5]);
        assert_eq!(w.total(), 2.0);
        assert!(WeightVector::from_partial(&[1.5, 1.0], 2.0).is_err());
        assert!(WeightVector::new(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn dirichlet_is_deterministic() {
        let a = sample_dirichlet(&[1.0, 2.0, 0.5], 50, 9).unwrap();
        let b = sample_dirichlet(&[1.0, 2.0, 0.5], 50, 9).unwrap();
        assert_eq!(a.flat(), b.flat());
        let c = sample_dirichlet(&[1.0, 2.0, 0.5], 50, 10).unwrap();
        assert_ne!(a.flat(), c.flat());
        assert!(sample_dirichlet(&[1.0, 0.0], 5, 1).is_err());
        assert!(sample_dirichlet(&[1.0, 1.0], 0, 1).is_err());
    }
}
