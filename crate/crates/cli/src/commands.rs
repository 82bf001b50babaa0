//! Subcommand bodies. Each validates every parameter, computes, then writes
//! its CSV in one atomic step.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use cmsimplex::estimate::{empirical_cdf, grid_for, sup_error_on_grid, write_grid_csv, Estimator, EstimatorConfig, EstimatorKind};
use cmsimplex::ineq::{fuzz_inequalities, Check, FuzzConfig};
use cmsimplex::monotone::{cm_scan_with, linear_grid, random_instance, MonotoneInstance, ScanConfig, MAX_H_ORDER};
use cmsimplex::report::Route;
use cmsimplex::sample::fmt_f64;
use cmsimplex::simplex::{lattice_size, sample_dirichlet, DEFAULT_LATTICE_CAP};
use cmsimplex::spoly::{
    central_binomial_identity, convergence_table, local_limit_table, scaled_error_bounded,
    write_convergence_csv, write_local_limit_csv, MAX_IDENTITY_DEGREE, MAX_IDENTITY_DIM,
};
use cmsimplex::{rng_for, SampleSet, SimplexPoint, WeightVector};

use crate::config::{resolve_output, write_output};
use crate::{
    CmScanArgs, EstimateArgs, Failure, IdentityArgs, IneqFuzzArgs, LcltArgs, STableArgs, SampleGenArgs,
};

type Outcome = Result<(), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn positive(name: &str, v: i64) -> Result<u32, Failure> {
    if v < 1 || v > u32::MAX as i64 {
        return usage(format!("--{name} must be a positive integer, got {v}"));
    }
    Ok(v as u32)
}

fn list<T: std::str::FromStr>(name: &str, s: &str) -> Result<Vec<T>, Failure> {
    let out: Result<Vec<T>, _> = s.split(',').map(|t| t.trim().parse::<T>()).collect();
    match out {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => usage(format!("--{name} expects a comma-separated list, got {s:?}")),
    }
}

fn positive_list(name: &str, s: &str) -> Result<Vec<u32>, Failure> {
    let v: Vec<u32> = list(name, s)?;
    if v.contains(&0) {
        return usage(format!("--{name} entries must be positive"));
    }
    Ok(v)
}

fn rs_pairs(r: &str, s: &str) -> Result<Vec<(u32, u32)>, Failure> {
    let r = positive_list("r", r)?;
    let s = positive_list("s", s)?;
    if r.len() != s.len() {
        return usage(format!("--r has {} entries but --s has {}", r.len(), s.len()));
    }
    Ok(r.into_iter().zip(s).collect())
}

fn check_lattice(d: usize, m: u32) -> Result<(), Failure> {
    match lattice_size(d, m) {
        Some(n) if n <= DEFAULT_LATTICE_CAP as u128 => Ok(()),
        _ => usage(format!(
            "lattice for d={d}, m={m} exceeds the cap of {DEFAULT_LATTICE_CAP} points"
        )),
    }
}

fn output(out: &Option<PathBuf>, default_name: &str) -> Result<Option<PathBuf>, Failure> {
    resolve_output(out.as_deref(), default_name).map_err(Failure::Usage)
}

fn emit(path: &Option<PathBuf>, text: &str) -> Outcome {
    write_output(path.as_deref(), text.as_bytes()).map_err(Failure::Usage)
}

fn bytes_to_string(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

pub fn cm_scan(a: CmScanArgs) -> Outcome {
    let d = positive("d", a.d)? as usize;
    let max_order = positive("max-order", a.max_order)?;
    if max_order >= MAX_H_ORDER {
        return usage(format!("--max-order must be at most {}", MAX_H_ORDER - 1));
    }
    let parts: Vec<f64> = list("grid", &a.grid.replace(':', ","))?;
    let [lo, hi, step] = parts[..] else {
        return usage("--grid expects lo:hi:step");
    };
    if !(lo > 0.0) {
        return usage("--grid must start above 0");
    }
    let grid = linear_grid(lo, hi, step)?;
    let mut instances: Vec<MonotoneInstance> = match (&a.gamma, &a.x) {
        (Some(g), Some(x)) => {
            let gamma: Vec<f64> = list("gamma", g)?;
            let x: Vec<f64> = list("x", x)?;
            if gamma.len() != d + 1 || x.len() != d {
                return usage(format!("--gamma needs {} entries and --x needs {d}", d + 1));
            }
            let inst = MonotoneInstance::new(WeightVector::new(gamma)?, SimplexPoint::new(x)?)?;
            if inst.is_degenerate() {
                return usage("instance has fewer than two positive weights");
            }
            vec![inst]
        }
        (None, None) => {
            let count = positive("instances", a.instances)?;
            (0..count as u64)
                .map(|i| random_instance(d, &mut rng_for(a.seed, i)))
                .collect::<Result<_, _>>()?
        }
        _ => return usage("--gamma and --x must be given together"),
    };
    let out = output(&a.common.out, "cm-scan.csv")?;
    if a.self_test_corrupt {
        instances = instances.into_iter().map(MonotoneInstance::corrupted).collect();
    }

    let cfg = ScanConfig::default();
    let mut csv = String::from("instance,a,order,value,margin\n");
    let mut failed = 0;
    let mut worst = f64::INFINITY;
    for (i, inst) in instances.iter().enumerate() {
        let rep = cm_scan_with(inst, &grid, max_order, &cfg)?;
        if !rep.pass {
            failed += 1;
        }
        worst = worst.min(rep.max_violation);
        for r in &rep.rows {
            let order = match r.route {
                Route::Derivative => r.order as i64,
                Route::Difference => -(r.order as i64),
            };
            let _ = writeln!(csv, "{i},{},{order},{},{}", fmt_f64(r.a), fmt_f64(r.value), fmt_f64(r.margin));
        }
    }
    let _ = writeln!(
        csv,
        "# instances={} failed={failed} min_margin={}",
        instances.len(),
        fmt_f64(worst)
    );
    emit(&out, &csv)?;
    eprintln!(
        "cm-scan: {} instances, {failed} failed, min margin {}",
        instances.len(),
        fmt_f64(worst)
    );
    if failed > 0 {
        return Err(Failure::Violation(format!("{failed} instance(s) failed the scan")));
    }
    Ok(())
}

pub fn ineq_fuzz(a: IneqFuzzArgs) -> Outcome {
    let trials = positive("trials", a.trials)? as usize;
    let dmax = positive("d", a.d)? as usize;
    let out = output(&a.common.out, "ineq-fuzz.csv")?;
    let mut cfg = FuzzConfig::new(trials, dmax, a.seed);
    cfg.flip_sign = a.self_test_corrupt;
    let outcome = fuzz_inequalities(&cfg)?;
    let mut buf = Vec::new();
    outcome.write_csv(&mut buf)?;
    emit(&out, &bytes_to_string(buf))?;
    let per: Vec<String> = Check::ALL
        .iter()
        .map(|&c| format!("{} {}", c.as_str(), fmt_f64(outcome.min_margin(c))))
        .collect();
    let min = outcome.records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    eprintln!("ineq-fuzz: {trials} trials, min margin {} ({})", fmt_f64(min), per.join(", "));
    if !outcome.report.pass {
        return Err(Failure::Violation(format!("min margin {} below tolerance", fmt_f64(min))));
    }
    Ok(())
}

pub fn s_table(a: STableArgs) -> Outcome {
    let d = positive("d", a.d)? as usize;
    let ms = positive_list("m-list", &a.m_list)?;
    let pairs = rs_pairs(&a.r, &a.s)?;
    check_lattice(d, *ms.iter().max().expect("non-empty"))?;
    let out = output(&a.common.out, "s-table.csv")?;

    let mut rows = Vec::new();
    let mut unbounded = Vec::new();
    for &(r, s) in &pairs {
        let t = convergence_table(d, r, s, &ms)?;
        // only r = s = 1 carries an O(1/m) rate; other pairs converge like m^{-1/2}
        if (r, s) == (1, 1) && !scaled_error_bounded(&t) {
            unbounded.push(format!("({r},{s})"));
        } else if (r, s) != (1, 1) {
            eprintln!("s-table: ({r},{s}) rows are informational; no 1/m rate is claimed");
        }
        rows.extend(t);
    }
    let mut buf = Vec::new();
    write_convergence_csv(&rows, &mut buf)?;
    emit(&out, &bytes_to_string(buf))?;
    if !unbounded.is_empty() {
        return Err(Failure::Violation(format!(
            "m·|error| grows for (r,s) = {}",
            unbounded.join(", ")
        )));
    }
    Ok(())
}

pub fn lclt_compare(a: LcltArgs) -> Outcome {
    let d = positive("d", a.d)? as usize;
    let ms = positive_list("m-list", &a.m_list)?;
    let pairs = rs_pairs(&a.r, &a.s)?;
    let x = match &a.x {
        Some(s) => {
            let v: Vec<f64> = list("x", s)?;
            if v.len() != d {
                return usage(format!("--x needs {d} coordinates"));
            }
            SimplexPoint::new(v)?
        }
        None => SimplexPoint::barycenter(d)?,
    };
    if !x.is_interior() {
        return usage("--x must be an interior point");
    }
    check_lattice(d, *ms.iter().max().expect("non-empty"))?;
    let out = output(&a.common.out, "lclt-compare.csv")?;

    let mut rows = Vec::new();
    let mut stalled = Vec::new();
    for &(r, s) in &pairs {
        let t = local_limit_table(r, s, &x, &ms)?;
        if !t.windows(2).all(|w| w[1].abs_error < w[0].abs_error) {
            stalled.push(format!("({r},{s})"));
        }
        rows.extend(t);
    }
    let mut buf = Vec::new();
    write_local_limit_csv(&rows, &mut buf)?;
    emit(&out, &bytes_to_string(buf))?;
    if !stalled.is_empty() {
        return Err(Failure::Violation(format!(
            "error does not decrease for (r,s) = {}",
            stalled.join(", ")
        )));
    }
    Ok(())
}

pub fn identity_check(a: IdentityArgs) -> Outcome {
    let d = positive("d", a.d)? as usize;
    if d > MAX_IDENTITY_DIM {
        return usage(format!("--d must be at most {MAX_IDENTITY_DIM}"));
    }
    if a.m < 0 || a.m > MAX_IDENTITY_DEGREE as i64 {
        return usage(format!("--m must lie in 0..={MAX_IDENTITY_DEGREE}"));
    }
    let out = output(&a.common.out, "identity-check.csv")?;
    let mut csv = String::from("d,m,lhs,rhs,holds\n");
    let mut broken = Vec::new();
    for m in 0..=a.m as u32 {
        let rep = central_binomial_identity(d, m)?;
        let _ = writeln!(csv, "{d},{m},{},{},{}", rep.lhs, rep.rhs, rep.holds());
        if !rep.holds() {
            broken.push(m);
        }
    }
    emit(&out, &csv)?;
    if !broken.is_empty() {
        return Err(Failure::Violation(format!("identity fails for m = {broken:?}")));
    }
    Ok(())
}

pub fn estimate(a: EstimateArgs) -> Outcome {
    let kind: EstimatorKind = a.kind.parse()?;
    let m = positive("m", a.m)?;
    let g = positive("grid", a.grid)?;
    let file = File::open(&a.samples)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", a.samples.display())))?;
    let samples = SampleSet::read_csv(BufReader::new(file), kind.domain())?;
    let d = samples.dim();
    if kind == EstimatorKind::SimplexCdf {
        check_lattice(d, m)?;
    }
    let grid = grid_for(kind, d, g)?;
    let out = output(&a.common.out, "estimate.csv")?;

    let est = Estimator::fit(EstimatorConfig::new(m, kind)?, &samples)?;
    let values = est.eval_grid(&grid)?;
    let mut buf = Vec::new();
    write_grid_csv(&grid, &values, &mut buf)?;
    emit(&out, &bytes_to_string(buf))?;
    if kind != EstimatorKind::HypercubeDensity {
        let reference: Vec<f64> = grid
            .iter()
            .map(|y| empirical_cdf(&samples, y))
            .collect::<Result<_, _>>()?;
        let sup = sup_error_on_grid(&values, &reference)?;
        eprintln!(
            "estimate: {} n={} m={m}, sup |F_hat - F_n| on {} grid points = {}",
            kind.as_str(),
            samples.len(),
            grid.len(),
            fmt_f64(sup)
        );
    }
    Ok(())
}

pub fn sample_gen(a: SampleGenArgs) -> Outcome {
    let alpha: Vec<f64> = match &a.alpha {
        Some(s) => list("alpha", s)?,
        None => vec![1.0; positive("d", a.d)? as usize + 1],
    };
    if alpha.len() < 2 || alpha.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
        return usage("--alpha needs at least two positive entries");
    }
    let n = positive("n", a.n)? as usize;
    let out = output(&a.common.out, "samples.csv")?;
    let samples = sample_dirichlet(&alpha, n, a.seed)?;
    let mut buf = Vec::new();
    samples.write_csv(&mut buf)?;
    emit(&out, &bytes_to_string(buf))
}
