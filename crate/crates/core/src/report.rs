//! Structured results of verification sweeps.

use std::io::Write;

use crate::error::Result;
use crate::sample::fmt_f64;

/// Which certificate produced a scan row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Exact derivatives `(-1)^n h^{(n+1)}(a)` through polygamma values.
    Derivative,
    /// Forward differences `(-1)^n Δ_δ^n g(a)`.
    Difference,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Derivative => "derivative",
            Route::Difference => "difference",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub a: f64,
    pub route: Route,
    pub order: u32,
    /// Signed quantity that the certificate requires to be positive.
    pub value: f64,
    /// Normalised margin; the row passes iff `margin > 0`.
    pub margin: f64,
}

/// Result of a sweep: rows, worst margin, and the pass verdict.
///
/// `max_violation` is the smallest margin seen (negative means a violation).
/// Merging two reports is associative.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub grid: Vec<f64>,
    pub order: u32,
    pub max_violation: f64,
    pub pass: bool,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn from_rows(grid: Vec<f64>, order: u32, rows: Vec<ScanRow>) -> Self {
        let max_violation = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        let pass = rows.iter().all(|r| r.margin > 0.0);
        ScanReport {
            grid,
            order,
            max_violation,
            pass,
            rows,
        }
    }

    pub fn merge(mut self, other: ScanReport) -> ScanReport {
        self.grid.extend(other.grid);
        self.order = self.order.max(other.order);
        self.max_violation = self.max_violation.min(other.max_violation);
        self.pass &= other.pass;
        self.rows.extend(other.rows);
        self
    }

    /// Worst margin among rows of one route.
    pub fn worst(&self, route: Route) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.route == route)
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub const CSV_HEADER: &'static str = "a,order,value,margin";

    /// Writes `a,order,value,margin` rows and a trailing `# pass=... max_violation=...` line.
    ///
    /// Derivative rows carry `order = n` for `(-1)^n h^{(n+1)}`; difference
    /// rows are tagged by a negative order `-n` for `(-1)^n Δ^n g`.
    pub fn write_csv<W: Write>(&self, mut w: W, header: bool) -> Result<()> {
        if header {
            writeln!(w, "{}", Self::CSV_HEADER)?;
        }
        for r in &self.rows {
            let order = match r.route {
                Route::Derivative => r.order as i64,
                Route::Difference => -(r.order as i64),
            };
            writeln!(w, "{},{},{},{}", fmt_f64(r.a), order, fmt_f64(r.value), fmt_f64(r.margin))?;
        }
        writeln!(w, "{}", self.summary_line())?;
        Ok(())
    }

    pub fn summary_line(&self) -> String {
        format!("# pass={} max_violation={}", self.pass, fmt_f64(self.max_violation))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(margin: f64) -> ScanRow {
        ScanRow {
            a: 1.0,
            route: Route::Derivative,
            order: 1,
            value: margin,
            margin,
        }
    }

    #[test]
    fn merge_is_associative() {
        let a = ScanReport::from_rows(vec![1.0], 2, vec![row(0.3)]);
        let b = ScanReport::from_rows(vec![2.0], 3, vec![row(-0.1)]);
        let c = ScanReport::from_rows(vec![3.0], 1, vec![row(0.7)]);
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.merge(b.merge(c));
        assert_eq!(left, right);
        assert!(!left.pass);
        assert_eq!(left.max_violation, -0.1);
        assert_eq!(left.order, 3);
    }
}
