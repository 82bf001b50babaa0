//! Sample sets on the simplex or the unit hypercube, with a small CSV format:
//! a header `x1,...,xd` followed by one row per observation, written with 17
//! significant digits.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Points more than this far outside their domain are rejected.
pub const DOMAIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Simplex,
    Hypercube,
}

impl Domain {
    pub fn contains(self, point: &[f64]) -> bool {
        let in_unit = point
            .iter()
            .all(|&v| v.is_finite() && v >= -DOMAIN_TOLERANCE && v <= 1.0 + DOMAIN_TOLERANCE);
        match self {
            Domain::Hypercube => in_unit,
            Domain::Simplex => in_unit && point.iter().sum::<f64>() <= 1.0 + DOMAIN_TOLERANCE,
        }
    }
}

/// An immutable multiset of `n` points in dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    dim: usize,
    data: Vec<f64>,
    domain: Domain,
    provenance: Option<String>,
}

impl SampleSet {
    pub fn new(points: &[Vec<f64>], domain: Domain) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or(Error::EmptySample)?;
        let mut data = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            data.extend_from_slice(p);
        }
        Self::from_flat(dim, data, domain, None)
    }

    pub fn from_flat(
        dim: usize,
        data: Vec<f64>,
        domain: Domain,
        provenance: Option<String>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("sample dimension must be at least 1".into()));
        }
        if data.is_empty() {
            return Err(Error::EmptySample);
        }
        if data.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: data.len() % dim,
            });
        }
        for (j, p) in data.chunks_exact(dim).enumerate() {
            if !domain.contains(p) {
                return Err(Error::Domain(format!(
                    "observation {j} = {p:?} lies outside the {domain:?} domain"
                )));
            }
        }
        Ok(SampleSet {
            dim,
            data,
            domain,
            provenance,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    /// Reinterprets the same points in another domain, checking membership.
    pub fn with_domain(&self, domain: Domain) -> Result<Self> {
        Self::from_flat(self.dim, self.data.clone(), domain, self.provenance.clone())
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[f64] {
        &self.data
    }

    /// Per-coordinate sample means.
    pub fn mean(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.dim];
        for p in self.points() {
            for (a, v) in acc.iter_mut().zip(p) {
                *a += v;
            }
        }
        let n = self.len() as f64;
        acc.into_iter().map(|a| a / n).collect()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        writeln!(w, "{}", header.join(","))?;
        let mut line = String::new();
        for p in self.points() {
            line.clear();
            for (i, v) in p.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                write!(line, "{}", fmt_f64(*v)).expect("string write");
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R, domain: Domain) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or(Error::EmptySample)??;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        for (i, c) in cols.iter().enumerate() {
            if *c != format!("x{}", i + 1) {
                return Err(Error::Parse(format!("unexpected header column {c:?}")));
            }
        }
        let dim = cols.len();
        let mut data = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row: Vec<&str> = line.split(',').collect();
            if row.len() != dim {
                return Err(Error::Parse(format!(
                    "row {} has {} fields, expected {dim}",
                    lineno + 2,
                    row.len()
                )));
            }
            for f in row {
                let v: f64 = f
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: bad number {f:?}", lineno + 2)))?;
                data.push(v);
            }
        }
        Self::from_flat(dim, data, domain, None)
    }
}

/// 17-significant-digit scientific formatting; round-trips every `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let s = SampleSet::new(
            &[vec![0.1, 0.2], vec![1.0 / 3.0, 0.6], vec![0.0, 1e-300]],
            Domain::Simplex,
        )
        .unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2\n"));
        let back = SampleSet::read_csv(&buf[..], Domain::Simplex).unwrap();
        assert_eq!(back.flat(), s.flat());
    }

    #[test]
    fn rejects_points_outside_domain() {
        assert!(SampleSet::new(&[vec![0.7, 0.7]], Domain::Simplex).is_err());
        assert!(SampleSet::new(&[vec![0.7, 0.7]], Domain::Hypercube).is_ok());
        assert!(SampleSet::new(&[vec![1.2]], Domain::Hypercube).is_err());
        assert_eq!(SampleSet::new(&[], Domain::Simplex), Err(Error::EmptySample));
    }

    #[test]
    fn bad_csv_is_a_parse_error() {
        let text = "x1,x2\n0.1,abc\n";
        assert!(matches!(
            SampleSet::read_csv(text.as_bytes(), Domain::Simplex),
            Err(Error::Parse(_))
        ));
        let text = "y1\n0.1\n";
        assert!(SampleSet::read_csv(text.as_bytes(), Domain::Simplex).is_err());
    }
}
