//! Distortion/cost functions `d(i, j)` between alphabet symbols.

use crate::{Error, Result};

/// A distortion function between a source alphabet of size `k` and a sink
/// alphabet of size `m`.
///
/// `Lp` and `Hamming` are evaluated on symbol values (offsets included), so
/// they stay meaningful across shifted alphabets. An explicit `Matrix` is
/// indexed by grid position: entry `(i, j)` is the cost from the `i`-th
/// source bin to the `j`-th sink bin.
#[derive(Debug, Clone, PartialEq)]
pub enum CostSpec {
    /// `d(i, j) = |i - j|^p` with `p >= 1`.
    Lp { p: f64 },
    /// `d(i, j) = 0` if `i = j`, else 1.
    Hamming,
    /// Explicit nonnegative cost matrix over the index grid.
    Matrix {
        rows: usize,
        cols: usize,
        entries: Vec<f64>,
    },
}

impl CostSpec {
    pub fn lp(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidInput(format!(
                "lp exponent must be >= 1 and finite, got {p}"
            )));
        }
        Ok(CostSpec::Lp { p })
    }

    pub fn matrix(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "cost matrix shape mismatch: {rows}x{cols} with {} entries",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| !e.is_finite() || **e < 0.0) {
            return Err(Error::InvalidInput(format!(
                "cost entries must be finite and nonnegative, got {e}"
            )));
        }
        Ok(CostSpec::Matrix { rows, cols, entries })
    }

    /// Parses a row-major CSV cost matrix (`k` rows, `m` columns).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = 0usize;
        let mut cols = None;
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidInput(format!("bad cost entry {tok:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            match cols {
                None => cols = Some(vals.len()),
                Some(c) if c != vals.len() => {
                    return Err(Error::InvalidInput(format!(
                        "ragged cost matrix: row {rows} has {} entries, expected {c}",
                        vals.len()
                    )))
                }
                _ => {}
            }
            entries.extend(vals);
            rows += 1;
        }
        let cols = cols.ok_or_else(|| Error::InvalidInput("empty cost matrix".into()))?;
        CostSpec::matrix(rows, cols, entries)
    }

    /// Cost of moving the symbol `src_offset + i` to `snk_offset + j`.
    pub fn eval(&self, src_offset: i64, snk_offset: i64, i: usize, j: usize) -> f64 {
        match self {
            CostSpec::Lp { p } => {
                let d = ((src_offset + i as i64) - (snk_offset + j as i64)).abs() as f64;
                if *p == 1.0 {
                    d
                } else if *p == 2.0 {
                    d * d
                } else {
                    d.powf(*p)
                }
            }
            CostSpec::Hamming => {
                if src_offset + (i as i64) == snk_offset + (j as i64) {
                    0.0
                } else {
                    1.0
                }
            }
            CostSpec::Matrix { cols, entries, .. } => entries[i * cols + j],
        }
    }

    /// Dense `k x m` cost table for the pair of (offset, size) alphabets.
    pub(crate) fn table(
        &self,
        src_offset: i64,
        k: usize,
        snk_offset: i64,
        m: usize,
    ) -> Result<Vec<f64>> {
        if let CostSpec::Matrix { rows, cols, .. } = self {
            if *rows != k || *cols != m {
                return Err(Error::InvalidInput(format!(
                    "cost matrix is {rows}x{cols} but the instance needs {k}x{m}"
                )));
            }
        }
        if k.saturating_mul(m) > 1_000_000 {
            return Err(Error::TooLarge(format!(
                "cost table {k}x{m} exceeds the 1e6-cell guard"
            )));
        }
        let mut t = Vec::with_capacity(k * m);
        for i in 0..k {
            for j in 0..m {
                t.push(self.eval(src_offset, snk_offset, i, j));
            }
        }
        Ok(t)
    }

    /// Swaps the roles of source and sink.
    pub fn transposed(&self) -> CostSpec {
        match self {
            CostSpec::Matrix { rows, cols, entries } => {
                let mut t = vec![0.0; entries.len()];
                for i in 0..*rows {
                    for j in 0..*cols {
                        t[j * rows + i] = entries[i * cols + j];
                    }
                }
                CostSpec::Matrix {
                    rows: *cols,
                    cols: *rows,
                    entries: t,
                }
            }
            other => other.clone(),
        }
    }
}
