//! Sparse symmetric matrices in upper-triangle coordinate form.
//!
//! Storage is canonical: entries hold `(i, j, v)` with `i <= j`, sorted
//! lexicographically, duplicates summed at construction (Matrix Market
//! convention) and exact zeros dropped. `matvec` costs one pass over the
//! stored entries; reductions accumulate in storage order, so results are
//! deterministic for a fixed build.

use std::path::Path;

use crate::error::GtrsError;
use crate::vecmath::dot;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl SparseSymMatrix {
    /// Builds an `n x n` symmetric matrix from coordinate entries. Entries
    /// may address either triangle; each is folded to the upper triangle,
    /// duplicates are summed.
    pub fn from_entries(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self, GtrsError> {
        if n == 0 {
            return Err(GtrsError::InvalidParameter("matrix dimension is zero".into()));
        }
        if n > u32::MAX as usize {
            return Err(GtrsError::InvalidParameter(format!(
                "matrix dimension {n} exceeds the supported maximum"
            )));
        }
        let mut folded: Vec<(u32, u32, f64)> = Vec::with_capacity(entries.len());
        for &(i, j, v) in entries {
            if i >= n || j >= n {
                return Err(GtrsError::InvalidParameter(format!(
                    "entry index ({i}, {j}) out of range for dimension {n}"
                )));
            }
            if !v.is_finite() {
                return Err(GtrsError::InvalidParameter(format!(
                    "entry ({i}, {j}) has non-finite value {v}"
                )));
            }
            let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
            folded.push((lo as u32, hi as u32, v));
        }
        folded.sort_by_key(|&(i, j, _)| (i, j));
        let mut canonical: Vec<(u32, u32, f64)> = Vec::with_capacity(folded.len());
        for (i, j, v) in folded {
            match canonical.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => canonical.push((i, j, v)),
            }
        }
        canonical.retain(|&(_, _, v)| v != 0.0);
        Ok(Self { n, entries: canonical })
    }

    /// Diagonal matrix helper.
    pub fn diagonal(diag: &[f64]) -> Result<Self, GtrsError> {
        let entries: Vec<(usize, usize, f64)> =
            diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_entries(diag.len(), &entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (upper-triangle) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Stored upper-triangle entries `(i, j, v)` with `i <= j`, sorted.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|&(i, j, v)| (i as usize, j as usize, v))
    }

    /// Symmetric matrix-vector product, one pass over stored entries.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    /// Writes `M x` into `y` (overwriting it).
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n, "matvec input length mismatch");
        assert_eq!(y.len(), self.n, "matvec output length mismatch");
        y.fill(0.0);
        for &(i, j, v) in &self.entries {
            let (i, j) = (i as usize, j as usize);
            y[i] += v * x[j];
            if i != j {
                y[j] += v * x[i];
            }
        }
    }

    /// `v' M v`, computed as `dot(v, matvec(M, v))` so it shares the matvec
    /// reduction order exactly.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.matvec(v))
    }

    /// Deterministic upper bound on the spectral norm: the smaller of the
    /// Frobenius norm and the maximum absolute row sum of the full
    /// symmetric pattern. Both dominate the largest absolute eigenvalue.
    pub fn norm_upper_bound(&self) -> f64 {
        let mut frob_sq = 0.0;
        let mut row_sums = vec![0.0; self.n];
        for &(i, j, v) in &self.entries {
            let (i, j) = (i as usize, j as usize);
            let a = v.abs();
            row_sums[i] += a;
            if i != j {
                row_sums[j] += a;
                frob_sq += 2.0 * v * v;
            } else {
                frob_sq += v * v;
            }
        }
        let max_row = row_sums.iter().cloned().fold(0.0, f64::max);
        frob_sq.sqrt().min(max_row)
    }

    /// Parses Matrix Market coordinate format. The header must declare
    /// `matrix coordinate real symmetric`; a `general` qualifier is
    /// rejected rather than silently symmetrized. Indices are 1-based and
    /// may address either triangle; duplicates are summed.
    pub fn from_matrix_market_str(text: &str) -> Result<Self, GtrsError> {
        let mut lines = text.lines().enumerate();
        let (header_line, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty file"))?;
        let header = header.trim();
        if !header.starts_with("%%MatrixMarket") {
            return Err(parse_err(header_line + 1, "missing %%MatrixMarket header"));
        }
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() < 5 {
            return Err(parse_err(header_line + 1, "incomplete header"));
        }
        let (object, format, field, symmetry) = (
            fields[1].to_ascii_lowercase(),
            fields[2].to_ascii_lowercase(),
            fields[3].to_ascii_lowercase(),
            fields[4].to_ascii_lowercase(),
        );
        if object != "matrix" || format != "coordinate" {
            return Err(parse_err(
                header_line + 1,
                &format!("unsupported header '{object} {format}', need 'matrix coordinate'"),
            ));
        }
        if field != "real" {
            return Err(parse_err(
                header_line + 1,
                &format!("unsupported field '{field}', need 'real'"),
            ));
        }
        if symmetry != "symmetric" {
            return Err(parse_err(
                header_line + 1,
                &format!("symmetry qualifier '{symmetry}' is not supported, need 'symmetric'"),
            ));
        }

        let mut size: Option<(usize, usize, usize)> = None;
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if size.is_none() {
                if tokens.len() != 3 {
                    return Err(parse_err(line_no, "size line must be 'rows cols nnz'"));
                }
                let rows = parse_usize(tokens[0], line_no)?;
                let cols = parse_usize(tokens[1], line_no)?;
                let nnz = parse_usize(tokens[2], line_no)?;
                if rows != cols {
                    return Err(parse_err(
                        line_no,
                        &format!("matrix must be square, got {rows} x {cols}"),
                    ));
                }
                size = Some((rows, cols, nnz));
                entries.reserve(nnz);
                continue;
            }
            if tokens.len() != 3 {
                return Err(parse_err(line_no, "entry line must be 'i j value'"));
            }
            let i = parse_usize(tokens[0], line_no)?;
            let j = parse_usize(tokens[1], line_no)?;
            let v: f64 = tokens[2]
                .parse()
                .map_err(|_| parse_err(line_no, &format!("bad real value '{}'", tokens[2])))?;
            if !v.is_finite() {
                return Err(parse_err(line_no, "entry value must be finite"));
            }
            let (rows, _, _) = size.unwrap();
            if i == 0 || j == 0 || i > rows || j > rows {
                return Err(parse_err(
                    line_no,
                    &format!("index ({i}, {j}) out of range for dimension {rows} (1-based)"),
                ));
            }
            entries.push((i - 1, j - 1, v));
        }
        let (rows, _, nnz) = size.ok_or_else(|| parse_err(0, "missing size line"))?;
        if entries.len() != nnz {
            return Err(parse_err(
                0,
                &format!("size line declared {nnz} entries, file has {}", entries.len()),
            ));
        }
        Self::from_entries(rows, &entries)
    }

    pub fn read_matrix_market(path: &Path) -> Result<Self, GtrsError> {
        let text = std::fs::read_to_string(path).map_err(|source| GtrsError::File {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_matrix_market_str(&text)
    }
}

fn parse_err(line: usize, message: &str) -> GtrsError {
    GtrsError::Parse { line, message: message.to_string() }
}

fn parse_usize(token: &str, line: usize) -> Result<usize, GtrsError> {
    token
        .parse()
        .map_err(|_| parse_err(line, &format!("bad integer '{token}'")))
}
