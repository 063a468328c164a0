//! Dense vector/matrix primitives and their plain-text persistence format.
//!
//! Matrices are stored row-major. The text format is line-oriented: the first
//! line holds the dimensions (`m n` for a matrix, a single `n` for a vector),
//! followed by whitespace-separated decimal entries row by row, written with
//! 17 significant digits so values round-trip exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// A finite real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    entries: Vec<f64>,
}

impl DenseVector {
    /// Builds a vector, rejecting NaN/infinite entries and zero length.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("vector must have dimension >= 1"));
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("vector entry {i}")));
        }
        Ok(DenseVector { entries })
    }

    pub fn zeros(n: usize) -> Self {
        DenseVector { entries: vec![0.0; n] }
    }

    /// Standard basis vector `e_i` in dimension `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        DenseVector { entries: v }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.entries.iter()
    }

    pub fn dot(&self, other: &DenseVector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        crate::stats::pairwise_sum_by(self.entries.len(), |i| self.entries[i] * other.entries[i])
    }

    /// Writes the vector in the text format.
    pub fn write_text(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.dim());
        for v in &self.entries {
            let _ = writeln!(s, "{}", fmt_f64(*v));
        }
        s
    }

    pub fn read_text(path: &Path) -> Result<Self> {
        Self::parse_text(&std::fs::read_to_string(path)?)
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let (header, entries) = parse_numbers(text)?;
        if header.len() != 1 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected vector header `n`, found {} fields", header.len()),
            });
        }
        let n = header[0];
        if entries.len() != n {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected {} entries, found {}", n, entries.len()),
            });
        }
        DenseVector::new(entries)
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

impl std::ops::IndexMut<usize> for DenseVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.entries[i]
    }
}

/// A dense `m x n` real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be >= 1"));
        }
        if data.len() != rows * cols {
            return Err(Error::dims(format!(
                "matrix {}x{} needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {i}")));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `out = A x`; `out` must have length `rows`.
    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            *o = acc;
        }
    }

    pub fn matvec(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.dim() != self.cols {
            return Err(Error::dims(format!(
                "matvec: matrix is {}x{}, vector has dim {}",
                self.rows,
                self.cols,
                x.dim()
            )));
        }
        let mut out = vec![0.0; self.rows];
        self.matvec_into(x.as_slice(), &mut out);
        Ok(DenseVector { entries: out })
    }

    /// `out = A^T w`; `out` must have length `cols`.
    pub fn transpose_matvec_into(&self, w: &[f64], out: &mut [f64]) {
        debug_assert_eq!(w.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        out.fill(0.0);
        for (i, wi) in w.iter().enumerate() {
            if *wi == 0.0 {
                continue;
            }
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (o, a) in out.iter_mut().zip(row.iter()) {
                *o += wi * a;
            }
        }
    }

    /// Returns a copy scaled by `c`.
    pub fn scaled(&self, c: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn write_text(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.rows, self.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{}", fmt_f64(*v));
            }
            s.push('\n');
        }
        s
    }

    pub fn read_text(path: &Path) -> Result<Self> {
        Self::parse_text(&std::fs::read_to_string(path)?)
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let (header, entries) = parse_numbers(text)?;
        if header.len() != 2 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected matrix header `m n`, found {} fields", header.len()),
            });
        }
        let (m, n) = (header[0], header[1]);
        if entries.len() != m * n {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected {} entries, found {}", m * n, entries.len()),
            });
        }
        DenseMatrix::new(m, n, entries)
    }
}

/// Formats with 17 significant digits (exact f64 round trip).
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v)
}

fn parse_numbers(text: &str) -> Result<(Vec<usize>, Vec<f64>)> {
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let header: Vec<usize> = header_line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad dimension field `{t}`"),
            })
        })
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for (idx, line) in lines {
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("bad number `{tok}`"),
            })?;
            entries.push(v);
        }
    }
    Ok((header, entries))
}
