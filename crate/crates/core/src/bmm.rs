//! Word-packed Boolean matrix multiplication and per-edge triangle witnesses.

use std::fmt;

use thiserror::Error;

use crate::graph::{words_for, BitIter, Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("matrix line {line}: {msg}")]
pub struct MatrixParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimension mismatch: {left_cols} columns times {right_rows} rows")]
pub struct DimensionMismatch {
    pub left_cols: usize,
    pub right_rows: usize,
}

/// Dense 0/1 matrix with row-major packed rows. Padding bits past `cols`
/// are always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl BoolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = words_for(cols);
        BoolMatrix { rows, cols, words, bits: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Builds a matrix from nested rows of booleans; every row must have the
    /// same length.
    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    #[inline]
    /// Parses one row per non-empty line, written as `0`/`1` characters
    /// (whitespace ignored).
    pub fn parse_text(text: &str) -> Result<Self, MatrixParseError> {
        let rows: Vec<Vec<bool>> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(MatrixParseError { line: i + 1, msg: format!("unexpected `{c}`") }),
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        if let Some(bad) = rows.iter().position(|r| r.len() != rows[0].len()) {
            return Err(MatrixParseError { line: bad + 1, msg: "ragged row".into() });
        }
        Ok(Self::from_rows(&rows))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            s.extend((0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, val: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.bits[i * self.words + j / 64];
        if val {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Column indices of the set bits in row `i`.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(self.row(i))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Boolean product: `(i, j)` is set iff some `k` has `a(i,k)` and `b(k,j)`.
    ///
    /// Row-oriented: row `i` of the result is the OR of the rows of `b`
    /// selected by the ones of row `i` of `a`.
    pub fn mul(&self, b: &BoolMatrix) -> Result<BoolMatrix, DimensionMismatch> {
        if self.cols != b.rows {
            return Err(DimensionMismatch { left_cols: self.cols, right_rows: b.rows });
        }
        let mut out = BoolMatrix::zeros(self.rows, b.cols);
        let w = out.words;
        for i in 0..self.rows {
            let dst = &mut out.bits[i * w..(i + 1) * w];
            for k in BitIter::new(&self.bits[i * self.words..(i + 1) * self.words]) {
                for (d, s) in dst.iter_mut().zip(b.row(k)) {
                    *d |= s;
                }
            }
        }
        Ok(out)
    }
}

/// Boolean matrix product `a * b`.
pub fn bool_matmul(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix, DimensionMismatch> {
    a.mul(b)
}

/// For every edge of `g` (canonical order), the smallest vertex adjacent to
/// both endpoints, or `None` if the edge lies in no triangle.
pub fn triangle_witness_all_edges(g: &Graph) -> Vec<(Edge, Option<usize>)> {
    g.edges().map(|e| (e, g.common_neighbor(e.u, e.v))).collect()
}

/// Smallest witness for `e` among the vertices selected by `mask`, i.e. the
/// witness `e` gets in the induced subgraph `g[mask]`.
#[inline]
pub(crate) fn masked_witness(g: &Graph, e: Edge, mask: &[u64]) -> Option<usize> {
    let (ra, rb) = (g.row(e.u), g.row(e.v));
    for (i, ((x, y), m)) in ra.iter().zip(rb).zip(mask).enumerate() {
        let w = x & y & m;
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}
