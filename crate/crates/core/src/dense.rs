//! Minimal dense containers shared with the std crate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Row-major dense real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Parameter(alloc::format!(
                "{} entries cannot form a {rows}×{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Error if any entry is NaN or infinite.
    pub fn check_finite(&self, what: &'static str) -> Result<()> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }
}

/// A quadrature-weighted matrix on a planar grid: entries already include
/// the column weights, so `A f` approximates the integral operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub matrix: DenseMatrix,
    pub row_nodes: Vec<[f64; 2]>,
    pub col_nodes: Vec<[f64; 2]>,
    pub col_weights: Vec<f64>,
}

/// A `3×3` block operator over a scalar grid of `m` nodes; block `(a, b)`
/// occupies rows `a·m..(a+1)·m` and columns `b·m..(b+1)·m`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperator {
    m: usize,
    matrix: DenseMatrix,
    weights: Vec<f64>,
}

impl BlockOperator {
    pub fn new(matrix: DenseMatrix, weights: Vec<f64>) -> Result<Self> {
        let m = weights.len();
        if matrix.rows() != 3 * m || matrix.cols() != 3 * m {
            return Err(Error::Parameter(alloc::format!(
                "block operator over {m} nodes needs a {0}×{0} matrix",
                3 * m
            )));
        }
        Ok(Self { m, matrix, weights })
    }

    /// Assemble from nine `m×m` blocks, row-major by `(a, b)`.
    pub fn from_blocks(blocks: &[DenseMatrix; 9], weights: Vec<f64>) -> Result<Self> {
        let m = weights.len();
        let mut out = DenseMatrix::zeros(3 * m, 3 * m);
        for (idx, blk) in blocks.iter().enumerate() {
            if blk.rows() != m || blk.cols() != m {
                return Err(Error::Parameter("block has the wrong shape".into()));
            }
            let (a, b) = (idx / 3, idx % 3);
            for i in 0..m {
                out.row_mut(a * m + i)[b * m..(b + 1) * m].copy_from_slice(blk.row(i));
            }
        }
        Self::new(out, weights)
    }

    pub fn nodes(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    /// Quadrature weight of each scalar node.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn block(&self, a: usize, b: usize) -> DenseMatrix {
        let m = self.m;
        DenseMatrix::from_fn(m, m, |i, j| self.matrix.get(a * m + i, b * m + j))
    }

    /// True when `block(a, b) = -block(b, a)` bit for bit and the diagonal
    /// blocks vanish.
    pub fn is_block_antisymmetric(&self) -> bool {
        let m = self.m;
        for a in 0..3 {
            for b in a..3 {
                for i in 0..m {
                    for j in 0..m {
                        let x = self.matrix.get(a * m + i, b * m + j);
                        let y = self.matrix.get(b * m + i, a * m + j);
                        if a == b {
                            if x != 0.0 {
                                return false;
                            }
                        } else if x.to_bits() != (-y).to_bits() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}
