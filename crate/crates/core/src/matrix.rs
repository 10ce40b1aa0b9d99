use crate::error::{Error, Result};

/// Dense row-major square matrix. Row = from-symbol, column = to-symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> SquareMatrix<T> {
    pub fn filled(n: usize, value: T) -> Self {
        Self {
            n,
            data: vec![value; n * n],
        }
    }

    /// Builds from row-major data; fails unless `data.len() == n * n`.
    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            let rows = data.len().checked_div(n).unwrap_or(0);
            return Err(Error::DimensionMismatch {
                expected: n,
                rows,
                cols: n,
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    rows: n,
                    cols: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let data = (0..n * n)
            .map(|k| self.data[(k % n) * n + k / n].clone())
            .collect();
        Self { n, data }
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> SquareMatrix<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.data[row * self.n + col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut T {
        &mut self.data[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.n..(row + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub(crate) fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.n != expected {
            return Err(Error::DimensionMismatch {
                expected,
                rows: self.n,
                cols: self.n,
            });
        }
        Ok(())
    }
}
