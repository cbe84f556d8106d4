use crate::error::{Error, Result};

/// Column-major sparse integer matrix. Each column is sorted by row with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

fn overflow() -> Error {
    Error::Internal("matrix entry overflowed i64".into())
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            cols: (0..n).map(|i| vec![(i, 1)]).collect(),
        }
    }

    /// Builds from unsorted columns, summing duplicate rows.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, i64)>>) -> Result<Self> {
        let mut out = Vec::with_capacity(cols.len());
        for mut col in cols {
            col.sort_unstable_by_key(|&(r, _)| r);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
            for (r, v) in col {
                if r >= nrows {
                    return Err(Error::Internal(format!("row {r} out of range {nrows}")));
                }
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv = lv.checked_add(v).ok_or_else(overflow)?,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|&(_, v)| v != 0);
            out.push(merged);
        }
        Ok(SparseMatrix { nrows, cols: out })
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut cols = vec![Vec::new(); ncols];
        for (r, c, v) in triplets {
            cols.get_mut(c)
                .ok_or_else(|| Error::Internal(format!("column {c} out of range {ncols}")))?
                .push((r, v));
        }
        SparseMatrix::from_columns(nrows, cols)
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let cols = (0..ncols)
            .map(|c| {
                (0..nrows)
                    .filter(|&r| rows[r][c] != 0)
                    .map(|r| (r, rows[r][c]))
                    .collect()
            })
            .collect();
        SparseMatrix { nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, i64)] {
        &self.cols[c]
    }

    pub fn columns(&self) -> &[Vec<(usize, i64)>] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.cols[c]
            .binary_search_by_key(&r, |&(row, _)| row)
            .map_or(0, |i| self.cols[c][i].1)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.ncols()]; self.nrows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v;
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![Vec::new(); self.nrows];
        for (r, c, v) in self.triplets() {
            cols[r].push((c, v));
        }
        SparseMatrix {
            nrows: self.ncols(),
            cols,
        }
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols() != rhs.nrows {
            return Err(Error::Internal(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows,
                self.ncols(),
                rhs.nrows,
                rhs.ncols()
            )));
        }
        let mut acc = vec![0i64; self.nrows];
        let mut touched = Vec::new();
        let mut cols = Vec::with_capacity(rhs.ncols());
        for col in &rhs.cols {
            for &(k, b) in col {
                for &(r, a) in &self.cols[k] {
                    if acc[r] == 0 {
                        touched.push(r);
                    }
                    acc[r] = a
                        .checked_mul(b)
                        .and_then(|p| acc[r].checked_add(p))
                        .ok_or_else(overflow)?;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let out: Vec<(usize, i64)> = touched
                .iter()
                .filter(|&&r| acc[r] != 0)
                .map(|&r| (r, acc[r]))
                .collect();
            for &r in &touched {
                acc[r] = 0;
            }
            touched.clear();
            cols.push(out);
        }
        Ok(SparseMatrix {
            nrows: self.nrows,
            cols,
        })
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if (self.nrows, self.ncols()) != (rhs.nrows, rhs.ncols()) {
            return Err(Error::Internal(
                "cannot add matrices of different shapes".into(),
            ));
        }
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        SparseMatrix::from_columns(self.nrows, cols)
    }

    pub fn scale(&self, k: i64) -> SparseMatrix {
        if k == 0 {
            return SparseMatrix::zeros(self.nrows, self.ncols());
        }
        SparseMatrix {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .map(|c| c.iter().map(|&(r, v)| (r, v * k)).collect())
                .collect(),
        }
    }

    /// The submatrix on the given rows and columns, renumbered in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut row_map = vec![usize::MAX; self.nrows];
        for (i, &r) in rows.iter().enumerate() {
            row_map[r] = i;
        }
        let cols = cols
            .iter()
            .map(|&c| {
                self.cols[c]
                    .iter()
                    .filter(|&&(r, _)| row_map[r] != usize::MAX)
                    .map(|&(r, v)| (row_map[r], v))
                    .collect::<Vec<_>>()
            })
            .map(|mut c: Vec<(usize, i64)>| {
                c.sort_unstable_by_key(|&(r, _)| r);
                c
            })
            .collect();
        SparseMatrix {
            nrows: rows.len(),
            cols,
        }
    }

    /// Applies the matrix to a sparse vector given as (index, value) pairs.
    pub fn apply(&self, v: &[(usize, i64)]) -> Result<Vec<(usize, i64)>> {
        let m = SparseMatrix::from_columns(self.ncols(), vec![v.to_vec()])?;
        Ok(self.mul(&m)?.cols.pop().unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![0, 3]]);
        let b = SparseMatrix::from_dense(&[vec![4, 0], vec![1, -1]]);
        assert_eq!(
            a.mul(&b).unwrap().to_dense(),
            vec![vec![6, -2], vec![3, -3]]
        );
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 0], vec![2, 3]]);
        assert!(a.add(&a.scale(-1)).unwrap().is_zero());
    }

    #[test]
    fn submatrix_reorders() {
        let a = SparseMatrix::from_dense(&[vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(
            a.submatrix(&[1, 0], &[2, 0]).to_dense(),
            vec![vec![6, 4], vec![3, 1]]
        );
    }
}
