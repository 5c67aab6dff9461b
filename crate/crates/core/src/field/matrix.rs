use std::fmt;

use super::PrimeField;
use crate::error::{Error, Result};

/// Dense row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixFp {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl MatrixFp {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        MatrixFp {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing mod `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(cols, row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = field.from_i64(v);
            }
        }
        Ok(m)
    }

    pub fn from_canonical(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&v| v < field.modulus()));
        MatrixFp {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.modulus();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn mul(&self, other: &MatrixFp) -> Result<MatrixFp> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let f = self.field;
        let mut out = MatrixFp::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and the pivot columns, lowest column first.
    pub fn rref(&self) -> (MatrixFp, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : M v = 0}`.
    ///
    /// One vector per free column, in increasing column order; each has a 1
    /// in its free column and zeros in the other free columns, so the basis
    /// is in reduced echelon form and fully determined by `M`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u64; self.cols];
                v[free] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, free));
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<MatrixFp> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = MatrixFp::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = MatrixFp::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = r.get(i, n + j);
            }
        }
        Some(inv)
    }

    /// Rows rendered with balanced representatives.
    pub fn to_balanced_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&v| self.field.balanced(v))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for MatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_balanced_rows() {
            writeln!(f, "{row:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn kernel_of_single_row() {
        let m = MatrixFp::from_rows(fp(7), &[vec![1, 2, 3]]).unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![5, 1, 0], vec![4, 0, 1]]);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert!(MatrixFp::identity(fp(5), 3).kernel_basis().is_empty());
        let z = MatrixFp::zero(fp(5), 2, 2);
        assert_eq!(z.kernel_basis(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn empty_row_matrix_has_full_kernel() {
        let z = MatrixFp::zero(fp(7), 0, 3);
        assert_eq!(z.kernel_basis().len(), 3);
    }

    // Exhaustive oracle: every v in F_p^cols with M v = 0 lies in the span.
    fn span_contains(basis: &[Vec<u64>], f: PrimeField, v: &[u64]) -> bool {
        if basis.is_empty() {
            return v.iter().all(|&x| x == 0);
        }
        let mut rows: Vec<Vec<i64>> = basis
            .iter()
            .map(|b| b.iter().map(|&x| x as i64).collect())
            .collect();
        let r0 = MatrixFp::from_rows(f, &rows).unwrap().rank();
        rows.push(v.iter().map(|&x| x as i64).collect());
        MatrixFp::from_rows(f, &rows).unwrap().rank() == r0
    }

    #[test]
    fn kernel_sound_and_complete_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = [3u64, 5, 7][rng.gen_range(0..3)];
            let f = fp(p);
            let rows = rng.gen_range(1..4);
            let cols = rng.gen_range(1..4);
            let data: Vec<u64> = (0..rows * cols)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        0
                    } else {
                        rng.gen_range(0..p)
                    }
                })
                .collect();
            let m = MatrixFp::from_canonical(f, rows, cols, data);
            let basis = m.kernel_basis();
            assert_eq!(basis.len(), cols - m.rank());
            for b in &basis {
                assert!(m.mul_vec(b).iter().all(|&x| x == 0));
            }
            let total = p.pow(cols as u32);
            for code in 0..total {
                let mut c = code;
                let v: Vec<u64> = (0..cols)
                    .map(|_| {
                        let d = c % p;
                        c /= p;
                        d
                    })
                    .collect();
                if m.mul_vec(&v).iter().all(|&x| x == 0) {
                    assert!(span_contains(&basis, f, &v));
                }
            }
            assert_eq!(basis, m.kernel_basis());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = fp(11);
        let m = MatrixFp::from_rows(f, &[vec![1, 2, 0], vec![0, 1, 4], vec![5, 0, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), MatrixFp::identity(f, 3));
        let s = MatrixFp::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(s.inverse().is_none());
    }
}
