//! Dense linear algebra over GF(q) and GF(q^m).

use crate::error::{Error, Result};
use crate::gfq::{ExtensionField, FieldElement, PrimeField};

/// A dense row-major matrix over GF(q).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseMatrix {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl BaseMatrix {
    pub fn zeros(q: u32, rows: usize, cols: usize) -> Self {
        Self {
            q,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(q: u32, n: usize) -> Self {
        let mut m = Self::zeros(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from explicit rows; every row must have length `cols`.
    pub fn from_rows(q: u32, cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| (x as u32 % q) as u8));
        }
        Ok(Self {
            q,
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.q, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &BaseMatrix) -> Result<BaseMatrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let q = self.q;
        let mut out = Self::zeros(q, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l) as u32;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) as u32 + a * other.get(l, j) as u32) % q;
                    out.set(i, j, v as u8);
                }
            }
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BaseMatrix) -> Result<BaseMatrix> {
        if self.cols != other.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            q: self.q,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = PrimeField::new(self.q).expect("prime modulus");
        let q = self.q;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = f.inv(self.get(row, col)).expect("nonzero pivot") as u32;
            for c in col..self.cols {
                let v = (self.get(row, c) as u32 * inv) % q;
                self.set(row, c, v as u8);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col) as u32;
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = (self.get(r, c) as u32 + q * q - factor * self.get(row, c) as u32) % q;
                    self.set(r, c, v as u8);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Canonical basis of the row space: the nonzero rows of the RREF.
    pub fn row_space_basis(&self) -> Vec<Vec<u8>> {
        let mut m = self.clone();
        let r = m.rref().len();
        (0..r).map(|i| m.row(i).to_vec()).collect()
    }

    /// Basis of the right null space `{x : self * x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<u8>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let q = self.q;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0u8; self.cols];
                x[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = ((q - m.get(r, fc) as u32) % q) as u8;
                }
                x
            })
            .collect()
    }

    /// Solves `self * x = b`. Returns `None` if inconsistent; when the
    /// solution is not unique an arbitrary one (free variables zero) is returned.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.q, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<BaseMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.q, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.q, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }
}

/// Rank over GF(2) of a set of bit-mask vectors (XOR basis insertion).
pub fn binary_rank(vectors: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for mut v in vectors {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

/// Solution of a linear system over GF(q^m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtSolution {
    Unique(Vec<FieldElement>),
    /// Consistent but underdetermined; one particular solution.
    Multiple(Vec<FieldElement>),
    Inconsistent,
}

/// Reduced row echelon form over GF(q^m); returns pivot columns.
pub fn ext_rref(field: &ExtensionField, m: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = field.inv(m[row][col]).expect("nonzero pivot");
        for c in col..cols {
            m[row][c] = field.mul(m[row][c], inv);
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col];
            for c in col..cols {
                let t = field.mul(factor, m[row][c]);
                m[r][c] = field.sub(m[r][c], t);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Solves `a * x = b` over GF(q^m), `a` given as rows.
pub fn ext_solve(field: &ExtensionField, a: &[Vec<FieldElement>], b: &[FieldElement]) -> ExtSolution {
    assert_eq!(a.len(), b.len());
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<FieldElement>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let pivots = ext_rref(field, &mut aug);
    if pivots.last() == Some(&cols) {
        return ExtSolution::Inconsistent;
    }
    let mut x = vec![FieldElement::ZERO; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols];
    }
    if pivots.len() == cols {
        ExtSolution::Unique(x)
    } else {
        ExtSolution::Multiple(x)
    }
}

/// Basis of the right null space of `a` over GF(q^m).
pub fn ext_null_space(field: &ExtensionField, a: &[Vec<FieldElement>], cols: usize) -> Vec<Vec<FieldElement>> {
    let mut m = a.to_vec();
    let pivots = ext_rref(field, &mut m);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut x = vec![FieldElement::ZERO; cols];
            x[fc] = FieldElement::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = field.neg(m[r][fc]);
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_rref() {
        let m = BaseMatrix::from_rows(2, 3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.row_space_basis(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        let m3 = BaseMatrix::from_rows(3, 2, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(m3.rank(), 1);
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = BaseMatrix::from_rows(3, 4, &[vec![1, 2, 0, 1], vec![0, 1, 1, 2]]).unwrap();
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = BaseMatrix::from_rows(3, 1, &v.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap();
            assert!(m.mul(&col).unwrap().is_zero());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = BaseMatrix::from_rows(5, 2, &[vec![1, 2], vec![3, 4]]).unwrap();
        let x = a.solve(&[1, 0]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), BaseMatrix::identity(5, 2));
        assert_eq!(x, inv.column(0));
        let singular = BaseMatrix::from_rows(2, 2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[1, 0]).is_none());
    }

    #[test]
    fn binary_rank_matches_generic() {
        let vecs = [0b1011u64, 0b0110, 0b1101, 0b0000];
        let rows: Vec<Vec<u8>> = vecs
            .iter()
            .map(|v| (0..4).map(|i| ((v >> i) & 1) as u8).collect())
            .collect();
        let m = BaseMatrix::from_rows(2, 4, &rows).unwrap();
        assert_eq!(binary_rank(vecs), m.rank());
    }

    #[test]
    fn ext_solver() {
        let f = ExtensionField::new(2, 3).unwrap();
        let a = vec![
            vec![FieldElement::ONE, f.basis_element(1)],
            vec![f.basis_element(2), FieldElement::ONE],
        ];
        let x = vec![f.basis_element(1), f.basis_element(2)];
        let b: Vec<FieldElement> = a
            .iter()
            .map(|r| f.add(f.mul(r[0], x[0]), f.mul(r[1], x[1])))
            .collect();
        assert_eq!(ext_solve(&f, &a, &b), ExtSolution::Unique(x));
        let ns = ext_null_space(&f, &a[..1], 2);
        assert_eq!(ns.len(), 1);
        assert!(f.add(ns[0][0], f.mul(a[0][1], ns[0][1])).is_zero());
    }
}
