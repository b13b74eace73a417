//! Small dense matrices over a [`Field`]: elimination, rank, kernels and the
//! two-sided rank normal form used to canonicalize constant parts.

use std::fmt;

use crate::algebra::{Field, FieldElement};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElement {
        &mut self.data[r * self.cols + c]
    }
}

/// Output of [`Matrix::rank_normal_form`]: `left * A * right = J_r` where
/// `J_r` has ones at the last `rank` diagonal positions.
#[derive(Clone, Debug)]
pub struct RankNormalForm {
    pub rank: usize,
    pub left: Matrix,
    pub right: Matrix,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// `J_r`: ones at diagonal positions `n - r .. n`.
    pub fn canonical_rank_form(field: Field, n: usize, r: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in n - r..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Arity {
                    expected: c,
                    got: row.len(),
                });
            }
            for e in row {
                if e.field() != field {
                    return Err(Error::FieldMismatch(e.field().to_string(), field.to_string()));
                }
                data.push(e);
            }
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, rows).expect("rectangular input")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Arity {
                expected: self.cols,
                got: other.rows,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.mul_same(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add_same(&prod);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &FieldElement) {
        for c in 0..self.cols {
            let v = self[(src, c)].mul_same(factor);
            self[(dst, c)] = self[(dst, c)].add_same(&v);
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &FieldElement) {
        for r in 0..self.rows {
            let v = self[(r, src)].mul_same(factor);
            self[(r, dst)] = self[(r, dst)].add_same(&v);
        }
    }

    fn scale_row(&mut self, r: usize, factor: &FieldElement) {
        for c in 0..self.cols {
            self[(r, c)] = self[(r, c)].mul_same(factor);
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("non-zero pivot");
            m.scale_row(row, &inv);
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].neg();
                    m.add_row_multiple(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::Arity {
                expected: self.rows,
                got: self.cols,
            });
        }
        let mut m = self.clone();
        let mut acc = self.field.one();
        for col in 0..m.cols {
            let Some(p) = (col..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != col {
                m.swap_rows(col, p);
                acc = acc.neg();
            }
            let piv = m[(col, col)].clone();
            acc = acc.mul_same(&piv);
            let inv = piv.inv().expect("non-zero pivot");
            for r in col + 1..m.rows {
                if !m[(r, col)].is_zero() {
                    let f = m[(r, col)].mul_same(&inv).neg();
                    m.add_row_multiple(r, col, &f);
                }
            }
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = self.field.one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Some(inv)
    }

    /// Basis of `{v : A v = 0}` as column vectors.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = red[(r, f)].neg();
                }
                v
            })
            .collect()
    }

    /// Invertible `left`, `right` with `left * self * right = J_r`, via full
    /// pivoting followed by a cyclic shift of the identity block to the
    /// lower-right corner.
    pub fn rank_normal_form(&self) -> Result<RankNormalForm> {
        if self.rows != self.cols {
            return Err(Error::Arity {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let f = self.field;
        let mut a = self.clone();
        let mut left = Self::identity(f, n);
        let mut right = Self::identity(f, n);
        let mut r = 0;
        while r < n {
            let pivot = (r..n)
                .flat_map(|i| (r..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_zero());
            let Some((pi, pj)) = pivot else { break };
            a.swap_rows(r, pi);
            left.swap_rows(r, pi);
            a.swap_cols(r, pj);
            right.swap_cols(r, pj);
            let inv = a[(r, r)].inv().expect("non-zero pivot");
            a.scale_row(r, &inv);
            left.scale_row(r, &inv);
            for i in 0..n {
                if i != r && !a[(i, r)].is_zero() {
                    let k = a[(i, r)].neg();
                    a.add_row_multiple(i, r, &k);
                    left.add_row_multiple(i, r, &k);
                }
            }
            for j in 0..n {
                if j != r && !a[(r, j)].is_zero() {
                    let k = a[(r, j)].neg();
                    a.add_col_multiple(j, r, &k);
                    right.add_col_multiple(j, r, &k);
                }
            }
            r += 1;
        }
        // a = diag(1..1, 0..0); move the identity block to the bottom
        let shift = n - r;
        let mut perm = Self::zeros(f, n, n);
        for k in 0..n {
            perm[((k + shift) % n, k)] = f.one();
        }
        let left = perm.mul(&left)?;
        let right = right.mul(&perm.transpose())?;
        Ok(RankNormalForm { rank: r, left, right })
    }
}

/// Determinant of a row-major `n x n` matrix of residues mod `p`; `a` is
/// used as scratch space.
pub(crate) fn det_mod_p(a: &mut [u64], n: usize, p: u64) -> u64 {
    use crate::algebra::{inv_mod, mul_mod, sub_mod};
    let mut acc = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            acc = sub_mod(0, acc, p);
        }
        let pv = a[col * n + col];
        acc = mul_mod(acc, pv, p);
        let inv = inv_mod(pv, p);
        for r in col + 1..n {
            let lead = a[r * n + col];
            if lead == 0 {
                continue;
            }
            let f = mul_mod(lead, inv, p);
            for c in col..n {
                let v = mul_mod(f, a[col * n + c], p);
                a[r * n + c] = sub_mod(a[r * n + c], v, p);
            }
        }
    }
    acc
}

/// Rank of a row-major `rows x cols` residue matrix; `a` is scratch space.
pub(crate) fn rank_mod_p(a: &mut [u64], rows: usize, cols: usize, p: u64) -> usize {
    use crate::algebra::{inv_mod, mul_mod, sub_mod};
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for c in 0..cols {
                a.swap(piv * cols + c, rank * cols + c);
            }
        }
        let inv = inv_mod(a[rank * cols + col], p);
        for r in rank + 1..rows {
            let lead = a[r * cols + col];
            if lead == 0 {
                continue;
            }
            let f = mul_mod(lead, inv, p);
            for c in col..cols {
                let v = mul_mod(f, a[rank * cols + c], p);
                a[r * cols + c] = sub_mod(a[r * cols + c], v, p);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_kernels_match_generic() {
        let f = Field::Prime(11);
        let rows: &[&[i64]] = &[&[0, 3, 5], &[2, 7, 1], &[4, 1, 9]];
        let m = Matrix::from_i64(f, rows);
        let mut flat: Vec<u64> = rows.iter().flat_map(|r| r.iter().map(|&v| v as u64)).collect();
        let d = det_mod_p(&mut flat.clone(), 3, 11);
        assert_eq!(Some(d), m.det().unwrap().residue());
        assert_eq!(rank_mod_p(&mut flat, 3, 3, 11), m.rank());
        let mut sing = vec![1, 2, 2, 4];
        assert_eq!(rank_mod_p(&mut sing, 2, 2, 11), 1);
    }

    #[test]
    fn rank_and_det() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(m.rank(), 3);
        assert_eq!(m.det().unwrap(), q.from_i64(-3));
        let s = Matrix::from_i64(q, &[&[1, 2], &[2, 4]]);
        assert_eq!(s.rank(), 1);
        assert!(s.det().unwrap().is_zero());
        assert!(s.inverse().is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::Prime(7);
        let m = Matrix::from_i64(f, &[&[0, 1, 2], &[3, 0, 1], &[1, 1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f, 3));
    }

    #[test]
    fn kernel_is_annihilated() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in ker {
            let col = Matrix::from_rows(q, v.into_iter().map(|e| vec![e]).collect()).unwrap();
            assert!(m.mul(&col).unwrap().is_zero());
        }
    }

    #[test]
    fn normal_form_places_identity_bottom_right() {
        let f = Field::Prime(7);
        let m = Matrix::from_i64(f, &[&[0, 0, 0], &[0, 3, 1], &[0, 6, 2]]);
        let nf = m.rank_normal_form().unwrap();
        assert_eq!(nf.rank, 1);
        let j = nf.left.mul(&m).unwrap().mul(&nf.right).unwrap();
        assert_eq!(j, Matrix::canonical_rank_form(f, 3, 1));
        let z = Matrix::zeros(f, 3, 3).rank_normal_form().unwrap();
        assert_eq!(z.rank, 0);
        assert_eq!(z.left, Matrix::identity(f, 3));
        assert_eq!(z.right, Matrix::identity(f, 3));
    }
}
