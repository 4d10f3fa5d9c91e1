//! Dense matrices with exact entries.

mod canonical;
mod charpoly;
mod smith;

pub use canonical::{canonical_form, elementary_divisors, CanonicalData, ElementaryDivisor};
pub use charpoly::{charpoly, krylov_annihilator, minpoly, resolvent, ResolventCoeffs};
pub use smith::{smith_invariant_factors, smith_with_generators};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{Field, Scalar};

pub type Vector = Vec<Scalar>;

/// Row-major dense matrix; entries share one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        if rows.iter().flatten().any(|s| s.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Square matrix from integer rows.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Matrix::from_rows(field, rows).expect("well-formed integer rows")
    }

    pub fn from_columns(field: Field, nrows: usize, cols: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Size of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn try_add(&self, o: &Matrix) -> Result<Matrix> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.field.zero(), |acc, j| {
                    let a = self.get(i, j);
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        &acc + &(a * &v[j])
                    }
                })
            })
            .collect()
    }

    pub fn pow(&self, mut e: u128) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Polynomial) -> Matrix {
        let n = self.rows;
        p.coeffs()
            .iter()
            .rev()
            .fold(Matrix::zeros(self.field, n, n), |acc, c| {
                &(&acc * self) + &Matrix::identity(self.field, n).scale(c)
            })
    }

    /// `p(self)·v` by Horner's rule on vectors.
    pub fn eval_poly_vec(&self, p: &Polynomial, v: &[Scalar]) -> Vector {
        let mut acc = vec![self.field.zero(); self.rows];
        for c in p.coeffs().iter().rev() {
            acc = self.mul_vec(&acc);
            for (a, x) in acc.iter_mut().zip(v) {
                *a = &*a + &(c * x);
            }
        }
        acc
    }

    /// Block-diagonal assembly of square blocks.
    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(field, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        m
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal and the
    /// negated coefficients in the last column.
    pub fn companion(p: &Polynomial) -> Result<Matrix> {
        if !p.is_monic() {
            return Err(Error::NotMonic);
        }
        let n = p.deg();
        let field = p.field();
        let mut m = Matrix::zeros(field, n, n);
        for i in 1..n {
            m.set(i, i - 1, field.one());
        }
        for i in 0..n {
            m.set(i, n - 1, -p.coeff(i));
        }
        Ok(m)
    }

    /// Reduced row echelon form; returns the pivot columns. Pivots are the first
    /// nonzero entry at or below the current row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.get(r, c).inv().expect("pivot is nonzero");
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self.get(i, j) - &(&f * self.get(r, j));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Determinant by elimination; zero for non-square input.
    pub fn det(&self) -> Scalar {
        if !self.is_square() {
            return self.field.zero();
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return self.field.zero();
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        Ok(aug.submatrix(0, n, n, n))
    }

    /// Some solution of `self · x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vector> {
        let mut m = self.clone();
        let piv = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &c) in piv.iter().enumerate() {
                    v[c] = -m.get(r, f);
                }
                v
            })
            .collect()
    }

    /// Basis of the column space (the pivot columns of `self`).
    pub fn column_basis(&self) -> Vec<Vector> {
        let piv = self.clone().rref();
        piv.iter().map(|&c| self.col(c)).collect()
    }

    /// Krylov chain `v, Av, …, A^{len−1}v`.
    pub fn krylov(&self, v: &[Scalar], len: usize) -> Vec<Vector> {
        let mut out = Vec::with_capacity(len);
        let mut cur = v.to_vec();
        for _ in 0..len {
            let next = self.mul_vec(&cur);
            out.push(cur);
            cur = next;
        }
        out
    }

    /// `v` is cyclic when its Krylov chain spans the whole space.
    pub fn is_cyclic_vector(&self, v: &[Scalar]) -> bool {
        let n = self.rows;
        Matrix::from_columns(self.field, n, &self.krylov(v, n)).rank() == n
    }

    /// Outer product `u·vᵀ`.
    pub fn outer(field: Field, u: &[Scalar], v: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(field, u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                m.set(i, j, a * b);
            }
        }
        m
    }
}

/// Standard basis vector `e_i` of length `n`.
pub fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut e = vec![field.zero(); n];
    e[i] = field.one();
    e
}

pub fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    let field = u.first().map_or(Field::Rationals, Scalar::field);
    u.iter()
        .zip(v)
        .fold(field.zero(), |acc, (a, b)| &acc + &(a * b))
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        self.try_add(o).expect("matrix shape or field mismatch")
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        self.try_add(&-o).expect("matrix shape or field mismatch")
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        self.try_mul(o).expect("matrix shape or field mismatch")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::neg_ref).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let q = Field::Rationals;
        assert_eq!(Matrix::zeros(q, 3, 3).rank(), 0);
        let n2_0 = Matrix::from_i64(q, &[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        assert_eq!(n2_0.rank(), 1);
    }

    #[test]
    fn det_over_f2() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(Matrix::from_i64(f2, &[&[1, 1], &[1, 0]]).det(), f2.one());
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, &[&[2, -1, 3], &[0, 4, 1], &[5, 2, -2]]);
        // 2(−8−2) − (−1)(0−5) + 3(0−20)
        assert_eq!(m.det(), q.from_i64(-85));
    }

    #[test]
    fn inverse_and_solve() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!(Matrix::from_i64(q, &[&[1, 2], &[2, 4]]).inverse().is_err());
        let x = m.solve(&[q.from_i64(3), q.from_i64(2)]).unwrap();
        assert_eq!(x, vec![q.one(), q.one()]);
        let sing = Matrix::from_i64(q, &[&[1, 1], &[1, 1]]);
        assert!(sing.solve(&[q.one(), q.zero()]).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, &[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn companion_layout() {
        let q = Field::Rationals;
        let p = Polynomial::from_i64s(q, &[1, 1, 1]);
        let c = Matrix::companion(&p).unwrap();
        assert_eq!(c, Matrix::from_i64(q, &[&[0, -1], &[1, -1]]));
        assert!(c.pow(3).is_identity());
    }
}
