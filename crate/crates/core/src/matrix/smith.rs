//! Smith normal form of `xI − A` over `F[x]`.
//!
//! Only row operations are mirrored into `U⁻¹` (where `U·(xI − A)·V = D`):
//! the columns `uᵢ` of `U⁻¹` map to vectors `gᵢ = Σ_k uᵢ_k(A)·e_k` that
//! generate the cyclic summands `F[x]/(dᵢ)` of `Fⁿ` under `x ↦ A`.

use crate::error::Result;
use crate::poly::Polynomial;
use crate::scalar::{Field, Scalar};

use super::{Matrix, Vector};

type PolyMat = Vec<Vec<Polynomial>>;

struct Reducer {
    m: PolyMat,
    uinv: PolyMat,
    n: usize,
}

impl Reducer {
    fn new(a: &Matrix) -> Reducer {
        let field = a.field();
        let n = a.n();
        let x = Polynomial::x(field);
        let mut m = vec![vec![Polynomial::zero(field); n]; n];
        let mut uinv = vec![vec![Polynomial::zero(field); n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = Polynomial::constant(a.get(i, j).neg_ref());
                m[i][j] = if i == j { &x + &c } else { c };
            }
            uinv[i][i] = Polynomial::one(field);
        }
        Reducer { m, uinv, n }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.m.swap(a, b);
            for row in &mut self.uinv {
                row.swap(a, b);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for row in &mut self.m {
                row.swap(a, b);
            }
        }
    }

    /// `R_i += c·R_j`; mirrored as `U⁻¹` column `j −= c·(column i)`.
    fn add_row(&mut self, i: usize, j: usize, c: &Polynomial) {
        for k in 0..self.n {
            let t = &self.m[j][k] * c;
            self.m[i][k] = &self.m[i][k] + &t;
        }
        for row in &mut self.uinv {
            let t = &row[i] * c;
            row[j] = &row[j] - &t;
        }
    }

    fn add_col(&mut self, i: usize, j: usize, c: &Polynomial) {
        for row in &mut self.m {
            let t = &row[j] * c;
            row[i] = &row[i] + &t;
        }
    }

    /// `R_i *= s` for a unit `s`; mirrored as `U⁻¹` column `i *= s⁻¹`.
    fn scale_row(&mut self, i: usize, s: &Scalar) -> Result<()> {
        let s_inv = s.inv()?;
        for k in 0..self.n {
            self.m[i][k] = self.m[i][k].scale(s);
        }
        for row in &mut self.uinv {
            row[i] = row[i].scale(&s_inv);
        }
        Ok(())
    }

    fn min_degree_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..self.n {
            for j in t..self.n {
                if let Some(d) = self.m[i][j].degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn reduce(&mut self) -> Result<()> {
        for t in 0..self.n {
            let Some((i, j)) = self.min_degree_entry(t) else {
                return Ok(());
            };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            loop {
                let mut dirty = false;
                for i in t + 1..self.n {
                    if self.m[i][t].is_zero() {
                        continue;
                    }
                    let (q, r) = self.m[i][t].divmod(&self.m[t][t])?;
                    self.add_row(i, t, &-&q);
                    if !r.is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.n {
                    if self.m[t][j].is_zero() {
                        continue;
                    }
                    let (q, r) = self.m[t][j].divmod(&self.m[t][t])?;
                    self.add_col(j, t, &-&q);
                    if !r.is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    self.repivot(t);
                    continue;
                }
                // pivot row and column are clear; enforce divisibility of the rest
                let mut offender = None;
                'scan: for i in t + 1..self.n {
                    for j in t + 1..self.n {
                        if !self.m[i][j].rem(&self.m[t][t])?.is_zero() {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        let one = Polynomial::one(self.m[t][t].field());
                        self.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            let lead = self.m[t][t].leading().expect("nonzero pivot").clone();
            self.scale_row(t, &lead.inv()?)?;
        }
        Ok(())
    }

    /// Moves a least-degree nonzero entry of the pivot row or column to `(t, t)`.
    fn repivot(&mut self, t: usize) {
        let mut best = (self.m[t][t].degree().unwrap_or(usize::MAX), t, t);
        for k in t + 1..self.n {
            if let Some(d) = self.m[k][t].degree() {
                if d < best.0 {
                    best = (d, k, t);
                }
            }
            if let Some(d) = self.m[t][k].degree() {
                if d < best.0 {
                    best = (d, t, k);
                }
            }
        }
        self.swap_rows(t, best.1);
        self.swap_cols(t, best.2);
    }
}

/// Monic invariant factors `d₁ | d₂ | … | dₙ` of `xI − A`, units reported as `1`.
pub fn smith_invariant_factors(a: &Matrix) -> Result<Vec<Polynomial>> {
    Ok(smith_with_generators(a)?
        .into_iter()
        .map(|(d, _)| d)
        .collect())
}

/// Invariant factors paired with a vector whose `A`-annihilator is exactly that factor.
/// The cyclic subspaces of the pairs form a direct sum decomposition of `Fⁿ`.
pub fn smith_with_generators(a: &Matrix) -> Result<Vec<(Polynomial, Vector)>> {
    assert!(a.is_square(), "Smith form of a non-square matrix");
    let field: Field = a.field();
    let n = a.n();
    let mut r = Reducer::new(a);
    r.reduce()?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut g = vec![field.zero(); n];
        for k in 0..n {
            let mut e = vec![field.zero(); n];
            e[k] = field.one();
            let term = a.eval_poly_vec(&r.uinv[k][i], &e);
            for (acc, t) in g.iter_mut().zip(term) {
                *acc = &*acc + &t;
            }
        }
        out.push((r.m[i][i].clone(), g));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::krylov_annihilator;

    fn q() -> Field {
        Field::Rationals
    }

    fn qp(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(q(), c)
    }

    #[test]
    fn spec_examples() {
        let z = Matrix::zeros(q(), 2, 2);
        assert_eq!(
            smith_invariant_factors(&z).unwrap(),
            vec![qp(&[0, 1]), qp(&[0, 1])]
        );
        let j = Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]);
        assert_eq!(
            smith_invariant_factors(&j).unwrap(),
            vec![qp(&[1]), qp(&[0, 0, 1])]
        );
        let d = Matrix::from_i64(q(), &[&[0, 0], &[0, -1]]);
        assert_eq!(
            smith_invariant_factors(&d).unwrap(),
            vec![qp(&[1]), qp(&[0, 1, 1])]
        );
    }

    #[test]
    fn generators_have_exact_annihilators() {
        let a = Matrix::from_i64(
            q(),
            &[&[2, 1, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[1, 0, 0, 3]],
        );
        let pairs = smith_with_generators(&a).unwrap();
        let prod = pairs
            .iter()
            .fold(Polynomial::one(q()), |acc, (d, _)| &acc * d);
        assert_eq!(prod, crate::matrix::charpoly(&a));
        for (d, g) in &pairs {
            assert_eq!(&krylov_annihilator(&a, g), d);
        }
        for w in pairs.windows(2) {
            assert!(w[0].0.divides(&w[1].0).unwrap());
        }
    }

    #[test]
    fn prime_field_case() {
        let f2 = Field::prime(2).unwrap();
        let a = Matrix::from_i64(f2, &[&[1, 1], &[0, 1]]);
        let d = smith_invariant_factors(&a).unwrap();
        assert_eq!(d[1], Polynomial::from_i64s(f2, &[1, 0, 1]));
        assert!(d[0].is_one());
    }
}
