use crate::error::{Error, Result};
use crate::matrix::{unit_vector, Matrix, Vector};
use crate::scalar::Field;

fn in_span(field: Field, n: usize, basis: &[Vector], v: &[crate::scalar::Scalar]) -> bool {
    if basis.is_empty() {
        return v.iter().all(|c| c.is_zero());
    }
    Matrix::from_columns(field, n, basis).solve(v).is_some()
}

/// `(T, N)` with `A = T + N`, `N² = 0` and `T` invertible, over a prime field.
///
/// `N = U·Vᵀ` where the columns of `U` span `W` with `W ⊕ col(A) = Fⁿ` and
/// `W ∩ ker(A) = 0`, and `Vᵀ` kills `W` and maps `ker(A)` isomorphically.
/// A kernel vector of `A − N` would have `Ax ∈ col(A) ∩ W = 0` and `Vᵀx = 0`.
pub fn fp_completion(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let field = a.field();
    if field.is_char_zero() {
        return Err(Error::InvalidInput("completion needs a prime field".into()));
    }
    let n = a.n();
    let rank = a.rank();
    if 2 * rank < n {
        return Err(Error::RankTooLow { rank, n });
    }
    let r = n - rank;
    if r == 0 {
        return Ok((a.clone(), Matrix::zeros(field, n, n)));
    }
    let col = a.column_basis();
    let ker = a.nullspace();
    let units: Vec<Vector> = (0..n).map(|i| unit_vector(field, n, i)).collect();
    let mut w: Vec<Vector> = Vec::with_capacity(r);
    for _ in 0..r {
        // S1 = col(A) + W and S2 = W + ker(A) are proper; pick a vector outside both
        let s1: Vec<Vector> = col.iter().chain(&w).cloned().collect();
        let s2: Vec<Vector> = w.iter().chain(&ker).cloned().collect();
        let u = units
            .iter()
            .find(|e| !in_span(field, n, &s1, e))
            .expect("S1 is proper");
        let pick = if !in_span(field, n, &s2, u) {
            u.clone()
        } else {
            let v = units
                .iter()
                .find(|e| !in_span(field, n, &s2, e))
                .expect("S2 is proper");
            if !in_span(field, n, &s1, v) {
                v.clone()
            } else {
                u.iter().zip(v).map(|(x, y)| x + y).collect()
            }
        };
        w.push(pick);
    }
    let mut basis: Vec<Vector> = w.iter().chain(&ker).cloned().collect();
    for e in &units {
        if basis.len() == n {
            break;
        }
        if !in_span(field, n, &basis, e) {
            basis.push(e.clone());
        }
    }
    let b_inv = Matrix::from_columns(field, n, &basis).inverse()?;
    // Vᵀ = [0 | I_r | 0]·B⁻¹: rows r..2r of B⁻¹
    let vt = b_inv.submatrix(r, 0, r, n);
    let u = Matrix::from_columns(field, n, &w);
    let nm = &u * &vt;
    let t = a - &nm;
    if !(&nm * &nm).is_zero() || t.rank() != n {
        return Err(Error::InternalInconsistency("completion failed".into()));
    }
    Ok((t, nm))
}
