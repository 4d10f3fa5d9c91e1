use crate::error::{Error, Result};
use crate::matrix::Matrix;

use super::require_torsion;

/// Square-zero `N = [[−T, −T], [T, T]]` for `A = diag(0_k, T)`.
///
/// `A − N = [[T, T], [−T, 0]]` satisfies `(A − N)⁶ = diag(T⁶, T⁶)`, so it is
/// torsion whenever `T` is.
pub fn pair_full(t: &Matrix) -> Result<Matrix> {
    require_torsion(t, None)?;
    let field = t.field();
    let k = t.n();
    let neg = -t;
    let mut n = Matrix::zeros(field, 2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            n.set(i, j, neg.get(i, j).clone());
            n.set(i, k + j, neg.get(i, j).clone());
            n.set(k + i, j, t.get(i, j).clone());
            n.set(k + i, k + j, t.get(i, j).clone());
        }
    }
    let a = Matrix::block_diag(field, &[Matrix::zeros(field, k, k), t.clone()]);
    let t6 = t.pow(6);
    let want = Matrix::block_diag(field, &[t6.clone(), t6]);
    if !(&n * &n).is_zero() || (&a - &n).pow(6) != want {
        return Err(Error::InternalInconsistency(
            "pairing identity failed".into(),
        ));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::torsion_order_matrix;
    use crate::scalar::Field;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn unit_blocks() {
        let one = Matrix::from_i64(q(), &[&[1]]);
        let n = pair_full(&one).unwrap();
        let a = Matrix::from_i64(q(), &[&[0, 0], &[0, 1]]);
        let t = &a - &n;
        assert_eq!(t, Matrix::from_i64(q(), &[&[1, 1], &[-1, 0]]));
        assert_eq!(torsion_order_matrix(&t, None).unwrap(), Some(6));

        let minus = Matrix::from_i64(q(), &[&[-1]]);
        let n = pair_full(&minus).unwrap();
        let a = Matrix::from_i64(q(), &[&[0, 0], &[0, -1]]);
        let t = &a - &n;
        assert_eq!(t, Matrix::from_i64(q(), &[&[-1, -1], &[1, 0]]));
        assert_eq!(torsion_order_matrix(&t, None).unwrap(), Some(3));
    }

    #[test]
    fn rejects_non_torsion() {
        let two = Matrix::from_i64(q(), &[&[2]]);
        assert_eq!(pair_full(&two), Err(Error::NotTorsion));
    }
}
