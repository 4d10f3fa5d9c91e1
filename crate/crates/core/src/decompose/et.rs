use crate::error::{Error, Result};
use crate::matrix::{canonical_form, ElementaryDivisor, Matrix};
use crate::poly::{torsion_order_poly, Polynomial};

use super::{certified, conjugate_back, is_periodic, lcm, Certificate, Parts};

/// `A = E + T` with `E² = E` and `T` torsion, built block by block on the
/// canonical form: `0 = Id + (−Id)`, `N_k = E_k + C(1 + x + … + x^k)` where
/// `E_k` has an all-ones last column, and `T = 0 + T`.
pub fn idempotent_torsion(a: &Matrix) -> Result<Certificate> {
    if is_periodic(a, None)?.is_none() {
        return Err(Error::NotPeriodic);
    }
    let field = a.field();
    let canon = canonical_form(a)?;
    let minus_one_order = if field.characteristic() == 2 { 1 } else { 2 };
    let mut es = Vec::new();
    let mut ts = Vec::new();
    let mut order = 1u128;
    for d in &canon.divisors {
        match d {
            ElementaryDivisor::X => {
                es.push(Matrix::identity(field, 1));
                ts.push(Matrix::identity(field, 1).scale(&field.from_i64(-1)));
                order = lcm(order, minus_one_order);
            }
            ElementaryDivisor::NilpotentPower(k) => {
                let k = *k;
                let mut e = Matrix::zeros(field, k, k);
                for i in 0..k {
                    e.set(i, k - 1, field.one());
                }
                let geometric = Polynomial::new(field, vec![field.one(); k + 1]);
                let s = torsion_order_poly(&geometric, None)?.ok_or(Error::NotTorsion)?;
                es.push(e);
                ts.push(Matrix::companion(&geometric)?);
                order = lcm(order, s);
            }
            ElementaryDivisor::TorsionFactor(f) => {
                let s = torsion_order_poly(f, None)?.ok_or(Error::NotPeriodic)?;
                es.push(Matrix::zeros(field, f.deg(), f.deg()));
                ts.push(Matrix::companion(f)?);
                order = lcm(order, s);
            }
        }
    }
    let p = &canon.transform;
    let e = conjugate_back(p, &Matrix::block_diag(field, &es))?;
    let t = conjugate_back(p, &Matrix::block_diag(field, &ts))?;
    certified(
        a,
        Certificate {
            parts: Parts::Et { e, t },
            torsion_order: order,
            transform: p.clone(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn zero_one_by_one() {
        let c = idempotent_torsion(&Matrix::zeros(q(), 1, 1)).unwrap();
        assert_eq!(
            c.parts,
            Parts::Et {
                e: Matrix::from_i64(q(), &[&[1]]),
                t: Matrix::from_i64(q(), &[&[-1]]),
            }
        );
        assert_eq!(c.torsion_order, 2);
    }

    #[test]
    fn nilpotent_two_block() {
        let a = Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]);
        let c = idempotent_torsion(&a).unwrap();
        let Parts::Et { e, t } = &c.parts else {
            panic!("kind")
        };
        assert_eq!(e, &Matrix::from_i64(q(), &[&[0, 1], &[0, 1]]));
        assert_eq!(t, &Matrix::from_i64(q(), &[&[0, -1], &[1, -1]]));
        assert!(t.pow(3).is_identity());
        assert_eq!(c.torsion_order, 3);
    }

    #[test]
    fn invertible_torsion_is_its_own_part() {
        let a = Matrix::from_i64(q(), &[&[0, -1], &[1, 0]]);
        let c = idempotent_torsion(&a).unwrap();
        assert_eq!(
            c.parts,
            Parts::Et {
                e: Matrix::zeros(q(), 2, 2),
                t: a
            }
        );
    }

    #[test]
    fn characteristic_two_zero_block() {
        let f2 = Field::prime(2).unwrap();
        let c = idempotent_torsion(&Matrix::zeros(f2, 2, 2)).unwrap();
        assert_eq!(c.torsion_order, 1);
    }

    #[test]
    fn rejects_non_periodic() {
        let a = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        assert_eq!(idempotent_torsion(&a), Err(Error::NotPeriodic));
    }
}
