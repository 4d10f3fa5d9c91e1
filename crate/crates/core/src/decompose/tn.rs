use crate::error::{Error, Result};
use crate::matrix::{canonical_form, Matrix};
use crate::scalar::Field;

use super::plan::{allocate_zeros, Chunk, Strategy};
use super::steer::{steer_general, steer_rank1, SearchBudget};
use super::target::{choose_target, target_pool};
use super::{certified, conjugate_back, fp_completion, is_periodic, pair_full, require_torsion};
use super::{Certificate, Parts};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TnOptions {
    pub budget: SearchBudget,
    /// Overrides the characteristic-zero search bound for torsion orders.
    pub order_bound: Option<u64>,
}

/// `(T, N)` for one chunk in its own coordinates, `T + N = M`.
fn solve_chunk(
    chunk: &Chunk,
    m: &Matrix,
    field: Field,
    opts: &TnOptions,
) -> Result<(Matrix, Matrix)> {
    match chunk.strategy {
        Strategy::Trivial => Ok((m.clone(), Matrix::zeros(field, m.n(), m.n()))),
        Strategy::PairFull => {
            let k = chunk.zeros;
            let n = pair_full(&m.submatrix(k, k, k, k))?;
            Ok((m - &n, n))
        }
        Strategy::SteerRank1 => {
            let target = choose_target(chunk, field)?
                .ok_or_else(|| Error::SolverExhausted("no admissible target".into()))?;
            let n = steer_rank1(m, &target.q)?;
            Ok((m + &n, -&n))
        }
        Strategy::SteerGeneral => {
            let pool = target_pool(chunk, field)?;
            let n = steer_general(m, &pool, &opts.budget)?;
            Ok((m + &n, -&n))
        }
        Strategy::FpGlobal => fp_completion(m),
    }
}

/// `A = T + N` with `T` torsion and `N² = 0`; requires `2·rank(A) ≥ n`.
pub fn torsion_squarezero(a: &Matrix, opts: &TnOptions) -> Result<Certificate> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "decomposition needs a square matrix".into(),
        ));
    }
    let n = a.n();
    let rank = a.rank();
    if 2 * rank < n {
        return Err(Error::RankTooLow { rank, n });
    }
    if is_periodic(a, opts.order_bound)?.is_none() {
        return Err(Error::NotPeriodic);
    }
    let field = a.field();
    if !field.is_char_zero() {
        let (t, nm) = fp_completion(a)?;
        let order = require_torsion(&t, opts.order_bound)?;
        return certified(
            a,
            Certificate {
                parts: Parts::Tn { t, n: nm },
                torsion_order: order,
                transform: Matrix::identity(field, n),
            },
        );
    }

    let canon = canonical_form(a)?;
    let plan = allocate_zeros(&canon, field)?;
    let mut offsets = Vec::with_capacity(canon.divisors.len());
    let mut off = 0;
    for d in &canon.divisors {
        offsets.push(off);
        off += d.size();
    }
    let mut columns = Vec::with_capacity(n);
    let mut ts = Vec::new();
    let mut ns = Vec::new();
    for chunk in &plan.chunks {
        for &i in &chunk.members {
            for c in 0..canon.divisors[i].size() {
                columns.push(canon.transform.col(offsets[i] + c));
            }
        }
        let m = chunk.matrix(field)?;
        let (t, nm) = solve_chunk(chunk, &m, field, opts)?;
        ts.push(t);
        ns.push(nm);
    }
    let q = Matrix::from_columns(field, n, &columns);
    let t = conjugate_back(&q, &Matrix::block_diag(field, &ts))?;
    let nm = conjugate_back(&q, &Matrix::block_diag(field, &ns))?;
    let order = require_torsion(&t, opts.order_bound)?;
    certified(
        a,
        Certificate {
            parts: Parts::Tn { t, n: nm },
            torsion_order: order,
            transform: q,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::torsion_order_matrix;
    use crate::poly::{cyclotomic, Polynomial};

    fn q() -> Field {
        Field::Rationals
    }

    fn zero_plus(p: &Polynomial) -> Matrix {
        Matrix::block_diag(
            q(),
            &[Matrix::zeros(q(), 1, 1), Matrix::companion(p).unwrap()],
        )
    }

    #[test]
    fn zero_plus_phi4_has_order_three() {
        let c = torsion_squarezero(&zero_plus(&cyclotomic(4)), &TnOptions::default()).unwrap();
        assert_eq!(c.torsion_order, 3);
    }

    #[test]
    fn zero_plus_phi3_order_divides_four() {
        let c = torsion_squarezero(&zero_plus(&cyclotomic(3)), &TnOptions::default()).unwrap();
        assert_eq!(4 % c.torsion_order, 0);
    }

    #[test]
    fn nilpotent_two_block() {
        let a = Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]);
        let c = torsion_squarezero(&a, &TnOptions::default()).unwrap();
        let t = c.parts.torsion();
        assert!(matches!(
            torsion_order_matrix(t, None).unwrap(),
            Some(2 | 3 | 4 | 6)
        ));
    }

    #[test]
    fn failure_modes() {
        let opts = TnOptions::default();
        assert_eq!(
            torsion_squarezero(&Matrix::zeros(q(), 3, 3), &opts),
            Err(Error::RankTooLow { rank: 0, n: 3 })
        );
        let u = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        assert_eq!(torsion_squarezero(&u, &opts), Err(Error::NotPeriodic));
    }

    #[test]
    fn conjugated_input() {
        let b = Matrix::block_diag(
            q(),
            &[
                Matrix::zeros(q(), 1, 1),
                Matrix::companion(&cyclotomic(1)).unwrap(),
                Matrix::companion(&cyclotomic(6)).unwrap(),
            ],
        );
        let p = Matrix::from_i64(
            q(),
            &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, -1], &[1, 0, 0, 1]],
        );
        let a = &(&p * &b) * &p.inverse().unwrap();
        let c = torsion_squarezero(&a, &TnOptions::default()).unwrap();
        assert!(crate::decompose::verify_certificate(&a, &c).passed());
    }
}
