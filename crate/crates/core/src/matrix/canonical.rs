//! Canonical block form `P⁻¹AP = B` built from cyclic generators.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::poly::{
    cyclotomic_in, euler_phi, factor_fp, torsion_order_poly, unity_split, Polynomial,
};
use crate::scalar::Field;

use super::{krylov_annihilator, smith_with_generators, unit_vector, Matrix, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryDivisor {
    /// The divisor `x`, a 1×1 zero block.
    X,
    /// `x^k` with `k ≥ 2`.
    NilpotentPower(usize),
    /// An invertible primary factor, `f(0) ≠ 0`.
    TorsionFactor(Polynomial),
}

impl ElementaryDivisor {
    pub fn polynomial(&self, field: Field) -> Polynomial {
        match self {
            ElementaryDivisor::X => Polynomial::x(field),
            ElementaryDivisor::NilpotentPower(k) => Polynomial::monomial(field.one(), *k),
            ElementaryDivisor::TorsionFactor(f) => f.clone(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            ElementaryDivisor::X => 1,
            ElementaryDivisor::NilpotentPower(k) => *k,
            ElementaryDivisor::TorsionFactor(f) => f.deg(),
        }
    }

    fn rank_key(&self) -> (u8, usize) {
        match self {
            ElementaryDivisor::X => (0, 0),
            ElementaryDivisor::NilpotentPower(k) => (1, usize::MAX - k),
            ElementaryDivisor::TorsionFactor(_) => (2, 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalData {
    pub divisors: Vec<ElementaryDivisor>,
    pub transform: Matrix,
    pub block: Matrix,
}

struct Piece {
    divisor: ElementaryDivisor,
    order: Option<u128>,
    generator: Vector,
}

fn torsion_cmp(a: &Piece, b: &Piece) -> Ordering {
    let (ElementaryDivisor::TorsionFactor(f), ElementaryDivisor::TorsionFactor(g)) =
        (&a.divisor, &b.divisor)
    else {
        return Ordering::Equal;
    };
    let order_key = |o: Option<u128>| o.map_or((1, 0), |v| (0, v));
    order_key(a.order)
        .cmp(&order_key(b.order))
        .then(f.deg().cmp(&g.deg()))
        .then_with(|| f.canonical_cmp(g))
}

/// Primary parts of an invertible monic `r` (`r(0) ≠ 0`), or `NotSplitOverField`.
fn primary_parts(r: &Polynomial) -> Result<Vec<Polynomial>> {
    let field = r.field();
    if r.deg() == 0 {
        return Ok(Vec::new());
    }
    match field {
        Field::Prime(_) => Ok(factor_fp(r)?.into_iter().map(|(g, e)| g.pow(e)).collect()),
        Field::Rationals => {
            let split = unity_split(r)?;
            if !split.rest.is_one() {
                return Err(Error::NotSplitOverField);
            }
            Ok(split
                .cyclotomic
                .iter()
                .map(|(d, m)| cyclotomic_in(d.get(), field).pow(*m))
                .collect())
        }
        Field::RealQuadratic(_) => {
            // Φ_e-primary components; Φ_e may split into two conjugate factors here
            let mut rest = r.clone();
            let mut out = Vec::new();
            let bound = 8 * (r.deg() as u64).pow(2);
            for e in 1..=bound {
                if rest.deg() == 0 {
                    break;
                }
                if euler_phi(e) as usize > 2 * rest.deg() {
                    continue;
                }
                let phi = cyclotomic_in(e, field);
                let mut part = Polynomial::one(field);
                loop {
                    let g = rest.gcd(&phi)?;
                    if g.deg() == 0 {
                        break;
                    }
                    rest = rest.exact_div(&g)?;
                    part = &part * &g;
                }
                if part.deg() > 0 {
                    out.push(part);
                }
            }
            if rest.deg() > 0 {
                return Err(Error::NotSplitOverField);
            }
            Ok(out)
        }
    }
}

/// Elementary divisors, similarity transform and block form of `A`.
///
/// Each invariant factor is split into its `x`-power and invertible primary
/// parts; the Krylov chain of each part's generator supplies the columns of `P`.
pub fn canonical_form(a: &Matrix) -> Result<CanonicalData> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "canonical form needs a square matrix".into(),
        ));
    }
    let field = a.field();
    let n = a.n();
    let mut pieces = Vec::new();
    let mut pairs = smith_with_generators(a)?;
    pairs.retain(|(d, _)| d.deg() > 0);
    if let [(d, g)] = pairs.as_mut_slice() {
        // cyclic input: prefer the first standard basis vector that generates
        if let Some(e) = (0..n)
            .map(|i| unit_vector(field, n, i))
            .find(|e| a.is_cyclic_vector(e))
        {
            debug_assert_eq!(&krylov_annihilator(a, &e), d);
            *g = e;
        }
    }
    for (d, g) in pairs {
        let k = d.x_valuation();
        let invertible = d.shift_down(k);
        if k > 0 {
            let generator = a.eval_poly_vec(&invertible, &g);
            let divisor = if k == 1 {
                ElementaryDivisor::X
            } else {
                ElementaryDivisor::NilpotentPower(k)
            };
            pieces.push(Piece {
                divisor,
                order: None,
                generator,
            });
        }
        for h in primary_parts(&invertible)? {
            let cofactor = d.exact_div(&h)?;
            let generator = a.eval_poly_vec(&cofactor, &g);
            let order = torsion_order_poly(&h, None)?;
            pieces.push(Piece {
                divisor: ElementaryDivisor::TorsionFactor(h),
                order,
                generator,
            });
        }
    }
    pieces.sort_by(|a, b| {
        a.divisor
            .rank_key()
            .cmp(&b.divisor.rank_key())
            .then_with(|| torsion_cmp(a, b))
    });

    let mut columns = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(pieces.len());
    for p in &pieces {
        let poly = p.divisor.polynomial(field);
        columns.extend(a.krylov(&p.generator, poly.deg()));
        blocks.push(Matrix::companion(&poly)?);
    }
    if columns.len() != n {
        return Err(Error::InternalInconsistency(
            "elementary divisor degrees do not sum to n".into(),
        ));
    }
    let transform = Matrix::from_columns(field, n, &columns);
    let block = Matrix::block_diag(field, &blocks);
    if transform.rank() != n || (a * &transform) != (&transform * &block) {
        return Err(Error::InternalInconsistency(
            "canonical transform failed verification".into(),
        ));
    }
    Ok(CanonicalData {
        divisors: pieces.into_iter().map(|p| p.divisor).collect(),
        transform,
        block,
    })
}

pub fn elementary_divisors(a: &Matrix) -> Result<Vec<ElementaryDivisor>> {
    Ok(canonical_form(a)?.divisors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cyclotomic;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn nilpotent_plus_zero_block() {
        let a = Matrix::from_i64(q(), &[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        let c = canonical_form(&a).unwrap();
        assert_eq!(
            c.divisors,
            vec![ElementaryDivisor::X, ElementaryDivisor::NilpotentPower(2)]
        );
        let b = Matrix::from_i64(q(), &[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
        assert_eq!(c.block, b);
    }

    #[test]
    fn companion_of_phi5_is_its_own_form() {
        let a = Matrix::companion(&cyclotomic(5)).unwrap();
        let c = canonical_form(&a).unwrap();
        assert_eq!(
            c.divisors,
            vec![ElementaryDivisor::TorsionFactor(cyclotomic(5))]
        );
        assert!(c.transform.is_identity());
    }

    #[test]
    fn unipotent_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let a = Matrix::from_i64(f2, &[&[1, 1], &[0, 1]]);
        let c = canonical_form(&a).unwrap();
        assert_eq!(
            c.divisors,
            vec![ElementaryDivisor::TorsionFactor(Polynomial::from_i64s(
                f2,
                &[1, 0, 1]
            ))]
        );
    }

    #[test]
    fn non_cyclotomic_rest_is_rejected() {
        let a = Matrix::from_i64(q(), &[&[0, -2], &[1, -1]]);
        assert_eq!(canonical_form(&a), Err(Error::NotSplitOverField));
    }

    #[test]
    fn ordering_of_torsion_blocks() {
        let blocks = [
            Matrix::companion(&cyclotomic(5)).unwrap(),
            Matrix::companion(&cyclotomic(2)).unwrap(),
            Matrix::companion(&cyclotomic(3)).unwrap(),
            Matrix::zeros(q(), 1, 1),
        ];
        let a = Matrix::block_diag(q(), &blocks);
        let c = canonical_form(&a).unwrap();
        let want: Vec<_> = std::iter::once(ElementaryDivisor::X)
            .chain(
                [2u64, 3, 5]
                    .iter()
                    .map(|&d| ElementaryDivisor::TorsionFactor(cyclotomic(d))),
            )
            .collect();
        assert_eq!(c.divisors, want);
    }

    #[test]
    fn quadratic_field_keeps_phi8_half() {
        let f = Field::real_quadratic(2).unwrap();
        let h = Polynomial::new(f, vec![f.one(), f.sqrt_d().unwrap(), f.one()]);
        let a = Matrix::block_diag(
            f,
            &[
                Matrix::companion(&h).unwrap(),
                Matrix::companion(&cyclotomic_in(1, f)).unwrap(),
            ],
        );
        let c = canonical_form(&a).unwrap();
        assert_eq!(
            c.divisors,
            vec![
                ElementaryDivisor::TorsionFactor(cyclotomic_in(1, f)),
                ElementaryDivisor::TorsionFactor(h)
            ]
        );
    }
}
