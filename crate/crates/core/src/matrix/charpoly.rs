use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{Field, Scalar};

use super::Matrix;

/// Coefficient matrices of the adjugate: `adj(xI − A) = Σ xⁱ Hᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventCoeffs {
    pub h: Vec<Matrix>,
    pub charpoly: Polynomial,
}

/// Characteristic polynomial `det(xI − A)`.
///
/// Characteristic zero uses the Faddeev–LeVerrier recursion, which divides by
/// `1..=n`; prime fields go through an exact Hessenberg reduction instead.
pub fn charpoly(a: &Matrix) -> Polynomial {
    assert!(a.is_square(), "charpoly of a non-square matrix");
    if a.field().is_char_zero() {
        faddeev_leverrier(a)
    } else {
        hessenberg_charpoly(a)
    }
}

fn faddeev_leverrier(a: &Matrix) -> Polynomial {
    let field = a.field();
    let n = a.n();
    let id = Matrix::identity(field, n);
    let mut coeffs = vec![field.zero(); n + 1];
    coeffs[n] = field.one();
    let mut m = Matrix::zeros(field, n, n);
    for k in 1..=n {
        m = &(a * &m) + &id.scale(&coeffs[n - k + 1]);
        let t = (a * &m).trace();
        let k_inv = field
            .from_i64(k as i64)
            .inv()
            .expect("k is a unit in characteristic 0");
        coeffs[n - k] = -(&t * &k_inv);
    }
    Polynomial::new(field, coeffs)
}

fn hessenberg_charpoly(a: &Matrix) -> Polynomial {
    let field = a.field();
    let n = a.n();
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
            continue;
        };
        if piv != j + 1 {
            h.swap_rows(piv, j + 1);
            for r in 0..n {
                let t = h.get(r, piv).clone();
                h.set(r, piv, h.get(r, j + 1).clone());
                h.set(r, j + 1, t);
            }
        }
        let inv = h.get(j + 1, j).inv().expect("pivot is nonzero");
        for k in j + 2..n {
            if h.get(k, j).is_zero() {
                continue;
            }
            let u = h.get(k, j) * &inv;
            for c in 0..n {
                let v = h.get(k, c) - &(&u * h.get(j + 1, c));
                h.set(k, c, v);
            }
            for r in 0..n {
                let v = h.get(r, j + 1) + &(&u * h.get(r, k));
                h.set(r, j + 1, v);
            }
        }
    }
    let x = Polynomial::x(field);
    let mut p: Vec<Polynomial> = vec![Polynomial::one(field)];
    for m in 1..=n {
        let lin = &x - &Polynomial::constant(h.get(m - 1, m - 1).clone());
        let mut next = &lin * &p[m - 1];
        let mut t = field.one();
        for i in 1..m {
            t = &t * h.get(m - i, m - i - 1);
            let c = h.get(m - 1 - i, m - 1) * &t;
            if !c.is_zero() {
                next = &next - &p[m - 1 - i].scale(&c);
            }
        }
        p.push(next);
    }
    p.pop().expect("nonempty")
}

/// Horner recursion `H_{n−1} = I`, `H_{i−1} = Hᵢ·A + χᵢ·I`, checked against
/// the Cayley–Hamilton identity `H₀·A + χ₀·I = 0`.
pub fn resolvent(a: &Matrix) -> Result<ResolventCoeffs> {
    let field = a.field();
    let n = a.n();
    let chi = charpoly(a);
    let id = Matrix::identity(field, n);
    let mut h = vec![Matrix::zeros(field, n, n); n];
    if n == 0 {
        return Ok(ResolventCoeffs { h, charpoly: chi });
    }
    h[n - 1] = id.clone();
    for i in (1..n).rev() {
        h[i - 1] = &(&h[i] * a) + &id.scale(&chi.coeff(i));
    }
    let witness = &(&h[0] * a) + &id.scale(&chi.coeff(0));
    if !witness.is_zero() {
        return Err(Error::InternalInconsistency(
            "Cayley–Hamilton witness failed".into(),
        ));
    }
    Ok(ResolventCoeffs { h, charpoly: chi })
}

/// Monic annihilator of `v`: the least-degree `p` with `p(A)·v = 0`.
pub fn krylov_annihilator(a: &Matrix, v: &[Scalar]) -> Polynomial {
    let field = a.field();
    let n = a.n();
    let mut chain: Vec<Vec<Scalar>> = vec![v.to_vec()];
    for k in 0..=n {
        if k > 0 {
            let next = a.mul_vec(&chain[k - 1]);
            chain.push(next);
        }
        let target = &chain[k];
        let coeffs = if k == 0 {
            target.iter().all(Scalar::is_zero).then(Vec::new)
        } else {
            Matrix::from_columns(field, n, &chain[..k]).solve(target)
        };
        if let Some(c) = coeffs {
            let mut p: Vec<Scalar> = c.iter().map(Scalar::neg_ref).collect();
            p.push(field.one());
            return Polynomial::new(field, p);
        }
    }
    unreachable!("a chain of n + 1 vectors is dependent")
}

/// Minimal polynomial as the lcm of the annihilators of the standard basis vectors.
pub fn minpoly(a: &Matrix) -> Polynomial {
    let field: Field = a.field();
    let n = a.n();
    let mut acc = Polynomial::one(field);
    for i in 0..n {
        let mut e = vec![field.zero(); n];
        e[i] = field.one();
        acc = acc
            .lcm(&krylov_annihilator(a, &e))
            .expect("nonzero annihilators");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn companion_charpoly() {
        let p = Polynomial::from_i64s(q(), &[3, -1, 0, 2, 1]);
        assert_eq!(charpoly(&Matrix::companion(&p).unwrap()), p);
        let f5 = Field::prime(5).unwrap();
        let p5 = Polynomial::from_i64s(f5, &[3, 4, 0, 2, 1]);
        assert_eq!(charpoly(&Matrix::companion(&p5).unwrap()), p5);
    }

    #[test]
    fn small_examples() {
        let j = Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]);
        let x2 = Polynomial::from_i64s(q(), &[0, 0, 1]);
        assert_eq!(charpoly(&j), x2);
        assert_eq!(minpoly(&j), x2);
        let z = Matrix::zeros(q(), 2, 2);
        assert_eq!(charpoly(&z), x2);
        assert_eq!(minpoly(&z), Polynomial::x(q()));
    }

    #[test]
    fn charpoly_agrees_with_determinant_oracle() {
        // det(tI − A) at several points, independent of both charpoly routes
        for field in [
            q(),
            Field::prime(2).unwrap(),
            Field::prime(3).unwrap(),
            Field::prime(7).unwrap(),
        ] {
            let a = Matrix::from_i64(
                field,
                &[&[1, 2, 0, -1], &[0, 3, 1, 1], &[2, 0, -1, 4], &[1, 1, 1, 0]],
            );
            let chi = charpoly(&a);
            for t in 0..6 {
                let ts = field.from_i64(t);
                let shifted = &Matrix::identity(field, 4).scale(&ts) - &a;
                assert_eq!(chi.eval(&ts), shifted.det(), "t = {t} over {field}");
            }
        }
    }

    #[test]
    fn resolvent_examples() {
        let one = Matrix::from_i64(q(), &[&[5]]);
        let r = resolvent(&one).unwrap();
        assert_eq!(r.h, vec![Matrix::identity(q(), 1)]);

        // (xI − A)(xI + A) = x²I when A² = 0, so adj(xI − A) = x·I + A
        let a = Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]);
        let r = resolvent(&a).unwrap();
        assert_eq!(r.h[1], Matrix::identity(q(), 2));
        assert_eq!(r.h[0], a);

        let id = Matrix::identity(q(), 2);
        let r = resolvent(&id).unwrap();
        assert_eq!(r.h[0], id.scale(&q().from_i64(-1)));
        assert_eq!(r.h[1], id);
    }
}
