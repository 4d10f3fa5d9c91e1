//! Dense univariate polynomials over a [`Field`].

mod cyclotomic;
mod factor;
mod order;

pub use cyclotomic::{
    cyclotomic, cyclotomic_in, divisors, euler_phi, factorize_u64, moebius, trace_of, unity_split,
    CycloIndex, UnitySplit,
};
pub use factor::{factor_fp, squarefree_decomposition};
pub(crate) use order::prime_divisors_u128;
pub use order::{default_order_bound, torsion_order_poly};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// `coeffs[i]` is the coefficient of `xⁱ`; no trailing zeros are stored, so the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Polynomial {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Polynomial {
        Polynomial::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: Field) -> Polynomial {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Field) -> Polynomial {
        Polynomial::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Polynomial {
        Polynomial::new(c.field(), vec![c])
    }

    pub fn x(field: Field) -> Polynomial {
        Polynomial::monomial(field.one(), 1)
    }

    pub fn monomial(c: Scalar, k: usize) -> Polynomial {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Polynomial::new(field, coeffs)
    }

    /// `xⁿ − 1`
    pub fn x_pow_minus_one(field: Field, n: usize) -> Polynomial {
        &Polynomial::monomial(field.one(), n) - &Polynomial::one(field)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn monic(&self) -> Result<Polynomial> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        let inv = lead.inv()?;
        Ok(self.scale(&inv))
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    fn check_field(&self, o: &Polynomial) -> Result<()> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check_field(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        Ok(Polynomial::new(
            self.field,
            (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect(),
        ))
    }

    pub fn try_mul(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check_field(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Polynomial::zero(self.field));
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(Polynomial::new(self.field, out))
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_field(d)?;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dj);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((
            Polynomial::new(self.field, quot),
            Polynomial::new(self.field, rem),
        ))
    }

    pub fn rem(&self, d: &Polynomial) -> Result<Polynomial> {
        Ok(self.divmod(d)?.1)
    }

    /// Quotient of an exact division; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.divmod(d)?;
        if !r.is_zero() {
            return Err(Error::InternalInconsistency(format!(
                "{d} does not divide {self}"
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, f: &Polynomial) -> Result<bool> {
        Ok(f.rem(self)?.is_zero())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check_field(o)?;
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    pub fn lcm(&self, o: &Polynomial) -> Result<Polynomial> {
        if self.is_zero() || o.is_zero() {
            return Ok(Polynomial::zero(self.field));
        }
        let g = self.gcd(o)?;
        self.try_mul(&o.exact_div(&g)?)?.monic()
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| &self.field.from_i64(i as i64) * c)
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn pow(&self, e: usize) -> Polynomial {
        let mut acc = Polynomial::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self^e mod m` by square and multiply.
    pub fn pow_mod(&self, mut e: u128, m: &Polynomial) -> Result<Polynomial> {
        let mut base = self.rem(m)?;
        let mut acc = Polynomial::one(self.field).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            base = (&base * &base).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.deg() == 0 {
            return Ok(true);
        }
        Ok(self.gcd(&self.derivative())?.deg() == 0)
    }

    /// Exponent of the largest power of `x` dividing a nonzero polynomial.
    pub fn x_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides out `x^k`; the low `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Polynomial {
        Polynomial::new(self.field, self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Coefficient-wise Galois conjugate over ℚ(√d); identity elsewhere.
    pub fn conjugate(&self) -> Polynomial {
        Polynomial::new(
            self.field,
            self.coeffs.iter().map(Scalar::conjugate).collect(),
        )
    }

    /// Re-embeds a polynomial with rational coefficients into another field.
    pub fn embed(&self, field: Field) -> Result<Polynomial> {
        if field == self.field {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.as_rational().ok_or(Error::FieldMismatch)?;
                field.from_rational(&r)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::new(field, coeffs))
    }

    /// Deterministic total order: degree, then coefficients from the top down.
    pub fn canonical_cmp(&self, o: &Polynomial) -> Ordering {
        self.coeffs.len().cmp(&o.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(o.coeffs.iter().rev()) {
                let c = a.canonical_cmp(b);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.try_add(o).expect("polynomial field mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.try_add(&-o).expect("polynomial field mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.try_mul(o).expect("polynomial field mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(
            self.field,
            self.coeffs.iter().map(Scalar::neg_ref).collect(),
        )
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = c.to_string();
            let compound = s.chars().skip(1).any(|ch| ch == '+' || ch == '-');
            let negative = s.starts_with('-') && !compound;
            if negative {
                s.remove(0);
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let body = if compound { format!("({s})") } else { s };
            match i {
                0 => write!(f, "{body}")?,
                _ => {
                    if body != "1" {
                        write!(f, "{body}")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(Field::Rationals, c)
    }

    #[test]
    fn gcd_by_euclid() {
        // x² − 1 and x² + x
        let g = qp(&[-1, 0, 1]).gcd(&qp(&[0, 1, 1])).unwrap();
        assert_eq!(g, qp(&[1, 1]));
    }

    #[test]
    fn product_and_division() {
        assert_eq!(&qp(&[-1, 1]) * &qp(&[1, 1]), qp(&[-1, 0, 1]));
        let (q, r) = qp(&[0, 0, 0, 1]).divmod(&qp(&[0, 0, 1])).unwrap();
        assert_eq!(q, qp(&[0, 1]));
        assert!(r.is_zero());
        assert_eq!(
            qp(&[1, 2]).divmod(&Polynomial::zero(Field::Rationals)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn divmod_identity_over_f3() {
        let f = Field::prime(3).unwrap();
        let a = Polynomial::from_i64s(f, &[2, 1, 0, 1, 2]);
        let b = Polynomial::from_i64s(f, &[1, 2, 2]);
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn field_mismatch() {
        let a = Polynomial::from_i64s(Field::prime(5).unwrap(), &[1, 1]);
        assert_eq!(a.try_add(&qp(&[1])), Err(Error::FieldMismatch));
    }

    #[test]
    fn derivative_and_eval() {
        let p = qp(&[1, 2, 3]);
        assert_eq!(p.derivative(), qp(&[2, 6]));
        assert_eq!(
            p.eval(&Field::Rationals.from_i64(2)),
            Field::Rationals.from_i64(17)
        );
    }

    #[test]
    fn display() {
        assert_eq!(
            qp(&[1, -2, 1, -2, 1]).to_string(),
            "x^4 - 2x^3 + x^2 - 2x + 1"
        );
        let f = Field::real_quadratic(2).unwrap();
        let r2 = f.sqrt_d().unwrap();
        let p = Polynomial::new(f, vec![f.one(), &r2 - &f.one(), f.one()]);
        assert_eq!(p.to_string(), "x^2 + (-1+√2)x + 1");
        let q = Polynomial::new(f, vec![f.one(), r2.clone(), r2.clone(), f.one()]);
        assert_eq!(q.to_string(), "x^3 + √2x^2 + √2x + 1");
        assert_eq!((-&q).to_string(), "-x^3 - √2x^2 - √2x - 1");
    }
}
