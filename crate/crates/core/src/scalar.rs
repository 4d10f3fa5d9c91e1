//! Exact scalars over ℚ, prime fields 𝔽_p and real quadratic fields ℚ(√d).
//!
//! Every [`Scalar`] carries enough of its field to make mixed-field
//! arithmetic detectable. The `try_*` methods report [`Error::FieldMismatch`]
//! and [`Error::DivisionByZero`]; the operator impls panic on the same
//! conditions and are meant for code that already guarantees a common field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The three supported field families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
    /// ℚ(√d) with `d` squarefree and at least 2.
    RealQuadratic(i64),
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut i = 3u64;
    while i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

fn is_squarefree(d: i64) -> bool {
    let mut m = d.unsigned_abs();
    let mut f = 2u64;
    while f * f <= m {
        if m.is_multiple_of(f) {
            m /= f;
            if m.is_multiple_of(f) {
                return false;
            }
        }
        f += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidInput(format!("prime {p} exceeds 32 bits")));
        }
        Ok(Field::Prime(p))
    }

    pub fn real_quadratic(d: i64) -> Result<Field> {
        if d < 2 || !is_squarefree(d) {
            return Err(Error::InvalidInput(format!(
                "ℚ(√{d}) needs d squarefree and d ≥ 2"
            )));
        }
        Ok(Field::RealQuadratic(d))
    }

    /// Characteristic of the field (0 for ℚ and ℚ(√d)).
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            _ => 0,
        }
    }

    pub fn is_char_zero(&self) -> bool {
        self.characteristic() == 0
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Fp {
                    v: u64::try_from(r).expect("residue fits"),
                    p,
                }
            }
            Field::RealQuadratic(d) => Scalar::Qd {
                a: BigRational::from_integer(v.clone()),
                b: BigRational::zero(),
                d,
            },
        }
    }

    /// Embeds a rational number. Fails in 𝔽_p when the denominator vanishes mod p.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match *self {
            Field::Rationals => Ok(Scalar::Q(r.clone())),
            Field::RealQuadratic(d) => Ok(Scalar::Qd {
                a: r.clone(),
                b: BigRational::zero(),
                d,
            }),
            Field::Prime(_) => {
                let n = self.from_bigint(r.numer());
                let den = self.from_bigint(r.denom());
                n.try_div(&den)
            }
        }
    }

    /// `a + b√d`; only valid for ℚ(√d).
    pub fn quadratic(&self, a: BigRational, b: BigRational) -> Result<Scalar> {
        match *self {
            Field::RealQuadratic(d) => Ok(Scalar::Qd { a, b, d }),
            _ => Err(Error::FieldMismatch),
        }
    }

    /// The element √d of ℚ(√d).
    pub fn sqrt_d(&self) -> Result<Scalar> {
        self.quadratic(BigRational::zero(), BigRational::one())
    }

    /// Parses the `--field` syntax: `q`, `fp:<p>`, `qsqrt:<d>`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(Field::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad prime in {s:?}")))?;
            return Field::prime(p);
        }
        if let Some(d) = s.strip_prefix("qsqrt:") {
            let d: i64 = d
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad radicand in {s:?}")))?;
            return Field::real_quadratic(d);
        }
        Err(Error::InvalidInput(format!("unknown field {s:?}")))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
            Field::RealQuadratic(d) => write!(f, "qsqrt:{d}"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp {
        v: u64,
        p: u64,
    },
    /// `a + b√d`
    Qd {
        a: BigRational,
        b: BigRational,
        d: i64,
    },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp { p, .. } => Field::Prime(*p),
            Scalar::Qd { d, .. } => Field::RealQuadratic(*d),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Qd { a, b, .. } => a.is_zero() && b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Qd { a, b, .. } => a.is_one() && b.is_zero(),
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Q(x), Scalar::Q(y)) => Ok(Scalar::Q(x + y)),
            (Scalar::Fp { v: x, p }, Scalar::Fp { v: y, p: q }) if p == q => Ok(Scalar::Fp {
                v: ((*x as u128 + *y as u128) % *p as u128) as u64,
                p: *p,
            }),
            (Scalar::Qd { a, b, d }, Scalar::Qd { a: c, b: e, d: d2 }) if d == d2 => {
                Ok(Scalar::Qd {
                    a: a + c,
                    b: b + e,
                    d: *d,
                })
            }
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar> {
        self.try_add(&o.neg_ref())
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Q(x), Scalar::Q(y)) => Ok(Scalar::Q(x * y)),
            (Scalar::Fp { v: x, p }, Scalar::Fp { v: y, p: q }) if p == q => Ok(Scalar::Fp {
                v: ((*x as u128 * *y as u128) % *p as u128) as u64,
                p: *p,
            }),
            (Scalar::Qd { a, b, d }, Scalar::Qd { a: c, b: e, d: d2 }) if d == d2 => {
                let dd = BigRational::from_integer(BigInt::from(*d));
                Ok(Scalar::Qd {
                    a: a * c + b * e * dd,
                    b: a * e + b * c,
                    d: *d,
                })
            }
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: pow_mod(*v, *p - 2, *p),
                p: *p,
            },
            Scalar::Qd { a, b, d } => {
                // (a + b√d)⁻¹ = (a − b√d)/(a² − d b²); the norm is nonzero as √d ∉ ℚ
                let dd = BigRational::from_integer(BigInt::from(*d));
                let norm = a * a - b * b * dd;
                Scalar::Qd {
                    a: a / &norm,
                    b: -(b / &norm),
                    d: *d,
                }
            }
        })
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar> {
        if self.field() != o.field() {
            return Err(Error::FieldMismatch);
        }
        self.try_mul(&o.inv()?)
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(-r),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
            Scalar::Qd { a, b, d } => Scalar::Qd {
                a: -a,
                b: -b,
                d: *d,
            },
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The Galois conjugate `a − b√d`; identity on ℚ and 𝔽_p.
    pub fn conjugate(&self) -> Scalar {
        match self {
            Scalar::Qd { a, b, d } => Scalar::Qd {
                a: a.clone(),
                b: -b,
                d: *d,
            },
            other => other.clone(),
        }
    }

    /// The value as a rational number, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Q(r) => Some(r.clone()),
            Scalar::Qd { a, b, .. } if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }

    /// Rational part and √d part of an element of ℚ(√d) (ℚ elements have zero √d part).
    pub fn quadratic_parts(&self) -> Option<(BigRational, BigRational)> {
        match self {
            Scalar::Q(r) => Some((r.clone(), BigRational::zero())),
            Scalar::Qd { a, b, .. } => Some((a.clone(), b.clone())),
            Scalar::Fp { .. } => None,
        }
    }

    /// True when the value is an integer (every 𝔽_p element counts).
    pub fn is_integral(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_integer(),
            Scalar::Qd { a, b, .. } => a.is_integer() && b.is_zero(),
            Scalar::Fp { .. } => true,
        }
    }

    /// Total order used to sort coefficient sequences deterministically.
    pub fn canonical_cmp(&self, o: &Scalar) -> Ordering {
        match (self, o) {
            (Scalar::Q(x), Scalar::Q(y)) => x.cmp(y),
            (Scalar::Fp { v: x, .. }, Scalar::Fp { v: y, .. }) => x.cmp(y),
            (Scalar::Qd { a, b, .. }, Scalar::Qd { a: c, b: e, .. }) => a.cmp(c).then(b.cmp(e)),
            _ => self.field_rank().cmp(&o.field_rank()),
        }
    }

    fn field_rank(&self) -> u8 {
        match self {
            Scalar::Q(_) => 0,
            Scalar::Fp { .. } => 1,
            Scalar::Qd { .. } => 2,
        }
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = b as u128 % m as u128;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    b = acc as u64;
    b
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{}", fmt_rational(r)),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::Qd { a, b, d } => {
                if b.is_zero() {
                    return write!(f, "{}", fmt_rational(a));
                }
                let root = if b.is_one() {
                    format!("√{d}")
                } else if (-b).is_one() {
                    format!("-√{d}")
                } else {
                    format!("{}√{d}", fmt_rational(b))
                };
                if a.is_zero() {
                    write!(f, "{root}")
                } else if b.is_negative() {
                    write!(f, "{}{}", fmt_rational(a), root)
                } else {
                    write!(f, "{}+{}", fmt_rational(a), root)
                }
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.try_add(o).expect("scalar field mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.try_sub(o).expect("scalar field mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.try_mul(o).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Q(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
    }

    #[test]
    fn prime_field_product() {
        let f = Field::prime(5).unwrap();
        assert_eq!(&f.from_i64(3) * &f.from_i64(4), f.from_i64(2));
    }

    #[test]
    fn quadratic_difference_of_squares() {
        let f = Field::real_quadratic(2).unwrap();
        let r2 = f.sqrt_d().unwrap();
        let a = &f.one() + &r2;
        let b = &f.one() - &r2;
        assert_eq!(&a * &b, f.from_i64(-1));
        assert_eq!(&a.inv().unwrap() * &a, f.one());
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::real_quadratic(4).is_err());
        assert!(Field::real_quadratic(1).is_err());
        assert!(Field::real_quadratic(12).is_err());
        assert!(Field::real_quadratic(6).is_ok());
    }

    #[test]
    fn errors() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(f.one().try_add(&q(1, 1)), Err(Error::FieldMismatch));
        assert_eq!(
            Field::prime(5)
                .unwrap()
                .one()
                .try_mul(&Field::prime(7).unwrap().one()),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn parse_field() {
        assert_eq!(Field::parse("q").unwrap(), Field::Rationals);
        assert_eq!(Field::parse("fp:3").unwrap(), Field::Prime(3));
        assert_eq!(Field::parse("qsqrt:2").unwrap(), Field::RealQuadratic(2));
        assert!(Field::parse("fp:4").is_err());
        assert!(Field::parse("r").is_err());
    }

    #[test]
    fn rational_from_denominator_mod_p() {
        let f = Field::prime(5).unwrap();
        let half = f
            .from_rational(&BigRational::new(1.into(), 2.into()))
            .unwrap();
        assert_eq!(half, f.from_i64(3));
        assert!(f
            .from_rational(&BigRational::new(1.into(), 5.into()))
            .is_err());
    }
}
