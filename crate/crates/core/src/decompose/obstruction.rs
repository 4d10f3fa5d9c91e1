//! A periodic 3×3 matrix over ℚ(√2) with rank 2 that is not torsion plus square-zero.
//!
//! Adding a square-zero `N` keeps the trace `−√2`. A torsion `A + N` would have a
//! real cubic characteristic polynomial with one real root `±1` and a conjugate
//! pair of roots of unity summing to `−√2 ∓ 1`. Only `−1` leaves a sum in
//! `[−2, 2]`, which forces the quadratic factor; its roots then have a
//! non-cyclotomic minimal polynomial over ℚ.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{cyclotomic, euler_phi, trace_of, Polynomial};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateCheck {
    pub index: u64,
    pub poly: Polynomial,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub matrix: Matrix,
    /// `A⁹ = A`.
    pub period_check: bool,
    pub rank: usize,
    /// The only admissible characteristic polynomial of a torsion `A + N`.
    pub forced: Polynomial,
    pub quadratic: Polynomial,
    /// Minimal polynomial over ℚ of the roots of `quadratic`.
    pub min_poly: Polynomial,
    pub min_poly_trace: Scalar,
    /// Every Φ_d with the degree of `min_poly`.
    pub candidates: Vec<CandidateCheck>,
    pub obstructed: bool,
}

/// Sign of a real element of ℚ(√d) (or ℚ), decided exactly.
fn real_sign(x: &Scalar) -> Ordering {
    let (a, b) = x.quadratic_parts().unwrap_or_else(|| {
        (
            x.as_rational().expect("real field"),
            num_rational::BigRational::zero(),
        )
    });
    let d = match x.field() {
        Field::RealQuadratic(d) => d,
        _ => 0,
    };
    let sa = a.signum();
    let sb = b.signum();
    let zero = num_rational::BigRational::zero();
    let pick = |s: &num_rational::BigRational| s.cmp(&zero);
    if b.is_zero() || sa == sb {
        return if a.is_zero() { pick(&sb) } else { pick(&sa) };
    }
    if a.is_zero() {
        return pick(&sb);
    }
    let a2 = &a * &a;
    let db2 = &b * &b * num_rational::BigRational::from_integer(d.into());
    if a2 > db2 {
        pick(&sa)
    } else {
        pick(&sb)
    }
}

fn real_cmp(x: &Scalar, y: &Scalar) -> Ordering {
    real_sign(&(x - y))
}

/// `Res_y(f(x, y), y² − d)` for `f` written over ℚ(√d) as `f(x, √d)`: the
/// product of `f` with its conjugate, which has rational coefficients.
pub(crate) fn eliminate_sqrt(f: &Polynomial) -> Result<Polynomial> {
    let norm = f * &f.conjugate();
    let coeffs = norm
        .coeffs()
        .iter()
        .map(|c| {
            let (a, b) = c
                .quadratic_parts()
                .ok_or_else(|| Error::InvalidInput("elimination needs a quadratic field".into()))?;
            if !b.is_zero() {
                return Err(Error::InternalInconsistency("norm is not rational".into()));
            }
            Field::Rationals.from_rational(&a)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::new(Field::Rationals, coeffs))
}

fn inconsistent(what: &str) -> Error {
    Error::InternalInconsistency(format!("obstruction check: {what}"))
}

pub fn check_sqrt2_obstruction() -> Result<ObstructionReport> {
    let f = Field::real_quadratic(2)?;
    let r2 = f.sqrt_d()?;
    let mut a = Matrix::zeros(f, 3, 3);
    a.set(1, 2, f.from_i64(-1));
    a.set(2, 1, f.one());
    a.set(2, 2, -&r2);
    let period_check = a.pow(9) == a;
    if !period_check {
        return Err(inconsistent("A^9 = A"));
    }
    let rank = a.rank();
    let tau = a.trace();
    let two = f.from_i64(2);
    let minus_two = f.from_i64(-2);

    // real root ±1 of the cubic; the remaining pair sums to τ − α and multiplies to 1
    let admissible: Vec<Scalar> = [f.one(), f.from_i64(-1)]
        .into_iter()
        .filter(|alpha| {
            let s = &tau - alpha;
            real_cmp(&s, &minus_two) != Ordering::Less && real_cmp(&s, &two) != Ordering::Greater
        })
        .collect();
    let [alpha] = admissible.as_slice() else {
        return Err(inconsistent("real root is not uniquely forced"));
    };
    let s = &tau - alpha;
    let quadratic = Polynomial::new(f, vec![f.one(), -&s, f.one()]);
    let linear = Polynomial::new(f, vec![-alpha, f.one()]);
    let forced = &linear * &quadratic;
    let expected_quadratic = Polynomial::new(f, vec![f.one(), &r2 - &f.one(), f.one()]);
    if alpha != &f.from_i64(-1) || quadratic != expected_quadratic || trace_of(&forced)? != tau {
        return Err(inconsistent("forced polynomial"));
    }
    // negative discriminant: the quadratic has no real roots, so its norm is irreducible
    let disc = &(&s * &s) - &f.from_i64(4);
    if real_sign(&disc) != Ordering::Less || quadratic.conjugate() == quadratic {
        return Err(inconsistent("quadratic factor splits"));
    }

    let min_poly = eliminate_sqrt(&quadratic)?;
    if min_poly != Polynomial::from_i64s(Field::Rationals, &[1, -2, 1, -2, 1]) {
        return Err(inconsistent("minimal polynomial"));
    }
    let deg = min_poly.deg() as u64;
    let candidates: Vec<CandidateCheck> = (1..=2 * deg * deg)
        .filter(|&d| euler_phi(d) == deg)
        .map(|d| {
            let poly = cyclotomic(d);
            CandidateCheck {
                index: d,
                matches: poly == min_poly,
                poly,
            }
        })
        .collect();
    let min_poly_trace = trace_of(&min_poly)?;
    let obstructed = candidates.iter().all(|c| !c.matches);
    Ok(ObstructionReport {
        matrix: a,
        period_check,
        rank,
        forced,
        quadratic,
        min_poly,
        min_poly_trace,
        candidates,
        obstructed,
    })
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix over qsqrt:2:")?;
        write!(f, "{}", self.matrix)?;
        writeln!(f, "A^9 = A: {}", self.period_check)?;
        writeln!(f, "rank: {} of 3", self.rank)?;
        writeln!(f, "forced characteristic polynomial: {}", self.forced)?;
        writeln!(f, "  quadratic factor: {}", self.quadratic)?;
        writeln!(
            f,
            "minimal polynomial over Q of its roots: {}",
            self.min_poly
        )?;
        writeln!(f, "  trace: {}", self.min_poly_trace)?;
        writeln!(
            f,
            "cyclotomic polynomials of degree {}:",
            self.min_poly.deg()
        )?;
        for c in &self.candidates {
            let verdict = if c.matches { "equal" } else { "differs" };
            writeln!(
                f,
                "  Phi_{:<3} {:<28} {}",
                c.index,
                c.poly.to_string(),
                verdict
            )?;
        }
        let verdict = if self.obstructed {
            "no square-zero N makes A + N torsion"
        } else {
            "obstruction not established"
        };
        writeln!(f, "verdict: {verdict}")
    }
}
