//! Cyclotomic polynomials and the arithmetic functions around them.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

use super::Polynomial;

/// Index `d ≥ 1` of the cyclotomic polynomial Φ_d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloIndex(u64);

impl CycloIndex {
    pub fn new(d: u64) -> Result<CycloIndex> {
        if d == 0 {
            return Err(Error::InvalidInput(
                "cyclotomic index must be positive".into(),
            ));
        }
        Ok(CycloIndex(d))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// Prime factorization by trial division, as (prime, exponent) pairs in ascending order.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn moebius(n: u64) -> i8 {
    assert!(n >= 1, "moebius: n must be positive");
    let f = factorize_u64(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi: n must be positive");
    factorize_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn cache() -> &'static RwLock<HashMap<u64, Polynomial>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Polynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Φ_d over ℚ, by exact division of `x^d − 1` by the Φ_e with `e | d`, `e < d`.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn cyclotomic(d: u64) -> Polynomial {
    assert!(d >= 1, "cyclotomic index must be positive");
    if let Some(p) = cache().read().expect("cache poisoned").get(&d) {
        return p.clone();
    }
    let mut acc = Polynomial::x_pow_minus_one(Field::Rationals, d as usize);
    for e in divisors(d) {
        if e < d {
            acc = acc
                .exact_div(&cyclotomic(e))
                .expect("cyclotomic division is exact");
        }
    }
    cache()
        .write()
        .expect("cache poisoned")
        .insert(d, acc.clone());
    acc
}

/// Φ_d with its integer coefficients mapped into `field`.
pub fn cyclotomic_in(d: u64, field: Field) -> Polynomial {
    cyclotomic(d)
        .embed(field)
        .expect("integer coefficients embed in every field")
}

/// Negated second-highest coefficient of a monic polynomial (the sum of its roots,
/// equal to the trace of its companion matrix).
pub fn trace_of(f: &Polynomial) -> Result<Scalar> {
    let n = f.degree().ok_or(Error::NotMonic)?;
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if n == 0 {
        return Err(Error::InvalidInput("trace of a constant polynomial".into()));
    }
    Ok(-f.coeff(n - 1))
}

/// `f = x^a · Π Φ_d^{m_d} · rest`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitySplit {
    pub x_power: usize,
    pub cyclotomic: Vec<(CycloIndex, usize)>,
    pub rest: Polynomial,
}

/// Splits off the power of `x` and every rational cyclotomic factor of a monic
/// polynomial over a characteristic-zero field.
pub fn unity_split(f: &Polynomial) -> Result<UnitySplit> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let field = f.field();
    if !field.is_char_zero() {
        return Err(Error::InvalidInput(
            "unity_split is defined over characteristic zero".into(),
        ));
    }
    let x_power = f.x_valuation();
    let mut g = f.shift_down(x_power);
    let mut found = Vec::new();
    // φ(d) ≥ √(d/2), so every Φ_d of degree ≤ deg g has d ≤ 2·deg²
    let bound = 2 * (g.deg() as u64).pow(2);
    for d in 1..=bound {
        if g.deg() == 0 {
            break;
        }
        if euler_phi(d) as usize > g.deg() {
            continue;
        }
        let phi = cyclotomic_in(d, field);
        let mut mult = 0;
        loop {
            let (q, r) = g.divmod(&phi)?;
            if !r.is_zero() {
                break;
            }
            g = q;
            mult += 1;
        }
        if mult > 0 {
            found.push((CycloIndex(d), mult));
        }
    }
    Ok(UnitySplit {
        x_power,
        cyclotomic: found,
        rest: g,
    })
}
