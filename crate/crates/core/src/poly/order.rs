//! Multiplicative order of `x` modulo a polynomial: the least `r` with `f | xʳ − 1`.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalar::Field;

use super::cyclotomic::{cyclotomic, divisors};
use super::factor::factor_fp;
use super::Polynomial;

/// Search bound for the characteristic-zero order search.
///
/// A factor of Φ_r has degree at least φ(r) over ℚ and at least φ(r)/2 over
/// ℚ(√d); with φ(r) ≥ √(r/2) this gives r ≤ 2·deg² and r ≤ 8·deg² respectively.
pub fn default_order_bound(f: &Polynomial) -> u64 {
    let n = f.deg() as u64;
    match f.field() {
        Field::RealQuadratic(_) => 8 * n * n,
        _ => 2 * n * n,
    }
}

/// Least `r ≥ 1` with `f | xʳ − 1`, or `None` when no such `r` exists
/// (`f(0) = 0`, or in characteristic zero no `r` within the bound).
///
/// `bound` overrides [`default_order_bound`] in characteristic zero and is
/// ignored over 𝔽_p, where the order is computed from the factorization.
pub fn torsion_order_poly(f: &Polynomial, bound: Option<u64>) -> Result<Option<u128>> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.deg() == 0 {
        return Ok(Some(1));
    }
    if f.coeff(0).is_zero() {
        return Ok(None);
    }
    match f.field() {
        Field::Prime(p) => order_fp(f, p).map(Some),
        _ => {
            let bound = bound.unwrap_or_else(|| default_order_bound(f));
            let field = f.field();
            let x = Polynomial::x(field);
            let mut h = x.rem(f)?;
            for r in 1..=bound {
                if h.is_one() {
                    return Ok(Some(r as u128));
                }
                h = (&h * &x).rem(f)?;
            }
            Ok(None)
        }
    }
}

pub(crate) fn prime_divisors_u128(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut q = 2u128;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Prime divisors of `p^k − 1`, gathered from the factors Φ_e(p), `e | k`.
fn prime_divisors_of_pk_minus_one(p: u64, k: usize) -> Result<Vec<u128>> {
    let mut primes = Vec::new();
    for e in divisors(k as u64) {
        let value = cyclotomic(e)
            .coeffs()
            .iter()
            .rev()
            .fold(BigInt::from(0), |acc, c| {
                acc * BigInt::from(p) + c.as_rational().expect("rational").to_integer()
            });
        let value = u128::try_from(value)
            .map_err(|_| Error::InvalidInput("multiplicative order exceeds 128 bits".into()))?;
        primes.extend(prime_divisors_u128(value));
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// Order of `x` modulo an irreducible `g` with `g(0) ≠ 0`.
fn order_mod_irreducible(g: &Polynomial, p: u64) -> Result<u128> {
    let k = g.deg();
    let group = (p as u128)
        .checked_pow(k as u32)
        .ok_or_else(|| Error::InvalidInput("multiplicative order exceeds 128 bits".into()))?
        - 1;
    let x = Polynomial::x(g.field());
    let mut order = group;
    for q in prime_divisors_of_pk_minus_one(p, k)? {
        while order % q == 0 && x.pow_mod(order / q, g)?.is_one() {
            order /= q;
        }
    }
    Ok(order)
}

fn order_fp(f: &Polynomial, p: u64) -> Result<u128> {
    let mut order = 1u128;
    let mut max_mult = 1usize;
    for (g, e) in factor_fp(f)? {
        order = order.lcm(&order_mod_irreducible(&g, p)?);
        max_mult = max_mult.max(e);
    }
    // smallest power of p that is at least the largest multiplicity
    let mut pt = 1u128;
    while pt < max_mult as u128 {
        pt *= p as u128;
    }
    Ok(order * pt)
}
