//! Factorization over prime fields: squarefree splitting, distinct-degree
//! splitting, then Cantor–Zassenhaus equal-degree splitting (trace-map variant
//! in characteristic 2). The equal-degree step draws from a seeded generator,
//! so results are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Field;

use super::Polynomial;

const FACTOR_SEED: u64 = 0x5eed_f00d;

fn prime_of(f: &Polynomial) -> Result<u64> {
    match f.field() {
        Field::Prime(p) => Ok(p),
        _ => Err(Error::InvalidInput(
            "finite-field factorization needs a prime field".into(),
        )),
    }
}

/// `f = Π gᵢ^{mᵢ}` with each `gᵢ` squarefree, monic and pairwise coprime.
pub fn squarefree_decomposition(f: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    let p = prime_of(f)? as usize;
    let f = f.monic()?;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return Ok(out);
    }
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c)?;
        let z = w.exact_div(&y)?;
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w)?;
    }
    if c.deg() > 0 {
        // c is a p-th power: c(x) = r(x)^p with r's coefficients read off every p-th slot
        let root = Polynomial::new(c.field(), c.coeffs().iter().step_by(p).cloned().collect());
        for (g, m) in squarefree_decomposition(&root)? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    let p = prime_of(f)?;
    let field = f.field();
    let x = Polynomial::x(field);
    let mut g = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while g.deg() >= 2 * d {
        h = h.pow_mod(p as u128, &g)?;
        let factor = g.gcd(&(&h - &x))?;
        if factor.deg() > 0 {
            g = g.exact_div(&factor)?;
            h = h.rem(&g)?;
            out.push((factor, d));
        }
        d += 1;
    }
    if g.deg() > 0 {
        let dg = g.deg();
        out.push((g, dg));
    }
    Ok(out)
}

fn random_poly(field: Field, below: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let p = field.characteristic();
    Polynomial::new(
        field,
        (0..below)
            .map(|_| field.from_i64(rng.gen_range(0..p) as i64))
            .collect(),
    )
}

/// Splits `f`, a product of distinct irreducibles of degree `d`, into those factors.
fn equal_degree(f: &Polynomial, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Polynomial>> {
    let n = f.deg();
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field();
    let p = prime_of(f)?;
    let one = Polynomial::one(field);
    loop {
        let a = random_poly(field, n, rng);
        if a.deg() == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // trace map a + a² + a⁴ + … + a^{2^{d−1}}
            let mut t = a.rem(f)?;
            let mut acc = t.clone();
            for _ in 1..d {
                t = (&t * &t).rem(f)?;
                acc = &acc + &t;
            }
            acc
        } else {
            // a^{(p^d − 1)/2} = (a^{1 + p + … + p^{d−1}})^{(p−1)/2}
            let mut t = a.rem(f)?;
            let mut norm = one.clone();
            for _ in 0..d {
                norm = (&norm * &t).rem(f)?;
                t = t.pow_mod(p as u128, f)?;
            }
            &norm.pow_mod(((p - 1) / 2) as u128, f)? - &one
        };
        let g = f.gcd(&candidate)?;
        if g.deg() > 0 && g.deg() < n {
            let mut out = equal_degree(&g, d, rng)?;
            out.extend(equal_degree(&f.exact_div(&g)?, d, rng)?);
            return Ok(out);
        }
    }
}

/// Irreducible factorization of a monic polynomial over 𝔽_p, as
/// (monic irreducible, multiplicity) pairs sorted by degree then coefficients.
pub fn factor_fp(f: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    prime_of(f)?;
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
    let mut out: Vec<(Polynomial, usize)> = Vec::new();
    for (sq, m) in squarefree_decomposition(f)? {
        for (block, d) in distinct_degree(&sq)? {
            for g in equal_degree(&block, d, &mut rng)? {
                out.push((g, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(Field::prime(p).unwrap(), c)
    }

    fn is_irreducible_brute(g: &Polynomial) -> bool {
        // no monic factor of degree 1..=deg/2, by exhaustive enumeration
        let p = g.field().characteristic() as i64;
        let n = g.deg();
        for d in 1..=n / 2 {
            let total = p.pow(d as u32);
            for idx in 0..total {
                let mut c = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    c.push(k % p);
                    k /= p;
                }
                c.push(1);
                if g.rem(&fp(p as u64, &c)).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn x2_plus_1_over_f2() {
        assert_eq!(
            factor_fp(&fp(2, &[1, 0, 1])).unwrap(),
            vec![(fp(2, &[1, 1]), 2)]
        );
    }

    #[test]
    fn x4_minus_1_over_f5() {
        let got = factor_fp(&fp(5, &[-1, 0, 0, 0, 1])).unwrap();
        let want: Vec<_> = [1, 2, 3, 4].iter().map(|&r| (fp(5, &[-r, 1]), 1)).collect();
        let mut want = want;
        want.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        assert_eq!(got, want);
    }

    #[test]
    fn irreducible_quadratic_over_f2() {
        assert_eq!(
            factor_fp(&fp(2, &[1, 1, 1])).unwrap(),
            vec![(fp(2, &[1, 1, 1]), 1)]
        );
    }

    #[test]
    fn pth_power_input() {
        // (x² + x + 1)³ over 𝔽₃ has zero derivative
        let g = fp(3, &[1, 1, 1]);
        let f = g.pow(3);
        let got = factor_fp(&f).unwrap();
        let prod = got
            .iter()
            .fold(Polynomial::one(f.field()), |acc, (h, m)| &acc * &h.pow(*m));
        assert_eq!(prod, f);
        assert!(got.iter().all(|(h, _)| is_irreducible_brute(h)));
    }

    #[test]
    fn rejects_non_monic_and_char_zero() {
        assert_eq!(factor_fp(&fp(5, &[1, 2])), Err(Error::NotMonic));
        assert!(factor_fp(&Polynomial::from_i64s(Field::Rationals, &[1, 1])).is_err());
    }

    #[test]
    fn factors_are_irreducible_on_a_few_inputs() {
        for (p, c) in [
            (2u64, vec![1, 1, 0, 1, 1, 0, 0, 1]),
            (3, vec![2, 0, 1, 1, 0, 1]),
            (5, vec![1, 2, 3, 4, 0, 1]),
        ] {
            let f = fp(p, &c);
            for (g, _) in factor_fp(&f).unwrap() {
                assert!(is_irreducible_brute(&g), "{g} over F{p}");
            }
        }
    }
}
