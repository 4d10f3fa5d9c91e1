//! Seeded periodic test matrices with known elementary divisors.
//!
//! A divisor multiset of total degree `n` is sampled, assembled into the block
//! matrix `B = ⊕ C(dᵢ)` and conjugated by a product of elementary matrices
//! `I ± e_i e_jᵀ`, so `A = P·B·P⁻¹` with `P` unimodular over ℤ.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{ElementaryDivisor, Matrix};
use crate::poly::{cyclotomic_in, euler_phi, factor_fp, Polynomial};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub field: Field,
    pub size: usize,
    pub seed: u64,
    /// Resample until `rank(A)` reaches this.
    pub rank_min: usize,
    pub size_cap: usize,
    pub nil_cap: usize,
    pub cyclo_cap: u64,
    /// Zero blocks are left out, so `A` is invertible.
    pub torsion_only: bool,
}

impl GenConfig {
    pub fn new(field: Field, size: usize, seed: u64) -> GenConfig {
        GenConfig {
            field,
            size,
            seed,
            rank_min: 0,
            size_cap: 12,
            nil_cap: 6,
            cyclo_cap: 30,
            torsion_only: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    /// In sampling order.
    pub divisors: Vec<ElementaryDivisor>,
    pub block: Matrix,
    /// `A = P·B·P⁻¹`.
    pub conjugator: Matrix,
    pub matrix: Matrix,
}

const RESAMPLE_LIMIT: usize = 1000;

/// The index `e` and the two irrational halves `x² ± √d·x + 1` of `Φ_e` over ℚ(√d).
fn half_factor(field: Field) -> Option<(u64, Polynomial, Polynomial)> {
    let Field::RealQuadratic(d) = field else {
        return None;
    };
    let e = match d {
        2 => 8,
        3 => 12,
        _ => return None,
    };
    let r = field.sqrt_d().ok()?;
    let plus = Polynomial::new(field, vec![field.one(), r.clone(), field.one()]);
    let minus = Polynomial::new(field, vec![field.one(), -&r, field.one()]);
    Some((e, plus, minus))
}

/// Invertible blocks available over the field, with the cyclotomic index they
/// belong to in characteristic zero.
fn torsion_pool(field: Field, cap: u64) -> Result<Vec<(u64, Polynomial)>> {
    let mut pool: Vec<(u64, Polynomial)> = Vec::new();
    if field.is_char_zero() {
        for e in 1..=cap {
            if euler_phi(e) <= 12 {
                pool.push((e, cyclotomic_in(e, field)));
            }
        }
        return Ok(pool);
    }
    for r in 1..=cap as usize {
        for (g, mult) in factor_fp(&Polynomial::x_pow_minus_one(field, r))? {
            for j in 1..=mult {
                let q = g.pow(j);
                if !pool.iter().any(|(_, p)| p == &q) {
                    pool.push((0, q));
                }
            }
        }
    }
    pool.sort_by(|a, b| {
        a.1.deg()
            .cmp(&b.1.deg())
            .then_with(|| a.1.canonical_cmp(&b.1))
    });
    Ok(pool)
}

fn sample_divisors(
    cfg: &GenConfig,
    pool: &[(u64, Polynomial)],
    rng: &mut ChaCha8Rng,
) -> Vec<ElementaryDivisor> {
    let field = cfg.field;
    // one half of Φ_e is allowed per instance, and then nothing else from Φ_e
    let half = half_factor(field).and_then(|(e, p, m)| {
        rng.gen_bool(0.5)
            .then(|| (e, if rng.gen_bool(0.5) { p } else { m }))
    });
    let mut left = cfg.size;
    let mut out = Vec::new();
    while left > 0 {
        let roll = rng.gen_range(0..4);
        if roll == 0 && !cfg.torsion_only {
            out.push(ElementaryDivisor::X);
            left -= 1;
            continue;
        }
        if roll == 1 && !cfg.torsion_only && left >= 2 {
            let k = rng.gen_range(2..=left.min(cfg.nil_cap));
            out.push(ElementaryDivisor::NilpotentPower(k));
            left -= k;
            continue;
        }
        let mut options: Vec<&Polynomial> = pool
            .iter()
            .filter(|(e, p)| p.deg() <= left && half.as_ref().is_none_or(|(he, _)| he != e))
            .map(|(_, p)| p)
            .collect();
        if let Some((_, h)) = &half {
            if left >= 2 {
                options.push(h);
            }
        }
        if let Some(p) = options.choose(rng) {
            left -= p.deg();
            out.push(ElementaryDivisor::TorsionFactor((*p).clone()));
        }
    }
    out
}

/// Applies `A ← E·A·E⁻¹` for `E = I + c·e_i e_jᵀ`, and `P ← E·P`.
fn conjugate_elementary(a: &mut Matrix, p: &mut Matrix, i: usize, j: usize, c: i64) {
    let field = a.field();
    let c = field.from_i64(c);
    let n = a.n();
    for k in 0..n {
        let v = a.get(i, k) + &(&c * a.get(j, k));
        a.set(i, k, v);
        let w = p.get(i, k) + &(&c * p.get(j, k));
        p.set(i, k, w);
    }
    for k in 0..n {
        let v = a.get(k, j) - &(&c * a.get(k, i));
        a.set(k, j, v);
    }
}

pub fn generate(cfg: &GenConfig) -> Result<Generated> {
    if cfg.size == 0 || cfg.size > cfg.size_cap {
        return Err(Error::InvalidInput(format!(
            "size must be in 1..={}, got {}",
            cfg.size_cap, cfg.size
        )));
    }
    if cfg.rank_min > cfg.size {
        return Err(Error::InvalidInput(format!(
            "rank {} is impossible for size {}",
            cfg.rank_min, cfg.size
        )));
    }
    let field = cfg.field;
    let n = cfg.size;
    let pool = torsion_pool(field, cfg.cyclo_cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rank = |ds: &[ElementaryDivisor]| -> usize {
        ds.iter()
            .map(|d| match d {
                ElementaryDivisor::X => 0,
                ElementaryDivisor::NilpotentPower(k) => k - 1,
                ElementaryDivisor::TorsionFactor(f) => f.deg(),
            })
            .sum()
    };
    let mut divisors = sample_divisors(cfg, &pool, &mut rng);
    let mut tries = 1;
    while rank(&divisors) < cfg.rank_min {
        if tries == RESAMPLE_LIMIT {
            return Err(Error::InvalidInput(format!(
                "no sample reached rank {} in {RESAMPLE_LIMIT} draws",
                cfg.rank_min
            )));
        }
        divisors = sample_divisors(cfg, &pool, &mut rng);
        tries += 1;
    }
    let blocks = divisors
        .iter()
        .map(|d| Matrix::companion(&d.polynomial(field)))
        .collect::<Result<Vec<_>>>()?;
    let block = Matrix::block_diag(field, &blocks);
    let mut a = block.clone();
    let mut p = Matrix::identity(field, n);
    if n > 1 {
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let c = if rng.gen_bool(0.5) { 1 } else { -1 };
            conjugate_elementary(&mut a, &mut p, i, j, c);
        }
    }
    Ok(Generated {
        divisors,
        block,
        conjugator: p,
        matrix: a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_is_consistent() {
        for field in [
            Field::Rationals,
            Field::prime(3).unwrap(),
            Field::real_quadratic(2).unwrap(),
        ] {
            for seed in 0..20 {
                let g = generate(&GenConfig::new(field, 7, seed)).unwrap();
                assert_eq!(&g.matrix * &g.conjugator, &g.conjugator * &g.block);
                assert!(!g.conjugator.det().is_zero());
                let size: usize = g.divisors.iter().map(|d| d.size()).sum();
                assert_eq!(size, 7);
            }
        }
    }

    #[test]
    fn same_seed_same_matrix() {
        let cfg = GenConfig::new(Field::prime(3).unwrap(), 6, 42);
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
    }

    #[test]
    fn rank_floor_and_caps() {
        let mut cfg = GenConfig::new(Field::Rationals, 8, 1);
        cfg.rank_min = 4;
        for seed in 0..20 {
            cfg.seed = seed;
            assert!(generate(&cfg).unwrap().matrix.rank() >= 4);
        }
        assert!(generate(&GenConfig::new(Field::Rationals, 13, 0)).is_err());
        assert!(generate(&GenConfig::new(Field::Rationals, 0, 0)).is_err());
    }

    #[test]
    fn torsion_only_is_invertible() {
        let mut cfg = GenConfig::new(Field::prime(2).unwrap(), 6, 9);
        cfg.torsion_only = true;
        assert_eq!(generate(&cfg).unwrap().matrix.rank(), 6);
    }
}
