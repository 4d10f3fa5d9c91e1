//! Square-zero perturbations with a prescribed characteristic polynomial.
//!
//! Both solvers rest on `det(xI − M − u·wᵀ) = χ(x) − wᵀ·adj(xI − M)·u`, which
//! is affine in `w` once `M` and `u` are fixed.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{charpoly, minpoly, resolvent, unit_vector, Matrix, Vector};
use crate::poly::{trace_of, Polynomial};
use crate::scalar::Field;

use super::target::SteerTarget;

const CYCLIC_SEED: u64 = 0xc1c1_1c00;
const RANDOM_CYCLIC_TRIES: usize = 256;

/// Limits for [`steer_general`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest rank of `N`; `None` means `⌊n/2⌋`.
    pub max_rank: Option<usize>,
    /// Entries of the random factors lie in `[−h, h]` for `h = 1..=max_height`.
    pub max_height: i64,
    /// Round-robin passes of exact row solves per draw.
    pub max_sweeps: usize,
    /// Random factor draws, split evenly over (height, rank) cells.
    pub draws: usize,
    /// Leading pool entries tried by the exact row solves.
    pub max_targets: usize,
    /// Total exact row solves before giving up.
    pub max_solves: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_rank: None,
            max_height: 2,
            max_sweeps: 2,
            draws: 600,
            max_targets: 16,
            max_solves: 6000,
            seed: 0x5eed,
        }
    }
}

/// Coefficient rows `Hᵢ·u` of `adj(xI − M)·u`, and `χ`.
fn adjugate_columns(m: &Matrix, u: &[crate::scalar::Scalar]) -> Result<(Vec<Vector>, Polynomial)> {
    let res = resolvent(m)?;
    Ok((res.h.iter().map(|h| h.mul_vec(u)).collect(), res.charpoly))
}

fn small_random_vector(field: Field, n: usize, rng: &mut ChaCha8Rng) -> Vector {
    (0..n)
        .map(|_| field.from_i64(rng.gen_range(-2..=2)))
        .collect()
}

fn cyclic_vector(m: &Matrix) -> Option<Vector> {
    let field = m.field();
    let n = m.n();
    let units = (0..n).map(|i| unit_vector(field, n, i));
    let partial = (2..=n).map(|j| {
        (0..n)
            .map(|i| if i < j { field.one() } else { field.zero() })
            .collect::<Vector>()
    });
    if let Some(u) = units.chain(partial).find(|u| m.is_cyclic_vector(u)) {
        return Some(u);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CYCLIC_SEED);
    (0..RANDOM_CYCLIC_TRIES)
        .map(|_| small_random_vector(field, n, &mut rng))
        .find(|u| m.is_cyclic_vector(u))
}

fn check_target(m: &Matrix, q: &Polynomial) -> Result<()> {
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    if q.deg() != m.n() {
        return Err(Error::DimensionMismatch(format!(
            "target degree {} for a {}×{} matrix",
            q.deg(),
            m.n(),
            m.n()
        )));
    }
    if m.n() > 0 && trace_of(q)? != m.trace() {
        return Err(Error::TraceMismatch);
    }
    Ok(())
}

/// Rank-one `N = u·vᵀ` with `vᵀu = 0` and `charpoly(M + N) = q`, for non-derogatory `M`.
pub fn steer_rank1(m: &Matrix, q: &Polynomial) -> Result<Matrix> {
    check_target(m, q)?;
    let field = m.field();
    let n = m.n();
    let chi = charpoly(m);
    if minpoly(m) != chi {
        return Err(Error::Derogatory);
    }
    let u = cyclic_vector(m).ok_or(Error::Derogatory)?;
    let (cols, chi) = adjugate_columns(m, &u)?;
    let d = &chi - q;
    // row i: (Hᵢu)ᵀ·v = dᵢ; row n−1 is vᵀu = 0
    let system = Matrix::from_rows(field, cols)?;
    let rhs: Vector = (0..n).map(|i| d.coeff(i)).collect();
    let v = system
        .solve(&rhs)
        .ok_or_else(|| Error::InternalInconsistency("cyclic system is singular".into()))?;
    let nmat = Matrix::outer(field, &u, &v);
    if !(&nmat * &nmat).is_zero() || &charpoly(&(m + &nmat)) != q {
        return Err(Error::InternalInconsistency(
            "rank-one steering failed".into(),
        ));
    }
    Ok(nmat)
}

/// `N = U·L·G` with `U` having identity rows on `S` and `G·U = 0`, so `N² = 0`
/// for every `L`.
struct Factors {
    u: Matrix,
    g: Matrix,
    l: Matrix,
}

impl Factors {
    fn draw(field: Field, n: usize, r: usize, h: i64, rng: &mut ChaCha8Rng) -> Factors {
        let mut pivots: Vec<usize> = sample(rng, n, r).into_vec();
        pivots.sort_unstable();
        let others: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let mut u = Matrix::zeros(field, n, r);
        let mut g = Matrix::zeros(field, n - r, n);
        for (j, &p) in pivots.iter().enumerate() {
            u.set(p, j, field.one());
        }
        for (i, &o) in others.iter().enumerate() {
            g.set(i, o, field.one());
            for (j, &p) in pivots.iter().enumerate() {
                let c = field.from_i64(rng.gen_range(-h..=h));
                g.set(i, p, c.neg_ref());
                u.set(o, j, c);
            }
        }
        let mut f = Factors {
            u,
            g,
            l: Matrix::zeros(field, r, n - r),
        };
        for j in 0..r {
            f.randomize_row(j, h, rng);
        }
        f
    }

    fn randomize_row(&mut self, j: usize, h: i64, rng: &mut ChaCha8Rng) {
        let field = self.l.field();
        for c in 0..self.l.cols() {
            self.l.set(j, c, field.from_i64(rng.gen_range(-h..=h)));
        }
    }

    fn n(&self) -> Matrix {
        &(&self.u * &self.l) * &self.g
    }

    /// `N` without the contribution of row `j` of `L`.
    fn n_without(&self, j: usize) -> Matrix {
        let mut l = self.l.clone();
        for c in 0..l.cols() {
            l.set(j, c, self.l.field().zero());
        }
        &(&self.u * &l) * &self.g
    }
}

/// Square-zero `N` with `charpoly(M + N)` in `targets`, by a seeded search over
/// `N = U·L·G` refined with exact solves for single rows of `L`.
///
/// Non-derogatory `M` goes straight to [`steer_rank1`].
pub fn steer_general(m: &Matrix, targets: &[SteerTarget], budget: &SearchBudget) -> Result<Matrix> {
    let Some(first) = targets.first() else {
        return Err(Error::SolverExhausted("no admissible target".into()));
    };
    for t in targets {
        check_target(m, &t.q)?;
    }
    if minpoly(m) == charpoly(m) {
        return steer_rank1(m, &first.q);
    }
    let solve_targets = &targets[..targets.len().min(budget.max_targets.max(1))];
    let field = m.field();
    let n = m.n();
    let r_lo = (n - m.rank()).max(1);
    let r_hi = budget.max_rank.unwrap_or(n / 2).min(n / 2);
    if r_lo > r_hi {
        return Err(Error::SolverExhausted(format!(
            "rank window {r_lo}..={r_hi} is empty"
        )));
    }
    let cells = budget.max_height.max(1) as usize * (r_hi - r_lo + 1);
    let per_cell = (budget.draws / cells).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut draws = 0usize;
    let mut solves = 0usize;
    let accept = |nm: &Matrix| -> bool {
        (nm * nm).is_zero() && {
            let chi = charpoly(&(m + nm));
            targets.iter().any(|t| t.q == chi)
        }
    };
    'search: for h in 1..=budget.max_height.max(1) {
        for r in r_lo..=r_hi {
            for _ in 0..per_cell {
                draws += 1;
                let mut f = Factors::draw(field, n, r, h, &mut rng);
                let nm = f.n();
                if accept(&nm) {
                    return Ok(nm);
                }
                for _ in 0..budget.max_sweeps {
                    for j in 0..r {
                        if solves >= budget.max_solves {
                            break 'search;
                        }
                        let base = m + &f.n_without(j);
                        let uj = f.u.col(j);
                        let (cols, chi) = adjugate_columns(&base, &uj)?;
                        // row i: lⱼᵀ·(G·Hᵢ·uⱼ) = (χ' − q)ᵢ
                        let rows: Vec<Vector> = cols.iter().map(|c| f.g.mul_vec(c)).collect();
                        let system = Matrix::from_rows(field, rows)?;
                        for t in solve_targets {
                            solves += 1;
                            let d = &chi - &t.q;
                            let rhs: Vector = (0..n).map(|i| d.coeff(i)).collect();
                            if let Some(l) = system.solve(&rhs) {
                                for (c, v) in l.into_iter().enumerate() {
                                    f.l.set(j, c, v);
                                }
                                let nm = f.n();
                                if accept(&nm) {
                                    return Ok(nm);
                                }
                            }
                        }
                        f.randomize_row(j, h, &mut rng);
                    }
                }
            }
        }
    }
    Err(Error::SolverExhausted(format!(
        "{draws} draws, {solves} row solves, heights 1..={}, ranks {r_lo}..={r_hi}, {} targets, seed {:#x}",
        budget.max_height.max(1),
        targets.len(),
        budget.seed
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cyclotomic;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn diag_zero_minus_one_to_phi3() {
        let m = Matrix::from_i64(q(), &[&[0, 0], &[0, -1]]);
        let n = steer_rank1(&m, &cyclotomic(3)).unwrap();
        assert_eq!(n, Matrix::from_i64(q(), &[&[-1, 1], &[-1, 1]]));
        assert!((&m + &n).pow(3).is_identity());
    }

    #[test]
    fn identity_target_gives_zero() {
        let m = Matrix::companion(&cyclotomic(5)).unwrap();
        assert!(steer_rank1(&m, &cyclotomic(5)).unwrap().is_zero());
        let one = Matrix::from_i64(q(), &[&[1]]);
        assert!(steer_rank1(&one, &cyclotomic(1)).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let z = Matrix::zeros(q(), 2, 2);
        assert_eq!(
            steer_rank1(&z, &Polynomial::from_i64s(q(), &[1, 0, 1])),
            Err(Error::Derogatory)
        );
        let m = Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]);
        assert_eq!(steer_rank1(&m, &cyclotomic(3)), Err(Error::TraceMismatch));
    }

    #[test]
    fn general_search_empty_and_non_derogatory() {
        let z = Matrix::zeros(q(), 2, 2);
        assert!(matches!(
            steer_general(&z, &[], &SearchBudget::default()),
            Err(Error::SolverExhausted(_))
        ));
        let m = Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]);
        let t = SteerTarget {
            q: Polynomial::from_i64s(q(), &[1, 0, 1]),
            claimed_order: Some(4),
        };
        let n = steer_general(&m, &[t], &SearchBudget::default()).unwrap();
        assert!((&m + &n).pow(4).is_identity());
    }

    #[test]
    fn general_search_on_zero_plus_nilpotent_three() {
        let m = Matrix::block_diag(
            q(),
            &[
                Matrix::zeros(q(), 1, 1),
                Matrix::companion(&Polynomial::from_i64s(q(), &[0, 0, 0, 1])).unwrap(),
            ],
        );
        let t = SteerTarget {
            q: Polynomial::x_pow_minus_one(q(), 4),
            claimed_order: Some(4),
        };
        let n = steer_general(&m, &[t], &SearchBudget::default()).unwrap();
        assert!((&n * &n).is_zero());
        assert_eq!(charpoly(&(&m + &n)), Polynomial::x_pow_minus_one(q(), 4));
    }
}
