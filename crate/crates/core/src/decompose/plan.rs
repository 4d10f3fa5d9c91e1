//! Distribution of the `x` divisors over the other canonical blocks.

use crate::error::{Error, Result};
use crate::matrix::{CanonicalData, ElementaryDivisor, Matrix};
use crate::poly::Polynomial;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Trivial,
    PairFull,
    SteerRank1,
    SteerGeneral,
    FpGlobal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChunkCore {
    NilBlock(usize),
    TorsionBlocks(Vec<Polynomial>),
    /// Every non-`x` divisor at once (prime fields only).
    Whole(Vec<ElementaryDivisor>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chunk {
    pub zeros: usize,
    pub core: ChunkCore,
    pub strategy: Strategy,
    /// Indices into the canonical divisor list: the zeros first, then the core.
    pub members: Vec<usize>,
}

impl Chunk {
    pub fn size(&self) -> usize {
        self.zeros + self.core_size()
    }

    pub fn core_size(&self) -> usize {
        match &self.core {
            ChunkCore::NilBlock(k) => *k,
            ChunkCore::TorsionBlocks(fs) => fs.iter().map(Polynomial::deg).sum(),
            ChunkCore::Whole(ds) => ds.iter().map(ElementaryDivisor::size).sum(),
        }
    }

    /// `diag(0_z, core blocks)` in canonical block conventions.
    pub fn matrix(&self, field: Field) -> Result<Matrix> {
        let mut blocks = vec![Matrix::zeros(field, self.zeros, self.zeros)];
        match &self.core {
            ChunkCore::NilBlock(k) => {
                blocks.push(Matrix::companion(&Polynomial::monomial(field.one(), *k))?)
            }
            ChunkCore::TorsionBlocks(fs) => {
                for f in fs {
                    blocks.push(Matrix::companion(f)?);
                }
            }
            ChunkCore::Whole(ds) => {
                for d in ds {
                    blocks.push(Matrix::companion(&d.polynomial(field))?);
                }
            }
        }
        Ok(Matrix::block_diag(field, &blocks))
    }

    /// Trace of the chunk matrix.
    pub fn trace(&self, field: Field) -> Result<crate::scalar::Scalar> {
        Ok(self.matrix(field)?.trace())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkPlan {
    pub chunks: Vec<Chunk>,
}

/// Smallest-cardinality subset of `degs` (by index) for each reachable sum up to `cap`.
fn subset_sums(degs: &[usize], cap: usize) -> Vec<Option<Vec<usize>>> {
    let mut best: Vec<Option<Vec<usize>>> = vec![None; cap + 1];
    best[0] = Some(Vec::new());
    for (i, &d) in degs.iter().enumerate() {
        for s in (d..=cap).rev() {
            if let Some(prev) = &best[s - d] {
                if best[s]
                    .as_ref()
                    .is_none_or(|cur| cur.len() > prev.len() + 1)
                {
                    let mut next = prev.clone();
                    next.push(i);
                    best[s] = Some(next);
                }
            }
        }
    }
    best
}

/// Feasible iff `z ≤ Σ(kᵢ − 2) + t`, which is `2·rank ≥ n` for a periodic matrix.
pub fn allocate_zeros(canon: &CanonicalData, field: Field) -> Result<ChunkPlan> {
    let mut xs = Vec::new();
    let mut nils = Vec::new();
    let mut tors = Vec::new();
    for (i, d) in canon.divisors.iter().enumerate() {
        match d {
            ElementaryDivisor::X => xs.push(i),
            ElementaryDivisor::NilpotentPower(k) => nils.push((i, *k)),
            ElementaryDivisor::TorsionFactor(f) => tors.push((i, f.clone())),
        }
    }
    let n: usize = canon.divisors.iter().map(ElementaryDivisor::size).sum();
    let t: usize = tors.iter().map(|(_, f)| f.deg()).sum();
    let slack: usize = nils.iter().map(|(_, k)| k - 2).sum::<usize>() + t;
    if xs.len() > slack {
        return Err(Error::RankTooLow {
            rank: n - xs.len() - nils.len(),
            n,
        });
    }
    if !field.is_char_zero() {
        let core = canon
            .divisors
            .iter()
            .filter(|d| **d != ElementaryDivisor::X)
            .cloned()
            .collect();
        let mut members = xs.clone();
        members.extend((0..canon.divisors.len()).filter(|i| !xs.contains(i)));
        return Ok(ChunkPlan {
            chunks: vec![Chunk {
                zeros: xs.len(),
                core: ChunkCore::Whole(core),
                strategy: Strategy::FpGlobal,
                members,
            }],
        });
    }

    let mut chunks = Vec::new();
    let mut zeros = xs.into_iter();
    for (idx, k) in nils {
        let mut members: Vec<usize> = zeros.by_ref().take(k - 2).collect();
        let s = members.len();
        members.push(idx);
        chunks.push(Chunk {
            zeros: s,
            core: ChunkCore::NilBlock(k),
            strategy: if s == 0 {
                Strategy::SteerRank1
            } else {
                Strategy::SteerGeneral
            },
            members,
        });
    }
    let rest: Vec<usize> = zeros.collect();
    let r = rest.len();
    if tors.is_empty() {
        return Ok(ChunkPlan { chunks });
    }

    let degs: Vec<usize> = tors.iter().map(|(_, f)| f.deg()).collect();
    let sums = subset_sums(&degs, r);
    // largest pairable sum whose leftover zeros can each sit on a separate block
    let chosen = (0..=r).rev().find_map(|s| {
        sums[s]
            .as_ref()
            .filter(|sub| r - s <= tors.len() - sub.len())
            .map(|sub| (s, sub.clone()))
    });
    let mut zero_iter = rest.into_iter();
    let mut leftover: Vec<usize> = Vec::new();
    match chosen {
        Some((s, sub)) => {
            if s > 0 {
                let mut members: Vec<usize> = zero_iter.by_ref().take(s).collect();
                members.extend(sub.iter().map(|&j| tors[j].0));
                chunks.push(Chunk {
                    zeros: s,
                    core: ChunkCore::TorsionBlocks(
                        sub.iter().map(|&j| tors[j].1.clone()).collect(),
                    ),
                    strategy: Strategy::PairFull,
                    members,
                });
            }
            leftover.extend((0..tors.len()).filter(|j| !sub.contains(j)));
            let groups = r - s;
            let mut grouped: Vec<Vec<usize>> = Vec::with_capacity(groups);
            let mut unplaced = Vec::new();
            for &j in &leftover {
                if grouped.len() < groups {
                    grouped.push(vec![j]);
                    continue;
                }
                let f = &tors[j].1;
                // a group stays non-derogatory while its blocks are pairwise coprime
                let slot = grouped.iter_mut().find(|g| {
                    g.iter()
                        .all(|&o| f.gcd(&tors[o].1).is_ok_and(|c| c.deg() == 0))
                });
                match slot {
                    Some(g) => g.push(j),
                    None => unplaced.push(j),
                }
            }
            for g in grouped {
                let mut members = vec![zero_iter.next().expect("one zero per group")];
                members.extend(g.iter().map(|&j| tors[j].0));
                chunks.push(Chunk {
                    zeros: 1,
                    core: ChunkCore::TorsionBlocks(g.iter().map(|&j| tors[j].1.clone()).collect()),
                    strategy: Strategy::SteerRank1,
                    members,
                });
            }
            leftover = unplaced;
        }
        None => {
            // no single-zero layout fits: one derogatory chunk with every torsion block
            let members: Vec<usize> = zero_iter
                .by_ref()
                .chain(tors.iter().map(|(i, _)| *i))
                .collect();
            chunks.push(Chunk {
                zeros: r,
                core: ChunkCore::TorsionBlocks(tors.iter().map(|(_, f)| f.clone()).collect()),
                strategy: Strategy::SteerGeneral,
                members,
            });
        }
    }
    if !leftover.is_empty() {
        chunks.push(Chunk {
            zeros: 0,
            core: ChunkCore::TorsionBlocks(leftover.iter().map(|&j| tors[j].1.clone()).collect()),
            strategy: Strategy::Trivial,
            members: leftover.iter().map(|&j| tors[j].0).collect(),
        });
    }
    Ok(ChunkPlan { chunks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::canonical_form;
    use crate::poly::cyclotomic;

    fn q() -> Field {
        Field::Rationals
    }

    fn plan_of(blocks: &[Matrix]) -> Result<ChunkPlan> {
        let a = Matrix::block_diag(q(), blocks);
        allocate_zeros(&canonical_form(&a)?, q())
    }

    fn zero() -> Matrix {
        Matrix::zeros(q(), 1, 1)
    }

    fn comp(d: u64) -> Matrix {
        Matrix::companion(&cyclotomic(d)).unwrap()
    }

    fn nil(k: usize) -> Matrix {
        Matrix::companion(&Polynomial::monomial(q().one(), k)).unwrap()
    }

    #[test]
    fn zero_on_nilpotent_three() {
        let p = plan_of(&[zero(), nil(3)]).unwrap();
        assert_eq!(p.chunks.len(), 1);
        assert_eq!(p.chunks[0].zeros, 1);
        assert_eq!(p.chunks[0].core, ChunkCore::NilBlock(3));
        assert_eq!(p.chunks[0].strategy, Strategy::SteerGeneral);
    }

    #[test]
    fn zero_paired_with_unit() {
        let p = plan_of(&[zero(), comp(1)]).unwrap();
        assert_eq!(p.chunks.len(), 1);
        assert_eq!(p.chunks[0].strategy, Strategy::PairFull);
        assert_eq!(p.chunks[0].zeros, 1);
    }

    #[test]
    fn too_many_zeros() {
        let err = plan_of(&[zero(), zero(), nil(2), nil(2)]).unwrap_err();
        assert_eq!(err, Error::RankTooLow { rank: 2, n: 6 });
    }

    #[test]
    fn two_zeros_on_phi5_are_general() {
        let p = plan_of(&[zero(), zero(), comp(5)]).unwrap();
        assert_eq!(p.chunks.len(), 1);
        assert_eq!(p.chunks[0].strategy, Strategy::SteerGeneral);
        assert_eq!(p.chunks[0].size(), 6);
    }

    #[test]
    fn single_zero_on_phi4() {
        let p = plan_of(&[zero(), comp(4)]).unwrap();
        assert_eq!(p.chunks[0].strategy, Strategy::SteerRank1);
        assert_eq!(p.chunks[0].zeros, 1);
    }

    #[test]
    fn members_cover_every_divisor_once() {
        let p = plan_of(&[
            zero(),
            zero(),
            zero(),
            comp(1),
            comp(2),
            comp(3),
            nil(4),
            comp(2),
        ])
        .unwrap();
        let mut all: Vec<usize> = p.chunks.iter().flat_map(|c| c.members.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..8).collect::<Vec<_>>());
        let zeros: usize = p.chunks.iter().map(|c| c.zeros).sum();
        assert_eq!(zeros, 3);
        let size: usize = p.chunks.iter().map(Chunk::size).sum();
        assert_eq!(size, 12);
    }
}
