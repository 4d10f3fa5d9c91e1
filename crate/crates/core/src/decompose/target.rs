//! Characteristic polynomials to steer a chunk towards.

use crate::error::{Error, Result};
use crate::poly::{cyclotomic_in, euler_phi, torsion_order_poly, trace_of, Polynomial};
use crate::scalar::{Field, Scalar};

use super::lcm;
use super::plan::{Chunk, ChunkCore};

/// Subset-search results kept per chunk before sorting.
const POOL_CAP: usize = 4096;
/// Subset-search nodes visited per chunk.
const NODE_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteerTarget {
    pub q: Polynomial,
    /// `q | x^claimed_order − 1`; `None` means only invertibility is claimed.
    pub claimed_order: Option<u128>,
}

fn accept(q: Polynomial, claimed: u128, trace: &Scalar) -> Result<Option<SteerTarget>> {
    let field = q.field();
    if &trace_of(&q)? != trace || !q.is_squarefree()? {
        return Ok(None);
    }
    if !Polynomial::x(field).pow_mod(claimed, &q)?.is_one() {
        return Err(Error::InternalInconsistency(format!(
            "target {q} does not divide x^{claimed} - 1"
        )));
    }
    Ok(Some(SteerTarget {
        q,
        claimed_order: Some(claimed),
    }))
}

/// Targets that depend only on size and trace `τ ∈ {0, 1, −1}`.
fn trace_unit_targets(m: usize, trace: &Scalar) -> Result<Vec<SteerTarget>> {
    let field = trace.field();
    let (q, claimed) = if trace.is_zero() {
        (Polynomial::x_pow_minus_one(field, m), m as u128)
    } else if trace == &field.one() {
        // x^m − x^{m−1} + … + (−1)^m = (x^{m+1} + (−1)^m) / (x + 1)
        let coeffs = (0..=m)
            .map(|i| field.from_i64(if (m - i).is_multiple_of(2) { 1 } else { -1 }))
            .collect();
        let order = if m.is_multiple_of(2) {
            2 * (m + 1)
        } else {
            m + 1
        };
        (Polynomial::new(field, coeffs), order as u128)
    } else if trace == &field.from_i64(-1) {
        (
            Polynomial::new(field, vec![field.one(); m + 1]),
            (m + 1) as u128,
        )
    } else {
        return Ok(Vec::new());
    };
    Ok(accept(q, claimed, trace)?.into_iter().collect())
}

/// `p·(x^k − 1)`, or `p·(x^k + 1)` when `p` meets `x^k − 1`.
fn padded_target(p: &Polynomial, k: usize, trace: &Scalar) -> Result<Vec<SteerTarget>> {
    let field = p.field();
    let Some(r) = torsion_order_poly(p, None)? else {
        return Ok(Vec::new());
    };
    let minus = Polynomial::x_pow_minus_one(field, k);
    let plus = &minus + &Polynomial::constant(field.from_i64(2));
    let (pad, claimed) = if p.gcd(&minus)?.deg() == 0 {
        (minus, lcm(k as u128, r))
    } else if p.gcd(&plus)?.deg() == 0 {
        (plus, lcm(2 * k as u128, r))
    } else {
        return Ok(Vec::new());
    };
    Ok(accept(p * &pad, claimed, trace)?.into_iter().collect())
}

struct Piece {
    poly: Polynomial,
    trace: Scalar,
    order: u128,
}

fn pieces(chunk: &Chunk, field: Field, m: usize) -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    for d in 1..=2 * (m as u64).pow(2) {
        if euler_phi(d) as usize <= m {
            let poly = cyclotomic_in(d, field);
            out.push(Piece {
                trace: trace_of(&poly)?,
                poly,
                order: d as u128,
            });
        }
    }
    if let (Field::RealQuadratic(_), ChunkCore::TorsionBlocks(fs)) = (field, &chunk.core) {
        // irrational halves of cyclotomics present in the chunk, with their conjugates
        for f in fs.iter().filter(|f| &f.conjugate() != *f) {
            for g in [f.clone(), f.conjugate()] {
                if out.iter().any(|p| p.poly == g) {
                    continue;
                }
                if let Some(order) = torsion_order_poly(&g, None)? {
                    out.push(Piece {
                        trace: trace_of(&g)?,
                        poly: g,
                        order,
                    });
                }
            }
        }
    }
    Ok(out)
}

struct Search<'a> {
    pieces: &'a [Piece],
    chosen: Vec<usize>,
    found: Vec<Vec<usize>>,
    nodes: usize,
}

fn search(s: &mut Search<'_>, start: usize, deg_left: usize, trace_left: &Scalar) {
    s.nodes += 1;
    if s.found.len() >= POOL_CAP || s.nodes >= NODE_CAP {
        return;
    }
    if deg_left == 0 {
        if trace_left.is_zero() {
            s.found.push(s.chosen.clone());
        }
        return;
    }
    for i in start..s.pieces.len() {
        let d = s.pieces[i].poly.deg();
        if d > deg_left {
            continue;
        }
        s.chosen.push(i);
        let rest = trace_left - &s.pieces[i].trace;
        search(s, i + 1, deg_left - d, &rest);
        s.chosen.pop();
    }
}

/// Admissible targets for a characteristic-zero chunk: size/trace targets
/// first, then padded single-block targets, then squarefree cyclotomic
/// products sorted by (order, coefficients).
pub fn target_pool(chunk: &Chunk, field: Field) -> Result<Vec<SteerTarget>> {
    if !field.is_char_zero() {
        return Ok(Vec::new());
    }
    let m = chunk.size();
    let trace = chunk.trace(field)?;
    let mut pool = trace_unit_targets(m, &trace)?;
    if let ChunkCore::TorsionBlocks(fs) = &chunk.core {
        if let ([p], k) = (fs.as_slice(), chunk.zeros) {
            if k >= 2 {
                pool.extend(padded_target(p, k, &trace)?);
            }
        }
    }
    let ps = pieces(chunk, field, m)?;
    let mut st = Search {
        pieces: &ps,
        chosen: Vec::new(),
        found: Vec::new(),
        nodes: 0,
    };
    search(&mut st, 0, m, &trace);
    let mut extra = Vec::new();
    for sub in st.found {
        let q = sub
            .iter()
            .fold(Polynomial::one(field), |acc, &i| &acc * &ps[i].poly);
        let order = sub.iter().fold(1u128, |acc, &i| lcm(acc, ps[i].order));
        if let Some(t) = accept(q, order, &trace)? {
            extra.push(t);
        }
    }
    extra.sort_by(|a, b| {
        a.claimed_order
            .cmp(&b.claimed_order)
            .then_with(|| a.q.canonical_cmp(&b.q))
    });
    for t in extra {
        if !pool.iter().any(|p| p.q == t.q) {
            pool.push(t);
        }
    }
    Ok(pool)
}

/// First entry of [`target_pool`].
pub fn choose_target(chunk: &Chunk, field: Field) -> Result<Option<SteerTarget>> {
    Ok(target_pool(chunk, field)?.into_iter().next())
}
