//! Periodicity, idempotent + torsion and torsion + square-zero decompositions.
//!
//! Every decomposition is computed in canonical coordinates, conjugated back
//! by the canonical transform and re-verified before it is returned.

mod et;
mod fp;
mod obstruction;
mod pairing;
mod plan;
mod steer;
mod target;
mod tn;

pub use et::idempotent_torsion;
pub use fp::fp_completion;
pub use obstruction::{check_sqrt2_obstruction, CandidateCheck, ObstructionReport};
pub use pairing::pair_full;
pub use plan::{allocate_zeros, Chunk, ChunkCore, ChunkPlan, Strategy};
pub use steer::{steer_general, steer_rank1, SearchBudget};
pub use target::{choose_target, target_pool, SteerTarget};
pub use tn::{torsion_squarezero, TnOptions};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matrix::{minpoly, Matrix};
use crate::poly::{prime_divisors_u128, torsion_order_poly};

/// Normalized witness of `A^{m0} = A^{n0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodWitness {
    pub n0: u128,
    pub m0: u128,
    pub nil_index: usize,
    pub torsion_order: u128,
}

/// `Some` witness when `A` is periodic, `None` otherwise.
///
/// The minimal polynomial is `x^a·g` with `g(0) ≠ 0`; `A` is periodic iff
/// `g | x^s − 1` for some `s`, which over 𝔽_p always holds.
pub fn is_periodic(a: &Matrix, order_bound: Option<u64>) -> Result<Option<PeriodWitness>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "periodicity needs a square matrix".into(),
        ));
    }
    let m = minpoly(a);
    let nil_index = m.x_valuation();
    let g = m.shift_down(nil_index);
    let Some(s) = torsion_order_poly(&g, order_bound)? else {
        return Ok(None);
    };
    let n0 = nil_index.max(1) as u128;
    let w = PeriodWitness {
        n0,
        m0: n0 + s,
        nil_index,
        torsion_order: s,
    };
    if a.pow(w.m0) != a.pow(w.n0) {
        return Err(Error::InternalInconsistency("period witness failed".into()));
    }
    Ok(Some(w))
}

/// Least `s ≥ 1` with `T^s = Id`, or `None` when `T` is not torsion.
pub fn torsion_order_matrix(t: &Matrix, order_bound: Option<u64>) -> Result<Option<u128>> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch(
            "torsion order needs a square matrix".into(),
        ));
    }
    if t.rank() < t.n() {
        return Ok(None);
    }
    let Some(s) = torsion_order_poly(&minpoly(t), order_bound)? else {
        return Ok(None);
    };
    if !t.pow(s).is_identity() {
        return Err(Error::InternalInconsistency(
            "torsion order failed T^s = Id".into(),
        ));
    }
    Ok(Some(s))
}

/// Order of `T` when it is a torsion part, else `NotTorsion`.
pub(crate) fn require_torsion(t: &Matrix, order_bound: Option<u64>) -> Result<u128> {
    torsion_order_matrix(t, order_bound)?.ok_or(Error::NotTorsion)
}

pub(crate) fn lcm(a: u128, b: u128) -> u128 {
    a.lcm(&b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parts {
    /// `A = E + T`, `E² = E`.
    Et { e: Matrix, t: Matrix },
    /// `A = T + N`, `N² = 0`.
    Tn { t: Matrix, n: Matrix },
}

impl Parts {
    pub fn kind(&self) -> &'static str {
        match self {
            Parts::Et { .. } => "ET",
            Parts::Tn { .. } => "TN",
        }
    }

    pub fn torsion(&self) -> &Matrix {
        match self {
            Parts::Et { t, .. } | Parts::Tn { t, .. } => t,
        }
    }

    /// `E` or `N`.
    pub fn other(&self) -> &Matrix {
        match self {
            Parts::Et { e, .. } => e,
            Parts::Tn { n, .. } => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub parts: Parts,
    pub torsion_order: u128,
    /// Similarity used to reach the coordinates the parts were built in.
    pub transform: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

/// Recomputes every certificate invariant by exact arithmetic.
pub fn verify_certificate(a: &Matrix, cert: &Certificate) -> VerifyReport {
    let mut checks = Vec::new();
    let t = cert.parts.torsion();
    let o = cert.parts.other();
    let shape_ok = [t, o, &cert.transform]
        .iter()
        .all(|m| m.field() == a.field() && m.rows() == a.rows() && m.cols() == a.cols())
        && a.is_square();
    checks.push(Check {
        name: "shape",
        passed: shape_ok,
    });
    let names: [&'static str; 5] = [
        match cert.parts {
            Parts::Et { .. } => "idempotent",
            Parts::Tn { .. } => "square_zero",
        },
        "sum",
        "torsion",
        "order_minimal",
        "transform_invertible",
    ];
    if !shape_ok {
        checks.extend(names.iter().map(|&name| Check {
            name,
            passed: false,
        }));
        return VerifyReport { checks };
    }
    let o2 = o * o;
    let structural = match cert.parts {
        Parts::Et { .. } => &o2 == o,
        Parts::Tn { .. } => o2.is_zero(),
    };
    let s = cert.torsion_order;
    let torsion = s >= 1 && t.pow(s).is_identity();
    let minimal = s >= 1
        && prime_divisors_u128(s)
            .iter()
            .all(|q| !t.pow(s / q).is_identity());
    checks.push(Check {
        name: names[0],
        passed: structural,
    });
    checks.push(Check {
        name: names[1],
        passed: &(t + o) == a,
    });
    checks.push(Check {
        name: names[2],
        passed: torsion,
    });
    checks.push(Check {
        name: names[3],
        passed: minimal,
    });
    checks.push(Check {
        name: names[4],
        passed: cert.transform.rank() == a.n(),
    });
    VerifyReport { checks }
}

/// Returns the certificate only if it verifies.
pub(crate) fn certified(a: &Matrix, cert: Certificate) -> Result<Certificate> {
    let report = verify_certificate(a, &cert);
    if report.passed() {
        Ok(cert)
    } else {
        Err(Error::InternalInconsistency(format!(
            "certificate failed checks: {}",
            report.failed().join(", ")
        )))
    }
}

/// `P·X·P⁻¹`.
pub(crate) fn conjugate_back(p: &Matrix, x: &Matrix) -> Result<Matrix> {
    Ok(&(p * x) * &p.inverse()?)
}
