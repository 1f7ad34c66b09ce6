//! Verification: orthonormality, pairwise unbiasedness, full-set reports,
//! SIC-POVM overlap checks, and the basis-count bounds.
//!
//! Checks never construct anything; they measure worst-case deviations and
//! compare against a caller-supplied tolerance. Constructed sets verify at
//! [`TOL_CONSTRUCTED`]; numerical search output at [`TOL_SEARCH`].

use thiserror::Error;

use crate::linalg::{inner, overlap_mag, Basis, CMat, CVec};
use crate::mub::MubSet;
use num_complex::Complex64;

/// Default tolerance for exact constructions (rounding only).
pub const TOL_CONSTRUCTED: f64 = 1e-9;
/// Default tolerance for numerical search output.
pub const TOL_SEARCH: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("a SIC-POVM in dimension {dim} needs {expected} vectors, got {got}")]
    WrongCount { dim: usize, expected: usize, got: usize },
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: u64 },
}

/// Worst deviation of a single basis from orthonormality.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoReport {
    pub dim: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// max |<v_i|v_j> - delta_ij| over all vector pairs of one basis.
pub fn check_orthonormal(basis: &Basis, tol: f64) -> OrthoReport {
    assert!(tol > 0.0);
    let mut max_deviation: f64 = 0.0;
    for (i, a) in basis.vectors().iter().enumerate() {
        for (j, b) in basis.vectors().iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (inner(a, b).expect("equal dims within a basis").norm() - target).abs();
            max_deviation = max_deviation.max(dev);
        }
    }
    OrthoReport { dim: basis.dim(), max_deviation, tolerance: tol, pass: max_deviation <= tol }
}

/// Worst deviation of a basis pair from mutual unbiasedness.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub dim: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// max | |<a|b>| - 1/sqrt(d) | over the d^2 cross overlaps.
pub fn check_unbiased_pair(a: &Basis, b: &Basis, tol: f64) -> Result<PairReport, CheckError> {
    if a.dim() != b.dim() {
        return Err(CheckError::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let target = 1.0 / (a.dim() as f64).sqrt();
    let mut max_deviation: f64 = 0.0;
    for u in a.vectors() {
        for v in b.vectors() {
            let dev = (overlap_mag(u, v).expect("dims checked") - target).abs();
            max_deviation = max_deviation.max(dev);
        }
    }
    Ok(PairReport { dim: a.dim(), max_deviation, tolerance: tol, pass: max_deviation <= tol })
}

/// Deviation of one unordered basis pair inside a full-set report.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDeviation {
    pub i: usize,
    pub j: usize,
    pub deviation: f64,
}

/// Aggregate verification of a whole MUB set.
#[derive(Debug, Clone, PartialEq)]
pub struct MubReport {
    pub dim: usize,
    pub basis_count: usize,
    pub tolerance: f64,
    /// Worst orthonormality deviation per basis, in basis order.
    pub ortho_deviations: Vec<f64>,
    /// Worst unbiasedness deviation per unordered basis pair.
    pub pair_deviations: Vec<PairDeviation>,
    pub max_deviation: f64,
    /// More than d+1 bases can never be pairwise unbiased; exceeding the
    /// bound fails the report regardless of tolerance.
    pub bound_exceeded: bool,
    pub pass: bool,
}

/// Runs orthonormality on every basis and unbiasedness on every unordered
/// pair, aggregating the worst deviation.
pub fn check_mub_set(set: &MubSet, tol: f64) -> Result<MubReport, CheckError> {
    assert!(tol > 0.0);
    let dim = set.dim();
    for b in set.bases() {
        if b.dim() != dim {
            return Err(CheckError::DimMismatch { left: dim, right: b.dim() });
        }
    }
    let mut max_deviation: f64 = 0.0;
    let mut ortho_deviations = Vec::with_capacity(set.len());
    for b in set.bases() {
        let r = check_orthonormal(b, tol);
        max_deviation = max_deviation.max(r.max_deviation);
        ortho_deviations.push(r.max_deviation);
    }
    let mut pair_deviations = Vec::new();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let r = check_unbiased_pair(set.basis(i), set.basis(j), tol)?;
            max_deviation = max_deviation.max(r.max_deviation);
            pair_deviations.push(PairDeviation { i, j, deviation: r.max_deviation });
        }
    }
    let bound_exceeded = set.len() > dim + 1;
    Ok(MubReport {
        dim,
        basis_count: set.len(),
        tolerance: tol,
        ortho_deviations,
        pair_deviations,
        max_deviation,
        bound_exceeded,
        pass: !bound_exceeded && max_deviation <= tol,
    })
}

/// SIC-POVM verification result.
#[derive(Debug, Clone, PartialEq)]
pub struct SicReport {
    pub dim: usize,
    pub count: usize,
    pub tolerance: f64,
    pub max_norm_deviation: f64,
    /// Worst | |<a|b>| - 1/sqrt(d+1) | over distinct pairs.
    pub max_overlap_deviation: f64,
    /// Informational: max | (1/d) sum |a><a| - I |; not part of pass/fail,
    /// the defining condition is the overlap alone.
    pub identity_deviation: f64,
    pub pass: bool,
}

/// Verifies d^2 unit vectors with pairwise overlap magnitude 1/sqrt(d+1).
pub fn check_sic_povm(vectors: &[CVec], tol: f64) -> Result<SicReport, CheckError> {
    assert!(tol > 0.0);
    let dim = match vectors.first() {
        Some(v) => v.dim(),
        None => return Err(CheckError::WrongCount { dim: 0, expected: 0, got: 0 }),
    };
    for v in vectors {
        if v.dim() != dim {
            return Err(CheckError::DimMismatch { left: dim, right: v.dim() });
        }
    }
    let expected = dim * dim;
    if vectors.len() != expected {
        return Err(CheckError::WrongCount { dim, expected, got: vectors.len() });
    }

    let mut max_norm_deviation: f64 = 0.0;
    for v in vectors {
        max_norm_deviation = max_norm_deviation.max((v.norm() - 1.0).abs());
    }
    let target = 1.0 / ((dim + 1) as f64).sqrt();
    let mut max_overlap_deviation: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            let dev = (overlap_mag(a, b).expect("dims checked") - target).abs();
            max_overlap_deviation = max_overlap_deviation.max(dev);
        }
    }
    let mut frame = CMat::zeros(dim, dim);
    for v in vectors {
        frame.add_outer(v, Complex64::new(1.0 / dim as f64, 0.0));
    }
    let identity_deviation = frame.max_abs_diff(&CMat::identity(dim));
    let pass = max_norm_deviation <= tol && max_overlap_deviation <= tol;
    Ok(SicReport {
        dim,
        count: vectors.len(),
        tolerance: tol,
        max_norm_deviation,
        max_overlap_deviation,
        identity_deviation,
        pass,
    })
}

/// Basis-count bounds for dimension d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub d: u64,
    /// Prime factorization of d as (p, e) pairs, ascending p.
    pub factorization: Vec<(u64, u32)>,
    /// 1 + min over i of p_i^e_i: the count the tensor combination attains.
    pub lower: u64,
    /// d + 1, the hard ceiling.
    pub upper: u64,
    pub is_prime_power: bool,
}

/// Factorizes d by trial division (d <= 10^12) and reports the bounds.
pub fn nmax_bounds(d: u64) -> Result<BoundsReport, CheckError> {
    if !(2..=1_000_000_000_000).contains(&d) {
        return Err(CheckError::OutOfRange { what: "dimension", value: d });
    }
    let factorization = factorize(d);
    let lower = 1 + factorization.iter().map(|&(p, e)| p.pow(e)).min().expect("d >= 2");
    Ok(BoundsReport {
        d,
        lower,
        upper: d + 1,
        is_prime_power: factorization.len() == 1,
        factorization,
    })
}

/// Trial-division factorization, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            factors.push((p, e));
        }
    };
    let mut e = 0;
    while n.is_multiple_of(2) {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut p = 3;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        push(p, e);
        p += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    factors
}
