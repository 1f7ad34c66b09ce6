//! Numerical search for k mutually unbiased bases in dimension d.
//!
//! The merit function is the squared-overlap residual
//!
//! ```text
//! r = sum over unordered basis pairs, sum over vector pairs
//!     (|<a|b>|^2 - 1/d)^2
//! ```
//!
//! which is zero exactly on MUB sets, smooth everywhere, and polynomial in
//! the amplitudes. Basis 0 stays pinned to the computational basis as the
//! gauge; the remaining bases move by gradient descent with backtracking
//! line search, re-orthonormalized after every step by the unitary polar
//! factor. Restarts draw fresh Haar-like starting points from per-restart
//! seeds derived from the master seed, so the outcome is identical no matter
//! how or in what order the restarts run. A failed search reports its best
//! residual and nothing more; it is never evidence of nonexistence.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::check;
use crate::linalg::{self, Basis, CMat};
use crate::mub::{Method, MubSet};

const GRAD_NORM_STOP: f64 = 1e-12;
const ARMIJO_C1: f64 = 1e-4;
const BACKTRACK_FACTOR: f64 = 0.5;
const MIN_STEP: f64 = 1e-16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("residual needs at least two bases")]
    TooFewBases,
}

/// Parameters of one search run. The seed fully determines the outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub dim: usize,
    /// Total number of bases wanted, including the fixed computational one.
    pub target_bases: usize,
    pub restarts: u32,
    pub max_iters: u32,
    /// Initial line-search step; later iterations adapt it.
    pub step_size: f64,
    pub seed: u64,
    /// Residual at or below which the run counts as a success.
    pub tolerance: f64,
    /// Optional set whose non-computational bases seed the free slots.
    pub init: Option<MubSet>,
}

impl SearchConfig {
    pub fn new(dim: usize, target_bases: usize) -> SearchConfig {
        SearchConfig {
            dim,
            target_bases,
            restarts: 20,
            max_iters: 4000,
            step_size: 0.1,
            seed: 0,
            tolerance: 1e-8,
            init: None,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        let fail = |msg: &str| Err(SearchError::InvalidConfig(msg.to_string()));
        if self.dim < 2 {
            return fail("dimension must be at least 2");
        }
        if self.target_bases < 2 {
            return fail("at least two bases are required");
        }
        if self.restarts < 1 {
            return fail("at least one restart is required");
        }
        if self.max_iters < 1 {
            return fail("at least one iteration is required");
        }
        if !self.step_size.is_finite() || self.step_size <= 0.0 {
            return fail("step size must be positive");
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return fail("tolerance must be positive");
        }
        if let Some(init) = &self.init {
            if init.dim() != self.dim {
                return Err(SearchError::DimMismatch { left: init.dim(), right: self.dim });
            }
        }
        Ok(())
    }
}

/// Search outcome: the best candidate across restarts plus the full
/// per-restart trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub dim: usize,
    pub target_bases: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub best_residual: f64,
    /// Restart index that produced the best candidate.
    pub best_restart: u32,
    /// Final residual of every restart, in restart order.
    pub restart_residuals: Vec<f64>,
    /// Iterations spent in every restart.
    pub iterations: Vec<u32>,
    pub success: bool,
    /// Basis 0 is the computational basis; the rest are the optimized
    /// candidates. Only a success is a verified MUB set.
    pub best_set: MubSet,
}

/// The squared-overlap residual over all unordered basis pairs. Zero iff the
/// set is exactly mutually unbiased. Callers supply orthonormal bases; the
/// formula itself is defined for any amplitudes, which is what lets finite
/// differences probe it off-manifold.
pub fn residual(bases: &[Basis]) -> Result<f64, SearchError> {
    if bases.len() < 2 {
        return Err(SearchError::TooFewBases);
    }
    let d = bases[0].dim();
    for b in bases {
        if b.dim() != d {
            return Err(SearchError::DimMismatch { left: d, right: b.dim() });
        }
    }
    let mats: Vec<CMat> = bases.iter().map(|b| b.as_matrix()).collect();
    let inv_d = 1.0 / d as f64;
    let mut total = 0.0;
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            total += pair_residual(&mats[i], &mats[j], inv_d);
        }
    }
    Ok(total)
}

/// Raw partial derivatives of the residual with respect to the complex
/// amplitudes: entry (r, c) of the i-th returned matrix carries the real
/// gradient in its real part and the imaginary-coordinate gradient in its
/// imaginary part (the 2 d/d-conjugate Wirtinger convention). Basis 0 is the
/// gauge and gets an all-zero slot.
pub fn euclidean_gradient(bases: &[Basis]) -> Result<Vec<CMat>, SearchError> {
    if bases.len() < 2 {
        return Err(SearchError::TooFewBases);
    }
    let d = bases[0].dim();
    for b in bases {
        if b.dim() != d {
            return Err(SearchError::DimMismatch { left: d, right: b.dim() });
        }
    }
    let mats: Vec<CMat> = bases.iter().map(|b| b.as_matrix()).collect();
    let inv_d = 1.0 / d as f64;
    let mut grads: Vec<CMat> = mats.iter().map(|m| CMat::zeros(m.rows(), m.cols())).collect();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let (ga, gb) = pair_gradients(&mats[i], &mats[j], inv_d);
            if i > 0 {
                grads[i] = grads[i].add(&ga);
            }
            if j > 0 {
                grads[j] = grads[j].add(&gb);
            }
        }
    }
    Ok(grads)
}

/// The Riemannian gradient: the Euclidean gradient of [`euclidean_gradient`]
/// projected onto the tangent space of the unitary constraint at each basis.
/// Basis 0 is the gauge and its slot is identically zero.
pub fn gradient(bases: &[Basis]) -> Result<Vec<CMat>, SearchError> {
    let mats: Vec<CMat> = bases.iter().map(|b| b.as_matrix()).collect();
    let euclid = euclidean_gradient(bases)?;
    Ok(mats
        .iter()
        .zip(&euclid)
        .enumerate()
        .map(|(i, (u, g))| if i == 0 { g.clone() } else { project_tangent(u, g) })
        .collect())
}

/// Residual contribution of one basis pair (matrices of column vectors).
fn pair_residual(a: &CMat, b: &CMat, inv_d: f64) -> f64 {
    let d = a.rows();
    let mut acc = 0.0;
    for k in 0..a.cols() {
        for l in 0..b.cols() {
            let mut z = Complex64::new(0.0, 0.0);
            for r in 0..d {
                z += a.get(r, k).conj() * b.get(r, l);
            }
            let w = z.norm_sqr() - inv_d;
            acc += w * w;
        }
    }
    acc
}

/// Euclidean gradients of one pair's residual with respect to both matrices:
/// for z = <a_k|b_l> and w = |z|^2 - 1/d, column l of grad_b accumulates
/// 4 w z a_k and column k of grad_a accumulates 4 w conj(z) b_l.
fn pair_gradients(a: &CMat, b: &CMat, inv_d: f64) -> (CMat, CMat) {
    let d = a.rows();
    let mut ga = CMat::zeros(a.rows(), a.cols());
    let mut gb = CMat::zeros(b.rows(), b.cols());
    for k in 0..a.cols() {
        for l in 0..b.cols() {
            let mut z = Complex64::new(0.0, 0.0);
            for r in 0..d {
                z += a.get(r, k).conj() * b.get(r, l);
            }
            let w = z.norm_sqr() - inv_d;
            let cb = 4.0 * w * z;
            let ca = 4.0 * w * z.conj();
            for r in 0..d {
                gb.set(r, l, gb.get(r, l) + cb * a.get(r, k));
                ga.set(r, k, ga.get(r, k) + ca * b.get(r, l));
            }
        }
    }
    (ga, gb)
}

/// Projects g onto the tangent space of the unitary group at u:
/// g - u * herm(u^dag g).
fn project_tangent(u: &CMat, g: &CMat) -> CMat {
    let a = u.dagger().mul(g);
    let herm = a.add(&a.dagger()).scale(Complex64::new(0.5, 0.0));
    g.sub(&u.mul(&herm))
}

fn frobenius_sq(m: &CMat) -> f64 {
    let mut acc = 0.0;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            acc += m.get(r, c).norm_sqr();
        }
    }
    acc
}

/// Objective restricted to pairs touching at least one free basis. With a
/// single fixed basis this is the full residual; when extending a fixed set
/// it is exactly the residual restricted to pairs involving the new basis.
fn objective(fixed: &[CMat], free: &[CMat], inv_d: f64) -> f64 {
    let mut acc = 0.0;
    for f in fixed {
        for g in free {
            acc += pair_residual(f, g, inv_d);
        }
    }
    for i in 0..free.len() {
        for j in i + 1..free.len() {
            acc += pair_residual(&free[i], &free[j], inv_d);
        }
    }
    acc
}

fn objective_gradients(fixed: &[CMat], free: &[CMat], inv_d: f64) -> Vec<CMat> {
    let mut grads: Vec<CMat> = free.iter().map(|m| CMat::zeros(m.rows(), m.cols())).collect();
    for f in fixed {
        for (j, g) in free.iter().enumerate() {
            let (_, gb) = pair_gradients(f, g, inv_d);
            grads[j] = grads[j].add(&gb);
        }
    }
    for i in 0..free.len() {
        for j in i + 1..free.len() {
            let (ga, gb) = pair_gradients(&free[i], &free[j], inv_d);
            grads[i] = grads[i].add(&ga);
            grads[j] = grads[j].add(&gb);
        }
    }
    grads
}

/// Gradient descent with Armijo backtracking and polar retraction. Returns
/// the final free matrices, the final objective value, and iterations used.
fn descend(
    fixed: &[CMat],
    mut free: Vec<CMat>,
    cfg: &SearchConfig,
) -> (Vec<CMat>, f64, u32) {
    let inv_d = 1.0 / cfg.dim as f64;
    let mut value = objective(fixed, &free, inv_d);
    let mut step = cfg.step_size;
    let mut iters = 0;

    for _ in 0..cfg.max_iters {
        if value <= cfg.tolerance {
            break;
        }
        let riem: Vec<CMat> = objective_gradients(fixed, &free, inv_d)
            .iter()
            .zip(&free)
            .map(|(g, u)| project_tangent(u, g))
            .collect();
        let grad_norm_sq: f64 = riem.iter().map(frobenius_sq).sum();
        if grad_norm_sq.sqrt() < GRAD_NORM_STOP {
            break;
        }

        let mut alpha = step;
        let mut accepted = false;
        while alpha >= MIN_STEP {
            let candidate: Option<Vec<CMat>> = free
                .iter()
                .zip(&riem)
                .map(|(u, g)| {
                    let moved = u.sub(&g.scale(Complex64::new(alpha, 0.0)));
                    linalg::polar_factor(&moved).ok()
                })
                .collect();
            if let Some(candidate) = candidate {
                let cand_value = objective(fixed, &candidate, inv_d);
                if cand_value <= value - ARMIJO_C1 * alpha * grad_norm_sq {
                    free = candidate;
                    value = cand_value;
                    accepted = true;
                    break;
                }
            }
            alpha *= BACKTRACK_FACTOR;
        }
        iters += 1;
        if !accepted {
            break; // line search exhausted: a stationary point at f64 scale
        }
        step = (alpha * 2.0).min(1.0);
    }
    (free, value, iters)
}

/// SplitMix64 step; derives independent per-restart seeds from the master.
fn derive_seed(master: u64, restart: u32) -> u64 {
    let mut z = master.wrapping_add((restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Box-Muller pair from two uniforms.
fn gaussian(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1 = 1.0 - uniform(rng); // (0, 1]
    let u2 = uniform(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let t = 2.0 * std::f64::consts::PI * u2;
    (r * t.cos(), r * t.sin())
}

/// Haar-like random unitary: complex Gaussian entries, columns orthonormalized
/// by modified Gram-Schmidt.
fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMat {
    loop {
        let mut m = CMat::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                let (re, im) = gaussian(rng);
                m.set(r, c, Complex64::new(re, im));
            }
        }
        if gram_schmidt(&mut m) {
            return m;
        }
        // Degenerate draw (essentially measure zero): try again.
    }
}

fn gram_schmidt(m: &mut CMat) -> bool {
    let d = m.rows();
    for c in 0..d {
        for prev in 0..c {
            let mut dot = Complex64::new(0.0, 0.0);
            for r in 0..d {
                dot += m.get(r, prev).conj() * m.get(r, c);
            }
            for r in 0..d {
                let v = m.get(r, c) - dot * m.get(r, prev);
                m.set(r, c, v);
            }
        }
        let norm: f64 = (0..d).map(|r| m.get(r, c).norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return false;
        }
        for r in 0..d {
            let v = m.get(r, c) / norm;
            m.set(r, c, v);
        }
    }
    true
}

/// A seeded Haar-like orthonormal basis; the initializer the search itself
/// uses, exposed for experiments and tests.
pub fn random_basis(dim: usize, seed: u64) -> Basis {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Basis::from_matrix(&random_unitary(&mut rng, dim), format!("random {seed}"))
        .expect("square unitary")
}

fn report_from(
    cfg: &SearchConfig,
    fixed_bases: Vec<Basis>,
    best: BestCandidate,
    restart_residuals: Vec<f64>,
    iterations: Vec<u32>,
) -> SearchReport {
    let mut bases = fixed_bases;
    let fixed_count = bases.len();
    for (i, m) in best.mats.iter().enumerate() {
        bases.push(Basis::from_matrix(m, format!("search {}", fixed_count + i)).expect("square matrix"));
    }
    let dim = cfg.dim;
    let best_set = MubSet::new(dim, bases, Method::Search, None);
    SearchReport {
        dim,
        target_bases: cfg.target_bases,
        seed: cfg.seed,
        tolerance: cfg.tolerance,
        best_residual: best.value,
        best_restart: best.restart,
        restart_residuals,
        iterations,
        success: best.value <= cfg.tolerance,
        best_set,
    }
}

struct BestCandidate {
    value: f64,
    restart: u32,
    mats: Vec<CMat>,
}

/// Multi-restart search for `cfg.target_bases` mutually unbiased bases in
/// dimension `cfg.dim`. Basis 0 is the computational basis and never moves;
/// each restart initializes the k-1 free bases from `cfg.init` (when given)
/// plus fresh Haar-like draws, then descends. The best restart wins, with
/// ties resolved toward the earlier restart so the outcome is independent of
/// execution order.
pub fn search(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    let d = cfg.dim;
    let seeded: Vec<CMat> = match &cfg.init {
        Some(set) => set
            .bases()
            .iter()
            .skip(1) // the set's own computational basis
            .take(cfg.target_bases - 1)
            .map(|b| b.as_matrix())
            .collect(),
        None => Vec::new(),
    };
    let fixed = vec![CMat::identity(d)];

    let mut best: Option<BestCandidate> = None;
    let mut restart_residuals = Vec::with_capacity(cfg.restarts as usize);
    let mut iterations = Vec::with_capacity(cfg.restarts as usize);
    for r in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, r));
        let mut free = seeded.clone();
        while free.len() < cfg.target_bases - 1 {
            free.push(random_unitary(&mut rng, d));
        }
        let (mats, value, iters) = descend(&fixed, free, cfg);
        restart_residuals.push(value);
        iterations.push(iters);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(BestCandidate { value, restart: r, mats });
        }
    }
    let best = best.expect("at least one restart");
    Ok(report_from(
        cfg,
        vec![Basis::computational(d)],
        best,
        restart_residuals,
        iterations,
    ))
}

/// Holds every basis of `base_set` fixed and optimizes one additional basis.
/// The reported residual is restricted to pairs involving the new basis,
/// which is the full objective here since the fixed set is already mutually
/// unbiased. The base set must verify as a MUB set first.
pub fn extend_search(base_set: &MubSet, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    if base_set.dim() != cfg.dim {
        return Err(SearchError::DimMismatch { left: base_set.dim(), right: cfg.dim });
    }
    let verified = check::check_mub_set(base_set, check::TOL_SEARCH)
        .map_err(|e| SearchError::InvalidConfig(e.to_string()))?;
    if !verified.pass {
        return Err(SearchError::InvalidConfig(
            "base set does not verify as a MUB set".to_string(),
        ));
    }
    let d = cfg.dim;
    let fixed: Vec<CMat> = base_set.bases().iter().map(|b| b.as_matrix()).collect();

    let mut best: Option<BestCandidate> = None;
    let mut restart_residuals = Vec::with_capacity(cfg.restarts as usize);
    let mut iterations = Vec::with_capacity(cfg.restarts as usize);
    for r in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, r));
        let free = vec![random_unitary(&mut rng, d)];
        let (mats, value, iters) = descend(&fixed, free, cfg);
        restart_residuals.push(value);
        iterations.push(iters);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(BestCandidate { value, restart: r, mats });
        }
    }
    let best = best.expect("at least one restart");
    Ok(report_from(
        cfg,
        base_set.bases().to_vec(),
        best,
        restart_residuals,
        iterations,
    ))
}
