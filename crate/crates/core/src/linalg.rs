//! Dense complex vectors, matrices, and orthonormal bases.
//!
//! Everything here is plain `Vec<Complex64>` storage with value semantics:
//! no sharing, no views. Sizes stay at desk scale (d <= 64), so the
//! eigensolver is a cyclic Jacobi sweep and the order-p eigenbasis extraction
//! uses exact group-averaged projectors instead of a general nonsymmetric
//! solver.

use num_complex::Complex64;
use thiserror::Error;

/// Default absolute tolerance on magnitudes.
pub const DEFAULT_TOL: f64 = 1e-9;

const JACOBI_OFF_THRESHOLD: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;
const HERMITIAN_TOL: f64 = 1e-10;
const ORDER_P_TOL: f64 = 1e-9;
const PHASE_PIVOT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("matrix is not order {p}: max |M^{p} - phase*I| = {deviation:.3e}")]
    NotOrderP { p: u64, deviation: f64 },
    #[error("projector for root {root_index} has rank != 1 (trace {trace:.6})")]
    DegenerateProjector { root_index: usize, trace: f64 },
    #[error("matrix is not Hermitian: max |M - M^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi sweep budget exhausted ({0} sweeps)")]
    NoConvergence(usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("polar factor undefined: singular value {0:.3e} too close to zero")]
    Singular(f64),
    #[error("a basis in dimension {dim} needs {dim} vectors, got {got}")]
    WrongVectorCount { dim: usize, got: usize },
}

/// A complex vector of fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec {
    amps: Vec<Complex64>,
}

impl CVec {
    pub fn new(amps: Vec<Complex64>) -> CVec {
        assert!(!amps.is_empty(), "zero-dimensional vector");
        CVec { amps }
    }

    pub fn zeros(dim: usize) -> CVec {
        CVec::new(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// The computational basis state |n>.
    pub fn basis_state(dim: usize, n: usize) -> CVec {
        assert!(n < dim);
        let mut v = CVec::zeros(dim);
        v.amps[n] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> CVec {
        CVec::new(self.amps.iter().map(|a| a * c).collect())
    }

    pub fn normalized(&self) -> CVec {
        self.scale(Complex64::new(1.0 / self.norm(), 0.0))
    }

    pub fn sub(&self, rhs: &CVec) -> CVec {
        assert_eq!(self.dim(), rhs.dim());
        CVec::new(self.amps.iter().zip(&rhs.amps).map(|(a, b)| a - b).collect())
    }

    /// Rescales by a global phase so the first amplitude above the pivot
    /// threshold is real positive. Deterministic output for file-level
    /// reproducibility.
    pub fn phase_canonical(&self) -> CVec {
        for a in &self.amps {
            if a.norm() > PHASE_PIVOT_THRESHOLD {
                return self.scale(a.conj() / a.norm());
            }
        }
        self.clone()
    }
}

/// Hermitian inner product, conjugate-linear in the first argument.
pub fn inner(a: &CVec, b: &CVec) -> Result<Complex64, LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// |<a|b>|.
pub fn overlap_mag(a: &CVec, b: &CVec) -> Result<f64, LinalgError> {
    Ok(inner(a, b)?.norm())
}

/// Kronecker product; amplitude of |i>|j> lands at index i*dim(v) + j.
pub fn tensor_vec(u: &CVec, v: &CVec) -> CVec {
    let mut amps = Vec::with_capacity(u.dim() * v.dim());
    for a in &u.amps {
        for b in &v.amps {
            amps.push(a * b);
        }
    }
    CVec::new(amps)
}

/// A dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> CMat {
        CMat { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// The shift operator X: X|n> = |n+1 mod d>.
    pub fn shift(d: usize) -> CMat {
        let mut m = CMat::zeros(d, d);
        for n in 0..d {
            m.set((n + 1) % d, n, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// The clock operator Z = diag(1, w, w^2, ...), w = exp(2 pi i / d).
    pub fn clock(d: usize) -> CMat {
        let mut m = CMat::zeros(d, d);
        for (n, root) in unit_roots(d).into_iter().enumerate() {
            m.set(n, n, root);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn from_columns(cols: &[CVec]) -> CMat {
        assert!(!cols.is_empty());
        let rows = cols[0].dim();
        let mut m = CMat::zeros(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.dim(), rows);
            for i in 0..rows {
                m.set(i, j, v.amps[i]);
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> CVec {
        CVec::new((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn columns(&self) -> Vec<CVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn dagger(&self) -> CMat {
        let mut m = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CVec) -> CVec {
        assert_eq!(self.cols, v.dim());
        let mut out = CVec::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v.amps[j];
            }
            out.amps[i] = acc;
        }
        out
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Integer matrix power by repeated multiplication.
    pub fn pow(&self, k: u64) -> CMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = CMat::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest entry magnitude (max "norm").
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        self.sub(rhs).max_abs()
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Max deviation of M^dag M from the identity.
    pub fn unitary_deviation(&self) -> f64 {
        self.dagger().mul(self).max_abs_diff(&CMat::identity(self.cols))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.rows == self.cols && self.unitary_deviation() <= tol
    }

    /// Max deviation of M from M^dag.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.rows == self.cols && self.hermitian_deviation() <= tol
    }

    /// |v><v| added in place, scaled by `w`.
    pub fn add_outer(&mut self, v: &CVec, w: Complex64) {
        assert_eq!(self.rows, v.dim());
        assert_eq!(self.cols, v.dim());
        for i in 0..self.rows {
            for j in 0..self.cols {
                let t = self.get(i, j) + w * v.amps[i] * v.amps[j].conj();
                self.set(i, j, t);
            }
        }
    }
}

/// The d-th roots of unity w^0 .. w^(d-1), w = exp(2 pi i / d).
pub fn unit_roots(d: usize) -> Vec<Complex64> {
    (0..d)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / d as f64))
        .collect()
}

/// An ordered orthonormal set of d vectors spanning dimension d.
///
/// The label records provenance ("computational", "WF a=2", "eig XZ^3", ...).
/// Constructors do not verify orthonormality; the checker module does, and
/// every construction in this crate is orthonormal up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    label: String,
    vectors: Vec<CVec>,
}

impl Basis {
    pub fn new(vectors: Vec<CVec>, label: impl Into<String>) -> Result<Basis, LinalgError> {
        assert!(!vectors.is_empty(), "empty basis");
        let dim = vectors[0].dim();
        for v in &vectors {
            if v.dim() != dim {
                return Err(LinalgError::DimMismatch { left: dim, right: v.dim() });
            }
        }
        if vectors.len() != dim {
            return Err(LinalgError::WrongVectorCount { dim, got: vectors.len() });
        }
        Ok(Basis { label: label.into(), vectors })
    }

    /// The standard basis |0> .. |d-1>.
    pub fn computational(dim: usize) -> Basis {
        let vectors = (0..dim).map(|n| CVec::basis_state(dim, n)).collect();
        Basis { label: "computational".to_string(), vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Basis {
        self.label = label.into();
        self
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &CVec {
        &self.vectors[k]
    }

    /// Matrix whose k-th column is the k-th basis vector.
    pub fn as_matrix(&self) -> CMat {
        CMat::from_columns(&self.vectors)
    }

    pub fn from_matrix(m: &CMat, label: impl Into<String>) -> Result<Basis, LinalgError> {
        if m.rows() != m.cols() {
            return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        Basis::new(m.columns(), label)
    }
}

/// Tensor product of two bases; vector (i, j) lands at position i*d2 + j.
pub fn tensor(a: &Basis, b: &Basis) -> Basis {
    let mut vectors = Vec::with_capacity(a.len() * b.len());
    for u in a.vectors() {
        for v in b.vectors() {
            vectors.push(tensor_vec(u, v));
        }
    }
    Basis {
        label: format!("{} * {}", a.label(), b.label()),
        vectors,
    }
}

/// Eigenbasis of a unitary M with M^p = phase * I, via group-averaged
/// projectors P = (1/p) sum_j lambda^(-j) M^j for each p-th root lambda of
/// phase. Each projector must have rank one; vectors come out ordered by the
/// root's angle ascending from 0 and phase-canonicalized.
pub fn unitary_order_p_eigenbasis(
    m: &CMat,
    p: u64,
    phase: Complex64,
) -> Result<Basis, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let d = m.rows();
    let pu = p as usize;

    // Precompute M^0 .. M^(p-1) and check M^p = phase * I.
    let mut powers = Vec::with_capacity(pu);
    powers.push(CMat::identity(d));
    for j in 1..pu {
        powers.push(powers[j - 1].mul(m));
    }
    let mp = powers[pu - 1].mul(m);
    let deviation = mp.max_abs_diff(&CMat::identity(d).scale(phase));
    if deviation > ORDER_P_TOL {
        return Err(LinalgError::NotOrderP { p, deviation });
    }

    // The p distinct p-th roots of phase, sorted by angle in [0, 2pi).
    let base_angle = phase.arg() / p as f64;
    let mut roots: Vec<Complex64> = (0..pu)
        .map(|j| {
            Complex64::from_polar(
                1.0,
                base_angle + 2.0 * std::f64::consts::PI * j as f64 / p as f64,
            )
        })
        .collect();
    roots.sort_by(|a, b| {
        angle_in_turn(*a)
            .partial_cmp(&angle_in_turn(*b))
            .expect("angles are finite")
    });

    let inv_p = Complex64::new(1.0 / p as f64, 0.0);
    let mut vectors = Vec::with_capacity(pu);
    for (idx, root) in roots.iter().enumerate() {
        let mut proj = CMat::zeros(d, d);
        let mut w = Complex64::new(1.0, 0.0);
        for mat in powers.iter() {
            proj = proj.add(&mat.scale(w * inv_p));
            w /= root;
        }
        let tr = proj.trace().re;
        if (tr - 1.0).abs() > 1e-6 {
            return Err(LinalgError::DegenerateProjector { root_index: idx, trace: tr });
        }
        // Rank-one extraction: the heaviest column, normalized.
        let col = (0..d)
            .map(|j| proj.column(j))
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).expect("finite norms"))
            .expect("d >= 1");
        let v = col.normalized();
        let mut check = CMat::zeros(d, d);
        check.add_outer(&v, Complex64::new(1.0, 0.0));
        if proj.max_abs_diff(&check) > 1e-6 {
            return Err(LinalgError::DegenerateProjector { root_index: idx, trace: tr });
        }
        vectors.push(v.phase_canonical());
    }
    Basis::new(vectors, "eigenbasis")
}

/// Angle of a unit complex number mapped into [0, 2pi).
fn angle_in_turn(z: Complex64) -> f64 {
    let a = z.arg();
    // Values a hair under 2pi are the wrap-around of 0.
    let a = if a < 0.0 { a + 2.0 * std::f64::consts::PI } else { a };
    if (a - 2.0 * std::f64::consts::PI).abs() < 1e-12 {
        0.0
    } else {
        a
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending with matching phase-canonical eigenvectors;
/// the reconstruction sum lambda_i |v_i><v_i| reproduces M to ~1e-8.
pub fn hermitian_spectral(m: &CMat) -> Result<(Vec<f64>, Basis), LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(LinalgError::NotHermitian { deviation: dev });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = CMat::identity(n);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off_max: f64 = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off_max = off_max.max(a.get(p, q).norm());
            }
        }
        if off_max <= JACOBI_OFF_THRESHOLD {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                let b = apq.norm();
                if b <= JACOBI_OFF_THRESHOLD {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let phase = apq / b; // e^{i phi}
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // 2x2 unitary J = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -s * phase.conj();
                let jqq = c * phase.conj();

                // A <- A J (columns p, q)
                for r in 0..n {
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    a.set(r, p, arp * jpp + arq * jqp);
                    a.set(r, q, arp * jpq + arq * jqq);
                }
                // A <- J^dag A (rows p, q)
                for cix in 0..n {
                    let apc = a.get(p, cix);
                    let aqc = a.get(q, cix);
                    a.set(p, cix, jpp.conj() * apc + jqp.conj() * aqc);
                    a.set(q, cix, jpq.conj() * apc + jqq.conj() * aqc);
                }
                // V <- V J
                for r in 0..n {
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, vrp * jpp + vrq * jqp);
                    v.set(r, q, vrp * jpq + vrq * jqq);
                }
            }
        }
    }
    if !converged {
        // One more look: the final sweep may have finished the job.
        let mut off_max: f64 = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off_max = off_max.max(a.get(p, q).norm());
            }
        }
        if off_max > JACOBI_OFF_THRESHOLD {
            return Err(LinalgError::NoConvergence(JACOBI_MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors: Vec<CVec> = order.iter().map(|&j| v.column(j).phase_canonical()).collect();
    Ok((eigenvalues, Basis::new(vectors, "spectral")?))
}

/// Applies a scalar function to the spectrum of a Hermitian matrix:
/// V f(Lambda) V^dag.
pub fn hermitian_map_spectrum(
    m: &CMat,
    f: impl Fn(f64) -> Complex64,
) -> Result<CMat, LinalgError> {
    let (vals, basis) = hermitian_spectral(m)?;
    let mut out = CMat::zeros(m.rows(), m.cols());
    for (lambda, v) in vals.iter().zip(basis.vectors()) {
        out.add_outer(v, f(*lambda));
    }
    Ok(out)
}

/// The unitary polar factor M (M^dag M)^(-1/2). This is the retraction the
/// search uses to return perturbed bases to the unitary manifold.
pub fn polar_factor(m: &CMat) -> Result<CMat, LinalgError> {
    let h = m.dagger().mul(m);
    let (vals, basis) = hermitian_spectral(&h)?;
    if let Some(&small) = vals.first() {
        if small < 1e-12 {
            return Err(LinalgError::Singular(small));
        }
    }
    let mut inv_sqrt = CMat::zeros(h.rows(), h.cols());
    for (lambda, v) in vals.iter().zip(basis.vectors()) {
        inv_sqrt.add_outer(v, Complex64::new(1.0 / lambda.sqrt(), 0.0));
    }
    Ok(m.mul(&inv_sqrt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn uniform(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn random_vec(rng: &mut ChaCha8Rng, d: usize) -> CVec {
        CVec::new((0..d).map(|_| c(uniform(rng) - 0.5, uniform(rng) - 0.5)).collect())
    }

    #[test]
    fn inner_examples() {
        let e0 = CVec::basis_state(2, 0);
        let e1 = CVec::basis_state(2, 1);
        assert!((overlap_mag(&e0, &e0).unwrap() - 1.0).abs() < 1e-15);
        assert!(overlap_mag(&e0, &e1).unwrap() < 1e-15);
        let plus = CVec::new(vec![c(1.0 / 2f64.sqrt(), 0.0); 2]);
        assert!((overlap_mag(&e0, &plus).unwrap() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        let e3 = CVec::basis_state(3, 0);
        assert!(matches!(inner(&e0, &e3), Err(LinalgError::DimMismatch { .. })));
    }

    #[test]
    fn inner_conjugate_symmetry_and_cauchy_schwarz() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_vec(&mut rng, 5);
            let b = random_vec(&mut rng, 5);
            let ab = inner(&a, &b).unwrap();
            let ba = inner(&b, &a).unwrap();
            assert!((ab - ba.conj()).norm() < 1e-13);
            assert!(ab.norm() <= a.norm() * b.norm() + 1e-12);
        }
    }

    #[test]
    fn tensor_index_convention() {
        let a = CVec::basis_state(2, 0);
        let b = CVec::basis_state(3, 0);
        assert_eq!(tensor_vec(&a, &b), CVec::basis_state(6, 0));
        let a = CVec::basis_state(2, 1);
        let b = CVec::basis_state(3, 2);
        assert_eq!(tensor_vec(&a, &b), CVec::basis_state(6, 5));
    }

    #[test]
    fn tensor_of_orthonormal_bases_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // Random unitary columns via projector trick: start from random
        // vectors and Gram-Schmidt by hand.
        let mut vs: Vec<CVec> = Vec::new();
        while vs.len() < 3 {
            let mut v = random_vec(&mut rng, 3);
            for u in &vs {
                let o = inner(u, &v).unwrap();
                v = v.sub(&u.scale(o));
            }
            if v.norm() > 1e-3 {
                vs.push(v.normalized());
            }
        }
        let b3 = Basis::new(vs, "rand").unwrap();
        let b2 = Basis::computational(2);
        let t = tensor(&b2, &b3);
        assert_eq!(t.dim(), 6);
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j { 1.0 } else { 0.0 };
                let o = overlap_mag(t.vector(i), t.vector(j)).unwrap();
                assert!((o - expect).abs() < 1e-12, "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn clock_eigenbasis_is_computational() {
        let z = CMat::clock(3);
        let basis = unitary_order_p_eigenbasis(&z, 3, c(1.0, 0.0)).unwrap();
        let comp = Basis::computational(3);
        for (v, e) in basis.vectors().iter().zip(comp.vectors()) {
            assert!((overlap_mag(v, e).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_eigenbasis_matches_fourier_up_to_phase() {
        let x = CMat::shift(3);
        let basis = unitary_order_p_eigenbasis(&x, 3, c(1.0, 0.0)).unwrap();
        // Fourier columns built directly from roots of unity.
        let roots = unit_roots(3);
        let fourier: Vec<CVec> = (0..3)
            .map(|k| {
                CVec::new((0..3).map(|n| roots[n * k % 3] / 3f64.sqrt()).collect())
            })
            .collect();
        // Every eigenvector must match exactly one Fourier column with unit
        // overlap, and satisfy the eigen-equation.
        let mut used = [false; 3];
        for v in basis.vectors() {
            let (kbest, obest) = fourier
                .iter()
                .enumerate()
                .map(|(k, f)| (k, overlap_mag(v, f).unwrap()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            assert!((obest - 1.0).abs() < 1e-9, "overlap {obest}");
            assert!(!used[kbest]);
            used[kbest] = true;
            let mv = x.mul_vec(v);
            let lambda = inner(v, &mv).unwrap();
            let dev = mv.sub(&v.scale(lambda)).norm();
            assert!(dev < 1e-9);
        }
    }

    #[test]
    fn shift_clock_product_eigenvectors_are_flat() {
        let m = CMat::shift(5).mul(&CMat::clock(5).pow(2));
        let basis = unitary_order_p_eigenbasis(&m, 5, c(1.0, 0.0)).unwrap();
        let comp = Basis::computational(5);
        for v in basis.vectors() {
            for e in comp.vectors() {
                let o = overlap_mag(v, e).unwrap();
                assert!((o - 1.0 / 5f64.sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn order_two_with_minus_one_phase() {
        // XZ in d=2 squares to -I; eigen-extraction still works with
        // phase = -1.
        let m = CMat::shift(2).mul(&CMat::clock(2));
        let basis = unitary_order_p_eigenbasis(&m, 2, c(-1.0, 0.0)).unwrap();
        for v in basis.vectors() {
            let mv = m.mul_vec(v);
            let lambda = inner(v, &mv).unwrap();
            assert!((lambda.norm() - 1.0).abs() < 1e-12);
            assert!(mv.sub(&v.scale(lambda)).norm() < 1e-12);
        }
    }

    #[test]
    fn order_p_rejects_wrong_order() {
        let z = CMat::clock(4);
        // Z_4^3 != I.
        let err = unitary_order_p_eigenbasis(&z, 3, c(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, LinalgError::NotOrderP { .. }));
    }

    #[test]
    fn order_p_rejects_degenerate_projectors() {
        // I (x) Z_2 has order 2 but each eigenvalue has multiplicity 2.
        let z2 = CMat::clock(2);
        let mut m = CMat::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                let v = z2.get(i, j);
                m.set(i, j, v);
                m.set(i + 2, j + 2, v);
            }
        }
        let err = unitary_order_p_eigenbasis(&m, 2, c(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, LinalgError::DegenerateProjector { .. }));
    }

    #[test]
    fn projectors_resolve_identity() {
        let m = CMat::shift(7).mul(&CMat::clock(7).pow(3));
        let basis = unitary_order_p_eigenbasis(&m, 7, c(1.0, 0.0)).unwrap();
        let mut sum = CMat::zeros(7, 7);
        for v in basis.vectors() {
            sum.add_outer(v, c(1.0, 0.0));
        }
        assert!(sum.max_abs_diff(&CMat::identity(7)) < 1e-9);
        // Gram matrix is the identity.
        for (i, a) in basis.vectors().iter().enumerate() {
            for (j, b) in basis.vectors().iter().enumerate() {
                let g = inner(a, b).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g.norm() - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn spectral_identity_and_diagonal() {
        let (vals, _) = hermitian_spectral(&CMat::identity(4)).unwrap();
        assert!(vals.iter().all(|&l| (l - 1.0).abs() < 1e-12));

        let mut d = CMat::zeros(3, 3);
        d.set(0, 0, c(2.0, 0.0));
        d.set(1, 1, c(-1.0, 0.0));
        d.set(2, 2, c(0.5, 0.0));
        let (vals, basis) = hermitian_spectral(&d).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 0.5).abs() < 1e-12);
        assert!((vals[2] - 2.0).abs() < 1e-12);
        // Eigenvectors are the permuted computational basis.
        assert!((overlap_mag(basis.vector(0), &CVec::basis_state(3, 1)).unwrap() - 1.0).abs() < 1e-12);
        assert!((overlap_mag(basis.vector(1), &CVec::basis_state(3, 2)).unwrap() - 1.0).abs() < 1e-12);
        assert!((overlap_mag(basis.vector(2), &CVec::basis_state(3, 0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_rejects_non_hermitian() {
        let x = CMat::shift(3);
        assert!(matches!(hermitian_spectral(&x), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn spectral_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for d in [2usize, 3, 5, 8, 16] {
            let mut m = CMat::zeros(d, d);
            for i in 0..d {
                for j in i..d {
                    if i == j {
                        m.set(i, i, c(uniform(&mut rng) - 0.5, 0.0));
                    } else {
                        let z = c(uniform(&mut rng) - 0.5, uniform(&mut rng) - 0.5);
                        m.set(i, j, z);
                        m.set(j, i, z.conj());
                    }
                }
            }
            let (vals, basis) = hermitian_spectral(&m).unwrap();
            let mut rec = CMat::zeros(d, d);
            for (l, v) in vals.iter().zip(basis.vectors()) {
                rec.add_outer(v, c(*l, 0.0));
            }
            assert!(rec.max_abs_diff(&m) < 1e-8, "d = {d}");
            for w in vals.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn polar_factor_restores_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for d in [2usize, 4, 6] {
            // Perturb the Fourier-like unitary made from shift eigenvectors.
            let mut m = CMat::identity(d);
            for i in 0..d {
                for j in 0..d {
                    let noise = c(0.05 * (uniform(&mut rng) - 0.5), 0.05 * (uniform(&mut rng) - 0.5));
                    m.set(i, j, m.get(i, j) + noise);
                }
            }
            let u = polar_factor(&m).unwrap();
            assert!(u.unitary_deviation() < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn basis_shape_errors() {
        let vs = vec![CVec::basis_state(3, 0), CVec::basis_state(3, 1)];
        assert!(matches!(
            Basis::new(vs, "short"),
            Err(LinalgError::WrongVectorCount { dim: 3, got: 2 })
        ));
    }
}
