//! Quantum phase operators: Hermitian matrices with an assigned phase
//! spectrum whose eigenvectors are a given basis.
//!
//! Theta = sum_k theta_k |v_k><v_k| for an orthonormal basis {v_k} and
//! distinct real phases theta_k. Distinctness is what makes the basis
//! recoverable from the operator; the default spectrum theta_k = 2 pi k / d
//! is equally spaced and configurable.

use thiserror::Error;

use crate::check;
use crate::linalg::{self, Basis, CMat, LinalgError};
use crate::mub::MubSet;
use num_complex::Complex64;

/// Minimum allowed gap between assigned phases.
const SPECTRUM_GAP: f64 = 1e-12;
/// Agreement required between recovered eigenvalues and assigned phases.
const EIGENVALUE_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error("spectrum values {i} and {j} coincide; the basis would not be recoverable")]
    DegenerateSpectrum { i: usize, j: usize },
    #[error("basis is not orthonormal (max deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },
    #[error("spectrum has {got} values, basis dimension is {expected}")]
    SpectrumLength { expected: usize, got: usize },
    #[error("linear algebra error: {0}")]
    Linalg(#[from] LinalgError),
}

/// A Hermitian operator with assigned phase spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOperator {
    dim: usize,
    matrix: CMat,
    spectrum: Vec<f64>,
    source_basis_label: String,
}

impl PhaseOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// The assigned phases theta_0 .. theta_{d-1}, in basis-vector order.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn source_basis_label(&self) -> &str {
        &self.source_basis_label
    }
}

/// The default spectrum theta_k = 2 pi k / d.
pub fn default_spectrum(d: usize) -> Vec<f64> {
    (0..d)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / d as f64)
        .collect()
}

/// Builds Theta = sum_k theta_k |v_k><v_k|. The basis must be orthonormal
/// and the spectrum values pairwise distinct; omitting the spectrum selects
/// the default equally spaced phases.
pub fn phase_operator(basis: &Basis, spectrum: Option<Vec<f64>>) -> Result<PhaseOperator, PhaseError> {
    let d = basis.dim();
    let ortho = check::check_orthonormal(basis, linalg::DEFAULT_TOL);
    if !ortho.pass {
        return Err(PhaseError::NotOrthonormal { deviation: ortho.max_deviation });
    }
    let spectrum = spectrum.unwrap_or_else(|| default_spectrum(d));
    if spectrum.len() != d {
        return Err(PhaseError::SpectrumLength { expected: d, got: spectrum.len() });
    }
    for i in 0..d {
        for j in i + 1..d {
            if (spectrum[i] - spectrum[j]).abs() < SPECTRUM_GAP {
                return Err(PhaseError::DegenerateSpectrum { i, j });
            }
        }
    }
    let mut matrix = CMat::zeros(d, d);
    for (theta, v) in spectrum.iter().zip(basis.vectors()) {
        matrix.add_outer(v, Complex64::new(*theta, 0.0));
    }
    Ok(PhaseOperator {
        dim: d,
        matrix,
        spectrum,
        source_basis_label: basis.label().to_string(),
    })
}

/// One phase operator per basis of a MUB set, all with the default spectrum;
/// labels carry the basis index.
pub fn mub_phase_operators(set: &MubSet) -> Result<Vec<PhaseOperator>, PhaseError> {
    set.bases()
        .iter()
        .enumerate()
        .map(|(a, basis)| {
            let mut op = phase_operator(basis, None)?;
            op.source_basis_label = format!("a={a} ({})", basis.label());
            Ok(op)
        })
        .collect()
}

/// One eigenvector-to-basis-vector match inside a round-trip report.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundtripMatch {
    pub eigen_index: usize,
    pub basis_index: usize,
    pub overlap: f64,
    pub eigenvalue: f64,
    pub assigned_theta: f64,
}

/// Outcome of diagonalizing a phase operator and matching eigenvectors back
/// to the originating basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundtripReport {
    pub matches: Vec<RoundtripMatch>,
    /// Every eigenvector claimed a distinct basis vector.
    pub bijection: bool,
    /// All matched overlaps reached 1 - tol.
    pub overlaps_pass: bool,
    /// Recovered eigenvalues agree with the assigned phases.
    pub eigenvalues_pass: bool,
    pub pass: bool,
}

/// Diagonalizes the operator and matches each eigenvector to an original
/// basis vector by maximal overlap (greedy; valid because a passing
/// round-trip has all overlaps near 1). Passes iff the matching is a
/// bijection with every overlap >= 1 - tol and eigenvalue agreement.
pub fn roundtrip_check(
    op: &PhaseOperator,
    original: &Basis,
    tol: f64,
) -> Result<RoundtripReport, PhaseError> {
    let (eigenvalues, eigenvectors) = linalg::hermitian_spectral(op.matrix())?;
    let mut used = vec![false; original.len()];
    let mut matches = Vec::with_capacity(eigenvalues.len());
    let mut bijection = true;
    let mut overlaps_pass = true;
    let mut eigenvalues_pass = true;

    for (ei, (lambda, v)) in eigenvalues.iter().zip(eigenvectors.vectors()).enumerate() {
        let (bi, overlap) = original
            .vectors()
            .iter()
            .enumerate()
            .map(|(bi, w)| (bi, linalg::overlap_mag(v, w).expect("dims agree")))
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite overlaps"))
            .expect("non-empty basis");
        if used[bi] {
            bijection = false;
        }
        used[bi] = true;
        if overlap < 1.0 - tol {
            overlaps_pass = false;
        }
        let assigned = op.spectrum().get(bi).copied().unwrap_or(f64::NAN);
        if (lambda - assigned).abs() > EIGENVALUE_TOL {
            eigenvalues_pass = false;
        }
        matches.push(RoundtripMatch {
            eigen_index: ei,
            basis_index: bi,
            overlap,
            eigenvalue: *lambda,
            assigned_theta: assigned,
        });
    }
    let pass = bijection && overlaps_pass && eigenvalues_pass;
    Ok(RoundtripReport { matches, bijection, overlaps_pass, eigenvalues_pass, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::linalg::CVec;
    use crate::mub;

    #[test]
    fn computational_operator_is_diagonal() {
        let op = phase_operator(&Basis::computational(2), None).unwrap();
        let m = op.matrix();
        assert!((m.get(0, 0) - Complex64::new(0.0, 0.0)).norm() < 1e-15);
        assert!((m.get(1, 1) - Complex64::new(std::f64::consts::PI, 0.0)).norm() < 1e-15);
        assert!(m.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn fourier2_operator_matches_hand_expansion() {
        // 0*|+><+| + pi*|-><-| = (pi/2) [[1, -1], [-1, 1]].
        let op = phase_operator(&mub::fourier_basis(2), None).unwrap();
        let h = std::f64::consts::PI / 2.0;
        let expect = [[h, -h], [-h, h]];
        for (i, row) in expect.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert!(
                    (op.matrix().get(i, j) - Complex64::new(*want, 0.0)).norm() < 1e-12,
                    "({i},{j})"
                );
            }
        }
    }

    #[test]
    fn degenerate_spectrum_rejected() {
        let err = phase_operator(&Basis::computational(3), Some(vec![0.0, 0.0, 1.0])).unwrap_err();
        assert_eq!(err, PhaseError::DegenerateSpectrum { i: 0, j: 1 });
        let err = phase_operator(&Basis::computational(3), Some(vec![0.0, 1.0])).unwrap_err();
        assert_eq!(err, PhaseError::SpectrumLength { expected: 3, got: 2 });
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let skew = Basis::new(
            vec![CVec::basis_state(2, 0), CVec::basis_state(2, 0)],
            "skew",
        )
        .unwrap();
        assert!(matches!(
            phase_operator(&skew, None),
            Err(PhaseError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn operators_are_hermitian_with_trace_identity() {
        let set = mub::wootters_fields_mubs(&FieldSpec::new(3, 1).unwrap()).unwrap();
        let ops = mub_phase_operators(&set).unwrap();
        assert_eq!(ops.len(), 4);
        for op in &ops {
            assert!(op.matrix().is_hermitian(1e-10));
            let spectrum_sum: f64 = op.spectrum().iter().sum();
            assert!((op.matrix().trace().re - spectrum_sum).abs() < 1e-8);
            assert!(op.matrix().trace().im.abs() < 1e-10);
        }
    }

    #[test]
    fn qubit_operators_do_not_commute_with_computational_one() {
        let ops = mub_phase_operators(&mub::qubit_mubs()).unwrap();
        assert_eq!(ops.len(), 3);
        let a = ops[0].matrix();
        for op in &ops[1..] {
            let b = op.matrix();
            let comm = a.mul(b).sub(&b.mul(a));
            assert!(comm.max_abs() > 0.1, "{}", op.source_basis_label());
        }
    }

    #[test]
    fn roundtrip_recovers_fourier3() {
        let basis = mub::fourier_basis(3);
        let op = phase_operator(&basis, None).unwrap();
        let report = roundtrip_check(&op, &basis, 1e-6).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn roundtrip_fails_against_unrelated_basis() {
        let op = phase_operator(&mub::fourier_basis(3), None).unwrap();
        let report = roundtrip_check(&op, &Basis::computational(3), 1e-6).unwrap();
        assert!(!report.pass);
        assert!(!report.overlaps_pass);
    }

    #[test]
    fn roundtrip_trivial_in_d1() {
        let basis = Basis::computational(1);
        let op = phase_operator(&basis, None).unwrap();
        let report = roundtrip_check(&op, &basis, 1e-6).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn roundtrip_passes_for_every_constructed_set() {
        let sets = vec![
            mub::qubit_mubs(),
            mub::wootters_fields_mubs(&FieldSpec::new(3, 1).unwrap()).unwrap(),
            mub::clock_shift_mubs(5).unwrap(),
            mub::wootters_fields_mubs(&FieldSpec::new(3, 2).unwrap()).unwrap(),
        ];
        for set in &sets {
            let ops = mub_phase_operators(set).unwrap();
            for (op, basis) in ops.iter().zip(set.bases()) {
                let report = roundtrip_check(op, basis, 1e-6).unwrap();
                assert!(report.pass, "d={} {}", set.dim(), basis.label());
            }
        }
    }

    #[test]
    fn exponential_of_operator_is_unitary() {
        let set = mub::qubit_mubs();
        for basis in set.bases() {
            let op = phase_operator(basis, None).unwrap();
            let u = linalg::hermitian_map_spectrum(op.matrix(), |l| {
                Complex64::from_polar(1.0, l)
            })
            .unwrap();
            assert!(u.unitary_deviation() < 1e-8);
        }
    }
}
