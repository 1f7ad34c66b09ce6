//! Mutually unbiased bases: exact constructions, verification, the
//! finite-geometry counterpart, phase operators, and numerical search.
//!
//! Two orthonormal bases of a d-dimensional Hilbert space are mutually
//! unbiased when every cross-basis overlap has magnitude 1/sqrt(d). At most
//! d + 1 bases can be pairwise unbiased, and the bound is attained in every
//! prime-power dimension. This crate builds those maximal sets from finite
//! fields, checks them (and anything else you hand it), constructs the
//! projective planes living on the same arithmetic, associates quantum phase
//! operators to bases, and runs a deterministic gradient search for MUB sets
//! in dimensions where no construction is known.
//!
//! Modules:
//!
//! * [`gf`] — exact GF(p^m) arithmetic: field ops, trace, Euclidean
//!   division, canonical element indexing.
//! * [`linalg`] — dense complex vectors/matrices, tensor products, the
//!   Jacobi eigensolver, order-p eigenbasis extraction, polar retraction.
//! * [`mub`] — the constructions: Fourier pair, qubit triple, clock/shift
//!   eigenbases, the Galois-field family, tensor combinations, and the
//!   characteristic-2 failure witness.
//! * [`check`] — unbiasedness/orthonormality/SIC verification and the
//!   1 + min(p_i^e_i) .. d+1 bounds.
//! * [`geom`] — projective planes over GF(q), duality, affinization, axiom
//!   checks, and the side-by-side correspondence report.
//! * [`phase`] — Hermitian phase operators with assigned spectra and the
//!   eigenbasis round-trip.
//! * [`search`] — seeded multi-restart Riemannian gradient descent for
//!   k mutually unbiased bases in dimension d.
//!
//! ```
//! use mubs_core::{check, gf::FieldSpec, mub};
//!
//! let field = FieldSpec::new(3, 2).unwrap();
//! let set = mub::wootters_fields_mubs(&field).unwrap();
//! assert_eq!(set.len(), 10); // d + 1 bases in d = 9
//! let report = check::check_mub_set(&set, 1e-9).unwrap();
//! assert!(report.pass);
//! ```

pub mod check;
pub mod geom;
pub mod gf;
pub mod linalg;
pub mod mub;
pub mod phase;
pub mod search;

pub use check::{BoundsReport, CheckError, MubReport, SicReport};
pub use gf::{FieldSpec, GfElement, GfError};
pub use linalg::{Basis, CMat, CVec, LinalgError};
pub use mub::{Method, MubError, MubSet};
pub use phase::{PhaseError, PhaseOperator};
pub use search::{SearchConfig, SearchError, SearchReport};
