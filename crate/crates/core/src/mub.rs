//! Constructions of mutually unbiased bases.
//!
//! Four routes are implemented:
//!
//! * the Fourier pair in any dimension,
//! * the qubit triple from the Hadamard matrix and its quarter-turn
//!   amendment,
//! * the clock/shift eigenbasis family for odd primes,
//! * the Galois-field quadratic-exponent family for odd prime powers.
//!
//! A fifth, the tensor combination, glues verified sets in coprime
//! dimensions and realizes the 1 + min(p_i^e_i) lower bound constructively.
//! The module also evaluates the quadratic character sums whose magnitudes
//! decide unbiasedness, and tabulates their collapse in characteristic two,
//! where the field route produces no unbiased pair at all.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::gf::{self, FieldSpec, GfElement, GfError};
use crate::linalg::{self, Basis, CVec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MubError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is outside the odd-prime clock/shift family; the qubit triple covers dimension 2")]
    EvenPrime,
    #[error("the Galois-field construction is invalid in characteristic two")]
    CharacteristicTwo,
    #[error("tensor combination needs at least one basis on each side")]
    EmptyInput,
    #[error("field error: {0}")]
    Field(#[from] GfError),
    #[error("linear algebra error: {0}")]
    Linalg(#[from] linalg::LinalgError),
}

/// Provenance tag of a [`MubSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fourier,
    Qubit,
    ClockShift,
    WoottersFields,
    Tensor,
    Search,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Fourier => "fourier",
            Method::Qubit => "qubit",
            Method::ClockShift => "clock-shift",
            Method::WoottersFields => "wootters-fields",
            Method::Tensor => "tensor",
            Method::Search => "search",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Method, String> {
        match s {
            "fourier" => Ok(Method::Fourier),
            "qubit" => Ok(Method::Qubit),
            "clock-shift" => Ok(Method::ClockShift),
            "wootters-fields" | "wf" => Ok(Method::WoottersFields),
            "tensor" => Ok(Method::Tensor),
            "search" => Ok(Method::Search),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

/// An ordered collection of bases in one dimension, bases[0] being the
/// computational basis by convention for every construction here.
///
/// More than d+1 bases can never be mutually unbiased; the constructors in
/// this module stay at or below the bound by design, and the checker flags
/// any set that exceeds it as a hard failure. Candidate sets produced by the
/// numerical search may carry extra, not-yet-unbiased bases.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    dim: usize,
    bases: Vec<Basis>,
    method: Method,
    field: Option<FieldSpec>,
}

impl MubSet {
    pub fn new(dim: usize, bases: Vec<Basis>, method: Method, field: Option<FieldSpec>) -> MubSet {
        assert!(!bases.is_empty(), "a MUB set holds at least one basis");
        for b in &bases {
            assert_eq!(b.dim(), dim, "all bases share the set dimension");
        }
        MubSet { dim, bases, method, field }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self, i: usize) -> &Basis {
        &self.bases[i]
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn field(&self) -> Option<&FieldSpec> {
        self.field.as_ref()
    }

    /// True when the basis count respects the d+1 ceiling.
    pub fn within_bound(&self) -> bool {
        self.bases.len() <= self.dim + 1
    }
}

/// The Fourier basis: vector k has amplitude w^(n k) / sqrt(d) at position n,
/// w = exp(2 pi i / d). Exponents are reduced mod d before exponentiation.
pub fn fourier_basis(d: usize) -> Basis {
    assert!(d >= 1);
    let roots = linalg::unit_roots(d);
    let scale = 1.0 / (d as f64).sqrt();
    let vectors: Vec<CVec> = (0..d)
        .map(|k| {
            CVec::new(
                (0..d)
                    .map(|n| roots[n * k % d] * scale)
                    .collect(),
            )
        })
        .collect();
    Basis::new(vectors, "fourier").expect("square by construction")
}

/// The computational/Fourier pair, a valid 2-basis MUB set in any dimension.
pub fn fourier_pair(d: usize) -> MubSet {
    let bases = vec![Basis::computational(d), fourier_basis(d)];
    let set = MubSet::new(d, bases, Method::Fourier, None);
    debug_assert!(set.within_bound());
    set
}

/// The maximal qubit triple: computational, Fourier, and the basis read off
/// the rows of (1/sqrt 2) [[1, i], [1, -i]] — the quarter-turn amendment of
/// the Hadamard matrix. The three are the eigenbases of the Pauli z, x, y.
pub fn qubit_mubs() -> MubSet {
    let s = 1.0 / 2f64.sqrt();
    let b2 = Basis::new(
        vec![
            CVec::new(vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)]),
            CVec::new(vec![Complex64::new(s, 0.0), Complex64::new(0.0, -s)]),
        ],
        "HS",
    )
    .expect("two qubit vectors");
    let bases = vec![Basis::computational(2), fourier_basis(2), b2];
    let set = MubSet::new(2, bases, Method::Qubit, None);
    debug_assert!(set.within_bound());
    set
}

/// The clock/shift family for an odd prime p: the computational basis (clock
/// eigenbasis) followed by the eigenbases of X Z^k for k = 0..p-1. For odd p
/// each X Z^k satisfies M^p = I exactly, so the group-averaged projectors
/// apply. p = 2 is rejected because (XZ)^2 = -I; the qubit triple covers it.
pub fn clock_shift_mubs(p: u64) -> Result<MubSet, MubError> {
    if !gf::is_prime(p) {
        return Err(MubError::NotPrime(p));
    }
    if p == 2 {
        return Err(MubError::EvenPrime);
    }
    let d = p as usize;
    let shift = linalg::CMat::shift(d);
    let clock = linalg::CMat::clock(d);
    let mut bases = vec![Basis::computational(d).with_label("eig Z")];
    let mut zk = linalg::CMat::identity(d);
    for k in 0..p {
        let m = shift.mul(&zk);
        let basis = linalg::unitary_order_p_eigenbasis(&m, p, Complex64::new(1.0, 0.0))?
            .with_label(format!("eig XZ^{k}"));
        bases.push(basis);
        zk = zk.mul(&clock);
    }
    let set = MubSet::new(d, bases, Method::ClockShift, None);
    debug_assert!(set.within_bound());
    Ok(set)
}

fn omega_p(field: &FieldSpec) -> Vec<Complex64> {
    linalg::unit_roots(field.p() as usize)
}

/// The quadratic exponent tr[n (a n + b)] as a residue mod p.
fn quad_exponent(n: &GfElement, a: &GfElement, b: &GfElement) -> Result<u64, GfError> {
    let an = a.mul(n)?;
    let an_b = an.add(b)?;
    Ok(n.mul(&an_b)?.trace())
}

/// The Galois-field family over GF(p^m) with p odd: the computational basis
/// plus, for each a in index order, the basis whose vector b has amplitude
/// w_p^(tr[n (a n + b)]) / sqrt(d) at position n. Yields d + 1 bases, the
/// maximum possible.
pub fn wootters_fields_mubs(field: &FieldSpec) -> Result<MubSet, MubError> {
    if field.p() == 2 {
        return Err(MubError::CharacteristicTwo);
    }
    let d = field.order() as usize;
    let roots = omega_p(field);
    let scale = 1.0 / (d as f64).sqrt();
    let elements: Vec<GfElement> = field.elements().collect();

    let mut bases = Vec::with_capacity(d + 1);
    bases.push(Basis::computational(d));
    for (ai, a) in elements.iter().enumerate() {
        let mut vectors = Vec::with_capacity(d);
        for b in &elements {
            let amps: Result<Vec<Complex64>, GfError> = elements
                .iter()
                .map(|n| Ok(roots[quad_exponent(n, a, b)? as usize] * scale))
                .collect();
            vectors.push(CVec::new(amps?));
        }
        bases.push(Basis::new(vectors, format!("WF a={ai}"))?);
    }
    let set = MubSet::new(d, bases, Method::WoottersFields, Some(field.clone()));
    assert!(set.within_bound(), "construction exceeded the d+1 bound");
    Ok(set)
}

/// The character sum S(a, b) = sum_n w_p^(tr[n (a n + b)]). Its magnitude is
/// sqrt(d) exactly when the basis pair (a-family, Fourier family) is
/// unbiased, d when the exponent vanishes identically, and 0 when the
/// exponent is a nonzero linear functional.
pub fn gauss_sum(a: &GfElement, b: &GfElement) -> Result<Complex64, MubError> {
    let field = a.field().clone();
    let roots = omega_p(&field);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in field.elements() {
        sum += roots[quad_exponent(&n, a, b)? as usize];
    }
    Ok(sum)
}

/// One entry of the characteristic-two table: |S(a, b)| at indices (a, b).
#[derive(Debug, Clone, PartialEq)]
pub struct Char2Entry {
    pub a_index: u64,
    pub b_index: u64,
    pub magnitude: f64,
}

/// Exhaustive tabulation of |S(a, b)| over a characteristic-2 field.
#[derive(Debug, Clone, PartialEq)]
pub struct Char2Report {
    pub order: u64,
    pub entries: Vec<Char2Entry>,
    /// Every magnitude is 0 or d (within 1e-9).
    pub all_zero_or_d: bool,
    /// No pair with a != 0 reaches the unbiasedness value sqrt(d).
    pub no_unbiased_pair: bool,
}

impl Char2Report {
    pub fn pass(&self) -> bool {
        self.no_unbiased_pair
    }
}

/// Tabulates |S(a, b)| over all d^2 pairs of a characteristic-2 field and
/// asserts that no pair with a != 0 attains sqrt(d): the field route cannot
/// produce an unbiased pair in characteristic two. Observed magnitudes are
/// only 0 or d.
pub fn char2_failure_witness(field: &FieldSpec) -> Result<Char2Report, MubError> {
    assert_eq!(field.p(), 2, "witness is defined for characteristic two");
    let d = field.order();
    let sqrt_d = (d as f64).sqrt();
    let mut entries = Vec::with_capacity((d * d) as usize);
    let mut all_zero_or_d = true;
    let mut no_unbiased_pair = true;
    for a in field.elements() {
        for b in field.elements() {
            let magnitude = gauss_sum(&a, &b)?.norm();
            if magnitude.min((magnitude - d as f64).abs()) > 1e-9 {
                all_zero_or_d = false;
            }
            if !a.is_zero() && (magnitude - sqrt_d).abs() <= 1e-9 {
                no_unbiased_pair = false;
            }
            entries.push(Char2Entry { a_index: a.index(), b_index: b.index(), magnitude });
        }
    }
    Ok(Char2Report { order: d, entries, all_zero_or_d, no_unbiased_pair })
}

/// Combines MUB sets in dimensions d1 and d2 into min(len1, len2) bases in
/// dimension d1*d2, basis i being the tensor of the two i-th bases. Tensoring
/// matching indices preserves pairwise unbiasedness, and pairing the two
/// computational bases keeps the convention bases[0] = computational.
pub fn tensor_mubs(s1: &MubSet, s2: &MubSet) -> Result<MubSet, MubError> {
    if s1.is_empty() || s2.is_empty() {
        return Err(MubError::EmptyInput);
    }
    let count = s1.len().min(s2.len());
    let bases: Vec<Basis> = (0..count)
        .map(|i| linalg::tensor(s1.basis(i), s2.basis(i)))
        .collect();
    let set = MubSet::new(s1.dim() * s2.dim(), bases, Method::Tensor, None);
    debug_assert!(set.within_bound());
    Ok(set)
}
