//! Exact arithmetic in the Galois field GF(p^m).
//!
//! Elements are coefficient vectors over Z_p (coefficient of x^i at position
//! i), reduced modulo a monic irreducible polynomial of degree m. The module
//! provides the field operations, the Frobenius map, the trace down to GF(p),
//! Euclidean division of polynomial representatives, and the canonical
//! index <-> element bijection n = sum_i c_i p^i that fixes the labelling of
//! basis states 0..d-1.
//!
//! Supported sizes are p <= 97 and p^m <= 4096, enough for every dimension
//! the rest of the crate works in.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported characteristic.
pub const MAX_PRIME: u64 = 97;
/// Largest supported field order p^m.
pub const MAX_ORDER: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over Z_{p}")]
    Reducible { p: u64 },
    #[error("modulus has degree {got}, expected {expected}")]
    DegreeMismatch { expected: u32, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("field size {p}^{m} outside the supported range (p <= 97, p^m <= 4096)")]
    TooLarge { p: u64, m: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range for a field of {order} elements")]
    IndexOutOfRange { index: u64, order: u64 },
}

#[derive(Debug, PartialEq, Eq)]
struct FieldInner {
    p: u64,
    m: u32,
    d: u64,
    /// Monic irreducible modulus, constant term first, length m + 1.
    modulus: Vec<u64>,
}

/// A finite field GF(p^m), shared cheaply between its elements.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner == other.inner || Arc::ptr_eq(&self.inner, &other.inner)
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m() == 1 {
            write!(f, "GF({})", self.p())
        } else {
            write!(f, "GF({}^{})", self.p(), self.m())
        }
    }
}

impl FieldSpec {
    /// Creates GF(p^m) with the default modulus: the lexicographically
    /// smallest monic irreducible polynomial of degree m over Z_p,
    /// coefficients compared low-degree-first. The choice is deterministic,
    /// so identical (p, m) always yield identical fields.
    pub fn new(p: u64, m: u32) -> Result<FieldSpec, GfError> {
        Self::check_size(p, m)?;
        let modulus = smallest_irreducible(p, m);
        Ok(FieldSpec {
            inner: Arc::new(FieldInner { p, m, d: p.pow(m), modulus }),
        })
    }

    /// Creates GF(p^m) with an explicit modulus (constant term first).
    /// The modulus must be monic of degree exactly m and irreducible over Z_p.
    pub fn with_modulus(p: u64, m: u32, modulus: &[u64]) -> Result<FieldSpec, GfError> {
        Self::check_size(p, m)?;
        if modulus.len() != m as usize + 1 {
            return Err(GfError::DegreeMismatch { expected: m, got: modulus.len().saturating_sub(1) });
        }
        let reduced: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        if reduced[m as usize] != 1 {
            return Err(GfError::NotMonic);
        }
        if !is_irreducible(&reduced, p) {
            return Err(GfError::Reducible { p });
        }
        Ok(FieldSpec {
            inner: Arc::new(FieldInner { p, m, d: p.pow(m), modulus: reduced }),
        })
    }

    fn check_size(p: u64, m: u32) -> Result<(), GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        if p > MAX_PRIME || m >= 64 || p.checked_pow(m).is_none_or(|d| d > MAX_ORDER) {
            return Err(GfError::TooLarge { p, m });
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    /// The cardinality d = p^m.
    pub fn order(&self) -> u64 {
        self.inner.d
    }

    /// Modulus coefficients, constant term first (length m + 1, monic).
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> GfElement {
        GfElement { field: self.clone(), coeffs: vec![0; self.m() as usize] }
    }

    pub fn one(&self) -> GfElement {
        let mut coeffs = vec![0; self.m() as usize];
        coeffs[0] = 1;
        GfElement { field: self.clone(), coeffs }
    }

    /// The element with canonical index n, via base-p digits of n.
    pub fn element(&self, n: u64) -> Result<GfElement, GfError> {
        if n >= self.order() {
            return Err(GfError::IndexOutOfRange { index: n, order: self.order() });
        }
        let p = self.p();
        let mut coeffs = vec![0; self.m() as usize];
        let mut rest = n;
        for c in coeffs.iter_mut() {
            *c = rest % p;
            rest /= p;
        }
        Ok(GfElement { field: self.clone(), coeffs })
    }

    /// Builds an element from raw coefficients (reduced mod p). The slice
    /// must have exactly m entries.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<GfElement, GfError> {
        if coeffs.len() != self.m() as usize {
            return Err(GfError::DegreeMismatch { expected: self.m(), got: coeffs.len() });
        }
        let p = self.p();
        Ok(GfElement {
            field: self.clone(),
            coeffs: coeffs.iter().map(|&c| c % p).collect(),
        })
    }

    /// Iterates over all d elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GfElement> + '_ {
        (0..self.order()).map(move |n| self.element(n).expect("index in range"))
    }
}

/// An element of GF(p^m): m residues mod p, coefficient of x^i at position i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfElement {
    field: FieldSpec,
    coeffs: Vec<u64>,
}

impl GfElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The canonical index n = sum_i c_i p^i, inverse of [`FieldSpec::element`].
    pub fn index(&self) -> u64 {
        let p = self.field.p();
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn check_same_field(&self, rhs: &GfElement) -> Result<(), GfError> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    /// Field addition: coefficient-wise mod p.
    pub fn add(&self, rhs: &GfElement) -> Result<GfElement, GfError> {
        self.check_same_field(rhs)?;
        let p = self.field.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(GfElement { field: self.field.clone(), coeffs })
    }

    pub fn neg(&self) -> GfElement {
        let p = self.field.p();
        GfElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
        }
    }

    pub fn sub(&self, rhs: &GfElement) -> Result<GfElement, GfError> {
        self.add(&rhs.neg())
    }

    /// Field multiplication: polynomial product reduced mod the modulus.
    pub fn mul(&self, rhs: &GfElement) -> Result<GfElement, GfError> {
        self.check_same_field(rhs)?;
        let p = self.field.p();
        let prod = poly_mul(&self.coeffs, &rhs.coeffs, p);
        let rem = poly_rem(&prod, self.field.modulus(), p);
        Ok(GfElement { field: self.field.clone(), coeffs: fit(rem, self.field.m() as usize) })
    }

    /// Repeated squaring; a^0 = 1 for every a.
    pub fn pow(&self, mut k: u64) -> GfElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(d-2); the unit group has order d - 1.
    pub fn inv(&self) -> Result<GfElement, GfError> {
        if self.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// The trace map down to GF(p): E + E^p + ... + E^(p^(m-1)), returned as
    /// the residue mod p it always equals.
    pub fn trace(&self) -> u64 {
        let p = self.field.p();
        let mut acc = self.clone();
        let mut term = self.clone();
        for _ in 1..self.field.m() {
            term = term.pow(p);
            acc = acc.add(&term).expect("same field");
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace landed outside GF(p)");
        acc.coeffs[0]
    }

    /// Euclidean division of polynomial representatives: self = q * rhs + r
    /// with deg r < deg rhs. Both outputs are again field elements, and the
    /// reconstruction q • rhs ⊕ r = self also holds in the field because the
    /// product never reaches degree m.
    pub fn divmod(&self, rhs: &GfElement) -> Result<(GfElement, GfElement), GfError> {
        self.check_same_field(rhs)?;
        if rhs.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let p = self.field.p();
        let (q, r) = poly_divmod(&self.coeffs, &rhs.coeffs, p);
        let m = self.field.m() as usize;
        Ok((
            GfElement { field: self.field.clone(), coeffs: fit(q, m) },
            GfElement { field: self.field.clone(), coeffs: fit(r, m) },
        ))
    }
}

impl fmt::Display for GfElement {
    /// Polynomial form, highest degree first: "2x^2+x+1", "x", "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// Trial-division primality test; sufficient for the supported range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut k = 3;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

// --- polynomial arithmetic over Z_p (coefficient vectors, constant first) ---

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p for prime p, a != 0.
    let mut base = a % p;
    let mut k = p - 2;
    let mut acc = 1u64;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc
}

fn poly_deg(c: &[u64]) -> Option<usize> {
    c.iter().rposition(|&x| x != 0)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// Remainder of a mod b; b must be nonzero.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    poly_divmod(a, b, p).1
}

/// Long division a = q*b + r with deg r < deg b; b must be nonzero.
fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let lead_inv = mod_inv(b[db], p);
    let mut rem: Vec<u64> = a.to_vec();
    let mut quot = vec![0u64; a.len().max(1)];
    while let Some(dr) = poly_deg(&rem) {
        if dr < db {
            break;
        }
        let factor = rem[dr] * lead_inv % p;
        quot[dr - db] = factor;
        for i in 0..=db {
            let sub = factor * b[i] % p;
            rem[dr - db + i] = (rem[dr - db + i] + p * p - sub) % p;
        }
    }
    (quot, rem)
}

fn fit(mut c: Vec<u64>, m: usize) -> Vec<u64> {
    c.resize(m, 0);
    c.truncate(m);
    c
}

/// True iff the monic polynomial has no monic divisor of degree 1..=deg/2.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = match poly_deg(poly) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    for dd in 1..=deg / 2 {
        let mut divisor = vec![0u64; dd + 1];
        divisor[dd] = 1;
        // Odometer over the dd free coefficients.
        loop {
            if poly_deg(&poly_rem(poly, &divisor, p)).is_none() {
                return false;
            }
            let mut i = 0;
            loop {
                if i == dd {
                    break;
                }
                divisor[i] += 1;
                if divisor[i] < p {
                    break;
                }
                divisor[i] = 0;
                i += 1;
            }
            if i == dd {
                break;
            }
        }
    }
    true
}

/// The lexicographically smallest (coefficients compared low-degree-first)
/// monic irreducible polynomial of degree m over Z_p.
fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    let total = p.pow(m as u32);
    for t in 0..total {
        let mut poly = vec![0u64; m + 1];
        poly[m] = 1;
        let mut rest = t;
        // Digit i of t (most significant first) is the coefficient of x^i,
        // so ascending t enumerates ascending lexicographic order.
        for (i, c) in poly.iter_mut().enumerate().take(m) {
            let weight = p.pow((m - 1 - i) as u32);
            *c = rest / weight;
            rest %= weight;
        }
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over Z_p")
}
