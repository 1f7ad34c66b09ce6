//! Finite projective planes over GF(q), duality, and affinization.
//!
//! Points of PG(2, q) are the nonzero coordinate triples over GF(q) up to
//! scalars, canonicalized so the first nonzero coordinate is 1; lines are the
//! dual triples, and incidence is the vanishing of the bilinear form
//! x·u + y·v + z·w. Deleting one line (the line at infinity) and its points
//! leaves an affine plane of the same order. `check_axioms` verifies the
//! defining properties exhaustively and reports a witness for every
//! violation, and `correspondence_report` tabulates, per dimension, what the
//! toolkit can construct on the basis side and on the plane side.

use std::fmt;

use thiserror::Error;

use crate::check::{self, CheckError};
use crate::gf::{FieldSpec, GfElement, GfError};
use crate::mub::{self, MubError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("structure does not satisfy the projective axioms: {0}")]
    NotProjective(String),
    #[error("line index {index} out of range ({lines} lines)")]
    IndexOutOfRange { index: usize, lines: usize },
    #[error("dimension {0} out of range (2..=64)")]
    OutOfRange(u64),
    #[error("field error: {0}")]
    Field(#[from] GfError),
    #[error("{0}")]
    Mub(#[from] MubError),
    #[error("{0}")]
    Check(#[from] CheckError),
}

/// What a structure claims to be; `check_axioms` tests the matching axiom
/// set. `Raw` declares nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Projective,
    Affine,
    Raw,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Projective => "projective",
            Kind::Affine => "affine",
            Kind::Raw => "raw",
        })
    }
}

/// Points, lines, and incidence, stored as sorted point-index lists per line.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceStructure {
    pub kind: Kind,
    pub order: u64,
    pub point_labels: Vec<String>,
    /// For each line, the sorted indices of the points on it.
    pub lines: Vec<Vec<usize>>,
    /// Parallel classes (line indices), filled in by `affinize`.
    pub classes: Option<Vec<Vec<usize>>>,
}

impl IncidenceStructure {
    pub fn points(&self) -> usize {
        self.point_labels.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    /// Structural sanity of the incidence lists: indices in range, sorted,
    /// no duplicates. Axiom checks assume this.
    pub fn well_formed(&self) -> Result<(), String> {
        for (li, line) in self.lines.iter().enumerate() {
            for w in line.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("line {li} is not sorted/duplicate-free"));
                }
            }
            if let Some(&last) = line.last() {
                if last >= self.points() {
                    return Err(format!("line {li} references point {last} out of range"));
                }
            }
        }
        Ok(())
    }
}

/// The projective plane PG(2, q) over GF(q) by homogeneous coordinates.
pub fn pg2(field: &FieldSpec) -> IncidenceStructure {
    let q = field.order();
    let triples = canonical_triples(field);
    let labels: Vec<String> = triples
        .iter()
        .map(|t| format!("({}:{}:{})", t[0].index(), t[1].index(), t[2].index()))
        .collect();

    let mut lines = Vec::with_capacity(triples.len());
    for line in &triples {
        let mut on_line: Vec<usize> = triples
            .iter()
            .enumerate()
            .filter(|(_, point)| incident(point, line))
            .map(|(i, _)| i)
            .collect();
        on_line.sort_unstable();
        lines.push(on_line);
    }
    IncidenceStructure {
        kind: Kind::Projective,
        order: q,
        point_labels: labels,
        lines,
        classes: None,
    }
}

/// All projective coordinate triples in canonical form (first nonzero
/// coordinate is 1): (1, a, b), then (0, 1, a), then (0, 0, 1).
fn canonical_triples(field: &FieldSpec) -> Vec<[GfElement; 3]> {
    let mut out = Vec::new();
    let one = field.one();
    let zero = field.zero();
    for a in field.elements() {
        for b in field.elements() {
            out.push([one.clone(), a.clone(), b.clone()]);
        }
    }
    for a in field.elements() {
        out.push([zero.clone(), one.clone(), a]);
    }
    out.push([zero.clone(), zero, one]);
    out
}

fn incident(point: &[GfElement; 3], line: &[GfElement; 3]) -> bool {
    let mut acc = point[0].field().zero();
    for (x, u) in point.iter().zip(line) {
        acc = acc.add(&x.mul(u).expect("same field")).expect("same field");
    }
    acc.is_zero()
}

/// Swaps points and lines; the incidence relation transposes. Requires a
/// structure that actually passes the projective axioms.
pub fn dual(s: &IncidenceStructure) -> Result<IncidenceStructure, GeomError> {
    require_projective(s)?;
    let mut lines = vec![Vec::new(); s.points()];
    for (li, line) in s.lines.iter().enumerate() {
        for &pt in line {
            lines[pt].push(li);
        }
    }
    for l in &mut lines {
        l.sort_unstable();
    }
    Ok(IncidenceStructure {
        kind: Kind::Projective,
        order: s.order,
        point_labels: (0..s.line_count()).map(|i| format!("l{i}")).collect(),
        lines,
        classes: None,
    })
}

/// Deletes the chosen line (the line at infinity) and every point on it.
/// The survivors form an affine plane of the same order; parallel classes
/// are recovered by grouping surviving lines by the deleted point they
/// passed through.
pub fn affinize(s: &IncidenceStructure, line_index: usize) -> Result<IncidenceStructure, GeomError> {
    require_projective(s)?;
    if line_index >= s.line_count() {
        return Err(GeomError::IndexOutOfRange { index: line_index, lines: s.line_count() });
    }
    let at_infinity = &s.lines[line_index];
    let deleted: Vec<bool> = {
        let mut d = vec![false; s.points()];
        for &p in at_infinity {
            d[p] = true;
        }
        d
    };
    let mut remap = vec![usize::MAX; s.points()];
    let mut labels = Vec::new();
    for (old, label) in s.point_labels.iter().enumerate() {
        if !deleted[old] {
            remap[old] = labels.len();
            labels.push(label.clone());
        }
    }

    let mut lines = Vec::new();
    let mut class_of = Vec::new(); // the deleted point each line met
    for (li, line) in s.lines.iter().enumerate() {
        if li == line_index {
            continue;
        }
        let mut survivors = Vec::with_capacity(line.len());
        let mut met = None;
        for &p in line {
            if deleted[p] {
                met = Some(p);
            } else {
                survivors.push(remap[p]);
            }
        }
        survivors.sort_unstable();
        lines.push(survivors);
        // Two projective lines meet in exactly one point, so `met` is set.
        class_of.push(met.expect("line meets the line at infinity"));
    }

    let mut classes: Vec<Vec<usize>> = at_infinity
        .iter()
        .map(|&inf_pt| {
            class_of
                .iter()
                .enumerate()
                .filter(|&(_, &m)| m == inf_pt)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    classes.retain(|c| !c.is_empty());

    Ok(IncidenceStructure {
        kind: Kind::Affine,
        order: s.order,
        point_labels: labels,
        lines,
        classes: Some(classes),
    })
}

fn require_projective(s: &IncidenceStructure) -> Result<(), GeomError> {
    if s.kind != Kind::Projective {
        return Err(GeomError::NotProjective(format!("declared kind is {}", s.kind)));
    }
    let report = check_axioms(s);
    if !report.pass {
        let first = report
            .checks
            .iter()
            .find(|c| !c.pass)
            .map(|c| c.name.clone())
            .unwrap_or_default();
        return Err(GeomError::NotProjective(first));
    }
    Ok(())
}

/// One axiom verdict, with a witness for failures.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub kind: Kind,
    pub order: u64,
    pub checks: Vec<AxiomCheck>,
    pub pass: bool,
}

/// Exhaustively tests the axioms of the declared kind. Failures are report
/// content, never errors; a `Raw` structure has nothing to check.
pub fn check_axioms(s: &IncidenceStructure) -> AxiomReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, witness: Option<String>| {
        checks.push(AxiomCheck { name: name.to_string(), pass: witness.is_none(), witness });
    };

    if let Err(w) = s.well_formed() {
        push("incidence lists well-formed", Some(w));
        let pass = checks.iter().all(|c| c.pass);
        return AxiomReport { kind: s.kind, order: s.order, checks, pass };
    }
    push("incidence lists well-formed", None);

    let q = s.order as usize;
    match s.kind {
        Kind::Projective => {
            let expect = q * q + q + 1;
            push("point count q^2+q+1", count_witness(s.points(), expect));
            push("line count q^2+q+1", count_witness(s.line_count(), expect));
            push("every line has q+1 points", line_size_witness(s, q + 1));
            push("every point lies on q+1 lines", point_degree_witness(s, q + 1));
            push("two distinct points lie on exactly one common line", joining_witness(s));
            push("two distinct lines meet in exactly one point", meeting_witness(s));
        }
        Kind::Affine => {
            push("point count q^2", count_witness(s.points(), q * q));
            push("line count q^2+q", count_witness(s.line_count(), q * q + q));
            push("every line has q points", line_size_witness(s, q));
            push("every point lies on q+1 lines", point_degree_witness(s, q + 1));
            push("two distinct points lie on exactly one common line", joining_witness(s));
            push("lines split into q+1 parallel classes of q disjoint lines", parallel_witness(s));
        }
        Kind::Raw => {}
    }
    let pass = checks.iter().all(|c| c.pass);
    AxiomReport { kind: s.kind, order: s.order, checks, pass }
}

fn count_witness(got: usize, expect: usize) -> Option<String> {
    (got != expect).then(|| format!("expected {expect}, got {got}"))
}

fn line_size_witness(s: &IncidenceStructure, expect: usize) -> Option<String> {
    s.lines
        .iter()
        .position(|l| l.len() != expect)
        .map(|li| format!("line {li} has {} points", s.lines[li].len()))
}

fn point_degree_witness(s: &IncidenceStructure, expect: usize) -> Option<String> {
    let mut degree = vec![0usize; s.points()];
    for line in &s.lines {
        for &p in line {
            degree[p] += 1;
        }
    }
    degree
        .iter()
        .position(|&d| d != expect)
        .map(|p| format!("point {p} lies on {} lines", degree[p]))
}

/// Every unordered point pair on exactly one common line.
fn joining_witness(s: &IncidenceStructure) -> Option<String> {
    let n = s.points();
    let mut joint = vec![0u32; n * n];
    for line in &s.lines {
        for (i, &a) in line.iter().enumerate() {
            for &b in &line[i + 1..] {
                joint[a * n + b] += 1;
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if joint[a * n + b] != 1 {
                return Some(format!("points ({a}, {b}) lie on {} common lines", joint[a * n + b]));
            }
        }
    }
    None
}

/// Every unordered line pair meets in exactly one point.
fn meeting_witness(s: &IncidenceStructure) -> Option<String> {
    for (i, a) in s.lines.iter().enumerate() {
        for (j, b) in s.lines.iter().enumerate().skip(i + 1) {
            let common = intersection_size(a, b);
            if common != 1 {
                return Some(format!("lines ({i}, {j}) share {common} points"));
            }
        }
    }
    None
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    // Both sorted.
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Recomputes parallel classes from scratch (parallel = disjoint) and checks
/// the partition shape: q+1 classes, q mutually disjoint lines each, every
/// class covering all q^2 points.
fn parallel_witness(s: &IncidenceStructure) -> Option<String> {
    let q = s.order as usize;
    let mut assigned = vec![usize::MAX; s.line_count()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..s.line_count() {
        if assigned[i] != usize::MAX {
            continue;
        }
        let cls = classes.len();
        assigned[i] = cls;
        let mut members = vec![i];
        for (j, line) in s.lines.iter().enumerate().skip(i + 1) {
            if assigned[j] == usize::MAX && intersection_size(&s.lines[i], line) == 0 {
                assigned[j] = cls;
                members.push(j);
            }
        }
        classes.push(members);
    }
    if classes.len() != q + 1 {
        return Some(format!("found {} parallel classes, expected {}", classes.len(), q + 1));
    }
    for (ci, cls) in classes.iter().enumerate() {
        if cls.len() != q {
            return Some(format!("class {ci} has {} lines, expected {q}", cls.len()));
        }
        let mut covered = vec![false; s.points()];
        for (i, &la) in cls.iter().enumerate() {
            for &lb in &cls[i + 1..] {
                if intersection_size(&s.lines[la], &s.lines[lb]) != 0 {
                    return Some(format!("lines {la} and {lb} of class {ci} intersect"));
                }
            }
            for &p in &s.lines[la] {
                covered[p] = true;
            }
        }
        if covered.iter().any(|&c| !c) {
            return Some(format!("class {ci} does not cover every point"));
        }
    }
    None
}

/// Side-by-side summary of what the toolkit constructs in dimension d: a
/// verified MUB set (with its basis count) and, for prime powers, a verified
/// projective plane of order d. Only constructions actually performed are
/// reported; nothing is claimed about nonexistence.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    pub d: u64,
    pub is_prime_power: bool,
    pub lower_bound: u64,
    pub upper_bound: u64,
    /// Verified basis count of the best set this toolkit constructs.
    pub mub_count: Option<usize>,
    /// True when mub_count equals d + 1.
    pub mub_maximal: bool,
    pub mub_note: String,
    /// (points, lines) of the constructed plane, when one was built.
    pub plane_counts: Option<(usize, usize)>,
    pub plane_pass: Option<bool>,
    pub plane_note: String,
}

impl fmt::Display for CorrespondenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension {}: bounds [{}, {}]", self.d, self.lower_bound, self.upper_bound)?;
        match self.mub_count {
            Some(n) => writeln!(
                f,
                "  MUBs : {n} bases constructed and verified{} — {}",
                if self.mub_maximal { " (maximal, d+1)" } else { "" },
                self.mub_note
            )?,
            None => writeln!(f, "  MUBs : not constructed — {}", self.mub_note)?,
        }
        match self.plane_counts {
            Some((p, l)) => writeln!(
                f,
                "  plane: order {} with {p} points / {l} lines, axioms {} — {}",
                self.d,
                if self.plane_pass == Some(true) { "pass" } else { "FAIL" },
                self.plane_note
            )?,
            None => writeln!(f, "  plane: not constructed — {}", self.plane_note)?,
        }
        Ok(())
    }
}

/// Builds the best MUB set this toolkit offers in dimension d: per
/// prime-power component, the Galois-field family (odd p) or the qubit
/// triple chain (p = 2), tensored together. The count is the minimum over
/// components: p^e + 1 for odd components, 3 for any power of two.
pub fn best_construction(d: u64) -> Result<mub::MubSet, GeomError> {
    if d < 2 {
        return Err(GeomError::OutOfRange(d));
    }
    let factors = check::factorize(d);
    let mut set: Option<mub::MubSet> = None;
    for &(p, e) in &factors {
        let component = if p == 2 {
            // Chain of qubit triples: 3 bases in dimension 2^e.
            let mut acc = mub::qubit_mubs();
            for _ in 1..e {
                acc = mub::tensor_mubs(&acc, &mub::qubit_mubs())?;
            }
            acc
        } else {
            let field = FieldSpec::new(p, e)?;
            mub::wootters_fields_mubs(&field)?
        };
        set = Some(match set {
            None => component,
            Some(prev) => mub::tensor_mubs(&prev, &component)?,
        });
    }
    Ok(set.expect("d >= 2 has at least one prime factor"))
}

/// Runs both pipelines for 2 <= d <= 64 and tabulates the outcome.
pub fn correspondence_report(d: u64) -> Result<CorrespondenceReport, GeomError> {
    if !(2..=64).contains(&d) {
        return Err(GeomError::OutOfRange(d));
    }
    let bounds = check::nmax_bounds(d)?;

    let set = best_construction(d)?;
    let mub_report = check::check_mub_set(&set, check::TOL_CONSTRUCTED)?;
    let mub_count = mub_report.pass.then_some(set.len());
    let mub_maximal = mub_count == Some(d as usize + 1);
    let mub_note = if mub_maximal {
        "saturates the d+1 bound".to_string()
    } else if bounds.is_prime_power {
        "maximal construction unavailable here: characteristic-2 extension needs ring arithmetic"
            .to_string()
    } else if mub_count == Some(bounds.lower as usize) {
        format!("tensor combination attains the lower bound {}", bounds.lower)
    } else {
        format!("tensor combination gives {} bases (lower bound {})", set.len(), bounds.lower)
    };

    let (plane_counts, plane_pass, plane_note) = if bounds.is_prime_power {
        let (p, e) = bounds.factorization[0];
        let field = FieldSpec::new(p, e)?;
        let plane = pg2(&field);
        let report = check_axioms(&plane);
        (
            Some((plane.points(), plane.line_count())),
            Some(report.pass),
            format!("PG(2, {d}) over {field}"),
        )
    } else {
        (None, None, "no plane of non-prime-power order is known; none constructed".to_string())
    };

    Ok(CorrespondenceReport {
        d,
        is_prime_power: bounds.is_prime_power,
        lower_bound: bounds.lower,
        upper_bound: bounds.upper,
        mub_count,
        mub_maximal,
        mub_note,
        plane_counts,
        plane_pass,
        plane_note,
    })
}
