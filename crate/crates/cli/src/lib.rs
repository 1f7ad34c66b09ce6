//! The `mubs` command line: construction, verification, finite geometry,
//! phase operators, bounds, and numerical search, with JSON artifacts.
//!
//! Exit codes: 0 on pass/success, 1 on verification failure (or a search
//! that did not reach its tolerance), 2 on usage errors.

pub mod format;

use std::ffi::OsString;
use std::fmt::Display;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use format::{
    FieldFile, MubFile, PhaseFile, PlaneFile, SearchReportFile, SicFile, VerifyReportFile,
};
use mubs_core::check::{self, CheckError};
use mubs_core::geom::{self, GeomError};
use mubs_core::gf::FieldSpec;
use mubs_core::mub::{self, Method};
use mubs_core::phase;
use mubs_core::search::{self, SearchConfig};

#[derive(Parser)]
#[command(name = "mubs", version, about = "Mutually unbiased bases toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the addition, multiplication and trace tables of GF(p^m)
    Field(FieldArgs),
    /// Generate or verify sets of mutually unbiased bases
    #[command(subcommand)]
    Mub(MubCmd),
    /// Verify SIC-POVM vector files
    #[command(subcommand)]
    Sic(SicCmd),
    /// Generate or check finite projective/affine planes
    #[command(subcommand)]
    Plane(PlaneCmd),
    /// Basis-count bounds for a dimension
    Bounds(BoundsArgs),
    /// Build phase operators from a basis file and round-trip them
    Phase(PhaseArgs),
    /// Numerical search for k mutually unbiased bases in dimension d
    Search(SearchArgs),
    /// Side-by-side MUB / projective-plane construction report
    Correspond(CorrespondArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Prime characteristic
    #[arg(long)]
    p: u64,
    /// Extension degree
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Modulus coefficients, constant term first (default: smallest irreducible)
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
    /// Emit {"p", "m", "modulus", "trace"} JSON instead of tables
    #[arg(long)]
    json: bool,
    /// Write output to a file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MubCmd {
    /// Construct a MUB set and write it as JSON
    Gen(MubGenArgs),
    /// Verify a MUB set file
    Verify(MubVerifyArgs),
}

#[derive(Args)]
struct MubGenArgs {
    /// fourier | qubit | clock-shift | wf | tensor
    #[arg(long)]
    method: String,
    /// Prime characteristic (clock-shift, wf)
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree (wf)
    #[arg(long)]
    m: Option<u32>,
    /// Dimension (fourier, tensor)
    #[arg(long)]
    dim: Option<u64>,
    /// Output file
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct MubVerifyArgs {
    file: PathBuf,
    /// Maximum allowed deviation
    #[arg(long, default_value_t = check::TOL_CONSTRUCTED)]
    tol: f64,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum SicCmd {
    /// Verify a SIC-POVM vector file
    Verify(SicVerifyArgs),
}

#[derive(Args)]
struct SicVerifyArgs {
    file: PathBuf,
    #[arg(long, default_value_t = check::TOL_CONSTRUCTED)]
    tol: f64,
}

#[derive(Subcommand)]
enum PlaneCmd {
    /// Construct PG(2, q) and write it as JSON
    Gen(PlaneGenArgs),
    /// Check the axioms of a plane file, optionally after dualizing and/or
    /// deleting a line (dual is applied first)
    Check(PlaneCheckArgs),
}

#[derive(Args)]
struct PlaneGenArgs {
    /// Plane order; must be a prime power
    #[arg(long)]
    q: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PlaneCheckArgs {
    file: PathBuf,
    /// Replace the structure by its dual before checking
    #[arg(long)]
    dual: bool,
    /// Delete line K (and its points) before checking
    #[arg(long, value_name = "K")]
    affinize: Option<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    dim: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PhaseArgs {
    /// MUB set file supplying the bases
    #[arg(long)]
    from: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Round-trip overlap tolerance
    #[arg(long, default_value_t = check::TOL_SEARCH)]
    tol: f64,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    dim: usize,
    /// Total bases wanted, including the fixed computational basis
    #[arg(long)]
    bases: Option<usize>,
    #[arg(long, default_value_t = 20)]
    restarts: u32,
    #[arg(long, default_value_t = 4000)]
    max_iters: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual at or below which the search succeeds
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Initial line-search step
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// Seed the free bases from this MUB set file (still optimized)
    #[arg(long)]
    init: Option<PathBuf>,
    /// Hold this MUB set fixed and search for one additional basis
    #[arg(long, conflicts_with = "init")]
    extend: Option<PathBuf>,
    /// Write the full report as JSON
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CorrespondArgs {
    #[arg(long)]
    dim: u64,
}

/// A usage-level failure: one-line reason plus the subcommand synopsis.
struct Usage {
    reason: String,
    synopsis: &'static str,
}

fn usage(reason: impl Display, synopsis: &'static str) -> Usage {
    Usage { reason: reason.to_string(), synopsis }
}

type CmdResult = Result<i32, Usage>;

const SYN_FIELD: &str = "mubs field --p P [--m M] [--modulus C0,C1,...] [--json] [-o FILE]";
const SYN_MUB_GEN: &str =
    "mubs mub gen --method {fourier|qubit|clock-shift|wf|tensor} [--p P [--m M]] [--dim D] -o FILE";
const SYN_MUB_VERIFY: &str = "mubs mub verify FILE [--tol T] [--json]";
const SYN_SIC_VERIFY: &str = "mubs sic verify FILE [--tol T]";
const SYN_PLANE_GEN: &str = "mubs plane gen --q Q -o FILE";
const SYN_PLANE_CHECK: &str = "mubs plane check FILE [--dual] [--affinize K]";
const SYN_BOUNDS: &str = "mubs bounds --dim D [--json]";
const SYN_PHASE: &str = "mubs phase --from FILE -o FILE [--tol T]";
const SYN_SEARCH: &str = "mubs search --dim D --bases K [--restarts R] [--max-iters N] \
                          [--seed S] [--tol T] [--step A] [--init FILE | --extend FILE] [-o FILE]";
const SYN_CORRESPOND: &str = "mubs correspond --dim D";

/// Parses and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Field(a) => cmd_field(a),
        Command::Mub(MubCmd::Gen(a)) => cmd_mub_gen(a),
        Command::Mub(MubCmd::Verify(a)) => cmd_mub_verify(a),
        Command::Sic(SicCmd::Verify(a)) => cmd_sic_verify(a),
        Command::Plane(PlaneCmd::Gen(a)) => cmd_plane_gen(a),
        Command::Plane(PlaneCmd::Check(a)) => cmd_plane_check(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Phase(a) => cmd_phase(a),
        Command::Search(a) => cmd_search(a),
        Command::Correspond(a) => cmd_correspond(a),
    };
    match outcome {
        Ok(code) => code,
        Err(u) => {
            eprintln!("error: {}", u.reason);
            eprintln!("usage: {}", u.synopsis);
            2
        }
    }
}

/// "x^2+x+1" from coefficients, constant term first.
fn poly_string(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        terms.push(match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), Usage> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()), SYN_FIELD)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_field(a: FieldArgs) -> CmdResult {
    let field = match &a.modulus {
        Some(coeffs) => FieldSpec::with_modulus(a.p, a.m, coeffs),
        None => FieldSpec::new(a.p, a.m),
    }
    .map_err(|e| usage(e, SYN_FIELD))?;
    let d = field.order();

    if a.json {
        let trace: Vec<u64> = field.elements().map(|e| e.trace()).collect();
        let file = FieldFile { p: field.p(), m: field.m(), modulus: field.modulus().to_vec(), trace };
        emit(a.output.as_ref(), &format::to_json_string(&file))?;
        return Ok(0);
    }

    let mut out = String::new();
    out.push_str(&format!(
        "{field}, {} elements, modulus {} (coefficients {:?}, constant term first)\n",
        d,
        poly_string(field.modulus()),
        field.modulus()
    ));
    out.push_str("elements by index:\n");
    for e in field.elements() {
        out.push_str(&format!("  {:>4}: {}\n", e.index(), e));
    }
    if d > 64 {
        out.push_str("addition/multiplication tables omitted for d > 64\n");
    } else {
        let width = d.to_string().len().max(2);
        let table = |op: &dyn Fn(&mubs_core::GfElement, &mubs_core::GfElement) -> u64,
                     name: &str|
         -> String {
            let mut t = format!("{name} table (entries are element indices):\n");
            for x in field.elements() {
                let row: Vec<String> = field
                    .elements()
                    .map(|y| format!("{:>width$}", op(&x, &y)))
                    .collect();
                t.push_str(&format!("  {}\n", row.join(" ")));
            }
            t
        };
        out.push_str(&table(&|x, y| x.add(y).expect("same field").index(), "addition"));
        out.push_str(&table(&|x, y| x.mul(y).expect("same field").index(), "multiplication"));
    }
    let trace_row: Vec<String> = field.elements().map(|e| e.trace().to_string()).collect();
    out.push_str(&format!("trace: [{}]\n", trace_row.join(", ")));
    emit(a.output.as_ref(), &out)?;
    Ok(0)
}

fn cmd_mub_gen(a: MubGenArgs) -> CmdResult {
    let method: Method = a.method.parse().map_err(|e: String| usage(e, SYN_MUB_GEN))?;
    let set = match method {
        Method::Fourier => {
            let d = a.dim.ok_or_else(|| usage("--dim is required for fourier", SYN_MUB_GEN))?;
            if d < 1 {
                return Err(usage("dimension must be at least 1", SYN_MUB_GEN));
            }
            mub::fourier_pair(d as usize)
        }
        Method::Qubit => {
            if matches!(a.dim, Some(d) if d != 2) {
                return Err(usage("qubit sets live in dimension 2", SYN_MUB_GEN));
            }
            mub::qubit_mubs()
        }
        Method::ClockShift => {
            let p = a
                .p
                .or(a.dim)
                .ok_or_else(|| usage("--p is required for clock-shift", SYN_MUB_GEN))?;
            mub::clock_shift_mubs(p).map_err(|e| usage(e, SYN_MUB_GEN))?
        }
        Method::WoottersFields => {
            let p = a.p.ok_or_else(|| usage("--p is required for wf", SYN_MUB_GEN))?;
            let field = FieldSpec::new(p, a.m.unwrap_or(1)).map_err(|e| usage(e, SYN_MUB_GEN))?;
            mub::wootters_fields_mubs(&field).map_err(|e| usage(e, SYN_MUB_GEN))?
        }
        Method::Tensor => {
            let d = a.dim.ok_or_else(|| usage("--dim is required for tensor", SYN_MUB_GEN))?;
            geom::best_construction(d).map_err(|e| usage(e, SYN_MUB_GEN))?
        }
        Method::Search => {
            return Err(usage("use `mubs search` for numerical candidates", SYN_MUB_GEN));
        }
    };
    format::write_json(&a.output, &MubFile::from_set(&set))
        .map_err(|e| usage(e, SYN_MUB_GEN))?;
    println!(
        "wrote {} bases of dimension {} ({}) to {}",
        set.len(),
        set.dim(),
        set.method(),
        a.output.display()
    );
    Ok(0)
}

fn cmd_mub_verify(a: MubVerifyArgs) -> CmdResult {
    let file: MubFile = format::read_json(&a.file).map_err(|e| usage(e, SYN_MUB_VERIFY))?;
    let set = file.to_set().map_err(|e| usage(e, SYN_MUB_VERIFY))?;
    let report = check::check_mub_set(&set, a.tol)
        .map_err(|e| usage(e, SYN_MUB_VERIFY))?;
    if a.json {
        print!("{}", format::to_json_string(&VerifyReportFile::from_report(&report)));
    } else {
        println!(
            "dim {}, {} bases, tolerance {:.1e}",
            report.dim, report.basis_count, report.tolerance
        );
        let worst_ortho = report.ortho_deviations.iter().cloned().fold(0.0, f64::max);
        println!("orthonormality worst deviation: {worst_ortho:.3e}");
        if let Some(worst) = report
            .pair_deviations
            .iter()
            .max_by(|a, b| a.deviation.partial_cmp(&b.deviation).expect("finite"))
        {
            println!(
                "unbiasedness worst deviation:   {:.3e} (bases {} and {})",
                worst.deviation, worst.i, worst.j
            );
        }
        if report.bound_exceeded {
            println!("basis count {} exceeds the d+1 bound", report.basis_count);
        }
        println!("verdict: {}", if report.pass { "pass" } else { "fail" });
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_sic_verify(a: SicVerifyArgs) -> CmdResult {
    let file: SicFile = format::read_json(&a.file).map_err(|e| usage(e, SYN_SIC_VERIFY))?;
    let vectors = file.to_vectors().map_err(|e| usage(e, SYN_SIC_VERIFY))?;
    match check::check_sic_povm(&vectors, a.tol) {
        Ok(report) => {
            println!(
                "dim {}, {} vectors, target overlap 1/sqrt({})",
                report.dim,
                report.count,
                report.dim + 1
            );
            println!("worst norm deviation:    {:.3e}", report.max_norm_deviation);
            println!("worst overlap deviation: {:.3e}", report.max_overlap_deviation);
            println!("identity resolution deviation (informational): {:.3e}", report.identity_deviation);
            println!("verdict: {}", if report.pass { "pass" } else { "fail" });
            Ok(if report.pass { 0 } else { 1 })
        }
        // Wrong shape is a verification failure of the data, not a usage error.
        Err(e @ CheckError::WrongCount { .. }) | Err(e @ CheckError::DimMismatch { .. }) => {
            println!("verdict: fail ({e})");
            Ok(1)
        }
        Err(e) => Err(usage(e, SYN_SIC_VERIFY)),
    }
}

fn cmd_plane_gen(a: PlaneGenArgs) -> CmdResult {
    let factors = check::factorize(a.q);
    if factors.len() != 1 {
        return Err(usage(format!("{} is not a prime power", a.q), SYN_PLANE_GEN));
    }
    let field = FieldSpec::new(factors[0].0, factors[0].1).map_err(|e| usage(e, SYN_PLANE_GEN))?;
    let plane = geom::pg2(&field);
    format::write_json(&a.output, &PlaneFile::from_structure(&plane))
        .map_err(|e| usage(e, SYN_PLANE_GEN))?;
    println!(
        "wrote PG(2, {}) with {} points and {} lines to {}",
        a.q,
        plane.points(),
        plane.line_count(),
        a.output.display()
    );
    Ok(0)
}

fn cmd_plane_check(a: PlaneCheckArgs) -> CmdResult {
    let file: PlaneFile = format::read_json(&a.file).map_err(|e| usage(e, SYN_PLANE_CHECK))?;
    let mut structure = file.to_structure().map_err(|e| usage(e, SYN_PLANE_CHECK))?;
    if a.dual {
        structure = match geom::dual(&structure) {
            Ok(s) => s,
            Err(GeomError::NotProjective(why)) => {
                println!("verdict: fail (cannot dualize: {why})");
                return Ok(1);
            }
            Err(e) => return Err(usage(e, SYN_PLANE_CHECK)),
        };
    }
    if let Some(k) = a.affinize {
        structure = match geom::affinize(&structure, k) {
            Ok(s) => s,
            Err(GeomError::NotProjective(why)) => {
                println!("verdict: fail (cannot affinize: {why})");
                return Ok(1);
            }
            Err(e) => return Err(usage(e, SYN_PLANE_CHECK)),
        };
    }
    let report = geom::check_axioms(&structure);
    println!(
        "{} structure of order {}: {} points, {} lines",
        report.kind,
        report.order,
        structure.points(),
        structure.line_count()
    );
    for c in &report.checks {
        match &c.witness {
            None => println!("  ok   {}", c.name),
            Some(w) => println!("  FAIL {} ({w})", c.name),
        }
    }
    println!("verdict: {}", if report.pass { "pass" } else { "fail" });
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_bounds(a: BoundsArgs) -> CmdResult {
    let r = check::nmax_bounds(a.dim).map_err(|e| usage(e, SYN_BOUNDS))?;
    if a.json {
        let value = serde_json::json!({
            "d": r.d,
            "factorization": r.factorization.iter().map(|&(p, e)| [p, e as u64]).collect::<Vec<_>>(),
            "lower": r.lower,
            "upper": r.upper,
            "is_prime_power": r.is_prime_power,
        });
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        let factors: Vec<String> = r
            .factorization
            .iter()
            .map(|&(p, e)| if e == 1 { format!("{p}") } else { format!("{p}^{e}") })
            .collect();
        println!("d = {} = {}", r.d, factors.join(" * "));
        println!("lower bound (attained by tensor constructions): {}", r.lower);
        println!("upper bound: {}", r.upper);
        println!(
            "{}",
            if r.is_prime_power {
                "prime power: the bounds coincide and d+1 bases exist"
            } else {
                "not a prime power: the maximum is open between the bounds"
            }
        );
    }
    Ok(0)
}

fn cmd_phase(a: PhaseArgs) -> CmdResult {
    let file: MubFile = format::read_json(&a.from).map_err(|e| usage(e, SYN_PHASE))?;
    let set = file.to_set().map_err(|e| usage(e, SYN_PHASE))?;
    let ops = match phase::mub_phase_operators(&set) {
        Ok(ops) => ops,
        Err(e) => {
            println!("verdict: fail (cannot build operators: {e})");
            return Ok(1);
        }
    };
    let mut all_pass = true;
    for (op, basis) in ops.iter().zip(set.bases()) {
        let report = phase::roundtrip_check(op, basis, a.tol)
            .map_err(|e| usage(e, SYN_PHASE))?;
        let worst = report
            .matches
            .iter()
            .map(|m| m.overlap)
            .fold(f64::INFINITY, f64::min);
        println!(
            "operator {}: roundtrip {} (worst matched overlap {:.12})",
            op.source_basis_label(),
            if report.pass { "pass" } else { "FAIL" },
            worst
        );
        all_pass &= report.pass;
    }
    format::write_json(&a.output, &PhaseFile::from_operators(set.dim(), &ops))
        .map_err(|e| usage(e, SYN_PHASE))?;
    println!("wrote {} operators to {}", ops.len(), a.output.display());
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_search(a: SearchArgs) -> CmdResult {
    let extend_set = match &a.extend {
        Some(path) => {
            let file: MubFile = format::read_json(path).map_err(|e| usage(e, SYN_SEARCH))?;
            Some(file.to_set().map_err(|e| usage(e, SYN_SEARCH))?)
        }
        None => None,
    };
    let bases = match (&extend_set, a.bases) {
        (Some(set), Some(k)) if k != set.len() + 1 => {
            return Err(usage(
                format!("--bases {k} disagrees with extending a {}-basis set", set.len()),
                SYN_SEARCH,
            ));
        }
        (Some(set), _) => set.len() + 1,
        (None, Some(k)) => k,
        (None, None) => return Err(usage("--bases is required", SYN_SEARCH)),
    };

    let mut cfg = SearchConfig::new(a.dim, bases);
    cfg.restarts = a.restarts;
    cfg.max_iters = a.max_iters;
    cfg.seed = a.seed;
    cfg.tolerance = a.tol;
    cfg.step_size = a.step;
    if let Some(path) = &a.init {
        let file: MubFile = format::read_json(path).map_err(|e| usage(e, SYN_SEARCH))?;
        cfg.init = Some(file.to_set().map_err(|e| usage(e, SYN_SEARCH))?);
    }

    let report = match &extend_set {
        Some(set) => search::extend_search(set, &cfg),
        None => search::search(&cfg),
    }
    .map_err(|e| usage(e, SYN_SEARCH))?;

    println!(
        "dim {}, {} bases, {} restarts, seed {}",
        report.dim, report.target_bases, cfg.restarts, report.seed
    );
    println!(
        "best residual {:.6e} at restart {} after {} iterations",
        report.best_residual,
        report.best_restart,
        report.iterations[report.best_restart as usize]
    );
    println!(
        "{}",
        if report.success {
            "success: residual within tolerance"
        } else {
            "no success at this tolerance (says nothing about existence)"
        }
    );
    if let Some(path) = &a.output {
        format::write_json(path, &SearchReportFile::from_report(&report, cfg.restarts, cfg.max_iters))
            .map_err(|e| usage(e, SYN_SEARCH))?;
        println!("wrote report to {}", path.display());
    }
    Ok(if report.success { 0 } else { 1 })
}

fn cmd_correspond(a: CorrespondArgs) -> CmdResult {
    let report = geom::correspondence_report(a.dim).map_err(|e| usage(e, SYN_CORRESPOND))?;
    print!("{report}");
    Ok(0)
}
