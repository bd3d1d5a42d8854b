use std::ffi::OsString;
use std::fs::File;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sq_core::catalog::{self, AutoFamily, GoodChecker, GoodOutcome, VerifyMode, DEFAULT_SEED};
use sq_core::cocycle::{abelian_extension, is_trivial_latin, is_trivial_via_orbit, trivialize};
use sq_core::cohomology::{cocycle_space_with, is_coboundary_by_elimination, SolverOptions, DEFAULT_DENSE_LIMIT};
use sq_core::construct::{affine, coset_quandle, conj, conj_f, core, principal};
use sq_core::families::{self, FamilyTable};
use sq_core::group::{center, derived_subgroup, fixed_subgroup};
use sq_core::perm::DEFAULT_PERMGROUP_CAP;
use sq_core::quandle::{cayley_kernel, coset_representation, dis, lmlt, QuandleFlags, QuandleTable};
use sq_core::simply::{
    classify_member, decide_covers, decide_h2, validate_cover_witness, ClassificationRow, DecideOptions,
    SCVerdict, Verdict, Witness,
};

use crate::formats;
use crate::specs::{build_auto, parse_group};
use crate::suite::{run_suites, verify_appendix, AppendixFamily, AppendixScale, SuiteConfig, SuiteReport};
use crate::work::parallel_map;
use crate::UsageError;

#[derive(Parser, Debug)]
#[command(name = "sq", version, about = "Finite quandles, constant cocycles and simple connectedness")]
struct Cli {
    /// Print the JSON report instead of the text rendering.
    #[arg(long, global = true)]
    json: bool,
    /// Leave timings out of reports, making them byte-identical across runs.
    #[arg(long, global = true)]
    no_timings: bool,
    /// Worker threads for classification rows and suites.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Axiom flags, multiplication group orders and Cayley kernel of a quandle file.
    Check { file: PathBuf },
    /// Construct a quandle from a group and an automorphism.
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "identity")]
        auto: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Dimensions of Z², B² and H² with coefficients in Z_q.
    H2 {
        file: PathBuf,
        #[arg(long)]
        prime: u64,
        /// Write cocycles representing a basis of H².
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// The abelian extension of a quandle by a cocycle.
    Extend {
        quandle: PathBuf,
        cocycle: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Whether a cocycle is cohomologous to the trivial one.
    Trivial {
        quandle: PathBuf,
        cocycle: PathBuf,
        #[arg(long, value_enum, default_value = "orbit")]
        method: TrivialMethod,
        /// Base point for the latin normalization.
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// Decide simple connectedness of a connected quandle.
    Simply {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: SimplyMethod,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Compare the closed forms for the families of size p² or p³ with computed verdicts.
    Classify {
        #[arg(long, value_enum)]
        size: SizeArg,
        #[arg(long)]
        prime: u64,
        /// Every family member instead of one per family and predicted verdict (p³ only).
        #[arg(long)]
        full: bool,
        /// Cross-check each row with the cover search.
        #[arg(long)]
        covers: bool,
        /// Restrict p³ runs to some lists.
        #[arg(long, value_enum, value_delimiter = ',')]
        tables: Option<Vec<TableArg>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit catalog groups, or verify the automorphism families.
    Catalog(CatalogArgs),
    /// Run the seeded property suites.
    VerifySuite(SuiteArgs),
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct CatalogArgs {
    #[command(subcommand)]
    verify: Option<CatalogCommand>,
    #[arg(long)]
    prime: Option<u64>,
    /// Catalog id such as `G12`, or `heisenberg` / `modular`.
    #[arg(long)]
    group: Option<String>,
    /// Family parameters of an automorphism.
    #[arg(long, value_delimiter = ',')]
    params: Option<Vec<u64>>,
    /// Write the group table.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Write the principal quandle of the automorphism given by `--params`.
    #[arg(long)]
    quandle: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    /// Compare the closed forms of every family with direct checks.
    Verify {
        #[arg(long)]
        prime: u64,
        /// Samples per family above the exhaustive threshold.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Families with at most this many admissible tuples are checked exhaustively.
        #[arg(long, default_value_t = 1_000_000)]
        threshold: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Samples per catalog family above the exhaustive threshold.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 1_000_000)]
    threshold: u64,
    /// Primes for the catalog suites.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    prime: Vec<u64>,
    /// Largest corpus quandle.
    #[arg(long, default_value_t = 27)]
    max_size: usize,
    #[arg(long, default_value_t = 1000)]
    split_samples: usize,
    /// Run only these suites.
    #[arg(long, value_delimiter = ',')]
    suites: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Break one catalog family (fault injection).
    #[arg(long, hide = true)]
    corrupt_catalog: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuildKind {
    Affine,
    Principal,
    Core,
    Conj,
    ConjF,
    /// Cosets of the fixed subgroup of the automorphism.
    Coset,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TrivialMethod {
    Orbit,
    Theta,
    Latin,
    Elimination,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SimplyMethod {
    H2,
    Covers,
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SizeArg {
    P2,
    P3,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableArg {
    AffineZp2Zp,
    AffineElem,
    Nonfaithful,
    NonaffineFaithful,
}

impl From<TableArg> for FamilyTable {
    fn from(t: TableArg) -> Self {
        match t {
            TableArg::AffineZp2Zp => FamilyTable::AffineZp2Zp,
            TableArg::AffineElem => FamilyTable::AffineElem,
            TableArg::Nonfaithful => FamilyTable::Nonfaithful,
            TableArg::NonaffineFaithful => FamilyTable::NonaffineFaithful,
        }
    }
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

struct Ctx {
    json: bool,
    timings: bool,
    jobs: usize,
    opts: DecideOptions,
}

impl Ctx {
    /// Prints the report as JSON or as its text rendering.
    fn emit<T: Serialize>(&self, report: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
        let out = if self.json { to_json(report)? + "\n" } else { text() };
        match std::io::stdout().lock().write_all(out.as_bytes()) {
            // a closed pipe (`| head`) is not a failure
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn env_positive(name: &str, default: usize) -> anyhow::Result<usize> {
    match std::env::var(name) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(usage(format!("{name} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(default),
    }
}

/// Decision options with the environment overrides applied.
pub fn options_from_env() -> anyhow::Result<DecideOptions> {
    Ok(DecideOptions {
        solver: SolverOptions { dense_limit: env_positive("SQ_SOLVER_DENSE_LIMIT", DEFAULT_DENSE_LIMIT)?, force: None },
        perm_cap: env_positive("SQ_PERMGROUP_CAP", DEFAULT_PERMGROUP_CAP)?,
    })
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_quandle(path: &Path) -> anyhow::Result<QuandleTable> {
    formats::parse_quandle(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn require_quandle(q: &QuandleTable, path: &Path) -> anyhow::Result<()> {
    if !q.flags().is_quandle {
        return Err(usage(format!("{}: table is not a quandle", path.display())));
    }
    Ok(())
}

fn require_prime(p: u64) -> anyhow::Result<()> {
    if !sq_core::arith::is_prime(p) {
        return Err(usage(format!("{p} is not prime")));
    }
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                EXIT_USAGE
            } else {
                EXIT_FAILED
            }
        }
    }
}

/// `Ok(false)` reports a disagreement or violated invariant.
fn dispatch(cli: Cli) -> anyhow::Result<bool> {
    if cli.jobs == 0 {
        return Err(usage("--jobs must be positive"));
    }
    let ctx = Ctx { json: cli.json, timings: !cli.no_timings, jobs: cli.jobs, opts: options_from_env()? };
    match cli.cmd {
        Command::Check { file } => check(&ctx, &file),
        Command::Build { kind, group, auto, emit } => build(&ctx, kind, &group, &auto, emit.as_deref()),
        Command::H2 { file, prime, basis } => h2(&ctx, &file, prime, basis.as_deref()),
        Command::Extend { quandle, cocycle, emit } => extend(&ctx, &quandle, &cocycle, emit.as_deref()),
        Command::Trivial { quandle, cocycle, method, base } => trivial(&ctx, &quandle, &cocycle, method, base),
        Command::Simply { file, method, primes } => simply(&ctx, &file, method, primes.as_deref()),
        Command::Classify { size, prime, full, covers, tables, out } => {
            classify(&ctx, size, prime, full, covers, tables, out.as_deref())
        }
        Command::Catalog(args) => match args.verify {
            Some(CatalogCommand::Verify { prime, samples, seed, threshold, out }) => {
                catalog_verify(&ctx, prime, samples, seed, threshold, out.as_deref())
            }
            None => catalog_emit(&ctx, &args),
        },
        Command::VerifySuite(args) => verify_suite(&ctx, args),
    }
}

#[derive(Serialize)]
struct CheckReport {
    size: usize,
    flags: QuandleFlags,
    lmlt_order: Option<usize>,
    dis_order: Option<usize>,
    principal: Option<bool>,
    cayley_class_sizes: Vec<usize>,
}

fn flag_line(f: &QuandleFlags) -> String {
    let names = [
        ("rack", f.is_rack),
        ("quandle", f.is_quandle),
        ("latin", f.is_latin),
        ("involutory", f.is_involutory),
        ("connected", f.is_connected),
        ("faithful", f.is_faithful),
    ];
    names.iter().map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(" ")
}

fn check(ctx: &Ctx, file: &Path) -> anyhow::Result<bool> {
    let q = read_quandle(file)?;
    let flags = q.flags();
    let (lmlt_order, dis_order) = if flags.is_rack {
        (Some(lmlt(&q, ctx.opts.perm_cap)?.order()), Some(dis(&q, ctx.opts.perm_cap)?.order()))
    } else {
        (None, None)
    };
    let principal = (flags.is_quandle && flags.is_connected).then(|| dis_order == Some(q.size()));
    let mut sizes = cayley_kernel(&q).class_sizes();
    sizes.sort_unstable();
    let rep = CheckReport { size: q.size(), flags, lmlt_order, dis_order, principal, cayley_class_sizes: sizes };
    ctx.emit(&rep, || {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        format!(
            "size {}\n{}\n|LMlt| {}\n|Dis| {}\nprincipal {}\ncayley classes {:?}\n",
            rep.size,
            flag_line(&rep.flags),
            opt(rep.lmlt_order),
            opt(rep.dis_order),
            rep.principal.map_or("-".to_string(), |p| p.to_string()),
            rep.cayley_class_sizes
        )
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct BuiltReport {
    size: usize,
    flags: QuandleFlags,
    #[serde(skip_serializing_if = "Option::is_none")]
    written: Option<String>,
}

fn emit_quandle(ctx: &Ctx, q: &QuandleTable, emit: Option<&Path>) -> anyhow::Result<()> {
    if let Some(path) = emit {
        write(path, &formats::write_quandle(q))?;
    }
    let rep = BuiltReport { size: q.size(), flags: q.flags(), written: emit.map(|p| p.display().to_string()) };
    ctx.emit(&rep, || {
        let mut s = format!("size {}\n{}\n", rep.size, flag_line(&rep.flags));
        if let Some(w) = &rep.written {
            s.push_str(&format!("wrote {w}\n"));
        }
        s
    })
}

fn build(ctx: &Ctx, kind: BuildKind, group: &str, auto: &str, emit: Option<&Path>) -> anyhow::Result<bool> {
    let g = parse_group(group)?;
    let f = build_auto(&g, auto)?;
    let bad = |e: sq_core::Error| usage(format!("cannot build: {e}"));
    let q = match kind {
        BuildKind::Affine => affine(&g.table, &f).map_err(bad)?,
        BuildKind::Principal => principal(&g.table, &f).map_err(bad)?,
        BuildKind::Core => core(&g.table).map_err(bad)?,
        BuildKind::Conj => conj(&g.table).map_err(bad)?,
        BuildKind::ConjF => conj_f(&g.table, &f).map_err(bad)?,
        BuildKind::Coset => coset_quandle(&g.table, &fixed_subgroup(&f), &f).map_err(bad)?.0,
    };
    emit_quandle(ctx, &q, emit)?;
    Ok(true)
}

#[derive(Serialize)]
struct H2Report {
    modulus: u64,
    solver: sq_core::cohomology::SolverKind,
    dim_z2: usize,
    dim_b2: usize,
    dim_h2: usize,
}

fn h2(ctx: &Ctx, file: &Path, prime: u64, basis: Option<&Path>) -> anyhow::Result<bool> {
    require_prime(prime)?;
    let q = read_quandle(file)?;
    require_quandle(&q, file)?;
    let s = cocycle_space_with(&q, prime, ctx.opts.solver)?;
    if let Some(path) = basis {
        let text: String = s.h2_basis.iter().map(formats::write_cocycle).collect();
        write(path, &text)?;
    }
    let rep = H2Report { modulus: prime, solver: s.solver, dim_z2: s.dim_z2, dim_b2: s.dim_b2, dim_h2: s.dim_h2() };
    ctx.emit(&rep, || {
        format!("dim Z2 {}\ndim B2 {}\ndim H2 {}\n", rep.dim_z2, rep.dim_b2, rep.dim_h2)
    })?;
    Ok(true)
}

fn read_cocycle(q: &QuandleTable, path: &Path) -> anyhow::Result<sq_core::cocycle::AbelianCocycle> {
    formats::parse_cocycle(&read(path)?, q).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn extend(ctx: &Ctx, quandle: &Path, cocycle: &Path, emit: Option<&Path>) -> anyhow::Result<bool> {
    let q = read_quandle(quandle)?;
    require_quandle(&q, quandle)?;
    let t = read_cocycle(&q, cocycle)?;
    let (e, _) = abelian_extension(&q, &t)?;
    emit_quandle(ctx, &e, emit)?;
    Ok(true)
}

#[derive(Serialize)]
struct TrivialReport {
    method: String,
    trivial: bool,
    /// `γ` with `δγ = θ`, from the Θ-trivialization.
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<Vec<usize>>,
}

fn trivial(ctx: &Ctx, quandle: &Path, cocycle: &Path, method: TrivialMethod, base: usize) -> anyhow::Result<bool> {
    let q = read_quandle(quandle)?;
    require_quandle(&q, quandle)?;
    let t = read_cocycle(&q, cocycle)?;
    let g = t.to_group_cocycle();
    let map_pre = |e: sq_core::Error| match e {
        sq_core::Error::NotConnected | sq_core::Error::NotLatin | sq_core::Error::PreconditionFailed(_) => {
            usage(e.to_string())
        }
        e => e.into(),
    };
    let (name, trivial, gamma) = match method {
        TrivialMethod::Orbit => ("orbit", is_trivial_via_orbit(&q, &g).map_err(map_pre)?, None),
        TrivialMethod::Theta => {
            let gamma = trivialize(&q, &g).map_err(map_pre)?;
            ("theta", gamma.is_some(), gamma)
        }
        TrivialMethod::Latin => {
            if base >= q.size() {
                return Err(usage(format!("base point {base} is outside the quandle")));
            }
            ("latin", is_trivial_latin(&q, &g, base).map_err(map_pre)?, None)
        }
        TrivialMethod::Elimination => ("elimination", is_coboundary_by_elimination(&q, &t), None),
    };
    let rep = TrivialReport { method: name.into(), trivial, gamma };
    ctx.emit(&rep, || format!("{}\n", if rep.trivial { "trivial" } else { "nontrivial" }))?;
    Ok(true)
}

/// The serialized name of a unit enum value.
fn tag<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|j| j.as_str().map(str::to_string)).unwrap_or_default()
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::SimplyConnected => "simply_connected",
        Verdict::Not => "not_simply_connected",
        Verdict::Undecided => "undecided",
    }
}

/// Cover search on a principal quandle read from a file, with the witness
/// projection rewritten in terms of the file's points.
fn simply_covers(q: &QuandleTable, opts: &DecideOptions) -> anyhow::Result<SCVerdict> {
    let rep = coset_representation(q, 0, opts.perm_cap).map_err(|e| usage(e.to_string()))?;
    if rep.group.order() != q.size() {
        return Err(usage("the cover search needs a principal quandle"));
    }
    let mut v = decide_covers(&rep.group, &rep.conj, opts).map_err(|e| match e {
        sq_core::Error::UnsupportedSize(_) | sq_core::Error::BadPrime(_) => usage(e.to_string()),
        e => e.into(),
    })?;
    if let Some(Witness::Cover { projection, .. }) = &mut v.witness {
        for x in projection.iter_mut() {
            *x = rep.point_of(*x);
        }
    }
    if let Some(w @ Witness::Cover { .. }) = &v.witness {
        validate_cover_witness(q, w).context("cover witness failed validation")?;
    }
    Ok(v)
}

fn simply(ctx: &Ctx, file: &Path, method: SimplyMethod, primes: Option<&[u64]>) -> anyhow::Result<bool> {
    let q = read_quandle(file)?;
    require_quandle(&q, file)?;
    if !q.is_connected() {
        return Err(usage(format!("{}: quandle is not connected", file.display())));
    }
    if let Some(ps) = primes {
        for &p in ps {
            require_prime(p)?;
        }
    }
    let v = match method {
        SimplyMethod::Covers => simply_covers(&q, &ctx.opts)?,
        SimplyMethod::H2 | SimplyMethod::Auto => match decide_h2(&q, primes, &ctx.opts) {
            Err(sq_core::Error::PrimesUnbounded) if method == SimplyMethod::Auto => SCVerdict {
                verdict: Verdict::Undecided,
                method: sq_core::simply::Method::H2,
                primes: Vec::new(),
                witness: Some(Witness::Reason {
                    text: "no bound on the cover primes; pass --primes with --method h2".into(),
                }),
            },
            Err(sq_core::Error::PrimesUnbounded) => return Err(usage("no bound on the cover primes; pass --primes")),
            r => r?,
        },
    };
    ctx.emit(&v, || {
        let mut s = format!("{}\nmethod {}\n", verdict_name(v.verdict), tag(&v.method));
        if !v.primes.is_empty() {
            s.push_str(&format!("primes {:?}\n", v.primes));
        }
        match &v.witness {
            Some(Witness::Cover { group, params, cover_size, .. }) => {
                s.push_str(&format!(
                    "cover of size {cover_size} over {} with parameters {params:?}\n",
                    serde_json::to_string(group).unwrap_or_default()
                ))
            }
            Some(Witness::Cocycle { prime, .. }) => s.push_str(&format!("nontrivial cocycle mod {prime}\n")),
            Some(Witness::NotPrincipal { point, .. }) => {
                s.push_str(&format!("not principal: a displacement fixes {point}\n"))
            }
            Some(Witness::Component { prime, size, .. }) => {
                s.push_str(&format!("component of size {size} at prime {prime} fails\n"))
            }
            Some(Witness::Reason { text }) => s.push_str(&format!("{text}\n")),
            None => {}
        }
        s
    })?;
    Ok(true)
}

#[derive(Clone, Serialize)]
struct TimedRow {
    #[serde(flatten)]
    row: ClassificationRow,
    #[serde(skip_serializing_if = "Option::is_none")]
    ms: Option<u64>,
}

#[derive(Serialize)]
struct ClassifyReport {
    size: String,
    prime: u64,
    full: bool,
    rows: usize,
    disagreements: usize,
    results: Vec<TimedRow>,
}

fn classify(
    ctx: &Ctx,
    size: SizeArg,
    prime: u64,
    full: bool,
    covers: bool,
    tables: Option<Vec<TableArg>>,
    out: Option<&Path>,
) -> anyhow::Result<bool> {
    let members = match size {
        SizeArg::P2 => {
            if ![3, 5, 7].contains(&prime) {
                return Err(usage(format!("size p2 runs take p in 3, 5, 7; got {prime}")));
            }
            if full || tables.is_some() {
                return Err(usage("--full and --tables apply to size p3"));
            }
            let mut m = families::affine_p2(prime)?;
            m.extend(families::cyclic_p2(prime)?);
            m
        }
        SizeArg::P3 => {
            if ![5, 7].contains(&prime) {
                return Err(usage(format!("size p3 runs take p in 5, 7; got {prime}")));
            }
            let scope: Vec<FamilyTable> = match tables {
                Some(t) => t.into_iter().map(FamilyTable::from).collect(),
                None => FamilyTable::P3.to_vec(),
            };
            sq_core::simply::p3_members(prime, &scope, full)?
        }
    };
    let partial_path = out.map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(".partial.jsonl");
        PathBuf::from(s)
    });
    let partial = match &partial_path {
        Some(p) => Some(Mutex::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => None,
    };
    let results = parallel_map(&members, ctx.jobs, |m| -> anyhow::Result<TimedRow> {
        let start = Instant::now();
        let row = classify_member(m, covers, &ctx.opts)
            .with_context(|| format!("{:?} {} {:?}", m.table, m.family, m.params))?;
        let row = TimedRow { row, ms: ctx.timings.then(|| start.elapsed().as_millis() as u64) };
        if let Some(f) = &partial {
            let mut f = f.lock().expect("writer lock");
            writeln!(f, "{}", serde_json::to_string(&row)?)?;
            f.flush()?;
        }
        Ok(row)
    });
    let mut rows = results.into_iter().collect::<anyhow::Result<Vec<_>>>()?;
    // deterministic order: table, family, parameters
    rows.sort_by(|a, b| (a.row.table, &a.row.family, &a.row.params).cmp(&(b.row.table, &b.row.family, &b.row.params)));
    let disagreements = rows.iter().filter(|r| !r.row.agree).count();
    let rep = ClassifyReport {
        size: match size {
            SizeArg::P2 => "p2".into(),
            SizeArg::P3 => "p3".into(),
        },
        prime,
        full,
        rows: rows.len(),
        disagreements,
        results: rows,
    };
    if let Some(path) = out {
        write(path, &(to_json(&rep)? + "\n"))?;
        if let Some(p) = &partial_path {
            let _ = std::fs::remove_file(p);
        }
    }
    ctx.emit(&rep, || {
        let mut s = String::new();
        for r in &rep.results {
            let row = &r.row;
            let line = format!(
                "{:<20} {:<6} {:<14} predicted {:<16} computed {:<20}{}{}",
                tag(&row.table),
                row.family,
                format!("{:?}", row.params),
                verdict_name(row.predicted),
                verdict_name(row.computed),
                row.covers.map_or(String::new(), |c| format!(" covers {}", verdict_name(c))),
                if row.agree { "" } else { "  DISAGREE" }
            );
            s.push_str(line.trim_end());
            s.push('\n');
        }
        s.push_str(&format!("{} rows, {} disagreements\n", rep.rows, rep.disagreements));
        s
    })?;
    Ok(disagreements == 0)
}

#[derive(Serialize)]
struct CatalogEntry {
    group: String,
    prime: u64,
    order: usize,
    center_order: usize,
    derived_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    good: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<bool>,
}

fn catalog_emit(ctx: &Ctx, args: &CatalogArgs) -> anyhow::Result<bool> {
    let p = args.prime.ok_or_else(|| usage("--prime is required"))?;
    let name = args.group.as_deref().ok_or_else(|| usage("--group is required"))?;
    let lower = name.to_ascii_lowercase();
    let (pc, id) = match lower.as_str() {
        "heisenberg" => (catalog::build_order_p3_group(catalog::P3Kind::Heisenberg, p), None),
        "modular" => (catalog::build_order_p3_group(catalog::P3Kind::Modular, p), None),
        _ => {
            let id: u8 = lower
                .strip_prefix('g')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| usage(format!("unknown catalog group `{name}`")))?;
            (catalog::build_appendix_group(id, p, None), Some(id))
        }
    };
    let pc = pc.map_err(|e| usage(e.to_string()))?;
    let g = &pc.table;
    if let Some(path) = &args.emit {
        write(path, &formats::write_group(g))?;
    }
    let mut entry = CatalogEntry {
        group: name.into(),
        prime: p,
        order: g.order(),
        center_order: center(g).order(),
        derived_order: derived_subgroup(g).order(),
        params: None,
        good: None,
        closed_form: None,
    };
    if let Some(params) = &args.params {
        let id = id.ok_or_else(|| usage("--params needs an appendix group"))?;
        let fam = AutoFamily::new(id, p).map_err(|e| usage(e.to_string()))?;
        let f = catalog::appendix_automorphism(&pc, &fam, params).map_err(|e| usage(e.to_string()))?;
        let free: Vec<usize> = fam.images(params).iter().map(|w| pc.eval_word(w)).collect();
        entry.good = Some(GoodChecker::new(&pc)?.check(&free) == GoodOutcome::Good);
        entry.closed_form = Some(fam.closed_form(params));
        entry.params = Some(params.clone());
        if let Some(path) = &args.quandle {
            write(path, &formats::write_quandle(&principal(g, &f)?))?;
        }
    } else if args.quandle.is_some() {
        return Err(usage("--quandle needs --params"));
    }
    ctx.emit(&entry, || {
        let mut s = format!(
            "{} at p={}: order {}, |Z| {}, |G'| {}\n",
            entry.group, entry.prime, entry.order, entry.center_order, entry.derived_order
        );
        if let (Some(good), Some(cf)) = (entry.good, entry.closed_form) {
            s.push_str(&format!("parameters {:?}: good {good}, closed form {cf}\n", entry.params.as_ref().unwrap()));
        }
        s
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct CatalogReport {
    prime: u64,
    seed: u64,
    mismatches: u64,
    /// Mismatches in the documented `G12` and `G13` defect classes.
    known_defects: u64,
    good_outside: Vec<u8>,
    families: Vec<AppendixFamily>,
}

fn catalog_verify(
    ctx: &Ctx,
    prime: u64,
    samples: u64,
    seed: u64,
    threshold: u64,
    out: Option<&Path>,
) -> anyhow::Result<bool> {
    if prime < 3 || !sq_core::arith::is_prime(prime) {
        return Err(usage(format!("{prime} is not an odd prime")));
    }
    let families = verify_appendix(prime, VerifyMode::Auto { threshold, samples, seed }, ctx.jobs)?;
    let rep = CatalogReport {
        prime,
        seed,
        mismatches: families.iter().map(|f| f.report.mismatch_count).sum(),
        known_defects: families.iter().map(|f| f.known_defects).sum(),
        good_outside: families
            .iter()
            .map(|f| &f.report)
            .filter(|f| ![3, 7, 12, 13].contains(&f.group_id) && f.good_tuples > 0)
            .map(|f| f.group_id)
            .collect(),
        families,
    };
    if let Some(path) = out {
        write(path, &(to_json(&rep)? + "\n"))?;
    }
    ctx.emit(&rep, || {
        let mut s = String::new();
        for f in rep.families.iter().map(|f| &f.report) {
            s.push_str(&format!(
                "G{:<3} {:<16} checked {:>8} good {:>8} closed form {:>8} mismatches {}\n",
                f.group_id, f.mode, f.tuples_checked, f.good_tuples, f.closed_form_true, f.mismatch_count
            ));
        }
        s.push_str(&format!(
            "{} mismatches ({} in documented defect classes), good tuples outside 3/7/12/13: {:?}\n",
            rep.mismatches, rep.known_defects, rep.good_outside
        ));
        s
    })?;
    Ok(rep.mismatches == 0 && rep.good_outside.is_empty())
}

#[derive(Serialize)]
struct SuiteSummary {
    seed: u64,
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn verify_suite(ctx: &Ctx, a: SuiteArgs) -> anyhow::Result<bool> {
    if let Some(names) = &a.suites {
        if let Some(bad) = names.iter().find(|n| !crate::suite::SUITE_NAMES.contains(&n.as_str())) {
            return Err(usage(format!("unknown suite `{bad}`")));
        }
    }
    for &p in &a.prime {
        if p < 3 || !sq_core::arith::is_prime(p) {
            return Err(usage(format!("{p} is not an odd prime")));
        }
    }
    let cfg = SuiteConfig {
        seed: a.seed,
        max_size: a.max_size,
        split_samples: a.split_samples,
        appendix_primes: a.prime,
        appendix_mode: AppendixScale { threshold: a.threshold, samples: a.samples },
        corrupt_catalog: a.corrupt_catalog,
        only: a.suites,
        opts: ctx.opts,
        jobs: ctx.jobs,
        timings: ctx.timings,
    };
    let suites = run_suites(&cfg);
    let rep = SuiteSummary { seed: cfg.seed, passed: suites.iter().all(SuiteReport::passed), suites };
    if let Some(path) = &a.out {
        write(path, &(to_json(&rep)? + "\n"))?;
    }
    ctx.emit(&rep, || {
        let mut s = String::new();
        for r in &rep.suites {
            s.push_str(&format!(
                "{:<24} {} checked {:>7} failed {:>5}",
                r.name,
                if r.passed() { "PASS" } else { "FAIL" },
                r.checked,
                r.failed
            ));
            if let Some(k) = r.known_defects.filter(|&k| k > 0) {
                s.push_str(&format!(" ({k} in documented defect classes)"));
            }
            s.push('\n');
            if let Some(c) = &r.first_counterexample {
                s.push_str(&format!("    first counterexample: {c}\n"));
            }
        }
        s
    })?;
    Ok(rep.passed)
}
