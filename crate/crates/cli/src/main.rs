mod suites;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use scheme_spectra::bounds::{
    bound_report, build_representation, conjecture_probe, hadamard_representation, lp_search,
    lp_two_support, verify_representation, Representation, VerifyMode, DEFAULT_SEED,
};
use scheme_spectra::groups::{prime_power, Composition, GroupSpec};
use scheme_spectra::krawtchouk::GenKrawMethod;
use scheme_spectra::schemes::{
    composition_spectrum_with, hamming_spectrum, CompositionGraphSpec, GraphSpec, HammingGraphSpec,
};
use scheme_spectra::Error;

#[derive(Parser)]
#[command(
    name = "scheme-spectra",
    version,
    about = "Exact spectra and quantum chromatic number bounds for Hamming and composition graphs"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, env = "SCHEME_SPECTRA_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the spectrum of a graph as JSON.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        /// How composition-graph eigenvalues are evaluated.
        #[arg(long, value_enum, default_value_t = Method::Extraction)]
        method: Method,
    },
    /// Print lower and upper bounds on the quantum chromatic number as JSON.
    Bounds {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Build an orthogonal representation, verify it, and write it as CSV.
    Represent {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u32,
        /// Hamming distance; required unless --kind hadamard.
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, value_enum, default_value_t = RepKind::Lp)]
        kind: RepKind,
        #[arg(long, value_enum, default_value_t = GroupArg::Cyclic)]
        group: GroupArg,
        /// Search LP solutions with up to 3 support indices instead of 2.
        #[arg(long)]
        search: bool,
        /// Coefficient bound for --search.
        #[arg(long, default_value_t = 16)]
        coeff_bound: u32,
        /// Check this many pseudorandom vertices instead of all of them.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// CSV destination; without it the CSV goes to stdout and the
        /// summary to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run exact self-checks; exit status 0 iff all pass.
    Verify {
        #[arg(long, value_enum, default_value_t = suites::Suite::All)]
        suite: suites::Suite,
        #[arg(long, default_value_t = 6)]
        max_n: u32,
    },
    /// Test the minimum-eigenvalue conjecture for Omega_n over Z_q.
    Probe {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
    },
    /// CSV table of bounds over a parameter grid.
    Table {
        #[arg(long, value_parser = ["1.1", "1.2", "1.3"])]
        theorem: String,
        /// For example "n≤8,q∈{2,3}" or "n<=8,q in {2,3}".
        #[arg(long)]
        grid: String,
    },
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    q: u32,
    /// Distance (hamming family).
    #[arg(long)]
    d: Option<u32>,
    /// Comma-separated composition (composition family); defaults to the
    /// balanced composition n/q.
    #[arg(long, value_delimiter = ',')]
    comp: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value_t = GroupArg::Cyclic)]
    group: GroupArg,
    /// Field modulus coefficients, constant term first (with --group field).
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Hamming,
    Composition,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum GroupArg {
    Cyclic,
    Field,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Extraction,
    Brute,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum RepKind {
    Lp,
    Hadamard,
}

/// Raised for parameter combinations clap cannot reject by itself.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Raised when a verification fails; the message carries the witness.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(msg.into()))
}

fn make_group(kind: GroupArg, q: u32, modulus: Option<Vec<u32>>) -> anyhow::Result<GroupSpec> {
    match (kind, modulus) {
        (GroupArg::Cyclic, None) => Ok(GroupSpec::cyclic(q)?),
        (GroupArg::Cyclic, Some(_)) => Err(usage("--modulus needs --group field")),
        (GroupArg::Field, m) => {
            let (p, k) = prime_power(q)
                .ok_or_else(|| usage(format!("--group field needs a prime power q, got {q}")))?;
            match m {
                None => Ok(GroupSpec::field(p, k)?),
                Some(m) => Ok(GroupSpec::field_with_modulus(p, k, m)?),
            }
        }
    }
}

fn graph_spec(a: &GraphArgs) -> anyhow::Result<GraphSpec> {
    match a.family {
        Family::Hamming => {
            if a.comp.is_some() || a.group != GroupArg::Cyclic || a.modulus.is_some() {
                bail!(usage(
                    "--comp, --group and --modulus apply to the composition family"
                ));
            }
            let d = a.d.ok_or_else(|| usage("--family hamming needs --d"))?;
            Ok(GraphSpec::Hamming(HammingGraphSpec::new(a.n, a.q, d)?))
        }
        Family::Composition => {
            if a.d.is_some() {
                bail!(usage("--family composition takes --comp, not --d"));
            }
            let group = make_group(a.group, a.q, a.modulus.clone())?;
            let dcomp = match &a.comp {
                Some(c) => Composition::new(c.clone()),
                None => Composition::balanced(a.q, a.n)?,
            };
            if dcomp.n() != a.n {
                bail!(usage(format!(
                    "--comp sums to {}, --n is {}",
                    dcomp.n(),
                    a.n
                )));
            }
            Ok(GraphSpec::Composition(CompositionGraphSpec::new(
                group, dcomp,
            )?))
        }
    }
}

fn print_json(v: &Value) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn represent(
    n: u32,
    q: u32,
    d: Option<u32>,
    kind: RepKind,
    group: GroupArg,
    search: bool,
    coeff_bound: u32,
    samples: Option<u64>,
    seed: u64,
    out: Option<PathBuf>,
) -> anyhow::Result<()> {
    let group = make_group(group, q, None)?;
    let (rep, spec): (Representation, GraphSpec) = match kind {
        RepKind::Lp => {
            let d = d.ok_or_else(|| usage("--kind lp needs --d"))?;
            let sol = if search {
                lp_search(n, q, d, 3, coeff_bound)?
            } else {
                lp_two_support(n, q, d)?
            };
            let rep = build_representation(&sol, &group)?;
            (rep, GraphSpec::Hamming(HammingGraphSpec::new(n, q, d)?))
        }
        RepKind::Hadamard => {
            if d.is_some() {
                bail!(usage("--kind hadamard takes no --d"));
            }
            let rep = hadamard_representation(&group, n)?;
            (
                rep,
                GraphSpec::Composition(CompositionGraphSpec::hadamard(group, n)?),
            )
        }
    };
    let mode = match samples {
        Some(count) => VerifyMode::Sampled { count, seed },
        None => VerifyMode::Full,
    };
    let summary = verify_representation(&rep, &spec, mode)?;
    let csv = rep.to_csv()?;
    let mut report = serde_json::Map::new();
    report.insert("graph".into(), spec.to_json());
    report.insert("provenance".into(), rep.provenance.tag().into());
    if let scheme_spectra::bounds::RepProvenance::Lp(sol) = &rep.provenance {
        report.insert("lp".into(), sol.to_json());
    }
    report.insert("verification".into(), summary.to_json());
    let report = Value::Object(report);
    match out {
        Some(path) => {
            std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
            print_json(&report)
        }
        None => {
            std::io::stdout().lock().write_all(csv.as_bytes())?;
            eprintln!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()?;
    }
    match cli.command {
        Command::Spectrum { graph, method } => {
            let spec = graph_spec(&graph)?;
            let s = match &spec {
                GraphSpec::Hamming(h) => hamming_spectrum(h),
                GraphSpec::Composition(c) => composition_spectrum_with(
                    c,
                    match method {
                        Method::Extraction => GenKrawMethod::Extraction,
                        Method::Brute => GenKrawMethod::Brute,
                    },
                ),
            };
            print_json(&s.to_json())
        }
        Command::Bounds { graph } => print_json(&bound_report(&graph_spec(&graph)?).to_json()),
        Command::Represent {
            n,
            q,
            d,
            kind,
            group,
            search,
            coeff_bound,
            samples,
            seed,
            out,
        } => represent(
            n,
            q,
            d,
            kind,
            group,
            search,
            coeff_bound,
            samples,
            seed,
            out,
        ),
        Command::Verify { suite, max_n } => suites::run(suite, max_n),
        Command::Probe { q, n } => print_json(&conjecture_probe(q, n)?.to_json()),
        Command::Table { theorem, grid } => {
            let grid = table::parse_grid(&grid).map_err(usage)?;
            let csv = table::render(&theorem, &grid)?;
            std::io::stdout().lock().write_all(csv.as_bytes())?;
            Ok(())
        }
    }
}

/// Verification failures exit 1; anything caused by the parameters exits 2.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<VerificationFailed>() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::NotOrthogonal { .. }
            | Error::NotUnitModulus { .. }
            | Error::ConstraintViolated(_)
            | Error::PrecisionEscalation { .. },
        ) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err)
            if err
                .downcast_ref::<std::io::Error>()
                .is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = exit_code(&err);
            eprintln!("error: {err:#}");
            if code == 2 {
                eprintln!("\nRun with --help for usage.");
            }
            ExitCode::from(code)
        }
    }
}
