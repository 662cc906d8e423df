use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sparse_interp::bench::{run_bench, write_csv, Algo, BenchConfig, Param};
use sparse_interp::domain::text::{format_terms, parse_poly};
use sparse_interp::multivariate::{mpoly_si_mk, mpoly_si_mk_int, pro_mpoly_si_mk, Bounds};
use sparse_interp::univariate::upoly_si_rat;
use sparse_interp::{CoefficientDomain, MultiPoly, Outcome, PolyBox};

/// Sparse interpolation of black-box polynomials with bounded rational coefficients.
#[derive(Parser, Debug)]
#[command(name = "spinterp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recover a polynomial given in a file, treating it as a black box.
    #[command(subcommand)]
    Interp(Interp),
    /// Time interpolation on random instances and write CSV.
    Bench(BenchArgs),
}

#[derive(Subcommand, Debug)]
enum Interp {
    /// Univariate recovery from one probe.
    Uni(UniArgs),
    /// Multivariate recovery through Kronecker images.
    Multi(MultiArgs),
}

#[derive(Args, Debug)]
struct UniArgs {
    #[arg(long)]
    input: PathBuf,
    /// Coefficient magnitude bound.
    #[arg(long = "C", value_name = "C")]
    magnitude: u64,
    /// Coefficient denominator bound.
    #[arg(long = "H", value_name = "H")]
    denominator: u64,
    /// Term bound; enables FAILURE reporting.
    #[arg(long = "T", value_name = "T")]
    terms: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    /// Deterministic, always exact.
    Det,
    /// One random prime; may print FAILURE.
    Prob,
    /// Integer coefficients only, no verification probes.
    Int,
}

#[derive(Args, Debug)]
struct MultiArgs {
    #[arg(long)]
    input: PathBuf,
    /// Total degree bound.
    #[arg(long = "D", value_name = "D")]
    degree: u64,
    /// Term bound.
    #[arg(long = "T", value_name = "T")]
    terms: usize,
    #[arg(long = "C", value_name = "C")]
    magnitude: u64,
    #[arg(long = "H", value_name = "H")]
    denominator: u64,
    #[arg(long, value_enum, default_value = "det")]
    mode: Mode,
    /// Seed for the prime draw in prob mode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Diversification primes, one per variable, ascending.
    #[arg(long, value_delimiter = ',')]
    qs: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Bound to sweep: T, D, C, H or n.
    #[arg(long)]
    vary: String,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Routine: auto, uni, det, prob or int.
    #[arg(long, default_value = "auto")]
    algo: String,
    #[arg(long = "n", value_name = "n", default_value_t = 1)]
    nvars: usize,
    #[arg(long = "D", value_name = "D", default_value_t = 1000)]
    degree: u64,
    #[arg(long = "T", value_name = "T", default_value_t = 20)]
    terms: usize,
    #[arg(long = "C", value_name = "C", default_value_t = 1000)]
    magnitude: u64,
    #[arg(long = "H", value_name = "H", default_value_t = 10)]
    denominator: u64,
}

const EXIT_FAILURE_VALUE: u8 = 2;

fn read_poly(path: &Path) -> anyhow::Result<MultiPoly> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_poly(&text).with_context(|| format!("{}", path.display()))
}

fn emit(text: &str) -> anyhow::Result<ExitCode> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn failure() -> anyhow::Result<ExitCode> {
    println!("FAILURE");
    Ok(ExitCode::from(EXIT_FAILURE_VALUE))
}

fn interp_uni(args: &UniArgs) -> anyhow::Result<ExitCode> {
    let f = read_poly(&args.input)?;
    let Some(uni) = f.to_univariate() else {
        bail!("{}: univariate interpolation needs `vars 1`, file has {}", args.input.display(), f.nvars());
    };
    let domain = CoefficientDomain::new(args.magnitude, args.denominator)?;
    if let Some(t) = uni.terms().iter().find(|t| !domain.contains(&t.coeff)) {
        bail!(
            "coefficient {} violates |c| <= {}, denominator <= {}",
            t.coeff,
            args.magnitude,
            args.denominator
        );
    }
    if let Some(bound) = args.terms.filter(|&bound| uni.len() > bound) {
        bail!("polynomial has {} terms, more than T = {bound}", uni.len());
    }
    let bb = PolyBox::new(uni);
    match upoly_si_rat(&bb, args.magnitude, args.denominator, args.terms)? {
        Outcome::Success(p) => emit(&format_terms(&MultiPoly::from_univariate(&p))),
        Outcome::Failure(_) => failure(),
    }
}

fn interp_multi(args: &MultiArgs) -> anyhow::Result<ExitCode> {
    let f = read_poly(&args.input)?;
    let bounds = Bounds::new(f.nvars(), args.degree, args.terms, args.magnitude, args.denominator)?;
    bounds.check(&f)?;
    let qs = args.qs.as_deref();
    let bb = PolyBox::new(f);
    let outcome = match args.mode {
        Mode::Det => Outcome::Success(mpoly_si_mk(&bb, &bounds, qs)?.poly),
        Mode::Int => Outcome::Success(mpoly_si_mk_int(&bb, &bounds, qs)?.poly),
        Mode::Prob => pro_mpoly_si_mk(&bb, &bounds, qs, args.seed)?.outcome,
    };
    match outcome {
        Outcome::Success(p) => emit(&format_terms(&p)),
        Outcome::Failure(_) => failure(),
    }
}

fn bench(args: &BenchArgs) -> anyhow::Result<ExitCode> {
    let vary: Param = args.vary.parse()?;
    let algo: Algo = args.algo.parse()?;
    let base = Bounds::new(args.nvars, args.degree, args.terms, args.magnitude, args.denominator)?;
    let cfg = BenchConfig { vary, values: args.values.clone(), trials: args.trials, seed: args.seed, base, algo };
    let records = run_bench(&cfg)?;
    let file = fs::File::create(&args.out).with_context(|| format!("cannot write {}", args.out.display()))?;
    let mut w = BufWriter::new(file);
    write_csv(&records, &mut w).and_then(|()| w.flush()).with_context(|| format!("cannot write {}", args.out.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Interp(Interp::Uni(a)) => interp_uni(&a),
        Command::Interp(Interp::Multi(a)) => interp_multi(&a),
        Command::Bench(a) => bench(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::FAILURE,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("spinterp: {e:#}");
            ExitCode::FAILURE
        }
    }
}
