use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ck_core::analysis::{analyze, AnalysisError, AnalysisRequest, ReductionSelection};
use ck_core::canonical::to_canonical_string;
use ck_core::criteria::Variant;
use ck_core::curvemodel::{validate, CurveSpec};
use ck_core::hilbert::{hs_global, hs_local, MAX_TRUNCATION};
use ck_core::pointcount::count_points;
use ck_core::regression::run_regressions;
use ck_core::selmerdims::QuotientDescriptor;

mod render;

#[derive(Parser)]
#[command(
    name = "ckbound",
    version,
    about = "Refined Chabauty-Kim finiteness criteria and S-integral point bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a JSON request.
    Analyze(AnalyzeArgs),
    /// Reproduce the worked examples and print a pass/fail table.
    Examples {
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Count #Y(F_p), #X(F_p) and #D(F_p) for a curve.
    Pointcount {
        /// A curve JSON, or a request whose "curve" key is used.
        file: PathBuf,
        #[arg(long = "p")]
        p: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Expand the global and local Hilbert series of a quotient descriptor.
    Series {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        truncation: usize,
        /// Number of primes in S (for the global series).
        #[arg(long, default_value_t = 0)]
        s: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Selmer,
    Bd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Generic,
    Refined,
    Both,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    request: PathBuf,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// ab, abat, w2 or all; repeatable or comma-separated.
    #[arg(long, value_delimiter = ',')]
    quotient: Vec<String>,
    #[arg(long = "reduction-mode", value_enum)]
    reduction_mode: Option<ModeArg>,
    #[arg(long)]
    depth1: bool,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long = "p")]
    p: Option<u64>,
    /// Comma-separated primes, e.g. "2,3"; an empty string means S = {}.
    #[arg(long = "S")]
    s: Option<String>,
    /// Component counts, e.g. "2=3,11=2".
    #[arg(long)]
    nl: Option<String>,
    #[arg(long)]
    hbk: Option<u64>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Self {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Examples { json } => cmd_examples(json.as_deref()),
        Command::Pointcount { file, p, json } => cmd_pointcount(&file, p, json.as_deref()),
        Command::Series {
            file,
            truncation,
            s,
            json,
        } => cmd_series(&file, truncation, s, json.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    if let Some(path) = path {
        let text = to_canonical_string(value).map_err(|e| Failure::invalid(e.to_string()))?;
        fs::write(path, text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn parse_primes(text: &str) -> Result<Vec<u64>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Failure::invalid(format!("--S: '{t}' is not an integer")))
        })
        .collect()
}

fn parse_components(text: &str) -> Result<BTreeMap<u64, u64>, Failure> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (l, n) = item
            .split_once('=')
            .ok_or_else(|| Failure::invalid(format!("--nl: expected l=n, got '{item}'")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Failure::invalid(format!("--nl: '{item}' is not of the form l=n")))
        };
        out.insert(parse(l)?, parse(n)?);
    }
    Ok(out)
}

fn apply_overrides(req: &mut AnalysisRequest, args: &AnalyzeArgs) -> Result<(), Failure> {
    if let Some(v) = args.variant {
        req.options.variant = match v {
            VariantArg::Selmer => Variant::Selmer,
            VariantArg::Bd => Variant::BalakrishnanDogra,
        };
    }
    if !args.quotient.is_empty() {
        req.options.quotients = args.quotient.clone();
    }
    if let Some(m) = args.reduction_mode {
        req.options.reduction_mode = match m {
            ModeArg::Generic => ReductionSelection::Generic,
            ModeArg::Refined => ReductionSelection::Refined,
            ModeArg::Both => ReductionSelection::Both,
        };
    }
    if args.depth1 {
        req.options.depth1 = true;
    }
    if let Some(t) = args.truncation {
        req.options.truncation = t;
    }
    if let Some(p) = args.p {
        req.p = p;
    }
    if let Some(s) = &args.s {
        req.s_primes = parse_primes(s)?;
    }
    if let Some(nl) = &args.nl {
        req.bad_components.extend(parse_components(nl)?);
    }
    if let Some(h) = args.hbk {
        match &mut req.arithmetic {
            Some(a) => a.h_bk = Some(h),
            None => return Err(Failure::invalid("--hbk needs an \"arithmetic\" section")),
        }
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8, Failure> {
    let mut req = AnalysisRequest::from_json(&read(&args.request)?)?;
    apply_overrides(&mut req, &args)?;
    let report = analyze(&req)?;
    print!("{}", render::report(&report));
    write_json(args.json.as_deref(), &report)?;
    Ok(0)
}

fn cmd_examples(json: Option<&Path>) -> Result<u8, Failure> {
    let rows = run_regressions();
    print!("{}", render::regressions(&rows));
    write_json(json, &rows)?;
    Ok(if rows.iter().all(|r| r.passed) { 0 } else { 1 })
}

fn load_curve(text: &str) -> Result<CurveSpec, Failure> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Failure::invalid(format!("curve: {e}")))?;
    let curve = value.get("curve").cloned().unwrap_or(value);
    serde_json::from_value(curve).map_err(|e| Failure::invalid(format!("curve: {e}")))
}

fn cmd_pointcount(file: &Path, p: u64, json: Option<&Path>) -> Result<u8, Failure> {
    let spec = load_curve(&read(file)?)?;
    let curve = validate(&spec).map_err(|e| Failure::from(AnalysisError::from(e)))?;
    let pc = count_points(&curve, p).map_err(|e| Failure::from(AnalysisError::from(e)))?;
    println!("#Y(F_{p}) = {}", pc.y_count);
    println!("#X(F_{p}) = {}", pc.x_count);
    println!("#D(F_{p}) = {}", pc.cusp_count);
    write_json(json, &pc)?;
    Ok(0)
}

fn cmd_series(file: &Path, m: usize, s: u64, json: Option<&Path>) -> Result<u8, Failure> {
    if m > MAX_TRUNCATION {
        return Err(Failure::invalid(format!(
            "truncation must be at most {MAX_TRUNCATION}"
        )));
    }
    let desc: QuotientDescriptor = serde_json::from_str(&read(file)?)
        .map_err(|e| Failure::invalid(format!("descriptor: {e}")))?;
    let global = hs_global(&desc, s, m);
    let local = hs_local(&desc, m);
    println!("global (s={s}): {}", render::series(&global));
    println!("local: {}", render::series(&local));
    write_json(
        json,
        &serde_json::json!({ "s": s, "truncation": m, "global": global, "local": local }),
    )?;
    Ok(0)
}
