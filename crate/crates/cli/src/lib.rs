//! Command-line front end for `padic-tiles`.
//!
//! Exit codes: 0 success, 1 domain errors (and failed `lemmas` sweeps),
//! 2 usage errors and malformed JSON, 3 when `verify`/`spectral` get a
//! well-formed pair that does not tile.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use padic_tiles::encoding::{DecodeError, JsonCodec};
use padic_tiles::fourier::{ft_compact_open, ft_level_set, ft_point_measure, FtValue};
use padic_tiles::tiling::{
    cell_level, census, find_complements, regularize, verify_tiling, verify_tiling_spectral,
};
use padic_tiles::{
    sweeps, CompactOpenSet, Frequency, LevelSet, PointSet, PrimeBase, Rational, TilingReport,
    Witness,
};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_TILING: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "padic-tiles",
    version,
    about = "Exact tiling analysis in the p-adic integers"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for searches (defaults to all cores).
    #[arg(long, env = "PADIC_TILES_JOBS", global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a tiling pair by counting coverage of every residue.
    Verify(PairArgs),
    /// Check a tiling pair through the Fourier transforms of both sides.
    Spectral(PairArgs),
    /// Majority-vote a set onto the cells of level gamma_T + 1.
    Regularize(PairArgs),
    /// List every tiling complement containing 0.
    Complements {
        /// Level set JSON, inline or a file path.
        #[arg(long)]
        omega: String,
    },
    /// Census of all tiles of a given size containing 0.
    Enumerate {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        size: u64,
    },
    /// Exact Fourier transform at one frequency.
    Ft {
        #[command(flatten)]
        object: ObjectArgs,
        /// Frequency as a rational, e.g. 1/4 or -3/8.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// All frequencies with |xi|_p <= p^max_k where the transform vanishes.
    Zeroset {
        #[command(flatten)]
        object: ObjectArgs,
        /// Largest exponent k swept (defaults to the object's level).
        #[arg(long)]
        max_k: Option<u32>,
    },
    /// Run the built-in harmonic analysis sweeps.
    Lemmas {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        max_gamma: u32,
    },
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Level set JSON, inline or a file path.
    #[arg(long)]
    omega: String,
    /// Point set JSON, inline or a file path.
    #[arg(long)]
    t: String,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ObjectArgs {
    /// Compact open set JSON.
    #[arg(long)]
    set: Option<String>,
    /// Level set JSON.
    #[arg(long)]
    omega: Option<String>,
    /// Point set JSON (the transform of its counting measure).
    #[arg(long)]
    t: Option<String>,
}

enum CliError {
    Usage(String),
    Domain(padic_tiles::Error),
}

impl From<padic_tiles::Error> for CliError {
    fn from(e: padic_tiles::Error) -> Self {
        CliError::Domain(e)
    }
}

struct Outcome {
    text: String,
    code: i32,
    err: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            code: EXIT_OK,
            err: None,
        }
    }
}

/// Runs the CLI on `args` (including the program name), writing the report
/// to `out` and error lines to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start {jobs} workers: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            if let Some(line) = outcome.err {
                let _ = writeln!(err, "{line}");
            }
            outcome.code
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: usage: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(err, "error: {}: {}", e.kind(), one_line(&e.detail()));
            EXIT_DOMAIN
        }
    }
}

fn one_line(s: &str) -> String {
    s.replace('\n', " ")
}

/// Reads a JSON argument: inline when it starts with `{`, a file path otherwise.
fn read_input<T: JsonCodec>(flag: &str, arg: &str) -> Result<T, CliError> {
    let (label, text) = if arg.trim_start().starts_with('{') {
        (format!("<inline --{flag}>"), arg.to_string())
    } else {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?;
        (arg.to_string(), text)
    };
    T::from_json(&text).map_err(|e| match e {
        DecodeError::Malformed {
            offset, message, ..
        } => CliError::Usage(format!(
            "malformed JSON in {label} at byte {offset}: {}",
            one_line(&message)
        )),
        DecodeError::Invalid(e) => CliError::Domain(e),
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Verify(pair) => {
            let (omega, t) = read_pair(pair)?;
            Ok(tiling_outcome(verify_tiling(&omega, &t)?, json))
        }
        Command::Spectral(pair) => {
            let (omega, t) = read_pair(pair)?;
            Ok(tiling_outcome(verify_tiling_spectral(&omega, &t)?, json))
        }
        Command::Regularize(pair) => {
            let (omega, t) = read_pair(pair)?;
            let set = regularize(&omega, &t)?;
            Ok(Outcome::ok(if json {
                format!("{}\n", set.to_json())
            } else {
                format!(
                    "compact open: {set}\nmeasure: {}\ncell level: {}\n",
                    set.measure(),
                    cell_level(&t)
                )
            }))
        }
        Command::Complements { omega } => {
            let omega: LevelSet = read_input("omega", omega)?;
            let found = find_complements(&omega);
            let mut text = String::new();
            for t in &found {
                if json {
                    writeln!(text, "{}", t.to_json()).unwrap();
                } else {
                    writeln!(text, "{t}").unwrap();
                }
            }
            if !json {
                writeln!(text, "{} complement(s)", found.len()).unwrap();
            }
            Ok(Outcome::ok(text))
        }
        Command::Enumerate { p, n, size } => {
            let base = PrimeBase::new(*p)?;
            let records = census(base, *n, *size)?;
            let mut text = String::new();
            for r in &records {
                if json {
                    writeln!(text, "{}", r.to_json()).unwrap();
                } else {
                    writeln!(
                        text,
                        "{}: {} complement(s), gamma_T {}, compact open {}",
                        r.omega,
                        r.complements.len(),
                        r.gamma_t,
                        r.compact_open
                    )
                    .unwrap();
                }
            }
            if !json {
                writeln!(text, "{} tile(s)", records.len()).unwrap();
            }
            Ok(Outcome::ok(text))
        }
        Command::Ft { object, xi } => {
            let object = Object::read(object)?;
            let xi = Frequency::from_rational(object.base(), parse_rational(xi)?)?;
            let value = object.transform(&xi)?;
            Ok(Outcome::ok(ft_report(&xi, &value, json)))
        }
        Command::Zeroset { object, max_k } => {
            let object = Object::read(object)?;
            let max_k = max_k.unwrap_or_else(|| object.level());
            let mut checked = 0u64;
            let mut vanishing = Vec::new();
            for xi in Frequency::all_up_to(object.base(), max_k)? {
                checked += 1;
                if object.transform(&xi)?.is_zero() {
                    vanishing.push(xi);
                }
            }
            Ok(Outcome::ok(zeroset_report(checked, &vanishing, json)))
        }
        Command::Lemmas { p, max_gamma } => {
            let base = PrimeBase::new(*p)?;
            let outcomes = sweeps::run_all(base, *max_gamma)?;
            let mut text = String::new();
            if json {
                let rows: Vec<SweepJson> = outcomes
                    .iter()
                    .map(|o| SweepJson {
                        name: o.name,
                        cases: o.cases,
                        failures: o.failures,
                        passed: o.passed(),
                    })
                    .collect();
                writeln!(text, "{}", serde_json::to_string(&rows).unwrap()).unwrap();
            } else {
                for o in &outcomes {
                    writeln!(text, "{o}").unwrap();
                }
            }
            let failed = outcomes.iter().find(|o| !o.passed()).map(|bad| {
                format!(
                    "error: sweep-failed: {}: {} of {} cases failed",
                    bad.name, bad.failures, bad.cases
                )
            });
            Ok(Outcome {
                text,
                code: if failed.is_some() {
                    EXIT_DOMAIN
                } else {
                    EXIT_OK
                },
                err: failed,
            })
        }
    }
}

#[derive(Serialize)]
struct SweepJson {
    name: &'static str,
    cases: u64,
    failures: u64,
    passed: bool,
}

fn read_pair(pair: &PairArgs) -> Result<(LevelSet, PointSet), CliError> {
    Ok((read_input("omega", &pair.omega)?, read_input("t", &pair.t)?))
}

fn tiling_outcome(report: TilingReport, json: bool) -> Outcome {
    let code = if report.is_tiling {
        EXIT_OK
    } else {
        EXIT_NOT_TILING
    };
    let text = if json {
        format!("{}\n", serde_json::to_string(&report).unwrap())
    } else {
        let mut text = format!("tiling: {}\n", report.is_tiling);
        match &report.witness {
            Some(Witness::Residue { x, count }) => {
                writeln!(text, "witness: residue {x} covered {count} time(s)").unwrap()
            }
            Some(Witness::Frequency { k, u }) => writeln!(
                text,
                "witness: neither transform vanishes at xi = {u}/p^{k}"
            )
            .unwrap(),
            Some(Witness::Mass {
                omega,
                complement,
                modulus,
            }) => writeln!(
                text,
                "witness: |omega|*|T| = {omega}*{complement} != {modulus}"
            )
            .unwrap(),
            None => {}
        }
        if !report.coverage_histogram.is_empty() {
            let parts: Vec<String> = report
                .coverage_histogram
                .iter()
                .map(|(count, residues)| format!("{count}x{residues}"))
                .collect();
            writeln!(text, "coverage: {}", parts.join(", ")).unwrap();
        }
        text
    };
    Outcome {
        text,
        code,
        err: None,
    }
}

enum Object {
    Set(CompactOpenSet),
    Level(LevelSet),
    Points(PointSet),
}

impl Object {
    fn read(args: &ObjectArgs) -> Result<Object, CliError> {
        match (&args.set, &args.omega, &args.t) {
            (Some(s), _, _) => Ok(Object::Set(read_input("set", s)?)),
            (_, Some(o), _) => Ok(Object::Level(read_input("omega", o)?)),
            (_, _, Some(t)) => Ok(Object::Points(read_input("t", t)?)),
            _ => Err(CliError::Usage(
                "one of --set, --omega, --t is required".into(),
            )),
        }
    }

    fn base(&self) -> PrimeBase {
        match self {
            Object::Set(s) => s.base(),
            Object::Level(o) => o.base(),
            Object::Points(t) => t.base(),
        }
    }

    fn level(&self) -> u32 {
        match self {
            Object::Set(s) => s.max_level(),
            Object::Level(o) => o.level(),
            Object::Points(t) => t.precision(),
        }
    }

    fn transform(&self, xi: &Frequency) -> Result<FtValue, CliError> {
        Ok(match self {
            Object::Set(s) => ft_compact_open(s, xi)?,
            Object::Level(o) => ft_level_set(o, xi)?,
            Object::Points(t) => ft_point_measure(t, xi)?,
        })
    }
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("cannot parse rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(num, den))
}

/// Rounds away float noise and negative zero so output is stable.
fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Serialize)]
struct FtJson {
    xi: FrequencyJson,
    gamma: u32,
    coeffs: Vec<String>,
    re: f64,
    im: f64,
    zero: bool,
}

#[derive(Serialize)]
struct FrequencyJson {
    k: u32,
    u: u64,
}

fn ft_report(xi: &Frequency, value: &FtValue, json: bool) -> String {
    let z = value.to_complex();
    if json {
        let row = FtJson {
            xi: FrequencyJson {
                k: xi.exponent(),
                u: xi.unit(),
            },
            gamma: value.gamma(),
            coeffs: value.coeffs().iter().map(|c| c.to_string()).collect(),
            re: clean(z.re),
            im: clean(z.im),
            zero: value.is_zero(),
        };
        format!("{}\n", serde_json::to_string(&row).unwrap())
    } else {
        format!(
            "xi: {xi}\nexact: {value}\napprox: {:.12} {:+.12}i\nzero: {}\n",
            clean(z.re),
            clean(z.im),
            value.is_zero()
        )
    }
}

#[derive(Serialize)]
struct ZerosetJson {
    checked: u64,
    vanishing: Vec<FrequencyJson>,
}

fn zeroset_report(checked: u64, vanishing: &[Frequency], json: bool) -> String {
    if json {
        let row = ZerosetJson {
            checked,
            vanishing: vanishing
                .iter()
                .map(|xi| FrequencyJson {
                    k: xi.exponent(),
                    u: xi.unit(),
                })
                .collect(),
        };
        format!("{}\n", serde_json::to_string(&row).unwrap())
    } else {
        let mut text = format!(
            "transform vanishes at {} of {checked} frequencies\n",
            vanishing.len()
        );
        for xi in vanishing {
            writeln!(text, "{xi}").unwrap();
        }
        text
    }
}
