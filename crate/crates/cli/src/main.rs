use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use halftwist::construction::{
    enumerate_even_partitions, format_partition, modify_insert_singleton, parse_partition,
    relabel_one_based, staggered_word, ConstructionError, LabelBase,
};
use halftwist::engine::transition_matrix;
use halftwist::numfmt::parse_rational;
use halftwist::pipeline::{
    analyze, default_epsilon, survey, survey_to_csv, survey_to_json, survey_to_markdown,
    AnalysisReport, SurveyOptions, DEFAULT_SURVEY_CAP,
};
use halftwist::verify::verify_paper;
use halftwist::{catalog, ConstructionSpec, Powers};
use num_rational::BigRational;

#[derive(Parser)]
#[command(name = "halftwist", version, about = "Half-twist mapping classes: words, matrices, stretch factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Echo the twist word of a construction.
    Build {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the transition matrix (default CSV).
    Matrix {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Full report: stretch factor, factorization, trace field, classification.
    Analyze {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        precision: PrecisionArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Analyze every evenly spaced partition for a range of n.
    Survey(SurveyArgs),
    /// Recompute every worked example and print a PASS/FAIL checklist.
    VerifyPaper {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// Number of punctures; selects the partition with the most sets when
    /// --partition is absent.
    #[arg(long)]
    n: Option<usize>,
    /// Multi-twist sets, e.g. "0,3;1,4;2,5".
    #[arg(long)]
    partition: Option<String>,
    /// A named construction: phi, phi_bar, phi_prime, phi_bar_prime, psi, psi_prime.
    #[arg(long, conflicts_with_all = ["n", "partition"])]
    example: Option<String>,
    /// Uniform power; also used for inserted singletons and staggered words.
    #[arg(long, default_value_t = 2)]
    powers: u32,
    /// Per-puncture powers as JSON, e.g. '{"0": 3, "3": 2}', or a scalar.
    #[arg(long)]
    powers_json: Option<String>,
    /// Number of singleton insertions.
    #[arg(long, default_value_t = 0)]
    modify: usize,
    /// Use the staggered word built from the (modified) construction.
    #[arg(long)]
    staggered: bool,
    /// Labels in --partition and --powers-json start at 1.
    #[arg(long)]
    one_based: bool,
    /// Treat --partition as an arbitrary word in execution order; requires --n.
    #[arg(long, requires = "n")]
    custom: bool,
}

#[derive(Args)]
struct PrecisionArg {
    /// Width bound for the certified stretch-factor interval, e.g. 1e-12.
    #[arg(long)]
    precision: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SurveyArgs {
    /// Single n (sets both ends of the range).
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    n: Option<usize>,
    #[arg(long, default_value_t = 4)]
    n_min: usize,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    powers: u32,
    /// Also include 1..=count singleton insertions per partition.
    #[arg(long, default_value_t = 0)]
    modify: usize,
    /// Largest n accepted.
    #[arg(long, default_value_t = DEFAULT_SURVEY_CAP)]
    cap: usize,
    #[command(flatten)]
    precision: PrecisionArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
    Csv,
}

enum Failure {
    Lib(halftwist::Error),
    Usage(String),
    Io(std::io::Error),
    ChecksFailed,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) => e.exit_code() as u8,
            Failure::Usage(_) | Failure::ChecksFailed => 2,
            Failure::Io(_) => 1,
        }
    }
}

impl<E: Into<halftwist::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Lib(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_powers_json(s: &str, one_based: bool) -> Result<Powers, Failure> {
    match Powers::parse_json(s)? {
        Powers::PerPuncture(map) if one_based => {
            let shifted = map
                .into_iter()
                .map(|(p, l)| p.checked_sub(1).map(|p| (p, l)).ok_or(ConstructionError::ZeroLabel))
                .collect::<Result<BTreeMap<_, _>, _>>()?;
            Ok(Powers::PerPuncture(shifted))
        }
        p => Ok(p),
    }
}

fn build_spec(a: &SpecArgs) -> Result<ConstructionSpec, Failure> {
    if let Some(name) = &a.example {
        let (_, spec) = catalog::all()
            .into_iter()
            .find(|(k, _)| *k == name.as_str())
            .ok_or_else(|| usage(format!("unknown example {name:?}")))?;
        return Ok(spec);
    }
    let powers = match &a.powers_json {
        Some(s) => parse_powers_json(s, a.one_based)?,
        None => Powers::Uniform(a.powers),
    };
    let sets = match &a.partition {
        Some(p) => {
            let sets = parse_partition(p)?;
            if a.one_based {
                relabel_one_based(&sets)?
            } else {
                sets
            }
        }
        None => {
            let n = a.n.ok_or_else(|| usage("give --partition, --n or --example"))?;
            enumerate_even_partitions(n)
                .into_iter()
                .next()
                .ok_or_else(|| usage(format!("n = {n} has no evenly spaced partition")))?
        }
    };
    let mut spec = if a.custom {
        ConstructionSpec::custom_from_sets(a.n.expect("clap enforces --n"), &sets, &powers)?
    } else {
        let spec = ConstructionSpec::from_partition(&sets, &powers)?;
        if let Some(n) = a.n {
            if n != spec.n() {
                return Err(usage(format!("--n {n} but the partition covers {} punctures", spec.n())));
            }
        }
        spec
    };
    for _ in 0..a.modify {
        spec = modify_insert_singleton(&spec, a.powers)?;
    }
    if a.staggered {
        spec = staggered_word(&spec, a.powers)?;
    }
    let base = if a.one_based { LabelBase::One } else { LabelBase::Zero };
    Ok(spec.with_label_base(base))
}

fn epsilon(p: &PrecisionArg) -> Result<BigRational, Failure> {
    match &p.precision {
        None => Ok(default_epsilon()),
        Some(s) => {
            let eps = parse_rational(s).map_err(|e| usage(format!("--precision: {e}")))?;
            if eps <= BigRational::from_integer(0.into()) {
                return Err(usage("--precision must be positive"));
            }
            Ok(eps)
        }
    }
}

fn unsupported(command: &str, f: Format) -> Failure {
    let name = match f {
        Format::Json => "json",
        Format::Md => "md",
        Format::Csv => "csv",
    };
    usage(format!("{command} does not support --format {name}"))
}

fn render_build(spec: &ConstructionSpec, f: Format) -> Result<String, Failure> {
    let base = spec.label_base();
    Ok(match f {
        Format::Json => serde_json::to_string_pretty(spec).expect("spec serializes"),
        Format::Md => {
            let mut s = String::new();
            let _ = writeln!(s, "- n: {}", spec.n());
            let _ = writeln!(s, "- provenance: {}", spec.provenance());
            let _ = writeln!(s, "- partition (0-based): `{}`", format_partition(&spec.sets()));
            let _ = writeln!(s, "- word: `{}`", spec.word_string(base));
            s
        }
        Format::Csv => {
            let mut s = String::from("step,puncture,power\n");
            for (i, set) in spec.word().iter().enumerate() {
                for (p, l) in set.twists() {
                    let _ = writeln!(s, "{},{},{l}", i + 1, p.index() + base.offset());
                }
            }
            s
        }
    })
}

fn render_matrix(spec: &ConstructionSpec, f: Format) -> Result<String, Failure> {
    let m = transition_matrix(spec)?;
    Ok(match f {
        Format::Csv => m.to_csv(),
        Format::Json => m.to_json(),
        Format::Md => {
            let n = spec.n();
            let mut s = format!("| |{}\n", (1..=n).map(|j| format!(" {j} |")).collect::<String>());
            let _ = writeln!(s, "|---|{}", "---|".repeat(n));
            for (i, row) in m.matrix().rows().enumerate() {
                let cells: String = row.iter().map(|x| format!(" {x} |")).collect();
                let _ = writeln!(s, "| {} |{cells}", i + 1);
            }
            s
        }
    })
}

fn render_analysis(r: &AnalysisReport, f: Format) -> String {
    match f {
        Format::Json => r.to_json(),
        Format::Md => r.to_markdown(),
        Format::Csv => {
            let c = &r.classification;
            let rows = [
                ("n", r.spec.n().to_string()),
                ("partition", format_partition(&r.spec.sets())),
                ("certified", r.certified().to_string()),
                ("lambda", r.stretch_factor.decimal.clone()),
                ("lambda_lo", r.stretch_factor.lo.clone()),
                ("lambda_hi", r.stretch_factor.hi.clone()),
                ("min_poly", r.stretch_factor.min_poly_string.clone()),
                ("char_poly", r.char_poly_string.clone()),
                ("factorization", r.factorization_string.clone()),
                ("q", r.q_string.clone()),
                ("totally_real", r.trace_field.totally_real.to_string()),
                ("unit_circle_pairs", r.trace_field.unit_circle_pairs.to_string()),
                ("penner_excluded", c.penner_excluded.to_string()),
                ("thurston_excluded", c.thurston_excluded.to_string()),
                ("neither_construction", c.neither_construction.to_string()),
            ];
            let quote = |v: &str| if v.contains(',') { format!("\"{v}\"") } else { v.to_string() };
            let mut s = String::from("field,value\n");
            for (k, v) in rows {
                let _ = writeln!(s, "{k},{}", quote(&v));
            }
            s
        }
    }
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<(), Failure> {
    let text = if text.ends_with('\n') { text } else { text + "\n" };
    match out {
        Some(path) => std::fs::write(path, text).map_err(Failure::Io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Build { spec, output } => {
            let s = build_spec(&spec)?;
            emit(render_build(&s, output.format.unwrap_or(Format::Md))?, &output.out)
        }
        Command::Matrix { spec, output } => {
            let s = build_spec(&spec)?;
            emit(render_matrix(&s, output.format.unwrap_or(Format::Csv))?, &output.out)
        }
        Command::Analyze { spec, precision, output } => {
            let s = build_spec(&spec)?;
            let report = analyze(&s, &epsilon(&precision)?)?;
            emit(render_analysis(&report, output.format.unwrap_or(Format::Json)), &output.out)
        }
        Command::Survey(a) => {
            let (n_min, n_max) = a.n.map_or((a.n_min, a.n_max), |n| (n, n));
            let opts = SurveyOptions {
                n_min,
                n_max,
                power: a.powers,
                modify: a.modify,
                eps: epsilon(&a.precision)?,
                cap: a.cap,
            };
            let rows = survey(&opts).map_err(|e| usage(e.to_string()))?;
            let text = match a.output.format.unwrap_or(Format::Md) {
                Format::Md => survey_to_markdown(&rows),
                Format::Csv => survey_to_csv(&rows),
                Format::Json => survey_to_json(&rows),
            };
            emit(text, &a.output.out)
        }
        Command::VerifyPaper { output } => {
            let checklist = verify_paper();
            let text = match output.format.unwrap_or(Format::Md) {
                Format::Md => checklist.render(),
                Format::Json => serde_json::to_string_pretty(&checklist).expect("checklist serializes"),
                f @ Format::Csv => return Err(unsupported("verify-paper", f)),
            };
            emit(text, &output.out)?;
            if checklist.all_passed() {
                Ok(())
            } else {
                Err(Failure::ChecksFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error ({:?} stage): {e}", e.stage()),
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Io(e) => eprintln!("error writing output: {e}"),
                Failure::ChecksFailed => eprintln!("some checks failed"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
