mod render;
mod settings;

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liftlab::counting::{count_congruence_lifts_engine, count_congruence_lifts_formula};
use liftlab::lifts::{classify_all_with, find_witness, verify_witness, Witness};
use liftlab::presentation::{farey_symbol, generators_from_symbol};
use liftlab::suite::{run_suite, SuiteOptions};
use liftlab::{EngineConfig, Error, GroupKind};

use render::{CountRow, Format};
use settings::{LevelRange, Settings};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_DISAGREE: u8 = 2;
const EXIT_NONE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "liftlab", version, about = "Count and classify lifts of projective congruence groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Congruence-lift counts by closed formula and by finite-group computation.
    Count {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// Every lift classified as congruence or noncongruence.
    Classify {
        #[command(flatten)]
        target: Target,
        /// Include one row per lift.
        #[arg(long)]
        lifts: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Explicit generators of a noncongruence lift, with certificate.
    Witness {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Farey symbol and independent generators.
    Presentation {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Run the self-check suite and print a scoreboard.
    Verify {
        #[arg(long, default_value_t = 24)]
        max_n: u32,
        /// Flip one sign on the closure side to exercise failure detection.
        #[arg(long)]
        seed_tamper: bool,
        /// Characters sampled per group when there are too many lifts to close each one.
        #[arg(long, default_value_t = SuiteOptions::default().samples)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check a witness file written by `witness --format json` ("-" reads stdin).
    VerifyWitness {
        path: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Target {
    #[arg(long, value_parser = parse_kind)]
    group: GroupKind,
    /// A level `k` or an inclusive range `a..b`.
    #[arg(long = "n", value_parser = LevelRange::parse)]
    n: LevelRange,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Largest modulus 2N handled by the group engine.
    #[arg(long, env = "LIFTLAB_MAX_MODULUS")]
    max_modulus: Option<u32>,
    /// TOML file with engine limits; flags take precedence.
    #[arg(long)]
    config: Option<String>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Formula,
    Engine,
    Both,
}

fn parse_kind(s: &str) -> Result<GroupKind, String> {
    match s.parse::<GroupKind>() {
        Ok(GroupKind::Full) | Err(_) => Err(format!("expected gamma0, gamma1 or gamma, got {s:?}")),
        Ok(k) => Ok(k),
    }
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoNoncongruenceLift { .. } => EXIT_NONE,
            Error::WitnessRejected(_) | Error::Internal(_) => EXIT_DISAGREE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let common = match &cli.command {
        Command::Count { common, .. }
        | Command::Classify { common, .. }
        | Command::Witness { common, .. }
        | Command::Presentation { common, .. }
        | Command::Verify { common, .. }
        | Command::VerifyWitness { common, .. } => common,
    };
    let format = common.format;
    let result = Settings::load(common.config.as_deref(), common.max_modulus)
        .map_err(Failure::usage)
        .and_then(|settings| dispatch(&cli.command, &settings.engine, format));
    match result {
        Ok((text, code)) => match emit(&text, common.out.as_deref()) {
            Ok(()) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(EXIT_USAGE)
            }
        },
        Err(f) => {
            if format == Format::Json {
                let body = serde_json::json!({ "error": f.message, "exit_code": f.code });
                eprintln!("{body}");
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn emit(text: &str, out: Option<&str>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn dispatch(command: &Command, config: &EngineConfig, format: Format) -> Outcome {
    match command {
        Command::Count { target, mode, .. } => cmd_count(target, *mode, config, format),
        Command::Classify { target, lifts, .. } => cmd_classify(target, *lifts, config, format),
        Command::Witness { target, .. } => cmd_witness(target, config, format),
        Command::Presentation { target, .. } => cmd_presentation(target, config, format),
        Command::Verify { max_n, seed_tamper, samples, .. } => {
            let opts = SuiteOptions { max_n: *max_n, tamper: *seed_tamper, samples: *samples, ..SuiteOptions::default() };
            let board = run_suite(&opts, config);
            let code = if board.passed() { EXIT_OK } else { EXIT_DISAGREE };
            Ok((render::scoreboard(&board, format)?, code))
        }
        Command::VerifyWitness { path, .. } => cmd_verify_witness(path, config, format),
    }
}

fn cmd_count(target: &Target, mode: Mode, config: &EngineConfig, format: Format) -> Outcome {
    let mut rows = Vec::new();
    for n in target.n.levels() {
        let formula = match mode {
            Mode::Engine => None,
            _ => Some(count_congruence_lifts_formula(target.group, n)?),
        };
        let engine = match mode {
            Mode::Formula => None,
            Mode::Engine => Some(count_congruence_lifts_engine(target.group, n, config)?),
            Mode::Both => match count_congruence_lifts_engine(target.group, n, config) {
                Ok(r) => Some(r),
                Err(Error::ModulusCapExceeded { .. }) => None,
                Err(e) => return Err(e.into()),
            },
        };
        rows.push(CountRow::new(target.group, n, formula, engine)?);
    }
    let code = if rows.iter().any(|r| r.agree == Some(false)) { EXIT_DISAGREE } else { EXIT_OK };
    Ok((render::counts(&rows, format)?, code))
}

fn cmd_classify(target: &Target, lifts: bool, config: &EngineConfig, format: Format) -> Outcome {
    let mut reports = Vec::new();
    let mut code = EXIT_OK;
    for n in target.n.levels() {
        let report = classify_all_with(target.group, n, config, lifts)?;
        let formula = count_congruence_lifts_formula(target.group, n)?;
        if formula.count != report.congruence {
            code = EXIT_DISAGREE;
        }
        reports.push(report);
    }
    Ok((render::classifications(&reports, target.n.is_single(), lifts, format)?, code))
}

fn single(target: &Target) -> Result<u32, Failure> {
    if target.n.is_single() {
        Ok(target.n.start)
    } else {
        Err(Failure::usage("this command takes a single level"))
    }
}

fn cmd_witness(target: &Target, config: &EngineConfig, format: Format) -> Outcome {
    let n = single(target)?;
    match find_witness(target.group, n, config) {
        Ok(w) => Ok((render::witness(&w, format)?, EXIT_OK)),
        Err(Error::NoNoncongruenceLift { kind, level }) => Err(Failure {
            code: EXIT_NONE,
            message: render::nonexistence(kind, level),
        }),
        Err(e) => Err(e.into()),
    }
}

fn cmd_presentation(target: &Target, config: &EngineConfig, format: Format) -> Outcome {
    let mut sets = Vec::new();
    for n in target.n.levels() {
        let symbol = farey_symbol(target.group, n, config)?;
        let gens = generators_from_symbol(&symbol)?;
        sets.push((symbol, gens));
    }
    Ok((render::presentations(&sets, target.n.is_single(), format)?, EXIT_OK))
}

fn cmd_verify_witness(path: &str, config: &EngineConfig, format: Format) -> Outcome {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))?
    };
    let w: Witness = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
    let cert = verify_witness(&w, config)?;
    Ok((render::verified(&w, &cert, format)?, EXIT_OK))
}
