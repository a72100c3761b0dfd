//! Command-line front end for `frattini`.
//!
//! Exit codes: 0 for success or a true answer, 1 for a false answer or a
//! refusal, 2 for malformed input.

mod commands;
mod context;
pub mod input;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use context::Context;
use input::InputDocument;

#[derive(Parser, Debug)]
#[command(name = "frattini", version, about = "Free-group words, subgroup graphs and non-generator certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Group description (`.grp`), or a certificate for `witness verify`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 12)]
    pub qmax: usize,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Paper)]
    pub mode: ModeArg,
    /// `N` in explore mode.
    #[arg(long, global = true)]
    pub n_override: Option<String>,
    /// Multiplier in `n_j = mult * j * N` in explore mode.
    #[arg(long, global = true)]
    pub mult_override: Option<String>,
    /// Largest word a power word may be expanded to.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub expand_limit: usize,
    /// Rank of the free group when no input file is given.
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Letter names when no input file is given, e.g. `xy`.
    #[arg(long, global = true)]
    pub letters: Option<String>,
    /// Subgroup name from the input, or a quoted generator list.
    #[arg(long, global = true)]
    pub subgroup: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Paper,
    Explore,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Operations on plain words.
    #[command(subcommand)]
    Word(WordCommand),
    /// Operations on power words such as `(ab)^1000 a`.
    #[command(subcommand)]
    Pw(PwCommand),
    /// Folded core graphs of subgroups.
    #[command(subcommand)]
    Stallings(StallingsCommand),
    /// Metric constants of cyclic subgroups.
    #[command(subcommand)]
    Geom(GeomCommand),
    /// Certificates that `g` is not a non-generator.
    #[command(subcommand)]
    Witness(WitnessCommand),
}

#[derive(Subcommand, Debug)]
pub enum WordCommand {
    Reduce { word: String },
    /// Product of one or more words.
    Mul {
        #[arg(required = true)]
        words: Vec<String>,
    },
    Inv { word: String },
    /// Primitive root and exponent.
    Root { word: String },
    /// Conjugator and cyclically reduced core.
    Cyclic { word: String },
}

#[derive(Subcommand, Debug)]
pub enum PwCommand {
    Norm { word: String },
    Len { word: String },
    Eq { left: String, right: String },
    Expand { word: String },
}

#[derive(Subcommand, Debug)]
pub enum StallingsCommand {
    Build,
    Member { word: String },
    Rank,
    Shortest,
    /// Compares `--subgroup` with another subgroup.
    Equal { other: String },
}

#[derive(Subcommand, Debug)]
pub enum GeomCommand {
    Growth {
        g: String,
    },
    Qc {
        g: String,
        /// Also search geodesics between powers up to this exponent.
        #[arg(long)]
        range: Option<u32>,
    },
    /// Root of `E(g)`, or membership of `h` in it.
    Comm {
        g: String,
        h: Option<String>,
    },
    Kbound {
        g: String,
        c: String,
    },
    Kemp {
        g: String,
        c: String,
        #[arg(long, default_value_t = 30)]
        range: i64,
    },
    Delzant {
        #[arg(required = true)]
        points: Vec<String>,
        #[arg(long)]
        a: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCommand {
    /// Builds a certificate; `g` defaults to the binding named `g`.
    Build { g: Option<String> },
    /// Re-checks a certificate read from `--input`.
    Verify,
    Run { g: Option<String> },
}

/// Why a command did not produce an answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Input(String),
    Refusal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Refusal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Refusal(m) => m,
        }
    }
}

impl From<frattini::Error> for Failure {
    fn from(e: frattini::Error) -> Failure {
        use frattini::Error::*;
        match e {
            ExpansionLimit { .. } | CommensuratorViolation { .. } | AllGeneratorsInCommensurator => {
                Failure::Refusal(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// A command's answer in both formats. `truth` picks exit code 0 or 1.
pub struct Answer {
    pub text: String,
    pub json: Value,
    pub truth: bool,
}

impl Answer {
    pub fn new(text: impl Into<String>, json: Value) -> Answer {
        Answer { text: text.into(), json, truth: true }
    }

    pub fn with_truth(mut self, truth: bool) -> Answer {
        self.truth = truth;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn load_context(opts: &Options, wants_certificate: bool) -> Result<Context, Failure> {
    let doc = match (&opts.input, wants_certificate) {
        (Some(path), false) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Some(InputDocument::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?)
        }
        _ => None,
    };
    Context::new(doc, opts.rank, opts.letters.as_deref(), opts.expand_limit)
}

fn execute(cli: &Cli) -> Result<Answer, Failure> {
    let verify = matches!(cli.command, Command::Witness(WitnessCommand::Verify));
    let ctx = load_context(&cli.options, verify)?;
    commands::dispatch(&cli.command, &cli.options, &ctx)
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Invocation { code, stdout: text, stderr: String::new() }
            } else {
                Invocation { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    let json = cli.options.format == Format::Json;
    match execute(&cli) {
        Ok(answer) => {
            let stdout = if json {
                serde_json::to_string_pretty(&answer.json).expect("json values serialize") + "\n"
            } else {
                let mut t = answer.text;
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                t
            };
            Invocation { code: if answer.truth { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(f) => {
            let stderr = format!("error: {}\n", f.message());
            let stdout = if json {
                let kind = if f.code() == 2 { "input_error" } else { "refusal" };
                let doc = serde_json::json!({ "error": kind, "message": f.message() });
                serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n"
            } else {
                String::new()
            };
            Invocation { code: f.code(), stdout, stderr }
        }
    }
}
