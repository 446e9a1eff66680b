use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sturmfib::SeedMatrix;
use sturmfib_cli::commands::EXIT_INVALID;
use sturmfib_cli::{cmd_analyze, cmd_generate, cmd_periodic, cmd_verify, cmd_word, parse_config, CliError, Outcome};
use sturmfib_cli::{Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "sturmfib", version, about = "Growth of random Fibonacci recurrences scheduled by balanced words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the growth case and estimate L and M.
    Analyze(Common),
    /// Generate exact terms, root samples and checkpoint ratios.
    Generate(Common),
    /// Run the lemma falsification suite.
    Verify(Common),
    /// Print the symbol stream and per-level block frequencies.
    Word(Common),
    /// Growth rate of a periodically repeated word, e.g. `A^3B^3` or `1,1,2`.
    Periodic {
        word: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for report and table files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    terms: Option<u64>,
    #[arg(long)]
    digit_cap: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Print big integers in full instead of abbreviated.
    #[arg(long)]
    full_digits: bool,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            levels: self.levels,
            terms: self.terms,
            digit_cap: self.digit_cap,
            trials: self.trials,
            seed: self.seed,
            full_digits: self.full_digits,
            out: self.out.clone(),
        }
    }

    fn load(&self) -> Result<Option<RunConfig>, CliError> {
        let Some(path) = &self.config else { return Ok(None) };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
        let mut cfg = parse_config(&text)?;
        cfg.apply(&self.overrides())?;
        Ok(Some(cfg))
    }

    fn require(&self) -> Result<RunConfig, CliError> {
        self.load()?.ok_or_else(|| CliError::Usage("--config is required".into()))
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Analyze(c) => cmd_analyze(&c.require()?),
        Command::Generate(c) => cmd_generate(&c.require()?),
        Command::Word(c) => cmd_word(&c.require()?),
        Command::Verify(c) => match c.load()? {
            Some(cfg) => cmd_verify(&cfg, true),
            None => {
                let mut cfg = RunConfig::for_spec(sturmfib::oracle::standard_linear_spec());
                cfg.apply(&c.overrides())?;
                cmd_verify(&cfg, false)
            }
        },
        Command::Periodic { word, common } => {
            let seeds = match common.load()? {
                Some(cfg) => cfg.spec.seeds().to_vec(),
                None => vec![SeedMatrix::A, SeedMatrix::B],
            };
            cmd_periodic(&word, &seeds, common.full_digits)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
