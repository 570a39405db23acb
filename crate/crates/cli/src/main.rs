use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use displace_cli::{
    cmd_check, cmd_elim, cmd_parse, cmd_prove, cmd_render, parse_goal, Format, Outcome, RunConfig,
    EXIT_FAIL, LEXICON_ENV,
};

/// Parser and theorem prover for the displacement calculus.
#[derive(Parser)]
#[command(name = "displace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Lexicon file (default: the shipped lexicon).
    #[arg(long, env = LEXICON_ENV, global = true)]
    lexicon: Option<PathBuf>,
    /// Goal type for sentences.
    #[arg(long, default_value = "S", global = true)]
    goal: String,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Proofs listed per lexical insertion or sequent.
    #[arg(long, default_value_t = 1000, global = true)]
    max_proofs: usize,
    /// Search budget in seconds.
    #[arg(long, global = true)]
    timeout: Option<f64>,
    /// List one reading per proof instead of merging alpha-equal ones.
    #[arg(long, global = true)]
    no_dedup: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a sentence and print its readings.
    Parse {
        sentence: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Search for cut-free proofs of a sequent such as "N, N\S => S".
    Prove {
        sequent: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check a proof in JSON (file path, or stdin when omitted).
    Check { file: Option<PathBuf> },
    /// Eliminate cuts from a JSON proof.
    Elim {
        file: Option<PathBuf>,
        /// Print each reduction step as a JSON line on stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Render a JSON proof as text, LaTeX or normalized JSON.
    Render {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let timeout = match self.timeout {
            Some(s) if !(s > 0.0 && s.is_finite()) => anyhow::bail!("--timeout must be positive"),
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(RunConfig {
            lexicon: self.lexicon.clone(),
            goal: parse_goal(&self.goal)?,
            format: self.format,
            max_proofs: self.max_proofs,
            timeout,
            dedup: !self.no_dedup,
        })
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<String> {
    match file {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Parse { sentence, common } => cmd_parse(&sentence.join(" "), &common.config()?),
        Command::Prove { sequent, common } => cmd_prove(&sequent, &common.config()?),
        Command::Check { file } => Ok(cmd_check(&read_input(&file)?)),
        Command::Elim { file, trace } => cmd_elim(&read_input(&file)?, trace),
        Command::Render { file, format } => cmd_render(&read_input(&file)?, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAIL as u8)
        }
    }
}
