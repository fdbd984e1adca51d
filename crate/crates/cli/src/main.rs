mod repl;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use metta::{DirectiveOutput, EvalConfig, Metta};

#[derive(Parser)]
#[command(name = "metta", version, about = "Run MeTTa programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a .metta file, printing one line per `!` directive
    Run {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Start an interactive session
    Repl {
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args)]
struct Opts {
    /// Maximum chain of reduction steps before giving up
    #[arg(long, env = "METTA_MAX_DEPTH", default_value_t = 1000,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_depth: u64,
    /// Type-check directives before evaluating them
    #[arg(long)]
    typecheck: bool,
    /// Suppress the REPL banner
    #[arg(long)]
    quiet: bool,
}

impl Opts {
    fn config(&self) -> EvalConfig {
        EvalConfig {
            max_depth: self.max_depth as usize,
            typecheck: self.typecheck,
        }
    }
}

const EXIT_FAILURE: u8 = 1;
const EXIT_ERROR_RESULT: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_FAILURE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Run { file, opts } => match run_file(&file, &opts) {
            Ok(true) => ExitCode::from(EXIT_ERROR_RESULT),
            Ok(false) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("metta: {e:#}");
                ExitCode::from(EXIT_FAILURE)
            }
        },
        Command::Repl { opts } => {
            if !opts.quiet {
                eprintln!(
                    "MeTTa {} (:add <form>, :load <file>, :space, :quit)",
                    env!("CARGO_PKG_VERSION")
                );
            }
            let stdin = io::stdin().lock();
            let mut session = repl::Session::new(
                Metta::new(opts.config()),
                io::stdout().lock(),
                io::stderr().lock(),
            );
            match session.run(stdin) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("metta: {e}");
                    ExitCode::from(EXIT_FAILURE)
                }
            }
        }
    }
}

/// Returns whether any directive produced an error atom.
fn run_file(path: &Path, opts: &Opts) -> anyhow::Result<bool> {
    let src =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut metta = Metta::new(opts.config());
    let outputs = metta
        .run(&src)
        .with_context(|| format!("{}", path.display()))?;
    let mut out = io::stdout().lock();
    write_outputs(&mut out, &outputs)?;
    out.flush()?;
    Ok(outputs.iter().any(DirectiveOutput::has_error))
}

pub(crate) fn write_outputs(out: &mut impl Write, outputs: &[DirectiveOutput]) -> io::Result<()> {
    for output in outputs {
        for line in &output.printed {
            writeln!(out, "{line}")?;
        }
        writeln!(out, "{output}")?;
    }
    Ok(())
}
