use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lama_infer::driver::{check_file, emit_constraints, run_corpus, with_big_stack};
use lama_infer::solver::SolveOptions;

#[derive(Parser)]
#[command(
    name = "lama-infer",
    version,
    about = "Shape-type inference for Lama programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer types for one program.
    Check {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check every `.lama` file of a directory against its `.expected` file.
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StatsFormat {
    Lines,
    Json,
}

#[derive(Args)]
struct Flags {
    /// Engine steps before giving up.
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    /// Answers to search for; only the first is printed.
    #[arg(long, default_value_t = 1)]
    max_answers: usize,
    /// Bound on constructors in one S-expression type.
    #[arg(long)]
    max_constructors: Option<usize>,
    /// Print run counters.
    #[arg(long)]
    stats: bool,
    #[arg(long, value_enum, default_value = "lines")]
    stats_format: StatsFormat,
    /// Print the generated constraints before solving.
    #[arg(long)]
    emit_constraints: bool,
    /// Disable pruning of free function types and constructor lists.
    #[arg(long)]
    no_prune: bool,
}

impl Flags {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            max_answers: self.max_answers.max(1),
            fuel: self.max_steps,
            max_constructors: self.max_constructors,
            prune: !self.no_prune,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = with_big_stack(move || run(cli));
    ExitCode::from(code)
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Check { file, flags } => {
            if flags.emit_constraints {
                match std::fs::read_to_string(&file)
                    .map_err(|e| e.to_string())
                    .and_then(|s| emit_constraints(&s))
                {
                    Ok(text) => print!("{text}"),
                    Err(e) => eprintln!("{e}"),
                }
            }
            let report = check_file(&file, &flags.options());
            print!("{}", report.render());
            if flags.stats {
                match flags.stats_format {
                    StatsFormat::Lines => print!("{}", report.stats.to_lines()),
                    StatsFormat::Json => println!("{}", report.stats.to_json()),
                }
            }
            report.verdict.exit_code() as u8
        }
        Command::Corpus { dir, flags } => {
            let summary = match run_corpus(&dir, &flags.options()) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: {e}", dir.display());
                    return 3;
                }
            };
            for e in &summary.entries {
                if let lama_infer::driver::EntryStatus::Skipped(why) = &e.status {
                    eprintln!("warning: {}: {why}", e.file.display());
                }
                if flags.emit_constraints {
                    if let Ok(text) = std::fs::read_to_string(&e.file)
                        .map_err(|e| e.to_string())
                        .and_then(|s| emit_constraints(&s))
                    {
                        print!("== {}\n{text}", e.file.display());
                    }
                }
            }
            print!("{}", summary.render());
            if flags.stats {
                let totals = summary.totals();
                match flags.stats_format {
                    StatsFormat::Lines => print!("{}", totals.to_lines()),
                    StatsFormat::Json => println!("{}", totals.to_json()),
                }
            }
            u8::from(summary.failed() > 0)
        }
    }
}
