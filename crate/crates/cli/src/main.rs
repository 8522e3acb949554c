use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use divalg_cli::report::SCHEMA_VERSION;
use divalg_cli::{render_human, run, RunOptions};

#[derive(Parser)]
#[command(
    name = "divalg",
    version,
    about = "Divisorial algebras and modules: generators, certificates, witnesses"
)]
struct Cli {
    /// Print the report schema version and exit.
    #[arg(long, global = true)]
    schema_version: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a job config.
    Run {
        config: PathBuf,
        /// Task kind to run (repeatable); overrides the config's task list.
        #[arg(long = "task")]
        tasks: Vec<String>,
        #[arg(long)]
        divisor: Option<String>,
        #[arg(long)]
        max_degree: Option<i64>,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long)]
        probe: Option<i64>,
        /// Exit with status 1 if any task fails or errors.
        #[arg(long)]
        strict: bool,
        /// Run tasks concurrently.
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        /// Record wall-clock time per task (reports are then not reproducible).
        #[arg(long)]
        timing: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.schema_version {
        println!("{SCHEMA_VERSION}");
        return ExitCode::SUCCESS;
    }
    let Some(Command::Run {
        config,
        tasks,
        divisor,
        max_degree,
        bound,
        probe,
        strict,
        parallel,
        out,
        timing,
    }) = cli.command
    else {
        eprintln!("nothing to do; see `divalg --help`");
        return ExitCode::from(2);
    };
    let opts = RunOptions {
        config,
        tasks,
        divisor,
        max_degree,
        bound,
        probe,
        strict,
        parallel,
        out,
        timing,
    };
    match run(&opts) {
        Ok(summary) => {
            print!("{}", render_human(&summary));
            ExitCode::from(summary.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
