mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Experiment};
use output::{CliError, EXIT_FAILURE};

fn run(cli: &Cli) -> Result<commands::Rendered, CliError> {
    if let Some(threads) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
    }
    match &cli.command {
        Command::Analyze(args) => commands::analyze(args, &cli.global),
        Command::Volume(args) => commands::volume_cmd(args, &cli.global),
        Command::Count(args) => commands::count(args, &cli.global),
        Command::Simulate { experiment } => match experiment {
            Experiment::Poisson(args) => commands::poisson(args, &cli.global),
            Experiment::Sweep(args) => commands::sweep(args, &cli.global),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with status 2 on usage errors, matching the parse-error code.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rendered) => {
            let mut stdout = std::io::stdout().lock();
            let body = if cli.global.json {
                &rendered.json
            } else {
                &rendered.text
            };
            let _ = writeln!(stdout, "{}", body.trim_end());
            if let Some(path) = rendered.persisted {
                log::info!("wrote {}", path.display());
                if !cli.global.json {
                    let _ = writeln!(stdout, "result written to {}", path.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code)
        }
    }
}
