use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dixlab::config::{read_config_file, OUT_DIR_ENV};
use dixlab::{run, Cli, CliError, RunConfig};

fn execute(cli: Cli) -> Result<u8, CliError> {
    let flags = match &cli.config {
        Some(path) => cli.flags.overridden_by(read_config_file(path)?),
        None => cli.flags,
    };
    let cfg = RunConfig::resolve(cli.command, flags)?;
    let outcome = run(&cfg)?;
    let text = outcome.render(cfg.format)?;
    let env_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    match cfg.output_path(env_dir.as_deref()) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&path, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    // clap would exit 2 on bad flags; 2 is reserved for informative verdicts
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
