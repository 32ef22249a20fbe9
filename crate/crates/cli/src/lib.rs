//! Command-line front end for `toric-mle`.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod output;
pub mod selftest;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

use args::{Cli, Command, DiscriminantCommand, Format, GeneratorsCommand, MleCommand};
use error::{CliError, CliResult};
use output::Success;

/// Outcome of one invocation: the JSON envelope, its rendering and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub envelope: Value,
    pub stdout: String,
}

impl CommandResult {
    pub fn is_ok(&self) -> bool {
        self.exit_code == 0
    }
}

fn dispatch(cli: &Cli) -> Result<Success, (CliError, Option<Value>)> {
    let plain = |r: CliResult<Success>| r.map_err(|e| (e, None));
    match &cli.command {
        Command::Mle(m) => plain(match m {
            MleCommand::Loglinear { model, data, max_iter } => {
                commands::mle_loglinear(model, data, cli.tol, *max_iter)
            }
            MleCommand::Delpezzo { label, data } => commands::mle_delpezzo(label, data, cli.tol),
            MleCommand::Phylo { tree, data, method } => commands::mle_phylo(tree, data, *method),
            MleCommand::Tfp { config, data } => commands::mle_tfp(config, data, cli.tol),
        }),
        Command::Catalog { label } => plain(commands::catalog(label.as_deref())),
        Command::Discriminant(d) => plain(match d {
            DiscriminantCommand::Veronese { c } => commands::veronese(c),
            DiscriminantCommand::CheckSingular { model, theta } => commands::check_singular(model, theta, cli.tol),
        }),
        Command::Generators(g) => plain(match g {
            GeneratorsCommand::Tfp { config, f, g } => commands::generators_tfp(config, f.as_deref(), g.as_deref()),
            GeneratorsCommand::Phylo { tree } => commands::generators_phylo(tree),
        }),
        Command::Horn { tree } => plain(commands::horn(tree)),
        Command::Selftest { filter } => {
            let ctx = selftest::Context { seed: cli.seed.unwrap_or(1), ..Default::default() };
            selftest_outcome(&selftest::run(&ctx, filter.as_deref()))
        }
    }
}

/// Wraps selftest results; any failed check makes the whole command fail.
pub fn selftest_outcome(results: &[selftest::CheckResult]) -> Result<Success, (CliError, Option<Value>)> {
    let report = selftest::report(results);
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        Err((CliError::SelftestFailed { failed, total: results.len() }, Some(report)))
    } else {
        Ok(Success::new(report))
    }
}

fn finish(outcome: Result<Success, (CliError, Option<Value>)>, format: Format) -> CommandResult {
    let (exit_code, envelope) = match outcome {
        Ok(s) => (0, output::ok_envelope(&s)),
        Err((e, payload)) => (e.exit_code(), output::error_envelope(&e, payload.as_ref())),
    };
    let stdout = output::render(&envelope, format);
    CommandResult { exit_code, envelope, stdout }
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let format = if args.windows(2).any(|w| w[0] == "--format" && w[1] == "table")
        || args.iter().any(|a| a == "--format=table")
    {
        Format::Table
    } else {
        Format::Json
    };
    match Cli::try_parse_from(&args) {
        Ok(cli) => finish(dispatch(&cli), cli.format),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            CommandResult { exit_code: 0, envelope: Value::Null, stdout: e.to_string() }
        }
        Err(e) => {
            let message = e.render().to_string().trim_end().to_string();
            finish(Err((CliError::Usage(message), None)), format)
        }
    }
}
