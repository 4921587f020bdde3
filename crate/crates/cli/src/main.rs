mod args;
mod commands;
mod error;
mod manifest;

use std::io::{IsTerminal, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, ReifCommand};
use commands::{Outcome, SimArgs};
use error::{CliError, EXIT_FALSE, EXIT_INPUT, EXIT_OK};

fn color_enabled() -> bool {
    match std::env::var("RIG_COLOR").as_deref() {
        Ok("never") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

fn paint(text: &str, code: &str) -> String {
    if color_enabled() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

/// Writes the report to stdout. A closed pipe is not an error.
fn emit(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("reports serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate { game, morphism, depth } => commands::validate(game, morphism.as_deref(), *depth),
        Command::Solve { input } => commands::solve_cmd(input, g),
        Command::Strategy { input, out } => commands::strategy_cmd(input, out.as_deref(), g),
        Command::Verify { input, strategy } => commands::verify_cmd(input, strategy.as_deref(), g),
        Command::Refute {
            game,
            morphism,
            strategy,
            out,
        } => commands::refute_cmd(game, morphism, strategy.as_deref(), out.as_deref(), g),
        Command::Simulate {
            game,
            morphism,
            strategy,
            env_strategy,
            rounds,
            samples,
            seed,
            transcripts,
        } => commands::simulate_cmd(
            &SimArgs {
                game,
                morphism,
                strategy: strategy.as_deref(),
                env_strategy: env_strategy.as_deref(),
                rounds: *rounds,
                samples: *samples,
                seed: *seed,
                transcripts: *transcripts,
            },
            g,
        ),
        Command::Prob {
            game,
            morphism,
            strategy,
            env_strategy,
            horizon,
            exact,
        } => commands::prob_cmd(
            game,
            morphism,
            strategy.as_deref(),
            env_strategy.as_deref(),
            *horizon,
            *exact,
            g,
        ),
        Command::Reif {
            command: ReifCommand::Compile {
                input,
                out_game,
                out_morphism,
            },
        } => commands::reif_compile(input, out_game, out_morphism),
        Command::Counterexample {
            check,
            grid,
            certificate,
        } => commands::counterexample_cmd(*check, *grid, certificate.as_deref(), g),
        Command::Demo { name, out_dir, seed } => commands::demo_cmd(name, out_dir.as_deref(), *seed, g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}: {e}", paint("error", "31"));
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(mut out) => {
            if cli.global.timing {
                out.manifest.timing = Some(json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 }));
            }
            out.report.insert(
                "manifest".into(),
                serde_json::to_value(&out.manifest).expect("manifest serializes"),
            );
            emit(&Value::Object(out.report));
            let code = if out.verdict { EXIT_OK } else { EXIT_FALSE };
            let tag = if out.verdict { paint("ok", "32") } else { paint("false", "33") };
            eprintln!("{tag}: {}", out.summary);
            ExitCode::from(code as u8)
        }
        Err(e) => {
            let code = e.exit_code();
            emit(&json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
            eprintln!("{}: {e}", paint("error", "31"));
            ExitCode::from(code as u8)
        }
    }
}
