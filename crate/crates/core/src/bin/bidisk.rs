use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bidisk::xp::{self, ConfigOverlay, REGISTRY};

#[derive(Parser)]
#[command(name = "bidisk", version, about = "Randomized experiment suites for commuting contraction pairs")]
struct Cli {
    /// Print the registered suite names and exit.
    #[arg(long)]
    list_suites: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite, or `all`.
    Run {
        /// Suite name or `all`; falls back to the config's `suite` field.
        #[arg(long)]
        suite: Option<String>,
        /// JSON config; fields left out keep the suite defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_suites {
        for s in REGISTRY {
            println!("{:<12} {}", s.name, s.instruments.split_whitespace().collect::<Vec<_>>().join(" "));
        }
        println!("{:<12} every suite above", xp::ALL);
        return ExitCode::SUCCESS;
    }
    let Some(Command::Run { suite, config, seed, trials, out }) = cli.command else {
        eprintln!("nothing to do; try `bidisk run --suite identity` or `bidisk --list-suites`");
        return ExitCode::from(2);
    };
    let overlay = match config.as_deref().map(ConfigOverlay::from_path).transpose() {
        Ok(o) => o.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let Some(suite) = suite.or_else(|| overlay.suite.clone()) else {
        eprintln!("error: no suite given on the command line or in the config");
        return ExitCode::from(2);
    };
    let report = match xp::run_named(&suite, &overlay, seed, trials) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = report.write(&out) {
        eprintln!("error writing reports to {}: {e}", out.display());
        return ExitCode::from(2);
    }
    for s in &report.suites {
        for c in &s.checks {
            println!(
                "{} {:<12} {:<40} max {:.3e} mean {:.3e} cap {:.1e} ({} trials, {} degenerate)",
                if c.pass { "PASS" } else { "FAIL" },
                s.suite,
                c.check,
                c.max_ratio,
                c.mean_ratio,
                c.cap,
                c.count,
                c.degenerate
            );
        }
    }
    println!("reports written to {}", out.display());
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
