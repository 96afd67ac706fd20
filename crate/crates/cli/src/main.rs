use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use circgeo::analyze::{analyze, AnalyzeOptions};
use circgeo::format::to_text;
use circgeo::instance::{parse_vector_text, Instance};
use circgeo::sectional::sectional;
use circgeo::suites::{run_suite, VerifyOptions};
use circgeo::{CliError, EXIT_CHECK_FAILED, EXIT_NUMERIC};
use circulant_geometry::{ArithmeticMode, Tolerance};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "circgeo", version, about = "Curvature of circulant-structure manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of an instance file, as JSON.
    Analyze {
        file: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeArgs,
        /// Sets both the relative and absolute tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Run a verification suite (or `all`).
    Verify {
        /// con-ae, reconstruct-r, l2-equivalence, l1-scalar, l0-pde,
        /// q-geometry, lie-family1, lie-family2 or all.
        suite: String,
        /// Random instances per suite.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sets both the relative and absolute tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Print the results as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Q-plane sectional curvatures and Ricci curvatures for one vector.
    Sectional {
        file: PathBuf,
        /// Components `a,b,c`; integers, decimals or `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[command(flatten)]
        mode: ModeArgs,
        /// Sets both the relative and absolute tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct ModeArgs {
    /// Rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Double precision.
    #[arg(long)]
    float: bool,
}

impl ModeArgs {
    fn mode(&self) -> Option<ArithmeticMode> {
        match (self.exact, self.float) {
            (true, _) => Some(ArithmeticMode::Exact),
            (_, true) => Some(ArithmeticMode::Float),
            _ => None,
        }
    }
}

fn tolerance(t: Option<f64>) -> Result<Tolerance, CliError> {
    Ok(match t {
        Some(t) => Tolerance::uniform(t)?,
        None => Tolerance::default(),
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Analyze {
            file,
            out,
            mode,
            tolerance: t,
        } => {
            let inst = Instance::read(&file)?;
            let opts = AnalyzeOptions {
                mode: mode.mode(),
                tolerance: tolerance(t)?,
                ..AnalyzeOptions::default()
            };
            let text = to_text(&analyze(&inst, &opts)?);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })
                    .with_context(|| "writing report")?,
                None => print!("{text}"),
            }
        }
        Command::Verify {
            suite,
            samples,
            seed,
            tolerance: t,
            json,
        } => {
            let opts = VerifyOptions {
                samples,
                seed,
                tolerance: tolerance(t)?,
            };
            let results = run_suite(&suite, &opts)?;
            if json {
                let v = serde_json::Value::Array(results.iter().map(|r| r.to_json()).collect());
                print!("{}", to_text(&v));
            } else {
                for r in &results {
                    print!("{}", r.summary(5));
                }
            }
            let failed: usize = results.iter().map(|r| r.failures.len()).sum();
            if results.iter().any(|r| !r.passed()) {
                return Err(CliError::ChecksFailed(failed).into());
            }
        }
        Command::Sectional {
            file,
            vector,
            mode,
            tolerance: t,
        } => {
            let inst = Instance::read(&file)?;
            let x = parse_vector_text(&vector)?;
            let opts = AnalyzeOptions {
                mode: mode.mode(),
                tolerance: tolerance(t)?,
                ..AnalyzeOptions::default()
            };
            let out = sectional(&inst, &x, &opts)?;
            print!("{}", out.table);
            if let Some(e) = out.error {
                return Err(CliError::Geometry(e).into());
            }
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let code = err
        .chain()
        .find_map(|e| e.downcast_ref::<CliError>())
        .map_or(EXIT_NUMERIC, CliError::exit_code);
    debug_assert!(code >= EXIT_CHECK_FAILED);
    code as u8
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
