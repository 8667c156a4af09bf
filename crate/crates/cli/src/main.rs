mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use ebloch::bloch::Mode;
use ebloch::exec::Execution;
use ebloch::flattening::{
    build_j_complex, flattening_system, h1_mod2_of_complex, homology_of_j, integral_defect, omega,
};
use ebloch::gluing::{solve_shapes, SolveOptions};
use ebloch::pipeline::{run_document, PipelineError, PipelineOptions, Stage};
use ebloch::triangulation::{parse_triangulation, Triangulation};
use ebloch::verify::{run_all, run_suite, Suite, VerifyConfig};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ebloch", version, about = "Complex volume of cusped hyperbolic 3-manifolds from ideal triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ep,
    Eep,
}

#[derive(Subcommand)]
enum Command {
    /// Solve shapes and flattenings, then print vol and cs.
    Cvol {
        file: PathBuf,
        /// Acceptance tolerance; the shape solve runs to at least 1e-12.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "ep")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = ebloch::gluing::DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Run the randomized identity suites.
    Verify {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Run a single suite by name.
        #[arg(long)]
        suite: Option<String>,
        /// Evaluate instances on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Homology of the J complex.
    Homology {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Edge classes, vertex links and orientation signs.
    Edges {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Solve for a combinatorial flattening and report every condition.
    Flatten {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> anyhow::Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => print!("{}", text(value)),
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<Triangulation> {
    let doc = read(path)?;
    parse_triangulation(&doc).map_err(|source| PipelineError { stage: Stage::Parse, source }.into())
}

fn solve_options(tolerance: f64, max_iter: usize) -> anyhow::Result<SolveOptions> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        bail!("tolerance must be positive, got {tolerance}");
    }
    Ok(SolveOptions { tolerance: tolerance.min(ebloch::gluing::DEFAULT_TOLERANCE), max_iter })
}

fn cvol(file: &Path, tolerance: f64, mode: ModeArg, format: Format, max_iter: usize) -> anyhow::Result<bool> {
    let opts = PipelineOptions {
        solve: solve_options(tolerance, max_iter)?,
        mode: match mode {
            ModeArg::Ep => Mode::Ep,
            ModeArg::Eep => Mode::Eep,
        },
        initial: None,
    };
    let report = run_document(&read(file)?, &opts)?;
    let out = report::Cvol::new(&report);
    emit(format, &out, report::Cvol::text)?;
    let r = &report.residuals;
    Ok(r.gluing <= tolerance && r.log_parameters <= tolerance && r.integer_system == 0)
}

fn verify(
    count: usize,
    seed: u64,
    tolerance: f64,
    format: Format,
    suite: Option<&str>,
    sequential: bool,
) -> anyhow::Result<bool> {
    let cfg = VerifyConfig {
        count,
        seed,
        tolerance,
        execution: if sequential { Execution::Sequential } else { Execution::Parallel },
    };
    let suites = match suite {
        Some(name) => {
            let Some(s) = Suite::from_name(name) else {
                let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                bail!("unknown suite {name:?}; known suites: {}", known.join(", "));
            };
            vec![run_suite(s, &cfg)]
        }
        None => run_all(&cfg),
    };
    let passed = suites.iter().all(|r| r.passed());
    let out = report::Verify { seed, count, tolerance, passed, suites };
    emit(format, &out, report::Verify::text)?;
    Ok(passed)
}

fn homology(file: &Path, format: Format) -> anyhow::Result<bool> {
    let t = load(file)?;
    let jc = build_j_complex(&t)?;
    let chain = jc.is_chain_complex()?;
    let h = homology_of_j(&jc)?;
    let out = report::Homology::new(&h, chain, h1_mod2_of_complex(&t));
    emit(format, &out, report::Homology::text)?;
    Ok(chain)
}

fn edges(file: &Path, format: Format) -> anyhow::Result<bool> {
    let t = load(file)?;
    let out = report::Edges::new(&t)?;
    emit(format, &out, report::Edges::text)?;
    Ok(true)
}

fn flatten(file: &Path, tolerance: f64, format: Format) -> anyhow::Result<bool> {
    let t = load(file)?;
    let at = |stage| move |source| PipelineError { stage, source };
    let shapes = solve_shapes(&t, None, solve_options(tolerance, ebloch::gluing::DEFAULT_MAX_ITER)?)
        .map_err(at(Stage::Shapes))?;
    let defect = build_j_complex(&t)
        .and_then(|jc| integral_defect(&t, &jc, &omega(&shapes.shapes)?))
        .map_err(at(Stage::Flattenings))?;
    let a = flattening_system(&t, &shapes.shapes)
        .and_then(|s| s.particular())
        .map_err(at(Stage::Flattenings))?;
    let ok = a.all_conditions_hold(tolerance);
    let mut warnings = shapes.warnings.clone();
    if a.edge_flattened_only {
        warnings.push("edge-flattened only, unverified: no cusp paths in the input".into());
    }
    if !t.is_order_preserving() {
        warnings.push("face gluings do not preserve vertex order; parities are not meaningful".into());
    }
    let out = report::Flatten::new(&shapes.shapes, &a, defect, warnings);
    emit(format, &out, report::Flatten::text)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Cvol { file, tolerance, mode, format, max_iter } => cvol(file, *tolerance, *mode, *format, *max_iter),
        Command::Verify { count, seed, tolerance, format, suite, sequential } => {
            verify(*count, *seed, *tolerance, *format, suite.as_deref(), *sequential)
        }
        Command::Homology { file, format } => homology(file, *format),
        Command::Edges { file, format } => edges(file, *format),
        Command::Flatten { file, tolerance, format } => flatten(file, *tolerance, *format),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
