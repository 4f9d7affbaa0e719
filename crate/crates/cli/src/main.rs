mod report;
mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use groupcut::catalog::Builtin;
use groupcut::closure::closure_of;
use groupcut::complex2d::{check_minimality, Additivity};
use groupcut::gridoracle::{grid_extremality_oracle, random_corpus, GridVerdict, DEFAULT_OVERSAMPLE};
use groupcut::perturbation::{epsilon_for, equivariant_sample, extremality_test, Verdict};
use groupcut::{PwlFunction, Rat};
use log::info;
use serde_json::Value;

const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_DISAGREE: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "groupcut", version, about = "Exact minimality and extremality tests for one-row cut-generating functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Catalog function: gmic, two_slope, equiv7_example_1, minimal_no_covered_interval
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    builtin: Option<String>,
    /// Parameter f of the catalog function, e.g. 4/5
    #[arg(long)]
    f: Option<Rat>,
    /// Slope parameter s of two_slope
    #[arg(long)]
    s: Option<Rat>,
    /// Function JSON file
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG diagram here
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check minimality by vertex enumeration
    Minimality {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Compute the reduced closed move presentation
    Closure {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Decide extremality
    Extremality {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Emit the finite perturbation basis and one equivariant sample per uncovered component
    Perturbations {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Compare the grid-free verdict with the finite-group oracle
    GridCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
        oversample: u64,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Draw a diagram
    Plot {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value_t = What::Function)]
        what: What,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Generate random continuous minimal functions with breakpoints on small grids
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        max_q: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum What {
    Function,
    Complex,
    Closure,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Input(e)
    }
}

fn internal(e: groupcut::Error) -> Failure {
    Failure::Internal(anyhow!(e))
}

fn load(input: &Input) -> anyhow::Result<PwlFunction> {
    if let Some(path) = &input.input {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return PwlFunction::from_json_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    let name = input.builtin.as_deref().ok_or_else(|| anyhow!("one of --builtin or --input is required"))?;
    let pi = Builtin::from_name(name, input.f.clone(), input.s.clone())?.build()?;
    Ok(pi)
}

fn emit(output: &Output, value: &Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match &output.json {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_svg(output: &Output, svg: &str) -> anyhow::Result<()> {
    match &output.svg {
        Some(path) => fs::write(path, svg).with_context(|| format!("writing {}", path.display())),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Minimality { input, output } => {
            let pi = load(&input)?;
            let rep = check_minimality(&pi);
            emit(&output, &report::minimality(&pi, &rep))?;
            if output.svg.is_some() {
                emit_svg(&output, &svg::function_plot(&pi, &[]))?;
            }
            Ok(0)
        }
        Command::Closure { input, output, budget } => {
            let pi = load(&input)?;
            let res = closure_of(&pi, budget).map_err(|e| Failure::Input(anyhow!(e)))?;
            emit(&output, &report::closure(&res))?;
            emit_svg(&output, &svg::closure_plot(&res.presentation))?;
            Ok(if res.budget_exhausted { EXIT_BUDGET } else { 0 })
        }
        Command::Extremality { input, output, budget } => {
            let pi = load(&input)?;
            let rep = extremality_test(&pi, budget).map_err(internal)?;
            emit(&output, &report::extremality(&rep))?;
            if output.svg.is_some() {
                let overlays: Vec<PwlFunction> = match (&rep.witness, &rep.epsilon) {
                    (Some(w), Some(e)) => vec![
                        PwlFunction::linear_combine(&[(Rat::one(), &rep.function), (e.clone(), w)]),
                        PwlFunction::linear_combine(&[(Rat::one(), &rep.function), (-e.clone(), w)]),
                    ],
                    _ => Vec::new(),
                };
                emit_svg(&output, &svg::function_plot(&rep.function, &overlays))?;
            }
            Ok(exit_for(&rep.verdict))
        }
        Command::Perturbations { input, output, budget } => {
            let pi = load(&input)?;
            let rep = extremality_test(&pi, budget).map_err(internal)?;
            let f = rep.function.f().clone();
            let basis: Vec<PwlFunction> = rep.finite_dim.as_ref().map(|s| s.basis.clone()).unwrap_or_default();
            let samples: Vec<PwlFunction> = match rep.verdict {
                Verdict::NotMinimal(_) => Vec::new(),
                _ => rep.components.iter().map(|c| equivariant_sample(c, &Rat::one(), &f)).collect(),
            };
            let mut items = Vec::new();
            for (kind, list) in [("finite", &basis), ("equivariant", &samples)] {
                for (k, p) in list.iter().enumerate() {
                    let epsilon = epsilon_for(&rep.function, p).map_err(internal)?.epsilon;
                    let component = (kind == "equivariant").then_some(k);
                    items.push(report::Perturbation { kind, component, function: p, epsilon });
                }
            }
            emit(&output, &report::perturbations(&rep, &items))?;
            if output.svg.is_some() {
                emit_svg(&output, &svg::function_plot(&rep.function, &[basis, samples].concat()))?;
            }
            Ok(exit_for(&rep.verdict))
        }
        Command::GridCheck { input, output, oversample, budget } => {
            let pi = load(&input)?;
            let grid = grid_extremality_oracle(&pi, oversample).map_err(|e| Failure::Input(anyhow!(e)))?;
            let rep = extremality_test(&pi, budget).map_err(internal)?;
            emit(&output, &report::grid_check(&grid, oversample, &rep.verdict))?;
            let agree = matches!(
                (&grid.verdict, &rep.verdict),
                (GridVerdict::Extreme, Verdict::Extreme) | (GridVerdict::NotExtreme, Verdict::NotExtreme)
            );
            if !agree {
                log::error!("grid oracle says {:?}, grid-free test says {:?}", grid.verdict, rep.verdict);
                return Ok(EXIT_DISAGREE);
            }
            Ok(exit_for(&rep.verdict))
        }
        Command::Plot { input, output, what, budget } => {
            let pi = load(&input)?;
            let drawing = match what {
                What::Function => svg::function_plot(&pi, &[]),
                What::Complex => svg::complex_plot(&Additivity::of(&pi).map_err(|e| Failure::Input(anyhow!(e)))?),
                What::Closure => {
                    let res = closure_of(&pi, budget).map_err(|e| Failure::Input(anyhow!(e)))?;
                    svg::closure_plot(&res.presentation)
                }
            };
            match &output.svg {
                Some(_) => emit_svg(&output, &drawing)?,
                None => print!("{drawing}"),
            }
            Ok(0)
        }
        Command::Corpus { seed, count, max_q, output } => {
            if max_q < 2 {
                return Err(Failure::Input(anyhow!("--max-q must be at least 2")));
            }
            let fns = random_corpus(seed, count, max_q);
            info!("generated {} functions", fns.len());
            if fns.len() < count {
                return Err(Failure::Input(anyhow!("only {} of {count} functions found", fns.len())));
            }
            emit(&output, &report::corpus(&fns))?;
            Ok(0)
        }
    }
}

fn exit_for(v: &Verdict) -> u8 {
    match v {
        Verdict::Unsupported(reason) if reason.contains("budget") => EXIT_BUDGET,
        _ => 0,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GROUPCUT_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
