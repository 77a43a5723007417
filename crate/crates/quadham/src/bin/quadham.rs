use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use quadham::adjoint::build_adjoint;
use quadham::cli::{
    analyze, ep_find, parse_complex, parse_range, parse_times, run_sweep, sweep_to_csv,
    sweep_to_json, trajectory_csv, verify_suite, CliError, EpFindConfig, SweepAxis,
    SweepConfig,
};
use quadham::model_file::parse_model_file;
use quadham::models::{instantiate, ModelKind, ModelSpec};
use quadham::symmetry::SymmetrySpec;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "quadham",
    about = "Algebraic analysis of quadratic (non-)Hermitian Hamiltonians",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ModelArgs {
    /// JSON model file (see README for the schema)
    #[arg(long, conflicts_with = "builtin")]
    model: Option<PathBuf>,
    /// Built-in model: oned, coupled_xy, coupled_pp, angular
    #[arg(long)]
    builtin: Option<String>,
    /// Frequency-like parameter a (2-mode models)
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Coupling b as 're,im' or a bare real
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

impl ModelArgs {
    fn load(&self) -> Result<(ModelSpec, Vec<SymmetrySpec>), CliError> {
        if let Some(path) = &self.model {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
            let parsed = parse_model_file(&text)?;
            let mut spec = parsed.spec;
            if let Some(a) = self.a {
                spec.a = a;
            }
            if let Some(b) = &self.b {
                spec.b = parse_complex(b).map_err(CliError::Validation)?;
            }
            return Ok((spec, parsed.symmetries));
        }
        let name = self
            .builtin
            .as_deref()
            .ok_or_else(|| CliError::Validation("need --model or --builtin".to_string()))?;
        let kind = ModelKind::parse(name)
            .ok_or_else(|| CliError::Validation(format!("unknown built-in model '{name}'")))?;
        if kind == ModelKind::Custom {
            return Err(CliError::Validation(
                "custom models require --model with a gamma matrix".to_string(),
            ));
        }
        let b = match &self.b {
            Some(s) => parse_complex(s).map_err(CliError::Validation)?,
            None => Complex64::new(0.0, 0.0),
        };
        Ok((ModelSpec::builtin(kind, self.a.unwrap_or(1.0), b), Vec::new()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full report: matrices, spectrum, classification, symmetries, E0
    Analyze {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter and tabulate eigenvalues and classification
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Axis to sweep: b_real, b_imag or a
        #[arg(long)]
        param: String,
        /// Sweep interval as 'lo:hi'
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 41)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate a real-to-complex transition by bisection
    EpFind {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        param: String,
        /// Bracket as 'lo:hi'; endpoints must classify differently
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Check catalog and model-file symmetries
    SymmetryCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit Heisenberg-picture coefficient trajectories as CSV
    Evolve {
        #[command(flatten)]
        model: ModelArgs,
        /// Sample times as 't0:t1:n'
        #[arg(long, allow_hyphen_values = true)]
        times: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun the closed-form reproduction suite
    Verify,
}

fn write_out(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_axis(s: &str) -> Result<SweepAxis, CliError> {
    SweepAxis::parse(s).ok_or_else(|| {
        CliError::Validation(format!("unknown sweep axis '{s}' (use b_real, b_imag or a)"))
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { model, out } => {
            let (spec, syms) = model.load()?;
            let report = analyze(&spec, &syms)?;
            let mut text = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            text.push('\n');
            write_out(out.as_ref(), &text)
        }
        Command::Sweep { model, param, range, steps, format, out } => {
            let (spec, _) = model.load()?;
            let axis = parse_axis(&param)?;
            let (lo, hi) = parse_range(&range).map_err(CliError::Validation)?;
            let cfg = SweepConfig { template: spec.clone(), axis, lo, hi, steps };
            let rows = run_sweep(&cfg)?;
            let text = match format {
                Format::Csv => sweep_to_csv(&rows, spec.modes),
                Format::Json => {
                    let mut s = sweep_to_json(&rows);
                    s.push('\n');
                    s
                }
            };
            write_out(out.as_ref(), &text)
        }
        Command::EpFind { model, param, range, tol } => {
            let (spec, _) = model.load()?;
            let axis = parse_axis(&param)?;
            let bracket = parse_range(&range).map_err(CliError::Validation)?;
            let res = ep_find(&EpFindConfig { template: spec, axis, bracket, tol })?;
            println!(
                "{}",
                serde_json::json!({
                    "param": res.param,
                    "colliding_pair": [
                        [res.colliding_pair[0].re, res.colliding_pair[0].im],
                        [res.colliding_pair[1].re, res.colliding_pair[1].im],
                    ],
                    "algebraic": res.defect.0,
                    "geometric": res.defect.1,
                })
            );
            Ok(())
        }
        Command::SymmetryCheck { model, out } => {
            let (spec, syms) = model.load()?;
            let report = analyze(&spec, &syms)?;
            let mut text = serde_json::to_string_pretty(&report.symmetries)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            text.push('\n');
            write_out(out.as_ref(), &text)
        }
        Command::Evolve { model, times, out } => {
            let (spec, _) = model.load()?;
            let times = parse_times(&times).map_err(CliError::Validation)?;
            let (poly, _) = instantiate(&spec)?;
            let rep = build_adjoint(&poly)?;
            let text = trajectory_csv(&rep, &times)?;
            write_out(out.as_ref(), &text)
        }
        Command::Verify => {
            let results = verify_suite();
            let mut failed = 0usize;
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                println!(
                    "{status}  {:<42}  expected {} | got {}",
                    r.name, r.expected, r.got
                );
                if !r.pass {
                    failed += 1;
                }
            }
            println!("{} checks, {} failed", results.len(), failed);
            if failed > 0 {
                return Err(CliError::Internal(format!("{failed} checks failed")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
