//! `weingarten`: curvature tables, linear Weingarten fits, exact identity
//! replays, surface generation, and OBJ meshes for translation surfaces.
//!
//! Exit codes: 0 success; 1 a verification or check failed; 2 bad
//! specification or parse error; 3 no valid samples or cells on the grid;
//! 4 a fit returned GeneralLinearWeingarten (theorem-violation alarm).

mod emit;
mod input;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use weingarten_core::{
    closed_form_separated, fit_linear_weingarten, integrate_separated_profile, run_suite,
    suite_passes, FitError, FitTolerances, Mutation, SuiteId,
};

use emit::{curvature_csv, fmt_f, mesh_obj, profile_csv, write_output};
use input::{parse_grid, resolve_surface, CliError, SurfaceArgs};

#[derive(Parser)]
#[command(
    name = "weingarten",
    version,
    about = "Curvature and linear Weingarten analysis of translation surfaces z = f(x) + g(y)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample H, K, W over a grid and write CSV.
    Curvature(SampleCmd),
    /// Fit aH + bK = c over a grid and classify the relation.
    Fit(SampleCmd),
    /// Replay the classification's identity chains in exact arithmetic.
    Verify(VerifyCmd),
    /// Export the graph as a Wavefront OBJ quad mesh.
    Mesh(SampleCmd),
    /// Emit a classified family surface, optionally RK4 cross-checked.
    Generate(GenerateCmd),
}

#[derive(Args)]
struct SampleCmd {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Grid as x_start:x_stop:x_count,y_start:y_stop:y_count.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyCmd {
    /// Suite to run: c0, c1, lorentzian, or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Seed for the randomized identity-testing samples.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the JSON report; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Test hook: deliberately break one documented derivation step.
    #[arg(long, hide = true)]
    inject_mutation: Option<String>,
}

#[derive(Args)]
struct GenerateCmd {
    /// Family: plane, cylinder, paraboloid, or scherk.
    family: String,
    /// Scherk parameter (> 0); defaults to 1.
    #[arg(long)]
    lambda: Option<f64>,
    /// Profile expression for the cylinder family; defaults to t^2.
    #[arg(long)]
    profile: Option<String>,
    /// Integrate the profile equation by RK4 and require the maximum
    /// deviation from the closed form to stay below 1e-9 (scherk only).
    #[arg(long)]
    check: bool,
    /// Write the integrated profile table as CSV (scherk only).
    #[arg(long)]
    profile_out: Option<PathBuf>,
    /// RK4 step for --check and --profile-out.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Output path for the surface JSON; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curvature(cmd) => cmd_curvature(&cmd),
        Command::Fit(cmd) => cmd_fit(&cmd),
        Command::Verify(cmd) => cmd_verify(&cmd),
        Command::Mesh(cmd) => cmd_mesh(&cmd),
        Command::Generate(cmd) => cmd_generate(&cmd),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn cmd_curvature(cmd: &SampleCmd) -> Result<ExitCode, CliError> {
    let grid = parse_grid(&cmd.grid)?;
    let surface = resolve_surface(&cmd.surface, &grid)?;
    let samples = surface.sample_grid(&grid).map_err(CliError::from_surface)?;
    write_output(cmd.out.as_deref(), &curvature_csv(&samples))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_fit(cmd: &SampleCmd) -> Result<ExitCode, CliError> {
    let grid = parse_grid(&cmd.grid)?;
    let surface = resolve_surface(&cmd.surface, &grid)?;
    let samples = surface.sample_grid(&grid).map_err(CliError::from_surface)?;
    let fit = fit_linear_weingarten(&samples, &FitTolerances::default())
        .map_err(|e: FitError| CliError::NoValidData(e.to_string()))?;
    let report = fit.report();
    let mut json = serde_json::to_string(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    json.push('\n');
    write_output(cmd.out.as_deref(), &json)?;
    // A two-sided relation contradicts the classification; make it loud.
    if report.verdict == "GeneralLinearWeingarten" {
        eprintln!("warning: GeneralLinearWeingarten verdict on a translation surface");
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cmd: &VerifyCmd) -> Result<ExitCode, CliError> {
    let suite = SuiteId::parse(&cmd.suite)
        .ok_or_else(|| CliError::Spec(format!("unknown suite '{}'", cmd.suite)))?;
    let mutation = match &cmd.inject_mutation {
        None => None,
        Some(name) => Some(
            Mutation::from_name(name)
                .ok_or_else(|| CliError::Spec(format!("unknown mutation '{name}'")))?,
        ),
    };
    let reports = run_suite(suite, mutation, cmd.seed);
    let mut json =
        serde_json::to_string(&reports).map_err(|e| CliError::Internal(e.to_string()))?;
    json.push('\n');
    write_output(cmd.out.as_deref(), &json)?;
    if suite_passes(&reports) {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification failed");
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_mesh(cmd: &SampleCmd) -> Result<ExitCode, CliError> {
    let grid = parse_grid(&cmd.grid)?;
    let surface = resolve_surface(&cmd.surface, &grid)?;
    let samples = surface.sample_grid(&grid).map_err(CliError::from_surface)?;
    let obj = mesh_obj(&surface, &grid, &samples)?;
    write_output(cmd.out.as_deref(), &obj)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(cmd: &GenerateCmd) -> Result<ExitCode, CliError> {
    let family = input::parse_family(&cmd.family, cmd.lambda, cmd.profile.as_deref())?;
    let surface =
        weingarten_core::make_family(&family).map_err(|e| CliError::Spec(e.to_string()))?;
    let spec = surface
        .to_spec()
        .ok_or_else(|| CliError::Internal("family surface has no serialized form".into()))?;
    let mut json = serde_json::to_string(&spec).map_err(|e| CliError::Internal(e.to_string()))?;
    json.push('\n');
    write_output(cmd.out.as_deref(), &json)?;

    if !(cmd.check || cmd.profile_out.is_some()) {
        return Ok(ExitCode::SUCCESS);
    }
    let lambda = match family {
        weingarten_core::Family::Scherk(lambda) => lambda,
        _ => {
            return Err(CliError::Spec(
                "--check and --profile-out integrate the separated profile equation; \
                 they apply only to the scherk family"
                    .into(),
            ))
        }
    };
    // The profile satisfies f'' = mu (1 + f'^2) with mu = lambda^2.
    let mu = lambda * lambda;
    let x_end = 0.5 / mu;
    let rows = integrate_separated_profile(mu, x_end, cmd.step)
        .map_err(|e| CliError::Spec(e.to_string()))?;
    if let Some(path) = &cmd.profile_out {
        write_output(Some(path), &profile_csv(&rows))?;
    }
    if cmd.check {
        let max_dev = rows
            .iter()
            .map(|r| (r.f - closed_form_separated(mu, r.x)).abs())
            .fold(0.0, f64::max);
        eprintln!(
            "check: max deviation from closed form over [0, {}] = {}",
            fmt_f(x_end),
            fmt_f(max_dev)
        );
        if !(max_dev < 1e-9) {
            eprintln!("check failed: deviation exceeds 1e-9");
            return Ok(ExitCode::FAILURE);
        }
    }
    Ok(ExitCode::SUCCESS)
}
