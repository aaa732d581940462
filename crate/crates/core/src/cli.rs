//! The `planim` command line: `render`, `validate` and `check-profile`.
//!
//! Exit codes: 0 success, 1 validation failure (plan or profile), 2 input,
//! parse or usage error, 3 network or planning-service error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::pipeline::{Inputs, PipelineError};
use crate::plan::{execute_plan, goal_report};
use crate::render::{RenderSettings, DEFAULT_FPS};
use crate::service::{default_endpoint, solve_remote, SolveRequest, DEFAULT_TIMEOUT_SECONDS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SERVICE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "planim",
    version,
    about = "Animate PDDL plans from a declarative animation profile"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute a plan and write the VFG document, optionally SVG frames and a GIF.
    Render(RenderArgs),
    /// Check that a plan is executable and reaches the goal.
    Validate(ValidateArgs),
    /// Cross-check an animation profile against a domain and problem.
    CheckProfile(CheckArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["plan", "solve"])))]
struct RenderArgs {
    #[arg(long)]
    domain: PathBuf,
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    animation: PathBuf,
    /// Plan file, one `(action arg…)` per line.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Ask the planning service for a plan instead.
    #[arg(long)]
    solve: bool,
    /// Solve endpoint (default: $PLANIM_ENDPOINT or the public service).
    #[arg(long, requires = "solve")]
    endpoint: Option<String>,
    /// Seconds to wait for the planning service.
    #[arg(long, requires = "solve", default_value_t = DEFAULT_TIMEOUT_SECONDS, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,
    /// Where to write the VFG document.
    #[arg(long)]
    out: PathBuf,
    /// Directory for SVG frames.
    #[arg(long)]
    frames: Option<PathBuf>,
    /// Where to write an animated GIF.
    #[arg(long)]
    gif: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_FPS, value_parser = clap::value_parser!(u32).range(1..))]
    fps: u32,
    /// Seed for `random` colors.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    domain: PathBuf,
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    plan: PathBuf,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    domain: PathBuf,
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    animation: PathBuf,
}

/// A failure already carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match e {
            PipelineError::Exec(_) => EXIT_INVALID,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let fail = |e: &dyn std::fmt::Display| Failure::input(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.as_file().sync_all().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn parse_inputs(domain: &Path, problem: &Path, animation: &Path) -> Result<Inputs, Failure> {
    Ok(Inputs::parse(&read(domain)?, &read(problem)?, &read(animation)?)?)
}

fn render(args: &RenderArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let inputs = parse_inputs(&args.domain, &args.problem, &args.animation)?;
    let plan = match &args.plan {
        Some(path) => inputs.parse_plan(&read(path)?)?,
        None => {
            let request = SolveRequest {
                domain_text: read(&args.domain)?,
                problem_text: read(&args.problem)?,
                endpoint_url: args.endpoint.clone().unwrap_or_else(default_endpoint),
                timeout_seconds: args.timeout,
            };
            solve_remote(&request)
                .and_then(|r| r.into_plan())
                .map_err(|e| Failure {
                    code: EXIT_SERVICE,
                    message: e.to_string(),
                })?
        }
    };
    let compiled = inputs.compile(&plan, args.seed)?;
    let settings = RenderSettings {
        fps: args.fps,
        canvas: None,
    };
    // everything is computed before the first byte is written
    let vfg = compiled.vfg_bytes();
    let frames = args.frames.as_ref().map(|_| compiled.svg_frames(&settings));
    let gif = match &args.gif {
        Some(_) => Some(compiled.gif(&settings)?),
        None => None,
    };
    if let (Some(dir), Some(frames)) = (&args.frames, &frames) {
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
        for (i, svg) in frames.iter().enumerate() {
            write_atomic(&dir.join(format!("frame-{:06}.svg", i + 1)), svg)?;
        }
    }
    if let (Some(path), Some(gif)) = (&args.gif, &gif) {
        write_atomic(path, gif)?;
    }
    write_atomic(&args.out, &vfg)?;
    let _ = writeln!(
        stdout,
        "rendered {} states, {} frames",
        compiled.sequence.scenes.len(),
        crate::render::frame_count(&compiled.sequence, settings.fps)
    );
    Ok(())
}

fn validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let domain = crate::pddl::parse_domain(&read(&args.domain)?).map_err(PipelineError::Domain)?;
    let problem = crate::pddl::parse_problem(&read(&args.problem)?, &domain).map_err(PipelineError::Problem)?;
    let plan = crate::pddl::parse_plan(&read(&args.plan)?, &domain).map_err(PipelineError::Plan)?;
    let trajectory = execute_plan(&domain, &problem, &plan).map_err(PipelineError::Exec)?;
    let report = goal_report(&trajectory, &problem.goal);
    let last = trajectory.states.len() - 1;
    if !report.all_satisfied_at(last) {
        let missing: Vec<String> = problem
            .goal
            .iter()
            .filter(|g| !trajectory.final_state().contains(g))
            .map(ToString::to_string)
            .collect();
        return Err(Failure {
            code: EXIT_INVALID,
            message: format!(
                "plan executes but the goal is not reached: missing {}",
                missing.join(" ")
            ),
        });
    }
    let _ = writeln!(stdout, "valid, {} states", trajectory.states.len());
    Ok(())
}

fn check(args: &CheckArgs, stderr: &mut dyn Write) -> Result<(), Failure> {
    let inputs = parse_inputs(&args.domain, &args.problem, &args.animation)?;
    let diagnostics = inputs.check();
    for d in &diagnostics {
        let _ = writeln!(stderr, "{d}");
    }
    if diagnostics.iter().any(|d| d.is_error()) {
        return Err(Failure {
            code: EXIT_INVALID,
            message: String::new(),
        });
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Render(a) => render(a, stdout),
        Command::Validate(a) => validate(a, stdout),
        Command::CheckProfile(a) => check(a, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(stderr, "error: {}", f.message);
            }
            f.code
        }
    }
}
