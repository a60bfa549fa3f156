use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gripkit::app::{self, AppError, CommandOutput, Context, FkRequest, PlanRequest, CONFIG_ENV};

#[derive(Parser)]
#[command(name = "gripkit", version, about = "Soft gripper kinematics, grasp planning and simulation")]
struct Cli {
    /// Run config (JSON)
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Write outputs and run.json here instead of printing
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward kinematics at one angle or over a range
    Fk {
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["from", "to"])]
        theta: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "to")]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "from")]
        to: Option<f64>,
        #[arg(long, default_value_t = gripkit::geometry::DEFAULT_STEP)]
        step: f64,
        /// Reject angles outside the operating window
        #[arg(long)]
        strict: bool,
    },
    /// Estimate an object from a scene manifest
    Estimate { manifest: PathBuf },
    /// Plan and validate a grasp for an estimated object
    Plan {
        estimate: PathBuf,
        /// Object mass, kg
        #[arg(long)]
        mass: f64,
        #[arg(long)]
        unhinged: bool,
        /// Support surface height in the global frame, m
        #[arg(long, allow_hyphen_values = true)]
        surface_z: Option<f64>,
    },
    /// Close against a flat surface in sliding mode
    SimulateSlide {
        #[arg(long)]
        require_contact: bool,
    },
    /// Open-close cycle with backlash, bias and noise
    SimulateFree {
        #[arg(long, default_value_t = gripkit::geometry::DEFAULT_STEP)]
        step: f64,
    },
}

fn run(cli: &Cli, ctx: &Context) -> Result<CommandOutput, AppError> {
    match &cli.command {
        Command::Fk { theta, from, to, step, strict } => {
            let request = match (theta, from, to) {
                (Some(t), _, _) => FkRequest::Single(*t),
                (None, Some(from), Some(to)) => FkRequest::Range { from: *from, to: *to, step: *step },
                _ => return Err(AppError::Config("fk needs --theta or --from/--to".into())),
            };
            app::cmd_fk(ctx, request, *strict)
        }
        Command::Estimate { manifest } => app::cmd_estimate(ctx, manifest),
        Command::Plan { estimate, mass, unhinged, surface_z } => {
            app::cmd_plan(ctx, estimate, PlanRequest { mass_kg: *mass, hinged: !unhinged, surface_z: *surface_z })
        }
        Command::SimulateSlide { require_contact } => app::cmd_simulate_slide(ctx, *require_contact),
        Command::SimulateFree { step } => app::cmd_simulate_free(ctx, *step),
    }
}

fn emit(out: &CommandOutput, cli: &Cli, ctx: Option<&Context>) -> std::io::Result<()> {
    for line in &out.log {
        log::info!("{line}");
    }
    match cli.out.as_deref().or(ctx.and_then(Context::output_dir)) {
        Some(dir) => out.write_to(dir, &recorded_args()),
        None => {
            print!("{}", out.primary().unwrap_or_default());
            Ok(())
        }
    }
}

/// Command line as recorded in run.json, minus the output location so that
/// runs into different directories stay byte-identical.
fn recorded_args() -> Vec<String> {
    let mut args = Vec::new();
    let mut iter = std::env::args().skip(1);
    while let Some(arg) = iter.next() {
        if arg == "--out" {
            iter.next();
        } else if !arg.starts_with("--out=") {
            args.push(arg);
        }
    }
    args
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let ctx = Context::load(cli.config.as_deref());
    let (out, code) = match ctx.as_ref().map_err(|e| AppError::Config(e.to_string())).and_then(|ctx| run(&cli, ctx)) {
        Ok(out) => (Some(out), app::exit::OK),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            match e {
                AppError::Infeasible { output, .. } => (Some(*output), code),
                _ => (None, code),
            }
        }
    };
    if let Some(out) = out {
        if let Err(e) = emit(&out, &cli, ctx.as_ref().ok()) {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(app::exit::CONFIG as u8);
        }
    }
    ExitCode::from(code as u8)
}
