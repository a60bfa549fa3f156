//! Batch commands behind the `gripkit` binary.
//!
//! Each command returns the files it produced as in-memory strings; the
//! binary prints them or writes them to a run directory together with a
//! `run.json` listing SHA-256 digests of every input and output. No clocks or
//! unseeded randomness are involved, so repeated runs are byte-identical.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::geometry::{forward_kinematics, sample_trajectory, GeometryError, GripperGeometry, FK_CSV_HEADER};
use crate::perception::{
    decide_approach, run_pipeline, Approach, ApproachDecision, ApproachRules, ObjectEstimate, PerceptionError,
    PipelineReport, SceneManifest, WorkspaceLimits,
};
use crate::planner::{
    load_capacity_model, plan_envelope_grasp, plan_pinch_grasp, validate_plan, CapacityModel, GraspPlan, PlanError,
    PlannerConfig, ValidationReport,
};
use crate::sim::{
    open_close_cycle, simulate_free, simulate_slide, PerturbationModel, SimError, SlideConfig, SlideSummary,
};

/// Environment variable naming the default run config.
pub const CONFIG_ENV: &str = "GRIPKIT_CONFIG";

pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const DOMAIN: i32 = 3;
    pub const EMPTY: i32 = 4;
    pub const INFEASIBLE: i32 = 5;
    pub const NO_CONTACT: i32 = 6;
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Perception(#[from] PerceptionError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Sim(#[from] SimError),
    /// The command produced output but the result is infeasible.
    #[error("{message}")]
    Infeasible { message: String, output: Box<CommandOutput> },
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => exit::CONFIG,
            AppError::Geometry(GeometryError::Io(_) | GeometryError::Parse(_) | GeometryError::Invalid(_)) => {
                exit::CONFIG
            }
            AppError::Geometry(_) => exit::DOMAIN,
            AppError::Perception(PerceptionError::EmptyCloud) => exit::EMPTY,
            AppError::Perception(PerceptionError::Ungraspable { .. }) => exit::INFEASIBLE,
            AppError::Perception(_) => exit::CONFIG,
            AppError::Plan(PlanError::Parse(_) | PlanError::InvariantViolation(_) | PlanError::Config(_)) => {
                exit::CONFIG
            }
            AppError::Plan(PlanError::Geometry(_)) => exit::DOMAIN,
            AppError::Plan(_) => exit::INFEASIBLE,
            AppError::Sim(SimError::NoContact) => exit::NO_CONTACT,
            AppError::Sim(SimError::Geometry(_)) => exit::DOMAIN,
            AppError::Sim(_) => exit::CONFIG,
            AppError::Infeasible { .. } => exit::INFEASIBLE,
        }
    }
}

/// Run configuration. Paths are relative to the config file; missing blocks
/// fall back to the bundled defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: Option<PathBuf>,
    pub capacity: Option<PathBuf>,
    pub perturbation: PerturbationModel,
    pub slide: Option<SlideConfig>,
    pub workspace: WorkspaceLimits,
    pub planner: PlannerConfig,
    pub output_dir: Option<PathBuf>,
}

/// A loaded config with its referenced files read and validated.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: RunConfig,
    pub geometry: GripperGeometry,
    pub capacity: CapacityModel,
    /// (path, bytes) of every file that fed into this run.
    pub inputs: Vec<(String, Vec<u8>)>,
}

fn read(path: &Path) -> Result<Vec<u8>, AppError> {
    std::fs::read(path).map_err(|e| AppError::Config(format!("{}: {e}", path.display())))
}

impl Context {
    pub fn defaults() -> Self {
        Self {
            config: RunConfig::default(),
            geometry: GripperGeometry::default(),
            capacity: CapacityModel::default(),
            inputs: Vec::new(),
        }
    }

    pub fn load(config_path: Option<&Path>) -> Result<Self, AppError> {
        let Some(path) = config_path else {
            return Ok(Self::defaults());
        };
        let bytes = read(path)?;
        let config: RunConfig =
            serde_json::from_slice(&bytes).map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut inputs = vec![(path.display().to_string(), bytes)];

        let geometry = match &config.geometry {
            Some(p) => {
                let p = base.join(p);
                let bytes = read(&p)?;
                let text = String::from_utf8_lossy(&bytes).into_owned();
                inputs.push((p.display().to_string(), bytes));
                GripperGeometry::from_json(&text)?
            }
            None => GripperGeometry::default(),
        };
        let capacity = match &config.capacity {
            Some(p) => {
                let p = base.join(p);
                let bytes = read(&p)?;
                let model = load_capacity_model(&bytes)?;
                inputs.push((p.display().to_string(), bytes));
                model
            }
            None => CapacityModel::default(),
        };
        config.perturbation.validate()?;
        if let Some(slide) = &config.slide {
            slide.validate()?;
        }
        config.planner.validate()?;
        Ok(Self { config, geometry, capacity, inputs })
    }

    /// Output directory from the config, resolved against the working dir.
    pub fn output_dir(&self) -> Option<&Path> {
        self.config.output_dir.as_deref()
    }
}

/// Files produced by one command, in emission order. The first file is the
/// primary artefact printed when no run directory is given.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CommandOutput {
    pub command: String,
    pub files: Vec<(String, String)>,
    pub inputs: Vec<(String, String)>,
    pub log: Vec<String>,
}

impl CommandOutput {
    fn new(command: &str, ctx: &Context) -> Self {
        Self {
            command: command.to_string(),
            files: Vec::new(),
            inputs: ctx.inputs.iter().map(|(p, b)| (p.clone(), sha256_hex(b))).collect(),
            log: Vec::new(),
        }
    }

    fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push((path.display().to_string(), sha256_hex(bytes)));
    }

    pub fn primary(&self) -> Option<&str> {
        self.files.first().map(|f| f.1.as_str())
    }

    /// Provenance record for the run directory.
    pub fn run_manifest(&self, args: &[String]) -> String {
        #[derive(Serialize)]
        struct Digest<'a> {
            path: &'a str,
            sha256: String,
        }
        #[derive(Serialize)]
        struct Run<'a> {
            command: &'a str,
            args: &'a [String],
            inputs: Vec<Digest<'a>>,
            outputs: Vec<Digest<'a>>,
        }
        let run = Run {
            command: &self.command,
            args,
            inputs: self.inputs.iter().map(|(p, h)| Digest { path: p, sha256: h.clone() }).collect(),
            outputs: self.files.iter().map(|(p, c)| Digest { path: p, sha256: sha256_hex(c.as_bytes()) }).collect(),
        };
        serde_json::to_string_pretty(&run).expect("serialisable") + "\n"
    }

    /// Write every file plus `run.json` into `dir`.
    pub fn write_to(&self, dir: &Path, args: &[String]) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, content) in &self.files {
            std::fs::write(dir.join(name), content)?;
        }
        std::fs::write(dir.join("run.json"), self.run_manifest(args))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable") + "\n"
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FkRequest {
    Single(f64),
    Range { from: f64, to: f64, step: f64 },
}

/// FK trace as CSV. Angles outside the operating window are warnings unless
/// `strict`.
pub fn cmd_fk(ctx: &Context, request: FkRequest, strict: bool) -> Result<CommandOutput, AppError> {
    let geom = &ctx.geometry;
    let thetas = match request {
        FkRequest::Single(theta) => vec![theta],
        FkRequest::Range { from, to, step } => sample_trajectory(from, to, step)?.samples,
    };
    let mut out = CommandOutput::new("fk", ctx);
    let mut csv = String::from(FK_CSV_HEADER);
    csv.push('\n');
    for theta in thetas {
        if let Some(warning) = geom.check_window(theta, strict)? {
            out.log.push(format!("warning: {warning}"));
        }
        csv.push_str(&forward_kinematics(geom, theta)?.to_string());
        csv.push('\n');
    }
    out.files.push(("fk.csv".into(), csv));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateOutput {
    pub estimate: ObjectEstimate,
    pub decision: Option<ApproachDecision>,
    pub ungraspable: Option<String>,
    pub view_points: Vec<usize>,
    pub merged_points: usize,
    pub cropped_points: usize,
}

pub fn cmd_estimate(ctx: &Context, manifest_path: &Path) -> Result<CommandOutput, AppError> {
    let mut out = CommandOutput::new("estimate", ctx);
    let bytes = read(manifest_path)?;
    out.input(manifest_path, &bytes);
    let manifest = SceneManifest::from_json(&String::from_utf8_lossy(&bytes))?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    for view in &manifest.views {
        let p = base.join(&view.cloud);
        out.input(&p, &read(&p)?);
    }
    let PipelineReport { view_points, merged_points, cropped_points, estimate } = run_pipeline(&manifest, base)?;
    out.log.push(format!(
        "points per view {view_points:?}, merged {merged_points}, cropped {cropped_points}, retained {}",
        estimate.point_count
    ));

    let rules = ApproachRules { small_height_mm: ctx.config.planner.small_height_mm, workspace: ctx.config.workspace };
    let decided = decide_approach(&estimate, &ctx.geometry, &rules);
    let result = EstimateOutput {
        estimate,
        decision: decided.as_ref().ok().copied(),
        ungraspable: decided.as_ref().err().map(ToString::to_string),
        view_points,
        merged_points,
        cropped_points,
    };
    out.files.push(("estimate.json".into(), to_json(&result)));
    match decided {
        Ok(_) => Ok(out),
        Err(e) => Err(AppError::Infeasible { message: e.to_string(), output: Box::new(out) }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanOutput {
    pub decision: ApproachDecision,
    pub plan: GraspPlan,
    pub validation: ValidationReport,
}

/// Accepts either a bare estimate or the output of `cmd_estimate`.
pub fn parse_estimate(text: &str) -> Result<ObjectEstimate, AppError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| AppError::Config(format!("estimate: {e}")))?;
    let inner = value.get("estimate").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| AppError::Config(format!("estimate: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanRequest {
    pub mass_kg: f64,
    pub hinged: bool,
    /// Support surface height, global frame, m. Defaults to the bottom of
    /// the estimated object.
    pub surface_z: Option<f64>,
}

pub fn cmd_plan(ctx: &Context, estimate_path: &Path, request: PlanRequest) -> Result<CommandOutput, AppError> {
    let mut out = CommandOutput::new("plan", ctx);
    let bytes = read(estimate_path)?;
    out.input(estimate_path, &bytes);
    let est = parse_estimate(&String::from_utf8_lossy(&bytes))?;
    if !(request.mass_kg >= 0.0) {
        return Err(AppError::Config(format!("mass must be non-negative, got {}", request.mass_kg)));
    }

    let geom = &ctx.geometry;
    let cfg = &ctx.config.planner;
    let rules = ApproachRules { small_height_mm: cfg.small_height_mm, workspace: ctx.config.workspace };
    let decision = decide_approach(&est, geom, &rules)?;
    let plan = if est.height() * 1e3 <= cfg.small_height_mm {
        let surface_z = request.surface_z.unwrap_or(est.centroid[2] - 0.5 * est.height());
        plan_pinch_grasp(geom, &est, surface_z * 1e3, cfg)?
    } else {
        plan_envelope_grasp(geom, &est, decision.approach, cfg)?
    };
    out.log.push(format!("{:?} grasp, {:?} approach ({:?})", plan.kind, plan.approach, decision.reason));
    let validation = validate_plan(&plan, geom, request.mass_kg, &ctx.capacity, request.hinged)?;
    let csv = plan.to_csv();
    let passed = validation.passed;
    out.files.push(("plan.json".into(), to_json(&PlanOutput { decision, plan, validation })));
    out.files.push(("plan.csv".into(), csv));
    if passed {
        Ok(out)
    } else {
        Err(AppError::Infeasible { message: "plan failed validation".into(), output: Box::new(out) })
    }
}

pub fn cmd_simulate_slide(ctx: &Context, require_contact: bool) -> Result<CommandOutput, AppError> {
    let mut out = CommandOutput::new("simulate-slide", ctx);
    let cfg = match ctx.config.slide {
        Some(cfg) => cfg,
        None => SlideConfig::closing_on_surface(&ctx.geometry)?,
    };
    let trace = simulate_slide(&ctx.geometry, &cfg)?;
    let summary: SlideSummary = trace.summary();
    out.log.extend(trace.warnings.iter().map(|w| format!("warning: {w}")));
    out.log.push(format!(
        "contact onset {:?} rad, closure {} rad, peak bend {} mm",
        summary.contact_onset_theta, summary.closure_theta, summary.peak_bend
    ));
    out.files.push(("slide.csv".into(), trace.to_csv()));
    out.files.push(("slide_summary.json".into(), to_json(&summary)));
    if require_contact && summary.no_contact {
        return Err(AppError::Sim(SimError::NoContact));
    }
    Ok(out)
}

/// One open→close→open cycle through the configured perturbation model.
pub fn cmd_simulate_free(ctx: &Context, step: f64) -> Result<CommandOutput, AppError> {
    let mut out = CommandOutput::new("simulate-free", ctx);
    let cmds = open_close_cycle(&ctx.geometry, step)?;
    let trace = simulate_free(&ctx.geometry, &cmds, &ctx.config.perturbation)?;
    out.files.push(("free.csv".into(), trace.to_csv()));
    Ok(out)
}

/// Approach the planner would pick, used by callers that skip perception.
pub fn approach_for(ctx: &Context, est: &ObjectEstimate) -> Result<Approach, AppError> {
    let rules = ApproachRules { small_height_mm: ctx.config.planner.small_height_mm, workspace: ctx.config.workspace };
    Ok(decide_approach(est, &ctx.geometry, &rules)?.approach)
}
