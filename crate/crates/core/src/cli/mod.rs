//! Command-line front end: grid evaluation, source actions, verification
//! probes and causal classification.
//!
//! Grids are written as CSV or JSON; all other commands report JSON.
//!
//! Exit codes: 0 success, 2 configuration error, 3 evaluation error,
//! 4 failed verification probe.

pub mod config;
pub mod grid;

use std::ffi::OsString;
use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::beams::KappaSign;
use crate::error::PbError;
use crate::geometry::{classify_causal, default_tolerance, CausalClass, Event};
use crate::oracles::brute::action_bruteforce_spacetime;
use crate::probes::{
    farzone_probe, maxwell_sign_probe, minkowski_probe, sample_points, waveop_probe, BeamField, WAVEOP_STEPS,
};
use crate::signals::AnalyticSignal;
use crate::sources::{action_limit, action_regularized, action_spacetime_delta, action_static_delta, builtin, BUILTIN_NAMES};
use config::{ConfigError, RunConfig, Settings};
use grid::{evaluate_grid, GridKind, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_EVAL: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "pbwave", version, about = "Pulsed-beam wavelets from complex source points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a beam on a grid.
    Eval {
        #[command(subcommand)]
        target: EvalTarget,
    },
    /// Source action on a built-in test function: closed form, regularized
    /// ladder and brute-force quadrature.
    Action(Common),
    /// Run a verification probe.
    Probe {
        #[arg(value_enum)]
        kind: ProbeKind,
        #[command(flatten)]
        common: Common,
    },
    /// Causal class of the imaginary event (y, u).
    Classify(Common),
}

#[derive(Debug, Subcommand)]
enum EvalTarget {
    /// Scalar wavelet W = g(tau - kappa r~) / (4 pi r~).
    Scalar(Common),
    /// Electromagnetic field F = E + i B of a dipole beam.
    Em(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeKind {
    Minkowski,
    Farzone,
    Waveop,
    MaxwellSign,
}

#[derive(Debug, Args)]
struct Common {
    /// Imaginary spatial displacement, "y1,y2,y3".
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Imaginary time.
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    /// Real time off the grid.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Real position off the grid and for point probes, "x1,x2,x3".
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Sampled axes, e.g. "x1=-2:2:41,x3=0:4:41" (axes x1, x2, x3, t).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// cauchy, const or dcauchy:m.
    #[arg(long)]
    signal: Option<String>,
    /// + (retarded) or - (advanced).
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Dipole moment "re[:im],re[:im],re[:im]".
    #[arg(long, allow_hyphen_values = true)]
    pol: Option<String>,
    /// Regularization or smearing parameters, "0.1,0.05,0.025".
    #[arg(long)]
    eps_ladder: Option<String>,
    #[arg(long)]
    tol_rel: Option<String>,
    #[arg(long)]
    tol_abs: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<String>,
    /// Flat JSON config; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    /// Built-in test function for `action`.
    #[arg(long)]
    test_fn: Option<String>,
    /// Random points for `probe waveop` and `probe maxwell-sign`.
    #[arg(long)]
    points: Option<String>,
}

impl Common {
    fn settings(&self) -> Result<Settings, ConfigError> {
        let base = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let pairs = [
            ("y", &self.y),
            ("u", &self.u),
            ("t", &self.t),
            ("x", &self.x),
            ("grid", &self.grid),
            ("signal", &self.signal),
            ("kappa", &self.kappa),
            ("pol", &self.pol),
            ("eps-ladder", &self.eps_ladder),
            ("tol-rel", &self.tol_rel),
            ("tol-abs", &self.tol_abs),
            ("format", &self.format),
            ("out", &self.out),
            ("seed", &self.seed),
            ("test-fn", &self.test_fn),
            ("points", &self.points),
        ];
        let mut flags = Settings::default();
        for (k, v) in pairs {
            if let Some(v) = v {
                flags.0.insert(k.to_string(), v.clone());
            }
        }
        Ok(base.overlay(flags))
    }

    fn resolve(&self) -> Result<RunConfig, ConfigError> {
        RunConfig::resolve(&self.settings()?)
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (common, action): (&Common, fn(&RunConfig) -> Outcome) = match &cli.command {
        Command::Eval { target: EvalTarget::Scalar(c) } => (c, |cfg| eval(GridKind::Scalar, cfg)),
        Command::Eval { target: EvalTarget::Em(c) } => (c, |cfg| eval(GridKind::Em, cfg)),
        Command::Action(c) => (c, cmd_action),
        Command::Probe { kind, common } => {
            let run = match kind {
                ProbeKind::Minkowski => probe_minkowski as fn(&RunConfig) -> Outcome,
                ProbeKind::Farzone => probe_farzone,
                ProbeKind::Waveop => probe_waveop,
                ProbeKind::MaxwellSign => probe_maxwell,
            };
            (common, run)
        }
        Command::Classify(c) => (c, cmd_classify),
    };
    let cfg = match common.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Some(w) = cfg.timelike_warning() {
        eprintln!("warning: {w}");
    }
    let started = std::time::Instant::now();
    let outcome = action(&cfg);
    let code = match outcome {
        Outcome::Done { text, code } => match write_output(&cfg, &text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_EVAL
            }
        },
        Outcome::Config(msg) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Outcome::Failed(e) => {
            eprintln!("error: {e}");
            EXIT_EVAL
        }
    };
    eprintln!("wall time: {:.3} s", started.elapsed().as_secs_f64());
    code
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

enum Outcome {
    Done { text: String, code: i32 },
    Config(String),
    Failed(PbError),
}

fn write_output(cfg: &RunConfig, text: &str) -> std::io::Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    }
}

fn eval(kind: GridKind, cfg: &RunConfig) -> Outcome {
    let grid = evaluate_grid(kind, cfg);
    Outcome::Done {
        text: grid.render(cfg.format),
        code: EXIT_OK,
    }
}

fn json_report(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
    s.push('\n');
    s
}

fn c2(v: Complex64) -> [f64; 2] {
    [v.re, v.im]
}

#[derive(Serialize)]
struct Entry {
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    /// Difference to the closed form: relative, or absolute when the closed
    /// form is below 1e-12.
    #[serde(skip_serializing_if = "Option::is_none")]
    diff: Option<f64>,
}

fn difference(a: Complex64, reference: Complex64) -> f64 {
    let d = (a - reference).norm();
    if reference.norm() >= 1e-12 {
        d / reference.norm()
    } else {
        d
    }
}

fn entry(eps: Option<f64>, r: crate::error::Result<Complex64>, reference: Option<Complex64>) -> Entry {
    match r {
        Ok(v) => Entry {
            eps,
            value: Some(c2(v)),
            error: None,
            diff: reference.map(|l| difference(v, l)),
        },
        Err(e) => Entry {
            eps,
            value: None,
            error: Some(e.to_string()),
            diff: None,
        },
    }
}

fn cmd_action(cfg: &RunConfig) -> Outcome {
    let Some(f) = builtin(&cfg.test_fn) else {
        return Outcome::Config(format!(
            "unknown test function {:?}; built-ins: {}",
            cfg.test_fn,
            BUILTIN_NAMES.join(", ")
        ));
    };
    if cfg.y.norm_sq() == 0.0 {
        return Outcome::Failed(PbError::DegenerateDilation);
    }
    let g = cfg.signal();
    let tau = Complex64::new(cfg.t, cfg.u);
    let spec = cfg.quad_spec();
    let limit = action_limit(&f, &cfg.y, tau, &g, &spec);
    let reference = limit.as_ref().ok().copied();
    let operator_form = match g {
        AnalyticSignal::ConstNegOne => Some(action_static_delta(&f, &cfg.y, &spec)),
        AnalyticSignal::Cauchy => Some(action_spacetime_delta(&f, &cfg.y, tau, &spec)),
        _ => None,
    };
    let regularized: Vec<Entry> = cfg
        .eps_ladder
        .iter()
        .map(|&eps| entry(Some(eps), action_regularized(&f, &cfg.y, tau, &g, cfg.kappa, eps, &spec), reference))
        .collect();
    let brute = action_bruteforce_spacetime(&f, &cfg.y, tau, &g, cfg.kappa, &spec);
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "action",
        "config": cfg,
        "test_fn": f.name,
        "tau": c2(tau),
        "limit": entry(None, limit, None),
        "operator_form": operator_form.map(|r| entry(None, r, reference)),
        "regularized": regularized,
        "brute_force": entry(None, brute, reference),
    });
    Outcome::Done {
        text: json_report(report),
        code: EXIT_OK,
    }
}

fn probe_done(report: Value, pass: bool) -> Outcome {
    Outcome::Done {
        text: json_report(report),
        code: if pass { EXIT_OK } else { EXIT_VERIFY },
    }
}

fn probe_minkowski(cfg: &RunConfig) -> Outcome {
    let y = Event::new(cfg.y, cfg.u);
    match minkowski_probe(&cfg.x, &y, cfg.kappa, &cfg.eps_ladder, 1e-4, &cfg.quad_spec()) {
        Ok(r) => {
            let pass = r.pass;
            probe_done(
                json!({"schema_version": SCHEMA_VERSION, "command": "probe minkowski", "config": cfg, "report": r, "pass": pass}),
                pass,
            )
        }
        Err(PbError::InvalidArgument(m)) => Outcome::Config(m),
        Err(e) => Outcome::Failed(e),
    }
}

fn probe_farzone(cfg: &RunConfig) -> Outcome {
    let a = cfg.y.norm();
    let theta = match (cfg.x.normalized(), cfg.y.normalized()) {
        (Some(xh), Some(yh)) => xh.dot(&yh).clamp(-1.0, 1.0).acos(),
        _ => FRAC_PI_4,
    };
    match farzone_probe(a, theta, &[50.0, 100.0, 200.0, 400.0]) {
        Ok(r) => {
            let pass = r.pass;
            probe_done(
                json!({"schema_version": SCHEMA_VERSION, "command": "probe farzone", "config": cfg, "report": r, "pass": pass}),
                pass,
            )
        }
        Err(e) => Outcome::Failed(e),
    }
}

fn probe_waveop(cfg: &RunConfig) -> Outcome {
    let points = sample_points(cfg.points, cfg.seed);
    let fields = [
        BeamField::Green(KappaSign::Plus),
        BeamField::Green(KappaSign::Minus),
        BeamField::Wavelet(cfg.signal(), cfg.kappa),
    ];
    let mut reports = Vec::new();
    for f in &fields {
        match waveop_probe(f, &points, 2.0) {
            Ok(r) => reports.push(r),
            Err(e) => return Outcome::Failed(e),
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    probe_done(
        json!({"schema_version": SCHEMA_VERSION, "command": "probe waveop", "config": cfg, "steps": WAVEOP_STEPS, "reports": reports, "pass": pass}),
        pass,
    )
}

fn probe_maxwell(cfg: &RunConfig) -> Outcome {
    let points = sample_points(cfg.points, cfg.seed);
    match maxwell_sign_probe(&points, cfg.seed) {
        Ok(r) => {
            let pass = r.pass;
            probe_done(
                json!({"schema_version": SCHEMA_VERSION, "command": "probe maxwell-sign", "config": cfg, "report": r, "pass": pass}),
                pass,
            )
        }
        Err(e) => Outcome::Failed(e),
    }
}

fn cmd_classify(cfg: &RunConfig) -> Outcome {
    let a = cfg.y.norm();
    let class = classify_causal(&cfg.y, cfg.u, default_tolerance(a));
    let tube = match class {
        CausalClass::TimelikeFuture => Some("future"),
        CausalClass::TimelikePast => Some("past"),
        _ => None,
    };
    let warning = match class {
        CausalClass::Spacelike => Some("spacelike imaginary event: no pulsed-beam quality guarantee"),
        CausalClass::Lightlike => Some("lightlike imaginary event: eccentricity 1, degenerate beam"),
        _ => None,
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "classify",
        "y": cfg.y,
        "u": cfg.u,
        "class": class.label(),
        "eccentricity": class.is_timelike().then(|| a / cfg.u.abs()),
        "in_tube": tube.is_some(),
        "tube": tube,
        "warning": warning,
    });
    Outcome::Done {
        text: json_report(report),
        code: EXIT_OK,
    }
}
