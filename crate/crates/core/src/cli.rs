//! The `lens-scatter` command line. Every report is pretty-printed JSON with
//! a `schema_version` field; output depends only on the arguments and seed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::curves::{named_curve, PlaneCurve};
use crate::eaton::{self, eaton_index, eaton_residual, EatonError};
use crate::geometry::{integrate_geodesic, ConformalMetric, GeometryError, IntegrateOptions, MetricFile};
use crate::knot::corpus::{random_corpus, CorpusOptions};
use crate::knot::pl::{
    pl_validate, refinement_separations, sample_isotopy, sample_stage, Affine, AffineIsotopy, IsotopyLines,
};
use crate::knot::{analyze, CrossingOptions, FramedCurve, KnotError, KnotReport};
use crate::lift::{ProjCurve, FLAT_DISK_INJ};
use crate::scattering::{
    classify, compare_lens_data, scatter, BoundaryClass, BoundaryIsometry, BoundaryVector, SampleGrid, ScatteringError,
};
use crate::svg;

pub const SCHEMA_VERSION: u32 = 1;

pub const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (target ",
    env!("LENS_SCATTER_BUILD_TARGET"),
    ", profile ",
    env!("LENS_SCATTER_BUILD_PROFILE"),
    ")"
);

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "LENS_SCATTER_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or unreadable input; exit status 2.
    #[error("{0}")]
    Invalid(String),
    /// A computation that could not complete; exit status 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::NotInward { .. } | GeometryError::SingularChord { .. } | GeometryError::InvalidProfile(_) => {
                CliError::Invalid(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<ScatteringError> for CliError {
    fn from(e: ScatteringError) -> Self {
        match e {
            ScatteringError::Geometry(g) => g.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<EatonError> for CliError {
    fn from(e: EatonError) -> Self {
        match e {
            EatonError::Geometry(g) => g.into(),
            EatonError::Domain(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<KnotError> for CliError {
    fn from(e: KnotError) -> Self {
        match e {
            KnotError::Pl(_) => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lens-scatter", version = VERSION, about = "Scattering data of conformal disk metrics and knot invariants of tangent lifts")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also render an SVG illustration to this path.
    #[arg(long, global = true)]
    pub emit_svg: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace one geodesic and report its path.
    Trace(TraceArgs),
    /// Exit vector and travel time of one geodesic.
    Scatter(TraceArgs),
    /// Compare the scattering relations and lens data of two metrics.
    Compare(CompareArgs),
    /// Checks of the Eaton lens.
    Eaton(EatonArgs),
    /// Crossings, W table and certificate of a curve's tangent lift.
    Invariant(InvariantArgs),
    /// Deform an isotopy of the curve's lift into PL knots.
    ApproxPl(ApproxPlArgs),
    /// Render a curve or a metric's rays as SVG.
    Render(RenderArgs),
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a positive number"))
    }
}

/// `AxB` (arcs × angles) or a total entry count spread over 8 angles.
fn grid(s: &str) -> Result<SampleGrid, String> {
    let parsed = match s.split_once(['x', 'X']) {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|e| format!("{e}"))?;
            let b = b.trim().parse().map_err(|e| format!("{e}"))?;
            SampleGrid::new(a, b)
        }
        None => SampleGrid::with_total(s.trim().parse().map_err(|e| format!("{e}"))?),
    };
    parsed.map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// `vacuum`, `eaton` or a metric JSON file.
    #[arg(long, default_value = "eaton")]
    pub metric: String,
    /// Entry position as a fraction of the perimeter.
    #[arg(long)]
    pub arc: f64,
    /// Entry angle from the boundary tangent, in `(0, π)`.
    #[arg(long)]
    pub angle: f64,
    #[arg(long, default_value = "1e-10", value_parser = positive)]
    pub step_tol: f64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub m1: String,
    #[arg(long)]
    pub m2: String,
    #[arg(long, default_value = "16x8", value_parser = grid)]
    pub grid: SampleGrid,
    #[arg(long, default_value = "1e-4", value_parser = positive)]
    pub tol: f64,
    /// Exit with status 1 unless the scattering relations agree.
    #[arg(long)]
    pub expect_equal: bool,
    /// Compose with the boundary rotation by this arc fraction.
    #[arg(long, conflicts_with = "reflect")]
    pub shift: Option<f64>,
    /// Compose with the boundary reflection `arc ↦ shift − arc`.
    #[arg(long)]
    pub reflect: Option<f64>,
    #[arg(long, default_value = "1e-10", value_parser = positive)]
    pub step_tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EatonCheck {
    Invisibility,
    Circuit,
    Index,
}

#[derive(Debug, Args)]
pub struct EatonArgs {
    #[arg(long, value_enum, default_value = "invisibility")]
    pub check: EatonCheck,
    #[arg(long, default_value = "64", value_parser = grid)]
    pub grid: SampleGrid,
    #[arg(long, default_value = "1e-4", value_parser = positive)]
    pub tol: f64,
    /// Number of random radii for `--check index`.
    #[arg(long, default_value_t = 1000)]
    pub radii: usize,
    #[arg(long, default_value = "1e-10", value_parser = positive)]
    pub step_tol: f64,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, args = ["curve", "random_corpus"])]
pub struct InvariantArgs {
    /// `circle`, `lemniscate`, `rose-<odd k>` or a CSV file of `t,x,y`.
    #[arg(long)]
    pub curve: Option<String>,
    /// Analyze this many seeded random curves instead.
    #[arg(long)]
    pub random_corpus: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ApproxPlArgs {
    #[arg(long)]
    pub curve: String,
    #[arg(long, default_value = "0.2", value_parser = positive)]
    pub eps: f64,
    #[arg(long, default_value_t = 5)]
    pub stages: usize,
    /// CSV of the separation at each stage.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum View {
    /// The plane curve with its crossings.
    Plane,
    /// The lift to lines, projected to an annulus.
    Annulus,
    /// The lift to unit vectors, projected to an annulus.
    UnitAnnulus,
}

#[derive(Debug, Args)]
#[group(id = "subject", required = true, args = ["curve", "metric"])]
pub struct RenderArgs {
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long, value_enum, default_value = "plane")]
    pub view: View,
    #[arg(long, default_value = "16x8", value_parser = grid)]
    pub grid: SampleGrid,
}

fn load_metric(spec: &str) -> Result<ConformalMetric, CliError> {
    match spec {
        "vacuum" => Ok(ConformalMetric::vacuum(1.0)),
        "eaton" => Ok(eaton::eaton_metric()),
        path => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{path}: {e}")))?;
            let file: MetricFile =
                serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{path}: {e}")))?;
            Ok(file.into_metric()?)
        }
    }
}

fn load_curve(spec: &str) -> Result<Arc<dyn PlaneCurve>, CliError> {
    named_curve(spec).map_err(|e| CliError::Invalid(e.to_string()))
}

fn integrate_options(step_tol: f64) -> IntegrateOptions {
    IntegrateOptions {
        step_tolerance: step_tol,
        ..Default::default()
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Failed(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Failed(format!("stdout: {e}")))
        }
    }
}

fn emit(cli: &Cli, command: &str, body: Value) -> Result<(), CliError> {
    let mut report = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(dst), Value::Object(src)) = (&mut report, body) {
        dst.extend(src);
    }
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Failed(e.to_string()))?;
    text.push('\n');
    write_text(cli.out.as_deref(), &text)
}

fn emit_svg(cli: &Cli, render: impl FnOnce() -> Result<String, CliError>) -> Result<(), CliError> {
    match &cli.emit_svg {
        Some(path) => write_text(Some(path), &render()?),
        None => Ok(()),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn entry_vector(arc: f64, angle: f64) -> Result<BoundaryVector, CliError> {
    let v = BoundaryVector::new(arc, angle);
    if classify(&v) != BoundaryClass::Inward {
        return Err(CliError::Invalid(format!("angle {angle} is not strictly inward (expected 0 < angle < π)")));
    }
    Ok(v)
}

/// Runs a parsed command. `Ok(false)` means an assertion failed after the
/// report was written.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Trace(a) => trace(cli, a),
        Command::Scatter(a) => scatter_cmd(cli, a),
        Command::Compare(a) => compare(cli, a),
        Command::Eaton(a) => eaton_cmd(cli, a),
        Command::Invariant(a) => invariant(cli, a),
        Command::ApproxPl(a) => approx_pl(cli, a),
        Command::Render(a) => render(cli, a),
    }
}

fn trace(cli: &Cli, a: &TraceArgs) -> Result<bool, CliError> {
    let metric = load_metric(&a.metric)?;
    let path = integrate_geodesic(&metric, entry_vector(a.arc, a.angle)?, &integrate_options(a.step_tol))?;
    let winding = eaton::loop_winding(&path).ok();
    emit(
        cli,
        "trace",
        json!({
            "metric": metric.name(),
            "entry": path.entry,
            "exit": path.exit,
            "tau": path.length,
            "winding": winding,
            "points": path.positions().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        }),
    )?;
    emit_svg(cli, || Ok(svg::rays_svg(metric.radius(), std::slice::from_ref(&path))))?;
    Ok(true)
}

fn scatter_cmd(cli: &Cli, a: &TraceArgs) -> Result<bool, CliError> {
    let metric = load_metric(&a.metric)?;
    let entry = entry_vector(a.arc, a.angle)?;
    let opts = integrate_options(a.step_tol);
    let record = scatter(&metric, entry, &opts)?;
    emit(
        cli,
        "scatter",
        json!({
            "metric": metric.name(),
            "entry": record.entry,
            "exit": record.exit,
            "tau": record.tau,
            "trapped": record.trapped(),
        }),
    )?;
    emit_svg(cli, || {
        let path = integrate_geodesic(&metric, entry, &opts)?;
        Ok(svg::rays_svg(metric.radius(), &[path]))
    })?;
    Ok(true)
}

fn compare(cli: &Cli, a: &CompareArgs) -> Result<bool, CliError> {
    let (m1, m2) = (load_metric(&a.m1)?, load_metric(&a.m2)?);
    let h = match (a.shift, a.reflect) {
        (Some(s), _) => BoundaryIsometry::rotation(s),
        (_, Some(s)) => BoundaryIsometry::reflection(s),
        _ => BoundaryIsometry::IDENTITY,
    };
    let opts = integrate_options(a.step_tol);
    let c = compare_lens_data(&m1, &m2, &h, &a.grid, a.tol, &opts)?;
    emit(
        cli,
        "compare",
        json!({
            "m1": m1.name(),
            "m2": m2.name(),
            "isometry": h,
            "grid": a.grid.describe(),
            "tol": a.tol,
            "samples": c.scattering.samples,
            "equal": c.scattering.equal,
            "max_angle_dev": c.scattering.max_angle_dev,
            "max_arc_dev": c.scattering.max_arc_dev,
            "trapped_count": c.scattering.trapped_count,
            "mean_excess": c.excess.mean,
            "excess_dev": c.excess.max_dev,
        }),
    )?;
    emit_svg(cli, || {
        let paths = eaton::trace_all(&m2, &a.grid.entries(), &opts)?;
        Ok(svg::rays_svg(m2.radius(), &paths))
    })?;
    Ok(c.scattering.equal || !a.expect_equal)
}

fn eaton_cmd(cli: &Cli, a: &EatonArgs) -> Result<bool, CliError> {
    let metric = eaton::eaton_metric();
    let opts = integrate_options(a.step_tol);
    let entries = a.grid.entries();
    let passed = match a.check {
        EatonCheck::Invisibility => {
            let r = eaton::invisibility_check(&metric, &entries, a.tol, &opts)?;
            emit(
                cli,
                "eaton",
                json!({
                    "check": "invisibility",
                    "grid": a.grid.describe(),
                    "tol": r.tol,
                    "passed": r.passed,
                    "max_direction_dev": r.max_direction_dev,
                    "max_point_dev": r.max_point_dev,
                    "samples": r.samples,
                }),
            )?;
            r.passed
        }
        EatonCheck::Circuit => {
            let r = eaton::circuit_check(&metric, &entries, &opts)?;
            emit(
                cli,
                "eaton",
                json!({ "check": "circuit", "grid": a.grid.describe(), "passed": r.passed, "windings": r.windings }),
            )?;
            r.passed
        }
        EatonCheck::Index => {
            let n1 = eaton_index(1.0)?;
            let residual_at_one = eaton_residual(1.0, n1).abs();
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let radii: Vec<f64> = (0..a.radii).map(|_| 1.0 - rng.gen::<f64>()).collect();
            let mut max_residual: f64 = 0.0;
            let mut worst_radius = f64::NAN;
            for &r in &radii {
                let res = eaton_residual(r, eaton_index(r)?).abs();
                if res > max_residual {
                    max_residual = res;
                    worst_radius = r;
                }
            }
            let passed = n1 == 1.0 && residual_at_one < 1e-12 && max_residual < 1e-10;
            emit(
                cli,
                "eaton",
                json!({
                    "check": "index",
                    "index_at_boundary": n1,
                    "residual_at_boundary": residual_at_one,
                    "radii": a.radii,
                    "max_residual": max_residual,
                    "worst_radius": if worst_radius.is_nan() { Value::Null } else { json!(worst_radius) },
                    "passed": passed,
                }),
            )?;
            passed
        }
    };
    emit_svg(cli, || {
        let paths = eaton::trace_all(&metric, &entries, &opts)?;
        Ok(svg::rays_svg(metric.radius(), &paths))
    })?;
    Ok(passed)
}

fn knot_json(report: &KnotReport) -> Value {
    json!({
        "windings": { "theta": report.theta_winding, "line": report.line_winding },
        "contractible": report.contractible,
        "crossings": report.crossings,
        "W": report.table,
        "certificate": report.certificate,
    })
}

fn invariant(cli: &Cli, a: &InvariantArgs) -> Result<bool, CliError> {
    let opts = CrossingOptions::default();
    if let Some(size) = a.random_corpus {
        let corpus = random_corpus(cli.seed, size, &CorpusOptions::default());
        let all_positive = corpus.iter().all(|c| c.report.crossings.iter().all(|x| x.sign > 0));
        let certified = corpus.iter().filter(|c| c.report.certificate.is_some()).count();
        let curves: Vec<Value> = corpus
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut v = knot_json(&c.report);
                v["index"] = json!(i);
                v["coefficients"] = to_value(&c.curve);
                v
            })
            .collect();
        emit(
            cli,
            "invariant",
            json!({
                "corpus": size,
                "seed": cli.seed,
                "all_positive": all_positive,
                "certified": certified,
                "curves": curves,
            }),
        )?;
        return Ok(all_positive && certified == corpus.len());
    }
    let spec = a.curve.as_deref().unwrap_or_default();
    let curve = load_curve(spec)?;
    let knot = FramedCurve::tangent(curve)?;
    let report = analyze(&knot, &opts)?;
    let mut body = knot_json(&report);
    body["curve"] = json!(spec);
    emit(cli, "invariant", body)?;
    emit_svg(cli, || Ok(svg::annulus_svg(&knot.sample(2048), true)))?;
    Ok(true)
}

/// The curve's tangent lift carried by a quarter-turn-free affine motion:
/// rotation by π/6 while shrinking to 80 %.
fn curve_isotopy(name: &str, curve: Arc<dyn PlaneCurve>) -> AffineIsotopy {
    AffineIsotopy {
        name: name.to_string(),
        curve,
        start: Affine::default(),
        end: Affine {
            scale_x: 0.8,
            scale_y: 0.8,
            rotation: PI / 6.0,
            ..Affine::default()
        },
        lines: IsotopyLines::Tangent,
    }
}

fn approx_pl(cli: &Cli, a: &ApproxPlArgs) -> Result<bool, CliError> {
    let bound = FLAT_DISK_INJ.min(FRAC_PI_2);
    if a.eps >= bound {
        return Err(CliError::Invalid(format!("--eps must be below {bound}")));
    }
    if a.stages < 2 {
        return Err(CliError::Invalid("--stages must be at least 2".into()));
    }
    let curve = load_curve(&a.curve)?;
    if !curve.closed() {
        return Err(CliError::Invalid(format!("{} is not closed", a.curve)));
    }
    let g = curve_isotopy(&a.curve, curve);
    let seps = refinement_separations(&g, a.eps, a.stages)?;
    let n = seps.first().map_or(0, |s| s.n);
    let memberships: Vec<Value> = [0.0, 0.5, 1.0]
        .iter()
        .map(|&s| {
            let r = pl_validate(&sample_isotopy(&g, s, n), n, a.eps)?;
            Ok(json!({ "s": s, "member": r.member, "violation": r.violation }))
        })
        .collect::<Result<_, CliError>>()?;
    let min_sep = seps.iter().map(|s| s.separation).fold(f64::INFINITY, f64::min);
    let embedded = min_sep > 0.0;
    emit(
        cli,
        "approx-pl",
        json!({
            "curve": a.curve,
            "eps": a.eps,
            "n": n,
            "stages": seps,
            "min_separation": min_sep,
            "embedded": embedded,
            "pl_membership": memberships,
        }),
    )?;
    if let Some(path) = &a.report {
        let mut csv = String::from("l,s,n,separation\n");
        for s in &seps {
            csv.push_str(&format!("{},{},{},{}\n", s.l, s.s, s.n, s.separation));
        }
        write_text(Some(path), &csv)?;
    }
    emit_svg(cli, || {
        let points = sample_stage(&g, n, a.eps, 1.0, 0.0, 8)?;
        Ok(svg::annulus_svg(&ProjCurve { points, closed: true }, true))
    })?;
    Ok(embedded)
}

fn render(cli: &Cli, a: &RenderArgs) -> Result<bool, CliError> {
    let text = if let Some(spec) = &a.metric {
        let metric = load_metric(spec)?;
        let paths = eaton::trace_all(&metric, &a.grid.entries(), &IntegrateOptions::default())?;
        svg::rays_svg(metric.radius(), &paths)
    } else {
        let curve = load_curve(a.curve.as_deref().unwrap_or_default())?;
        match a.view {
            View::Plane => {
                let crossings = FramedCurve::tangent(curve.clone())
                    .and_then(|k| analyze(&k, &CrossingOptions::default()))
                    .map(|r| r.crossings)
                    .unwrap_or_default();
                svg::curve_svg(curve.as_ref(), &crossings)
            }
            View::Annulus | View::UnitAnnulus => {
                let knot = FramedCurve::tangent(curve)?;
                svg::annulus_svg(&knot.sample(2048), a.view == View::Annulus)
            }
        }
    };
    write_text(cli.out.as_deref().or(cli.emit_svg.as_deref()), &text)?;
    Ok(true)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("{THREADS_ENV}={value} is not a positive integer")))?;
    // a pool built earlier in the same process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 2,
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match run(&cli) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("check failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(grid("16x8").unwrap(), SampleGrid::new(16, 8).unwrap());
        assert_eq!(grid("64").unwrap(), SampleGrid::new(8, 8).unwrap());
        assert!(grid("1x8").is_err());
        assert!(grid("60").is_err());
        assert!(grid("ax3").is_err());
    }

    #[test]
    fn parse_errors_exit_two() {
        assert_eq!(main_with_args(["lens-scatter", "compare", "--m1", "vacuum"]), 2);
        assert_eq!(main_with_args(["lens-scatter", "eaton", "--tol", "-1"]), 2);
        assert_eq!(main_with_args(["lens-scatter", "invariant", "--curve", "nonsense"]), 2);
    }

    #[test]
    fn metric_names() {
        assert_eq!(load_metric("vacuum").unwrap().name(), ConformalMetric::vacuum(1.0).name());
        assert!(matches!(load_metric("/no/such/file.json"), Err(CliError::Invalid(_))));
    }
}
