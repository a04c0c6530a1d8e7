//! The five subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use homspace_core::catalog::Diagnostic;
use homspace_core::transport::{
    self, ConvergenceReport, CurveSpec, GeodesicProblem, IntegratorOptions, Trajectory, TransportProblem,
};
use homspace_core::{linalg, Error, GroupElement, Mat};
use serde_json::{json, Value};

use crate::definition::{parse_coords, parse_tolerance, Definition, Space};
use crate::error::{CliError, EXIT_CHECK_FAILED};
use crate::output::{self, fmt_f64, overall_pass, write_atomic, TrajectoryExport};

#[derive(Debug, Parser)]
#[command(
    name = "homspace",
    version,
    about = "Invariant connections on reductive homogeneous spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the diagnostic battery on a space definition.
    Check(CheckArgs),
    /// Integrate a geodesic from the origin.
    Geodesic(GeodesicArgs),
    /// Parallel-transport vectors along a curve.
    Transport(TransportArgs),
    /// Write torsion, curvature and sectional curvature at the origin.
    Tensors(TensorsArgs),
    /// Estimate the integrator's order of convergence.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    /// Print the report as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override a check tolerance, e.g. `--tol is_metric=1e-8`.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RunFlags {
    /// Run even if mandatory checks fail; outputs are marked tainted.
    #[arg(long)]
    pub force: bool,
    /// Replace frames by their orthogonal polar factor after every step.
    #[arg(long)]
    pub reproject: bool,
    /// Print the JSON meta block to stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GeodesicArgs {
    pub file: PathBuf,
    /// Initial velocity in 𝔪-coordinates, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long)]
    pub step: f64,
    /// CSV output; the JSON mirror goes next to it with extension `.json`.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub flags: RunFlags,
}

#[derive(Debug, Args)]
pub struct TransportArgs {
    pub file: PathBuf,
    /// `one_parameter:X`, `geodesic:X`, `velocity:FILE.csv` or `group:FILE.csv`.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// Vector to transport; repeat for several seeds.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub z0: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub flags: RunFlags,
}

#[derive(Debug, Args)]
pub struct TensorsArgs {
    pub file: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub force: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    /// `exp(tX₀)`; only for geodesics with `α(X₀,X₀) = 0`.
    ClosedForm,
    /// Integration at the smallest step divided by 100.
    Fine,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    pub file: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    /// Transport this vector along the geodesic as well.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: f64,
    /// Comma-separated step sizes (at least three).
    #[arg(long)]
    pub steps: String,
    #[arg(long, value_enum)]
    pub reference: Option<Reference>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Check(a) => check(a),
        Command::Geodesic(a) => geodesic(a),
        Command::Transport(a) => transport_cmd(a),
        Command::Tensors(a) => tensors(a),
        Command::Convergence(a) => convergence(a),
    }
}

fn warnings_of(space: &Space) -> Vec<String> {
    space
        .dec
        .as_ref()
        .map(|d| d.warnings().to_vec())
        .unwrap_or_default()
}

fn check(args: CheckArgs) -> Result<i32, CliError> {
    let overrides = args
        .tol
        .iter()
        .map(|s| parse_tolerance(s))
        .collect::<Result<Vec<_>, _>>()?;
    let space = Definition::load(&args.file)?.build(false)?;
    let mut diags = space.diagnostics();
    for (name, tol) in &overrides {
        let mut hit = false;
        for d in diags.iter_mut().filter(|d| &d.report.check == name) {
            d.report = d.report.rejudged(*tol);
            hit = true;
        }
        if !hit {
            let known: Vec<&str> = diags.iter().map(|d| d.report.check.as_str()).collect();
            return Err(CliError::Usage(format!(
                "--tol: no check named {name:?}; known checks: {}",
                known.join(", ")
            )));
        }
    }
    let warnings = warnings_of(&space);
    let report = output::run_report(&space.name, space.alpha_label(), &diags, &warnings);
    if let Some(out) = &args.out {
        write_atomic(out, &output::to_json_bytes(&report))?;
    }
    if args.json {
        print!("{}", String::from_utf8_lossy(&output::to_json_bytes(&report)));
    } else {
        print!(
            "{}",
            output::render_checks(&space.name, space.alpha_label(), &diags, &warnings)
        );
    }
    Ok(if overall_pass(&diags) {
        0
    } else {
        EXIT_CHECK_FAILED
    })
}

/// Builds the space and refuses to continue past failed mandatory checks
/// unless forced. Returns the space and whether outputs are tainted.
fn gated(file: &Path, force: bool) -> Result<(Space, bool), CliError> {
    let space = Definition::load(file)?.build(force)?;
    let diags: Vec<Diagnostic> = space.diagnostics();
    let failed = diags.iter().filter(|d| d.mandatory && !d.report.pass).count();
    if failed > 0 && !force {
        return Err(CliError::ChecksFailed(failed));
    }
    if space.alpha.is_none() {
        for f in &space.failures {
            for w in &f.witnesses {
                eprintln!("error: {}: {w}", f.check);
            }
        }
        return Err(CliError::ChecksFailed(failed.max(1)));
    }
    if failed > 0 {
        eprintln!("warning: {failed} mandatory check(s) failed; outputs are tainted");
    }
    let tainted = failed > 0 || space.alpha.as_ref().is_some_and(|a| a.is_tainted());
    Ok((space, tainted))
}

fn validate_span(t0: f64, t1: f64, step: Option<f64>) -> Result<(), CliError> {
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(CliError::Usage(format!(
            "need finite t0 < t1, got t0 = {t0}, t1 = {t1}"
        )));
    }
    if let Some(h) = step {
        if !(h.is_finite() && h > 0.0) {
            return Err(CliError::Usage(format!("--step must be positive, got {h}")));
        }
    }
    Ok(())
}

fn check_len(v: &[f64], n: usize, what: &str) -> Result<(), CliError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{what} has {} coordinates but dim 𝔪 = {n}",
            v.len()
        )))
    }
}

fn identity_frame(space: &Space) -> Result<GroupElement, CliError> {
    let d = space
        .algebra
        .as_ref()
        .and_then(|a| a.matrix_size())
        .ok_or_else(|| CliError::Schema("dynamics need an algebra with a matrix_basis".into()))?;
    Ok(GroupElement::identity(d))
}

fn json_path(out: &Path) -> Result<PathBuf, CliError> {
    if out.extension().is_some_and(|e| e == "json") {
        return Err(CliError::Usage(
            "--out names the CSV file; the JSON mirror is written next to it".into(),
        ));
    }
    Ok(out.with_extension("json"))
}

/// Reports a blow-up with the last good time; no files are written.
fn numeric_failure(e: Error) -> Result<i32, CliError> {
    if let Error::BlowUp { partial, .. } = &e {
        let last = partial.times.last().copied().unwrap_or(f64::NAN);
        eprintln!("error: {e}; last good time t = {last}; no files written");
        return Ok(EXIT_CHECK_FAILED);
    }
    Err(CliError::Numeric(e))
}

fn write_trajectory(
    export: &TrajectoryExport<'_>,
    out: &Path,
    extra: Value,
    print_json: bool,
) -> Result<Value, CliError> {
    let json_out = json_path(out)?;
    let value = export.json(extra);
    write_atomic(out, export.csv().as_bytes())?;
    write_atomic(&json_out, &output::to_json_bytes(&value))?;
    if print_json {
        print!(
            "{}",
            String::from_utf8_lossy(&output::to_json_bytes(&value["meta"]))
        );
    }
    Ok(value)
}

fn summary(value: &Value, out: &Path) {
    let meta = &value["meta"];
    let mut line = format!("wrote {} samples to {}", meta["samples"], out.display());
    for key in [
        "max_group_drift",
        "horizontality_leak",
        "energy_drift",
        "gram_drift",
    ] {
        if let Some(v) = meta.get(key).and_then(Value::as_f64) {
            line.push_str(&format!("; {key} {v:.3e}"));
        }
    }
    println!("{line}");
    for w in meta["warnings"].as_array().into_iter().flatten() {
        if let Some(w) = w.as_str() {
            eprintln!("warning: {w}");
        }
    }
}

fn geodesic(args: GeodesicArgs) -> Result<i32, CliError> {
    validate_span(args.t0, args.t1, Some(args.step))?;
    let x0 = parse_coords(&args.x0, "--x0")?;
    json_path(&args.out)?;
    let (space, tainted) = gated(&args.file, args.flags.force)?;
    let alpha = space.require_alpha()?;
    check_len(&x0, alpha.dim(), "--x0")?;
    let g0 = identity_frame(&space)?;
    let opts = IntegratorOptions {
        reproject: args.flags.reproject,
    };
    let traj = match transport::geodesic(alpha, &g0, &x0, args.t0, args.t1, args.step, opts) {
        Ok(t) => t,
        Err(e) => return numeric_failure(e),
    };
    let export = TrajectoryExport {
        space: &space.name,
        alpha: space.alpha_label(),
        step: args.step,
        base: &traj,
        seeds: &[],
        energy: space.metric.as_ref(),
        tainted,
    };
    let value = write_trajectory(&export, &args.out, json!({}), args.flags.json)?;
    if !args.flags.json {
        summary(&value, &args.out);
    }
    Ok(0)
}

/// Columns of a sample file, keyed by header name.
struct SampleTable {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl SampleTable {
    fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let parse_err = |e: csv::Error| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let header: Vec<String> = reader
            .headers()
            .map_err(parse_err)?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(parse_err)?;
            let line = rec.position().map_or(0, |p| p.line());
            let row = rec
                .iter()
                .map(|f| match f.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(CliError::Parse {
                        path: path.to_path_buf(),
                        message: format!("line {line}: {f:?} is not a finite number"),
                    }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    fn column(&self, name: &str, path: &Path) -> Result<usize, CliError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Schema(format!("{}: missing column {name:?}", path.display())))
    }

    fn extract(&self, names: &[String], path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
        let idx = names
            .iter()
            .map(|n| self.column(n, path))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self
            .rows
            .iter()
            .map(|r| idx.iter().map(|&i| r[i]).collect())
            .collect())
    }
}

enum CurveArg {
    OneParameter(Vec<f64>),
    Geodesic(Vec<f64>),
    Velocity(PathBuf),
    Group(PathBuf),
}

fn parse_curve(s: &str) -> Result<CurveArg, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("--curve {s:?}: expected KIND:VALUE")))?;
    match kind {
        "one_parameter" => Ok(CurveArg::OneParameter(parse_coords(rest, "--curve")?)),
        "geodesic" => Ok(CurveArg::Geodesic(parse_coords(rest, "--curve")?)),
        "velocity" => Ok(CurveArg::Velocity(PathBuf::from(rest))),
        "group" => Ok(CurveArg::Group(PathBuf::from(rest))),
        _ => Err(CliError::Usage(format!(
            "--curve kind {kind:?}: expected one_parameter, geodesic, velocity or group"
        ))),
    }
}

fn span_and_step(args: &TransportArgs) -> Result<(f64, f64, f64), CliError> {
    let (Some(t1), Some(step)) = (args.t1, args.step) else {
        return Err(CliError::Usage("this curve needs --t1 and --step".into()));
    };
    let t0 = args.t0.unwrap_or(0.0);
    validate_span(t0, t1, Some(step))?;
    Ok((t0, t1, step))
}

fn base_curve(
    args: &TransportArgs,
    space: &Space,
    opts: IntegratorOptions,
) -> Result<Result<(Trajectory, f64), Error>, CliError> {
    let alpha = space.require_alpha()?;
    let dec = alpha.decomposition();
    let n = dec.m_dim();
    let g0 = identity_frame(space)?;
    let d = g0.size();
    let sample_span = || -> Result<Option<(f64, f64)>, CliError> {
        match (args.t0, args.t1) {
            (None, None) => Ok(None),
            (Some(t0), Some(t1)) => {
                validate_span(t0, t1, args.step)?;
                Ok(Some((t0, t1)))
            }
            _ => Err(CliError::Usage("give both --t0 and --t1, or neither".into())),
        }
    };
    Ok(match parse_curve(&args.curve)? {
        CurveArg::OneParameter(x) => {
            check_len(&x, n, "--curve")?;
            let (t0, t1, step) = span_and_step(args)?;
            transport::base_trajectory(dec, &CurveSpec::OneParameter(x), None, Some((t0, t1)), step, opts)
                .map(|t| (t, step))
        }
        CurveArg::Geodesic(x) => {
            check_len(&x, n, "--curve")?;
            let (t0, t1, step) = span_and_step(args)?;
            transport::geodesic(alpha, &g0, &x, t0, t1, step, opts).map(|t| (t, step))
        }
        CurveArg::Velocity(path) => {
            let table = SampleTable::read(&path)?;
            let times = table
                .extract(&["t".into()], &path)?
                .into_iter()
                .map(|r| r[0])
                .collect();
            let names: Vec<String> = (1..=n).map(|k| format!("x_{k}")).collect();
            let velocities = table.extract(&names, &path)?;
            let step = args
                .step
                .ok_or_else(|| CliError::Usage("velocity curves need --step".into()))?;
            let span = sample_span()?;
            transport::base_trajectory(
                dec,
                &CurveSpec::PiecewiseVelocity { times, velocities },
                None,
                span,
                step,
                opts,
            )
            .map(|t| (t, step))
        }
        CurveArg::Group(path) => {
            if args.t0.is_some() || args.t1.is_some() {
                return Err(CliError::Usage(
                    "group samples are lifted on their own times; drop --t0/--t1".into(),
                ));
            }
            let table = SampleTable::read(&path)?;
            let times: Vec<f64> = table
                .extract(&["t".into()], &path)?
                .into_iter()
                .map(|r| r[0])
                .collect();
            let names: Vec<String> = (0..d)
                .flat_map(|i| (0..d).map(move |j| format!("g_{i}{j}")))
                .collect();
            let frames = table
                .extract(&names, &path)?
                .into_iter()
                .enumerate()
                .map(|(row, v)| {
                    let m = Mat::from_row_major(d, d, v).expect("row has d*d entries");
                    GroupElement::new(m)
                        .map_err(|e| CliError::Schema(format!("{}: sample {row}: {e}", path.display())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let step = times
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            transport::base_trajectory(
                dec,
                &CurveSpec::GroupSamples { times, frames },
                None,
                None,
                step,
                opts,
            )
            .map(|t| (t, step))
        }
    })
}

fn transport_cmd(args: TransportArgs) -> Result<i32, CliError> {
    json_path(&args.out)?;
    let (space, tainted) = gated(&args.file, args.flags.force)?;
    let alpha = space.require_alpha()?;
    let seeds0 = args
        .z0
        .iter()
        .map(|s| parse_coords(s, "--z0"))
        .collect::<Result<Vec<_>, _>>()?;
    for z in &seeds0 {
        check_len(z, alpha.dim(), "--z0")?;
    }
    let opts = IntegratorOptions {
        reproject: args.flags.reproject,
    };
    let (base, step) = match base_curve(&args, &space, opts)? {
        Ok(b) => b,
        Err(e) => return numeric_failure(e),
    };
    let mut seeds = Vec::with_capacity(seeds0.len());
    let mut warnings = Vec::new();
    for z0 in &seeds0 {
        match transport::parallel_transport(alpha, &base, z0) {
            Ok(t) => {
                warnings.extend(t.meta.warnings.iter().cloned());
                seeds.push(t.transported.expect("transport fills z"));
            }
            Err(e) => return numeric_failure(e),
        }
    }
    let mut extra = json!({ "curve": args.curve });
    if let Some(metric) = &space.metric {
        let refs: Vec<&[Vec<f64>]> = seeds.iter().map(Vec::as_slice).collect();
        extra["gram_drift"] = json!(transport::gram_drift(metric, &refs));
        extra["metric_connection"] = json!(alpha.is_metric(metric).pass);
    }
    let mut base = base;
    for w in warnings {
        if !base.meta.warnings.contains(&w) {
            base.meta.warnings.push(w);
        }
    }
    let export = TrajectoryExport {
        space: &space.name,
        alpha: space.alpha_label(),
        step,
        base: &base,
        seeds: &seeds,
        energy: None,
        tainted,
    };
    let value = write_trajectory(&export, &args.out, extra, args.flags.json)?;
    if !args.flags.json {
        summary(&value, &args.out);
    }
    Ok(0)
}

fn tensors(args: TensorsArgs) -> Result<i32, CliError> {
    let (space, tainted) = gated(&args.file, args.force)?;
    let alpha = space.require_alpha()?;
    let torsion = alpha.torsion();
    let curvature = alpha.curvature()?;
    let n = alpha.dim();
    let header = |t: &homspace_core::TensorAtOrigin| {
        json!({
            "space": space.name,
            "alpha": space.alpha_label(),
            "kind": t.kind().as_str(),
            "shape": t.shape(),
            "index_order": if t.shape().len() == 3 { "k,i,j" } else { "l,i,j,k" },
            "max_abs": t.max_abs(),
            "antisymmetry_residual": t.antisymmetry_residual(),
            "tainted": tainted,
            "data": t.as_slice(),
        })
    };
    let mut torsion_csv = String::from("k,i,j,value\n");
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                torsion_csv.push_str(&format!("{k},{i},{j},{}\n", fmt_f64(torsion.get3(k, i, j))));
            }
        }
    }
    let mut curvature_json = header(&curvature);
    curvature_json["invariance"] = output::check_record(&alpha.curvature_invariance(&curvature), true);

    let dir = &args.out;
    write_atomic(
        &dir.join("torsion.json"),
        &output::to_json_bytes(&header(&torsion)),
    )?;
    write_atomic(&dir.join("torsion.csv"), torsion_csv.as_bytes())?;
    write_atomic(
        &dir.join("curvature.json"),
        &output::to_json_bytes(&curvature_json),
    )?;
    let mut written = vec!["torsion.json", "torsion.csv", "curvature.json"];
    if let Some(metric) = &space.metric {
        let mut table = String::from("i,j,sectional\n");
        let e = |i: usize| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        };
        for i in 0..n {
            for j in i + 1..n {
                match alpha.sectional_curvature(metric, &e(i), &e(j)) {
                    Ok(k) => table.push_str(&format!("{i},{j},{}\n", fmt_f64(k))),
                    Err(err) => eprintln!("warning: plane ({i},{j}) skipped: {err}"),
                }
            }
        }
        write_atomic(&dir.join("sectional.csv"), table.as_bytes())?;
        written.push("sectional.csv");
    }
    println!(
        "wrote {} to {}; torsion max {:.3e}, curvature antisymmetry residual {:.3e}",
        written.join(", "),
        dir.display(),
        torsion.max_abs(),
        curvature.antisymmetry_residual()
    );
    Ok(0)
}

fn convergence_json(r: &ConvergenceReport, reference: Reference) -> Value {
    json!({
        "steps": r.steps,
        "errors": r.errors,
        "order": r.order,
        "exact": r.exact,
        "reference": match reference {
            Reference::ClosedForm => "closed_form",
            Reference::Fine => "fine",
        },
    })
}

fn convergence(args: ConvergenceArgs) -> Result<i32, CliError> {
    validate_span(args.t0, args.t1, None)?;
    let steps = parse_coords(&args.steps, "--steps")?;
    if steps.len() < 3 {
        return Err(CliError::Usage("--steps needs at least three step sizes".into()));
    }
    if let Some(h) = steps.iter().find(|h| **h <= 0.0) {
        return Err(CliError::Usage(format!("--steps: {h} is not positive")));
    }
    let x0 = parse_coords(&args.x0, "--x0")?;
    let (space, _) = gated(&args.file, args.force)?;
    let alpha = space.require_alpha()?.clone();
    check_len(&x0, alpha.dim(), "--x0")?;
    let g0 = identity_frame(&space)?;
    let self_parallel = linalg::norm_inf(&alpha.eval(&x0, &x0)?) == 0.0;
    let result = match &args.z0 {
        Some(z) => {
            let z0 = parse_coords(z, "--z0")?;
            check_len(&z0, alpha.dim(), "--z0")?;
            if args.reference == Some(Reference::ClosedForm) {
                return Err(CliError::Usage(
                    "transport problems only have a fine-step reference".into(),
                ));
            }
            let p = TransportProblem {
                alpha,
                g0,
                x0,
                z0,
                t0: args.t0,
                t1: args.t1,
            };
            transport::convergence_probe(&p, &steps).map(|r| (r, Reference::Fine))
        }
        None => {
            let reference = args.reference.unwrap_or(if self_parallel {
                Reference::ClosedForm
            } else {
                Reference::Fine
            });
            if reference == Reference::ClosedForm && !self_parallel {
                return Err(CliError::Usage(
                    "closed-form reference needs α(x0, x0) = 0; use --reference fine".into(),
                ));
            }
            let p = GeodesicProblem {
                alpha,
                g0,
                x0,
                t0: args.t0,
                t1: args.t1,
                closed_form: reference == Reference::ClosedForm,
            };
            transport::convergence_probe(&p, &steps).map(|r| (r, reference))
        }
    };
    let (report, reference) = match result {
        Ok(r) => r,
        Err(e) => return numeric_failure(e),
    };
    let value = convergence_json(&report, reference);
    if let Some(out) = &args.out {
        write_atomic(out, &output::to_json_bytes(&value))?;
    }
    if args.json {
        print!("{}", String::from_utf8_lossy(&output::to_json_bytes(&value)));
    } else {
        for (h, e) in report.steps.iter().zip(&report.errors) {
            println!("step {h:.3e}  error {e:.3e}");
        }
        match (report.exact, report.order) {
            (true, _) => println!("order: exact (errors at rounding level)"),
            (false, Some(p)) => println!("order: {p:.3}"),
            (false, None) => println!("order: undetermined"),
        }
    }
    Ok(0)
}
