//! CSV and JSON artifacts.
//!
//! Floats in CSV files are written with 17 significant digits in scientific
//! notation so identical runs produce identical bytes. Every file is written
//! to a temporary sibling first and renamed into place.

use std::fs;
use std::io::Write;
use std::path::Path;

use homspace_core::catalog::Diagnostic;
use homspace_core::transport::Trajectory;
use homspace_core::{CheckReport, MetricOnM};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `contents` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !parent.exists() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(|e| CliError::io(parent, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn to_json_bytes(value: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("JSON values always serialize");
    out.push(b'\n');
    out
}

/// Non-finite residuals become `null`.
fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    check: &'a str,
    max_residual: Value,
    tolerance: f64,
    pass: bool,
    mandatory: bool,
    witnesses: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    scope: Option<&'a str>,
}

pub fn check_record(report: &CheckReport, mandatory: bool) -> Value {
    serde_json::to_value(CheckRecord {
        check: &report.check,
        max_residual: finite_or_null(report.max_residual),
        tolerance: report.tolerance,
        pass: report.pass,
        mandatory,
        witnesses: &report.witnesses,
        scope: report.scope.as_deref(),
    })
    .expect("record serializes")
}

/// Global pass is the conjunction of the mandatory checks.
pub fn overall_pass(diags: &[Diagnostic]) -> bool {
    diags.iter().all(|d| d.report.pass || !d.mandatory)
}

pub fn run_report(space: &str, alpha: &str, diags: &[Diagnostic], warnings: &[String]) -> Value {
    json!({
        "space": space,
        "alpha": alpha,
        "pass": overall_pass(diags),
        "checks": diags.iter().map(|d| check_record(&d.report, d.mandatory)).collect::<Vec<_>>(),
        "warnings": warnings,
    })
}

/// Human-readable check listing.
pub fn render_checks(space: &str, alpha: &str, diags: &[Diagnostic], warnings: &[String]) -> String {
    let mut s = format!("space {space} (alpha: {alpha})\n");
    for d in diags {
        let r = &d.report;
        let verdict = match (r.pass, d.mandatory) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "info",
        };
        s.push_str(&format!(
            "  {verdict:<4} {:<48} residual {:>10.3e}  tol {:.0e}{}\n",
            r.check,
            r.max_residual,
            r.tolerance,
            if d.mandatory { "" } else { "  (informational)" }
        ));
        if let Some(scope) = &r.scope {
            s.push_str(&format!("         scope: {scope}\n"));
        }
        if !r.pass {
            for w in &r.witnesses {
                s.push_str(&format!("         {w}\n"));
            }
        }
    }
    for w in warnings {
        s.push_str(&format!("warning: {w}\n"));
    }
    s.push_str(if overall_pass(diags) {
        "overall: pass\n"
    } else {
        "overall: FAIL\n"
    });
    s
}

/// Everything written next to one trajectory.
pub struct TrajectoryExport<'a> {
    pub space: &'a str,
    pub alpha: &'a str,
    pub step: f64,
    pub base: &'a Trajectory,
    /// One transported series per seed.
    pub seeds: &'a [Vec<Vec<f64>>],
    /// Adds an `energy` column `⟨x, Gx⟩`.
    pub energy: Option<&'a MetricOnM>,
    pub tainted: bool,
}

fn seed_prefix(s: usize) -> String {
    if s == 0 {
        "z".into()
    } else {
        format!("z{}", s + 1)
    }
}

impl TrajectoryExport<'_> {
    fn frame_size(&self) -> usize {
        self.base.frames.first().map_or(0, |g| g.size())
    }

    fn columns(&self) -> Vec<String> {
        let d = self.frame_size();
        let n = self.base.velocities.first().map_or(0, Vec::len);
        let mut cols = vec!["t".to_string()];
        for i in 0..d {
            for j in 0..d {
                cols.push(format!("g_{i}{j}"));
            }
        }
        cols.extend((1..=n).map(|k| format!("x_{k}")));
        for (s, z) in self.seeds.iter().enumerate() {
            let nz = z.first().map_or(0, Vec::len);
            cols.extend((1..=nz).map(|k| format!("{}_{k}", seed_prefix(s))));
        }
        if self.energy.is_some() {
            cols.push("energy".into());
        }
        cols
    }

    pub fn energies(&self) -> Option<Vec<f64>> {
        self.energy
            .map(|m| self.base.velocities.iter().map(|x| m.inner(x, x)).collect())
    }

    pub fn csv(&self) -> String {
        let mut out = format!(
            "# space={},alpha={},step={},integrator={}{}\n",
            self.space,
            self.alpha,
            fmt_f64(self.step),
            self.base.meta.integrator,
            if self.tainted { ",tainted=true" } else { "" }
        );
        out.push_str(&self.columns().join(","));
        out.push('\n');
        let energies = self.energies();
        for i in 0..self.base.len() {
            let mut row = vec![fmt_f64(self.base.times[i])];
            row.extend(
                self.base.frames[i]
                    .matrix()
                    .as_slice()
                    .iter()
                    .map(|v| fmt_f64(*v)),
            );
            row.extend(self.base.velocities[i].iter().map(|v| fmt_f64(*v)));
            for z in self.seeds {
                row.extend(z[i].iter().map(|v| fmt_f64(*v)));
            }
            if let Some(e) = &energies {
                row.push(fmt_f64(e[i]));
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON mirror of the CSV with the meta block; `extra` is merged into meta.
    pub fn json(&self, extra: Value) -> Value {
        let m = &self.base.meta;
        let mut meta = json!({
            "integrator": m.integrator,
            "step": self.step,
            "samples": self.base.len(),
            "max_group_drift": m.max_group_drift.map_or(Value::Null, finite_or_null),
            "horizontality_leak": finite_or_null(m.horizontality_leak),
            "reprojected": m.reprojected,
            "tainted": self.tainted,
            "warnings": m.warnings,
        });
        if let Some(e) = self.energies() {
            let e0 = e.first().copied().unwrap_or(0.0);
            let drift = e.iter().map(|v| (v - e0).abs()).fold(0.0, f64::max);
            meta["energy_drift"] = finite_or_null(drift);
        }
        if let (Value::Object(meta), Value::Object(extra)) = (&mut meta, extra) {
            meta.extend(extra);
        }
        let columns = self.columns();
        let mut rows = Vec::with_capacity(self.base.len());
        let energies = self.energies();
        for i in 0..self.base.len() {
            let mut row: Vec<f64> = vec![self.base.times[i]];
            row.extend_from_slice(self.base.frames[i].matrix().as_slice());
            row.extend_from_slice(&self.base.velocities[i]);
            for z in self.seeds {
                row.extend_from_slice(&z[i]);
            }
            if let Some(e) = &energies {
                row.push(e[i]);
            }
            rows.push(row);
        }
        json!({
            "space": self.space,
            "alpha": self.alpha,
            "meta": meta,
            "columns": columns,
            "rows": rows,
        })
    }
}
