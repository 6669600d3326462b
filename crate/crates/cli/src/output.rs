//! CSV writers. Floats use `{:.12e}` so reruns are byte-identical and every
//! value carries 13 significant digits.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use movbeam::integrator::TraceRecord;
use movbeam::verification::{ConvergenceTable, StepError, SweepCell};

use crate::error::CliError;

pub const DIVERGE: &str = "DIVERGE";

pub fn num(v: f64) -> String {
    format!("{v:.12e}")
}

fn writer(dir: &Path, name: &str) -> Result<(csv::Writer<BufWriter<File>>, PathBuf), CliError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let w = csv::WriterBuilder::new().from_writer(BufWriter::new(File::create(&path)?));
    Ok((w, path))
}

fn finish(mut w: csv::Writer<BufWriter<File>>, path: PathBuf) -> Result<PathBuf, CliError> {
    w.flush()?;
    Ok(path)
}

pub fn write_trace(dir: &Path, trace: &[TraceRecord]) -> Result<PathBuf, CliError> {
    let (mut w, path) = writer(dir, "trace.csv")?;
    w.write_record(["step", "t", "newton_iters", "res_norm", "dinf"])?;
    for r in trace {
        w.write_record([
            r.step.to_string(),
            num(r.t),
            r.newton_iters.to_string(),
            num(r.residual),
            num(r.dinf),
        ])?;
    }
    finish(w, path)
}

pub fn write_energy(dir: &Path, series: &[(f64, f64)]) -> Result<PathBuf, CliError> {
    let (mut w, path) = writer(dir, "energy.csv")?;
    w.write_record(["t", "E"])?;
    for (t, e) in series {
        w.write_record([num(*t), num(*e)])?;
    }
    finish(w, path)
}

pub fn write_convergence(dir: &Path, table: &ConvergenceTable) -> Result<PathBuf, CliError> {
    let (mut w, path) = writer(dir, "convergence.csv")?;
    w.write_record(["level", "h", "dt", "error_linf_l2", "rate"])?;
    for r in &table.rows {
        w.write_record([
            r.level.to_string(),
            num(r.h),
            num(r.dt),
            r.error.map_or_else(|| DIVERGE.to_string(), num),
            r.rate.map_or_else(String::new, num),
        ])?;
    }
    finish(w, path)
}

pub fn write_theta_sweep(dir: &Path, cells: &[SweepCell]) -> Result<PathBuf, CliError> {
    let (mut w, path) = writer(dir, "theta_sweep.csv")?;
    w.write_record(["h", "theta", "error_or_DIVERGE"])?;
    for c in cells {
        w.write_record([
            num(c.h),
            num(c.theta),
            c.error.map_or_else(|| DIVERGE.to_string(), num),
        ])?;
    }
    finish(w, path)
}

pub fn write_errors(dir: &Path, steps: &[StepError]) -> Result<PathBuf, CliError> {
    let (mut w, path) = writer(dir, "errors.csv")?;
    w.write_record(["step", "t", "error_l2", "error_h2"])?;
    for s in steps {
        w.write_record([s.step.to_string(), num(s.t), num(s.l2), num(s.h2)])?;
    }
    finish(w, path)
}

/// `solution_<t>.csv` with reference coordinates and the nodal value DOF.
pub fn write_solution(
    dir: &Path,
    dim: usize,
    t: f64,
    nodes: &[([f64; 2], f64)],
) -> Result<PathBuf, CliError> {
    let (mut w, path) = writer(dir, &format!("solution_{t:.6}.csv"))?;
    if dim == 1 {
        w.write_record(["y", "v"])?;
    } else {
        w.write_record(["y1", "y2", "v"])?;
    }
    for (y, v) in nodes {
        if dim == 1 {
            w.write_record([num(y[0]), num(*v)])?;
        } else {
            w.write_record([num(y[0]), num(y[1]), num(*v)])?;
        }
    }
    finish(w, path)
}

pub fn write_fit(
    dir: &Path,
    fit: &movbeam::verification::DecayFit,
    window: (f64, f64),
    t_level: Option<f64>,
) -> Result<PathBuf, CliError> {
    let (mut w, path) = writer(dir, "decay_fit.csv")?;
    w.write_record([
        "t_start",
        "t_end",
        "A0",
        "A1",
        "r_squared",
        "samples",
        "t_level",
    ])?;
    w.write_record([
        num(window.0),
        num(window.1),
        num(fit.a0),
        num(fit.a1),
        num(fit.r_squared),
        fit.samples.to_string(),
        t_level.map_or_else(String::new, num),
    ])?;
    finish(w, path)
}
