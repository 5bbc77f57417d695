//! Flat CSV files. Floats use Rust's shortest round-trip formatting, so
//! parsing a written file gives back the exact values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{AggregatePoint, AggregateSeries};
use crate::error::{invalid, Error, Result};
use crate::solvers::{Record, Trajectory};

pub const TRIAL_HEADER: &str = "k,nevals,f_true,acc";
pub const AGGREGATE_HEADER: &str = "nevals,mean,median,q25,q75,min,max";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    fs::write(path, body).map_err(io_err(path))
}

pub fn write_trial_csv(trajectory: &Trajectory, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(32 * (trajectory.records.len() + 1));
    out.push_str(TRIAL_HEADER);
    out.push('\n');
    for r in &trajectory.records {
        let _ = writeln!(out, "{},{},{:?},{:?}", r.k, r.nevals, r.f_true, r.acc);
    }
    write_file(path, &out)
}

/// Refuses to write a series whose quantiles are out of order.
pub fn write_aggregate_csv(series: &AggregateSeries, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(64 * (series.points.len() + 1));
    out.push_str(AGGREGATE_HEADER);
    out.push('\n');
    for p in &series.points {
        if !p.is_ordered() {
            return Err(invalid(format!("quantiles out of order at nevals {}", p.nevals)));
        }
        let _ = writeln!(
            out,
            "{},{:?},{:?},{:?},{:?},{:?},{:?}",
            p.nevals, p.mean, p.median, p.q25, p.q75, p.min, p.max
        );
    }
    write_file(path, &out)
}

fn rows<'a>(text: &'a str, header: &str, path: &Path) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)>> {
    let mut lines = text.lines();
    if lines.next() != Some(header) {
        return Err(invalid(format!("{}: expected header `{header}`", path.display())));
    }
    Ok(lines.enumerate().map(|(i, l)| (i + 2, l.split(',').collect())))
}

fn field<T: std::str::FromStr>(cols: &[&str], i: usize, line: usize, path: &Path) -> Result<T> {
    cols.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| invalid(format!("{}:{line}: bad field {}", path.display(), i + 1)))
}

pub fn read_trial_csv(path: &Path) -> Result<Trajectory> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut t = Trajectory::default();
    for (line, cols) in rows(&text, TRIAL_HEADER, path)? {
        t.records.push(Record {
            k: field(&cols, 0, line, path)?,
            nevals: field(&cols, 1, line, path)?,
            f_true: field(&cols, 2, line, path)?,
            acc: field(&cols, 3, line, path)?,
        });
    }
    Ok(t)
}

pub fn read_aggregate_csv(path: &Path) -> Result<AggregateSeries> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut s = AggregateSeries::default();
    for (line, cols) in rows(&text, AGGREGATE_HEADER, path)? {
        s.points.push(AggregatePoint {
            nevals: field(&cols, 0, line, path)?,
            mean: field(&cols, 1, line, path)?,
            median: field(&cols, 2, line, path)?,
            q25: field(&cols, 3, line, path)?,
            q75: field(&cols, 4, line, path)?,
            min: field(&cols, 5, line, path)?,
            max: field(&cols, 6, line, path)?,
        });
    }
    Ok(s)
}
