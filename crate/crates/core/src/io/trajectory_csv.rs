use std::io::{Read, Write};
use std::path::Path;

use crate::dynamics::Trajectory;
use crate::{Error, Result};

/// Writes `t,<names>` rows with 17 significant digits.
pub fn write_trajectory<W: Write>(out: W, names: &[String], traj: &Trajectory<f64>) -> Result<()> {
    if names.len() != traj.dim() {
        return Err(Error::DimensionMismatch {
            expected: traj.dim(),
            got: names.len(),
        });
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for (t, x) in traj.times().iter().zip(traj.states()) {
        let mut row = Vec::with_capacity(x.len() + 1);
        row.push(format!("{t:.16e}"));
        row.extend(x.iter().map(|v| format!("{v:.16e}")));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectory_file(path: impl AsRef<Path>, names: &[String], traj: &Trajectory<f64>) -> Result<()> {
    write_trajectory(std::fs::File::create(path)?, names, traj)
}

/// Reads a CSV written by [`write_trajectory`] (or any `t,<names>` table).
/// The result has no stored derivatives, so it interpolates linearly.
pub fn read_trajectory<R: Read>(input: R) -> Result<(Vec<String>, Trajectory<f64>)> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.get(0).map(str::trim) != Some("t") || header.len() < 2 {
        return Err(Error::Model("trajectory CSV header must be t,<names>".into()));
    }
    let names: Vec<String> = header.iter().skip(1).map(|s| s.trim().to_string()).collect();
    let mut times = Vec::new();
    let mut states = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Model(format!("row {}: '{s}' is not a number", line + 2)))
        };
        times.push(parse(&rec[0])?);
        states.push(rec.iter().skip(1).map(parse).collect::<Result<Vec<f64>>>()?);
    }
    Ok((names, Trajectory::from_samples(times, states)?))
}

pub fn read_trajectory_file(path: impl AsRef<Path>) -> Result<(Vec<String>, Trajectory<f64>)> {
    read_trajectory(std::fs::File::open(path)?)
}
