//! CSV exports of trajectories and scans.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use nilfold_core::Trajectory;
use serde::Serialize;

/// One line of a reversibility-curve scan.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub theta: f64,
    pub nu1: f64,
    pub nu3: f64,
    pub label: String,
    pub consistency_residual: f64,
}

pub fn write_scan(rows: &[ScanRow], out: &mut dyn Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `t` followed by the state columns, one row per node.
pub fn write_trajectory(path: &Path, header: &[&str], tr: &Trajectory) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
    w.write_record(header)?;
    for (t, x) in tr.times().iter().zip(tr.states()) {
        let mut rec = vec![t.to_string()];
        rec.extend(x.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
