//! CSV and JSON export, and the readers needed for round trips.
//!
//! Floats in CSV files carry 17 significant digits, so values survive a
//! write/read cycle bit for bit.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::coefficients::AngleTable;
use crate::error::{Error, Result};
use crate::linalg::HermiteTable;
use crate::pde::{EvolveTrace, GridState, Horizon, Scheme, Series, TraceOrigin};
use crate::traveling_wave::{Profile, WaveSolution};
use crate::verification::VerificationReport;

/// `{:.16e}` with `inf`/`-inf`/`nan` spelled out.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn write_rows<W: Write>(w: W, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_err)?;
    for row in rows {
        out.write_record(row.into_iter().map(fmt_f64)).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a numeric CSV with a header row; returns the header and the columns.
fn read_columns<R: Read>(r: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let mut cols = vec![Vec::new(); header.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        for (k, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: `{field}` is not a number", line + 1)))?;
            cols[k].push(v);
        }
    }
    Ok((header, cols))
}

pub fn write_profile_csv<W: Write>(w: W, profile: &Profile) -> Result<()> {
    write_rows(w, &["x", "phi", "psi"], profile.samples().map(|(x, p, s)| vec![x, p, s]))
}

/// Columns of a profile CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub x: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
}

pub fn read_profile_csv<R: Read>(r: R) -> Result<ProfileTable> {
    let (header, mut cols) = read_columns(r)?;
    if header != ["x", "phi", "psi"] {
        return Err(Error::Parse(format!("expected header x,phi,psi, got {}", header.join(","))));
    }
    let psi = cols.pop().unwrap();
    let phi = cols.pop().unwrap();
    let x = cols.pop().unwrap();
    Ok(ProfileTable { x, phi, psi })
}

pub fn write_wave_json<W: Write>(w: W, wave: &WaveSolution) -> Result<()> {
    serde_json::to_writer_pretty(w, &wave.summary())?;
    Ok(())
}

/// Tabulated datum `x,u[,ux]` on `[-1, 1]`; missing slopes are estimated.
pub fn read_datum_csv<R: Read>(r: R) -> Result<HermiteTable> {
    let (header, mut cols) = read_columns(r)?;
    let has_slopes = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["x", "u"] => false,
        ["x", "u", "ux"] => true,
        _ => {
            return Err(Error::Parse(format!(
                "expected header x,u or x,u,ux, got {}",
                header.join(",")
            )))
        }
    };
    if cols.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Parse("datum values must be finite".into()));
    }
    if has_slopes {
        let dy = cols.pop().unwrap();
        let y = cols.pop().unwrap();
        let x = cols.pop().unwrap();
        HermiteTable::new(x, y, dy)
    } else {
        let y = cols.pop().unwrap();
        let x = cols.pop().unwrap();
        HermiteTable::with_estimated_slopes(x, y)
    }
}

/// Tabulated coefficients `omega,a,b` over `[-pi/2, pi/2]`.
pub fn read_angle_table_csv<R: Read>(r: R) -> Result<AngleTable> {
    let (header, mut cols) = read_columns(r)?;
    if header != ["omega", "a", "b"] {
        return Err(Error::Parse(format!("expected header omega,a,b, got {}", header.join(","))));
    }
    let b = cols.pop().unwrap();
    let a = cols.pop().unwrap();
    let omega = cols.pop().unwrap();
    AngleTable::new(omega, a, b)
}

/// One row block per snapshot.
pub fn write_snapshots_csv<W: Write>(w: W, trace: &EvolveTrace) -> Result<()> {
    let rows = trace.snapshots.iter().flat_map(|s| {
        let (ux, uxx, theta) = (s.ux(), s.uxx(), s.theta());
        (0..s.u.len())
            .map(move |i| vec![s.t, s.x()[i], s.u[i], ux[i], uxx[i], theta[i]])
            .collect::<Vec<_>>()
    });
    write_rows(w, &["t", "x", "u", "ux", "uxx", "theta"], rows)
}

/// Everything in a trace except the snapshot arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub origin: TraceOrigin,
    pub scheme: Scheme,
    pub intervals: usize,
    pub snapshot_times: Vec<f64>,
    pub horizon: Option<Horizon>,
    pub steps: usize,
    pub rejected: usize,
    pub series: Series,
}

impl From<&EvolveTrace> for TraceSummary {
    fn from(t: &EvolveTrace) -> Self {
        Self {
            origin: t.origin.clone(),
            scheme: t.scheme,
            intervals: t.snapshots[0].grid.intervals(),
            snapshot_times: t.times(),
            horizon: t.horizon,
            steps: t.steps,
            rejected: t.rejected,
            series: t.series.clone(),
        }
    }
}

pub fn write_trace_json<W: Write>(w: W, trace: &EvolveTrace) -> Result<()> {
    serde_json::to_writer_pretty(w, &TraceSummary::from(trace))?;
    Ok(())
}

pub fn write_report_json<W: Write>(mut w: W, report: &VerificationReport) -> Result<()> {
    w.write_all(report.to_json()?.as_bytes())?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Full state dump, used for the last good state before a blow-up.
pub fn write_state_json<W: Write>(w: W, state: &GridState) -> Result<()> {
    serde_json::to_writer_pretty(w, state)?;
    Ok(())
}

pub fn read_state_json<R: Read>(r: R) -> Result<GridState> {
    let s: GridState = serde_json::from_reader(r)?;
    GridState::new(s.grid, s.u, s.t)
}
