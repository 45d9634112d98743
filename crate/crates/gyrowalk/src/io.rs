//! Trajectory serialization: CSV and JSONL, one record per line.
//!
//! Floats are written as shortest round-trip decimals. Non-finite values
//! (possible in the Busemann/distance columns for boundary starts) are
//! written as `inf`/`-inf`/`NaN` in CSV and as the same tokens in quotes in
//! JSONL, and parsed back to the identical bits.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::walk::TrajectoryRecord;

/// The stable CSV schema.
pub const CSV_HEADER: &str =
    "traj,n,omega,varsigma,tau,x,y,saturated,busemann_plus,busemann_minus,dist_p";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryFormat {
    Csv,
    Jsonl,
}

impl TrajectoryFormat {
    /// Pick a format from a file extension; `.jsonl`/`.json` mean JSONL,
    /// everything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => TrajectoryFormat::Jsonl,
            _ => TrajectoryFormat::Csv,
        }
    }
}

fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn json_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        format!("\"{}\"", fmt_f64(v))
    }
}

fn csv_line(r: &TrajectoryRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.traj,
        r.n,
        fmt_f64(r.omega),
        fmt_f64(r.varsigma),
        fmt_f64(r.tau),
        fmt_f64(r.x),
        fmt_f64(r.y),
        r.saturated,
        fmt_f64(r.busemann_plus),
        fmt_f64(r.busemann_minus),
        fmt_f64(r.dist_p),
    )
}

fn jsonl_line(r: &TrajectoryRecord) -> String {
    format!(
        concat!(
            "{{\"traj\":{},\"n\":{},\"omega\":{},\"varsigma\":{},\"tau\":{},",
            "\"x\":{},\"y\":{},\"saturated\":{},\"busemann_plus\":{},",
            "\"busemann_minus\":{},\"dist_p\":{}}}"
        ),
        r.traj,
        r.n,
        json_f64(r.omega),
        json_f64(r.varsigma),
        json_f64(r.tau),
        json_f64(r.x),
        json_f64(r.y),
        r.saturated,
        json_f64(r.busemann_plus),
        json_f64(r.busemann_minus),
        json_f64(r.dist_p),
    )
}

/// Write records to `w`; returns the number written. CSV output starts with
/// the header line even when the record stream is empty.
pub fn write_trajectory(
    records: &[TrajectoryRecord],
    w: &mut dyn Write,
    format: TrajectoryFormat,
) -> Result<usize> {
    fn emit(w: &mut dyn Write, line: &str, written: usize) -> Result<()> {
        w.write_all(line.as_bytes())
            .and_then(|_| w.write_all(b"\n"))
            .map_err(|source| Error::Io { written, source })
    }
    let mut written = 0usize;
    if format == TrajectoryFormat::Csv {
        emit(w, CSV_HEADER, written)?;
    }
    for r in records {
        let line = match format {
            TrajectoryFormat::Csv => csv_line(r),
            TrajectoryFormat::Jsonl => jsonl_line(r),
        };
        emit(w, &line, written)?;
        written += 1;
    }
    w.flush().map_err(|source| Error::Io { written, source })?;
    Ok(written)
}

pub fn write_trajectory_path(
    records: &[TrajectoryRecord],
    path: &Path,
    format: TrajectoryFormat,
) -> Result<usize> {
    let file = File::create(path).map_err(|source| Error::Io { written: 0, source })?;
    let mut w = BufWriter::new(file);
    write_trajectory(records, &mut w, format)
}

fn parse_f64(tok: &str) -> Result<f64> {
    let tok = tok.trim().trim_matches('"');
    tok.parse::<f64>()
        .map_err(|_| Error::Config(format!("bad float field: {tok:?}")))
}

fn parse_csv_line(line: &str, lineno: usize) -> Result<TrajectoryRecord> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 11 {
        return Err(Error::Config(format!(
            "line {lineno}: expected 11 CSV fields, got {}",
            fields.len()
        )));
    }
    Ok(TrajectoryRecord {
        traj: fields[0]
            .parse()
            .map_err(|_| Error::Config(format!("line {lineno}: bad traj")))?,
        n: fields[1]
            .parse()
            .map_err(|_| Error::Config(format!("line {lineno}: bad n")))?,
        omega: parse_f64(fields[2])?,
        varsigma: parse_f64(fields[3])?,
        tau: parse_f64(fields[4])?,
        x: parse_f64(fields[5])?,
        y: parse_f64(fields[6])?,
        saturated: match fields[7] {
            "true" => true,
            "false" => false,
            other => {
                return Err(Error::Config(format!(
                    "line {lineno}: bad saturated flag {other:?}"
                )))
            }
        },
        busemann_plus: parse_f64(fields[8])?,
        busemann_minus: parse_f64(fields[9])?,
        dist_p: parse_f64(fields[10])?,
    })
}

fn parse_jsonl_line(line: &str, lineno: usize) -> Result<TrajectoryRecord> {
    // records are flat objects with known keys and values that never contain
    // ',' or '}'; a field scan keeps parse(write(x)) bit-exact
    let get = |key: &str| -> Result<&str> {
        let pat = format!("\"{key}\":");
        let start = line
            .find(&pat)
            .ok_or_else(|| Error::Config(format!("line {lineno}: missing key {key}")))?
            + pat.len();
        let rest = &line[start..];
        let end = rest.find([',', '}']).unwrap_or(rest.len());
        Ok(rest[..end].trim())
    };
    Ok(TrajectoryRecord {
        traj: get("traj")?
            .parse()
            .map_err(|_| Error::Config(format!("line {lineno}: bad traj")))?,
        n: get("n")?
            .parse()
            .map_err(|_| Error::Config(format!("line {lineno}: bad n")))?,
        omega: parse_f64(get("omega")?)?,
        varsigma: parse_f64(get("varsigma")?)?,
        tau: parse_f64(get("tau")?)?,
        x: parse_f64(get("x")?)?,
        y: parse_f64(get("y")?)?,
        saturated: get("saturated")? == "true",
        busemann_plus: parse_f64(get("busemann_plus")?)?,
        busemann_minus: parse_f64(get("busemann_minus")?)?,
        dist_p: parse_f64(get("dist_p")?)?,
    })
}

/// Read a trajectory stream written by [`write_trajectory`].
pub fn read_trajectory(r: impl BufRead, format: TrajectoryFormat) -> Result<Vec<TrajectoryRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|source| Error::Io { written: 0, source })?;
        if line.is_empty() {
            continue;
        }
        match format {
            TrajectoryFormat::Csv => {
                if i == 0 {
                    if line != CSV_HEADER {
                        return Err(Error::Config(format!("unexpected CSV header: {line:?}")));
                    }
                    continue;
                }
                out.push(parse_csv_line(&line, i + 1)?);
            }
            TrajectoryFormat::Jsonl => out.push(parse_jsonl_line(&line, i + 1)?),
        }
    }
    Ok(out)
}

pub fn read_trajectory_path(path: &Path, format: TrajectoryFormat) -> Result<Vec<TrajectoryRecord>> {
    let file = File::open(path).map_err(|source| Error::Io { written: 0, source })?;
    read_trajectory(BufReader::new(file), format)
}
