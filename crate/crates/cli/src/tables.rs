//! CSV schemas shared by the subcommands.
//!
//! All files are UTF-8 with LF line endings, a header row, and `.` as the
//! decimal separator, independent of locale.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use sphere_lattice::bench::{BenchFamily, ErrorStats};
use sphere_lattice::geo::{Cap, GeoPoint};
use sphere_lattice::lattice::{Lattice, LatticeFamily, WeightedPoint};

use crate::format::fmt_float;
use crate::{CliError, CliResult};

pub const LATTICE_HEADER: &str = "index,lat_deg,lon_deg,weight";
pub const SPIRAL_HEADER: &str = "t,lat_deg,lon_deg";
pub const ESTIMATE_HEADER: &str = "n_caps,P,effective_P,fraction,points_inside";
pub const CAPS_HEADER: &str = "lat_deg,lon_deg,radius_rad";
pub const SWEEP_HEADER: &str = "family,P,effective_P,cap_fraction,n,rmse,max_error";
pub const FIT_HEADER: &str = "family,x_variable,k,a,residual";

pub fn create_output(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

pub fn finish_output(mut writer: BufWriter<File>, path: &Path) -> CliResult<()> {
    writer
        .flush()
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

fn open_input(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
}

fn read_lines(path: &Path) -> CliResult<Vec<String>> {
    open_input(path)?
        .lines()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
}

fn parse_field<T: std::str::FromStr>(
    field: &str,
    name: &str,
    path: &Path,
    row: usize,
) -> CliResult<T> {
    field.trim().parse().map_err(|_| {
        CliError::data(format!(
            "{}: row {row}: cannot parse {name} from `{field}`",
            path.display()
        ))
    })
}

fn split_row<'a>(line: &'a str, expected: usize, path: &Path, row: usize) -> CliResult<Vec<&'a str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != expected {
        return Err(CliError::data(format!(
            "{}: row {row}: expected {expected} comma-separated fields, got {}",
            path.display(),
            fields.len()
        )));
    }
    Ok(fields)
}

pub fn write_lattice_csv(lattice: &Lattice, path: &Path) -> CliResult<()> {
    let mut out = create_output(path)?;
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(out, "{LATTICE_HEADER}")?;
        for wp in lattice.points() {
            writeln!(
                out,
                "{},{},{},{}",
                wp.index,
                fmt_float(wp.point.lat_deg()),
                fmt_float(wp.point.lon_deg()),
                fmt_float(wp.weight)
            )?;
        }
        Ok(())
    };
    write(&mut out).map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    finish_output(out, path)
}

/// Parse a lattice written by `write_lattice_csv` back into memory. The
/// expected family and size parameter validate the point count.
pub fn read_lattice_csv(path: &Path, family: LatticeFamily, param: u64) -> CliResult<Lattice> {
    let lines = read_lines(path)?;
    if lines.first().map(String::as_str) != Some(LATTICE_HEADER) {
        return Err(CliError::data(format!(
            "{}: expected header `{LATTICE_HEADER}`",
            path.display()
        )));
    }
    let mut points = Vec::with_capacity(lines.len().saturating_sub(1));
    for (i, line) in lines.iter().enumerate().skip(1) {
        let row = i + 1;
        let fields = split_row(line, 4, path, row)?;
        let index: i64 = parse_field(fields[0], "index", path, row)?;
        let lat: f64 = parse_field(fields[1], "lat_deg", path, row)?;
        let lon: f64 = parse_field(fields[2], "lon_deg", path, row)?;
        let weight: f64 = parse_field(fields[3], "weight", path, row)?;
        let point = GeoPoint::new(lat, lon)
            .map_err(|e| CliError::data(format!("{}: row {row}: {e}", path.display())))?;
        points.push(WeightedPoint { index, point, weight });
    }
    Lattice::from_parts(family, param, points)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

/// Read a cap list: one `lat_deg,lon_deg,radius_rad` row per cap, radius in
/// angular radians. A leading header row is accepted and skipped; an empty
/// file is an empty cap set.
pub fn read_caps_csv(path: &Path) -> CliResult<Vec<Cap>> {
    let lines = read_lines(path)?;
    let mut caps = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let row = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if row == 1 && line.trim() == CAPS_HEADER {
            continue;
        }
        let fields = split_row(line, 3, path, row)?;
        let lat: f64 = parse_field(fields[0], "lat_deg", path, row)?;
        let lon: f64 = parse_field(fields[1], "lon_deg", path, row)?;
        let radius: f64 = parse_field(fields[2], "radius_rad", path, row)?;
        let center = GeoPoint::new(lat, lon)
            .map_err(|e| CliError::data(format!("{}: row {row}: {e}", path.display())))?;
        let cap = Cap::new(center, radius)
            .map_err(|e| CliError::data(format!("{}: row {row}: {e}", path.display())))?;
        caps.push(cap);
    }
    Ok(caps)
}

pub fn write_sweep_csv(rows: &[ErrorStats], path: &Path) -> CliResult<()> {
    let mut out = create_output(path)?;
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(out, "{SWEEP_HEADER}")?;
        for s in rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.family,
                s.points,
                fmt_float(s.effective_points),
                fmt_float(s.cap_fraction),
                s.trials,
                fmt_float(s.rmse),
                fmt_float(s.max_error)
            )?;
        }
        Ok(())
    };
    write(&mut out).map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    finish_output(out, path)
}

pub fn read_sweep_csv(path: &Path) -> CliResult<Vec<ErrorStats>> {
    let lines = read_lines(path)?;
    if lines.first().map(String::as_str) != Some(SWEEP_HEADER) {
        return Err(CliError::data(format!(
            "{}: expected header `{SWEEP_HEADER}`",
            path.display()
        )));
    }
    let mut rows = Vec::with_capacity(lines.len().saturating_sub(1));
    for (i, line) in lines.iter().enumerate().skip(1) {
        let row = i + 1;
        let fields = split_row(line, 7, path, row)?;
        let family: BenchFamily = parse_field(fields[0], "family", path, row)?;
        rows.push(ErrorStats {
            family,
            points: parse_field(fields[1], "P", path, row)?,
            effective_points: parse_field(fields[2], "effective_P", path, row)?,
            cap_fraction: parse_field(fields[3], "cap_fraction", path, row)?,
            trials: parse_field(fields[4], "n", path, row)?,
            rmse: parse_field(fields[5], "rmse", path, row)?,
            max_error: parse_field(fields[6], "max_error", path, row)?,
        });
    }
    Ok(rows)
}
