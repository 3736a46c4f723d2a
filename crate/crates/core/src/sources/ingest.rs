//! Pressure CSV: one row per sample, `time_s` then one `p_<id>` column per panel.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use super::field::SurfacePressureField;
use crate::error::{Error, Result};
use crate::format::{
    comment_value, csv_error, csv_reader, exact, parse_f64, read_text, record_line, write_text,
};
use crate::geom::{read_geometry_csv, SurfaceMesh};

/// Relative tolerance on the spacing of timestamps.
pub const TIME_STEP_TOLERANCE: f64 = 1e-6;

pub fn pressure_to_csv(field: &SurfacePressureField) -> String {
    let mut out = String::new();
    out.push_str("# fanoise surface pressure, gauge Pa\n");
    let _ = writeln!(out, "# sample_rate: {}", exact(field.sample_rate()));
    out.push_str("time_s");
    for id in 0..field.n_panels() {
        let _ = write!(out, ",p_{id}");
    }
    out.push('\n');
    for (i, row) in field.pressures().rows().into_iter().enumerate() {
        out.push_str(&exact(field.time(i)));
        for &p in row {
            out.push(',');
            out.push_str(&exact(p));
        }
        out.push('\n');
    }
    out
}

pub fn write_pressure_csv(field: &SurfacePressureField, path: &Path) -> Result<()> {
    write_text(path, &pressure_to_csv(field))
}

/// Parse pressure text against `mesh`. `path` is only used in error messages.
///
/// The sample rate is inferred from the timestamps. A `sample_rate` comment that
/// agrees with them to within the spacing tolerance is taken as the exact value.
pub fn parse_pressure_csv(
    text: &str,
    path: &Path,
    mesh: &SurfaceMesh,
) -> Result<SurfacePressureField> {
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let header_line = record_line(&header);
    if header.get(0) != Some("time_s") {
        return Err(Error::parse(
            path,
            header_line,
            "first column must be `time_s`",
        ));
    }
    for (col, name) in header.iter().enumerate().skip(1) {
        let id: usize = name
            .strip_prefix("p_")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(path, header_line, format!("bad column name `{name}`")))?;
        if id >= mesh.len() {
            return Err(Error::parse(
                path,
                header_line,
                format!("unknown panel id {id} (mesh has {} panels)", mesh.len()),
            ));
        }
        if id != col - 1 {
            return Err(Error::parse(
                path,
                header_line,
                format!(
                    "columns must be ordered by panel id: expected p_{}, found {name}",
                    col - 1
                ),
            ));
        }
    }
    let n_panels = header.len() - 1;
    if n_panels != mesh.len() {
        return Err(Error::parse(
            path,
            header_line,
            format!(
                "missing panel p_{n_panels} (mesh has {} panels)",
                mesh.len()
            ),
        ));
    }

    let mut times: Vec<(f64, u64)> = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        if record.len() != header.len() {
            return Err(Error::parse(
                path,
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        let t = parse_f64(&record[0], "time_s", path, line)?;
        if let Some(&(prev, _)) = times.last() {
            if !(t > prev) {
                return Err(Error::parse(
                    path,
                    line,
                    format!("time {t} does not increase"),
                ));
            }
        }
        times.push((t, line));
        for (col, field) in record.iter().enumerate().skip(1) {
            values.push(parse_f64(field, &header[col], path, line)?);
        }
    }
    if times.len() < 2 {
        return Err(Error::parse(
            path,
            header_line,
            format!("need at least 2 samples, found {}", times.len()),
        ));
    }

    let (t0, _) = times[0];
    let (t_last, _) = times[times.len() - 1];
    let dt = (t_last - t0) / (times.len() - 1) as f64;
    // The first step is the reference, so the row that breaks uniformity is the one named.
    let first_step = times[1].0 - t0;
    for w in times.windows(2) {
        let step = w[1].0 - w[0].0;
        if ((step - first_step) / first_step).abs() > TIME_STEP_TOLERANCE {
            return Err(Error::parse(
                path,
                w[1].1,
                format!("non-uniform time step {step:e} s (first step {first_step:e} s)"),
            ));
        }
    }
    let inferred = 1.0 / dt;
    let sample_rate = comment_value(text, "sample_rate")
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|fs| ((fs - inferred) / inferred).abs() <= TIME_STEP_TOLERANCE)
        .unwrap_or(inferred);

    let pressures = Array2::from_shape_vec((times.len(), n_panels), values)
        .map_err(|e| Error::parse(path, 0, e.to_string()))?;
    SurfacePressureField::new(sample_rate, t0, pressures, mesh)
}

pub fn read_pressure_csv(path: &Path, mesh: &SurfaceMesh) -> Result<SurfacePressureField> {
    let text = read_text(path)?;
    parse_pressure_csv(&text, path, mesh)
}

/// Load a mesh and the pressure history recorded on it.
pub fn ingest_pressure(
    geometry_csv: &Path,
    pressure_csv: &Path,
) -> Result<(SurfaceMesh, SurfacePressureField)> {
    let mesh = read_geometry_csv(geometry_csv)?;
    let field = read_pressure_csv(pressure_csv, &mesh)?;
    Ok((mesh, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::SurfaceMesh;
    use nalgebra::Vector3;

    fn two_panels() -> SurfaceMesh {
        let a = SurfaceMesh::single_panel(Vector3::zeros(), Vector3::z(), 1e-4).unwrap();
        let mut panels = a.panels().to_vec();
        let mut b = panels[0].clone();
        b.id = 1;
        b.center = Vector3::new(0.1, 0.0, 0.0);
        panels.push(b);
        SurfaceMesh::new(panels, None).unwrap()
    }

    fn parse(text: &str) -> Result<SurfacePressureField> {
        parse_pressure_csv(text, Path::new("p.csv"), &two_panels())
    }

    fn line_of(err: Error) -> u64 {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn small_file_shape() {
        let f = parse("# note\ntime_s,p_0,p_1\n0,1,2\n0.001,3,4\n0.002,5,6\n").unwrap();
        assert_eq!(f.pressures().dim(), (3, 2));
        assert!((f.sample_rate() - 1000.0).abs() < 1e-9);
        assert_eq!(f.pressures()[[2, 1]], 6.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            line_of(parse("time_s,p_0,p_1\n0,1,2\n0.001,3\n").unwrap_err()),
            3
        );
        assert_eq!(
            line_of(parse("time_s,p_0,p_1\n0,1,2\n0.001,3,4\n0.0005,5,6\n").unwrap_err()),
            4
        );
        assert_eq!(
            line_of(parse("time_s,p_0,p_7\n0,1,2\n0.001,3,4\n").unwrap_err()),
            1
        );
        assert_eq!(line_of(parse("time_s,p_0\n0,1\n0.001,3\n").unwrap_err()), 1);
        let jitter = "time_s,p_0,p_1\n0,1,2\n0.001,1,2\n0.002001,1,2\n0.003,1,2\n";
        assert_eq!(line_of(parse(jitter).unwrap_err()), 4);
        assert!(parse("time_s,p_0,p_1\n0,1,2\n").is_err());
        assert_eq!(
            line_of(parse("time_s,p_0,p_1\n0,1,x\n0.001,3,4\n").unwrap_err()),
            2
        );
    }

    #[test]
    fn write_then_read() {
        let mesh = two_panels();
        let data =
            Array2::from_shape_fn((5, 2), |(i, j)| (i as f64 * 0.37 - j as f64).sin() * 123.4);
        let field = SurfacePressureField::new(1680.672, 0.0, data, &mesh).unwrap();
        let back = parse_pressure_csv(&pressure_to_csv(&field), Path::new("p.csv"), &mesh).unwrap();
        assert_eq!(back, field);
    }
}
