//! Geometry CSV: one row per panel, fan parameters recorded in a comment header.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Vector3;

use super::mesh::{BladeSide, Panel, Patch, SurfaceMesh};
use super::params::FanParams;
use crate::error::{Error, Result};
use crate::format::{
    comment_value, csv_error, csv_reader, exact, parse_f64, read_text, record_line, write_text,
};

pub const GEOMETRY_HEADER: &str = "panel_id,patch,blade_index,cx,cy,cz,nx,ny,nz,area,s,eta";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), exact)
}

pub fn geometry_to_csv(mesh: &SurfaceMesh) -> String {
    let mut out = String::new();
    out.push_str("# fanoise surface mesh\n");
    if let Some(params) = mesh.params() {
        let json = serde_json::to_string(params).expect("fan parameters serialise");
        let _ = writeln!(out, "# fan_params: {json}");
    }
    out.push_str(GEOMETRY_HEADER);
    out.push('\n');
    for p in mesh.panels() {
        let blade = p
            .blade_index
            .map_or_else(|| "-".to_string(), |b| b.to_string());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            p.id,
            p.patch,
            blade,
            exact(p.center.x),
            exact(p.center.y),
            exact(p.center.z),
            exact(p.normal.x),
            exact(p.normal.y),
            exact(p.normal.z),
            exact(p.area),
            opt(p.chord_fraction),
            opt(p.span_fraction),
        );
    }
    out
}

pub fn write_geometry_csv(mesh: &SurfaceMesh, path: &Path) -> Result<()> {
    write_text(path, &geometry_to_csv(mesh))
}

pub fn read_geometry_csv(path: &Path) -> Result<SurfaceMesh> {
    let text = read_text(path)?;
    parse_geometry_csv(&text, path)
}

/// Parse geometry text. `path` is only used in error messages.
pub fn parse_geometry_csv(text: &str, path: &Path) -> Result<SurfaceMesh> {
    let params: Option<FanParams> = match comment_value(text, "fan_params") {
        Some(json) => Some(
            serde_json::from_str(json)
                .map_err(|e| Error::parse(path, 0, format!("invalid fan_params comment: {e}")))?,
        ),
        None => None,
    };
    let sense = params.as_ref().map(|p| p.rotation_sense.sign());

    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let header_line: Vec<&str> = header.iter().collect();
    if header_line.join(",") != GEOMETRY_HEADER {
        return Err(Error::parse(
            path,
            record_line(&header),
            format!("expected header `{GEOMETRY_HEADER}`"),
        ));
    }

    let mut panels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        if record.len() != 12 {
            return Err(Error::parse(
                path,
                line,
                format!("expected 12 fields, found {}", record.len()),
            ));
        }
        let id: usize = record[0]
            .parse()
            .map_err(|_| Error::parse(path, line, format!("bad panel_id `{}`", &record[0])))?;
        if id != panels.len() {
            return Err(Error::parse(
                path,
                line,
                format!(
                    "panel ids must be dense and ordered: expected {}, found {id}",
                    panels.len()
                ),
            ));
        }
        let patch: Patch = record[1]
            .parse()
            .map_err(|e: String| Error::parse(path, line, e))?;
        let blade_index = match &record[2] {
            "-" => None,
            s => Some(
                s.parse::<usize>()
                    .map_err(|_| Error::parse(path, line, format!("bad blade_index `{s}`")))?,
            ),
        };
        let num = |i: usize, what: &str| parse_f64(&record[i], what, path, line);
        let opt_num = |i: usize, what: &str| -> Result<Option<f64>> {
            match &record[i] {
                "-" => Ok(None),
                _ => num(i, what).map(Some),
            }
        };
        let center = Vector3::new(num(3, "cx")?, num(4, "cy")?, num(5, "cz")?);
        let normal = Vector3::new(num(6, "nx")?, num(7, "ny")?, num(8, "nz")?);
        if (normal.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::parse(path, line, "normal is not unit length"));
        }
        let area = num(9, "area")?;
        if !(area > 0.0) {
            return Err(Error::parse(path, line, "area must be positive"));
        }
        let side = match (patch, sense) {
            (Patch::Blade, Some(sign)) => {
                let motion = Vector3::z().cross(&center) * sign;
                Some(if normal.dot(&motion) > 0.0 {
                    BladeSide::Pressure
                } else {
                    BladeSide::Suction
                })
            }
            _ => None,
        };
        panels.push(Panel {
            id,
            patch,
            blade_index,
            side,
            center,
            normal,
            area,
            chord_fraction: opt_num(10, "s")?,
            span_fraction: opt_num(11, "eta")?,
        });
    }
    SurfaceMesh::new(panels, params)
}
