use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::psd::{psd_samples, spl_db, PsdOptions};
use crate::error::{Error, Result};
use crate::format::{sig9, write_text};
use crate::geom::SurfaceMesh;
use crate::sources::SurfacePressureField;

pub const MAP_HEADER: &str = "panel_id,spl_db";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub center: f64,
    pub width: f64,
}

impl Band {
    pub fn contains(&self, f: f64) -> bool {
        (f - self.center).abs() <= 0.5 * self.width
    }
}

/// Surface pressure level of every panel within one frequency band.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceBandMap {
    pub band: Band,
    /// Level in dB re the reference pressure, indexed by panel id.
    pub spl: Vec<f64>,
}

impl SurfaceBandMap {
    pub fn max(&self) -> f64 {
        self.spl.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Panel ids in the top `fraction` of levels, loudest first.
    pub fn top_panels(&self, fraction: f64) -> Vec<usize> {
        let count = ((self.spl.len() as f64 * fraction).ceil() as usize).min(self.spl.len());
        let mut ids: Vec<usize> = (0..self.spl.len()).collect();
        ids.sort_by(|&a, &b| self.spl[b].total_cmp(&self.spl[a]).then(a.cmp(&b)));
        ids.truncate(count);
        ids
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# band_center_hz: {}\n# band_width_hz: {}",
            sig9(self.band.center),
            sig9(self.band.width)
        );
        out.push_str(MAP_HEADER);
        out.push('\n');
        for (id, l) in self.spl.iter().enumerate() {
            let _ = writeln!(out, "{id},{}", sig9(*l));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }
}

/// Band level `10 log10(sum over the band of psd df / p_ref^2)` of each panel history.
pub fn surface_band_map(
    field: &SurfacePressureField,
    mesh: &SurfaceMesh,
    band: Band,
    options: &PsdOptions,
) -> Result<SurfaceBandMap> {
    field.check_bound_to(mesh)?;
    if !(band.width > 0.0 && band.center > 0.0) {
        return Err(Error::InvalidInput(
            "band centre and width must be positive".into(),
        ));
    }
    let nyquist = 0.5 * field.sample_rate();
    if band.center + 0.5 * band.width > nyquist {
        return Err(Error::InvalidInput(format!(
            "band {:.2} +/- {:.2} Hz reaches past the {nyquist:.2} Hz limit",
            band.center,
            0.5 * band.width
        )));
    }
    let spl = (0..field.n_panels())
        .into_par_iter()
        .map(|id| {
            let history = field.panel_history(id).to_vec();
            let spec = psd_samples(&history, field.sample_rate(), options)?;
            let df = spec.bin_width();
            let mut bins = spec
                .frequencies
                .iter()
                .zip(&spec.psd)
                .filter(|(f, _)| band.contains(**f))
                .peekable();
            if bins.peek().is_none() {
                return Err(Error::InvalidInput(format!(
                    "band {:.2} +/- {:.2} Hz holds no bin at {df:.3} Hz resolution",
                    band.center,
                    0.5 * band.width
                )));
            }
            let power: f64 = bins.map(|(_, p)| p).sum();
            Ok(spl_db(power, df, options.reference_pressure))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SurfaceBandMap { band, spl })
}
