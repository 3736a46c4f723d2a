use std::fmt::{self, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::psd::Spectrum;
use crate::error::{Error, Result};
use crate::format::{sig9, write_text};

/// Shaft-order grid on which tones are labelled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneGrid {
    pub shaft_frequency: f64,
    pub blade_count: u32,
    /// Grid step is `shaft_frequency / divisor`.
    pub divisor: u32,
}

impl ToneGrid {
    pub fn new(shaft_frequency: f64, blade_count: u32, divisor: u32) -> Result<Self> {
        if !(shaft_frequency.is_finite() && shaft_frequency > 0.0) {
            return Err(Error::Config("shaft frequency must be positive".into()));
        }
        if blade_count < 1 || divisor < 1 {
            return Err(Error::Config(
                "blade count and grid divisor must be at least 1".into(),
            ));
        }
        Ok(Self {
            shaft_frequency,
            blade_count,
            divisor,
        })
    }

    pub fn step(&self) -> f64 {
        self.shaft_frequency / self.divisor as f64
    }

    /// Label of grid point `index`.
    pub fn label(&self, index: u64) -> ToneLabel {
        let z = self.blade_count as u64;
        let d = self.divisor as u64;
        if index == z * d {
            ToneLabel::Bpf0
        } else if index == 2 * z * d {
            ToneLabel::Bpf1
        } else if 4 * index == d {
            ToneLabel::QuarterShaft
        } else if 4 * index == z * d {
            ToneLabel::QuarterBpf0
        } else {
            ToneLabel::Other
        }
    }

    /// Whether grid point `index` is a whole shaft order.
    pub fn is_shaft_order(&self, index: u64) -> bool {
        index % self.divisor as u64 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ToneLabel {
    #[serde(rename = "BPF0")]
    Bpf0,
    #[serde(rename = "BPF1")]
    Bpf1,
    #[serde(rename = "nf/4")]
    QuarterShaft,
    #[serde(rename = "BPF0/4")]
    QuarterBpf0,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for ToneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ToneLabel::Bpf0 => "BPF0",
            ToneLabel::Bpf1 => "BPF1",
            ToneLabel::QuarterShaft => "nf/4",
            ToneLabel::QuarterBpf0 => "BPF0/4",
            ToneLabel::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub freq_hz: f64,
    pub spl_db: f64,
    /// Multiple of the grid step, when the tone lies within half a bin of one.
    pub grid_index: Option<u64>,
    pub label: ToneLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToneReport {
    pub tones: Vec<Tone>,
    pub threshold_db: f64,
}

impl ToneReport {
    pub fn frequencies(&self) -> Vec<f64> {
        self.tones.iter().map(|t| t.freq_hz).collect()
    }

    pub fn find(&self, label: ToneLabel) -> Option<&Tone> {
        self.tones.iter().find(|t| t.label == label)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tone report serialises");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# threshold_db: {}", self.threshold_db);
        out.push_str("freq_hz,spl_db,grid_index,label\n");
        for t in &self.tones {
            let idx = t
                .grid_index
                .map_or_else(|| "-".to_string(), |i| i.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{}",
                sig9(t.freq_hz),
                sig9(t.spl_db),
                idx,
                t.label
            );
        }
        out
    }

    /// Writes `<stem>.csv` and `<stem>.json` next to each other.
    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(&path.with_extension("csv"), &self.to_csv())?;
        write_text(&path.with_extension("json"), &self.to_json())
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Local spectral maxima at least `threshold_db` above the median level, labelled on `grid`.
///
/// The 0 Hz bin is ignored; it only carries the removed mean.
pub fn detect_tones(spec: &Spectrum, grid: &ToneGrid, threshold_db: f64) -> Result<ToneReport> {
    let df = spec.bin_width();
    if grid.step() < df * (1.0 - 1e-9) {
        return Err(Error::Config(format!(
            "grid step {:.4} Hz is finer than the {:.4} Hz resolution",
            grid.step(),
            df
        )));
    }
    if !threshold_db.is_finite() {
        return Err(Error::Config("threshold_db must be finite".into()));
    }
    let psd = &spec.psd[1.min(spec.len())..];
    let limit = median(psd) * 10f64.powf(threshold_db / 10.0);
    let mut tones = Vec::new();
    for k in 0..psd.len() {
        let p = psd[k];
        let left = k.checked_sub(1).map_or(f64::NEG_INFINITY, |j| psd[j]);
        let right = psd.get(k + 1).copied().unwrap_or(f64::NEG_INFINITY);
        if !(p > left && p >= right && p > limit) {
            continue;
        }
        let bin = k + 1;
        let f = spec.frequencies[bin];
        let nearest = (f / grid.step()).round();
        let grid_index = ((f - nearest * grid.step()).abs() <= 0.5 * df).then_some(nearest as u64);
        tones.push(Tone {
            freq_hz: f,
            spl_db: spec.spl[bin],
            grid_index,
            label: grid_index.map_or(ToneLabel::Other, |i| grid.label(i)),
        });
    }
    Ok(ToneReport {
        tones,
        threshold_db,
    })
}
