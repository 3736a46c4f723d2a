use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{
    comment_value, csv_error, csv_reader, parse_f64, read_text, record_line, sig9, write_text,
};
use crate::fwh::AcousticSignal;

/// Level written in place of `-inf` dB.
pub const SPL_FLOOR_DB: f64 = -400.0;

pub const SPECTRUM_HEADER: &str = "freq_hz,psd_pa2_per_hz,spl_db";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    #[default]
    Hann,
    Rectangular,
}

impl Window {
    pub fn as_str(self) -> &'static str {
        match self {
            Window::Hann => "hann",
            Window::Rectangular => "rectangular",
        }
    }

    /// Periodic window of length `n`.
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
                .collect(),
        }
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hann" => Ok(Window::Hann),
            "rectangular" => Ok(Window::Rectangular),
            other => Err(format!("unknown window `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsdOptions {
    pub n_segments: usize,
    pub window: Window,
    /// Fraction of a segment shared with the next one, in `[0, 1)`.
    pub overlap: f64,
    pub reference_pressure: f64,
}

impl Default for PsdOptions {
    fn default() -> Self {
        Self {
            n_segments: 3,
            window: Window::Hann,
            overlap: 0.0,
            reference_pressure: 2e-5,
        }
    }
}

impl PsdOptions {
    pub fn rectangular_single() -> Self {
        Self {
            n_segments: 1,
            window: Window::Rectangular,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_segments < 1 {
            return Err(Error::Config("n_segments must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return Err(Error::Config(format!(
                "overlap must lie in [0, 1), got {}",
                self.overlap
            )));
        }
        if !(self.reference_pressure.is_finite() && self.reference_pressure > 0.0) {
            return Err(Error::Config("reference_pressure must be positive".into()));
        }
        Ok(())
    }

    /// Segment length and hop for `n` samples.
    fn layout(&self, n: usize) -> Option<(usize, usize)> {
        let k = self.n_segments;
        let hop_of = |len: usize| ((len as f64 * (1.0 - self.overlap)).round() as usize).max(1);
        let guess = (n as f64 / (1.0 + (k - 1) as f64 * (1.0 - self.overlap))).floor() as usize;
        (2..=guess.min(n)).rev().find_map(|len| {
            let hop = hop_of(len);
            (len + (k - 1) * hop <= n).then_some((len, hop))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub window: Window,
    pub n_segments: usize,
    pub overlap: f64,
    pub bin_width: f64,
    pub reference_pressure: f64,
}

/// One-sided power spectral density with per-bin band levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub psd: Vec<f64>,
    pub spl: Vec<f64>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn bin_width(&self) -> f64 {
        self.meta.bin_width
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Highest represented frequency.
    pub fn max_frequency(&self) -> f64 {
        self.frequencies.last().copied().unwrap_or(0.0)
    }

    /// Index of the bin nearest `f`.
    pub fn bin_of(&self, f: f64) -> usize {
        ((f / self.bin_width()).round().max(0.0) as usize).min(self.len().saturating_sub(1))
    }

    /// Same spectrum with every PSD value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let psd: Vec<f64> = self.psd.iter().map(|p| p * factor).collect();
        Self {
            spl: band_levels(&psd, self.bin_width(), self.meta.reference_pressure),
            psd,
            ..self.clone()
        }
    }
}

/// Per-bin band level `10 log10(psd df / p_ref^2)`, floored.
pub fn spl_db(psd: f64, bin_width: f64, reference_pressure: f64) -> f64 {
    let power = psd * bin_width;
    if power > 0.0 {
        (10.0 * (power / (reference_pressure * reference_pressure)).log10()).max(SPL_FLOOR_DB)
    } else {
        SPL_FLOOR_DB
    }
}

fn band_levels(psd: &[f64], bin_width: f64, p_ref: f64) -> Vec<f64> {
    psd.iter().map(|&p| spl_db(p, bin_width, p_ref)).collect()
}

/// Removes the mean in two passes. A large offset over a small fluctuation leaves a
/// rounding residue after the first pass; the second pass removes it from the
/// exactly representable differences.
fn detrend(x: &[f64]) -> Vec<f64> {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let m = mean(x);
    let mut out: Vec<f64> = x.iter().map(|v| v - m).collect();
    let residue = mean(&out);
    out.iter_mut().for_each(|v| *v -= residue);
    out
}

/// Welch estimate from raw samples.
pub fn psd_samples(samples: &[f64], sample_rate: f64, options: &PsdOptions) -> Result<Spectrum> {
    options.validate()?;
    let (len, hop) = options.layout(samples.len()).ok_or_else(|| {
        Error::SignalTooShort(format!(
            "{} samples cannot hold {} segments",
            samples.len(),
            options.n_segments
        ))
    })?;
    let window = options.window.coefficients(len);
    let w2: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);
    let n_bins = len / 2 + 1;
    let mut acc = vec![0.0; n_bins];
    let mut buf = vec![Complex::new(0.0, 0.0); len];
    for seg in 0..options.n_segments {
        let chunk = detrend(&samples[seg * hop..seg * hop + len]);
        for ((b, x), w) in buf.iter_mut().zip(&chunk).zip(&window) {
            *b = Complex::new(x * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
    }
    let scale = 1.0 / (sample_rate * w2 * options.n_segments as f64);
    let psd: Vec<f64> = acc
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let one_sided = if k == 0 || (len % 2 == 0 && k == len / 2) {
                1.0
            } else {
                2.0
            };
            a * scale * one_sided
        })
        .collect();
    let bin_width = sample_rate / len as f64;
    Ok(Spectrum {
        frequencies: (0..n_bins).map(|k| k as f64 * bin_width).collect(),
        spl: band_levels(&psd, bin_width, options.reference_pressure),
        psd,
        meta: SpectrumMeta {
            window: options.window,
            n_segments: options.n_segments,
            overlap: options.overlap,
            bin_width,
            reference_pressure: options.reference_pressure,
        },
    })
}

/// Welch estimate of the observer signal: each segment has its mean removed and is
/// windowed before the transform, and the one-sided result is normalised by the
/// window power so that `sum(psd) * df` equals the mean-square of the windowed data.
pub fn psd(signal: &AcousticSignal, options: &PsdOptions) -> Result<Spectrum> {
    psd_samples(signal.pressure(), signal.sample_rate(), options)
}

/// `|var(signal) - sum(psd) df| / var(signal)`; zero for a constant signal.
pub fn parseval_check(signal: &AcousticSignal, spectrum: &Spectrum) -> f64 {
    let var = signal.rms().powi(2);
    let total: f64 = spectrum.psd.iter().sum::<f64>() * spectrum.bin_width();
    if var == 0.0 {
        if total == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (var - total).abs() / var
    }
}

pub fn spectrum_to_csv(spec: &Spectrum) -> String {
    let mut out = String::new();
    out.push_str("# fanoise spectrum; spl_db is the band level 10 log10(psd df / p_ref^2)\n");
    let m = &spec.meta;
    let _ = writeln!(out, "# window: {}", m.window.as_str());
    let _ = writeln!(out, "# n_segments: {}", m.n_segments);
    let _ = writeln!(out, "# overlap: {}", m.overlap);
    let _ = writeln!(out, "# bin_width_hz: {}", sig9(m.bin_width));
    let _ = writeln!(out, "# reference_pressure_pa: {}", m.reference_pressure);
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for ((f, p), l) in spec.frequencies.iter().zip(&spec.psd).zip(&spec.spl) {
        let _ = writeln!(out, "{},{},{}", sig9(*f), sig9(*p), sig9(*l));
    }
    out
}

pub fn write_spectrum_csv(spec: &Spectrum, path: &Path) -> Result<()> {
    write_text(path, &spectrum_to_csv(spec))
}

pub fn read_spectrum_csv(path: &Path) -> Result<Spectrum> {
    parse_spectrum_csv(&read_text(path)?, path)
}

/// Parse spectrum text. Missing metadata falls back to the bin spacing and defaults.
pub fn parse_spectrum_csv(text: &str, path: &Path) -> Result<Spectrum> {
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.iter().collect::<Vec<_>>().join(",") != SPECTRUM_HEADER {
        return Err(Error::parse(
            path,
            record_line(&header),
            format!("expected header `{SPECTRUM_HEADER}`"),
        ));
    }
    let mut frequencies = Vec::new();
    let mut psd = Vec::new();
    let mut spl = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        if record.len() != 3 {
            return Err(Error::parse(
                path,
                line,
                format!("expected 3 fields, found {}", record.len()),
            ));
        }
        let f = parse_f64(&record[0], "freq_hz", path, line)?;
        if f < 0.0 || frequencies.last().is_some_and(|&prev: &f64| !(f > prev)) {
            return Err(Error::parse(
                path,
                line,
                "frequencies must be non-negative and increasing",
            ));
        }
        let p = parse_f64(&record[1], "psd_pa2_per_hz", path, line)?;
        if p < 0.0 {
            return Err(Error::parse(path, line, "psd must be non-negative"));
        }
        frequencies.push(f);
        psd.push(p);
        spl.push(parse_f64(&record[2], "spl_db", path, line)?);
    }
    if frequencies.len() < 2 {
        return Err(Error::parse(
            path,
            record_line(&header),
            "need at least 2 bins",
        ));
    }
    let meta_f64 = |key: &str| comment_value(text, key).and_then(|v| v.parse::<f64>().ok());
    let defaults = PsdOptions::default();
    let meta = SpectrumMeta {
        window: comment_value(text, "window")
            .and_then(|w| w.parse().ok())
            .unwrap_or(defaults.window),
        n_segments: comment_value(text, "n_segments")
            .and_then(|v| v.parse().ok())
            .unwrap_or(defaults.n_segments),
        overlap: meta_f64("overlap").unwrap_or(defaults.overlap),
        bin_width: meta_f64("bin_width_hz").unwrap_or(frequencies[1] - frequencies[0]),
        reference_pressure: meta_f64("reference_pressure_pa")
            .unwrap_or(defaults.reference_pressure),
    };
    Ok(Spectrum {
        frequencies,
        psd,
        spl,
        meta,
    })
}
