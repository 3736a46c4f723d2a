use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::format::{
    comment_value, csv_error, csv_reader, exact, parse_f64, read_text, record_line, write_text,
};

pub const SIGNAL_HEADER: &str = "time_s,p_pa";

/// Uniform time axis `t0 + i / sample_rate`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub sample_rate: f64,
    pub t0: f64,
    pub len: usize,
}

impl TimeGrid {
    pub fn new(sample_rate: f64, t0: f64, len: usize) -> Self {
        Self {
            sample_rate,
            t0,
            len,
        }
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.sample_rate
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.time(i))
    }
}

/// Acoustic pressure history at one observer.
#[derive(Debug, Clone, PartialEq)]
pub struct AcousticSignal {
    sample_rate: f64,
    t0: f64,
    pressure: Vec<f64>,
    /// Leading span, in seconds, to discard before analysis.
    transient: f64,
}

impl AcousticSignal {
    pub fn new(sample_rate: f64, t0: f64, pressure: Vec<f64>) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidInput("start time must be finite".into()));
        }
        if let Some(i) = pressure.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite pressure at sample {i}"
            )));
        }
        Ok(Self {
            sample_rate,
            t0,
            pressure,
            transient: 0.0,
        })
    }

    pub fn with_transient(mut self, transient: f64) -> Self {
        self.transient = transient.max(0.0);
        self
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn transient(&self) -> f64 {
        self.transient
    }

    pub fn pressure(&self) -> &[f64] {
        &self.pressure
    }

    pub fn len(&self) -> usize {
        self.pressure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pressure.is_empty()
    }

    pub fn grid(&self) -> TimeGrid {
        TimeGrid::new(self.sample_rate, self.t0, self.len())
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.sample_rate
    }

    pub fn duration(&self) -> f64 {
        self.len() as f64 / self.sample_rate
    }

    pub fn mean(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.pressure.iter().sum::<f64>() / self.len() as f64
        }
    }

    /// Root mean square about the mean.
    pub fn rms(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let m = self.mean();
        (self.pressure.iter().map(|p| (p - m).powi(2)).sum::<f64>() / self.len() as f64).sqrt()
    }

    /// Samples `range` as a new signal; the transient flag is cleared.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            sample_rate: self.sample_rate,
            t0: self.time(range.start),
            pressure: self.pressure[range].to_vec(),
            transient: 0.0,
        }
    }

    /// The signal with the flagged transient removed.
    pub fn without_transient(&self) -> Self {
        let skip = ((self.transient * self.sample_rate).ceil() as usize).min(self.len());
        self.slice(skip..self.len())
    }

    /// Longest leading part whose length is a whole number of `n_segments * period`
    /// samples, so that every segment spans complete periods. Returns the signal
    /// unchanged when `period` does not map to an integer number of samples.
    pub fn synchronous_trim(&self, period: f64, n_segments: usize) -> Self {
        let Some(per) = crate::sources::whole_samples(period, self.sample_rate) else {
            return self.clone();
        };
        if n_segments == 0 {
            return self.clone();
        }
        let block = per * n_segments;
        let keep = self.len() / block * block;
        if keep == 0 {
            return self.clone();
        }
        Self {
            pressure: self.pressure[..keep].to_vec(),
            ..self.clone()
        }
    }
}

/// Descriptive lines written above the signal data.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignalMetadata {
    pub observer: Option<(String, [f64; 3])>,
    pub medium: Option<super::Medium>,
}

pub fn signal_to_csv(signal: &AcousticSignal, meta: &SignalMetadata) -> String {
    let mut out = String::new();
    out.push_str("# fanoise acoustic pressure\n");
    if let Some((name, x)) = &meta.observer {
        let _ = writeln!(
            out,
            "# observer: {name} {} {} {}",
            exact(x[0]),
            exact(x[1]),
            exact(x[2])
        );
    }
    if let Some(m) = &meta.medium {
        let _ = writeln!(
            out,
            "# medium: density {} sound_speed {} reference_pressure {}",
            exact(m.density),
            exact(m.sound_speed),
            exact(m.reference_pressure)
        );
    }
    let _ = writeln!(out, "# sample_rate: {}", exact(signal.sample_rate));
    let _ = writeln!(out, "# transient_s: {}", exact(signal.transient));
    out.push_str(SIGNAL_HEADER);
    out.push('\n');
    for (i, p) in signal.pressure.iter().enumerate() {
        let _ = writeln!(out, "{},{}", exact(signal.time(i)), exact(*p));
    }
    out
}

pub fn write_signal_csv(signal: &AcousticSignal, meta: &SignalMetadata, path: &Path) -> Result<()> {
    write_text(path, &signal_to_csv(signal, meta))
}

pub fn read_signal_csv(path: &Path) -> Result<AcousticSignal> {
    parse_signal_csv(&read_text(path)?, path)
}

/// Parse signal text. `path` is only used in error messages.
pub fn parse_signal_csv(text: &str, path: &Path) -> Result<AcousticSignal> {
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.iter().collect::<Vec<_>>().join(",") != SIGNAL_HEADER {
        return Err(Error::parse(
            path,
            record_line(&header),
            format!("expected header `{SIGNAL_HEADER}`"),
        ));
    }
    let mut times = Vec::new();
    let mut pressure = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        if record.len() != 2 {
            return Err(Error::parse(
                path,
                line,
                format!("expected 2 fields, found {}", record.len()),
            ));
        }
        let t = parse_f64(&record[0], "time_s", path, line)?;
        if times.last().is_some_and(|&prev: &f64| !(t > prev)) {
            return Err(Error::parse(
                path,
                line,
                format!("time {t} does not increase"),
            ));
        }
        times.push(t);
        pressure.push(parse_f64(&record[1], "p_pa", path, line)?);
    }
    if times.len() < 2 {
        return Err(Error::parse(
            path,
            record_line(&header),
            "need at least 2 samples",
        ));
    }
    let inferred = (times.len() - 1) as f64 / (times[times.len() - 1] - times[0]);
    let sample_rate = comment_value(text, "sample_rate")
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|fs| ((fs - inferred) / inferred).abs() <= 1e-6)
        .unwrap_or(inferred);
    let transient = comment_value(text, "transient_s")
        .and_then(|s| s.parse::<f64>().ok())
        .unwrap_or(0.0);
    Ok(AcousticSignal::new(sample_rate, times[0], pressure)?.with_transient(transient))
}
