//! Run configuration: a single JSON document covering every pipeline stage.

use std::path::{Path, PathBuf};

use fanoise_core::fwh::{Medium, ObserverSetup, Resampling, SolverOptions};
use fanoise_core::geom::{FanParams, SamplingPlan};
use fanoise_core::sources::{BaselineLoadingModel, RecirculationModulation};
use fanoise_core::spectra::{PsdOptions, Window};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: FanParams,
    #[serde(default)]
    pub medium: Medium,
    /// Defaults to the two microphones derived from the geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observers: Option<ObserverSetup>,
    #[serde(default)]
    pub source: SourceConfig,
    #[serde(default)]
    pub plan: PlanConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub spectra: SpectraConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    Baseline {
        #[serde(default)]
        model: BaselineLoadingModel,
    },
    Modulated {
        #[serde(default)]
        model: BaselineLoadingModel,
        #[serde(default)]
        modulation: RecirculationModulation,
    },
    /// Surface pressures exported by an external solver. Relative paths are
    /// resolved against the config file's directory.
    Ingest { pressure: PathBuf },
}

impl Default for SourceConfig {
    fn default() -> Self {
        SourceConfig::Baseline {
            model: BaselineLoadingModel::default(),
        }
    }
}

impl SourceConfig {
    pub fn modulation(&self) -> Option<&RecirculationModulation> {
        match self {
            SourceConfig::Modulated { modulation, .. } => Some(modulation),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlanConfig {
    /// Solver step, stride between stored steps, record length.
    Explicit {
        solver_dt: f64,
        record_stride: u32,
        record_duration: f64,
    },
    /// A whole number of samples per revolution of the configured fan.
    Synchronous {
        samples_per_revolution: u32,
        revolutions: f64,
    },
}

impl Default for PlanConfig {
    fn default() -> Self {
        let p = SamplingPlan::default();
        PlanConfig::Explicit {
            solver_dt: p.solver_dt,
            record_stride: p.record_stride,
            record_duration: p.record_duration,
        }
    }
}

impl PlanConfig {
    pub fn resolve(&self, params: &FanParams) -> fanoise_core::Result<SamplingPlan> {
        match *self {
            PlanConfig::Explicit {
                solver_dt,
                record_stride,
                record_duration,
            } => SamplingPlan::new(solver_dt, record_stride, record_duration),
            PlanConfig::Synchronous {
                samples_per_revolution,
                revolutions,
            } => SamplingPlan::synchronous(params, samples_per_revolution, revolutions),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub resampling: Resampling,
}

impl SolverConfig {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            resampling: self.resampling,
            ..SolverOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectraConfig {
    pub n_segments: usize,
    pub window: Window,
    pub overlap: f64,
    pub threshold_db: f64,
    pub grid_divisor: u32,
    /// Trim analysed records to a whole number of source periods per segment.
    pub synchronous_trim: bool,
}

impl Default for SpectraConfig {
    fn default() -> Self {
        let psd = PsdOptions::default();
        Self {
            n_segments: psd.n_segments,
            window: psd.window,
            overlap: psd.overlap,
            threshold_db: 10.0,
            grid_divisor: 4,
            synchronous_trim: true,
        }
    }
}

impl SpectraConfig {
    pub fn psd_options(&self, medium: &Medium) -> PsdOptions {
        PsdOptions {
            n_segments: self.n_segments,
            window: self.window,
            overlap: self.overlap,
            reference_pressure: medium.reference_pressure,
        }
    }
}

impl RunConfig {
    /// The reference fan with default sections.
    pub fn reference() -> Self {
        Self {
            geometry: FanParams::reference_fan(),
            medium: Medium::default(),
            observers: None,
            source: SourceConfig::default(),
            plan: PlanConfig::default(),
            solver: SolverConfig::default(),
            spectra: SpectraConfig::default(),
        }
    }

    /// Parse JSON text; errors name the offending key path.
    pub fn from_json(text: &str, origin: &Path) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            let mut path = e.path().to_string();
            let mut message = inner.to_string();
            // serde reports a missing field at its parent; name the field itself.
            if let Some(rest) = message.strip_prefix("missing field `") {
                if let Some(end) = rest.find('`') {
                    let field = &rest[..end];
                    path = if path == "." {
                        field.to_string()
                    } else {
                        format!("{path}.{field}")
                    };
                    message = format!("missing required key{}", &rest[end + 1..]);
                }
            }
            CliError::Config(format!(
                "{}:{}:{}: {path}: {message}",
                origin.display(),
                inner.line(),
                inner.column()
            ))
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_json(&text, path)?;
        if let SourceConfig::Ingest { pressure } = &mut config.source {
            if pressure.is_relative() {
                if let Some(dir) = path.parent() {
                    *pressure = dir.join(&*pressure);
                }
            }
        }
        Ok(config)
    }

    /// Canonical serialisation: every section written out with defaults filled in.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serialises");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.geometry.validate()?;
        self.medium.validate()?;
        if let Some(obs) = &self.observers {
            obs.validate()?;
        }
        match &self.source {
            SourceConfig::Baseline { model } => model.validate()?,
            SourceConfig::Modulated { model, modulation } => {
                model.validate()?;
                modulation.validate()?;
            }
            SourceConfig::Ingest { .. } => {}
        }
        self.sampling_plan()?;
        self.psd_options().validate()?;
        if self.spectra.grid_divisor < 1 {
            return Err(CliError::Config(
                "spectra.grid_divisor must be at least 1".into(),
            ));
        }
        if !self.spectra.threshold_db.is_finite() {
            return Err(CliError::Config(
                "spectra.threshold_db must be finite".into(),
            ));
        }
        Ok(())
    }

    pub fn sampling_plan(&self) -> fanoise_core::Result<SamplingPlan> {
        self.plan.resolve(&self.geometry)
    }

    pub fn observers(&self) -> ObserverSetup {
        self.observers
            .clone()
            .unwrap_or_else(|| ObserverSetup::default_for(&self.geometry))
    }

    pub fn psd_options(&self) -> PsdOptions {
        self.spectra.psd_options(&self.medium)
    }

    /// Period of the source pattern: one rotation, or the modulation cycle.
    pub fn source_period(&self) -> f64 {
        let m = self
            .source
            .modulation()
            .map_or(1.0, |m| m.period_multiplier);
        m * self.geometry.rotation_period()
    }
}
