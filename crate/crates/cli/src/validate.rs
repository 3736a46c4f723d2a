//! Oracle comparisons behind `fanoise validate`.

use std::fmt;

use clap::ValueEnum;
use fanoise_core::fwh::{
    compact_dipole_reference, loading_noise_with, point_force_panel,
    rotating_point_force_reference, AcousticSignal,
};
use fanoise_core::geom::{build_fan_geometry, RotationKinematics, SamplingPlan};
use fanoise_core::sources::{synth_baseline, ForceFrame, PointForceSource, Trajectory};
use fanoise_core::spectra::{parseval_check, psd, PsdOptions};
use fanoise_core::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::{RunConfig, SourceConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Stationary panel against the closed-form compact dipole.
    Dipole,
    /// Orbiting panel against the retarded-time bisection reference.
    Rotating,
    /// PSD normalisation on white noise.
    Parseval,
    /// RMS ratio of the baseline fan between two distances.
    Decay,
}

impl Which {
    pub fn default_tolerance(self) -> f64 {
        match self {
            Which::Dipole | Which::Rotating => 1e-3,
            Which::Parseval => 1e-6,
            Which::Decay => 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub which: Which,
    pub metric: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let which = self.which.to_possible_value().expect("named variant");
        write!(
            f,
            "{}: {} = {:.3e} (tolerance {:.1e}) {}",
            which.get_name(),
            self.metric,
            self.value,
            self.tolerance,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    /// Near observer distance for `decay`, m.
    pub distance: Option<f64>,
}

pub fn run(which: Which, config: &RunConfig, overrides: &Overrides) -> Result<Check, CliError> {
    let tolerance = overrides.tolerance.unwrap_or(which.default_tolerance());
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be >= 0, got {tolerance}"
        )));
    }
    let (metric, value) = match which {
        Which::Dipole => ("relative L2 error", dipole_error(config)?),
        Which::Rotating => ("max error / peak", rotating_error(config)?),
        Which::Parseval => ("relative variance error", parseval_error()?),
        Which::Decay => {
            let r = overrides.distance.unwrap_or(5.0);
            (
                "|RMS(2r)/RMS(r) / 0.5 - 1|",
                (decay_ratio(config, r)? / 0.5 - 1.0).abs(),
            )
        }
    };
    Ok(Check {
        which,
        metric,
        value,
        tolerance,
    })
}

/// Unit sinusoidal force at BPF on a fixed panel, observer 5 m along the force axis.
pub fn dipole_error(config: &RunConfig) -> Result<f64, CliError> {
    let f = config.geometry.blade_passing_frequency();
    let src = PointForceSource::fixed(Vector3::zeros(), Vector3::zeros()).with_harmonic(
        Vector3::z(),
        f,
        0.0,
    );
    let plan = SamplingPlan::new(1.0 / (64.0 * f), 1, 12.0 / f)?;
    let observer = Vector3::new(0.0, 0.0, 5.0);
    let (mesh, kin, field) = point_force_panel(&src, &plan)?;
    let signal = loading_noise_with(
        &field,
        &mesh,
        &kin,
        &observer,
        &config.medium,
        &plan,
        &config.solver.options(),
    )?
    .without_transient();
    let reference = compact_dipole_reference(&src, &observer, &config.medium, &signal.grid())?;
    Ok(relative_l2(signal.pressure(), reference.pressure()))
}

/// Blade-fixed force orbiting at the fan's outer radius and speed; observer 5 m away.
pub fn rotating_error(config: &RunConfig) -> Result<f64, CliError> {
    let params = &config.geometry;
    let kin = RotationKinematics::from_params(params);
    let src = PointForceSource {
        trajectory: Trajectory::Circular {
            radius: params.outer_radius(),
            angular_speed: kin.angular_speed,
            phase: 0.0,
            height: 0.0,
        },
        frame: ForceFrame::Rotating,
        mean: Vector3::new(0.0, 0.6, 0.8),
        harmonics: Vec::new(),
    };
    let plan = SamplingPlan::synchronous(params, 140, 4.0)?;
    let observer = Vector3::new(4.0, 0.0, 3.0);
    let (mesh, panel_kin, field) = point_force_panel(&src, &plan)?;
    let solved = loading_noise_with(
        &field,
        &mesh,
        &panel_kin,
        &observer,
        &config.medium,
        &plan,
        &config.solver.options(),
    )?
    .without_transient();
    let reference = rotating_point_force_reference(&src, &observer, &config.medium, &plan)?;
    let fs = plan.sample_rate();
    let index = |t: f64| (t * fs).round() as i64;
    let offset = index(solved.t0()) - index(reference.t0());
    let mut peak = 0.0f64;
    let mut worst = 0.0f64;
    let mut compared = 0usize;
    for (i, &p) in solved.pressure().iter().enumerate() {
        let j = offset + i as i64;
        let Some(&q) = usize::try_from(j)
            .ok()
            .and_then(|j| reference.pressure().get(j))
        else {
            continue;
        };
        peak = peak.max(q.abs());
        worst = worst.max((p - q).abs());
        compared += 1;
    }
    if compared < 140 {
        return Err(CliError::Validation(format!(
            "solver and reference share only {compared} samples"
        )));
    }
    Ok(worst / peak)
}

/// Seeded Gaussian noise, rectangular window, single segment.
pub fn parseval_error() -> Result<f64, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples: Vec<f64> = (0..4096).map(|_| StandardNormal.sample(&mut rng)).collect();
    let signal = AcousticSignal::new(1000.0, 0.0, samples)?;
    let spec = psd(&signal, &PsdOptions::rectangular_single())?;
    Ok(parseval_check(&signal, &spec))
}

/// RMS at distance `2 r` over RMS at `r`, both in the rotor plane.
pub fn decay_ratio(config: &RunConfig, r: f64) -> Result<f64, CliError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(CliError::Usage(format!(
            "distance must be positive, got {r}"
        )));
    }
    let params = &config.geometry;
    let model = match &config.source {
        SourceConfig::Baseline { model } | SourceConfig::Modulated { model, .. } => model.clone(),
        SourceConfig::Ingest { .. } => Default::default(),
    };
    let mesh = build_fan_geometry(params)?;
    let kin = RotationKinematics::from_params(params);
    let (z_lo, z_hi) = mesh.axial_extent();
    let center = Vector3::new(0.0, 0.0, 0.5 * (z_lo + z_hi));
    let direction = Vector3::x();
    let revolutions = 4.0 + (2.0 * r / config.medium.sound_speed / params.rotation_period()).ceil();
    let plan = SamplingPlan::synchronous(params, 140, revolutions)?;
    let field = synth_baseline(&mesh, &kin, &model, &plan)?;
    let rms = |distance: f64| -> Result<f64, CliError> {
        let observer = center + direction * distance;
        let signal = loading_noise_with(
            &field,
            &mesh,
            &kin,
            &observer,
            &config.medium,
            &plan,
            &config.solver.options(),
        )?;
        Ok(signal
            .without_transient()
            .synchronous_trim(params.rotation_period(), 1)
            .rms())
    };
    Ok(rms(2.0 * r)? / rms(r)?)
}

fn relative_l2(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let norm: f64 = b.iter().map(|y| y * y).sum();
    (diff / norm).sqrt()
}
