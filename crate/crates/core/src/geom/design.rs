//! Closed-form design checks for the impeller and the recording setup.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::params::FanParams;
use crate::error::{Error, Result};

/// a/lambda below this is treated as acoustically compact.
pub const COMPACTNESS_THRESHOLD: f64 = 0.3;

/// Kinematic viscosity of air at 20 degC, m^2/s.
pub const AIR_KINEMATIC_VISCOSITY: f64 = 1.5e-5;

/// Frequency of BPF harmonic `harmonic` (0 is the fundamental) in Hz.
pub fn blade_passing_frequency(blade_count: u32, rpm: f64, harmonic: u32) -> Result<f64> {
    if blade_count < 1 {
        return Err(Error::InvalidInput("blade count must be at least 1".into()));
    }
    if !(rpm > 0.0) {
        return Err(Error::InvalidInput(format!(
            "rotation speed must be positive, got {rpm}"
        )));
    }
    Ok((harmonic + 1) as f64 * blade_count as f64 * rpm / 60.0)
}

/// Blade-tip Mach number `pi d2 n / (60 c0)`.
pub fn tip_mach(params: &FanParams, sound_speed: f64) -> f64 {
    PI * params.fan_diameter_d2 * params.rotation_speed_n / 60.0 / sound_speed
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compactness {
    pub wavelength: f64,
    pub ratio: f64,
    pub compact: bool,
}

pub fn compactness(radius: f64, tone_frequency: f64, sound_speed: f64) -> Compactness {
    let wavelength = if tone_frequency > 0.0 {
        sound_speed / tone_frequency
    } else {
        f64::INFINITY
    };
    let ratio = radius / wavelength;
    Compactness {
        wavelength,
        ratio,
        compact: ratio < COMPACTNESS_THRESHOLD,
    }
}

/// Recording schedule: solver step, stride between stored steps and record length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingPlan {
    pub solver_dt: f64,
    pub record_stride: u32,
    pub record_duration: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            solver_dt: 5.95e-5,
            record_stride: 10,
            record_duration: 0.2,
        }
    }
}

impl SamplingPlan {
    pub fn new(solver_dt: f64, record_stride: u32, record_duration: f64) -> Result<Self> {
        let plan = Self {
            solver_dt,
            record_stride,
            record_duration,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// A plan with exactly `samples_per_rev` records per rotation of `params`.
    pub fn synchronous(params: &FanParams, samples_per_rev: u32, revolutions: f64) -> Result<Self> {
        let period = params.rotation_period();
        Self::new(period / samples_per_rev as f64, 1, revolutions * period)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.solver_dt.is_finite() && self.solver_dt > 0.0) {
            return Err(Error::Config(format!(
                "solver_dt must be positive, got {}",
                self.solver_dt
            )));
        }
        if self.record_stride < 1 {
            return Err(Error::Config("record_stride must be at least 1".into()));
        }
        if !(self.record_duration.is_finite() && self.record_duration > 0.0) {
            return Err(Error::Config(format!(
                "record_duration must be positive, got {}",
                self.record_duration
            )));
        }
        Ok(())
    }

    /// f_s = 1 / (dt k).
    pub fn sample_rate(&self) -> f64 {
        1.0 / (self.solver_dt * self.record_stride as f64)
    }

    pub fn sample_interval(&self) -> f64 {
        self.solver_dt * self.record_stride as f64
    }

    pub fn nyquist(&self) -> f64 {
        0.5 * self.sample_rate()
    }

    /// Frequency resolution of a single segment spanning the record.
    pub fn bin_width(&self) -> f64 {
        1.0 / self.record_duration
    }

    /// Number of stored samples in the record.
    pub fn sample_count(&self) -> usize {
        (self.record_duration * self.sample_rate()).round() as usize
    }

    /// Returns false (and logs a warning) when `tone` exceeds the Nyquist frequency.
    pub fn resolves(&self, tone: f64) -> bool {
        let ok = tone <= self.nyquist();
        if !ok {
            log::warn!(
                "tone at {tone:.1} Hz exceeds the resolvable maximum {:.1} Hz",
                self.nyquist()
            );
        }
        ok
    }
}

pub fn sampling_plan(
    solver_dt: f64,
    record_stride: u32,
    record_duration: f64,
) -> Result<SamplingPlan> {
    SamplingPlan::new(solver_dt, record_stride, record_duration)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurbulenceInlet {
    pub intensity: f64,
    pub length_scale: f64,
}

/// Length scale quoted for the reference inlet, which `0.7 d` does not reproduce.
pub const QUOTED_LENGTH_SCALE: f64 = 0.05;

/// Inlet turbulence intensity `0.16 Re^(-1/8)` and length scale `0.7 d`.
pub fn turbulence_bc(reynolds: f64, inlet_diameter: f64) -> Result<TurbulenceInlet> {
    if !(reynolds > 0.0) {
        return Err(Error::InvalidInput(format!(
            "Reynolds number must be positive, got {reynolds}"
        )));
    }
    if !(inlet_diameter > 0.0) {
        return Err(Error::InvalidInput(format!(
            "inlet diameter must be positive, got {inlet_diameter}"
        )));
    }
    let length_scale = 0.7 * inlet_diameter;
    if (length_scale - QUOTED_LENGTH_SCALE).abs() > 1e-3 {
        log::warn!(
            "length scale 0.7 d = {length_scale:.4} m differs from the quoted {QUOTED_LENGTH_SCALE} m for this inlet setup"
        );
    }
    Ok(TurbulenceInlet {
        intensity: 0.16 * reynolds.powf(-0.125),
        length_scale,
    })
}

/// Duct Reynolds number from a volume flow through a circular section.
pub fn duct_reynolds(volume_flow: f64, diameter: f64, kinematic_viscosity: f64) -> f64 {
    let velocity = volume_flow / (0.25 * PI * diameter * diameter);
    velocity * diameter / kinematic_viscosity
}
