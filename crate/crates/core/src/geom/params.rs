use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rotation sense of the impeller as seen by an observer looking into the inlet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationSense {
    #[default]
    ClockwiseFromInlet,
    CounterclockwiseFromInlet,
}

impl RotationSense {
    /// Sign of the angular velocity about +z (the inlet side is +z).
    pub fn sign(self) -> f64 {
        match self {
            RotationSense::ClockwiseFromInlet => -1.0,
            RotationSense::CounterclockwiseFromInlet => 1.0,
        }
    }
}

/// Impeller dimensions, operating speed and panel resolution.
///
/// Lengths are in metres, angles in degrees, speed in rev/min.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanParams {
    pub intake_diameter_d1: f64,
    pub fan_diameter_d2: f64,
    pub fan_width_b2: f64,
    #[serde(default = "default_gap")]
    pub gap_width_w: f64,
    pub blade_count_z: u32,
    pub rotation_speed_n: f64,
    #[serde(default)]
    pub rotation_sense: RotationSense,
    #[serde(default = "default_inlet_angle")]
    pub blade_inlet_angle: f64,
    #[serde(default = "default_outlet_angle")]
    pub blade_outlet_angle: f64,
    #[serde(default = "default_chordwise")]
    pub chordwise_panels: usize,
    #[serde(default = "default_spanwise")]
    pub spanwise_panels: usize,
    #[serde(default = "default_azimuthal")]
    pub azimuthal_panels: usize,
}

fn default_gap() -> f64 {
    0.0015
}
fn default_inlet_angle() -> f64 {
    32.0
}
fn default_outlet_angle() -> f64 {
    38.0
}
fn default_chordwise() -> usize {
    8
}
fn default_spanwise() -> usize {
    6
}
fn default_azimuthal() -> usize {
    28
}

impl Default for FanParams {
    fn default() -> Self {
        Self::reference_fan()
    }
}

impl FanParams {
    /// The isolated seven-blade fan running at 2800 rpm.
    pub fn reference_fan() -> Self {
        Self {
            intake_diameter_d1: 0.165,
            fan_diameter_d2: 0.268,
            fan_width_b2: 0.053,
            gap_width_w: default_gap(),
            blade_count_z: 7,
            rotation_speed_n: 2800.0,
            rotation_sense: RotationSense::default(),
            blade_inlet_angle: default_inlet_angle(),
            blade_outlet_angle: default_outlet_angle(),
            chordwise_panels: default_chordwise(),
            spanwise_panels: default_spanwise(),
            azimuthal_panels: default_azimuthal(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lengths = [
            ("intake_diameter_d1", self.intake_diameter_d1),
            ("fan_diameter_d2", self.fan_diameter_d2),
            ("fan_width_b2", self.fan_width_b2),
            ("gap_width_w", self.gap_width_w),
        ];
        for (name, value) in lengths {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be a positive length, got {value}"
                )));
            }
        }
        if self.intake_diameter_d1 >= self.fan_diameter_d2 {
            return Err(Error::Config(format!(
                "intake_diameter_d1 ({}) must be smaller than fan_diameter_d2 ({})",
                self.intake_diameter_d1, self.fan_diameter_d2
            )));
        }
        if self.blade_count_z < 1 {
            return Err(Error::Config("blade_count_z must be at least 1".into()));
        }
        if !(self.rotation_speed_n.is_finite() && self.rotation_speed_n > 0.0) {
            return Err(Error::Config(format!(
                "rotation_speed_n must be positive, got {}",
                self.rotation_speed_n
            )));
        }
        for (name, angle) in [
            ("blade_inlet_angle", self.blade_inlet_angle),
            ("blade_outlet_angle", self.blade_outlet_angle),
        ] {
            if !(angle > 0.0 && angle < 90.0) {
                return Err(Error::Config(format!(
                    "{name} must lie in (0, 90) degrees, got {angle}"
                )));
            }
        }
        for (name, count) in [
            ("chordwise_panels", self.chordwise_panels),
            ("spanwise_panels", self.spanwise_panels),
            ("azimuthal_panels", self.azimuthal_panels),
        ] {
            if count < 1 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    /// n_f in Hz.
    pub fn shaft_frequency(&self) -> f64 {
        self.rotation_speed_n / 60.0
    }

    /// T = 60/n in seconds.
    pub fn rotation_period(&self) -> f64 {
        60.0 / self.rotation_speed_n
    }

    pub fn blade_passing_frequency(&self) -> f64 {
        self.blade_count_z as f64 * self.shaft_frequency()
    }

    pub fn outer_radius(&self) -> f64 {
        0.5 * self.fan_diameter_d2
    }

    pub fn inner_radius(&self) -> f64 {
        0.5 * self.intake_diameter_d1
    }

    /// Blade height at the intake radius. The shroud cone keeps the
    /// meridional through-flow area `2 pi r h` constant between d1 and d2.
    pub fn inlet_blade_height(&self) -> f64 {
        self.fan_width_b2 * self.fan_diameter_d2 / self.intake_diameter_d1
    }

    /// Blade pitch angle 2 pi / z in radians.
    pub fn blade_pitch(&self) -> f64 {
        2.0 * PI / self.blade_count_z as f64
    }
}
