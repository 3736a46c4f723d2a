use std::f64::consts::PI;

use nalgebra::{Rotation3, Unit, Vector3};

use super::params::{FanParams, RotationSense};

/// Rigid rotation about the +z axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationKinematics {
    pub axis: Unit<Vector3<f64>>,
    /// Signed angular speed in rad/s; positive is counterclockwise about +z.
    pub angular_speed: f64,
}

impl RotationKinematics {
    pub fn new(rpm: f64, sense: RotationSense) -> Self {
        Self {
            axis: Vector3::z_axis(),
            angular_speed: sense.sign() * 2.0 * PI * rpm / 60.0,
        }
    }

    pub fn from_params(params: &FanParams) -> Self {
        Self::new(params.rotation_speed_n, params.rotation_sense)
    }

    pub fn stationary() -> Self {
        Self {
            axis: Vector3::z_axis(),
            angular_speed: 0.0,
        }
    }

    pub fn with_angular_speed(angular_speed: f64) -> Self {
        Self {
            axis: Vector3::z_axis(),
            angular_speed,
        }
    }

    pub fn omega(&self) -> Vector3<f64> {
        self.axis.into_inner() * self.angular_speed
    }

    pub fn rotation(&self, t: f64) -> Rotation3<f64> {
        Rotation3::from_axis_angle(&self.axis, self.angular_speed * t)
    }

    /// Rotation period in seconds; infinite when the rotor is at rest.
    pub fn period(&self) -> f64 {
        if self.angular_speed == 0.0 {
            f64::INFINITY
        } else {
            2.0 * PI / self.angular_speed.abs()
        }
    }

    pub fn is_stationary(&self) -> bool {
        self.angular_speed == 0.0
    }
}

/// Instantaneous position, velocity and normal of a panel in the stationary frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelState {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
    pub normal: Vector3<f64>,
}

impl RotationKinematics {
    pub(crate) fn state_of(
        &self,
        center: &Vector3<f64>,
        normal: &Vector3<f64>,
        t: f64,
    ) -> PanelState {
        let rot = self.rotation(t);
        let position = rot * center;
        PanelState {
            position,
            velocity: self.omega().cross(&position),
            normal: rot * normal,
        }
    }
}
