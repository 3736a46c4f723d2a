use nalgebra::{Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::geom::SamplingPlan;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trajectory {
    Fixed {
        position: Vector3<f64>,
    },
    /// Circle about the +z axis at height `height`, starting at polar angle `phase`.
    Circular {
        radius: f64,
        angular_speed: f64,
        phase: f64,
        height: f64,
    },
}

/// Frame in which the force vector is prescribed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceFrame {
    Stationary,
    /// The vector turns with the orbit (a blade-fixed load).
    Rotating,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceHarmonic {
    pub amplitude: Vector3<f64>,
    pub frequency: f64,
    pub phase: f64,
}

/// `(amplitude, frequency, phase)` of one component along a fixed direction.
pub type ScalarHarmonic = (f64, f64, f64);

/// Concentrated force `mean + sum a_k sin(2 pi f_k t + phi_k)` on a prescribed path.
#[derive(Debug, Clone, PartialEq)]
pub struct PointForceSource {
    pub trajectory: Trajectory,
    pub frame: ForceFrame,
    pub mean: Vector3<f64>,
    pub harmonics: Vec<ForceHarmonic>,
}

impl PointForceSource {
    pub fn fixed(position: Vector3<f64>, mean: Vector3<f64>) -> Self {
        Self {
            trajectory: Trajectory::Fixed { position },
            frame: ForceFrame::Stationary,
            mean,
            harmonics: Vec::new(),
        }
    }

    pub fn with_harmonic(mut self, amplitude: Vector3<f64>, frequency: f64, phase: f64) -> Self {
        self.harmonics.push(ForceHarmonic {
            amplitude,
            frequency,
            phase,
        });
        self
    }

    fn angular_speed(&self) -> f64 {
        match self.trajectory {
            Trajectory::Fixed { .. } => 0.0,
            Trajectory::Circular { angular_speed, .. } => angular_speed,
        }
    }

    pub fn position(&self, t: f64) -> Vector3<f64> {
        match self.trajectory {
            Trajectory::Fixed { position } => position,
            Trajectory::Circular {
                radius,
                angular_speed,
                phase,
                height,
            } => {
                let a = angular_speed * t + phase;
                Vector3::new(radius * a.cos(), radius * a.sin(), height)
            }
        }
    }

    pub fn velocity(&self, t: f64) -> Vector3<f64> {
        let w = self.angular_speed();
        let p = self.position(t);
        Vector3::new(-w * p.y, w * p.x, 0.0)
    }

    pub fn acceleration(&self, t: f64) -> Vector3<f64> {
        let w = self.angular_speed();
        let p = self.position(t);
        Vector3::new(-w * w * p.x, -w * w * p.y, 0.0)
    }

    /// Largest speed along the path.
    pub fn speed(&self) -> f64 {
        match self.trajectory {
            Trajectory::Fixed { .. } => 0.0,
            Trajectory::Circular {
                radius,
                angular_speed,
                ..
            } => (radius * angular_speed).abs(),
        }
    }

    pub fn check_subsonic(&self, sound_speed: f64) -> Result<()> {
        if self.speed() >= sound_speed {
            return Err(Error::InvalidInput(format!(
                "source speed {:.2} m/s is not subsonic (c0 = {sound_speed} m/s)",
                self.speed()
            )));
        }
        Ok(())
    }

    fn frame_force(&self, t: f64) -> (Vector3<f64>, Vector3<f64>) {
        let mut f = self.mean;
        let mut df = Vector3::zeros();
        for h in &self.harmonics {
            let w = 2.0 * std::f64::consts::PI * h.frequency;
            let arg = w * t + h.phase;
            f += h.amplitude * arg.sin();
            df += h.amplitude * (w * arg.cos());
        }
        (f, df)
    }

    fn frame_rotation(&self, t: f64) -> Rotation3<f64> {
        match (self.frame, self.trajectory) {
            (ForceFrame::Rotating, Trajectory::Circular { angular_speed, .. }) => {
                Rotation3::from_axis_angle(&Vector3::z_axis(), angular_speed * t)
            }
            _ => Rotation3::identity(),
        }
    }

    /// Force and its time derivative in the stationary frame.
    pub fn force_and_rate(&self, t: f64) -> (Vector3<f64>, Vector3<f64>) {
        let (f, df) = self.frame_force(t);
        let rot = self.frame_rotation(t);
        let f_s = rot * f;
        let mut df_s = rot * df;
        if self.frame == ForceFrame::Rotating {
            let omega = Vector3::z() * self.angular_speed();
            df_s += omega.cross(&f_s);
        }
        (f_s, df_s)
    }

    pub fn force(&self, t: f64) -> Vector3<f64> {
        self.force_and_rate(t).0
    }

    /// Fixed direction of the prescribed (frame) force, when it has one.
    ///
    /// Returns the unit direction and the signed magnitude history coefficients
    /// `(mean, [(amplitude, f, phase)])` along it.
    pub fn single_direction(&self) -> Option<(Vector3<f64>, f64, Vec<ScalarHarmonic>)> {
        let mut vectors =
            std::iter::once(self.mean).chain(self.harmonics.iter().map(|h| h.amplitude));
        let dir = vectors.find(|v| v.norm() > 0.0)?.normalize();
        let parallel = |v: &Vector3<f64>| v.cross(&dir).norm() <= 1e-12 * v.norm().max(1.0);
        if !parallel(&self.mean) || !self.harmonics.iter().all(|h| parallel(&h.amplitude)) {
            return None;
        }
        Some((
            dir,
            self.mean.dot(&dir),
            self.harmonics
                .iter()
                .map(|h| (h.amplitude.dot(&dir), h.frequency, h.phase))
                .collect(),
        ))
    }
}

/// Uniform samples of the source path and force.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceTrajectory {
    pub times: Vec<f64>,
    pub positions: Vec<Vector3<f64>>,
    pub forces: Vec<Vector3<f64>>,
}

pub fn point_force_signal(src: &PointForceSource, plan: &SamplingPlan) -> Result<ForceTrajectory> {
    plan.validate()?;
    let n = plan.sample_count();
    let dt = plan.sample_interval();
    let times: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
    Ok(ForceTrajectory {
        positions: times.iter().map(|&t| src.position(t)).collect(),
        forces: times.iter().map(|&t| src.force(t)).collect(),
        times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::FanParams;
    use std::f64::consts::PI;

    #[test]
    fn fixed_sinusoid_samples() {
        let src = PointForceSource::fixed(Vector3::zeros(), Vector3::zeros()).with_harmonic(
            Vector3::new(0.0, 0.0, 2.0),
            50.0,
            0.0,
        );
        let plan = SamplingPlan::new(1e-3, 1, 0.1).unwrap();
        let traj = point_force_signal(&src, &plan).unwrap();
        assert_eq!(traj.times.len(), 100);
        for (t, f) in traj.times.iter().zip(&traj.forces) {
            assert!((f.z - 2.0 * (2.0 * PI * 50.0 * t).sin()).abs() < 1e-12);
            assert_eq!(f.x, 0.0);
        }
        assert!(traj.positions.iter().all(|p| *p == Vector3::zeros()));
    }

    #[test]
    fn zero_force_is_zero() {
        let src = PointForceSource {
            trajectory: Trajectory::Circular {
                radius: 0.1,
                angular_speed: 100.0,
                phase: 0.0,
                height: 0.0,
            },
            frame: ForceFrame::Rotating,
            mean: Vector3::zeros(),
            harmonics: vec![],
        };
        let traj = point_force_signal(&src, &SamplingPlan::new(1e-4, 1, 0.01).unwrap()).unwrap();
        assert!(traj.forces.iter().all(|f| f.norm() == 0.0));
    }

    #[test]
    fn tip_orbit_speed() {
        let params = FanParams::reference_fan();
        let src = PointForceSource {
            trajectory: Trajectory::Circular {
                radius: params.outer_radius(),
                angular_speed: 2.0 * PI * params.shaft_frequency(),
                phase: 0.0,
                height: 0.0,
            },
            frame: ForceFrame::Rotating,
            mean: Vector3::z(),
            harmonics: vec![],
        };
        assert!((src.speed() - 39.3).abs() < 0.01);
        assert!((src.velocity(0.013).norm() - src.speed()).abs() < 1e-12);
        src.check_subsonic(340.0).unwrap();
        assert!(src.check_subsonic(30.0).is_err());
    }

    #[test]
    fn rotating_force_rate_matches_finite_difference() {
        let src = PointForceSource {
            trajectory: Trajectory::Circular {
                radius: 0.134,
                angular_speed: 293.2,
                phase: 0.3,
                height: 0.02,
            },
            frame: ForceFrame::Rotating,
            mean: Vector3::new(0.0, 1.0, 0.5),
            harmonics: vec![ForceHarmonic {
                amplitude: Vector3::new(0.2, 0.0, 0.1),
                frequency: 80.0,
                phase: 1.0,
            }],
        };
        let t = 0.0123;
        let h = 1e-6;
        let fd = (src.force(t + h) - src.force(t - h)) / (2.0 * h);
        let (_, rate) = src.force_and_rate(t);
        assert!((fd - rate).norm() < 1e-6 * rate.norm());
    }
}
