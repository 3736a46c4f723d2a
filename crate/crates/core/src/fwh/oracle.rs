//! Reference solutions for validating the panel solver.

use std::f64::consts::PI;

use nalgebra::Vector3;
use ndarray::Array2;

use super::loading::loading_kernel;
use super::medium::Medium;
use super::signal::{AcousticSignal, TimeGrid};
use crate::error::{Error, Result};
use crate::geom::{RotationKinematics, SamplingPlan, SurfaceMesh};
use crate::sources::{ForceFrame, PointForceSource, SurfacePressureField, Trajectory};

/// Residual below which an emission time is accepted, s.
pub const RETARDED_TIME_TOLERANCE: f64 = 1e-12;

/// Stationary compact dipole of strength `F(t)` observed at `observer` on `grid`.
pub fn compact_dipole_reference(
    src: &PointForceSource,
    observer: &Vector3<f64>,
    medium: &Medium,
    grid: &TimeGrid,
) -> Result<AcousticSignal> {
    medium.validate()?;
    let Trajectory::Fixed { position } = src.trajectory else {
        return Err(Error::InvalidInput(
            "compact dipole reference needs a fixed source".into(),
        ));
    };
    let r_vec = observer - position;
    let r = r_vec.norm();
    if r == 0.0 {
        return Err(Error::ObserverInsideSource((*observer).into()));
    }
    let rh = r_vec / r;
    let c0 = medium.sound_speed;
    let pressure = grid
        .times()
        .map(|t| {
            let (f, df) = src.force_and_rate(t - r / c0);
            (df.dot(&rh) / (c0 * r) + f.dot(&rh) / (r * r)) / (4.0 * PI)
        })
        .collect();
    AcousticSignal::new(grid.sample_rate, grid.t0, pressure)
}

/// Emission time of the signal heard at `observer` at time `t` from a source moving
/// along `trajectory`, searched within `span = (tau_min, tau_max)` by bisection.
pub fn retarded_time_solve(
    observer: &Vector3<f64>,
    trajectory: impl Fn(f64) -> Vector3<f64>,
    span: (f64, f64),
    t: f64,
    sound_speed: f64,
) -> Result<f64> {
    let g = |tau: f64| t - tau - (observer - trajectory(tau)).norm() / sound_speed;
    let (mut lo, mut hi) = span;
    let (g_lo, g_hi) = (g(lo), g(hi));
    if g_lo.abs() < RETARDED_TIME_TOLERANCE {
        return Ok(lo);
    }
    if g_hi.abs() < RETARDED_TIME_TOLERANCE {
        return Ok(hi);
    }
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::RootOutsideTrajectory { time: t });
    }
    let mut best = (lo, g_lo.abs());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm.abs() < best.1 {
            best = (mid, gm.abs());
        }
        if gm.abs() < 0.01 * RETARDED_TIME_TOLERANCE || mid == lo || mid == hi {
            break;
        }
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best.0)
}

/// Arrival-time grid `k dt` covering emission over the plan record `[0, T_rec]`.
fn reference_grid(
    src: &PointForceSource,
    observer: &Vector3<f64>,
    c0: f64,
    plan: &SamplingPlan,
) -> Result<TimeGrid> {
    let t_rec = plan.record_duration;
    let first = (observer - src.position(0.0)).norm() / c0;
    let last = t_rec + (observer - src.position(t_rec)).norm() / c0;
    let dt = plan.sample_interval();
    let mut k0 = (first / dt).ceil();
    if k0 * dt < first {
        k0 += 1.0;
    }
    let mut k1 = (last / dt).floor();
    if k1 * dt > last {
        k1 -= 1.0;
    }
    if !(k1 > k0) {
        return Err(Error::InsufficientOverlap(
            "record too short for any arrival".into(),
        ));
    }
    Ok(TimeGrid::new(
        plan.sample_rate(),
        k0 * dt,
        (k1 - k0) as usize + 1,
    ))
}

/// Brute-force retarded-time evaluation of the compact loading formula for a moving
/// point force, using analytic kinematics and force rates.
pub fn rotating_point_force_reference(
    src: &PointForceSource,
    observer: &Vector3<f64>,
    medium: &Medium,
    plan: &SamplingPlan,
) -> Result<AcousticSignal> {
    medium.validate()?;
    plan.validate()?;
    let c0 = medium.sound_speed;
    src.check_subsonic(c0)?;
    let grid = reference_grid(src, observer, c0, plan)?;
    let span = (0.0, plan.record_duration);
    let mut pressure = Vec::with_capacity(grid.len);
    for t in grid.times() {
        let tau = retarded_time_solve(observer, |s| src.position(s), span, t, c0)?;
        let (f, df) = src.force_and_rate(tau);
        let m = src.velocity(tau) / c0;
        let m_dot = src.acceleration(tau) / c0;
        let r_vec = observer - src.position(tau);
        let q = loading_kernel(&r_vec, &f, &df, &m, &m_dot, c0).map_err(|d| Error::Supersonic {
            panel: 0,
            time: tau,
            doppler: d,
        })?;
        pressure.push(q / (4.0 * PI));
    }
    AcousticSignal::new(grid.sample_rate, grid.t0, pressure)
}

/// One unit-area panel that carries the same load as `src`, with its kinematics
/// and pressure history over `plan`.
///
/// The force must keep a fixed direction in the frame that moves with the source.
pub fn point_force_panel(
    src: &PointForceSource,
    plan: &SamplingPlan,
) -> Result<(SurfaceMesh, RotationKinematics, SurfacePressureField)> {
    plan.validate()?;
    let kin = match (src.trajectory, src.frame) {
        (Trajectory::Fixed { .. }, _) => RotationKinematics::stationary(),
        (
            Trajectory::Circular {
                angular_speed,
                phase,
                ..
            },
            ForceFrame::Rotating,
        ) => {
            if phase != 0.0 {
                return Err(Error::InvalidInput(
                    "orbit phase must be zero for the panel equivalent".into(),
                ));
            }
            RotationKinematics::with_angular_speed(angular_speed)
        }
        (Trajectory::Circular { .. }, ForceFrame::Stationary) => {
            return Err(Error::InvalidInput(
                "an orbiting panel can only carry a force that turns with it".into(),
            ))
        }
    };
    let (dir, mean, harmonics) = src.single_direction().ok_or_else(|| {
        Error::InvalidInput("force direction must be fixed in the source frame".into())
    })?;
    let mesh = SurfaceMesh::single_panel(src.position(0.0), dir, 1.0)?;
    let n = plan.sample_count();
    let fs = plan.sample_rate();
    let p = Array2::from_shape_fn((n, 1), |(i, _)| {
        let t = i as f64 / fs;
        harmonics.iter().fold(mean, |acc, &(a, f, ph)| {
            acc + a * (2.0 * PI * f * t + ph).sin()
        })
    });
    let field = SurfacePressureField::new(fs, 0.0, p, &mesh)?;
    Ok((mesh, kin, field))
}
