use std::f64::consts::PI;

use nalgebra::{Rotation3, Vector3};
use rayon::prelude::*;

use super::medium::Medium;
use super::numerics::{derivative, hermite, pchip_slopes_from_steps, Resampling};
use super::signal::{AcousticSignal, TimeGrid};
use crate::error::{Error, Result};
use crate::geom::{Panel, RotationKinematics, SamplingPlan, SurfaceMesh};
use crate::sources::{whole_samples, SurfacePressureField};

/// Panels per work unit. Fixed so the summation order does not depend on the thread count.
pub const PANEL_CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub resampling: Resampling,
    /// Source samples dropped at each end of every panel history. The resampling
    /// slopes differentiate values that are themselves built from derivatives,
    /// so one-sided stencils reach four samples in from each end.
    pub edge_samples: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            resampling: Resampling::Hermite,
            edge_samples: 4,
        }
    }
}

/// Compact loading-noise integrand for one source point, without the area and `1/4 pi`.
///
/// `r_vec` points from source to observer; `l` is the force per unit area exerted
/// on the fluid, `m` the source Mach vector, and dots are source-time derivatives.
/// Fails with the Doppler factor `1 - M_r` when it is not positive.
pub fn loading_kernel(
    r_vec: &Vector3<f64>,
    l: &Vector3<f64>,
    l_dot: &Vector3<f64>,
    m: &Vector3<f64>,
    m_dot: &Vector3<f64>,
    c0: f64,
) -> std::result::Result<f64, f64> {
    let r = r_vec.norm();
    let rh = r_vec / r;
    let m_r = m.dot(&rh);
    let dop = 1.0 - m_r;
    if !(dop > 0.0) {
        return Err(dop);
    }
    let l_r = l.dot(&rh);
    let l_m = l.dot(m);
    let dop2 = dop * dop;
    let near = (l_r - l_m) / (r * r * dop2);
    let far = l_dot.dot(&rh) / (c0 * r * dop2);
    let accel =
        l_r * (r * m_dot.dot(&rh) + c0 * (m_r - m.norm_squared())) / (c0 * r * r * dop2 * dop);
    Ok(far + near + accel)
}

/// Source-time samples and rotations shared by every panel.
///
/// When a rotation spans a whole number of samples the rotation of sample `i`
/// is taken from `i` modulo that number, so the geometry repeats bit for bit.
struct SourceFrames {
    times: Vec<f64>,
    rotations: Vec<Rotation3<f64>>,
    omega: Vector3<f64>,
    t0: f64,
    step: f64,
}

impl SourceFrames {
    fn new(field: &SurfacePressureField, kin: &RotationKinematics) -> Self {
        let fs = field.sample_rate();
        let cycle = whole_samples(kin.period(), fs);
        let times: Vec<f64> = (0..field.n_samples()).map(|i| field.time(i)).collect();
        let rotations = (0..field.n_samples())
            .map(|i| kin.rotation(field.t0() + cycle.map_or(i, |m| i % m) as f64 / fs))
            .collect();
        Self {
            times,
            rotations,
            omega: kin.omega(),
            t0: field.t0(),
            step: 1.0 / fs,
        }
    }

    fn len(&self) -> usize {
        self.times.len()
    }

    /// Propagation delay from source sample `i` of `panel` to `observer`.
    fn delay(&self, panel: &Panel, i: usize, observer: &Vector3<f64>, c0: f64) -> f64 {
        (observer - self.rotations[i] * panel.center).norm() / c0
    }
}

/// Uniform observer grid, either aligned with the source samples or free.
#[derive(Debug, Clone, Copy)]
enum ObserverFrame {
    /// Observer sample `k` is source time index `first + k`.
    Aligned {
        first: i64,
    },
    Free {
        t0: f64,
        step: f64,
    },
}

impl ObserverFrame {
    /// Observer time `k` minus the emission time of source sample `i`, before the delay.
    #[inline]
    fn lead(&self, frames: &SourceFrames, k: usize, i: usize) -> f64 {
        match *self {
            ObserverFrame::Aligned { first } => (first + k as i64 - i as i64) as f64 * frames.step,
            ObserverFrame::Free { t0, step } => (t0 + k as f64 * step) - frames.times[i],
        }
    }

    fn grid(&self, frames: &SourceFrames, len: usize) -> TimeGrid {
        match *self {
            ObserverFrame::Aligned { first } => TimeGrid::new(
                1.0 / frames.step,
                frames.t0 + first as f64 * frames.step,
                len,
            ),
            ObserverFrame::Free { t0, step } => TimeGrid::new(1.0 / step, t0, len),
        }
    }
}

/// One panel's contribution at every source sample, keyed by propagation delay.
struct PanelSeries {
    delay: Vec<f64>,
    value: Vec<f64>,
    slope: Vec<f64>,
}

impl PanelSeries {
    /// Spacing of consecutive arrival times.
    #[inline]
    fn gap(&self, step: f64, i: usize) -> f64 {
        step + (self.delay[i + 1] - self.delay[i])
    }

    /// Add the resampled contribution at observer samples `0..out.len()`.
    fn accumulate(&self, frames: &SourceFrames, frame: &ObserverFrame, out: &mut [f64]) {
        let n = self.value.len();
        let mut i = 0;
        for (k, slot) in out.iter_mut().enumerate() {
            while i + 2 < n && frame.lead(frames, k, i + 1) - self.delay[i + 1] > 0.0 {
                i += 1;
            }
            let h = self.gap(frames.step, i);
            let u = (frame.lead(frames, k, i) - self.delay[i]) / h;
            *slot += hermite(
                u,
                h,
                self.value[i],
                self.value[i + 1],
                self.slope[i],
                self.slope[i + 1],
            );
        }
    }
}

fn panel_series(
    panel: &Panel,
    history: ndarray::ArrayView1<'_, f64>,
    frames: &SourceFrames,
    observer: &Vector3<f64>,
    c0: f64,
    resampling: Resampling,
) -> Result<PanelSeries> {
    let n = frames.len();
    let mut pos = Vec::with_capacity(n);
    let mut l = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut m = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for i in 0..n {
        let rot = &frames.rotations[i];
        let y = rot * panel.center;
        let normal = rot * panel.normal;
        let v = frames.omega.cross(&y);
        for k in 0..3 {
            l[k][i] = history[i] * normal[k];
            m[k][i] = v[k] / c0;
        }
        pos.push(y);
    }
    let l_dot: Vec<Vec<f64>> = l.iter().map(|c| derivative(c, frames.step)).collect();
    let m_dot: Vec<Vec<f64>> = m.iter().map(|c| derivative(c, frames.step)).collect();

    let scale = panel.area / (4.0 * PI);
    let mut delay = Vec::with_capacity(n);
    let mut value = Vec::with_capacity(n);
    let mut doppler = Vec::with_capacity(n);
    for i in 0..n {
        let at = |c: &[Vec<f64>]| Vector3::new(c[0][i], c[1][i], c[2][i]);
        let r_vec = observer - pos[i];
        let (mi, li) = (at(&m), at(&l));
        let q = loading_kernel(&r_vec, &li, &at(&l_dot), &mi, &at(&m_dot), c0).map_err(|d| {
            Error::Supersonic {
                panel: panel.id,
                time: frames.times[i],
                doppler: d,
            }
        })?;
        let r = r_vec.norm();
        delay.push(r / c0);
        value.push(q * scale);
        doppler.push(1.0 - mi.dot(&(r_vec / r)));
    }
    let mut series = PanelSeries {
        delay,
        value,
        slope: Vec::new(),
    };
    series.slope = match resampling {
        Resampling::Hermite => derivative(&series.value, frames.step)
            .into_iter()
            .zip(&doppler)
            .map(|(dq, d)| dq / d)
            .collect(),
        Resampling::Pchip => {
            let gaps: Vec<f64> = (0..n - 1).map(|i| series.gap(frames.step, i)).collect();
            pchip_slopes_from_steps(&gaps, &series.value)
        }
    };
    Ok(series)
}

fn check_inputs(
    field: &SurfacePressureField,
    mesh: &SurfaceMesh,
    observer: &Vector3<f64>,
    medium: &Medium,
    plan: &SamplingPlan,
    options: &SolverOptions,
) -> Result<()> {
    medium.validate()?;
    plan.validate()?;
    field.check_bound_to(mesh)?;
    if !observer.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidInput(
            "observer position must be finite".into(),
        ));
    }
    if mesh.swept_volume_contains(observer) {
        return Err(Error::ObserverInsideSource((*observer).into()));
    }
    if plan.record_duration > field.duration() + 0.5 / field.sample_rate() {
        return Err(Error::InvalidInput(format!(
            "plan record of {} s exceeds the {} s pressure record",
            plan.record_duration,
            field.duration()
        )));
    }
    if field.n_samples() < 2 * options.edge_samples + 4 {
        return Err(Error::InsufficientOverlap(format!(
            "{} source samples are too few for the derivative stencils",
            field.n_samples()
        )));
    }
    Ok(())
}

/// Observer window in which every panel's contribution is available.
///
/// The grid shares the source sample clock when the plan and field rates agree.
fn overlap_frame(
    mesh: &SurfaceMesh,
    frames: &SourceFrames,
    observer: &Vector3<f64>,
    c0: f64,
    plan: &SamplingPlan,
    edge: usize,
) -> Result<(ObserverFrame, usize)> {
    let n = frames.len();
    let (i_lo, i_hi) = (edge, n - 1 - edge);
    let mut d_lo = f64::NEG_INFINITY;
    let mut d_hi = f64::INFINITY;
    for p in mesh.panels() {
        d_lo = d_lo.max(i_lo as f64 * frames.step + frames.delay(p, i_lo, observer, c0));
        d_hi = d_hi.min(i_hi as f64 * frames.step + frames.delay(p, i_hi, observer, c0));
    }
    let aligned = ((plan.sample_interval() - frames.step) / frames.step).abs() <= 1e-12;
    let (frame, count) = if aligned {
        let mut k0 = (d_lo / frames.step).ceil() as i64;
        let mut k1 = (d_hi / frames.step).floor() as i64;
        // settle rounding at the window ends with the same arithmetic used for resampling
        let first = |k: i64| ObserverFrame::Aligned { first: k };
        let ok_lo = |k: i64| {
            mesh.panels()
                .iter()
                .all(|p| first(k).lead(frames, 0, i_lo) >= frames.delay(p, i_lo, observer, c0))
        };
        while !ok_lo(k0) {
            k0 += 1;
        }
        let ok_hi = |k: i64| {
            mesh.panels()
                .iter()
                .all(|p| first(k).lead(frames, 0, i_hi) <= frames.delay(p, i_hi, observer, c0))
        };
        while !ok_hi(k1) {
            k1 -= 1;
        }
        (first(k0), k1 - k0 + 1)
    } else {
        let dt = plan.sample_interval();
        let (lo, hi) = (frames.t0 + d_lo, frames.t0 + d_hi);
        let mut k0 = (lo / dt).ceil();
        if k0 * dt < lo {
            k0 += 1.0;
        }
        let mut k1 = (hi / dt).floor();
        if k1 * dt > hi {
            k1 -= 1.0;
        }
        (
            ObserverFrame::Free {
                t0: k0 * dt,
                step: dt,
            },
            (k1 - k0) as i64 + 1,
        )
    };
    if count < 2 {
        return Err(Error::InsufficientOverlap(format!(
            "panel arrival windows share no common span (latest start {d_lo:.6e} s, earliest end {d_hi:.6e} s after the record start)"
        )));
    }
    Ok((frame, (count as usize).min(plan.sample_count())))
}

/// Loading noise at `observer` from the rotating panels of `mesh` carrying `field`.
///
/// The first rotation period of the result is flagged as transient.
pub fn loading_noise(
    field: &SurfacePressureField,
    mesh: &SurfaceMesh,
    kin: &RotationKinematics,
    observer: &Vector3<f64>,
    medium: &Medium,
    plan: &SamplingPlan,
) -> Result<AcousticSignal> {
    loading_noise_with(
        field,
        mesh,
        kin,
        observer,
        medium,
        plan,
        &SolverOptions::default(),
    )
}

pub fn loading_noise_with(
    field: &SurfacePressureField,
    mesh: &SurfaceMesh,
    kin: &RotationKinematics,
    observer: &Vector3<f64>,
    medium: &Medium,
    plan: &SamplingPlan,
    options: &SolverOptions,
) -> Result<AcousticSignal> {
    check_inputs(field, mesh, observer, medium, plan, options)?;
    let c0 = medium.sound_speed;
    let frames = SourceFrames::new(field, kin);
    let (frame, len) = overlap_frame(mesh, &frames, observer, c0, plan, options.edge_samples)?;

    let partials: Vec<Vec<f64>> = mesh
        .panels()
        .par_chunks(PANEL_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; len];
            for panel in chunk {
                let s = panel_series(
                    panel,
                    field.panel_history(panel.id),
                    &frames,
                    observer,
                    c0,
                    options.resampling,
                )?;
                s.accumulate(&frames, &frame, &mut acc);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let mut pressure = vec![0.0; len];
    for partial in &partials {
        for (p, v) in pressure.iter_mut().zip(partial) {
            *p += v;
        }
    }
    let transient = if kin.is_stationary() {
        0.0
    } else {
        kin.period()
    };
    let grid = frame.grid(&frames, len);
    Ok(AcousticSignal::new(grid.sample_rate, grid.t0, pressure)?.with_transient(transient))
}

/// Smallest and largest Doppler factor `1 - M_r` over all panels at the given source times.
pub fn doppler_bounds(
    mesh: &SurfaceMesh,
    kin: &RotationKinematics,
    observer: &Vector3<f64>,
    medium: &Medium,
    times: impl IntoIterator<Item = f64>,
) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let omega = kin.omega();
    for t in times {
        let rot = kin.rotation(t);
        for p in mesh.panels() {
            let y = rot * p.center;
            let v = omega.cross(&y);
            let d = 1.0 - v.dot(&(observer - y).normalize()) / medium.sound_speed;
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    (lo, hi)
}
