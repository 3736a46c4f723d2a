use std::f64::consts::PI;

use nalgebra::{Rotation3, Vector2, Vector3};

use super::mesh::{BladeSide, Panel, Patch, SurfaceMesh};
use super::params::FanParams;
use crate::error::{Error, Result};

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
const GAUSS_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

/// Circular-arc camber line of one blade in the rotor plane.
///
/// The arc meets radius `r1` at the inlet metal angle and `r2` at the outlet
/// metal angle, both measured from the circumferential direction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BladeArc {
    center: Vector2<f64>,
    radius: f64,
    phi_le: f64,
    phi_te: f64,
    /// +1 or -1; mirrors the arc across the x axis.
    mirror: f64,
    /// Rotation applied so the leading edge sits at polar angle 0.
    offset: f64,
}

impl BladeArc {
    pub(crate) fn new(params: &FanParams) -> Result<Self> {
        let r1 = params.inner_radius();
        let r2 = params.outer_radius();
        let b1 = params.blade_inlet_angle.to_radians();
        let b2 = params.blade_outlet_angle.to_radians();
        let denom = 2.0 * (r2 * b2.cos() - r1 * b1.cos());
        if denom <= 1e-12 {
            return Err(Error::Config(format!(
                "blade angles {}/{} deg give no backward-curved circular arc between d1 and d2",
                params.blade_inlet_angle, params.blade_outlet_angle
            )));
        }
        let radius = (r2 * r2 - r1 * r1) / denom;
        let e2 = r1 * r1 + radius * radius - 2.0 * r1 * radius * b1.cos();
        if e2 <= 0.0 {
            return Err(Error::Config(
                "blade arc centre collapses onto the axis".into(),
            ));
        }
        let e = e2.sqrt();
        let point_at = |r: f64| -> Result<Vector2<f64>> {
            let x = (r * r + e2 - radius * radius) / (2.0 * e);
            let y2 = r * r - x * x;
            if y2 < 0.0 {
                return Err(Error::Config(format!(
                    "blade arc does not reach radius {r}"
                )));
            }
            Ok(Vector2::new(x, y2.sqrt()))
        };
        let p1 = point_at(r1)?;
        let p2 = point_at(r2)?;
        let center = Vector2::new(e, 0.0);
        let phi_le = (p1.y - center.y).atan2(p1.x - center.x);
        let phi_te = (p2.y - center.y).atan2(p2.x - center.x);

        // Backward curvature: the trailing edge lags the leading edge in the
        // direction of rotation.
        let sense = params.rotation_sense.sign();
        let dtheta = p2.y.atan2(p2.x) - p1.y.atan2(p1.x);
        let mirror = if dtheta * sense < 0.0 { 1.0 } else { -1.0 };
        let offset = -mirror * p1.y.atan2(p1.x);
        Ok(Self {
            center,
            radius,
            phi_le,
            phi_te,
            mirror,
            offset,
        })
    }

    fn arc_angle(&self, s: f64) -> f64 {
        self.phi_le + s * (self.phi_te - self.phi_le)
    }

    /// Point on the camber line at chord fraction `s` (arc-length based).
    pub(crate) fn point(&self, s: f64) -> Vector2<f64> {
        let phi = self.arc_angle(s);
        let local = self.center + self.radius * Vector2::new(phi.cos(), phi.sin());
        self.place(local)
    }

    /// Unit normal of the arc (pointing away from the arc centre).
    pub(crate) fn normal(&self, s: f64) -> Vector2<f64> {
        let phi = self.arc_angle(s);
        self.place(Vector2::new(phi.cos(), phi.sin()))
    }

    /// Unit tangent pointing from leading to trailing edge.
    #[cfg(test)]
    pub(crate) fn tangent(&self, s: f64) -> Vector2<f64> {
        let phi = self.arc_angle(s);
        let dir = (self.phi_te - self.phi_le).signum();
        self.place(Vector2::new(-phi.sin(), phi.cos()) * dir)
    }

    fn place(&self, v: Vector2<f64>) -> Vector2<f64> {
        let m = Vector2::new(v.x, self.mirror * v.y);
        let (s, c) = self.offset.sin_cos();
        Vector2::new(c * m.x - s * m.y, s * m.x + c * m.y)
    }

    /// Arc length between chord fractions.
    fn length(&self, s0: f64, s1: f64) -> f64 {
        self.radius * (self.arc_angle(s1) - self.arc_angle(s0)).abs()
    }
}

/// Shroud height above the backplate at radius `r` (linear cone).
fn shroud_height(params: &FanParams, r: f64) -> f64 {
    let r1 = params.inner_radius();
    let r2 = params.outer_radius();
    let h1 = params.inlet_blade_height();
    let h2 = params.fan_width_b2;
    let u = ((r - r1) / (r2 - r1)).clamp(0.0, 1.0);
    h1 + u * (h2 - h1)
}

/// Side, chord index, span index, centre, normal, area.
type BladePanel = (BladeSide, usize, usize, Vector3<f64>, Vector3<f64>, f64);

/// Build the blade, backplate and shroud panels of the impeller.
pub fn build_fan_geometry(params: &FanParams) -> Result<SurfaceMesh> {
    params.validate()?;
    let arc = BladeArc::new(params)?;
    let z = params.blade_count_z as usize;
    let nc = params.chordwise_panels;
    let ns = params.spanwise_panels;
    let naz = params.azimuthal_panels;
    let sense = params.rotation_sense.sign();

    let mut panels = Vec::with_capacity(2 * z * nc * ns + 2 * nc * naz);

    // One reference blade; the others are rotated copies.
    let mut blade0: Vec<BladePanel> = Vec::new();
    for i in 0..nc {
        let s0 = i as f64 / nc as f64;
        let s1 = (i + 1) as f64 / nc as f64;
        let sc = 0.5 * (s0 + s1);
        // Mean blade height over the chord strip.
        let half = 0.5 * (s1 - s0);
        let mean_height: f64 = GAUSS_NODES
            .iter()
            .zip(GAUSS_WEIGHTS)
            .map(|(x, w)| w * shroud_height(params, arc.point(sc + half * x).norm()))
            .sum::<f64>()
            / 2.0;
        let strip_length = arc.length(s0, s1);
        let p = arc.point(sc);
        let n = arc.normal(sc);
        let height_c = shroud_height(params, p.norm());
        // Outward normal component along the local direction of motion.
        let motion = Vector2::new(-p.y, p.x) * sense;
        let forward = if n.dot(&motion) > 0.0 { 1.0 } else { -1.0 };
        for j in 0..ns {
            let e0 = j as f64 / ns as f64;
            let e1 = (j + 1) as f64 / ns as f64;
            let ec = 0.5 * (e0 + e1);
            let center = Vector3::new(p.x, p.y, ec * height_c);
            let area = strip_length * (e1 - e0) * mean_height;
            for (side, sign) in [
                (BladeSide::Pressure, forward),
                (BladeSide::Suction, -forward),
            ] {
                let normal = Vector3::new(n.x, n.y, 0.0) * sign;
                blade0.push((side, i, j, center, normal, area));
            }
        }
    }
    // Order per blade: side-major, then chordwise, then spanwise.
    blade0.sort_by_key(|(side, i, j, ..)| (matches!(side, BladeSide::Suction), *i, *j));

    for b in 0..z {
        let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), b as f64 * params.blade_pitch());
        for &(side, i, j, center, normal, area) in &blade0 {
            panels.push(Panel {
                id: panels.len(),
                patch: Patch::Blade,
                blade_index: Some(b),
                side: Some(side),
                center: rot * center,
                normal: rot * normal,
                area,
                chord_fraction: Some((i as f64 + 0.5) / nc as f64),
                span_fraction: Some((j as f64 + 0.5) / ns as f64),
            });
        }
    }

    let r1 = params.inner_radius();
    let r2 = params.outer_radius();
    let dtheta = 2.0 * PI / naz as f64;

    // Backplate: flat annulus at z = 0, wetted side facing +z.
    for i in 0..nc {
        let ri = r1 + (r2 - r1) * i as f64 / nc as f64;
        let ro = r1 + (r2 - r1) * (i + 1) as f64 / nc as f64;
        let rc = 2.0 / 3.0 * (ro.powi(3) - ri.powi(3)) / (ro * ro - ri * ri);
        for k in 0..naz {
            let theta = (k as f64 + 0.5) * dtheta;
            panels.push(Panel {
                id: panels.len(),
                patch: Patch::Backplate,
                blade_index: None,
                side: None,
                center: Vector3::new(rc * theta.cos(), rc * theta.sin(), 0.0),
                normal: Vector3::z(),
                area: 0.5 * dtheta * (ro * ro - ri * ri),
                chord_fraction: None,
                span_fraction: None,
            });
        }
    }

    // Shroud: conical band from (r1, h_in) to (r2, b2), wetted side facing the passages.
    let h_in = params.inlet_blade_height();
    let dr = r2 - r1;
    let dz = params.fan_width_b2 - h_in;
    let slant = (dr * dr + dz * dz).sqrt();
    let (n_rad, n_ax) = (dz / slant, -dr / slant);
    for i in 0..nc {
        let u0 = i as f64 / nc as f64;
        let u1 = (i + 1) as f64 / nc as f64;
        let ra = r1 + u0 * dr;
        let rb = r1 + u1 * dr;
        let uc = 0.5 * (u0 + u1);
        let rc = r1 + uc * dr;
        let zc = h_in + uc * dz;
        let area = dtheta * slant * (u1 - u0) * 0.5 * (ra + rb);
        for k in 0..naz {
            let theta = (k as f64 + 0.5) * dtheta;
            let (s, c) = theta.sin_cos();
            panels.push(Panel {
                id: panels.len(),
                patch: Patch::Shroud,
                blade_index: None,
                side: None,
                center: Vector3::new(rc * c, rc * s, zc),
                normal: Vector3::new(n_rad * c, n_rad * s, n_ax),
                area,
                chord_fraction: None,
                span_fraction: None,
            });
        }
    }

    SurfaceMesh::new(panels, Some(params.clone()))
}
