use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::kinematics::{PanelState, RotationKinematics};
use super::params::FanParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Patch {
    Blade,
    Shroud,
    Backplate,
}

impl Patch {
    pub fn as_str(self) -> &'static str {
        match self {
            Patch::Blade => "blade",
            Patch::Shroud => "shroud",
            Patch::Backplate => "backplate",
        }
    }
}

impl fmt::Display for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Patch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "blade" => Ok(Patch::Blade),
            "shroud" => Ok(Patch::Shroud),
            "backplate" => Ok(Patch::Backplate),
            other => Err(format!("unknown patch `{other}`")),
        }
    }
}

/// Which face of a zero-thickness blade a panel belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BladeSide {
    /// Face whose normal points along the direction of motion.
    Pressure,
    Suction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub id: usize,
    pub patch: Patch,
    pub blade_index: Option<usize>,
    pub side: Option<BladeSide>,
    /// Centroid in the rotating frame at t = 0.
    pub center: Vector3<f64>,
    /// Unit normal pointing into the fluid.
    pub normal: Vector3<f64>,
    pub area: f64,
    pub chord_fraction: Option<f64>,
    pub span_fraction: Option<f64>,
}

impl Panel {
    pub fn radius(&self) -> f64 {
        self.center.xy().norm()
    }
}

/// Panelised integration surface. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    panels: Vec<Panel>,
    params: Option<FanParams>,
    fingerprint: u64,
}

impl SurfaceMesh {
    /// Assemble a mesh, checking ids, normals and areas.
    pub fn new(panels: Vec<Panel>, params: Option<FanParams>) -> Result<Self> {
        if panels.is_empty() {
            return Err(Error::InvalidInput("mesh has no panels".into()));
        }
        for (i, p) in panels.iter().enumerate() {
            if p.id != i {
                return Err(Error::InvalidInput(format!(
                    "panel ids must be dense from 0: position {i} holds id {}",
                    p.id
                )));
            }
            if !(p.area.is_finite() && p.area > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "panel {i} has non-positive area {}",
                    p.area
                )));
            }
            if (p.normal.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "panel {i} normal is not unit length (|n| = {})",
                    p.normal.norm()
                )));
            }
            if !p.center.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "panel {i} has a non-finite centre"
                )));
            }
        }
        let fingerprint = fingerprint(&panels);
        Ok(Self {
            panels,
            params,
            fingerprint,
        })
    }

    /// A one-panel mesh, used for point-source validation cases.
    pub fn single_panel(center: Vector3<f64>, normal: Vector3<f64>, area: f64) -> Result<Self> {
        let norm = normal.norm();
        if norm == 0.0 {
            return Err(Error::InvalidInput("panel normal must be non-zero".into()));
        }
        Self::new(
            vec![Panel {
                id: 0,
                patch: Patch::Blade,
                blade_index: Some(0),
                side: Some(BladeSide::Pressure),
                center,
                normal: normal / norm,
                area,
                chord_fraction: None,
                span_fraction: None,
            }],
            None,
        )
    }

    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn len(&self) -> usize {
        self.panels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    pub fn panel(&self, id: usize) -> Result<&Panel> {
        self.panels.get(id).ok_or(Error::UnknownPanel(id))
    }

    pub fn params(&self) -> Option<&FanParams> {
        self.params.as_ref()
    }

    /// Identifier that binds pressure fields to this exact panel set.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn blade_count(&self) -> usize {
        self.panels
            .iter()
            .filter_map(|p| p.blade_index)
            .max()
            .map_or(0, |b| b + 1)
    }

    pub fn patch_area(&self, patch: Patch) -> f64 {
        self.panels
            .iter()
            .filter(|p| p.patch == patch)
            .map(|p| p.area)
            .sum()
    }

    pub fn total_area(&self) -> f64 {
        self.panels.iter().map(|p| p.area).sum()
    }

    /// Largest panel distance from the rotation axis.
    pub fn max_radius(&self) -> f64 {
        self.panels.iter().map(Panel::radius).fold(0.0, f64::max)
    }

    /// Axial extent `(z_min, z_max)` of the panel centres.
    pub fn axial_extent(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in &self.panels {
            lo = lo.min(p.center.z);
            hi = hi.max(p.center.z);
        }
        if let Some(params) = &self.params {
            lo = lo.min(0.0);
            hi = hi.max(params.inlet_blade_height());
        }
        (lo, hi)
    }

    /// Whether `x` lies in the cylinder swept by the rotating surface.
    pub fn swept_volume_contains(&self, x: &Vector3<f64>) -> bool {
        let r_max = match &self.params {
            Some(p) => p.outer_radius().max(self.max_radius()),
            None => self.max_radius(),
        };
        let (z_lo, z_hi) = self.axial_extent();
        let r = x.xy().norm();
        let on_panel = self.panels.iter().any(|p| (p.center - x).norm() < 1e-12);
        on_panel || (r <= r_max && x.z >= z_lo && x.z <= z_hi && r_max > 0.0)
    }

    pub fn panel_state(
        &self,
        kin: &RotationKinematics,
        panel_id: usize,
        t: f64,
    ) -> Result<PanelState> {
        if !t.is_finite() {
            return Err(Error::InvalidInput(format!("time must be finite, got {t}")));
        }
        let p = self.panel(panel_id)?;
        Ok(kin.state_of(&p.center, &p.normal, t))
    }
}

/// Free-function form of [`SurfaceMesh::panel_state`].
pub fn panel_state(
    mesh: &SurfaceMesh,
    kin: &RotationKinematics,
    panel_id: usize,
    t: f64,
) -> Result<PanelState> {
    mesh.panel_state(kin, panel_id, t)
}

fn fingerprint(panels: &[Panel]) -> u64 {
    let mut h = DefaultHasher::new();
    panels.len().hash(&mut h);
    for p in panels {
        p.patch.hash(&mut h);
        p.blade_index.hash(&mut h);
        for v in p.center.iter().chain(p.normal.iter()) {
            v.to_bits().hash(&mut h);
        }
        p.area.to_bits().hash(&mut h);
    }
    h.finish()
}
