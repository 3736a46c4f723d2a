use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::geom::SurfaceMesh;

/// Gauge surface pressure on every panel at a fixed sample rate.
///
/// Rows are samples, columns are panels in panel-id order.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePressureField {
    sample_rate: f64,
    t0: f64,
    pressures: Array2<f64>,
    mesh_fingerprint: u64,
}

impl SurfacePressureField {
    pub fn new(
        sample_rate: f64,
        t0: f64,
        pressures: Array2<f64>,
        mesh: &SurfaceMesh,
    ) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidInput("start time must be finite".into()));
        }
        if pressures.ncols() != mesh.len() {
            return Err(Error::InvalidInput(format!(
                "pressure field has {} panels but the mesh has {}",
                pressures.ncols(),
                mesh.len()
            )));
        }
        if let Some(((i, j), _)) = pressures.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite pressure at sample {i}, panel {j}"
            )));
        }
        Ok(Self {
            sample_rate,
            t0,
            pressures,
            mesh_fingerprint: mesh.fingerprint(),
        })
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn n_samples(&self) -> usize {
        self.pressures.nrows()
    }

    pub fn n_panels(&self) -> usize {
        self.pressures.ncols()
    }

    /// Record length `n_samples / sample_rate`.
    pub fn duration(&self) -> f64 {
        self.n_samples() as f64 / self.sample_rate
    }

    pub fn time(&self, sample: usize) -> f64 {
        self.t0 + sample as f64 / self.sample_rate
    }

    pub fn pressures(&self) -> &Array2<f64> {
        &self.pressures
    }

    pub fn panel_history(&self, panel: usize) -> ArrayView1<'_, f64> {
        self.pressures.column(panel)
    }

    pub fn is_bound_to(&self, mesh: &SurfaceMesh) -> bool {
        self.mesh_fingerprint == mesh.fingerprint() && self.n_panels() == mesh.len()
    }

    pub fn check_bound_to(&self, mesh: &SurfaceMesh) -> Result<()> {
        if self.is_bound_to(mesh) {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "pressure field was not produced for this mesh".into(),
            ))
        }
    }

    /// Keeps the leading whole multiple of `period * n_segments`, so every analysis
    /// segment spans whole source periods. Unchanged when the period is not a whole
    /// number of samples or the field is shorter than one block.
    pub fn synchronous_trim(&self, period: f64, n_segments: usize) -> Self {
        let Some(per) = super::whole_samples(period, self.sample_rate) else {
            return self.clone();
        };
        let block = per * n_segments.max(1);
        let keep = self.n_samples() / block * block;
        if keep == 0 || keep == self.n_samples() {
            return self.clone();
        }
        Self {
            pressures: self.pressures.slice(ndarray::s![..keep, ..]).to_owned(),
            ..self.clone()
        }
    }

    /// `a * self + b * other`, sample by sample.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.pressures.dim() != other.pressures.dim()
            || self.mesh_fingerprint != other.mesh_fingerprint
            || self.sample_rate != other.sample_rate
            || self.t0 != other.t0
        {
            return Err(Error::InvalidInput("fields have different layouts".into()));
        }
        Ok(Self {
            pressures: &self.pressures * a + &other.pressures * b,
            ..self.clone()
        })
    }
}
