use std::f64::consts::PI;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::field::SurfacePressureField;
use super::profile::Profile;
use crate::error::{Error, Result};
use crate::geom::{BladeSide, Panel, Patch, RotationKinematics, SamplingPlan, SurfaceMesh};

/// Steady blade loading in the rotating frame.
///
/// Profiles give magnitudes; pressure-side panels are loaded positively and
/// suction-side panels negatively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BaselineLoadingModel {
    pub peak_pressure: f64,
    pub pressure_side: Profile,
    pub suction_side: Profile,
    pub spanwise: Profile,
    /// Standard deviation of white jitter added to blade panels, Pa.
    pub jitter_amplitude: f64,
    pub seed: u64,
    pub shroud_pressure: f64,
    pub backplate_pressure: f64,
}

impl Default for BaselineLoadingModel {
    fn default() -> Self {
        Self {
            peak_pressure: 300.0,
            pressure_side: Profile::Linear {
                start: 1.0,
                end: 0.4,
            },
            suction_side: Profile::Linear {
                start: 0.8,
                end: 0.3,
            },
            spanwise: Profile::constant(1.0),
            jitter_amplitude: 0.0,
            seed: 0,
            shroud_pressure: 0.0,
            backplate_pressure: 0.0,
        }
    }
}

impl BaselineLoadingModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.peak_pressure.is_finite() && self.peak_pressure >= 0.0) {
            return Err(Error::Config(format!(
                "peak_pressure must be >= 0, got {}",
                self.peak_pressure
            )));
        }
        if !(self.jitter_amplitude.is_finite() && self.jitter_amplitude >= 0.0) {
            return Err(Error::Config("jitter_amplitude must be >= 0".into()));
        }
        if !(self.shroud_pressure.is_finite() && self.backplate_pressure.is_finite()) {
            return Err(Error::Config(
                "shroud/backplate pressures must be finite".into(),
            ));
        }
        self.pressure_side.validate()?;
        self.suction_side.validate()?;
        self.spanwise.validate()
    }

    /// Steady pressure on `panel`.
    pub fn steady_pressure(&self, panel: &Panel) -> Result<f64> {
        match panel.patch {
            Patch::Shroud => Ok(self.shroud_pressure),
            Patch::Backplate => Ok(self.backplate_pressure),
            Patch::Blade => {
                let (s, eta, side) = blade_coordinates(panel)?;
                let chord = match side {
                    BladeSide::Pressure => self.pressure_side.eval(s),
                    BladeSide::Suction => -self.suction_side.eval(s),
                };
                Ok(self.peak_pressure * chord * self.spanwise.eval(eta))
            }
        }
    }
}

fn blade_coordinates(panel: &Panel) -> Result<(f64, f64, BladeSide)> {
    match (panel.chord_fraction, panel.span_fraction, panel.side) {
        (Some(s), Some(eta), Some(side)) => Ok((s, eta, side)),
        _ => Err(Error::InvalidInput(format!(
            "blade panel {} lacks chord/span coordinates or side information",
            panel.id
        ))),
    }
}

/// Time shape of the travelling modulation as a function of its phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvelopeShape {
    /// `cos(phase)`.
    Cosine,
    /// `exp(sharpness (cos(phase) - 1))`: a spot concentrated on one blade at a time.
    Spot { sharpness: f64 },
}

impl EnvelopeShape {
    pub fn eval(self, phase: f64) -> f64 {
        match self {
            EnvelopeShape::Cosine => phase.cos(),
            EnvelopeShape::Spot { sharpness } => (sharpness * (phase.cos() - 1.0)).exp(),
        }
    }

    /// `(min, max)` over a full cycle.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            EnvelopeShape::Cosine => (-1.0, 1.0),
            EnvelopeShape::Spot { sharpness } => ((-2.0 * sharpness).exp(), 1.0),
        }
    }
}

/// Recirculation spot that visits the blades in sequence and returns to the
/// same blade after `period_multiplier` rotation periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RecirculationModulation {
    /// Relative modulation depth; `None` calibrates it to `calibration_target` on the mesh.
    pub depth: Option<f64>,
    /// Peak-to-peak pressure swing at the trailing-edge/shroud corner used for calibration, Pa.
    pub calibration_target: f64,
    pub period_multiplier: f64,
    /// +1: the spot moves toward increasing blade index (counterclockwise about +z).
    pub direction: i8,
    pub chord_exponent: f64,
    pub span_exponent: f64,
    pub initial_phase: f64,
    pub shape: EnvelopeShape,
    /// Blade panels with `weight(s, eta)` at or above this form the hot region.
    pub region_weight: f64,
}

impl Default for RecirculationModulation {
    fn default() -> Self {
        Self {
            depth: None,
            calibration_target: 70.0,
            period_multiplier: 4.0,
            direction: -1,
            chord_exponent: 3.0,
            span_exponent: 3.0,
            initial_phase: 0.0,
            shape: EnvelopeShape::Cosine,
            region_weight: 0.1,
        }
    }
}

impl RecirculationModulation {
    pub fn validate(&self) -> Result<()> {
        if let Some(eps) = self.depth {
            if !(eps.is_finite() && eps >= 0.0) {
                return Err(Error::Config(format!(
                    "modulation depth must be >= 0, got {eps}"
                )));
            }
        }
        if !(self.period_multiplier.is_finite() && self.period_multiplier > 0.0) {
            return Err(Error::Config("period_multiplier must be positive".into()));
        }
        if self.direction != 1 && self.direction != -1 {
            return Err(Error::Config("direction must be +1 or -1".into()));
        }
        if !(self.chord_exponent >= 0.0 && self.span_exponent >= 0.0) {
            return Err(Error::Config("localisation exponents must be >= 0".into()));
        }
        if !(self.calibration_target.is_finite() && self.calibration_target >= 0.0) {
            return Err(Error::Config("calibration_target must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.region_weight) {
            return Err(Error::Config("region_weight must lie in [0, 1]".into()));
        }
        if let EnvelopeShape::Spot { sharpness } = self.shape {
            if !(sharpness.is_finite() && sharpness > 0.0) {
                return Err(Error::Config("spot sharpness must be positive".into()));
            }
        }
        Ok(())
    }

    /// Localisation weight `s^q_s eta^q_eta`.
    pub fn weight(&self, s: f64, eta: f64) -> f64 {
        s.powf(self.chord_exponent) * eta.powf(self.span_exponent)
    }

    /// True for blade panels inside the configured high-(s, eta) region.
    pub fn in_region(&self, panel: &Panel) -> bool {
        match (panel.patch, panel.chord_fraction, panel.span_fraction) {
            (Patch::Blade, Some(s), Some(eta)) => self.weight(s, eta) >= self.region_weight,
            _ => false,
        }
    }

    /// Envelope phase of blade `blade` at time `t`.
    pub fn phase(&self, t: f64, blade: usize, blade_count: usize, rotation_period: f64) -> f64 {
        2.0 * PI * t / (self.period_multiplier * rotation_period)
            - self.direction as f64 * 2.0 * PI * blade as f64 / blade_count as f64
            + self.initial_phase
    }

    /// Multiplicative envelope `1 + eps w(s, eta) g(phase)`.
    #[allow(clippy::too_many_arguments)]
    pub fn envelope(
        &self,
        depth: f64,
        t: f64,
        blade: usize,
        blade_count: usize,
        rotation_period: f64,
        s: f64,
        eta: f64,
    ) -> f64 {
        let phase = self.phase(t, blade, blade_count, rotation_period);
        1.0 + depth * self.weight(s, eta) * self.shape.eval(phase)
    }

    /// The blade-0 pressure-side panel nearest the trailing-edge/shroud corner.
    pub fn reference_panel<'a>(&self, mesh: &'a SurfaceMesh) -> Result<&'a Panel> {
        mesh.panels()
            .iter()
            .filter(|p| p.blade_index == Some(0) && p.side == Some(BladeSide::Pressure))
            .filter(|p| p.chord_fraction.is_some() && p.span_fraction.is_some())
            .max_by(|a, b| {
                let ka = (a.chord_fraction.unwrap(), a.span_fraction.unwrap());
                let kb = (b.chord_fraction.unwrap(), b.span_fraction.unwrap());
                ka.partial_cmp(&kb).expect("finite coordinates")
            })
            .ok_or_else(|| Error::InvalidInput("mesh has no pressure-side blade panels".into()))
    }

    /// Depth that makes the reference panel's pressure swing equal `calibration_target`.
    pub fn calibrate_depth(&self, mesh: &SurfaceMesh, model: &BaselineLoadingModel) -> Result<f64> {
        let panel = self.reference_panel(mesh)?;
        let (s, eta, _) = blade_coordinates(panel)?;
        let base = model.steady_pressure(panel)?.abs();
        let (lo, hi) = self.shape.bounds();
        let swing_per_depth = base * self.weight(s, eta) * (hi - lo);
        if swing_per_depth <= 0.0 {
            return Err(Error::Config(
                "cannot calibrate modulation depth: reference panel carries no modulated load"
                    .into(),
            ));
        }
        Ok(self.calibration_target / swing_per_depth)
    }

    pub fn resolve_depth(&self, mesh: &SurfaceMesh, model: &BaselineLoadingModel) -> Result<f64> {
        match self.depth {
            Some(eps) => Ok(eps),
            None => self.calibrate_depth(mesh, model),
        }
    }
}

/// Steady rotating-frame loading on identical blades.
pub fn synth_baseline(
    mesh: &SurfaceMesh,
    kin: &RotationKinematics,
    model: &BaselineLoadingModel,
    plan: &SamplingPlan,
) -> Result<SurfacePressureField> {
    synthesize(mesh, kin, model, None, plan)
}

/// Baseline loading multiplied by the travelling recirculation envelope.
pub fn synth_modulated(
    mesh: &SurfaceMesh,
    kin: &RotationKinematics,
    model: &BaselineLoadingModel,
    modulation: &RecirculationModulation,
    plan: &SamplingPlan,
) -> Result<SurfacePressureField> {
    synthesize(mesh, kin, model, Some(modulation), plan)
}

fn synthesize(
    mesh: &SurfaceMesh,
    kin: &RotationKinematics,
    model: &BaselineLoadingModel,
    modulation: Option<&RecirculationModulation>,
    plan: &SamplingPlan,
) -> Result<SurfacePressureField> {
    model.validate()?;
    plan.validate()?;
    let n_samples = plan.sample_count();
    if n_samples < 2 {
        return Err(Error::InvalidInput(format!(
            "sampling plan yields {n_samples} samples; at least 2 are needed"
        )));
    }
    if let Some(params) = mesh.params() {
        plan.resolves(2.0 * params.blade_passing_frequency());
    }
    let fs = plan.sample_rate();
    let steady: Vec<f64> = mesh
        .panels()
        .iter()
        .map(|p| model.steady_pressure(p))
        .collect::<Result<_>>()?;

    let mut pressures = Array2::from_shape_fn((n_samples, mesh.len()), |(_, j)| steady[j]);

    if let Some(modulation) = modulation {
        modulation.validate()?;
        if kin.is_stationary() {
            return Err(Error::InvalidInput(
                "modulation needs a rotating fan".into(),
            ));
        }
        let depth = modulation.resolve_depth(mesh, model)?;
        let blade_count = mesh.blade_count();
        let period = kin.period();
        let cycle = whole_samples(modulation.period_multiplier * period, fs);
        let (g_lo, _) = modulation.shape.bounds();
        let mut flips = 0usize;
        for panel in mesh.panels().iter().filter(|p| p.patch == Patch::Blade) {
            let (s, eta, _) = blade_coordinates(panel)?;
            let blade = panel.blade_index.unwrap_or(0);
            if 1.0 + depth * modulation.weight(s, eta) * g_lo < 0.0 && steady[panel.id] != 0.0 {
                flips += 1;
            }
            let mut column = pressures.column_mut(panel.id);
            for (i, p) in column.iter_mut().enumerate() {
                let t = cycle.map_or(i, |m| i % m) as f64 / fs;
                *p *= modulation.envelope(depth, t, blade, blade_count, period, s, eta);
            }
        }
        if flips > 0 {
            log::warn!("modulation depth {depth:.4} flips the pressure sign on {flips} panels");
        }
    }

    if model.jitter_amplitude > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
        let normal = Normal::new(0.0, model.jitter_amplitude)
            .map_err(|e| Error::Config(format!("jitter: {e}")))?;
        let blades: Vec<usize> = mesh
            .panels()
            .iter()
            .filter(|p| p.patch == Patch::Blade)
            .map(|p| p.id)
            .collect();
        for mut row in pressures.rows_mut() {
            for &j in &blades {
                row[j] += normal.sample(&mut rng);
            }
        }
    }

    SurfacePressureField::new(fs, 0.0, pressures, mesh)
}

/// Number of samples in `period` when it is a whole number, so that phases can be
/// taken from the sample index and repeat bit for bit.
pub(crate) fn whole_samples(period: f64, sample_rate: f64) -> Option<usize> {
    let n = period * sample_rate;
    let m = n.round();
    (n.is_finite() && m >= 1.0 && (n - m).abs() <= 1e-9 * m).then_some(m as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{build_fan_geometry, FanParams};

    fn small_fan() -> FanParams {
        FanParams {
            chordwise_panels: 4,
            spanwise_panels: 3,
            azimuthal_panels: 14,
            ..FanParams::reference_fan()
        }
    }

    fn setup() -> (SurfaceMesh, RotationKinematics, SamplingPlan) {
        let params = small_fan();
        let mesh = build_fan_geometry(&params).unwrap();
        let kin = RotationKinematics::from_params(&params);
        let plan = SamplingPlan::synchronous(&params, 70, 4.0).unwrap();
        (mesh, kin, plan)
    }

    #[test]
    fn zero_peak_gives_zero_field() {
        let (mesh, kin, plan) = setup();
        let model = BaselineLoadingModel {
            peak_pressure: 0.0,
            ..Default::default()
        };
        let field = synth_baseline(&mesh, &kin, &model, &plan).unwrap();
        assert!(field.pressures().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn baseline_is_steady_and_signed_by_side() {
        let (mesh, kin, plan) = setup();
        let field = synth_baseline(&mesh, &kin, &BaselineLoadingModel::default(), &plan).unwrap();
        for p in mesh.panels() {
            let h = field.panel_history(p.id);
            assert!(h.iter().all(|&v| v == h[0]));
            match (p.patch, p.side) {
                (Patch::Blade, Some(BladeSide::Pressure)) => assert!(h[0] > 0.0),
                (Patch::Blade, Some(BladeSide::Suction)) => assert!(h[0] < 0.0),
                _ => assert_eq!(h[0], 0.0),
            }
        }
    }

    #[test]
    fn zero_depth_matches_baseline_bitwise() {
        let (mesh, kin, plan) = setup();
        let model = BaselineLoadingModel {
            jitter_amplitude: 2.0,
            seed: 11,
            ..Default::default()
        };
        let base = synth_baseline(&mesh, &kin, &model, &plan).unwrap();
        let modulation = RecirculationModulation {
            depth: Some(0.0),
            ..Default::default()
        };
        let modded = synth_modulated(&mesh, &kin, &model, &modulation, &plan).unwrap();
        assert_eq!(base, modded);
    }

    #[test]
    fn envelope_period_is_four_revolutions() {
        let params = FanParams::reference_fan();
        let m = RecirculationModulation::default();
        let t = params.rotation_period();
        let envelope_period = m.period_multiplier * t;
        assert!((envelope_period - 0.0857).abs() < 1e-4);
        assert!((1.0 / envelope_period - 11.67).abs() < 0.01);
    }

    #[test]
    fn calibration_hits_seventy_pascal_swing() {
        let (mesh, kin, _) = setup();
        let params = small_fan();
        let model = BaselineLoadingModel::default();
        for shape in [
            EnvelopeShape::Cosine,
            EnvelopeShape::Spot { sharpness: 20.0 },
        ] {
            let modulation = RecirculationModulation {
                shape,
                ..Default::default()
            };
            // Fine sampling over exactly one envelope period.
            let plan =
                SamplingPlan::synchronous(&params, 2000, modulation.period_multiplier).unwrap();
            let field = synth_modulated(&mesh, &kin, &model, &modulation, &plan).unwrap();
            let panel = modulation.reference_panel(&mesh).unwrap();
            let h = field.panel_history(panel.id);
            let hi = h.iter().cloned().fold(f64::MIN, f64::max);
            let lo = h.iter().cloned().fold(f64::MAX, f64::min);
            assert!(
                ((hi - lo) - 70.0).abs() < 0.05,
                "{shape:?}: swing {}",
                hi - lo
            );
        }
    }

    #[test]
    fn blades_without_coordinates_are_rejected() {
        let mesh =
            SurfaceMesh::single_panel(nalgebra::Vector3::x(), nalgebra::Vector3::y(), 1.0).unwrap();
        let plan = SamplingPlan::new(1e-3, 1, 0.01).unwrap();
        let err = synth_baseline(
            &mesh,
            &RotationKinematics::stationary(),
            &Default::default(),
            &plan,
        );
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }
}
