//! Shared fixtures for the benchmarks.

use fanoise_core::geom::{
    build_fan_geometry, FanParams, RotationKinematics, SamplingPlan, SurfaceMesh,
};
use fanoise_core::sources::{
    synth_modulated, BaselineLoadingModel, EnvelopeShape, RecirculationModulation,
    SurfacePressureField,
};

/// Reference fan at a reduced panel count, so one solve takes milliseconds.
pub fn coarse_fan() -> FanParams {
    FanParams {
        chordwise_panels: 4,
        spanwise_panels: 3,
        azimuthal_panels: 14,
        ..FanParams::reference_fan()
    }
}

pub struct Fixture {
    pub params: FanParams,
    pub mesh: SurfaceMesh,
    pub kin: RotationKinematics,
    pub plan: SamplingPlan,
    pub field: SurfacePressureField,
}

/// Modulated surface pressures over `revolutions` at 140 samples per revolution.
pub fn modulated(params: FanParams, revolutions: f64) -> Fixture {
    let mesh = build_fan_geometry(&params).expect("valid fan");
    let kin = RotationKinematics::from_params(&params);
    let plan = SamplingPlan::synchronous(&params, 140, revolutions).expect("valid plan");
    let modulation = RecirculationModulation {
        shape: EnvelopeShape::Spot { sharpness: 200.0 },
        ..Default::default()
    };
    let field = synth_modulated(
        &mesh,
        &kin,
        &BaselineLoadingModel::default(),
        &modulation,
        &plan,
    )
    .expect("synthesis");
    Fixture {
        params,
        mesh,
        kin,
        plan,
        field,
    }
}
