//! Surface pressure sources for the acoustic solver.

mod field;
mod ingest;
mod point_force;
mod profile;
mod synth;

pub use field::SurfacePressureField;
pub use ingest::{
    ingest_pressure, parse_pressure_csv, pressure_to_csv, read_pressure_csv, write_pressure_csv,
    TIME_STEP_TOLERANCE,
};
pub use point_force::{
    point_force_signal, ForceFrame, ForceHarmonic, ForceTrajectory, PointForceSource, Trajectory,
};
pub use profile::Profile;
pub(crate) use synth::whole_samples;
pub use synth::{
    synth_baseline, synth_modulated, BaselineLoadingModel, EnvelopeShape, RecirculationModulation,
};
