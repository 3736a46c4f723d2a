//! Fan geometry, rigid-rotation kinematics and closed-form design checks.

mod build;
mod design;
mod io;
mod kinematics;
mod mesh;
mod params;

pub use build::build_fan_geometry;
pub use design::{
    blade_passing_frequency, compactness, duct_reynolds, sampling_plan, tip_mach, turbulence_bc,
    Compactness, SamplingPlan, TurbulenceInlet, AIR_KINEMATIC_VISCOSITY, COMPACTNESS_THRESHOLD,
    QUOTED_LENGTH_SCALE,
};
pub use io::{
    geometry_to_csv, parse_geometry_csv, read_geometry_csv, write_geometry_csv, GEOMETRY_HEADER,
};
pub use kinematics::{PanelState, RotationKinematics};
pub use mesh::{panel_state, BladeSide, Panel, Patch, SurfaceMesh};
pub use params::{FanParams, RotationSense};
