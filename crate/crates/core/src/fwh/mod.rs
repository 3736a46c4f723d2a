//! Loading (dipole) noise of rotating impermeable panels.
//!
//! Each panel is treated as a compact source. Its contribution is evaluated at
//! every source sample, stamped with the time it reaches the observer, and then
//! resampled onto a uniform observer grid. Reference solutions for a stationary
//! dipole and for an orbiting point force are kept alongside.

mod loading;
mod medium;
mod numerics;
mod oracle;
mod signal;

pub use loading::{
    doppler_bounds, loading_kernel, loading_noise, loading_noise_with, SolverOptions, PANEL_CHUNK,
};
pub use medium::{Chamber, Medium, Observer, ObserverSetup, DEFAULT_MIC_OFFSET};
pub use numerics::{
    derivative, hermite, hermite_eval, pchip_slopes, pchip_slopes_from_steps, Resampling,
};
pub use oracle::{
    compact_dipole_reference, point_force_panel, retarded_time_solve,
    rotating_point_force_reference, RETARDED_TIME_TOLERANCE,
};
pub use signal::{
    parse_signal_csv, read_signal_csv, signal_to_csv, write_signal_csv, AcousticSignal,
    SignalMetadata, TimeGrid, SIGNAL_HEADER,
};
