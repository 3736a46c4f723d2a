//! Spectral estimation, tone labelling and surface source maps.

mod map;
mod psd;
mod tones;

pub use map::{surface_band_map, Band, SurfaceBandMap, MAP_HEADER};
pub use psd::{
    parse_spectrum_csv, parseval_check, psd, psd_samples, read_spectrum_csv, spectrum_to_csv,
    spl_db, write_spectrum_csv, PsdOptions, Spectrum, SpectrumMeta, Window, SPECTRUM_HEADER,
    SPL_FLOOR_DB,
};
pub use tones::{detect_tones, Tone, ToneGrid, ToneLabel, ToneReport};
