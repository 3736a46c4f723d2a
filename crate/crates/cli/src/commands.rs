//! One function per subcommand. Each reads its inputs, runs one pipeline stage
//! and writes its artifacts.

use std::path::{Path, PathBuf};

use fanoise_core::fwh::{loading_noise_with, read_signal_csv, write_signal_csv, SignalMetadata};
use fanoise_core::geom::{
    build_fan_geometry, read_geometry_csv, write_geometry_csv, RotationKinematics, SamplingPlan,
    SurfaceMesh,
};
use fanoise_core::sources::{
    read_pressure_csv, synth_baseline, synth_modulated, write_pressure_csv, SurfacePressureField,
};
use fanoise_core::spectra::{
    detect_tones, psd, read_spectrum_csv, surface_band_map, write_spectrum_csv, Band, ToneGrid,
    ToneLabel, ToneReport,
};

use crate::config::{RunConfig, SourceConfig};
use crate::error::CliError;

pub fn cmd_geom(config: &RunConfig, out: &Path) -> Result<SurfaceMesh, CliError> {
    let mesh = build_fan_geometry(&config.geometry)?;
    write_geometry_csv(&mesh, out)?;
    log::info!("wrote {} panels to {}", mesh.len(), out.display());
    Ok(mesh)
}

fn load_mesh(config: &RunConfig, path: &Path) -> Result<SurfaceMesh, CliError> {
    let mesh = read_geometry_csv(path)?;
    if mesh.params().is_some_and(|p| *p != config.geometry) {
        log::warn!(
            "{} was built from different fan parameters than the config",
            path.display()
        );
    }
    Ok(mesh)
}

pub fn cmd_synth(
    config: &RunConfig,
    mesh_path: &Path,
    out: &Path,
) -> Result<SurfacePressureField, CliError> {
    let mesh = load_mesh(config, mesh_path)?;
    let kin = RotationKinematics::from_params(&config.geometry);
    let field = match &config.source {
        SourceConfig::Baseline { model } => {
            synth_baseline(&mesh, &kin, model, &config.sampling_plan()?)?
        }
        SourceConfig::Modulated { model, modulation } => {
            synth_modulated(&mesh, &kin, model, modulation, &config.sampling_plan()?)?
        }
        SourceConfig::Ingest { pressure } => read_pressure_csv(pressure, &mesh)?,
    };
    write_pressure_csv(&field, out)?;
    log::info!(
        "wrote {} samples x {} panels to {}",
        field.n_samples(),
        field.n_panels(),
        out.display()
    );
    Ok(field)
}

/// Observer signal path for microphone `name` inside `dir`.
pub fn signal_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("mic_{name}.csv"))
}

pub fn cmd_solve(
    config: &RunConfig,
    mesh_path: &Path,
    pressure_path: &Path,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let mesh = load_mesh(config, mesh_path)?;
    let field = read_pressure_csv(pressure_path, &mesh)?;
    let kin = RotationKinematics::from_params(&config.geometry);
    let fs = field.sample_rate();
    let plan = SamplingPlan::new(1.0 / fs, 1, field.n_samples() as f64 / fs)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let options = config.solver.options();
    let mut written = Vec::new();
    for observer in &config.observers().observers {
        let signal = loading_noise_with(
            &field,
            &mesh,
            &kin,
            &observer.position(),
            &config.medium,
            &plan,
            &options,
        )?;
        let meta = SignalMetadata {
            observer: Some((observer.name.clone(), observer.position)),
            medium: Some(config.medium),
        };
        let path = signal_path(out_dir, &observer.name);
        write_signal_csv(&signal, &meta, &path)?;
        log::info!(
            "{}: {} samples, rms {:.4e} Pa",
            path.display(),
            signal.len(),
            signal.without_transient().rms()
        );
        written.push(path);
    }
    Ok(written)
}

pub fn cmd_spectrum(config: &RunConfig, signal_path: &Path, out: &Path) -> Result<(), CliError> {
    let signal = read_signal_csv(signal_path)?.without_transient();
    let signal = if config.spectra.synchronous_trim {
        signal.synchronous_trim(config.source_period(), config.spectra.n_segments)
    } else {
        signal
    };
    let spec = psd(&signal, &config.psd_options())?;
    write_spectrum_csv(&spec, out)?;
    log::info!(
        "{} bins, df = {:.4} Hz, from {} samples",
        spec.len(),
        spec.bin_width(),
        signal.len()
    );
    Ok(())
}

pub fn cmd_tones(
    config: &RunConfig,
    spectrum_path: &Path,
    out: &Path,
) -> Result<ToneReport, CliError> {
    let spec = read_spectrum_csv(spectrum_path)?;
    let grid = ToneGrid::new(
        config.geometry.shaft_frequency(),
        config.geometry.blade_count_z,
        config.spectra.grid_divisor,
    )?;
    let report = detect_tones(&spec, &grid, config.spectra.threshold_db)?;
    report.write(out)?;
    log::info!(
        "{} tones above median + {} dB",
        report.tones.len(),
        report.threshold_db
    );
    for tone in report.tones.iter().filter(|t| t.label != ToneLabel::Other) {
        log::info!(
            "{:>10.4} Hz {:>8.2} dB {}",
            tone.freq_hz,
            tone.spl_db,
            tone.label
        );
    }
    Ok(report)
}

pub fn cmd_surfmap(
    config: &RunConfig,
    mesh_path: &Path,
    pressure_path: &Path,
    band: Band,
    out: &Path,
) -> Result<(), CliError> {
    let mesh = load_mesh(config, mesh_path)?;
    let field = read_pressure_csv(pressure_path, &mesh)?;
    let field = if config.spectra.synchronous_trim {
        field.synchronous_trim(config.source_period(), config.spectra.n_segments)
    } else {
        field
    };
    let map = surface_band_map(&field, &mesh, band, &config.psd_options())?;
    map.write_csv(out)?;
    log::info!(
        "band {:.3} +/- {:.3} Hz: max {:.2} dB",
        band.center,
        0.5 * band.width,
        map.max()
    );
    Ok(())
}
