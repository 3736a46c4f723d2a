use std::f64::consts::PI;

use fanoise_core::fwh::*;
use fanoise_core::geom::*;
use fanoise_core::sources::*;
use fanoise_core::spectra::*;
use ndarray::Array2;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

#[test]
fn white_noise_matches_a_direct_dft() {
    let n = 512;
    let fs = 2000.0;
    let x = noise(n, 3);
    let signal = AcousticSignal::new(fs, 0.0, x.clone()).unwrap();
    let spec = psd(&signal, &PsdOptions::rectangular_single()).unwrap();
    assert!(parseval_check(&signal, &spec) <= 1e-6);

    // Two-sided DFT by direct summation of the mean-removed record.
    let mean = x.iter().sum::<f64>() / n as f64;
    let power: Vec<f64> = (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, v) in x.iter().enumerate() {
                let a = -2.0 * PI * (k * i) as f64 / n as f64;
                re += (v - mean) * a.cos();
                im += (v - mean) * a.sin();
            }
            re * re + im * im
        })
        .collect();
    let variance = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    let two_sided: f64 = power.iter().sum::<f64>() / (n * n) as f64;
    assert!((two_sided - variance).abs() <= 1e-9 * variance);
    let df = fs / n as f64;
    assert!((spec.bin_width() - df).abs() < 1e-12);
    for (k, pk) in power.iter().enumerate().take(n / 2).skip(1) {
        let expected = 2.0 * pk / (n as f64 * fs);
        assert!(
            (spec.psd[k] - expected).abs() <= 1e-9 * expected.max(1e-12),
            "bin {k}"
        );
    }
    let total: f64 = spec.psd.iter().map(|p| p * df).sum();
    assert!((total - variance).abs() <= 1e-6 * variance);
}

#[test]
fn pure_sine_and_zero_signal_parseval() {
    let fs = 1000.0;
    let x: Vec<f64> = (0..1000)
        .map(|i| 1.3 * (2.0 * PI * 50.0 * i as f64 / fs).sin())
        .collect();
    let s = AcousticSignal::new(fs, 0.0, x).unwrap();
    let spec = psd(&s, &PsdOptions::rectangular_single()).unwrap();
    assert!(parseval_check(&s, &spec) <= 1e-6);
    let band: f64 = spec.psd.iter().map(|p| p * spec.bin_width()).sum();
    assert!((band - 1.3 * 1.3 / 2.0).abs() < 1e-9);

    let zero = AcousticSignal::new(fs, 0.0, vec![0.0; 64]).unwrap();
    let spec = psd(&zero, &PsdOptions::rectangular_single()).unwrap();
    assert_eq!(parseval_check(&zero, &spec), 0.0);
    assert!(spec.spl.iter().all(|&l| l == SPL_FLOOR_DB));
}

#[test]
fn short_signals_and_bad_overlap_are_rejected() {
    let s = AcousticSignal::new(100.0, 0.0, vec![1.0; 5]).unwrap();
    let opts = PsdOptions {
        n_segments: 3,
        ..PsdOptions::default()
    };
    assert!(psd(&s, &opts).is_err());
    let s = AcousticSignal::new(100.0, 0.0, vec![1.0; 500]).unwrap();
    for overlap in [-0.1, 1.0] {
        assert!(psd(&s, &PsdOptions { overlap, ..opts }).is_err());
    }
}

fn tiny_mesh(n: usize) -> SurfaceMesh {
    let template =
        SurfaceMesh::single_panel(fanoise_core::Vector3::x(), fanoise_core::Vector3::z(), 1.0)
            .unwrap();
    let panels = (0..n)
        .map(|id| Panel {
            id,
            center: fanoise_core::Vector3::new(1.0, id as f64, 0.0),
            ..template.panels()[0].clone()
        })
        .collect();
    SurfaceMesh::new(panels, None).unwrap()
}

#[test]
fn identical_histories_give_a_uniform_map() {
    let mesh = tiny_mesh(6);
    let fs = 1000.0;
    let p = Array2::from_shape_fn((3000, 6), |(i, _)| {
        2.0 * (2.0 * PI * 100.0 * i as f64 / fs).sin()
    });
    let field = SurfacePressureField::new(fs, 0.0, p, &mesh).unwrap();
    let band = Band {
        center: 100.0,
        width: 10.0,
    };
    let map = surface_band_map(&field, &mesh, band, &PsdOptions::default()).unwrap();
    assert_eq!(map.spl.len(), 6);
    let lo = map.spl.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(map.max() - lo < 1e-9);
    // Hann leakage stays inside the band: the level is the tone power 2 Pa^2.
    let expected = 10.0 * (2.0 / 4e-10f64).log10();
    assert!(
        (map.max() - expected).abs() < 0.01,
        "{} vs {expected}",
        map.max()
    );

    let outside = Band {
        center: 499.0,
        width: 10.0,
    };
    assert!(surface_band_map(&field, &mesh, outside, &PsdOptions::default()).is_err());
}

fn spot(depth: Option<f64>) -> RecirculationModulation {
    RecirculationModulation {
        depth,
        shape: EnvelopeShape::Spot { sharpness: 200.0 },
        ..Default::default()
    }
}

fn small_fan() -> FanParams {
    FanParams {
        chordwise_panels: 4,
        spanwise_panels: 3,
        azimuthal_panels: 14,
        ..FanParams::reference_fan()
    }
}

#[test]
fn deeper_modulation_raises_the_bpf_map() {
    let params = small_fan();
    let mesh = build_fan_geometry(&params).unwrap();
    let kin = RotationKinematics::from_params(&params);
    let plan = SamplingPlan::synchronous(&params, 140, 24.0).unwrap();
    let band = Band {
        center: params.blade_passing_frequency(),
        width: params.shaft_frequency() / 4.0,
    };
    let levels: Vec<f64> = [0.05, 0.1, 0.2]
        .iter()
        .map(|&eps| {
            let field = synth_modulated(
                &mesh,
                &kin,
                &BaselineLoadingModel::default(),
                &spot(Some(eps)),
                &plan,
            )
            .unwrap()
            .synchronous_trim(4.0 * params.rotation_period(), 3);
            surface_band_map(&field, &mesh, band, &PsdOptions::default())
                .unwrap()
                .max()
        })
        .collect();
    assert!(levels.windows(2).all(|w| w[1] > w[0]), "{levels:?}");
}

#[test]
fn modulated_fan_tones_lie_on_the_quarter_shaft_grid() {
    let params = small_fan();
    let mesh = build_fan_geometry(&params).unwrap();
    let kin = RotationKinematics::from_params(&params);
    let plan = SamplingPlan::synchronous(&params, 140, 40.0).unwrap();
    let field = synth_modulated(
        &mesh,
        &kin,
        &BaselineLoadingModel::default(),
        &spot(None),
        &plan,
    )
    .unwrap();
    let observer = ObserverSetup::default_for(&params).observers[0].position();
    let s = loading_noise(&field, &mesh, &kin, &observer, &Medium::default(), &plan)
        .unwrap()
        .without_transient()
        .synchronous_trim(4.0 * params.rotation_period(), 3);
    let spec = psd(&s, &PsdOptions::default()).unwrap();
    let grid = ToneGrid::new(params.shaft_frequency(), 7, 4).unwrap();
    let report = detect_tones(&spec, &grid, 10.0).unwrap();
    let step = grid.step();
    for t in &report.tones {
        let k = (t.freq_hz / step).round();
        assert!(
            (t.freq_hz - k * step).abs() <= 0.5 * spec.bin_width(),
            "{t:?}"
        );
        assert_eq!(t.grid_index, Some(k as u64));
    }
    assert!(report.find(ToneLabel::QuarterShaft).is_some());
    assert!(report.find(ToneLabel::QuarterBpf0).is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dc_offset_only_moves_the_zero_bin(seed in 0u64..10_000, offset in -1e3f64..1e3, segs in 1usize..4) {
        let x = noise(600, seed);
        let shifted: Vec<f64> = x.iter().map(|v| v + offset).collect();
        let opts = PsdOptions { n_segments: segs, ..PsdOptions::default() };
        let a = psd(&AcousticSignal::new(100.0, 0.0, x).unwrap(), &opts).unwrap();
        let b = psd(&AcousticSignal::new(100.0, 0.0, shifted).unwrap(), &opts).unwrap();
        let scale = a.psd.iter().copied().fold(0.0, f64::max);
        for k in 1..a.len() {
            prop_assert!((a.psd[k] - b.psd[k]).abs() <= 1e-9 * scale, "bin {}", k);
        }
    }

    #[test]
    fn tone_detection_ignores_uniform_scaling(seed in 0u64..10_000, exp in -8.0f64..8.0) {
        let fs = 800.0;
        let mut x = noise(2400, seed);
        for (i, v) in x.iter_mut().enumerate() {
            let t = i as f64 / fs;
            *v = 0.05 * *v + (2.0 * PI * 50.0 * t).sin() + 0.3 * (2.0 * PI * 125.0 * t).sin();
        }
        let spec = psd(&AcousticSignal::new(fs, 0.0, x).unwrap(), &PsdOptions::default()).unwrap();
        let grid = ToneGrid::new(50.0, 1, 4).unwrap();
        let base = detect_tones(&spec, &grid, 10.0).unwrap().frequencies();
        let scaled = detect_tones(&spec.scaled(10f64.powf(exp)), &grid, 10.0).unwrap().frequencies();
        prop_assert!(!base.is_empty());
        prop_assert_eq!(base, scaled);
    }
}
