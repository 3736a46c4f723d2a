use std::f64::consts::PI;
use std::path::Path;

use fanoise_core::geom::*;
use fanoise_core::sources::*;
use fanoise_core::Error;
use proptest::prelude::*;

fn small_fan() -> FanParams {
    FanParams {
        chordwise_panels: 4,
        spanwise_panels: 3,
        azimuthal_panels: 14,
        ..FanParams::reference_fan()
    }
}

fn setup() -> (FanParams, SurfaceMesh, RotationKinematics, SamplingPlan) {
    let params = small_fan();
    let mesh = build_fan_geometry(&params).unwrap();
    let kin = RotationKinematics::from_params(&params);
    let plan = SamplingPlan::synchronous(&params, 140, 4.0).unwrap();
    (params, mesh, kin, plan)
}

#[test]
fn zero_depth_is_bitwise_baseline() {
    let (_, mesh, kin, plan) = setup();
    let model = BaselineLoadingModel::default();
    let base = synth_baseline(&mesh, &kin, &model, &plan).unwrap();
    for shape in [
        EnvelopeShape::Cosine,
        EnvelopeShape::Spot { sharpness: 200.0 },
    ] {
        let m = RecirculationModulation {
            depth: Some(0.0),
            shape,
            ..Default::default()
        };
        let modulated = synth_modulated(&mesh, &kin, &model, &m, &plan).unwrap();
        assert!(base
            .pressures()
            .iter()
            .zip(modulated.pressures())
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

#[test]
fn calibrated_swing_is_seventy_pascal_at_the_corner() {
    let (_, mesh, kin, plan) = setup();
    let model = BaselineLoadingModel::default();
    let m = RecirculationModulation::default();
    let field = synth_modulated(&mesh, &kin, &model, &m, &plan).unwrap();
    let corner = m.reference_panel(&mesh).unwrap().id;
    let history = field.panel_history(corner);
    let max = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = history.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((max - min - 70.0).abs() < 1e-9, "swing {}", max - min);
    // Blade 0 starts at the crest, so the trough falls half a cycle later, at 2T.
    let per_rev = 140;
    assert_eq!(history.iter().position(|&p| p == min), Some(2 * per_rev));
}

#[test]
fn envelope_fundamental_is_a_quarter_of_the_shaft_frequency() {
    let params = FanParams::reference_fan();
    let m = RecirculationModulation::default();
    let period = m.period_multiplier * params.rotation_period();
    assert!((period - 0.0857).abs() < 1e-4);
    assert!((1.0 / period - 11.67).abs() < 0.01);
}

#[test]
fn baseline_is_steady_and_identical_across_blades() {
    let (params, mesh, kin, plan) = setup();
    let field = synth_baseline(&mesh, &kin, &BaselineLoadingModel::default(), &plan).unwrap();
    let rows = field.pressures();
    assert!(rows.rows().into_iter().all(|r| r == rows.row(0)));
    let z = params.blade_count_z as usize;
    let blade = |b| -> Vec<f64> {
        mesh.panels()
            .iter()
            .filter(|p| p.blade_index == Some(b))
            .map(|p| rows[[0, p.id]])
            .collect()
    };
    for b in 1..z {
        assert_eq!(blade(b), blade(0));
    }
}

#[test]
fn jitter_is_reproducible_from_the_seed() {
    let (_, mesh, kin, plan) = setup();
    let model = BaselineLoadingModel {
        jitter_amplitude: 2.0,
        seed: 11,
        ..Default::default()
    };
    let a = synth_baseline(&mesh, &kin, &model, &plan).unwrap();
    let b = synth_baseline(&mesh, &kin, &model, &plan).unwrap();
    assert_eq!(a, b);
    let other = BaselineLoadingModel { seed: 12, ..model };
    assert_ne!(a, synth_baseline(&mesh, &kin, &other, &plan).unwrap());
}

#[test]
fn ingest_round_trip_is_lossless() {
    let (_, mesh, kin, plan) = setup();
    let m = RecirculationModulation {
        shape: EnvelopeShape::Spot { sharpness: 50.0 },
        ..Default::default()
    };
    let field = synth_modulated(&mesh, &kin, &BaselineLoadingModel::default(), &m, &plan).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.csv");
    let p = dir.path().join("p.csv");
    write_geometry_csv(&mesh, &g).unwrap();
    write_pressure_csv(&field, &p).unwrap();
    let (mesh_back, field_back) = ingest_pressure(&g, &p).unwrap();
    assert_eq!(mesh_back.fingerprint(), mesh.fingerprint());
    assert_eq!(field_back.sample_rate(), field.sample_rate());
    let worst = field
        .pressures()
        .iter()
        .zip(field_back.pressures())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn two_panels_three_samples() {
    let mesh = SurfaceMesh::new(
        vec![
            SurfaceMesh::single_panel(fanoise_core::Vector3::x(), fanoise_core::Vector3::z(), 1.0)
                .unwrap()
                .panels()[0]
                .clone(),
            Panel {
                id: 1,
                center: fanoise_core::Vector3::y(),
                ..SurfaceMesh::single_panel(
                    fanoise_core::Vector3::x(),
                    fanoise_core::Vector3::z(),
                    1.0,
                )
                .unwrap()
                .panels()[0]
                    .clone()
            },
        ],
        None,
    )
    .unwrap();
    let text = "time_s,p_0,p_1\n0,1,2\n0.1,3,4\n0.2,5,6\n";
    let field = parse_pressure_csv(text, Path::new("p.csv"), &mesh).unwrap();
    assert_eq!(field.pressures().dim(), (3, 2));
    assert!((field.sample_rate() - 10.0).abs() < 1e-9);

    let jitter = "time_s,p_0,p_1\n0,1,2\n0.1,3,4\n0.2002,5,6\n";
    match parse_pressure_csv(jitter, Path::new("p.csv"), &mesh) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let unknown = "time_s,p_0,p_7\n0,1,2\n0.1,3,4\n";
    assert!(matches!(
        parse_pressure_csv(unknown, Path::new("p.csv"), &mesh),
        Err(Error::Parse { line: 1, .. })
    ));
}

#[test]
fn orbiting_force_tip_speed() {
    let params = FanParams::reference_fan();
    let kin = RotationKinematics::from_params(&params);
    let src = PointForceSource {
        trajectory: Trajectory::Circular {
            radius: params.outer_radius(),
            angular_speed: kin.angular_speed,
            phase: 0.0,
            height: 0.0,
        },
        frame: ForceFrame::Rotating,
        mean: fanoise_core::Vector3::z(),
        harmonics: Vec::new(),
    };
    // pi d2 n / 60
    assert!((src.speed() - PI * 0.268 * 2800.0 / 60.0).abs() < 1e-12);
    assert!((src.speed() - 39.3).abs() < 0.05);
    let plan = SamplingPlan::synchronous(&params, 36, 1.0).unwrap();
    let traj = point_force_signal(&src, &plan).unwrap();
    assert_eq!(traj.times.len(), 36);
    assert!(traj
        .positions
        .iter()
        .all(|y| (y.xy().norm() - 0.134).abs() < 1e-12));
}

fn blade_panels(mesh: &SurfaceMesh, b: usize) -> Vec<usize> {
    mesh.panels()
        .iter()
        .filter(|p| p.blade_index == Some(b))
        .map(|p| p.id)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn envelope_repeats_after_its_period(
        t in 0.0f64..1.0,
        blade in 0usize..7,
        s in 0.0f64..1.0,
        eta in 0.0f64..1.0,
        m_p in 0.5f64..8.0,
        phi in -PI..PI,
        sharp in prop::option::of(1.0f64..300.0),
        dir in prop::bool::ANY,
    ) {
        let period = FanParams::reference_fan().rotation_period();
        let m = RecirculationModulation {
            period_multiplier: m_p,
            initial_phase: phi,
            direction: if dir { 1 } else { -1 },
            shape: sharp.map_or(EnvelopeShape::Cosine, |k| EnvelopeShape::Spot { sharpness: k }),
            ..Default::default()
        };
        let a = m.envelope(0.5, t, blade, 7, period, s, eta);
        let b = m.envelope(0.5, t + m_p * period, blade, 7, period, s, eta);
        prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn cyclic_relabelling_leaves_the_field_invariant(
        phi in -PI..PI,
        dir in prop::bool::ANY,
        sharp in prop::option::of(5.0f64..200.0),
    ) {
        let (params, mesh, kin, _) = setup();
        let plan = SamplingPlan::synchronous(&params, 28, 4.0).unwrap();
        let z = params.blade_count_z as usize;
        let direction: i8 = if dir { 1 } else { -1 };
        let base = RecirculationModulation {
            depth: Some(0.3),
            initial_phase: phi,
            direction,
            shape: sharp.map_or(EnvelopeShape::Cosine, |k| EnvelopeShape::Spot { sharpness: k }),
            ..Default::default()
        };
        let shifted = RecirculationModulation {
            initial_phase: phi - direction as f64 * 2.0 * PI / z as f64,
            ..base.clone()
        };
        let model = BaselineLoadingModel::default();
        let a = synth_modulated(&mesh, &kin, &model, &base, &plan).unwrap();
        let b = synth_modulated(&mesh, &kin, &model, &shifted, &plan).unwrap();
        // Blade b of the shifted field carries what blade b + 1 carries originally.
        for blade in 0..z {
            let here = blade_panels(&mesh, blade);
            let next = blade_panels(&mesh, (blade + 1) % z);
            for (&i, &j) in here.iter().zip(&next) {
                for (x, y) in b.panel_history(i).iter().zip(a.panel_history(j).iter()) {
                    prop_assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0), "{x} vs {y}");
                }
            }
        }
        for p in mesh.panels().iter().filter(|p| p.blade_index.is_none()) {
            prop_assert_eq!(a.panel_history(p.id), b.panel_history(p.id));
        }
    }
}
