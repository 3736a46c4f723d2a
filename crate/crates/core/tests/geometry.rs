use std::f64::consts::PI;
use std::path::Path;

use approx::assert_relative_eq;
use fanoise_core::geom::*;
use fanoise_core::Vector3;
use proptest::prelude::*;

fn coarse() -> FanParams {
    FanParams {
        chordwise_panels: 4,
        spanwise_panels: 3,
        azimuthal_panels: 14,
        ..FanParams::reference_fan()
    }
}

#[test]
fn reference_fan_has_seven_blades_at_equal_pitch() {
    let params = FanParams::reference_fan();
    let mesh = build_fan_geometry(&params).unwrap();
    assert_eq!(mesh.blade_count(), 7);
    assert_relative_eq!(params.blade_pitch(), 0.8976, epsilon = 1e-4);
    // Matching panels on neighbouring blades differ by one pitch about the axis.
    let first: Vec<&Panel> = mesh
        .panels()
        .iter()
        .filter(|p| p.blade_index == Some(0))
        .collect();
    let second: Vec<&Panel> = mesh
        .panels()
        .iter()
        .filter(|p| p.blade_index == Some(1))
        .collect();
    assert_eq!(first.len(), second.len());
    let kin = RotationKinematics::with_angular_speed(1.0);
    let turn = kin.rotation(params.blade_pitch());
    for (a, b) in first.iter().zip(&second) {
        assert!((turn * a.center - b.center).norm() < 1e-12);
        assert!((turn * a.normal - b.normal).norm() < 1e-12);
    }
}

#[test]
fn mesh_invariants_hold() {
    let mesh = build_fan_geometry(&FanParams::reference_fan()).unwrap();
    for (i, p) in mesh.panels().iter().enumerate() {
        assert_eq!(p.id, i);
        assert!((p.normal.norm() - 1.0).abs() < 1e-9);
        assert!(p.area > 0.0);
    }
    let one_blade: f64 = mesh
        .panels()
        .iter()
        .filter(|p| p.blade_index == Some(0))
        .map(|p| p.area)
        .sum();
    assert_relative_eq!(
        mesh.patch_area(Patch::Blade),
        7.0 * one_blade,
        max_relative = 1e-6
    );
}

#[test]
fn minimal_single_blade_mesh() {
    let params = FanParams {
        blade_count_z: 1,
        chordwise_panels: 1,
        spanwise_panels: 1,
        azimuthal_panels: 3,
        ..FanParams::reference_fan()
    };
    let mesh = build_fan_geometry(&params).unwrap();
    let blades = mesh
        .panels()
        .iter()
        .filter(|p| p.patch == Patch::Blade)
        .count();
    assert_eq!(blades, 2);
    assert!(mesh.panels().iter().any(|p| p.patch == Patch::Shroud));
    assert!(mesh.panels().iter().any(|p| p.patch == Patch::Backplate));
}

#[test]
fn zero_resolution_is_a_configuration_error() {
    let params = FanParams {
        chordwise_panels: 0,
        ..FanParams::reference_fan()
    };
    assert!(matches!(
        build_fan_geometry(&params),
        Err(fanoise_core::Error::Config(_))
    ));
}

#[test]
fn chordwise_refinement_doubles_blade_panels_and_keeps_area() {
    let base = coarse();
    let fine = FanParams {
        chordwise_panels: 2 * base.chordwise_panels,
        ..base.clone()
    };
    let a = build_fan_geometry(&base).unwrap();
    let b = build_fan_geometry(&fine).unwrap();
    let count = |m: &SurfaceMesh| {
        m.panels()
            .iter()
            .filter(|p| p.patch == Patch::Blade)
            .count()
    };
    assert_eq!(count(&b), 2 * count(&a));
    assert_relative_eq!(
        b.patch_area(Patch::Blade),
        a.patch_area(Patch::Blade),
        max_relative = 1e-4
    );
}

#[test]
fn panel_state_examples() {
    let params = FanParams::reference_fan();
    let mesh = build_fan_geometry(&params).unwrap();
    let kin = RotationKinematics::from_params(&params);
    let id = mesh.len() / 3;
    let p0 = mesh.panel_state(&kin, id, 0.0).unwrap();
    assert_eq!(p0.position, mesh.panels()[id].center);
    let p1 = mesh
        .panel_state(&kin, id, params.rotation_period())
        .unwrap();
    assert!((p1.position - p0.position).norm() < 1e-9);
    // 5.95e-5 s is one degree of rotation at 2800 rpm.
    let p2 = mesh.panel_state(&kin, id, 5.95e-5).unwrap();
    let angle = p0.position.xy().angle(&p2.position.xy());
    assert!(
        (angle.to_degrees() - 1.0).abs() < 1e-3,
        "{}",
        angle.to_degrees()
    );
    assert!(matches!(
        mesh.panel_state(&kin, mesh.len(), 0.0),
        Err(fanoise_core::Error::UnknownPanel(_))
    ));
}

#[test]
fn angular_speed_matches_rpm() {
    for sense in [
        RotationSense::ClockwiseFromInlet,
        RotationSense::CounterclockwiseFromInlet,
    ] {
        let kin = RotationKinematics::new(2800.0, sense);
        assert!((kin.angular_speed.abs() - 2.0 * PI * 2800.0 / 60.0).abs() < 1e-9);
    }
    assert!(RotationKinematics::new(2800.0, RotationSense::ClockwiseFromInlet).angular_speed < 0.0);
}

#[test]
fn design_checks() {
    let params = FanParams::reference_fan();
    assert_relative_eq!(tip_mach(&params, 340.0), 0.1156, epsilon = 1e-4);
    assert_eq!(tip_mach(&params, 680.0), 0.5 * tip_mach(&params, 340.0));
    let still = FanParams {
        rotation_speed_n: 0.0,
        ..params.clone()
    };
    assert_eq!(tip_mach(&still, 340.0), 0.0);

    let c = compactness(0.134, 653.4, 340.0);
    assert!((c.wavelength - 0.520).abs() < 5e-4);
    assert!((c.ratio - 0.258).abs() < 1e-3);
    assert!(c.compact);
    let c = compactness(0.134, 0.0, 340.0);
    assert!(c.wavelength.is_infinite() && c.ratio == 0.0 && c.compact);
    let c = compactness(0.52, 340.0 / 0.52, 340.0);
    assert_relative_eq!(c.ratio, 1.0, epsilon = 1e-12);
    assert!(!c.compact);
}

#[test]
fn sampling_plan_examples() {
    let plan = sampling_plan(5.95e-5, 10, 0.2).unwrap();
    assert!((plan.sample_rate() - 1680.7).abs() < 0.05);
    assert!((plan.nyquist() - 840.3).abs() < 0.05);
    assert!(plan.nyquist() >= 653.4);
    let periods = 0.2 / FanParams::reference_fan().rotation_period();
    assert!((periods - 9.33).abs() < 0.01);

    let plan = sampling_plan(1e-3, 1, 1.0).unwrap();
    assert_eq!(plan.sample_rate(), 1000.0);
    assert_eq!(plan.bin_width(), 1.0);

    assert!(sampling_plan(0.0, 1, 1.0).is_err());
    assert!(sampling_plan(1e-3, 0, 1.0).is_err());
    assert!(sampling_plan(1e-3, 1, 0.0).is_err());
}

#[test]
fn turbulence_inlet_examples() {
    let re = duct_reynolds(0.395, 0.6, AIR_KINEMATIC_VISCOSITY);
    // U = Q / (pi d^2 / 4), Re = U d / nu computed independently.
    let u = 0.395 / (PI * 0.09);
    assert_relative_eq!(u, 1.397, epsilon = 1e-3);
    assert_relative_eq!(re, u * 0.6 / 1.5e-5, max_relative = 1e-12);
    let bc = turbulence_bc(re, 0.6).unwrap();
    assert!((bc.intensity - 0.0408).abs() < 5e-4);
    assert_eq!(turbulence_bc(1.0, 0.6).unwrap().intensity, 0.16);
    assert_relative_eq!(
        turbulence_bc(1.0, 0.165).unwrap().length_scale,
        0.1155,
        epsilon = 1e-12
    );
}

#[test]
fn geometry_csv_round_trip() {
    let mesh = build_fan_geometry(&coarse()).unwrap();
    let text = geometry_to_csv(&mesh);
    assert!(text.lines().any(|l| l == GEOMETRY_HEADER));
    let back = parse_geometry_csv(&text, Path::new("g.csv")).unwrap();
    assert_eq!(back.panels(), mesh.panels());
    assert_eq!(back.params(), mesh.params());
    assert_eq!(back.fingerprint(), mesh.fingerprint());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_is_an_isometry(id in 0usize..500, t in -1.0f64..1.0) {
        let params = coarse();
        let mesh = build_fan_geometry(&params).unwrap();
        let kin = RotationKinematics::from_params(&params);
        let id = id % mesh.len();
        let p0 = mesh.panels()[id].center;
        let s = mesh.panel_state(&kin, id, t).unwrap();
        prop_assert!((s.position.xy().norm() - p0.xy().norm()).abs() < 1e-9);
        prop_assert!((s.position.z - p0.z).abs() < 1e-12);
        prop_assert!((s.normal.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn velocity_is_orthogonal_to_axis_and_radius(id in 0usize..500, t in -1.0f64..1.0) {
        let params = coarse();
        let mesh = build_fan_geometry(&params).unwrap();
        let kin = RotationKinematics::from_params(&params);
        let id = id % mesh.len();
        let s = mesh.panel_state(&kin, id, t).unwrap();
        let speed = s.velocity.norm();
        let radial = Vector3::new(s.position.x, s.position.y, 0.0);
        prop_assert!(s.velocity.dot(&kin.axis) .abs() <= 1e-9 * speed.max(1.0));
        prop_assert!(s.velocity.dot(&radial).abs() <= 1e-9 * speed * radial.norm().max(1e-12));
        prop_assert!((speed - kin.angular_speed.abs() * radial.norm()).abs() < 1e-9 * speed.max(1.0));
    }

    #[test]
    fn refinement_preserves_patch_areas(cw in 1usize..6, sw in 1usize..5, az in 4usize..20, k in 2usize..4) {
        let params = FanParams { chordwise_panels: cw, spanwise_panels: sw, azimuthal_panels: az, ..FanParams::reference_fan() };
        let refined = FanParams { chordwise_panels: k * cw, spanwise_panels: k * sw, azimuthal_panels: k * az, ..params.clone() };
        let a = build_fan_geometry(&params).unwrap();
        let b = build_fan_geometry(&refined).unwrap();
        for patch in [Patch::Blade, Patch::Shroud, Patch::Backplate] {
            let (x, y) = (a.patch_area(patch), b.patch_area(patch));
            prop_assert!((x - y).abs() <= 1e-4 * x, "{patch:?}: {x} vs {y}");
        }
    }

    #[test]
    fn harmonics_are_exact_multiples(z in 1u32..40, rpm in 1.0f64..1e4) {
        let f0 = blade_passing_frequency(z, rpm, 0).unwrap();
        prop_assert_eq!(blade_passing_frequency(z, rpm, 1).unwrap(), 2.0 * f0);
    }
}
