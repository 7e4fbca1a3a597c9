use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use synthseg_core::math::Vec3;
use synthseg_core::randomize::{horizontal_side, sample_scene, Interval, RandomizationConfig, SidePolicy};
use synthseg_core::scene::{DomainTag, Material, Side};

const N: u64 = 10_000;

/// One-sample Kolmogorov–Smirnov statistic against U(lo, hi).
fn ks_uniform(mut xs: Vec<f64>, lo: f64, hi: f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = (x - lo) / (hi - lo);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[test]
fn skybox_yaw_is_uniform() {
    let cfg = RandomizationConfig::preset(DomainTag::A);
    let yaws: Vec<f64> = (0..N).map(|i| sample_scene(&cfg, 2024, i).unwrap().skybox_angles[0]).collect();
    assert!(yaws.iter().all(|&y| (0.0..TAU).contains(&y)));
    let n = N as f64;
    let mean = yaws.iter().sum::<f64>() / n;
    let se = TAU / 12f64.sqrt() / n.sqrt();
    assert!((mean - PI).abs() < 3.0 * se, "mean {mean}, 3 SE = {}", 3.0 * se);
    let d = ks_uniform(yaws, 0.0, TAU);
    assert!(d < 1.628 / n.sqrt(), "KS D = {d}");
}

#[test]
fn side_fraction_is_balanced() {
    let cfg = RandomizationConfig::preset(DomainTag::A);
    let left = (0..N).filter(|&i| horizontal_side(&cfg, 77, i) == Side::Left).count();
    let frac = left as f64 / N as f64;
    assert!((0.47..=0.53).contains(&frac), "left fraction {frac}");
    assert_eq!(horizontal_side(&cfg, 77, 5), horizontal_side(&cfg, 77, 5));
    let first: Vec<Side> = (0..10).map(|i| horizontal_side(&cfg, 1, i)).collect();
    assert!(first.iter().any(|&s| s != first[0]));
}

#[test]
fn side_policy_is_respected() {
    let mut cfg = RandomizationConfig::preset(DomainTag::A);
    cfg.sides = SidePolicy::Left;
    assert!((0..50).all(|i| sample_scene(&cfg, 3, i).unwrap().side == Side::Left));
    cfg.sides = SidePolicy::Right;
    assert!((0..50).all(|i| sample_scene(&cfg, 3, i).unwrap().side == Side::Right));
}

fn interval(lo: f64, hi: f64) -> impl Strategy<Value = Interval> {
    (lo..hi, lo..hi).prop_map(|(a, b)| Interval::new(a.min(b), a.max(b)))
}

prop_compose! {
    fn random_config()(
        tmin in (-2.0f64..0.0, -0.5f64..0.0, -2.0f64..0.0),
        tspan in (0.0f64..2.0, 0.0f64..0.5, 0.0f64..2.0),
        yaw in interval(-PI, PI),
        palette in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0), 1..6),
        az in interval(0.0, TAU),
        el in interval(0.0, FRAC_PI_2),
        sky in (interval(0.0, TAU), interval(-PI, PI), interval(-PI, PI)),
        cam in (interval(2.0, 8.0), interval(0.2, 2.5), interval(-1.5, 1.5), interval(-1.0, 1.0), interval(0.0, 1.5)),
        res in 16u32..64,
        sides in prop_oneof![Just(SidePolicy::Both), Just(SidePolicy::Left), Just(SidePolicy::Right)],
        noise in 0.0f64..0.1,
    ) -> RandomizationConfig {
        let mut c = RandomizationConfig::preset(DomainTag::A);
        c.pose.translation_min = Vec3::new(tmin.0, tmin.1, tmin.2);
        c.pose.translation_max = Vec3::new(tmin.0 + tspan.0, tmin.1 + tspan.1, tmin.2 + tspan.2);
        c.pose.yaw = yaw;
        c.palette = palette.into_iter().map(|(r, g, b)| Material::paint(Vec3::new(r, g, b))).collect();
        c.sun.azimuth = az;
        c.sun.elevation = el;
        (c.skybox.yaw, c.skybox.pitch, c.skybox.roll) = sky;
        (c.camera.distance, c.camera.height_m, c.camera.lateral, c.camera.target_x, c.camera.target_y) = cam;
        c.camera.width = res;
        c.camera.height = res + 3;
        c.sides = sides;
        c.sensor_noise = noise;
        c
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn sampled_fields_stay_in_range(cfg in random_config(), seed in any::<u64>(), index in 0u64..1_000_000) {
        let s = sample_scene(&cfg, seed, index).unwrap();
        let p = &cfg.pose;
        for axis in 0..3 {
            prop_assert!(Interval::new(p.translation_min[axis], p.translation_max[axis]).contains(s.pose.translation[axis]));
        }
        prop_assert!(p.yaw.contains(s.yaw));
        prop_assert!(s.paint_index < cfg.palette.len());
        prop_assert_eq!(s.paint, cfg.palette[s.paint_index]);
        prop_assert!(cfg.sun.azimuth.contains(s.sun_azimuth));
        prop_assert!(cfg.sun.elevation.contains(s.sun_elevation));
        prop_assert!((s.sun.direction.y - s.sun_elevation.sin()).abs() < 1e-12);
        prop_assert!(cfg.skybox.yaw.contains(s.skybox_angles[0]));
        prop_assert!(cfg.skybox.pitch.contains(s.skybox_angles[1]));
        prop_assert!(cfg.skybox.roll.contains(s.skybox_angles[2]));
        let c = &cfg.camera;
        prop_assert!(c.distance.contains(s.rig.distance));
        prop_assert!(c.height_m.contains(s.rig.height));
        prop_assert!(c.lateral.contains(s.rig.lateral));
        prop_assert!(c.target_x.contains(s.rig.target_x));
        prop_assert!(c.target_y.contains(s.rig.target_y));
        prop_assert_eq!((s.camera.width, s.camera.height), (c.width, c.height));
        match cfg.sides {
            SidePolicy::Left => prop_assert_eq!(s.side, Side::Left),
            SidePolicy::Right => prop_assert_eq!(s.side, Side::Right),
            SidePolicy::Both => {}
        }
        prop_assert_eq!(s.sensor_noise, cfg.sensor_noise);
    }

    #[test]
    fn frame_streams_are_independent(seed in any::<u64>(), i in 0u64..1000, others in proptest::collection::vec(0u64..1000, 0..8)) {
        let cfg = RandomizationConfig::preset(DomainTag::B);
        let alone = serde_json::to_string(&sample_scene(&cfg, seed, i).unwrap()).unwrap();
        for j in others {
            let _ = sample_scene(&cfg, seed, j).unwrap();
        }
        let after = serde_json::to_string(&sample_scene(&cfg, seed, i).unwrap()).unwrap();
        prop_assert_eq!(&alone, &after);
        let next = serde_json::to_string(&sample_scene(&cfg, seed, i + 1).unwrap()).unwrap();
        prop_assert_ne!(alone, next);
    }
}
