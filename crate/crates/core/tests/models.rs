use conezar::chow::{ChowModel, ModelFile};
use conezar::polar::{curve_volume, zariski, PolarOptions};
use conezar::presets::{preset, PRESET_NAMES};
use conezar::quadratic::{random_instance, Mode, QuadraticFile, QuadraticModel};
use conezar::rational::{format_q, parse_q, qf};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixed_presets() -> impl Iterator<Item = &'static str> {
    PRESET_NAMES.iter().copied().filter(|n| !n.contains('('))
}

#[test]
fn model_files_round_trip() {
    for name in fixed_presets() {
        let m = preset(name).unwrap();
        let text = serde_json::to_string(&m.to_file()).unwrap();
        let file: ModelFile = serde_json::from_str(&text).unwrap();
        let back = ChowModel::from_file(&file).unwrap();
        assert_eq!(back.pairing(), m.pairing(), "{name}");
        assert_eq!(back.tensor().entries(), m.tensor().entries(), "{name}");
        assert!(back.nef().same_cone(m.nef()), "{name}");
        assert!(back.mov_curve().same_cone(m.mov_curve()), "{name}");
    }
}

#[test]
fn quadratic_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (k, n, mode) in [(2, 2, Mode::Surface), (3, 4, Mode::Hyperkahler)] {
        let m = random_instance(k, n, mode, &mut rng).unwrap();
        let text = serde_json::to_string(&m.to_file()).unwrap();
        let f: QuadraticFile = serde_json::from_str(&text).unwrap();
        let back = QuadraticModel::from_file(&f).unwrap();
        assert_eq!(back.q(), m.q());
        assert!(back.cone().same_cone(m.cone()));
    }
}

#[test]
fn volume_is_homogeneous() {
    let o = PolarOptions::default();
    for name in ["proj-bundle-p1", "toric-flip-3fold", "p3"] {
        let m = preset(name).unwrap();
        let a = m.nef_probe();
        let alpha = m.curve_power(&conezar::chow::DivisorClass(a)).0;
        let v1 = curve_volume(&m, &alpha, &o).unwrap().value;
        let scaled: Vec<f64> = alpha.iter().map(|x| 2.0 * x).collect();
        let v2 = curve_volume(&m, &scaled, &o).unwrap().value;
        let d = m.n() as f64 / (m.n() as f64 - 1.0);
        assert!((v2 / v1 - 2f64.powf(d)).abs() < 1e-6 * 2f64.powf(d), "{name}: {v1} {v2}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_print_and_parse(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = qf(n, d);
        prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }

    #[test]
    fn proj_bundle_decomposition(a in 0.05f64..5.0, b in 0.05f64..5.0) {
        let m = preset("proj-bundle-p1").unwrap();
        let alpha = [a, b];
        let z = zariski(&m, &alpha, None, &PolarOptions::default()).unwrap();
        let scale = a.max(b);
        for i in 0..2 {
            prop_assert!((z.positive_part[i] + z.gamma[i] - alpha[i]).abs() < 1e-7 * scale);
        }
        prop_assert!(z.residuals.gamma_eff_margin >= -1e-7 * scale);
        prop_assert!(m.pair(&z.b, &z.gamma).abs() < 1e-6 * scale);
        prop_assert!(z.value > 0.0);
    }
}
