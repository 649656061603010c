use conezar::polar::{curve_volume, lift_zariski, zariski, PolarOptions};
use conezar::polytopes::{mixed_volume, polytope_from_divisor};
use conezar::presets::preset;
use conezar::quadratic::{random_instance, Mode};
use conezar::rational::{q, qvec};
use conezar::toric::{self, fans, Fan};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn flip_threefold_cones() {
    let ff = fans::flip_threefold();
    let fan = Fan::from_file(&ff);
    assert!(toric::validate_fan(&fan).is_valid());
    let data = toric::toric_data(&fan, ff.div_basis.as_deref(), ff.curve_basis.as_deref()).unwrap();
    let cones = toric::cone_package(&data).unwrap();
    assert!(cones.nef.is_pointed() && cones.nef.is_full_dim());
    for c in [&cones.eff_div, &cones.eff_curve, &cones.nef, &cones.mov_curve] {
        c.cross_validate().unwrap();
    }
    // Nef¹ ⊂ Mov¹ ⊂ Eff¹
    let mov = toric::movable_divisors(&data).unwrap();
    for g in cones.nef.generators() {
        assert!(mov.contains_exact(g));
    }
    for g in mov.generators() {
        assert!(cones.eff_div.contains_exact(g));
    }
}

#[test]
fn projective_plane_mixed_volumes() {
    let fan = fans::projective_space(2);
    let h = polytope_from_divisor(&fan, &qvec(&[1, 0, 0])).unwrap();
    let h2 = polytope_from_divisor(&fan, &qvec(&[2, 0, 0])).unwrap();
    // intersection numbers are 2!·V: H² = 1, H·2H = 2, (2H)² = 4
    let two = q(2);
    assert_eq!(&two * mixed_volume(&[h.clone(), h.clone()]).unwrap(), q(1));
    assert_eq!(&two * mixed_volume(&[h.clone(), h2.clone()]).unwrap(), q(2));
    assert_eq!(&two * mixed_volume(&[h2.clone(), h2]).unwrap(), q(4));
}

#[test]
fn volume_matches_nef_power_on_complete_intersections() {
    let o = PolarOptions::default();
    for name in ["p2", "p3", "proj-bundle-p1", "toric-flip-3fold"] {
        let m = preset(name).unwrap();
        let b = m.nef_probe();
        let alpha = m.curve_power(&conezar::chow::DivisorClass(b.clone())).0;
        let v = curve_volume(&m, &alpha, &o).unwrap().value;
        assert!((v - m.vol(&b)).abs() < 1e-7 * m.vol(&b), "{name}: {v} vs {}", m.vol(&b));
        let z = zariski(&m, &alpha, None, &o).unwrap();
        assert!(z.gamma_is_zero(1e-6), "{name}: {:?}", z.gamma);
    }
}

#[test]
fn quadratic_decomposition_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 1..=4 {
        let m = random_instance(k, 2, Mode::Surface, &mut rng).unwrap();
        let g = m.cone().generators_f64();
        let w: Vec<f64> = (0..m.rho()).map(|i| g.iter().map(|v| v[i]).sum()).collect();
        let z = m.zariski_q(&w).unwrap();
        let s = m.qf(&w, &w).abs().max(1.0);
        assert!(z.q_p_gamma.abs() < 1e-7 * s);
        assert!(z.q_gamma_gamma <= 1e-9 * s);
        let (h, _) = m.polar_closed_form(&w).unwrap();
        // on surfaces Hf(w) = q(p, p)
        assert!((h - z.q_pp).abs() < 1e-7 * h.max(1.0));
    }
}

#[test]
fn lift_through_blowup() {
    let o = PolarOptions::default();
    let x = preset("p2").unwrap();
    let y = preset("quadratic-surface").unwrap();
    let pull = vec![vec![q(1)], vec![q(0)]];
    let push = vec![vec![q(1), q(0)]];
    let l = lift_zariski(&y, &x, &pull, &push, &[3.0], &[0.0, 0.0], &o).unwrap();
    assert!((l.volhat_x - 9.0).abs() < 1e-8);
    assert!((l.volhat_y - l.volhat_x).abs() < 1e-8);
}
