//! Acceptance suites. Each suite runs a batch of checks against closed forms,
//! exact tables or independent oracles and reports every check; a suite
//! passes when all of its checks do.

use std::fmt::Display;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chow::ChowModel;
use crate::cones::{dual_cone, PolyhedralCone};
use crate::error::Result;
use crate::linalg;
use crate::polar::checks::{
    mixed_kt_check, ci_distance, concavity_suite, cosine, Band, Verdict, involution_check, kt_check, log_concavity_check, morse_check,
    optimality_probe, reverse_kt_check, sample_interior,
};
use crate::polar::{curve_volume, derivative, derivative_fd_check, zariski, PolarOptions, PowerFn, VolumeFn};
use crate::polytopes::{factorial, mixed_volume};
use crate::presets::{nonconvex_u_transform, preset, NONCONVEX_EXPANSION, NONCONVEX_NEF, NONCONVEX_U};
use crate::quadratic::{random_instance, Mode, QuadraticModel};
use crate::rational::{self, q, qf, qvec, QVec};
use crate::toric::{self, fans, Fan};

/// `(criterion, name)` for every suite, in run order.
pub const SUITES: &[(u8, &str)] = &[
    (1, "proj-bundle-volume"),
    (2, "proj-bundle-derivative"),
    (3, "toric-flip"),
    (4, "nonconvex-expansion"),
    (5, "zariski-certificates"),
    (6, "inequalities"),
    (7, "involution"),
    (8, "mixed-volume"),
    (9, "lorentzian"),
    (10, "optimal-constant"),
];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One line: `[PASS] 3 toric-flip (12/12 checks)`.
    pub fn summary_line(&self) -> String {
        let ok = self.checks.iter().filter(|c| c.passed).count();
        format!(
            "[{}] {:>2} {} ({}/{} checks)",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            ok,
            self.checks.len()
        )
    }
}

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct VerifyConfig {
    pub seed: u64,
    pub opts: PolarOptions,
}


impl VerifyConfig {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
    }
}

#[derive(Default)]
struct Log {
    checks: Vec<Check>,
}

impl Log {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Display) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.to_string() });
    }

    /// Records the outcome of a fallible check; errors count as failures.
    fn attempt(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        match f() {
            Ok((p, d)) => self.check(name, p, d),
            Err(e) => self.check(name, false, format!("error: {e}")),
        }
    }
}

/// Running maximum of a residual plus a failure count.
struct Tally {
    worst: f64,
    failures: usize,
    total: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: 0.0, failures: 0, total: 0 }
    }

    fn add(&mut self, value: f64, ok: bool) {
        self.total += 1;
        if value.is_nan() || value > self.worst {
            self.worst = value;
        }
        if !ok {
            self.failures += 1;
        }
    }

    fn ok(&self) -> bool {
        self.failures == 0 && self.total > 0
    }

    fn detail(&self, what: &str) -> String {
        format!("{}/{} ok, worst {what} {:.3e}", self.total - self.failures, self.total, self.worst)
    }
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.1).collect()
}

/// Resolves a suite by name or criterion number.
pub fn lookup(name: &str) -> Option<(u8, &'static str)> {
    SUITES.iter().copied().find(|(k, n)| *n == name || name.parse::<u8>().ok() == Some(*k))
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Option<SuiteReport> {
    let (criterion, name) = lookup(name)?;
    let mut log = Log::default();
    match criterion {
        1 => proj_bundle_volume(&mut log, cfg),
        2 => proj_bundle_derivative(&mut log, cfg),
        3 => toric_flip(&mut log, cfg),
        4 => nonconvex_expansion(&mut log, cfg),
        5 => zariski_certificates(&mut log, cfg),
        6 => inequalities(&mut log, cfg),
        7 => involution(&mut log, cfg),
        8 => mixed_volumes(&mut log),
        9 => lorentzian(&mut log, cfg),
        10 => optimal_constant(&mut log, cfg),
        _ => unreachable!(),
    }
    let passed = !log.checks.is_empty() && log.checks.iter().all(|c| c.passed);
    Some(SuiteReport { criterion, name: name.to_string(), passed, checks: log.checks })
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    SUITES.iter().filter_map(|(_, n)| run_suite(n, cfg)).collect()
}

fn proj_bundle_closed_form(x: f64, y: f64) -> f64 {
    if x >= 2.0 * y {
        (1.5 * x - y) * y.sqrt()
    } else {
        x.powf(1.5) / 2f64.sqrt()
    }
}

/// `min_t ((B(t)·α)/vol(B(t))^{1/n})^{n/(n−1)}` over a dense grid of the segment between the
/// two nef generators of a rank-2 model.
fn brute_force_rank2(m: &ChowModel, alpha: &[f64], steps: usize) -> f64 {
    let g = m.nef().generators_f64();
    let n = m.n() as f64;
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        let t = i as f64 / steps as f64;
        let b: Vec<f64> = g[0].iter().zip(&g[1]).map(|(a, c)| (1.0 - t) * a + t * c).collect();
        let v = m.vol(&b);
        if v <= 0.0 {
            continue;
        }
        let r = m.pair(&b, alpha) / v.powf(1.0 / n);
        best = best.min(r.max(0.0).powf(n / (n - 1.0)));
    }
    best
}

fn proj_bundle_volume(log: &mut Log, cfg: &VerifyConfig) {
    let m = preset("proj-bundle-p1").expect("preset");
    let mut rng = cfg.rng(1);
    let mut t = Tally::new();
    let mut failure = String::new();
    for i in 0..200 {
        // half the samples straddle the wall x = 2y
        let y: f64 = rng.gen_range(0.05..3.0);
        let x: f64 = if i % 2 == 0 { rng.gen_range(0.05..6.0) } else { 2.0 * y * rng.gen_range(0.9..1.1) };
        let want = proj_bundle_closed_form(x, y);
        match curve_volume(&m, &[x, y], &cfg.opts) {
            Ok(r) => {
                let err = (r.value - want).abs() / want;
                if err > 1e-5 && failure.is_empty() {
                    failure = format!("; first failure at ({x}, {y}): {} vs {want}", r.value);
                }
                t.add(err, err <= 1e-5);
            }
            Err(e) => {
                t.add(f64::NAN, false);
                failure = format!("; error at ({x}, {y}): {e}");
            }
        }
    }
    log.check("200 random classes vs closed form (rel 1e-5)", t.ok(), t.detail("rel err") + &failure);

    for (name, model) in [("proj-bundle-p1", m.clone()), ("quadratic-surface", preset("quadratic-surface").expect("preset"))] {
        let mut t = Tally::new();
        for _ in 0..20 {
            let (a, _) = sample_interior(model.eff_curve(), &mut rng);
            let got = curve_volume(&model, &a, &cfg.opts).map(|r| r.value).unwrap_or(f64::NAN);
            let scan = brute_force_rank2(&model, &a, 20_000);
            let err = (got - scan).abs() / scan.max(1e-300);
            t.add(err, err <= 1e-6 && got <= scan * (1.0 + 1e-12));
        }
        log.check(format!("{name}: agrees with dense nef-slice scan (rel 1e-6)"), t.ok(), t.detail("rel err"));
    }
}

fn proj_bundle_derivative(log: &mut Log, cfg: &VerifyConfig) {
    let m = preset("proj-bundle-p1").expect("preset");
    let beta = [-2.0, -1.0];
    for t in [0.0, 0.25, 0.5, 0.9] {
        let alpha = [3.0 - 2.0 * t, 1.0 - t];
        let s: f64 = 1.0 - t;
        let want = -3.0 * s.sqrt() - 0.75 / s.sqrt();
        log.attempt(format!("t = {t}: derivative vs closed form (1e-4)"), || {
            let d = derivative(&m, &alpha, &beta, &cfg.opts)?;
            Ok(((d - want).abs() <= 1e-4, format!("computed {d:.10}, expected {want:.10}")))
        });
        log.attempt(format!("t = {t}: finite-difference validator"), || {
            let fd = derivative_fd_check(&m, &alpha, &beta, &cfg.opts)?;
            let steps = fd.steps.iter().map(|(h, v, _)| format!("h={h:e}: {v:.8}")).join(", ");
            Ok((fd.passed, format!("analytic {:.8}; {steps}", fd.analytic)))
        });
        log.attempt(format!("t = {t}: vol^ = (7/2 − 2t)(1−t)^(1/2)"), || {
            let v = curve_volume(&m, &alpha, &cfg.opts)?.value;
            let want = (3.5 - 2.0 * t) * s.sqrt();
            Ok(((v - want).abs() <= 1e-6 * want, format!("{v:.10} vs {want:.10}")))
        });
    }
}

/// The valid root `t` of `4(y−x+t)(z−x+t) = (x−t)²` with the largest `3ab(a+b)`,
/// where `a² = y−x+t`, `b² = z−x+t`, `2ab = x−t`.
fn flip_negative_part(alpha: &[f64]) -> Option<f64> {
    let (x, y, z) = (alpha[0], alpha[1], alpha[2]);
    let (qa, qb, qc) = (3.0, 4.0 * (y + z - 2.0 * x) + 2.0 * x, 4.0 * (y - x) * (z - x) - x * x);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let scale = x.abs().max(y.abs()).max(z.abs());
    let eps = 1e-12 * scale;
    [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)]
        .into_iter()
        .filter(|&t| t >= -eps && y - x + t >= -eps && z - x + t >= -eps && x - t >= -eps)
        .map(|t| {
            let (a, b) = ((y - x + t).max(0.0).sqrt(), (z - x + t).max(0.0).sqrt());
            (t, 3.0 * a * b * (a + b))
        })
        .max_by(|p, q| p.1.total_cmp(&q.1))
        .map(|p| p.0.max(0.0))
}

fn toric_flip(log: &mut Log, cfg: &VerifyConfig) {
    let m = match preset("toric-flip-3fold") {
        Ok(m) => m,
        Err(e) => return log.check("build model", false, e),
    };
    let table = linalg::transpose(m.pairing());
    let want_table = vec![qvec(&[-1, -1, 1]), qvec(&[0, 1, 0]), qvec(&[1, 0, 0])];
    log.check(
        "intersection table C12, C13, C23 × D1, D2, D3",
        table == want_table,
        table.iter().map(|r| r.iter().map(rational::format_q).join(" ")).join(" | "),
    );
    let cone = |gens: &[&[i64]]| PolyhedralCone::from_ints(3, gens).expect("cone");
    let lists: [(&str, &PolyhedralCone, PolyhedralCone); 4] = [
        ("Eff¹ = ⟨D1, D2, D3⟩", m.eff_div(), PolyhedralCone::orthant(3)),
        ("Nef¹ = ⟨D1+D3, D2+D3, D3⟩", m.nef(), cone(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 1]])),
        ("Eff₁ = ⟨C12, C13, C23⟩", m.eff_curve(), PolyhedralCone::orthant(3)),
        ("Mov₁ = ⟨C12+C13+C23, C13, C23⟩", m.mov_curve(), cone(&[&[1, 1, 1], &[0, 1, 0], &[0, 0, 1]])),
    ];
    for (name, got, want) in lists {
        let rays = got.extreme_rays().iter().map(|r| format!("({})", r.iter().map(rational::format_q).join(","))).join(" ");
        log.check(name, got.same_cone(&want), rays);
    }
    let mut exact_ok = true;
    for (a, b) in [(1, 1), (1, 2), (3, 5), (2, 7)] {
        let (aq, bq) = (q(a), q(b));
        let bab = vec![aq.clone(), bq.clone(), &aq + &bq];
        let sq = m.curve_power_exact(&bab);
        let want = vec![q(2 * a * b), q(a * a + 2 * a * b), q(b * b + 2 * a * b)];
        exact_ok &= sq == want && m.vol_exact(&bab) == q(3 * a * b * (a + b));
    }
    log.check("B_{a,b}² = T_{a,b} and B_{a,b}³ = 3ab(a+b) (exact)", exact_ok, "a, b ∈ {(1,1),(1,2),(3,5),(2,7)}");

    log.attempt("α = (2,1,1): γ = 4/3·C12, vol^ = 2/√3", || {
        let z = zariski(&m, &[2.0, 1.0, 1.0], Some(&qvec(&[2, 1, 1])), &cfg.opts)?;
        let ok = (z.gamma[0] - 4.0 / 3.0).abs() < 1e-8
            && z.gamma[1].abs() < 1e-8
            && z.gamma[2].abs() < 1e-8
            && (z.value - 2.0 / 3f64.sqrt()).abs() < 1e-8;
        Ok((ok, format!("γ = {:?}, vol^ = {:.10}", z.gamma, z.value)))
    });
    log.attempt("α = T_{1,1}: γ = 0, vol^ = 6", || {
        let z = zariski(&m, &[2.0, 3.0, 3.0], Some(&qvec(&[2, 3, 3])), &cfg.opts)?;
        Ok((z.gamma_is_zero(1e-8) && (z.value - 6.0).abs() < 1e-8, format!("γ = {:?}, vol^ = {:.10}", z.gamma, z.value)))
    });

    let mut rng = cfg.rng(3);
    let mut t = Tally::new();
    let mut note = String::new();
    for _ in 0..50 {
        let a = qf(rng.gen_range(10..=300), 100);
        let b = qf(rng.gen_range(10..=300), 100);
        let shift = qf(rng.gen_range(5..=400), 100);
        let ab = &a * &b;
        let alpha_q = vec![q(2) * &ab + &shift, &a * &a + q(2) * &ab, &b * &b + q(2) * &ab];
        let alpha = rational::to_f64_vec(&alpha_q);
        let root = flip_negative_part(&alpha);
        let scale = alpha.iter().fold(0.0f64, |x, y| x.max(y.abs()));
        match (zariski(&m, &alpha, Some(&alpha_q), &cfg.opts), root) {
            (Ok(z), Some(r)) => {
                let err = ((z.gamma[0] - r).abs() + z.gamma[1].abs() + z.gamma[2].abs()) / scale;
                if err > 1e-6 && note.is_empty() {
                    note = format!("; first mismatch α = {alpha:?}: γ = {:?}, root {r}", z.gamma);
                }
                t.add(err, err <= 1e-6 && r > 0.0);
            }
            (Err(e), _) => {
                t.add(f64::NAN, false);
                note = format!("; error: {e}");
            }
            (_, None) => {
                t.add(f64::NAN, false);
                note = format!("; no admissible root for {alpha:?}");
            }
        }
    }
    log.check("50 random non-CI classes: γ = t·C12 with t the quadratic root (1e-6)", t.ok(), t.detail("err") + &note);
}

fn nonconvex_expansion(log: &mut Log, cfg: &VerifyConfig) {
    let m = match preset("fs-nonconvex") {
        Ok(m) => m,
        Err(e) => return log.check("build model", false, e),
    };
    let a: Vec<QVec> = NONCONVEX_NEF.iter().map(|r| qvec(r)).collect();
    let want = PolyhedralCone::new(5, a.clone()).expect("cone");
    log.check(
        "Nef¹ = ⟨A1, …, A5⟩",
        m.nef().same_cone(&want) && m.nef().extreme_rays().len() == 5,
        format!("{} extreme rays", m.nef().extreme_rays().len()),
    );
    let mut bad = Vec::new();
    for &(i, j, c, k) in &NONCONVEX_EXPANSION {
        let mixed = m.mixed_curve_exact(&[a[i].clone(), a[j].clone()]);
        // the expansion lists the coefficient of xᵢxⱼ, i.e. 2AᵢAⱼ off the diagonal
        let coeff: QVec = if i == j { mixed } else { mixed.iter().map(|x| x * q(2)).collect() };
        let want: QVec = qvec(&NONCONVEX_U[k]).iter().map(|x| x * q(c)).collect();
        if coeff != want {
            bad.push(format!("A{}A{}", i + 1, j + 1));
        }
    }
    log.check(
        "(Σ xᵢAᵢ)² expansion reproduces u1..u5 (exact)",
        bad.is_empty(),
        if bad.is_empty() { "15/15 monomials".to_string() } else { format!("mismatch at {}", bad.join(", ")) },
    );
    let u_independent = linalg::rank(&NONCONVEX_U.iter().map(|r| qvec(r)).collect::<Vec<_>>()) == 5;
    log.check("u1..u5 form a basis of N₁", u_independent, "rank 5");

    let v: Vec<i64> = (0..5).map(|i| NONCONVEX_U[1][i] + NONCONVEX_U[3][i]).collect();
    log.check("witness v = u2 + u4 = (13,32,65,21,43)", v == [13, 32, 65, 21, 43], format!("{v:?}"));
    let vf: Vec<f64> = v.iter().map(|&x| x as f64).collect();
    let gens: Vec<Vec<f64>> = NONCONVEX_NEF.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut rng = cfg.rng(4);
    let t = nonconvex_u_transform();
    let d = ci_distance(&m, &gens, &vf, Some(&t), 24, &mut rng);
    log.check(
        "distance from v to sampled CI₁ in u-coordinates ≥ 0.01",
        d.distance >= 0.01,
        format!("distance {:.6}, closest at x = {:?}", d.distance, d.coeffs.iter().map(|x| format!("{x:.4}")).join(",")),
    );
    let raw = ci_distance(&m, &gens, &vf, None, 24, &mut rng);
    log.check(
        "distance from v to sampled CI₁ in curve coordinates > 0",
        raw.distance > 1e-6,
        format!("distance {:.6e}", raw.distance),
    );
    let vq = qvec(&v);
    log.attempt("v is big with non-zero negative part", || {
        let z = zariski(&m, &vf, Some(&vq), &cfg.opts)?;
        let g = z.gamma.iter().fold(0.0f64, |x, y| x.max(y.abs()));
        Ok((!z.gamma_is_zero(1e-6), format!("|γ|∞ = {g:.6e}, vol^ = {:.8}", z.value)))
    });
    // v is a sum of two complete intersections
    let on_ci = [m.curve_power_exact(&a[1]), m.curve_power_exact(&a[3])];
    log.check(
        "u2 = A2², u4 = A4² are complete intersections",
        on_ci[0] == qvec(&NONCONVEX_U[1]) && on_ci[1] == qvec(&NONCONVEX_U[3]),
        "exact",
    );
}

fn big_sample(m: &ChowModel, rng: &mut ChaCha8Rng) -> (Vec<f64>, QVec) {
    // alternate generic interior points with complete intersections plus a small effective part
    if rng.gen_bool(0.5) {
        return sample_interior(m.eff_curve(), rng);
    }
    let (b, _) = sample_interior(m.nef(), rng);
    let bq = rational::rationalize_vec(&b, 1000);
    let mut a = m.curve_power_exact(&bq);
    let gens = m.eff_curve().generators();
    let g = &gens[rng.gen_range(0..gens.len())];
    let w = qf(rng.gen_range(1..=1000), 1000) * rational::max_abs(&a);
    for (x, y) in a.iter_mut().zip(g) {
        *x += &w * y;
    }
    // keep strictly inside Eff₁
    let (_, eq) = sample_interior(m.eff_curve(), rng);
    let tiny = qf(1, 1000) * rational::max_abs(&a) / rational::max_abs(&eq);
    for (x, y) in a.iter_mut().zip(&eq) {
        *x += &tiny * y;
    }
    (rational::to_f64_vec(&a), a)
}

const CERT_PRESETS: &[(&str, usize)] = &[
    ("proj-bundle-p1", 100),
    ("toric-flip-3fold", 100),
    ("fs-nonconvex", 80),
    ("quadratic-surface", 100),
    ("diagonal-abelian(3)", 80),
    ("p2", 20),
    ("p3", 20),
];

fn zariski_certificates(log: &mut Log, cfg: &VerifyConfig) {
    let mut rng = cfg.rng(5);
    let other = cfg.opts.clone().with_seed(cfg.opts.seed.wrapping_add(0x5eed));
    for &(name, count) in CERT_PRESETS {
        let m = match preset(name) {
            Ok(m) => m,
            Err(e) => {
                log.check(format!("{name}: build"), false, e);
                continue;
            }
        };
        let (mut bg, mut eff, mut gap, mut uniq, mut mov) = (Tally::new(), Tally::new(), Tally::new(), Tally::new(), Tally::new());
        let mut errors = Vec::new();
        let mut nonzero = 0;
        for _ in 0..count {
            let (alpha, aq) = big_sample(&m, &mut rng);
            let z = match zariski(&m, &alpha, Some(&aq), &cfg.opts) {
                Ok(z) => z,
                Err(e) => {
                    errors.push(e.to_string());
                    continue;
                }
            };
            let v = z.value;
            let r = z.residuals.b_dot_gamma.abs() / v;
            bg.add(r, r <= 1e-6);
            eff.add(-z.residuals.gamma_eff_margin, z.residuals.gamma_eff_margin >= -1e-7);
            let g = z.residuals.vol_gap / v.max(1.0);
            gap.add(g, g <= 1e-6);
            match zariski(&m, &alpha, Some(&aq), &other) {
                Ok(z2) => {
                    let c = 1.0 - cosine(&z.b, &z2.b);
                    uniq.add(c, c <= 1e-6);
                }
                Err(e) => errors.push(e.to_string()),
            }
            if !z.gamma_is_zero(1e-6) {
                nonzero += 1;
                let out = m.outside_movable(&z.gamma, 1e-9);
                mov.add(if out { 0.0 } else { 1.0 }, out);
            }
        }
        let err_note = if errors.is_empty() { String::new() } else { format!("; {} errors, first: {}", errors.len(), errors[0]) };
        log.check(format!("{name}: B·γ ≤ 1e-6·vol^"), bg.ok() && errors.is_empty(), bg.detail("B·γ/vol^") + &err_note);
        log.check(format!("{name}: γ ∈ Eff₁ (margin ≥ −1e-7)"), eff.ok(), eff.detail("−margin"));
        log.check(format!("{name}: vol^ = Bⁿ (1e-6)"), gap.ok(), gap.detail("gap"));
        log.check(format!("{name}: independent restarts agree on the B ray"), uniq.ok(), uniq.detail("1−cos"));
        log.check(
            format!("{name}: γ ≠ 0 ⇒ γ ∉ Mov₁"),
            mov.failures == 0,
            format!("{nonzero} classes with γ ≠ 0, {} violations", mov.failures),
        );
    }
}

const INEQ_PRESETS: &[&str] = &["proj-bundle-p1", "toric-flip-3fold", "fs-nonconvex", "quadratic-surface", "diagonal-abelian(3)"];

fn inequalities(log: &mut Log, cfg: &VerifyConfig) {
    let mut rng = cfg.rng(6);
    let trials = 200;
    let tol = 1e-7;
    let band = Band::default();
    for &name in INEQ_PRESETS {
        let m = match preset(name) {
            Ok(m) => m,
            Err(e) => {
                log.check(format!("{name}: build"), false, e);
                continue;
            }
        };
        let n = m.n();
        let (mut kt, mut rkt, mut akt, mut lc, mut morse) = (Tally::new(), Tally::new(), Tally::new(), Tally::new(), Tally::new());
        let (mut kt_eq, mut lc_eq, mut kt_mis, mut lc_mis, mut morse_pos) = (0, 0, 0, 0, 0);
        let (mut kt_und, mut lc_und, mut eff_counter) = (0, 0, 0);
        let mut errors: Vec<String> = Vec::new();
        for i in 0..trials {
            // Khovanskii–Teissier, half the partners proportional
            let (a, _) = sample_interior(m.nef(), &mut rng);
            let b = if i % 2 == 0 { sample_interior(m.nef(), &mut rng).0 } else { a.iter().map(|x| 1.7 * x).collect() };
            let r = kt_check(&m, &a, &b, 1e-9);
            kt.add(-r.inequality.rel_slack, r.inequality.holds(tol));
            kt_eq += r.equality as usize;
            match r.verdict(band) {
                Verdict::Mismatch => kt_mis += 1,
                Verdict::Undecided => kt_und += 1,
                Verdict::Agree => {}
            }

            let (x, _) = sample_interior(m.nef(), &mut rng);
            let (y, _) = sample_interior(m.mov_curve(), &mut rng);
            let r = reverse_kt_check(&m, &a, &x, &y);
            rkt.add(-r.rel_slack, r.holds(tol));
            // outside Mov₁ the inequality is not guaranteed; only count violations
            let (ye, _) = sample_interior(m.eff_curve(), &mut rng);
            eff_counter += !reverse_kt_check(&m, &a, &x, &ye).holds(tol) as usize;

            let k = rng.gen_range(1..n);
            let r = mixed_kt_check(&m, &a, &b, &x, k);
            akt.add(-r.rel_slack, r.holds(tol));

            // log-concavity of vol^, half the partners sharing the positive-part ray
            let (al, aq) = big_sample(&m, &mut rng);
            let res = (|| -> Result<()> {
                let za = zariski(&m, &al, Some(&aq), &cfg.opts)?;
                let be: Vec<f64> = if i % 2 == 0 {
                    big_sample(&m, &mut rng).0
                } else {
                    let c = rng.gen_range(0.2..3.0);
                    let t = rng.gen_range(0.0..2.0);
                    za.positive_part.iter().zip(&za.gamma).map(|(p, g)| c * p + t * g).collect()
                };
                let r = log_concavity_check(&m, &al, &be, 1e-6, &cfg.opts)?;
                lc.add(-r.inequality.rel_slack, r.inequality.holds(tol));
                lc_eq += r.equality as usize;
                match r.verdict(band) {
                    Verdict::Mismatch => lc_mis += 1,
                    Verdict::Undecided => lc_und += 1,
                    Verdict::Agree => {}
                }

                // Morse: scale a movable β so the criterion changes sign across samples
                let (b0, bq0) = sample_interior(m.mov_curve(), &mut rng);
                let bb = m.pair(&za.b, &b0);
                let u = rng.gen_range(0.05..1.5);
                let s = rational::rationalize(u * za.value / (n as f64 * bb), 1_000_000);
                let bq: QVec = bq0.iter().map(|x| x * &s).collect();
                let bf = rational::to_f64_vec(&bq);
                let r = morse_check(&m, &al, &bf, Some((&aq, &bq)), &cfg.opts)?;
                morse_pos += (r.criterion > 0.0) as usize;
                morse.add(if r.passes(tol) { 0.0 } else { 1.0 }, r.passes(tol));
                Ok(())
            })();
            if let Err(e) = res {
                errors.push(e.to_string());
            }
        }
        let err_note = if errors.is_empty() { String::new() } else { format!("; {} errors, first: {}", errors.len(), errors[0]) };
        log.check(
            format!("{name}: Khovanskii–Teissier with proportionality"),
            kt.ok() && kt_mis == 0,
            format!("{}; {kt_eq} equality cases, {kt_mis} mismatches, {kt_und} in the fringe", kt.detail("−slack")),
        );
        log.check(
            format!("{name}: reverse Khovanskii–Teissier (y ∈ Mov₁)"),
            rkt.ok(),
            format!("{}; with y ∈ Eff₁ instead: {eff_counter} violations", rkt.detail("−slack")),
        );
        log.check(format!("{name}: mixed KT with k!(n−k)!/n!"), akt.ok(), akt.detail("−slack"));
        log.check(
            format!("{name}: log-concavity of vol^ with equality ⇔ proportional"),
            lc.ok() && lc_mis == 0 && errors.is_empty(),
            format!("{}; {lc_eq} equality cases, {lc_mis} mismatches, {lc_und} in the fringe{err_note}", lc.detail("−slack")),
        );
        log.attempt(format!("{name}: continuity of α ↦ B_α and linearity along α + t·B_α^(n−1)"), || {
            let r = concavity_suite(&m, 10, &mut rng, &cfg.opts)?;
            Ok((
                r.passed(),
                format!(
                    "{} trials: {} continuity, {} linearity, {} log-concavity failures",
                    r.trials, r.continuity_failures, r.linearity_failures, r.log_concavity_failures
                ),
            ))
        });
        log.check(
            format!("{name}: Morse criterion ⇒ α − β big"),
            morse.ok(),
            format!("{} failures in {} ({morse_pos} with positive criterion)", morse.failures, morse.total),
        );
    }
}

fn involution(log: &mut Log, cfg: &VerifyConfig) {
    let opts = cfg.opts.clone().with_multistart(2);
    let mut rng = cfg.rng(7);
    for name in ["proj-bundle-p1", "quadratic-surface", "diagonal-abelian(2)"] {
        log.attempt(format!("{name}: H²vol = vol on 20 samples (1e-4)"), || {
            let m = preset(name)?;
            let f = VolumeFn { model: &m };
            let r = involution_check(&f, m.nef(), m.pairing(), 20, &mut rng, &opts)?;
            Ok((r.max_rel_err <= 1e-4 && r.samples == 20, format!("max rel err {:.3e}", r.max_rel_err)))
        });
    }
    log.attempt("v ↦ v^3 on a ray: H²f = f", || {
        let f = PowerFn { s: 3.0 };
        let c = PolyhedralCone::orthant(1);
        let r = involution_check(&f, &c, &linalg::identity(1), 5, &mut rng, &opts)?;
        Ok((r.max_rel_err <= 1e-4, format!("max rel err {:.3e}", r.max_rel_err)))
    });
}

fn mixed_volumes(log: &mut Log) {
    let cases: Vec<(&str, Fan, Option<Vec<usize>>, Option<Vec<Vec<usize>>>)> = vec![
        ("p2", fans::projective_space(2), None, None),
        ("p3", fans::projective_space(3), None, None),
        {
            let f = fans::flip_threefold();
            ("toric-flip-3fold", Fan::from_file(&f), f.div_basis, f.curve_basis)
        },
        {
            let f = fans::nonconvex_threefold();
            ("fs-nonconvex", Fan::from_file(&f), f.div_basis, f.curve_basis)
        },
    ];
    for (name, fan, db, cb) in cases {
        log.attempt(format!("{name}: tensor = n!·V(P₁,…,Pₙ) on all nef-generator tuples"), || {
            let m = toric::fan_to_chow(&fan, db.as_deref(), cb.as_deref())?;
            let data = toric::toric_data(&fan, db.as_deref(), cb.as_deref())?;
            let n = m.n();
            let nfact = factorial(n);
            let mut gens = m.nef().extreme_rays();
            // a few integral interior classes, so the check is not confined to the basis used to build the tensor
            let sum: QVec = gens.iter().fold(vec![q(0); m.rho()], |acc, g| rational::add(&acc, g));
            gens.push(sum.clone());
            gens.push(rational::add(&sum, &gens[0]));
            let polys = gens.iter().map(|g| toric::class_polytope(&fan, &data.groups, g)).collect::<Result<Vec<_>>>()?;
            let mut tuples = 0;
            let mut bad = Vec::new();
            for idx in (0..gens.len()).combinations_with_replacement(n) {
                tuples += 1;
                let fs: Vec<QVec> = idx.iter().map(|&i| gens[i].clone()).collect();
                let ps: Vec<_> = idx.iter().map(|&i| polys[i].clone()).collect();
                let mv = &nfact * mixed_volume(&ps)?;
                let t = m.tensor().eval_exact(&fs);
                if t != mv {
                    bad.push(format!("{idx:?}: {} vs {}", rational::format_q(&t), rational::format_q(&mv)));
                }
            }
            toric::check_wall_consistency(&fan, &data, m.tensor())?;
            Ok((bad.is_empty(), if bad.is_empty() { format!("{tuples} tuples exact, walls consistent") } else { bad.join("; ") }))
        });
    }
}

fn lorentzian(log: &mut Log, cfg: &VerifyConfig) {
    let mut rng = cfg.rng(9);
    let (mut orth, mut neg, mut fixed, mut generic) = (Tally::new(), Tally::new(), Tally::new(), Tally::new());
    let mut errors: Vec<String> = Vec::new();
    let mut nonzero = 0;
    for i in 0..1000 {
        let k = 1 + i % 6;
        let (n, mode) = if i % 3 == 0 { (4, Mode::Hyperkahler) } else { (2, Mode::Surface) };
        let qm = match random_instance(k, n, mode, &mut rng) {
            Ok(m) => m,
            Err(e) => {
                errors.push(e.to_string());
                continue;
            }
        };
        let Some(w) = sample_q_dual(&qm, &mut rng) else {
            errors.push("no interior point of C* found".into());
            continue;
        };
        let scale = qm.qf(&w, &w).abs().max(w.iter().map(|x| x * x).sum::<f64>());
        match qm.zariski_q(&w) {
            Ok(z) => {
                let r = z.q_p_gamma.abs() / scale;
                orth.add(r, r <= 1e-7);
                let gn = z.gamma.iter().fold(0.0f64, |a, b| a.max(b.abs()));
                if gn > 1e-9 * w.iter().fold(0.0f64, |a, b| a.max(b.abs())) {
                    nonzero += 1;
                    neg.add(z.q_gamma_gamma / scale, z.q_gamma_gamma < 0.0);
                }
            }
            Err(e) => errors.push(e.to_string()),
        }
        // Hf = f on C (as the weight-n/(n−1) function q^{n/(2(n−1))})
        let (v, _) = sample_interior(qm.cone(), &mut rng);
        // generic optimizer, independent of the face enumeration
        let want = qm.qf(&v, &v).powf(n as f64 / (2.0 * (n as f64 - 1.0)));
        if i % 10 == 0 {
            match qm.polar_generic(&v, &cfg.opts) {
                Ok(r) => {
                    let e = (r.value - want).abs() / want;
                    fixed.add(e, e <= 1e-6);
                }
                Err(e) => errors.push(e.to_string()),
            }
        }
        if i % 20 == 0 {
            match (qm.polar_closed_form(&w), qm.polar_generic(&w, &cfg.opts)) {
                (Ok((a, _)), Ok(b)) => {
                    let e = (a - b.value).abs() / a.max(1e-300);
                    generic.add(e, e <= 1e-6);
                }
                (Err(e), _) | (_, Err(e)) => errors.push(e.to_string()),
            }
        }
    }
    let err_note = if errors.is_empty() { String::new() } else { format!("; {} errors, first: {}", errors.len(), errors[0]) };
    log.check("1000 instances: q(p, γ) = 0 (1e-7)", orth.ok() && errors.is_empty(), orth.detail("|q(p,γ)|") + &err_note);
    log.check("q(γ, γ) < 0 whenever γ ≠ 0", neg.failures == 0 && nonzero > 0, format!("{nonzero} classes with γ ≠ 0, {} violations", neg.failures));
    log.check("Hf = q^{n/(2(n−1))} on C via the generic optimizer (1e-6)", fixed.ok(), fixed.detail("rel err"));
    log.check("closed form agrees with the generic optimizer (1e-6)", generic.ok(), generic.detail("rel err"));

    for n in [2usize, 4] {
        let mode = if n == 2 { Mode::Surface } else { Mode::Hyperkahler };
        let (mut dual_ok, mut vol) = (0usize, Tally::new());
        let mut errors: Vec<String> = Vec::new();
        let trials = 15;
        for i in 0..trials {
            let k = 1 + i % 3;
            let res = (|| -> Result<()> {
                let qm = random_instance(k, n, mode, &mut rng)?;
                let m = qm.to_chow()?;
                let qinv = linalg::inverse(qm.q()).expect("nondegenerate");
                let psi_nef: Vec<QVec> = m.nef().generators().iter().map(|g| linalg::mat_vec(qm.q(), g)).collect();
                let psi_cone = PolyhedralCone::new(m.rho(), psi_nef)?;
                let qdual = dual_cone(m.eff_curve(), &qinv)?;
                dual_ok += psi_cone.same_cone(&qdual) as usize;
                let (a, _) = sample_interior(m.nef(), &mut rng);
                let got = curve_volume(&m, &qm.psi(&a), &cfg.opts)?.value;
                let want = qm.qf(&a, &a).powf(n as f64 / (2.0 * (n as f64 - 1.0)));
                let e = (got - want).abs() / want;
                vol.add(e, e <= 1e-6);
                Ok(())
            })();
            if let Err(e) = res {
                errors.push(e.to_string());
            }
        }
        let err_note = if errors.is_empty() { String::new() } else { format!("; first error: {}", errors[0]) };
        log.check(
            format!("n = {n}: ψ(Nef¹) is q-dual to Eff₁"),
            dual_ok == trials,
            format!("{dual_ok}/{trials} exact{err_note}"),
        );
        log.check(format!("n = {n}: vol^(ψ(A)) = q(A,A)^{{n/(2(n−1))}} (1e-6)"), vol.ok() && errors.is_empty(), vol.detail("rel err"));
    }
}

/// Interior point of `C* = {w : q(w, g) > 0 ∀ g}` by perturbing an interior point of `C`
/// (which lies in `C*`) and rejecting until the facet inequalities hold.
fn sample_q_dual(qm: &QuadraticModel, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
    let (v, _) = sample_interior(qm.cone(), rng);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let gens = qm.cone().generators_f64();
    for attempt in 0..200 {
        let r = norm * rng.gen_range(0.0..2.0) / (1.0 + attempt as f64 / 20.0);
        let w: Vec<f64> = v.iter().map(|x| x + r * rng.gen_range(-1.0..1.0)).collect();
        if gens.iter().all(|g| qm.qf(&w, g) > 1e-9 * norm * g.iter().map(|x| x * x).sum::<f64>().sqrt()) {
            return Some(w);
        }
    }
    None
}

fn optimal_constant(log: &mut Log, cfg: &VerifyConfig) {
    log.attempt("n = 3, ε = 0.5: witness found", || {
        let r = optimality_probe(3, 0.5, &cfg.opts)?;
        Ok(match &r.witness {
            Some(w) => (true, format!("λ = {:?}, criterion {:.6}", w.lambda, w.criterion)),
            None => (false, format!("no witness in {} grid points", r.grid_points)),
        })
    });
    log.attempt("n = 3, ε = 0: no witness on the grid", || {
        let r = optimality_probe(3, 0.0, &cfg.opts)?;
        Ok(match &r.witness {
            Some(w) => (false, format!("unexpected witness λ = {:?}", w.lambda)),
            None => (true, format!("{} grid points, none violate", r.grid_points)),
        })
    });
    log.attempt("n = 4, ε = 0.5: witness found", || {
        let r = optimality_probe(4, 0.5, &cfg.opts)?;
        Ok((r.witness.is_some(), format!("{} grid points searched", r.grid_points)))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_root_matches_examples() {
        assert!((flip_negative_part(&[2.0, 1.0, 1.0]).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!(flip_negative_part(&[2.0, 3.0, 3.0]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn suite_lookup() {
        assert_eq!(lookup("3"), Some((3, "toric-flip")));
        assert_eq!(lookup("involution"), Some((7, "involution")));
        assert!(lookup("nope").is_none());
    }

    #[test]
    fn closed_form_suites_pass() {
        let cfg = VerifyConfig::default();
        for name in ["proj-bundle-derivative", "toric-flip", "optimal-constant"] {
            let r = run_suite(name, &cfg).unwrap();
            assert!(r.passed, "{:#?}", r.failures().collect::<Vec<_>>());
        }
    }
}
