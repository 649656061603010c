//! Numerical checks of the inequalities satisfied by `vol`, `vol^` and
//! general polar transforms. Each check returns a report rather than
//! failing, so that suites can aggregate them.

use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{curve_volume, dot, polar_eval, zariski, ConcaveFn, PolarOptions, PolarTransformFn};
use crate::chow::ChowModel;
use crate::cones::{dual_cone, PolyhedralCone};
use crate::error::Result;
use crate::linalg;
use crate::presets::diagonal_abelian;
use crate::rational::{self, QVec, Q};

/// Positive combination of the cone generators with weights `k/1000`, `k ∈ [1, 1000]`.
pub fn sample_interior(cone: &PolyhedralCone, rng: &mut ChaCha8Rng) -> (Vec<f64>, QVec) {
    let mut v = vec![Q::from_integer(0.into()); cone.dim()];
    for g in cone.generators() {
        let w = rational::qf(rng.gen_range(1..=1000), 1000);
        for (a, b) in v.iter_mut().zip(g) {
            *a += &w * b;
        }
    }
    (rational::to_f64_vec(&v), v)
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `(lhs − rhs) / max(|lhs|, |rhs|, 1e-300)`.
    pub rel_slack: f64,
}

impl InequalityReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        let d = lhs.abs().max(rhs.abs()).max(1e-300);
        InequalityReport { lhs, rhs, rel_slack: (lhs - rhs) / d }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.rel_slack >= -tol
    }

    pub fn is_equality(&self, tol: f64) -> bool {
        self.rel_slack.abs() <= tol
    }
}

fn mixed(m: &ChowModel, parts: &[(&[f64], usize)]) -> f64 {
    let mut fs: Vec<&[f64]> = Vec::new();
    for (v, k) in parts {
        fs.extend(std::iter::repeat_n(*v, *k));
    }
    m.mixed_number(&fs)
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot(a, b) / (na * nb)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProportionalityReport {
    pub inequality: InequalityReport,
    /// `1 − cos` of the angle between the witnesses.
    pub cos_gap: f64,
    pub equality: bool,
    pub proportional: bool,
}

/// Thresholds for deciding equality and proportionality; values between the
/// tight and loose bounds are treated as undecided.
#[derive(Clone, Copy, Debug)]
pub struct Band {
    pub eq_tight: f64,
    pub eq_loose: f64,
    pub ray_tight: f64,
    pub ray_loose: f64,
}

impl Default for Band {
    fn default() -> Self {
        Band { eq_tight: 1e-9, eq_loose: 1e-6, ray_tight: 1e-10, ray_loose: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Agree,
    Mismatch,
    Undecided,
}

impl ProportionalityReport {
    /// Holds, and equality is detected exactly when the witnesses are proportional.
    pub fn passes(&self, tol: f64) -> bool {
        self.inequality.holds(tol) && self.equality == self.proportional
    }

    /// Equality ⇔ proportionality, judged only where both sides are clear-cut.
    pub fn verdict(&self, band: Band) -> Verdict {
        let slack = self.inequality.rel_slack.abs();
        let eq = if slack <= band.eq_tight {
            Some(true)
        } else if slack > band.eq_loose {
            Some(false)
        } else {
            None
        };
        let prop = if self.cos_gap <= band.ray_tight {
            Some(true)
        } else if self.cos_gap > band.ray_loose {
            Some(false)
        } else {
            None
        };
        match (eq, prop) {
            (Some(a), Some(b)) if a == b => Verdict::Agree,
            (Some(true), Some(false)) | (Some(false), Some(true)) => Verdict::Mismatch,
            _ => Verdict::Undecided,
        }
    }
}

/// Khovanskii–Teissier: `A^{n−1}·B ≥ (Aⁿ)^{(n−1)/n}(Bⁿ)^{1/n}` for nef `A`, `B`.
pub fn kt_check(m: &ChowModel, a: &[f64], b: &[f64], eq_tol: f64) -> ProportionalityReport {
    let n = m.n();
    let nf = n as f64;
    let lhs = mixed(m, &[(a, n - 1), (b, 1)]);
    let rhs = m.vol(a).powf((nf - 1.0) / nf) * m.vol(b).powf(1.0 / nf);
    let inequality = InequalityReport::new(lhs, rhs);
    let cos_gap = 1.0 - cosine(a, b);
    ProportionalityReport { equality: inequality.is_equality(eq_tol), proportional: cos_gap <= eq_tol, cos_gap, inequality }
}

/// `s(y·v)(D(v)·x) ≥ f(v)(y·x)` with `f = vol`, `s = n`, `D(v) = v^{n−1}`.
/// Holds for movable `y`; for merely pseudo-effective `y` it can fail when
/// `Nef¹ ≠ Eff¹` (e.g. `v = ξ+f`, `x = f`, `y = ξ²` on the projective bundle).
pub fn reverse_kt_check(m: &ChowModel, v: &[f64], x: &[f64], y: &[f64]) -> InequalityReport {
    let n = m.n();
    let lhs = n as f64 * m.pair(v, y) * mixed(m, &[(v, n - 1), (x, 1)]);
    let rhs = m.vol(v) * m.pair(x, y);
    InequalityReport::new(lhs, rhs)
}

/// `(β^k·α^{n−k})(α^k·γ^{n−k}) ≥ k!(n−k)!/n! · αⁿ · (β^k·γ^{n−k})`.
pub fn mixed_kt_check(m: &ChowModel, alpha: &[f64], beta: &[f64], gamma: &[f64], k: usize) -> InequalityReport {
    let n = m.n();
    assert!((1..n).contains(&k), "1 ≤ k ≤ n−1");
    let fact = |j: usize| (1..=j).map(|i| i as f64).product::<f64>();
    let lhs = mixed(m, &[(beta, k), (alpha, n - k)]) * mixed(m, &[(alpha, k), (gamma, n - k)]);
    let rhs = fact(k) * fact(n - k) / fact(n) * m.vol(alpha) * mixed(m, &[(beta, k), (gamma, n - k)]);
    InequalityReport::new(lhs, rhs)
}

/// `vol^(α+β)^{(n−1)/n} ≥ vol^(α)^{(n−1)/n} + vol^(β)^{(n−1)/n}`, equality ⇔ positive parts proportional.
pub fn log_concavity_check(
    m: &ChowModel,
    alpha: &[f64],
    beta: &[f64],
    eq_tol: f64,
    opts: &PolarOptions,
) -> Result<ProportionalityReport> {
    let nf = m.n() as f64;
    let e = (nf - 1.0) / nf;
    let za = zariski(m, alpha, None, opts)?;
    let zb = zariski(m, beta, None, opts)?;
    let sum: Vec<f64> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
    let vs = curve_volume(m, &sum, opts)?.value;
    let inequality = InequalityReport::new(vs.powf(e), za.value.powf(e) + zb.value.powf(e));
    let cos_gap = 1.0 - cosine(&za.positive_part, &zb.positive_part);
    Ok(ProportionalityReport { equality: inequality.is_equality(eq_tol), proportional: cos_gap <= eq_tol, cos_gap, inequality })
}

#[derive(Clone, Debug, Serialize)]
pub struct MorseReport {
    /// `vol^(α) − n·B_α·β`.
    pub criterion: f64,
    /// Exact interior membership of `α − β` in `Eff₁` (when rational data is supplied).
    pub big_certificate: Option<bool>,
    /// `Bⁿ − n²/(n−1)·B·β`.
    pub lower_bound: f64,
    /// `vol^(α − β)` when `α − β` is big.
    pub vol_difference: Option<f64>,
}

impl MorseReport {
    /// Positive criterion forces bigness; when big, the lower bound holds.
    pub fn passes(&self, tol: f64) -> bool {
        let big_ok = self.criterion <= 0.0 || self.big_certificate != Some(false);
        let bound_ok = self.vol_difference.is_none_or(|v| v - self.lower_bound >= -tol * v.abs().max(1.0));
        big_ok && bound_ok
    }
}

pub fn morse_check(
    m: &ChowModel,
    alpha: &[f64],
    beta: &[f64],
    exact: Option<(&[Q], &[Q])>,
    opts: &PolarOptions,
) -> Result<MorseReport> {
    let n = m.n() as f64;
    let z = zariski(m, alpha, exact.map(|e| e.0), opts)?;
    let bb = m.pair(&z.b, beta);
    let criterion = z.value - n * bb;
    let lower_bound = z.value - n * n / (n - 1.0) * bb;
    let diff: Vec<f64> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
    let big = match exact {
        Some((a, b)) => Some(m.eff_curve().interior_contains_exact(&rational::sub(a, b))?),
        None => Some(m.eff_curve().interior_contains(&diff, 0.0)?),
    };
    let vol_difference = if big == Some(true) { Some(curve_volume(m, &diff, opts)?.value) } else { None };
    Ok(MorseReport { criterion, big_certificate: big, lower_bound, vol_difference })
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimalityWitness {
    pub lambda: Vec<f64>,
    pub alpha: Vec<f64>,
    pub gamma: Vec<f64>,
    /// `vol^(α) − (n−ε)·B_α·γ`.
    pub criterion: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeResult {
    pub n: usize,
    pub epsilon: f64,
    pub grid_points: usize,
    pub witness: Option<OptimalityWitness>,
}

/// Rational grid used by [`optimality_probe`].
pub const PROBE_GRID: &[(i64, i64)] =
    &[(1, 64), (1, 32), (1, 16), (1, 8), (1, 4), (1, 2), (3, 4), (1, 1), (5, 4), (3, 2), (2, 1), (3, 1), (4, 1)];

/// Searches `λ` with `α = 𝟙`, `γ = curve_power(λ)` on `diagonal-abelian(n)` such
/// that `vol^(α) − (n−ε)B_α·γ > 0` while `α − γ` is not big.
pub fn optimality_probe(n: usize, epsilon: f64, opts: &PolarOptions) -> Result<ProbeResult> {
    let m = diagonal_abelian(n)?;
    let one = vec![1.0; n];
    let one_q: QVec = vec![rational::q(1); n];
    let z = zariski(&m, &one, Some(&one_q), opts)?;
    let grid: Vec<Q> = PROBE_GRID.iter().map(|&(a, b)| rational::qf(a, b)).collect();
    let mut idx = vec![0usize; n];
    let mut count = 0;
    loop {
        count += 1;
        let lambda: QVec = idx.iter().map(|&i| grid[i].clone()).collect();
        let gamma = m.curve_power_exact(&lambda);
        let gamma_f = rational::to_f64_vec(&gamma);
        let criterion = z.value - (n as f64 - epsilon) * m.pair(&z.b, &gamma_f);
        if criterion > 0.0 {
            let diff = rational::sub(&one_q, &gamma);
            if !m.eff_curve().interior_contains_exact(&diff)? {
                return Ok(ProbeResult {
                    n,
                    epsilon,
                    grid_points: count,
                    witness: Some(OptimalityWitness {
                        lambda: rational::to_f64_vec(&lambda),
                        alpha: one,
                        gamma: gamma_f,
                        criterion,
                    }),
                });
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == n {
                return Ok(ProbeResult { n, epsilon, grid_points: count, witness: None });
            }
            idx[k] += 1;
            if idx[k] < grid.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionReport {
    pub samples: usize,
    pub max_rel_err: f64,
    pub errors: Vec<f64>,
}

/// `|H(Hf)(v) − f(v)| / f(v)` on `samples` interior points of the cone.
pub fn involution_check(
    f: &dyn ConcaveFn,
    cone: &PolyhedralCone,
    pairing: &linalg::QMat,
    samples: usize,
    rng: &mut ChaCha8Rng,
    opts: &PolarOptions,
) -> Result<InvolutionReport> {
    let pf = linalg::to_f64_mat(pairing);
    let pt = linalg::to_f64_mat(&linalg::transpose(pairing));
    // w-side cone: {w : vᵀ P w ≥ 0 ∀ v ∈ C}
    let dual = dual_cone(cone, &linalg::transpose(pairing))?;
    let hf = PolarTransformFn { f, cone, pairing: &pf, opts: opts.clone() };
    let outer = PolarOptions { multistart: opts.multistart.min(3), ..opts.clone() };
    let mut errors = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (v, _) = sample_interior(cone, rng);
        let hh = polar_eval(&hf, &dual, &pt, &v, &outer)?;
        let fv = f.eval(&v);
        errors.push((hh.value - fv).abs() / fv);
    }
    let max_rel_err = errors.iter().fold(0.0f64, |a, b| a.max(*b));
    Ok(InvolutionReport { samples, max_rel_err, errors })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConcavityReport {
    pub trials: usize,
    pub log_concavity_failures: usize,
    pub equality_cases: usize,
    pub proportionality_mismatches: usize,
    /// Pairs inside the equality/proportionality fringe.
    pub undecided: usize,
    pub continuity_failures: usize,
    pub linearity_failures: usize,
    pub worst_slack: f64,
}

impl ConcavityReport {
    pub fn passed(&self) -> bool {
        self.log_concavity_failures == 0
            && self.proportionality_mismatches == 0
            && self.continuity_failures == 0
            && self.linearity_failures == 0
    }
}

/// Log-concavity with equality detection, continuity of `α ↦ B_α`, and
/// linearity along `c₁α + c₂B_α^{n−1}`.
pub fn concavity_suite(m: &ChowModel, trials: usize, rng: &mut ChaCha8Rng, opts: &PolarOptions) -> Result<ConcavityReport> {
    let eq_tol = 1e-6;
    let mut rep = ConcavityReport { trials, worst_slack: f64::INFINITY, ..Default::default() };
    for i in 0..trials {
        let (alpha, _) = sample_interior(m.eff_curve(), rng);
        let za = zariski(m, &alpha, None, opts)?;
        // alternate random partners with partners sharing the positive part ray
        let beta: Vec<f64> = if i % 2 == 0 {
            sample_interior(m.eff_curve(), rng).0
        } else {
            let c = rng.gen_range(0.2..3.0);
            let t = rng.gen_range(0.0..2.0);
            za.positive_part.iter().zip(&za.gamma).map(|(p, g)| c * p + t * g).collect()
        };
        let r = log_concavity_check(m, &alpha, &beta, eq_tol, opts)?;
        rep.worst_slack = rep.worst_slack.min(r.inequality.rel_slack);
        if !r.inequality.holds(1e-7) {
            rep.log_concavity_failures += 1;
        }
        if r.equality {
            rep.equality_cases += 1;
        }
        match r.verdict(Band::default()) {
            Verdict::Mismatch => rep.proportionality_mismatches += 1,
            Verdict::Undecided => rep.undecided += 1,
            Verdict::Agree => {}
        }

        // continuity: ‖B_{α+δη} − B_α‖/δ stays bounded as δ shrinks
        let (eta, _) = sample_interior(m.eff_curve(), rng);
        let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&d| -> Result<f64> {
                let ap: Vec<f64> = alpha.iter().zip(&eta).map(|(a, e)| a + d * e).collect();
                let zp = zariski(m, &ap, None, opts)?;
                let diff: f64 = zp.b.iter().zip(&za.b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
                Ok(diff / d)
            })
            .collect::<Result<_>>()?;
        let lip = ratios[0].max(1e-9);
        if ratios.iter().any(|r| *r > 10.0 * lip + 1e-6) {
            rep.continuity_failures += 1;
        }

        // linearity: B_α also computes c₁α + c₂B_α^{n−1}
        let (c1, c2) = (rng.gen_range(0.1..2.0), rng.gen_range(0.0..2.0));
        let lin: Vec<f64> = alpha.iter().zip(&za.positive_part).map(|(a, p)| c1 * a + c2 * p).collect();
        let zl = zariski(m, &lin, None, opts)?;
        if cosine(&zl.b, &za.b) < 1.0 - 1e-9 {
            rep.linearity_failures += 1;
        }
    }
    Ok(rep)
}

/// `Hf(w)^{(s−1)/s}·f(v)^{1/s} ≤ w·v`; returns `(lhs, rhs)`.
pub fn young_fenchel(f: &dyn ConcaveFn, hf_value: f64, v: &[f64], w_dot_v: f64) -> (f64, f64) {
    let s = f.weight();
    (hf_value.powf((s - 1.0) / s) * f.eval(v).powf(1.0 / s), w_dot_v)
}

#[derive(Clone, Debug, Serialize)]
pub struct CiDistance {
    /// Chord distance between the unit directions of the target and the closest sampled class.
    pub distance: f64,
    /// Generator coefficients (on the simplex) of the closest `(Σ xᵢAᵢ)^{n−1}`.
    pub coeffs: Vec<f64>,
    pub closest: Vec<f64>,
}

fn unit(v: &[f64]) -> Option<Vec<f64>> {
    let n = dot(v, v).sqrt();
    (n > 1e-300).then(|| v.iter().map(|x| x / n).collect())
}

/// Distance in direction space from `target` to the image of `gens` under
/// `x ↦ (Σ xᵢ gᵢ)^{n−1}`, optionally after the coordinate change `transform`.
/// Multistart projected descent with finite-difference gradients; the returned
/// distance is an upper bound on the true infimum.
pub fn ci_distance(
    m: &ChowModel,
    gens: &[Vec<f64>],
    target: &[f64],
    transform: Option<&[Vec<f64>]>,
    random_starts: usize,
    rng: &mut ChaCha8Rng,
) -> CiDistance {
    let apply = |c: Vec<f64>| match transform {
        Some(t) => t.iter().map(|r| dot(r, &c)).collect(),
        None => c,
    };
    let t = unit(&apply(target.to_vec())).expect("nonzero target");
    let k = gens.len();
    let image = |x: &[f64]| -> Vec<f64> {
        let mut d = vec![0.0; m.rho()];
        for (xi, g) in x.iter().zip(gens) {
            for (a, b) in d.iter_mut().zip(g) {
                *a += xi * b;
            }
        }
        apply(m.curve_power(&d.into()).0)
    };
    let obj = |x: &[f64]| -> f64 {
        match unit(&image(x)) {
            Some(u) => u.iter().zip(&t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
            None => 2.0,
        }
    };
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0 / k as f64; k]];
    for i in 0..k {
        for j in i..k {
            let mut x = vec![0.02 / k as f64; k];
            x[i] += 0.49;
            x[j] += 0.49;
            starts.push(super::project_simplex(&x));
        }
    }
    for _ in 0..random_starts {
        let e: Vec<f64> = (0..k).map(|_| -rng.gen_range(1e-12f64..1.0).ln()).collect();
        let sum: f64 = e.iter().sum();
        starts.push(e.iter().map(|x| x / sum).collect());
    }
    let mut best = (f64::INFINITY, starts[0].clone());
    for x0 in starts {
        let mut x = x0;
        let mut fx = obj(&x);
        let mut step = 1.0;
        for _ in 0..400 {
            let g = super::fd_grad(obj, &x);
            let mut moved = false;
            while step > 1e-14 {
                let y = super::project_simplex(&x.iter().zip(&g).map(|(a, b)| a - step * b).collect::<Vec<_>>());
                let fy = obj(&y);
                if fy < fx - 1e-15 {
                    moved = fx - fy > 1e-13;
                    x = y;
                    fx = fy;
                    step *= 2.0;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if fx < best.0 {
            best = (fx, x);
        }
    }
    let closest = image(&best.1);
    CiDistance { distance: best.0, coeffs: best.1, closest }
}

/// Exact sign check that `γ` pairs negatively with some effective divisor.
pub fn not_movable_exact(m: &ChowModel, gamma: &[Q]) -> bool {
    m.eff_div().generators().iter().any(|e| m.pair_exact(e, gamma).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;
    use rand::SeedableRng;

    #[test]
    fn nonconvex_witness_far_from_ci() {
        use crate::presets::{nonconvex_u_transform, NONCONVEX_NEF, NONCONVEX_U};
        let m = preset("fs-nonconvex").unwrap();
        let gens: Vec<Vec<f64>> = NONCONVEX_NEF.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        let v: Vec<f64> = (0..5).map(|i| (NONCONVEX_U[1][i] + NONCONVEX_U[3][i]) as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = nonconvex_u_transform();
        let d = ci_distance(&m, &gens, &v, Some(&t), 16, &mut rng);
        assert!(d.distance > 0.5 && d.distance < 0.7, "{d:?}");
        let raw = ci_distance(&m, &gens, &v, None, 16, &mut rng);
        assert!(raw.distance > 1e-4, "{raw:?}");
        // a genuine complete intersection is at distance 0
        let on = m.curve_power(&[1.0, 2.0, 1.0, 3.0, 1.5].iter().zip(0..).fold(vec![0.0; 5], |mut acc, (x, i)| {
            for (a, b) in acc.iter_mut().zip(&gens[i]) {
                *a += x * b;
            }
            acc
        }).into()).0;
        assert!(ci_distance(&m, &gens, &on, Some(&t), 4, &mut rng).distance < 1e-5);
    }

    #[test]
    fn reverse_kt_flip_example() {
        let m = preset("toric-flip-3fold").unwrap();
        let b = [1.0, 1.0, 2.0];
        let t = [2.0, 3.0, 3.0];
        let r = reverse_kt_check(&m, &b, &b, &t);
        assert_eq!((r.lhs, r.rhs), (108.0, 36.0));
        let z = reverse_kt_check(&m, &b, &b, &[0.0; 3]);
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
    }

    #[test]
    fn mixed_kt_proj_bundle() {
        let m = preset("proj-bundle-p1").unwrap();
        let a = [1.0, 1.0];
        let r = mixed_kt_check(&m, &a, &a, &a, 1);
        assert!((r.lhs - 4.0).abs() < 1e-12 && (r.rhs - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn kt_detects_proportional_pairs() {
        let m = preset("toric-flip-3fold").unwrap();
        let r = kt_check(&m, &[1.0, 1.0, 2.0], &[2.0, 2.0, 4.0], 1e-9);
        assert!(r.equality && r.proportional);
        let r = kt_check(&m, &[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0], 1e-9);
        assert!(!r.equality && !r.proportional && r.passes(1e-12));
    }

    #[test]
    fn probe_finds_witness_only_for_positive_epsilon() {
        let o = PolarOptions::default();
        assert!(optimality_probe(3, 0.5, &o).unwrap().witness.is_some());
        assert!(optimality_probe(3, 0.0, &o).unwrap().witness.is_none());
    }

    #[test]
    fn morse_proj_bundle_example() {
        let m = preset("proj-bundle-p1").unwrap();
        let o = PolarOptions::default();
        for s in [0.5, 1.0, 1.1] {
            let r = morse_check(&m, &[3.0, 1.0], &[s, 0.0], None, &o).unwrap();
            assert!((r.criterion - (3.5 - 3.0 * s)).abs() < 1e-8);
            assert_eq!(r.big_certificate, Some(true));
            let x: f64 = 3.0 - s;
            let expect = if x >= 2.0 { 1.5 * x - 1.0 } else { x.powf(1.5) / 2f64.sqrt() };
            assert!((r.vol_difference.unwrap() - expect).abs() < 1e-8);
            assert!(r.passes(1e-9));
        }
    }

    #[test]
    fn involution_on_power_function() {
        let f = super::super::PowerFn { s: 2.5 };
        let cone = PolyhedralCone::orthant(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = involution_check(&f, &cone, &linalg::identity(1), 5, &mut rng, &PolarOptions::default()).unwrap();
        assert!(r.max_rel_err < 1e-8, "{r:?}");
    }
}
