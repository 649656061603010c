//! Polar transforms of homogeneous concave functions on polyhedral cones.
//!
//! For `f` of weight `s > 1` on a cone `C` and a covector `w`,
//!
//! ```text
//! Hf(w) = inf_{v ∈ C°} ( w·v / f(v)^{1/s} )^{s/(s-1)}
//! ```
//!
//! The infimum is taken over the simplex of coefficients on the generators
//! of `C`. The log-ratio is minimized by projected gradient from several
//! seeded starts; the best point is then polished by Newton's method on the
//! stationarity system of its active face.

pub mod checks;
pub mod zariski;

use nalgebra::{DMatrix, DVector};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chow::ChowModel;
use crate::cones::PolyhedralCone;
use crate::error::{Error, Result};

pub use zariski::{derivative, derivative_fd_check, lift_zariski, zariski, FdCheck, Lift, Residuals, ZariskiResult};

/// A nonnegative function on a cone, homogeneous of weight `s > 1`, with `f^{1/s}` concave.
pub trait ConcaveFn {
    fn weight(&self) -> f64;
    fn dim(&self) -> usize;
    fn eval(&self, v: &[f64]) -> f64;

    fn grad(&self, v: &[f64]) -> Vec<f64> {
        fd_grad(|x| self.eval(x), v)
    }

    fn hessian(&self, v: &[f64]) -> Vec<Vec<f64>> {
        fd_jacobian(|x| self.grad(x), v)
    }
}

fn fd_step(v: &[f64]) -> f64 {
    1e-6 * (1.0 + v.iter().fold(0.0f64, |a, x| a.max(x.abs())))
}

pub fn fd_grad(f: impl Fn(&[f64]) -> f64, v: &[f64]) -> Vec<f64> {
    let h = fd_step(v);
    let mut x = v.to_vec();
    (0..v.len())
        .map(|k| {
            x[k] = v[k] + h;
            let a = f(&x);
            x[k] = v[k] - h;
            let b = f(&x);
            x[k] = v[k];
            (a - b) / (2.0 * h)
        })
        .collect()
}

pub fn fd_jacobian(g: impl Fn(&[f64]) -> Vec<f64>, v: &[f64]) -> Vec<Vec<f64>> {
    let h = fd_step(v) * 10.0;
    let n = v.len();
    let mut x = v.to_vec();
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        x[k] = v[k] + h;
        let a = g(&x);
        x[k] = v[k] - h;
        let b = g(&x);
        x[k] = v[k];
        cols.push(a.iter().zip(&b).map(|(p, q)| (p - q) / (2.0 * h)).collect::<Vec<f64>>());
    }
    // symmetrize
    (0..n).map(|i| (0..n).map(|j| 0.5 * (cols[j][i] + cols[i][j])).collect()).collect()
}

/// `vol(B) = Bⁿ` on `N¹` of a model.
pub struct VolumeFn<'a> {
    pub model: &'a ChowModel,
}

impl ConcaveFn for VolumeFn<'_> {
    fn weight(&self) -> f64 {
        self.model.n() as f64
    }
    fn dim(&self) -> usize {
        self.model.rho()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        self.model.vol(v)
    }
    fn grad(&self, v: &[f64]) -> Vec<f64> {
        let n = self.model.n() as f64;
        self.model.power_form(v).into_iter().map(|x| n * x).collect()
    }
    fn hessian(&self, v: &[f64]) -> Vec<Vec<f64>> {
        let n = self.model.n() as f64;
        let c = n * (n - 1.0);
        self.model
            .tensor()
            .power_matrix(v)
            .into_iter()
            .map(|r| r.into_iter().map(|x| c * x).collect())
            .collect()
    }
}

/// `f(v) = v^s` on the half-line.
pub struct PowerFn {
    pub s: f64,
}

impl ConcaveFn for PowerFn {
    fn weight(&self) -> f64 {
        self.s
    }
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, v: &[f64]) -> f64 {
        v[0].max(0.0).powf(self.s)
    }
    fn grad(&self, v: &[f64]) -> Vec<f64> {
        vec![self.s * v[0].max(0.0).powf(self.s - 1.0)]
    }
    fn hessian(&self, v: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![self.s * (self.s - 1.0) * v[0].max(0.0).powf(self.s - 2.0)]]
    }
}

/// `f(v) = q(v,v)^{n/2}` for a Lorentzian form `q`.
pub struct QuadraticPowerFn<'a> {
    pub q: &'a [Vec<f64>],
    pub n: usize,
}

impl QuadraticPowerFn<'_> {
    fn qv(&self, v: &[f64]) -> Vec<f64> {
        self.q.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

impl ConcaveFn for QuadraticPowerFn<'_> {
    fn weight(&self) -> f64 {
        self.n as f64
    }
    fn dim(&self) -> usize {
        self.q.len()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        let qq: f64 = v.iter().zip(self.qv(v)).map(|(a, b)| a * b).sum();
        qq.max(0.0).powf(self.n as f64 / 2.0)
    }
    fn grad(&self, v: &[f64]) -> Vec<f64> {
        let qv = self.qv(v);
        let qq: f64 = v.iter().zip(&qv).map(|(a, b)| a * b).sum::<f64>().max(0.0);
        let c = self.n as f64 * qq.powf(self.n as f64 / 2.0 - 1.0);
        qv.into_iter().map(|x| c * x).collect()
    }
    fn hessian(&self, v: &[f64]) -> Vec<Vec<f64>> {
        let qv = self.qv(v);
        let qq: f64 = v.iter().zip(&qv).map(|(a, b)| a * b).sum::<f64>().max(0.0);
        let h = self.n as f64 / 2.0;
        let c1 = 2.0 * h * qq.powf(h - 1.0);
        let c2 = if self.n > 2 { 4.0 * h * (h - 1.0) * qq.powf(h - 2.0) } else { 0.0 };
        (0..qv.len())
            .map(|i| (0..qv.len()).map(|j| c1 * self.q[i][j] + c2 * qv[i] * qv[j]).collect())
            .collect()
    }
}

/// The polar transform `Hf` itself, as a function on the dual cone.
///
/// Evaluated by a nested [`polar_eval`]; its gradient is `s/(s-1)·Pᵀ v*`.
pub struct PolarTransformFn<'a> {
    pub f: &'a dyn ConcaveFn,
    pub cone: &'a PolyhedralCone,
    /// `pairing[i][j] = e_i · w_j` between the domain of `f` and its dual.
    pub pairing: &'a [Vec<f64>],
    pub opts: PolarOptions,
}

impl PolarTransformFn<'_> {
    fn inner(&self, w: &[f64]) -> Option<PolarResult> {
        polar_eval(self.f, self.cone, self.pairing, w, &self.opts).ok()
    }
}

impl ConcaveFn for PolarTransformFn<'_> {
    fn weight(&self) -> f64 {
        let s = self.f.weight();
        s / (s - 1.0)
    }
    fn dim(&self) -> usize {
        self.pairing.first().map_or(0, Vec::len)
    }
    fn eval(&self, w: &[f64]) -> f64 {
        self.inner(w).map_or(0.0, |r| r.value)
    }
    fn grad(&self, w: &[f64]) -> Vec<f64> {
        let s = self.f.weight();
        let k = s / (s - 1.0);
        match self.inner(w) {
            Some(r) if r.value > 0.0 => (0..self.dim())
                .map(|j| k * r.minimizer.iter().zip(self.pairing).map(|(v, row)| v * row[j]).sum::<f64>())
                .collect(),
            _ => vec![0.0; self.dim()],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarOptions {
    pub multistart: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Relative tolerance used for boundary and KKT decisions.
    pub tol: f64,
    pub polish: bool,
}

impl Default for PolarOptions {
    fn default() -> Self {
        PolarOptions { multistart: 8, seed: 0, max_iter: 10_000, tol: 1e-9, polish: true }
    }
}

impl PolarOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
    pub fn with_multistart(mut self, k: usize) -> Self {
        self.multistart = k.max(1);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RestartTrace {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarResult {
    /// `Hf(w)`.
    pub value: f64,
    /// Minimizer scaled so that `f(v*) = value` (zero vector when the value is 0).
    pub minimizer: Vec<f64>,
    /// Simplex coefficients of the minimizer ray on the (unit-normalized) generators.
    pub coeffs: Vec<f64>,
    pub restarts: Vec<RestartTrace>,
    /// Relative spread of the converged restart values.
    pub spread: f64,
    /// `min_k (w·g_k − ∇f(v*)·g_k / s)` over normalized generators; ≥ 0 at a true minimizer.
    pub kkt_margin: f64,
    pub polished: bool,
}

/// `Hf(w)` where `w·v = Σ_ij v_i pairing[i][j] w_j`.
pub fn polar_eval(
    f: &dyn ConcaveFn,
    cone: &PolyhedralCone,
    pairing: &[Vec<f64>],
    w: &[f64],
    opts: &PolarOptions,
) -> Result<PolarResult> {
    if w.len() != pairing.first().map_or(0, Vec::len) {
        return Err(Error::DimensionMismatch { expected: pairing.first().map_or(0, Vec::len), got: w.len() });
    }
    let cov: Vec<f64> = pairing.iter().map(|r| r.iter().zip(w).map(|(a, b)| a * b).sum()).collect();
    polar_eval_covector(f, cone, &cov, opts)
}

/// `Hf` at the linear functional `v ↦ cov·v`.
pub fn polar_eval_covector(
    f: &dyn ConcaveFn,
    cone: &PolyhedralCone,
    cov: &[f64],
    opts: &PolarOptions,
) -> Result<PolarResult> {
    let d = f.dim();
    if cone.dim() != d || cov.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: cov.len() });
    }
    let slice = Slice::new(f, cone, cov);
    let cnorm = cov.iter().map(|x| x * x).sum::<f64>().sqrt();
    let zero = |restarts| PolarResult {
        value: 0.0,
        minimizer: vec![0.0; d],
        coeffs: vec![0.0; slice.gens.len()],
        restarts,
        spread: 0.0,
        kkt_margin: 0.0,
        polished: false,
    };
    // outside C* or on its boundary: Hf vanishes
    if cnorm == 0.0 || slice.c.iter().any(|&ck| ck <= 1e-14 * cnorm) {
        return Ok(zero(vec![]));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let k = slice.gens.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut traces = Vec::new();
    for r in 0..opts.multistart.max(1) {
        let x0 = if r == 0 { vec![1.0 / k as f64; k] } else { dirichlet(&mut rng, k) };
        let (x, phi, it, conv) = slice.descend(x0, opts.max_iter);
        traces.push(RestartTrace { value: slice.value_from_phi(phi), iterations: it, converged: conv });
        if phi.is_finite() && best.as_ref().is_none_or(|(b, _)| phi < *b) {
            best = Some((phi, x));
        }
    }
    let Some((phi_best, x_best)) = best else {
        return Err(Error::NoConvergence {
            restarts: traces.len(),
            best: f64::INFINITY,
            trace: traces.iter().map(|t| t.value).collect(),
        });
    };
    if !traces.iter().any(|t| t.converged) {
        let b = slice.value_from_phi(phi_best);
        if b > 0.0 {
            return Err(Error::NoConvergence {
                restarts: traces.len(),
                best: b,
                trace: traces.iter().map(|t| t.value).collect(),
            });
        }
    }
    let pg_value = slice.value_from_phi(phi_best);
    let vals: Vec<f64> = traces.iter().filter(|t| t.converged).map(|t| t.value).collect();
    let spread = if vals.is_empty() || pg_value == 0.0 {
        0.0
    } else {
        vals.iter().fold(0.0f64, |a, v| a.max((v - pg_value).abs())) / pg_value
    };
    if pg_value <= 0.0 {
        return Ok(PolarResult { spread, ..zero(traces) });
    }

    let mut out_x = x_best.clone();
    let mut v = slice.normalized_point(&x_best);
    let mut polished = false;
    if opts.polish {
        if let Some((xp, vp)) = slice.polish(&x_best, opts.tol) {
            let val_p = slice.value_at(&vp);
            if val_p.is_finite() && val_p <= pg_value * (1.0 + 1e-8) {
                out_x = xp;
                v = vp;
                polished = true;
            }
        }
    }
    let value = slice.value_at(&v);
    let kkt_margin = slice.kkt(&v);
    Ok(PolarResult { value, minimizer: v, coeffs: out_x, restarts: traces, spread, kkt_margin, polished })
}

fn dirichlet(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|a| *a /= s);
    x
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|v| (v - theta).max(0.0)).collect()
}

struct Slice<'a> {
    f: &'a dyn ConcaveFn,
    gens: Vec<Vec<f64>>,
    cov: Vec<f64>,
    /// `c_k = cov · g_k`
    c: Vec<f64>,
    s: f64,
}

impl<'a> Slice<'a> {
    fn new(f: &'a dyn ConcaveFn, cone: &PolyhedralCone, cov: &[f64]) -> Self {
        let gens: Vec<Vec<f64>> = cone
            .generators_f64()
            .into_iter()
            .map(|g| {
                let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                g.into_iter().map(|x| x / n).collect()
            })
            .collect();
        let c = gens.iter().map(|g| dot(g, cov)).collect();
        Slice { f, gens, cov: cov.to_vec(), c, s: f.weight() }
    }

    fn point(&self, x: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.f.dim()];
        for (xk, g) in x.iter().zip(&self.gens) {
            if *xk != 0.0 {
                for (a, b) in v.iter_mut().zip(g) {
                    *a += xk * b;
                }
            }
        }
        v
    }

    fn lin(&self, x: &[f64]) -> f64 {
        dot(x, &self.c)
    }

    fn phi(&self, x: &[f64]) -> f64 {
        let lin = self.lin(x);
        let fv = self.f.eval(&self.point(x));
        if lin <= 0.0 || fv <= 0.0 || !fv.is_finite() {
            f64::INFINITY
        } else {
            lin.ln() - fv.ln() / self.s
        }
    }

    fn grad_phi(&self, x: &[f64]) -> Vec<f64> {
        let v = self.point(x);
        let lin = self.lin(x);
        let fv = self.f.eval(&v);
        let gf = self.f.grad(&v);
        self.gens
            .iter()
            .zip(&self.c)
            .map(|(g, ck)| ck / lin - dot(&gf, g) / (self.s * fv))
            .collect()
    }

    fn value_from_phi(&self, phi: f64) -> f64 {
        if phi.is_finite() {
            (phi * self.s / (self.s - 1.0)).exp()
        } else if phi == f64::NEG_INFINITY {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// `(c·v / f(v)^{1/s})^{s/(s-1)}` for a point `v` of the cone.
    fn value_at(&self, v: &[f64]) -> f64 {
        let lin = self.cov_dot(v);
        let fv = self.f.eval(v);
        if lin <= 0.0 || fv <= 0.0 {
            return if lin <= 0.0 { 0.0 } else { f64::INFINITY };
        }
        (lin / fv.powf(1.0 / self.s)).powf(self.s / (self.s - 1.0))
    }

    fn cov_dot(&self, v: &[f64]) -> f64 {
        dot(&self.cov, v)
    }

    /// Rescales the ray through `x` so that `f(v) = c·v`, i.e. `f(v) = Hf(w)`.
    fn normalized_point(&self, x: &[f64]) -> Vec<f64> {
        let v = self.point(x);
        let lin = self.lin(x);
        let fv = self.f.eval(&v);
        let lambda = (lin / fv).powf(1.0 / (self.s - 1.0));
        v.into_iter().map(|a| lambda * a).collect()
    }

    /// Projected gradient with Barzilai–Borwein steps and Armijo backtracking.
    fn descend(&self, mut x: Vec<f64>, max_iter: usize) -> (Vec<f64>, f64, usize, bool) {
        let mut fx = self.phi(&x);
        if !fx.is_finite() {
            return (x, fx, 0, false);
        }
        let mut g = self.grad_phi(&x);
        let mut step = 1.0 / g.iter().map(|a| a.abs()).fold(1e-12, f64::max);
        let mut small = 0usize;
        for it in 0..max_iter {
            let mut accepted = None;
            let mut t = step;
            for _ in 0..80 {
                let y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - t * b).collect();
                let xn = project_simplex(&y);
                let dlin: f64 = g.iter().zip(xn.iter().zip(&x)).map(|(gi, (a, b))| gi * (a - b)).sum();
                let fnew = self.phi(&xn);
                if fnew.is_finite() && fnew <= fx + 1e-4 * dlin {
                    accepted = Some((xn, fnew));
                    break;
                }
                t *= 0.5;
            }
            let Some((xn, fnew)) = accepted else {
                // no descent possible from here: treat as stationary
                let conv = self.stationarity(&x, &g) < 1e-7;
                return (x, fx, it, conv);
            };
            let gn = self.grad_phi(&xn);
            let sv: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
            let yv: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&sv, &yv);
            let ss = dot(&sv, &sv);
            step = if sy > 0.0 { (ss / sy).clamp(1e-12, 1e12) } else { (t * 2.0).min(1e12) };
            let rel = (fx - fnew).abs() / fx.abs().max(1.0);
            x = xn;
            fx = fnew;
            g = gn;
            small = if rel < 1e-10 { small + 1 } else { 0 };
            let pg = self.stationarity(&x, &g);
            if pg < 1e-12 || (small >= 5 && pg < 1e-6) {
                return (x, fx, it + 1, true);
            }
            if ss == 0.0 {
                return (x, fx, it + 1, pg < 1e-7);
            }
        }
        let pg = self.stationarity(&x, &g);
        (x, fx, max_iter, pg < 1e-6)
    }

    fn stationarity(&self, x: &[f64], g: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
        let p = project_simplex(&y);
        p.iter().zip(x).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `r_k = c_k − ∇f(v)·g_k / s`.
    fn residuals(&self, v: &[f64]) -> Vec<f64> {
        let gf = self.f.grad(v);
        self.gens.iter().zip(&self.c).map(|(g, ck)| ck - dot(&gf, g) / self.s).collect()
    }

    fn kkt(&self, v: &[f64]) -> f64 {
        let scale = self.c.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(f64::MIN_POSITIVE);
        self.residuals(v).into_iter().fold(f64::INFINITY, f64::min) / scale
    }

    /// Active-set Newton on `r_k(v) = 0` (k active), `v = Σ_{k active} y_k g_k`.
    fn polish(&self, x: &[f64], tol: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let k = self.gens.len();
        let xmax = x.iter().fold(0.0f64, |a, b| a.max(*b));
        let mut active: Vec<usize> = (0..k).filter(|&i| x[i] > 1e-6 * xmax).collect();
        let v0 = self.normalized_point(x);
        let lin0 = self.lin(x);
        let lambda = self.cov_dot(&v0) / lin0;
        let mut y: Vec<f64> = vec![0.0; k];
        for &i in &active {
            y[i] = x[i] * lambda;
        }
        let scale = self.c.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for _round in 0..(2 * k + 6) {
            y = self.newton_face(&active, y)?;
            // drop negative coefficients
            if let Some((j, _)) = active
                .iter()
                .map(|&i| (i, y[i]))
                .filter(|(_, yi)| *yi < -1e-12 * y.iter().fold(0.0f64, |a, b| a.max(b.abs())))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            {
                active.retain(|&i| i != j);
                y[j] = 0.0;
                continue;
            }
            let v = self.point(&y);
            let r = self.residuals(&v);
            let worst = (0..k)
                .filter(|i| !active.contains(i))
                .map(|i| (i, r[i]))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            match worst {
                Some((j, rj)) if rj < -tol.max(1e-10) * scale => {
                    active.push(j);
                    active.sort_unstable();
                }
                _ => {
                    let ys: f64 = y.iter().map(|a| a.max(0.0)).sum();
                    let xs: Vec<f64> = y.iter().map(|a| a.max(0.0) / ys).collect();
                    let vclean = self.point(&y.iter().map(|a| a.max(0.0)).collect::<Vec<_>>());
                    return Some((xs, vclean));
                }
            }
        }
        None
    }

    fn newton_face(&self, active: &[usize], mut y: Vec<f64>) -> Option<Vec<f64>> {
        if active.is_empty() {
            return None;
        }
        let m = active.len();
        let scale = self.c.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let resid = |y: &[f64]| -> (Vec<f64>, f64) {
            let v = self.point(y);
            let r = self.residuals(&v);
            let ra: Vec<f64> = active.iter().map(|&i| r[i]).collect();
            let nrm = ra.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            (ra, nrm)
        };
        let (mut r, mut nrm) = resid(&y);
        for _ in 0..60 {
            if nrm <= 1e-14 * scale {
                break;
            }
            let v = self.point(&y);
            let h = self.f.hessian(&v);
            let hg: Vec<Vec<f64>> = active
                .iter()
                .map(|&j| h.iter().map(|row| dot(row, &self.gens[j])).collect())
                .collect();
            let jac = DMatrix::from_fn(m, m, |a, b| -dot(&self.gens[active[a]], &hg[b]) / self.s);
            let rhs = DVector::from_iterator(m, r.iter().map(|x| -x));
            let delta = jac.clone().lu().solve(&rhs).or_else(|| jac.svd(true, true).solve(&rhs, 1e-14).ok())?;
            let mut t = 1.0;
            let mut improved = false;
            for _ in 0..40 {
                let mut yn = y.clone();
                for (a, &i) in active.iter().enumerate() {
                    yn[i] += t * delta[a];
                }
                let (rn, nn) = resid(&yn);
                if nn.is_finite() && nn < nrm {
                    y = yn;
                    r = rn;
                    nrm = nn;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if nrm <= 1e-9 * scale {
            Some(y)
        } else {
            None
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The curve volume `vol^(α)`: polar transform of `vol` on `Nef¹` at `α`.
pub fn curve_volume(m: &ChowModel, alpha: &[f64], opts: &PolarOptions) -> Result<PolarResult> {
    m.check_dim(alpha.len())?;
    polar_eval(&VolumeFn { model: m }, m.nef(), m.pairing_f64(), alpha, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::PolyhedralCone;

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(p.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        let p = project_simplex(&[2.0, 0.0]);
        assert_eq!(p, vec![1.0, 0.0]);
    }

    #[test]
    fn power_function_polar() {
        // Hf(w) = inf (w v / v)^{s/(s-1)} · … = w^{s/(s-1)} for f = v^s
        let f = PowerFn { s: 3.0 };
        let cone = PolyhedralCone::orthant(1);
        let r = polar_eval(&f, &cone, &[vec![1.0]], &[2.0], &PolarOptions::default()).unwrap();
        assert!((r.value - 2f64.powf(1.5)).abs() < 1e-10);
        assert!((f.eval(&r.minimizer) - r.value).abs() < 1e-9);
    }

    #[test]
    fn lorentz_form_self_polar_inside_cone() {
        let q = vec![vec![1.0, 0.0], vec![0.0, -1.0]];
        let f = QuadraticPowerFn { q: &q, n: 2 };
        let cone = PolyhedralCone::from_ints(2, &[&[1, 1], &[1, -1]]).unwrap();
        let r = polar_eval(&f, &cone, &q, &[2.0, 1.0], &PolarOptions::default()).unwrap();
        assert!((r.value - 3.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn outside_dual_is_zero() {
        let f = PowerFn { s: 2.0 };
        let cone = PolyhedralCone::orthant(1);
        let r = polar_eval(&f, &cone, &[vec![1.0]], &[-1.0], &PolarOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn fd_hessian_of_quadratic() {
        let q = vec![vec![2.0, 1.0], vec![1.0, -1.0]];
        struct Q2<'a>(&'a [Vec<f64>]);
        impl ConcaveFn for Q2<'_> {
            fn weight(&self) -> f64 {
                2.0
            }
            fn dim(&self) -> usize {
                2
            }
            fn eval(&self, v: &[f64]) -> f64 {
                v.iter().enumerate().map(|(i, a)| a * dot(&self.0[i], v)).sum()
            }
        }
        let h = Q2(&q).hessian(&[0.3, 0.7]);
        for i in 0..2 {
            for j in 0..2 {
                assert!((h[i][j] - 2.0 * q[i][j]).abs() < 1e-5);
            }
        }
    }
}
