//! Lorentzian-form models.
//!
//! A form `q` of signature `(1, ρ−1)` and a cone `C` with `q ≥ 0` on `C`
//! define `f(v) = q(v,v)^{n/2}`. Identifying `V` with `V*` through `q`,
//! `C ⊂ C*` and the polar transform is controlled by a Zariski
//! decomposition whose positive part lies in `C`. Surfaces use `n = 2`;
//! synthetic hyperkähler models use even `n` with `Dⁿ := q(D,D)^{n/2}`.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::chow::{ChowModel, Provenance, SymTensor};
use crate::cones::{dual_cone, PolyhedralCone};
use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::polar::{dot, polar_eval, PolarOptions, PolarResult, QuadraticPowerFn};
use crate::rational::{self, Q, DEFAULT_DENOM_BOUND};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Surface,
    Hyperkahler,
}

#[derive(Clone, Debug)]
pub struct QuadraticModel {
    n: usize,
    q: QMat,
    q_f64: Vec<Vec<f64>>,
    cone: PolyhedralCone,
    gens: Vec<Vec<f64>>,
    mode: Mode,
}

/// On-disk form; floats are rationalized on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadraticFile {
    pub n: usize,
    pub q: Vec<Vec<f64>>,
    pub cone: Vec<Vec<f64>>,
    pub mode: Mode,
}

/// `w = p + γ`, `p ∈ C`, `γ ∈ C*`, `q(p, γ) = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct QZariski {
    pub p: Vec<f64>,
    pub gamma: Vec<f64>,
    pub q_p_gamma: f64,
    pub q_gamma_gamma: f64,
    pub q_pp: f64,
}

/// `(#positive, #negative)` eigenvalues of a symmetric matrix.
pub fn signature(q: &[Vec<f64>]) -> (usize, usize) {
    let r = q.len();
    let m = DMatrix::from_fn(r, r, |i, j| q[i][j]);
    let scale = q.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-300);
    let e = SymmetricEigen::new(m);
    let pos = e.eigenvalues.iter().filter(|&&x| x > 1e-12 * scale).count();
    let neg = e.eigenvalues.iter().filter(|&&x| x < -1e-12 * scale).count();
    (pos, neg)
}

impl QuadraticModel {
    pub fn new(n: usize, q: QMat, cone: PolyhedralCone, mode: Mode) -> Result<Self> {
        let rho = q.len();
        if cone.dim() != rho || q.iter().any(|r| r.len() != rho) {
            return Err(Error::DimensionMismatch { expected: rho, got: cone.dim() });
        }
        if linalg::transpose(&q) != q {
            return Err(Error::InvalidModel("q is not symmetric".into()));
        }
        if n < 2 || (mode == Mode::Surface && n != 2) || !n.is_multiple_of(2) {
            return Err(Error::InvalidModel(format!("dimension {n} not allowed for {mode:?}")));
        }
        let q_f64 = linalg::to_f64_mat(&q);
        let (pos, neg) = signature(&q_f64);
        if pos != 1 || neg != rho - 1 {
            return Err(Error::Signature { pos, neg, expected_neg: rho - 1 });
        }
        for g in cone.generators() {
            let qg = rational::dot(g, &linalg::mat_vec(&q, g));
            if qg < Q::from_integer(0.into()) {
                return Err(Error::InvalidModel("q is negative on a cone generator".into()));
            }
        }
        let gens = cone.generators_f64();
        Ok(QuadraticModel { n, q, q_f64, cone, gens, mode })
    }

    pub fn from_file(f: &QuadraticFile) -> Result<Self> {
        let q: QMat = f.q.iter().map(|r| rational::rationalize_vec(r, DEFAULT_DENOM_BOUND)).collect();
        let gens = f.cone.iter().map(|r| rational::rationalize_vec(r, DEFAULT_DENOM_BOUND)).collect();
        let cone = PolyhedralCone::new(q.len(), gens)?;
        QuadraticModel::new(f.n, q, cone, f.mode)
    }

    pub fn to_file(&self) -> QuadraticFile {
        QuadraticFile { n: self.n, q: self.q_f64.clone(), cone: self.gens.clone(), mode: self.mode }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn rho(&self) -> usize {
        self.q.len()
    }
    pub fn q(&self) -> &QMat {
        &self.q
    }
    pub fn q_f64(&self) -> &[Vec<f64>] {
        &self.q_f64
    }
    pub fn cone(&self) -> &PolyhedralCone {
        &self.cone
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn qf(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(&self.q_f64).map(|(ai, row)| ai * dot(row, b)).sum()
    }

    fn qv(&self, a: &[f64]) -> Vec<f64> {
        self.q_f64.iter().map(|r| dot(r, a)).collect()
    }

    pub fn f(&self) -> QuadraticPowerFn<'_> {
        QuadraticPowerFn { q: &self.q_f64, n: self.n }
    }

    fn scale(&self, w: &[f64]) -> f64 {
        self.gens.iter().map(|g| self.qf(w, g).abs()).fold(0.0f64, f64::max).max(1e-300)
    }

    /// `min_g q(w, g)` over unit generators.
    pub fn dual_margin(&self, w: &[f64]) -> f64 {
        self.gens
            .iter()
            .map(|g| self.qf(w, g) / dot(g, g).sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    /// `value ↦ value^{n/(2(n−1))}` applied to `q(p,p)`.
    fn hf_from_qpp(&self, qpp: f64) -> f64 {
        let n = self.n as f64;
        qpp.max(0.0).powf(n / (2.0 * (n - 1.0)))
    }

    /// Face enumeration: for each independent generator subset `S`, take the
    /// `q`-orthogonal projection `p` of `w` onto `span(S)`; keep it when its
    /// coefficients are nonnegative and `w − p ∈ C*`; return the feasible `p`
    /// of largest `q(p,p)`.
    pub fn zariski_q(&self, w: &[f64]) -> Result<QZariski> {
        if w.len() != self.rho() {
            return Err(Error::DimensionMismatch { expected: self.rho(), got: w.len() });
        }
        let tol = 1e-9;
        let sc = self.scale(w);
        if self.gens.iter().any(|g| self.qf(w, g) <= 1e-12 * sc) {
            return Err(Error::NotBig { margin: self.dual_margin(w) });
        }
        let k = self.gens.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut consider = |p: Vec<f64>| {
            let qpp = self.qf(&p, &p);
            let g: Vec<f64> = w.iter().zip(&p).map(|(a, b)| a - b).collect();
            if self.gens.iter().all(|h| self.qf(&g, h) >= -tol * sc) && best.as_ref().is_none_or(|(b, _)| qpp > *b) {
                best = Some((qpp, p));
            }
        };
        for size in 1..=k.min(self.rho()) {
            for s in (0..k).combinations(size) {
                let gram = DMatrix::from_fn(size, size, |i, j| self.qf(&self.gens[s[i]], &self.gens[s[j]]));
                let rhs = DVector::from_iterator(size, s.iter().map(|&i| self.qf(w, &self.gens[i])));
                let Some(y) = gram.lu().solve(&rhs) else { continue };
                let ymax = y.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-300);
                if y.iter().any(|&yi| yi < -1e-10 * ymax) || !y.iter().all(|v| v.is_finite()) {
                    continue;
                }
                let mut p = vec![0.0; self.rho()];
                for (yi, &i) in y.iter().zip(&s) {
                    for (a, b) in p.iter_mut().zip(&self.gens[i]) {
                        *a += yi.max(0.0) * b;
                    }
                }
                consider(p);
            }
        }
        let (qpp, p) = best.ok_or(Error::NotBig { margin: self.dual_margin(w) })?;
        if qpp <= 0.0 {
            return Err(Error::NotBig { margin: self.dual_margin(w) });
        }
        let gamma: Vec<f64> = w.iter().zip(&p).map(|(a, b)| a - b).collect();
        Ok(QZariski { q_p_gamma: self.qf(&p, &gamma), q_gamma_gamma: self.qf(&gamma, &gamma), q_pp: qpp, p, gamma })
    }

    /// `Hf(w)` in closed form with its minimizer (scaled so `f(v*) = Hf(w)`).
    pub fn polar_closed_form(&self, w: &[f64]) -> Result<(f64, Vec<f64>)> {
        let m = self.dual_margin(w);
        if m < -1e-12 * self.scale(w) {
            return Err(Error::InvalidModel(format!("class outside the q-dual cone (margin {m:.3e})")));
        }
        let p = if self.cone.contains(w, 1e-12).inside {
            w.to_vec()
        } else {
            match self.zariski_q(w) {
                Ok(z) => z.p,
                Err(_) => return Ok((0.0, vec![0.0; self.rho()])),
            }
        };
        let qpp = self.qf(&p, &p);
        let value = self.hf_from_qpp(qpp);
        if qpp <= 0.0 {
            return Ok((0.0, vec![0.0; self.rho()]));
        }
        // f(λp) = λⁿ q(p,p)^{n/2} = value
        let lambda = value.powf(1.0 / self.n as f64) / qpp.sqrt();
        Ok((value, p.into_iter().map(|x| lambda * x).collect()))
    }

    /// The generic optimizer on the same data (pairing `q`).
    pub fn polar_generic(&self, w: &[f64], opts: &PolarOptions) -> Result<PolarResult> {
        polar_eval(&self.f(), &self.cone, &self.q_f64, w, opts)
    }

    /// `ψ(D) = q(D, ·)` in the curve coordinates of [`Self::to_chow`].
    pub fn psi(&self, d: &[f64]) -> Vec<f64> {
        self.qv(d)
    }

    /// The induced model: curves are covectors (`pairing = I`), `Dⁿ = q(D,D)^{n/2}`,
    /// `Nef¹ = C`, `Eff¹ = q`-dual of `C`, `Eff₁` = dual of `C`.
    pub fn to_chow(&self) -> Result<ChowModel> {
        let rho = self.rho();
        let n = self.n;
        let mut t = SymTensor::zeros(rho, n);
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let nperm = Q::from_integer((perms.len() as i64).into());
        for idx in (0..rho).combinations_with_replacement(n) {
            let mut acc = Q::from_integer(0.into());
            for p in &perms {
                let mut term = Q::from_integer(1.into());
                for pair in p.chunks(2) {
                    term *= &self.q[idx[pair[0]]][idx[pair[1]]];
                }
                acc += term;
            }
            t.set_sym(&idx, acc / &nperm);
        }
        let id = linalg::identity(rho);
        let eff_div = dual_cone(&self.cone, &self.q)?;
        let eff_curve = dual_cone(&self.cone, &id)?;
        let tag = match self.mode {
            Mode::Surface => "quadratic-surface",
            Mode::Hyperkahler => "hyperkahler",
        };
        ChowModel::new(
            n,
            (1..=rho).map(|i| format!("D{i}")).collect(),
            (1..=rho).map(|i| format!("C{i}")).collect(),
            id,
            t,
            self.cone.clone(),
            eff_div,
            eff_curve,
            None,
            Provenance::Preset(tag.into()),
        )
    }
}

/// Random Lorentzian instance: `q = Lᵀ diag(1,−1,…,−1) L` with a small
/// integer `L`, and a cone spanned by `L⁻¹(t, u)` with `|u| < t`.
pub fn random_instance(
    k: usize,
    n: usize,
    mode: Mode,
    rng: &mut impl rand::Rng,
) -> Result<QuadraticModel> {
    let rho = k + 1;
    loop {
        let l: QMat = (0..rho)
            .map(|i| {
                (0..rho)
                    .map(|j| rational::q(if i == j { rng.gen_range(1..=3) } else { rng.gen_range(-1..=1) }))
                    .collect()
            })
            .collect();
        let Some(linv) = linalg::inverse(&l) else { continue };
        let j: QMat = (0..rho)
            .map(|i| (0..rho).map(|c| rational::q(if i != c { 0 } else if i == 0 { 1 } else { -1 })).collect())
            .collect();
        let q = linalg::mat_mul(&linalg::transpose(&l), &linalg::mat_mul(&j, &l));
        let mut gens = Vec::new();
        for _ in 0..(rho + 2) {
            let u: Vec<i64> = (0..k).map(|_| rng.gen_range(-4..=4)).collect();
            let norm = (u.iter().map(|x| x * x).sum::<i64>() as f64).sqrt();
            let t = norm.floor() as i64 + rng.gen_range(1..=3);
            let mut y = vec![rational::q(t)];
            y.extend(u.iter().map(|&x| rational::q(x)));
            gens.push(rational::primitive(&linalg::mat_vec(&linv, &y)));
        }
        let Ok(cone) = PolyhedralCone::new(rho, gens) else { continue };
        if !cone.is_full_dim() {
            continue;
        }
        return QuadraticModel::new(n, q, cone, mode);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn blowup() -> QuadraticModel {
        let cone = PolyhedralCone::from_ints(2, &[&[1, 0], &[1, 1]]).unwrap();
        QuadraticModel::new(2, vec![qvec(&[1, 0]), qvec(&[0, -1])], cone, Mode::Surface).unwrap()
    }

    #[test]
    fn self_dual_cone_value() {
        let cone = PolyhedralCone::from_ints(2, &[&[1, 1], &[1, -1]]).unwrap();
        let m = QuadraticModel::new(2, vec![qvec(&[1, 0]), qvec(&[0, -1])], cone, Mode::Surface).unwrap();
        let (v, p) = m.polar_closed_form(&[2.0, 1.0]).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        assert_eq!(p, vec![2.0, 1.0]);
        assert_eq!(m.polar_closed_form(&[1.0, 1.0]).unwrap().0, 0.0);
    }

    #[test]
    fn orthogonal_projection_example() {
        let m = blowup();
        let z = m.zariski_q(&[1.0, -1.0]).unwrap();
        assert!((z.p[0] - 1.0).abs() < 1e-12 && z.p[1].abs() < 1e-12);
        assert!((z.gamma[1] + 1.0).abs() < 1e-12);
        assert!((z.q_gamma_gamma + 1.0).abs() < 1e-12);
        let z = m.zariski_q(&[2.0, 1.0]).unwrap();
        assert!(z.gamma.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn generic_agrees() {
        let m = blowup();
        let o = PolarOptions::default();
        for w in [[1.0, -1.0], [3.0, -2.5], [2.0, 0.5]] {
            let (v, _) = m.polar_closed_form(&w).unwrap();
            let g = m.polar_generic(&w, &o).unwrap();
            assert!((v - g.value).abs() < 1e-9 * v, "{w:?}: {v} vs {}", g.value);
        }
    }

    #[test]
    fn signature_rejected() {
        let cone = PolyhedralCone::orthant(2);
        let e = QuadraticModel::new(2, vec![qvec(&[1, 0]), qvec(&[0, 1])], cone, Mode::Surface);
        assert!(matches!(e, Err(Error::Signature { pos: 2, .. })));
    }

    #[test]
    fn random_instances_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in 1..=4 {
            let m = random_instance(k, 2, Mode::Surface, &mut rng).unwrap();
            assert_eq!(m.rho(), k + 1);
        }
        let m = random_instance(2, 4, Mode::Hyperkahler, &mut rng).unwrap();
        let c = m.to_chow().unwrap();
        let a = c.nef_probe();
        let qa = m.qf(&a, &a);
        assert!((c.vol(&a) - qa * qa).abs() < 1e-9 * qa * qa);
    }
}
