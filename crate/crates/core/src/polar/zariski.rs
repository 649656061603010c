//! Zariski decompositions of big curve classes and the derivative of `vol^`.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{curve_volume, PolarOptions};
use crate::chow::ChowModel;
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, Debug, Serialize)]
pub struct Residuals {
    /// `B·γ` (absolute).
    pub b_dot_gamma: f64,
    /// Smallest facet value of `γ` on `Eff₁`, relative to `|α|_∞`.
    pub gamma_eff_margin: f64,
    /// `|vol^(α) − Bⁿ|`.
    pub vol_gap: f64,
    /// KKT margin reported by the optimizer.
    pub kkt_margin: f64,
    pub spread: f64,
}

/// `α = B^{n-1} + γ` with `B` nef, `γ` pseudo-effective and `B·γ = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct ZariskiResult {
    pub alpha: Vec<f64>,
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    pub positive_part: Vec<f64>,
    pub gamma: Vec<f64>,
    #[serde(rename = "volhat")]
    pub value: f64,
    pub residuals: Residuals,
    pub restarts: usize,
    pub seed: u64,
}

impl ZariskiResult {
    /// `γ` vanishes relative to `α` at tolerance `tol`.
    pub fn gamma_is_zero(&self, tol: f64) -> bool {
        let a = sup(&self.alpha);
        sup(&self.gamma) <= tol * a
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Bigness test: exact LP-free facet test when `α` is rational, float margin otherwise.
pub fn is_big(m: &ChowModel, alpha: &[f64], exact: Option<&[Q]>) -> Result<bool> {
    match exact {
        Some(a) => m.eff_curve().interior_contains_exact(a),
        None => m.eff_curve().interior_contains(alpha, 1e-12),
    }
}

pub fn zariski(m: &ChowModel, alpha: &[f64], exact: Option<&[Q]>, opts: &PolarOptions) -> Result<ZariskiResult> {
    m.check_dim(alpha.len())?;
    if !is_big(m, alpha, exact)? {
        return Err(Error::NotBig { margin: m.eff_curve().margin(alpha) });
    }
    let r = curve_volume(m, alpha, opts)?;
    if r.value <= 0.0 {
        return Err(Error::NotBig { margin: m.eff_curve().margin(alpha) });
    }
    let b = r.minimizer.clone();
    let positive = m.curve_power(&b.clone().into()).0;
    let gamma: Vec<f64> = alpha.iter().zip(&positive).map(|(a, p)| a - p).collect();
    let scale = sup(alpha);
    let gamma_eff_margin = m.eff_curve().margin(&gamma) * sup(&gamma) / scale;
    let residuals = Residuals {
        b_dot_gamma: m.pair(&b, &gamma),
        gamma_eff_margin,
        vol_gap: (r.value - m.vol(&b)).abs(),
        kkt_margin: r.kkt_margin,
        spread: r.spread,
    };
    Ok(ZariskiResult {
        alpha: alpha.to_vec(),
        b,
        positive_part: positive,
        gamma,
        value: r.value,
        residuals,
        restarts: r.restarts.len(),
        seed: opts.seed,
    })
}

/// `d/dt vol^(α + tβ)|₀ = n/(n−1)·B_α·β`.
pub fn derivative(m: &ChowModel, alpha: &[f64], beta: &[f64], opts: &PolarOptions) -> Result<f64> {
    m.check_dim(beta.len())?;
    let z = zariski(m, alpha, None, opts)?;
    let n = m.n() as f64;
    Ok(n / (n - 1.0) * m.pair(&z.b, beta))
}

/// A preimage of `α` on a birational model `Y → X` with the same `vol^`.
#[derive(Clone, Debug, Serialize)]
pub struct Lift {
    pub alpha_y: Vec<f64>,
    pub b_y: Vec<f64>,
    pub volhat_x: f64,
    pub volhat_y: f64,
}

fn mat_vec_f64(m: &[Vec<Q>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, x)| a.to_f64().unwrap_or(f64::NAN) * x).sum()).collect()
}

/// `α_Y = (π^*B)^{n−1} + γ_Y` where `B` is the positive part of `α` on `X` and
/// `γ_Y` is an effective class pushing forward to the negative part of `α`.
#[allow(clippy::too_many_arguments)]
pub fn lift_zariski(
    my: &ChowModel,
    mx: &ChowModel,
    pullback: &[Vec<Q>],
    pushforward: &[Vec<Q>],
    alpha: &[f64],
    gamma_y: &[f64],
    opts: &PolarOptions,
) -> Result<Lift> {
    mx.check_projection_formula(my, &pullback.to_vec(), &pushforward.to_vec())?;
    my.check_dim(gamma_y.len())?;
    if my.n() != mx.n() {
        return Err(Error::ProjectionFormula(format!("dimensions differ: {} vs {}", my.n(), mx.n())));
    }
    let z = zariski(mx, alpha, None, opts)?;
    let scale = sup(alpha).max(1.0);
    let tol = 1e-6;
    if my.eff_curve().margin(gamma_y) * sup(gamma_y) < -tol * scale {
        return Err(Error::LiftMismatch("γ_Y is not pseudo-effective".into()));
    }
    let pushed = mat_vec_f64(pushforward, gamma_y);
    let gap = pushed.iter().zip(&z.gamma).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > tol * scale {
        return Err(Error::LiftMismatch(format!("π_*γ_Y differs from γ by {gap:.3e}")));
    }
    let b_y = mat_vec_f64(pullback, &z.b);
    let alpha_y: Vec<f64> =
        my.curve_power(&b_y.clone().into()).0.iter().zip(gamma_y).map(|(p, g)| p + g).collect();
    let back = mat_vec_f64(pushforward, &alpha_y);
    let gap = back.iter().zip(alpha).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > tol * scale {
        return Err(Error::LiftMismatch(format!("π_*α_Y differs from α by {gap:.3e}")));
    }
    let volhat_y = curve_volume(my, &alpha_y, opts)?.value;
    if (volhat_y - z.value).abs() > tol * z.value.max(1.0) {
        return Err(Error::LiftMismatch(format!("vol^ changes: {} on X, {volhat_y} on Y", z.value)));
    }
    Ok(Lift { alpha_y, b_y, volhat_x: z.value, volhat_y })
}

#[derive(Clone, Debug, Serialize)]
pub struct FdCheck {
    pub analytic: f64,
    /// `(h, central difference, tolerance)` per step.
    pub steps: Vec<(f64, f64, f64)>,
    pub passed: bool,
}

/// Central differences of `vol^(α + tβ)` at `h ∈ {1e-3, 1e-4, 1e-5}`.
pub fn derivative_fd_check(m: &ChowModel, alpha: &[f64], beta: &[f64], opts: &PolarOptions) -> Result<FdCheck> {
    let analytic = derivative(m, alpha, beta, opts)?;
    let vol_at = |t: f64| -> Result<f64> {
        let a: Vec<f64> = alpha.iter().zip(beta).map(|(x, y)| x + t * y).collect();
        Ok(curve_volume(m, &a, opts)?.value)
    };
    let mut steps = Vec::new();
    let mut passed = true;
    for h in [1e-3, 1e-4, 1e-5] {
        let fd = (vol_at(h)? - vol_at(-h)?) / (2.0 * h);
        let tol = f64::max(1e-4, 10.0 * h);
        passed &= (fd - analytic).abs() <= tol;
        steps.push((h, fd, tol));
    }
    Ok(FdCheck { analytic, steps, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;
    use crate::rational::qvec;

    fn closed_form(x: f64, y: f64) -> f64 {
        if x >= 2.0 * y {
            (1.5 * x - y) * y.sqrt()
        } else {
            x.powf(1.5) / 2f64.sqrt()
        }
    }

    #[test]
    fn proj_bundle_values() {
        let m = preset("proj-bundle-p1").unwrap();
        let o = PolarOptions::default();
        for (x, y) in [(3.0, 1.0), (1.0, 1.0), (0.3, 2.0), (5.0, 0.01), (2.0, 1.0)] {
            let v = curve_volume(&m, &[x, y], &o).unwrap().value;
            assert!((v - closed_form(x, y)).abs() <= 1e-9 * closed_form(x, y), "{x},{y}: {v}");
        }
    }

    #[test]
    fn proj_bundle_decomposition() {
        let m = preset("proj-bundle-p1").unwrap();
        let z = zariski(&m, &[1.0, 1.0], None, &PolarOptions::default()).unwrap();
        let r = 0.5f64.sqrt();
        assert!((z.b[0] - r).abs() < 1e-10 && (z.b[1] - r).abs() < 1e-10, "{:?}", z.b);
        assert!((z.positive_part[0] - 1.0).abs() < 1e-10 && (z.positive_part[1] - 0.5).abs() < 1e-10);
        assert!(z.gamma[0].abs() < 1e-10 && (z.gamma[1] - 0.5).abs() < 1e-10);
        assert!(m.outside_movable(&z.gamma, 1e-9));
    }

    #[test]
    fn flip_threefold_decomposition() {
        let m = preset("toric-flip-3fold").unwrap();
        let o = PolarOptions::default();
        let z = zariski(&m, &[2.0, 1.0, 1.0], Some(&qvec(&[2, 1, 1])), &o).unwrap();
        assert!((z.value - 2.0 / 3f64.sqrt()).abs() < 1e-10);
        assert!((z.gamma[0] - 4.0 / 3.0).abs() < 1e-10 && z.gamma[1].abs() < 1e-10 && z.gamma[2].abs() < 1e-10);
        let z = zariski(&m, &[2.0, 3.0, 3.0], None, &o).unwrap();
        assert!((z.value - 6.0).abs() < 1e-9 && z.gamma_is_zero(1e-9));
        assert!(derivative(&m, &[2.0, 1.0, 1.0], &[1.0, 0.0, 0.0], &o).unwrap().abs() < 1e-10);
    }

    #[test]
    fn derivative_example() {
        let m = preset("proj-bundle-p1").unwrap();
        let o = PolarOptions::default();
        let d = derivative(&m, &[3.0, 1.0], &[-2.0, -1.0], &o).unwrap();
        assert!((d + 3.75).abs() < 1e-9, "{d}");
        let fd = derivative_fd_check(&m, &[3.0, 1.0], &[-2.0, -1.0], &o).unwrap();
        assert!(fd.passed, "{fd:?}");
        // Euler relation
        let e = derivative(&m, &[3.0, 1.0], &[3.0, 1.0], &o).unwrap();
        assert!((e - 1.5 * 3.5).abs() < 1e-9);
    }

    #[test]
    fn lift_identity_and_blowup() {
        use crate::linalg::identity;
        use crate::rational::q;
        let o = PolarOptions::default();
        let m = preset("proj-bundle-p1").unwrap();
        let z = zariski(&m, &[1.0, 1.0], None, &o).unwrap();
        let id = identity(2);
        let l = lift_zariski(&m, &m, &id, &id, &[1.0, 1.0], &z.gamma, &o).unwrap();
        assert!((l.alpha_y[0] - 1.0).abs() < 1e-9 && (l.alpha_y[1] - 1.0).abs() < 1e-9);

        let x = preset("p2").unwrap();
        let y = preset("quadratic-surface").unwrap();
        let pull = vec![vec![q(1)], vec![q(0)]];
        let push = vec![vec![q(1), q(0)]];
        let l = lift_zariski(&y, &x, &pull, &push, &[2.0], &[0.0, 0.0], &o).unwrap();
        assert!((l.volhat_x - 4.0).abs() < 1e-9 && (l.volhat_y - 4.0).abs() < 1e-9);
        // exceptional curves do not change vol^
        let plus_e = [l.alpha_y[0], l.alpha_y[1] + 0.7];
        assert!((curve_volume(&y, &plus_e, &o).unwrap().value - 4.0).abs() < 1e-8);
        assert!(matches!(
            lift_zariski(&y, &x, &pull, &push, &[2.0], &[1.0, 0.0], &o),
            Err(Error::LiftMismatch(_))
        ));
        let bad = vec![vec![q(2), q(0)]];
        assert!(matches!(
            lift_zariski(&y, &x, &pull, &bad, &[2.0], &[0.0, 0.0], &o),
            Err(Error::ProjectionFormula(_))
        ));
    }

    #[test]
    fn non_big_refused() {
        let m = preset("proj-bundle-p1").unwrap();
        assert!(matches!(
            zariski(&m, &[1.0, 0.0], Some(&qvec(&[1, 0])), &PolarOptions::default()),
            Err(Error::NotBig { .. })
        ));
    }
}
