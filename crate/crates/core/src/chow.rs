//! Numerical models of projective varieties.
//!
//! A [`ChowModel`] carries bases of `N¹` and `N₁`, the perfect pairing
//! between them, the symmetric `n`-fold intersection form on `N¹`, and the
//! cones `Nef¹`, `Eff¹`, `Eff₁`, `Mov₁`. Everything is stored exactly; float
//! mirrors are kept for the optimizer.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cones::{dual_cone, PolyhedralCone, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::rational::{self, format_q, parse_q, QVec, Q};

/// Divisor class coordinates in a model's `N¹` basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorClass(pub Vec<f64>);

/// Curve class coordinates in a model's `N₁` basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveClass(pub Vec<f64>);

impl DivisorClass {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl CurveClass {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for DivisorClass {
    fn from(v: Vec<f64>) -> Self {
        DivisorClass(v)
    }
}

impl From<Vec<f64>> for CurveClass {
    fn from(v: Vec<f64>) -> Self {
        CurveClass(v)
    }
}

/// Dense symmetric `order`-linear form on a `rho`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    rho: usize,
    order: usize,
    data: Vec<Q>,
    data_f64: Vec<f64>,
}

impl SymTensor {
    pub fn zeros(rho: usize, order: usize) -> Self {
        let len = rho.pow(order as u32);
        SymTensor { rho, order, data: vec![Q::zero(); len], data_f64: vec![0.0; len] }
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.rho + i)
    }

    pub fn get(&self, idx: &[usize]) -> Q {
        self.data[self.flat(idx)].clone()
    }

    /// Sets the entry and all its permutations.
    pub fn set_sym(&mut self, idx: &[usize], v: Q) {
        let f = rational::to_f64(&v);
        for perm in permutations(idx) {
            let k = self.flat(&perm);
            self.data[k] = v.clone();
            self.data_f64[k] = f;
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let total = self.data.len();
        (0..total).all(|k| {
            let idx = self.unflat(k);
            permutations(&idx).iter().all(|p| self.data[self.flat(p)] == self.data[k])
        })
    }

    fn unflat(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for slot in idx.iter_mut().rev() {
            *slot = k % self.rho;
            k /= self.rho;
        }
        idx
    }

    /// `T'(i_1..i_n) = Σ_k Π m[i_j][k_j] T(k_1..k_n)`.
    pub fn change_basis(&self, m: &QMat) -> SymTensor {
        let rho = self.rho;
        let mut data = self.data.clone();
        for mode in 0..self.order {
            let stride = rho.pow((self.order - 1 - mode) as u32);
            let mut next = vec![Q::zero(); data.len()];
            for (k, slot) in next.iter_mut().enumerate() {
                let i = (k / stride) % rho;
                let base = k - i * stride;
                let mut acc = Q::zero();
                for (kk, mik) in m[i].iter().enumerate() {
                    if !mik.is_zero() {
                        acc += mik * &data[base + kk * stride];
                    }
                }
                *slot = acc;
            }
            data = next;
        }
        let data_f64 = rational::to_f64_vec(&data);
        SymTensor { rho, order: self.order, data, data_f64 }
    }

    /// Full contraction with `order` exact vectors.
    pub fn eval_exact(&self, factors: &[QVec]) -> Q {
        let mut cur = self.data.clone();
        for f in factors.iter().rev() {
            cur = cur
                .chunks(self.rho)
                .map(|c| c.iter().zip(f).fold(Q::zero(), |a, (x, y)| a + x * y))
                .collect();
        }
        cur.into_iter().next().unwrap_or_else(Q::zero)
    }

    /// Contracts the trailing `factors.len()` slots, returning the remaining
    /// flattened tensor.
    pub fn contract(&self, factors: &[&[f64]]) -> Vec<f64> {
        let mut cur: Vec<f64> = self.data_f64.clone();
        for f in factors.iter().rev() {
            cur = cur.chunks(self.rho).map(|c| c.iter().zip(f.iter()).map(|(x, y)| x * y).sum()).collect();
        }
        cur
    }

    /// `T(v, …, v)`.
    pub fn eval_power(&self, v: &[f64]) -> f64 {
        let fs: Vec<&[f64]> = vec![v; self.order];
        self.contract(&fs)[0]
    }

    /// `T(v, …, v, ·)` (order−1 copies of v).
    pub fn power_form(&self, v: &[f64]) -> Vec<f64> {
        let fs: Vec<&[f64]> = vec![v; self.order - 1];
        self.contract(&fs)
    }

    /// `T(v, …, v, ·, ·)` as a row-major matrix.
    pub fn power_matrix(&self, v: &[f64]) -> Vec<Vec<f64>> {
        let fs: Vec<&[f64]> = vec![v; self.order.saturating_sub(2)];
        let flat = self.contract(&fs);
        flat.chunks(self.rho).map(<[f64]>::to_vec).collect()
    }

    /// Sorted multi-indices with their values.
    pub fn entries(&self) -> Vec<(Vec<usize>, Q)> {
        use itertools::Itertools;
        (0..self.rho)
            .combinations_with_replacement(self.order)
            .map(|idx| {
                let v = self.get(&idx);
                (idx, v)
            })
            .collect()
    }
}

fn permutations(idx: &[usize]) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    let mut out: Vec<Vec<usize>> = idx.iter().copied().permutations(idx.len()).collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FanDerived,
    Preset(String),
    UserFile,
}

#[derive(Clone, Debug)]
pub struct ChowModel {
    n: usize,
    div_labels: Vec<String>,
    curve_labels: Vec<String>,
    pairing: QMat,
    pairing_f64: Vec<Vec<f64>>,
    tensor: SymTensor,
    nef: PolyhedralCone,
    eff_div: PolyhedralCone,
    eff_curve: PolyhedralCone,
    mov_curve: PolyhedralCone,
    provenance: Provenance,
}

impl ChowModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        div_labels: Vec<String>,
        curve_labels: Vec<String>,
        pairing: QMat,
        tensor: SymTensor,
        nef: PolyhedralCone,
        eff_div: PolyhedralCone,
        eff_curve: PolyhedralCone,
        mov_curve: Option<PolyhedralCone>,
        provenance: Provenance,
    ) -> Result<Self> {
        let rho = pairing.len();
        if n < 2 {
            return Err(Error::InvalidModel(format!("dimension {n} < 2")));
        }
        if div_labels.len() != rho || curve_labels.len() != rho {
            return Err(Error::DimensionMismatch { expected: rho, got: div_labels.len().max(curve_labels.len()) });
        }
        if tensor.rho() != rho || tensor.order() != n {
            return Err(Error::InvalidModel("tensor shape does not match model".into()));
        }
        for c in [&nef, &eff_div, &eff_curve] {
            if c.dim() != rho {
                return Err(Error::DimensionMismatch { expected: rho, got: c.dim() });
            }
        }
        if linalg::inverse(&pairing).is_none() {
            return Err(Error::DegeneratePairing);
        }
        if !tensor.is_symmetric() {
            return Err(Error::InvalidModel("tensor is not symmetric".into()));
        }
        let mov_curve = match mov_curve {
            Some(m) => m,
            None => dual_cone(&eff_div, &linalg::transpose(&pairing))?,
        };
        let pairing_f64 = linalg::to_f64_mat(&pairing);
        let model = ChowModel {
            n,
            div_labels,
            curve_labels,
            pairing,
            pairing_f64,
            tensor,
            nef,
            eff_div,
            eff_curve,
            mov_curve,
            provenance,
        };
        let probe = model.nef_probe();
        if model.vol(&probe) <= 0.0 {
            return Err(Error::InvalidModel("volume of interior nef probe is not positive".into()));
        }
        Ok(model)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> usize {
        self.pairing.len()
    }

    pub fn div_labels(&self) -> &[String] {
        &self.div_labels
    }

    pub fn curve_labels(&self) -> &[String] {
        &self.curve_labels
    }

    pub fn pairing(&self) -> &QMat {
        &self.pairing
    }

    pub fn pairing_f64(&self) -> &[Vec<f64>] {
        &self.pairing_f64
    }

    pub fn tensor(&self) -> &SymTensor {
        &self.tensor
    }

    pub fn nef(&self) -> &PolyhedralCone {
        &self.nef
    }

    pub fn eff_div(&self) -> &PolyhedralCone {
        &self.eff_div
    }

    pub fn eff_curve(&self) -> &PolyhedralCone {
        &self.eff_curve
    }

    pub fn mov_curve(&self) -> &PolyhedralCone {
        &self.mov_curve
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Sum of the nef generators: a strictly interior nef class.
    pub fn nef_probe(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.rho()];
        for g in self.nef.generators_f64() {
            for (a, b) in p.iter_mut().zip(g) {
                *a += b;
            }
        }
        p
    }

    /// `Bⁿ` without a nefness check.
    pub fn vol(&self, b: &[f64]) -> f64 {
        self.tensor.eval_power(b)
    }

    pub fn vol_exact(&self, b: &[Q]) -> Q {
        self.tensor.eval_exact(&vec![b.to_vec(); self.n])
    }

    pub fn vol_nef(&self, b: &DivisorClass) -> Result<f64> {
        self.check_dim(b.coords().len())?;
        let m = self.nef.contains(b.coords(), DEFAULT_TOL);
        if !m.inside {
            return Err(Error::NotNef { margin: m.margin });
        }
        Ok(self.vol(b.coords()))
    }

    /// `D ↦ T(B, …, B, D)` as a covector (not yet divided by the pairing).
    pub fn power_form(&self, b: &[f64]) -> Vec<f64> {
        self.tensor.power_form(b)
    }

    /// The curve class `B^{n-1}`.
    pub fn curve_power(&self, b: &DivisorClass) -> CurveClass {
        CurveClass(self.covector_to_curve(&self.power_form(b.coords())))
    }

    pub fn curve_power_exact(&self, b: &[Q]) -> QVec {
        self.mixed_curve_exact(&vec![b.to_vec(); self.n - 1])
    }

    /// Exact `D_1 ⋯ D_{n-1}` as a curve class.
    pub fn mixed_curve_exact(&self, ds: &[QVec]) -> QVec {
        let rho = self.rho();
        let covector: QVec = (0..rho)
            .map(|j| {
                let mut fs = ds.to_vec();
                let mut e = vec![Q::zero(); rho];
                e[j] = Q::from_integer(1.into());
                fs.push(e);
                self.tensor.eval_exact(&fs)
            })
            .collect();
        linalg::solve(&self.pairing, &covector).expect("pairing invertible")
    }

    /// The curve class `D_1 ⋯ D_{n-1}`.
    pub fn mixed_curve(&self, ds: &[&[f64]]) -> CurveClass {
        CurveClass(self.covector_to_curve(&self.tensor.contract(ds)))
    }

    /// `D_1 ⋯ D_n`.
    pub fn mixed_number(&self, ds: &[&[f64]]) -> f64 {
        self.tensor.contract(ds)[0]
    }

    /// Solves `P x = covector` for the curve `x` representing a linear functional on `N¹`.
    pub fn covector_to_curve(&self, covector: &[f64]) -> Vec<f64> {
        linalg::solve_f64(&self.pairing_f64, covector).expect("pairing invertible")
    }

    /// `D · c = dᵀ P c`.
    pub fn pair(&self, d: &[f64], c: &[f64]) -> f64 {
        d.iter()
            .zip(&self.pairing_f64)
            .map(|(di, row)| di * row.iter().zip(c).map(|(p, x)| p * x).sum::<f64>())
            .sum()
    }

    pub fn pair_exact(&self, d: &[Q], c: &[Q]) -> Q {
        rational::dot(d, &linalg::mat_vec(&self.pairing, c))
    }

    /// Covector of the curve `c` on `N¹`: `D ↦ D · c`.
    pub fn curve_covector(&self, c: &[f64]) -> Vec<f64> {
        self.pairing_f64.iter().map(|row| row.iter().zip(c).map(|(p, x)| p * x).sum()).collect()
    }

    pub fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.rho() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rho(), got })
        }
    }

    pub fn to_file(&self) -> ModelFile {
        let cone = |c: &PolyhedralCone| c.generators().iter().map(|g| g.iter().map(|x| Value::String(format_q(x))).collect()).collect();
        ModelFile {
            n: self.n,
            div_basis: self.div_labels.clone(),
            curve_basis: self.curve_labels.clone(),
            pairing: self.pairing.iter().map(|r| r.iter().map(|x| Value::String(format_q(x))).collect()).collect(),
            tensor: self
                .tensor
                .entries()
                .into_iter()
                .map(|(index, v)| TensorEntry { index, value: Value::String(format_q(&v)) })
                .collect(),
            cones: ConeLists {
                nef: cone(&self.nef),
                eff_div: cone(&self.eff_div),
                eff_curve: cone(&self.eff_curve),
            },
            provenance: Some(self.provenance.clone()),
        }
    }

    pub fn from_file(f: &ModelFile) -> Result<Self> {
        let rho = f.div_basis.len();
        let pairing: QMat = f
            .pairing
            .iter()
            .map(|r| r.iter().map(value_to_q).collect::<Result<QVec>>())
            .collect::<Result<_>>()?;
        if pairing.len() != rho || pairing.iter().any(|r| r.len() != rho) {
            return Err(Error::InvalidModel("pairing must be ρ×ρ".into()));
        }
        let mut tensor = SymTensor::zeros(rho, f.n);
        for e in &f.tensor {
            if e.index.len() != f.n || e.index.iter().any(|&i| i >= rho) {
                return Err(Error::InvalidModel(format!("bad tensor index {:?}", e.index)));
            }
            tensor.set_sym(&e.index, value_to_q(&e.value)?);
        }
        let cone = |gens: &Vec<Vec<Value>>| -> Result<PolyhedralCone> {
            let g: Vec<QVec> = gens
                .iter()
                .map(|r| r.iter().map(value_to_q).collect::<Result<QVec>>())
                .collect::<Result<_>>()?;
            PolyhedralCone::new(rho, g)
        };
        ChowModel::new(
            f.n,
            f.div_basis.clone(),
            f.curve_basis.clone(),
            pairing,
            tensor,
            cone(&f.cones.nef)?,
            cone(&f.cones.eff_div)?,
            cone(&f.cones.eff_curve)?,
            None,
            f.provenance.clone().unwrap_or(Provenance::UserFile),
        )
    }

    /// Nonnegative combination of the nef generators, as a divisor class.
    pub fn nef_combination(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.rho()];
        for (c, g) in coeffs.iter().zip(self.nef.generators_f64()) {
            for (a, b) in v.iter_mut().zip(g) {
                *a += c * b;
            }
        }
        v
    }

    /// True iff `α` is big (exact when rational coordinates are supplied).
    pub fn is_big_exact(&self, alpha: &[Q]) -> bool {
        self.eff_curve.interior_contains_exact(alpha).unwrap_or(false)
    }

    /// Checks the projection formula `D · π_* c = π^* D · c` on basis pairs.
    pub fn check_projection_formula(&self, other: &ChowModel, pullback: &QMat, pushforward: &QMat) -> Result<()> {
        // self = X, other = Y; pullback: N¹(X) → N¹(Y) (ρ_Y × ρ_X), pushforward: N₁(Y) → N₁(X) (ρ_X × ρ_Y)
        let (rx, ry) = (self.rho(), other.rho());
        if pullback.len() != ry || pullback.iter().any(|r| r.len() != rx) {
            return Err(Error::ProjectionFormula("pullback has wrong shape".into()));
        }
        if pushforward.len() != rx || pushforward.iter().any(|r| r.len() != ry) {
            return Err(Error::ProjectionFormula("pushforward has wrong shape".into()));
        }
        for i in 0..rx {
            let mut d = vec![Q::zero(); rx];
            d[i] = Q::from_integer(1.into());
            let pd = linalg::mat_vec(pullback, &d);
            for j in 0..ry {
                let mut c = vec![Q::zero(); ry];
                c[j] = Q::from_integer(1.into());
                let lhs = self.pair_exact(&d, &linalg::mat_vec(pushforward, &c));
                let rhs = other.pair_exact(&pd, &c);
                if lhs != rhs {
                    return Err(Error::ProjectionFormula(format!(
                        "D{i}·π_*C{j} = {} but π^*D{i}·C{j} = {}",
                        format_q(&lhs),
                        format_q(&rhs)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sign check helper: is `γ` outside `Mov₁`, i.e. some `Eff¹` generator pairs negatively?
    pub fn outside_movable(&self, gamma: &[f64], tol: f64) -> bool {
        let scale = gamma.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
        self.eff_div
            .generators_f64()
            .iter()
            .any(|e| self.pair(e, gamma) / scale < -tol)
    }

    /// Exact version of [`Self::outside_movable`].
    pub fn outside_movable_exact(&self, gamma: &[Q]) -> bool {
        self.eff_div.generators().iter().any(|e| self.pair_exact(e, gamma).is_negative())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorEntry {
    pub index: Vec<usize>,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeLists {
    pub nef: Vec<Vec<Value>>,
    pub eff_div: Vec<Vec<Value>>,
    pub eff_curve: Vec<Vec<Value>>,
}

/// JSON model file; numbers may be `"p/q"` strings or JSON numbers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub n: usize,
    pub div_basis: Vec<String>,
    pub curve_basis: Vec<String>,
    pub pairing: Vec<Vec<Value>>,
    pub tensor: Vec<TensorEntry>,
    pub cones: ConeLists,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

fn value_to_q(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rational::q(i))
            } else {
                parse_q(&n.to_string())
            }
        }
        other => Err(Error::Parse(format!("expected number, got {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qvec};

    fn cube_form() -> SymTensor {
        // rank 2, order 3: x³ + 3x²y
        let mut t = SymTensor::zeros(2, 3);
        t.set_sym(&[0, 0, 0], q(1));
        t.set_sym(&[0, 0, 1], q(1));
        t
    }

    #[test]
    fn tensor_power_and_change_of_basis() {
        let t = cube_form();
        assert!(t.is_symmetric());
        assert_eq!(t.eval_power(&[1.0, 1.0]), 4.0);
        assert_eq!(t.eval_exact(&[qvec(&[1, 1]), qvec(&[1, 1]), qvec(&[1, 1])]), q(4));
        // new basis e0' = e0 + e1, e1' = e1
        let m = vec![qvec(&[1, 1]), qvec(&[0, 1])];
        let t2 = t.change_basis(&m);
        assert_eq!(t2.get(&[0, 0, 0]), q(4));
        assert_eq!(t2.get(&[1, 1, 1]), q(0));
        assert_eq!(t2.get(&[0, 0, 1]), q(1));
        assert!(t2.is_symmetric());
    }

    #[test]
    fn power_form_matches_gradient() {
        let t = cube_form();
        let v = [0.7, 0.3];
        let g = t.power_form(&v);
        let h = 1e-6;
        for k in 0..2 {
            let mut a = v;
            let mut b = v;
            a[k] += h;
            b[k] -= h;
            let fd = (t.eval_power(&a) - t.eval_power(&b)) / (2.0 * h);
            assert!((3.0 * g[k] - fd).abs() < 1e-6);
        }
    }
}
