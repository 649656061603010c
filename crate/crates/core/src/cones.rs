//! Polyhedral cones with exact generator and facet descriptions.
//!
//! A [`PolyhedralCone`] is stored by its generators and by the generators
//! of its dual under the standard dot product (its facet normals, plus a
//! ± pair for each lineality direction of the dual when the cone is not
//! full-dimensional). Both descriptions are exact rationals; a normalized
//! float copy of the facets backs the tolerance-based queries.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::lp;
use crate::rational::{self, dot, is_zero_vec, primitive, QVec, Q};

/// Default absolute tolerance for float membership (query normalized to unit max-norm).
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct PolyhedralCone {
    dim: usize,
    generators: Vec<QVec>,
    facets: Vec<QVec>,
    facets_f64: Vec<Vec<f64>>,
    full_dim: bool,
    pointed: bool,
}

/// Result of a membership query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// Signed distance estimate of the max-norm-normalized query to the boundary.
    pub margin: f64,
}

impl PolyhedralCone {
    pub fn new(dim: usize, generators: Vec<QVec>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
            if is_zero_vec(g) {
                return Err(Error::ZeroGenerator(i));
            }
        }
        let (rays, lin) = double_description(&generators, dim);
        let mut facets = rays;
        for l in lin {
            facets.push(l.iter().map(|x| -x).collect());
            facets.push(l);
        }
        let rank = linalg::rank(&generators);
        let pointed = !generators.iter().any(|g| {
            let neg: QVec = g.iter().map(|x| -x).collect();
            lp::nonneg_combination(&generators, &neg).is_some()
        });
        let facets_f64 = facets.iter().map(|h| normalized_f64(h)).collect();
        let cone = PolyhedralCone {
            dim,
            generators,
            facets,
            facets_f64,
            full_dim: rank == dim,
            pointed,
        };
        #[cfg(debug_assertions)]
        cone.cross_validate()?;
        Ok(cone)
    }

    pub fn from_ints(dim: usize, gens: &[&[i64]]) -> Result<Self> {
        Self::new(dim, gens.iter().map(|g| rational::qvec(g)).collect())
    }

    /// The first orthant of `R^dim`.
    pub fn orthant(dim: usize) -> Self {
        Self::new(dim, linalg::identity(dim)).expect("orthant is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    pub fn generators_f64(&self) -> Vec<Vec<f64>> {
        linalg::to_f64_mat(&self.generators)
    }

    /// Inequalities `h · v ≥ 0` describing the cone.
    pub fn facet_normals(&self) -> &[QVec] {
        &self.facets
    }

    pub fn is_full_dim(&self) -> bool {
        self.full_dim
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    /// Extreme-ray generators only (redundant generators dropped), primitive.
    pub fn extreme_rays(&self) -> Vec<QVec> {
        let (rays, lin) = double_description(&self.facets, self.dim);
        let mut out = rays;
        for l in lin {
            out.push(l.iter().map(|x| -x).collect());
            out.push(l);
        }
        out
    }

    /// Exact membership via the facet description.
    pub fn contains_exact(&self, v: &[Q]) -> bool {
        self.facets.iter().all(|h| !dot(h, v).is_negative())
    }

    /// Exact membership with an LP certificate of nonnegative coefficients.
    pub fn contains_lp(&self, v: &[Q]) -> Option<QVec> {
        lp::nonneg_combination(&self.generators, v)
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> Membership {
        let margin = self.margin(v);
        Membership { inside: margin >= -tol, margin }
    }

    /// `min_h ⟨h, v̂⟩/|h|` with `v̂ = v / |v|_∞`; zero vector has margin 0.
    pub fn margin(&self, v: &[f64]) -> f64 {
        let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if m == 0.0 {
            return 0.0;
        }
        self.facets_f64
            .iter()
            .map(|h| h.iter().zip(v).map(|(a, b)| a * b / m).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn interior_contains(&self, v: &[f64], tol: f64) -> Result<bool> {
        self.require_full_dim()?;
        Ok(self.margin(v) > tol)
    }

    pub fn interior_contains_exact(&self, v: &[Q]) -> Result<bool> {
        self.require_full_dim()?;
        Ok(self.facets.iter().all(|h| dot(h, v).is_positive()))
    }

    fn require_full_dim(&self) -> Result<()> {
        if self.full_dim {
            Ok(())
        } else {
            Err(Error::NotFullDimensional { rank: linalg::rank(&self.generators), dim: self.dim })
        }
    }

    /// Set equality of cones by mutual generator containment.
    pub fn same_cone(&self, other: &PolyhedralCone) -> bool {
        self.dim == other.dim
            && self.generators.iter().all(|g| other.contains_exact(g))
            && other.generators.iter().all(|g| self.contains_exact(g))
    }

    /// Checks the facet description against the generator description:
    /// every generator satisfies every facet, and every extreme ray of the
    /// facet description is an LP-certified combination of generators.
    pub fn cross_validate(&self) -> Result<()> {
        for g in &self.generators {
            if !self.contains_exact(g) {
                return Err(Error::InvalidModel("generator violates a facet".into()));
            }
        }
        for r in self.extreme_rays() {
            if lp::nonneg_combination(&self.generators, &r).is_none() {
                return Err(Error::InvalidModel("facet description larger than generator cone".into()));
            }
        }
        Ok(())
    }
}

fn normalized_f64(h: &[Q]) -> Vec<f64> {
    let v = rational::to_f64_vec(h);
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// `{w : ⟨w, v⟩ ≥ 0 for all v ∈ c}` where `⟨w, v⟩ = wᵀ · pairing · v`.
pub fn dual_cone(c: &PolyhedralCone, pairing: &QMat) -> Result<PolyhedralCone> {
    let n = pairing.len();
    if pairing.iter().any(|r| r.len() != c.dim) || n != c.dim {
        return Err(Error::DimensionMismatch { expected: c.dim, got: n });
    }
    // {w : (pairingᵀ w) ∈ c^∨}  ⇒  w = pairing^{-T} h for h generating c^∨.
    let pt = linalg::transpose(pairing);
    let inv = linalg::inverse(&pt).ok_or(Error::DegeneratePairing)?;
    let gens: Vec<QVec> = c.facets.iter().map(|h| primitive(&linalg::mat_vec(&inv, h))).collect();
    PolyhedralCone::new(c.dim, dedup(gens))
}

fn dedup(v: Vec<QVec>) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::with_capacity(v.len());
    for x in v {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Double description: extreme rays and lineality basis of `{x : a_i · x ≥ 0}`.
pub fn double_description(ineqs: &[QVec], dim: usize) -> (Vec<QVec>, Vec<QVec>) {
    let mut lineality: Vec<QVec> = linalg::identity(dim);
    // (ray, indices of processed inequalities tight on it)
    let mut rays: Vec<(QVec, Vec<usize>)> = Vec::new();
    for (i, a) in ineqs.iter().enumerate() {
        if let Some(k) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.remove(k);
            let mut s0 = dot(a, &l0);
            if s0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let f = dot(a, l) / &s0;
                if !f.is_zero() {
                    for (x, y) in l.iter_mut().zip(&l0) {
                        *x -= &f * y;
                    }
                }
            }
            for (r, z) in rays.iter_mut() {
                let f = dot(a, r) / &s0;
                if !f.is_zero() {
                    for (x, y) in r.iter_mut().zip(&l0) {
                        *x -= &f * y;
                    }
                    *r = primitive(r);
                }
                z.push(i);
            }
            rays.push((primitive(&l0), (0..i).collect()));
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|(r, _)| dot(a, r)).collect();
        let mut next: Vec<(QVec, Vec<usize>)> = Vec::new();
        for (idx, (r, z)) in rays.iter().enumerate() {
            if vals[idx].is_positive() {
                next.push((r.clone(), z.clone()));
            } else if vals[idx].is_zero() {
                let mut z = z.clone();
                z.push(i);
                next.push((r.clone(), z));
            }
        }
        for (p, (rp, zp)) in rays.iter().enumerate() {
            if !vals[p].is_positive() {
                continue;
            }
            for (m, (rn, zn)) in rays.iter().enumerate() {
                if !vals[m].is_negative() {
                    continue;
                }
                let common: Vec<usize> = zp.iter().filter(|j| zn.contains(j)).copied().collect();
                let adjacent = rays.iter().enumerate().all(|(o, (_, zo))| {
                    o == p || o == m || !common.iter().all(|j| zo.contains(j))
                });
                if !adjacent {
                    continue;
                }
                let w: QVec = rn
                    .iter()
                    .zip(rp)
                    .map(|(x, y)| &vals[p] * x - &vals[m] * y)
                    .collect();
                let mut z = common;
                z.push(i);
                next.push((primitive(&w), z));
            }
        }
        rays = next;
    }
    let lineality: Vec<QVec> = lineality.iter().map(|l| primitive(l)).collect();
    (dedup(rays.into_iter().map(|(r, _)| r).collect()), lineality)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn std_pairing(n: usize) -> QMat {
        linalg::identity(n)
    }

    #[test]
    fn orthant_is_self_dual() {
        let c = PolyhedralCone::orthant(3);
        let d = dual_cone(&c, &std_pairing(3)).unwrap();
        assert!(d.same_cone(&c));
        assert!(c.is_pointed() && c.is_full_dim());
    }

    #[test]
    fn planar_dual() {
        let c = PolyhedralCone::from_ints(2, &[&[2, -1], &[0, 1]]).unwrap();
        let d = dual_cone(&c, &std_pairing(2)).unwrap();
        let expect = PolyhedralCone::from_ints(2, &[&[1, 2], &[1, 0]]).unwrap();
        assert!(d.same_cone(&expect));
        let mut rays = d.extreme_rays();
        rays.sort();
        assert_eq!(rays, vec![qvec(&[1, 0]), qvec(&[1, 2])]);
    }

    #[test]
    fn membership() {
        let c = PolyhedralCone::orthant(3);
        let m = c.contains(&[1.0, 1.0, 1.0], DEFAULT_TOL);
        assert!(m.inside);
        assert!((m.margin - 1.0).abs() < 1e-15);
        let c2 = PolyhedralCone::from_ints(2, &[&[1, 0], &[1, 1]]).unwrap();
        assert!(!c2.contains(&[-1.0, 0.0], DEFAULT_TOL).inside);
        assert!(!c2.contains_exact(&qvec(&[-1, 0])));
        assert!(c2.contains_lp(&qvec(&[3, 1])).is_some());
    }

    #[test]
    fn interior() {
        let c = PolyhedralCone::orthant(2);
        assert!(c.interior_contains(&[1.0, 1.0], DEFAULT_TOL).unwrap());
        assert!(!c.interior_contains(&[1.0, 0.0], DEFAULT_TOL).unwrap());
        assert!(!c.interior_contains_exact(&qvec(&[1, 0])).unwrap());
        let flat = PolyhedralCone::from_ints(2, &[&[1, 0]]).unwrap();
        assert!(matches!(
            flat.interior_contains(&[1.0, 0.0], DEFAULT_TOL),
            Err(Error::NotFullDimensional { .. })
        ));
    }

    #[test]
    fn rejects_zero_generator() {
        assert!(matches!(
            PolyhedralCone::from_ints(2, &[&[1, 0], &[0, 0]]),
            Err(Error::ZeroGenerator(1))
        ));
    }

    #[test]
    fn non_pointed_and_lower_dim() {
        let half = PolyhedralCone::from_ints(2, &[&[1, 0], &[-1, 0], &[0, 1]]).unwrap();
        assert!(!half.is_pointed());
        assert!(half.is_full_dim());
        let ray = PolyhedralCone::from_ints(3, &[&[1, 1, 0]]).unwrap();
        assert!(!ray.is_full_dim());
        assert!(ray.contains_exact(&qvec(&[2, 2, 0])));
        assert!(!ray.contains_exact(&qvec(&[2, 1, 0])));
        let d = dual_cone(&ray, &std_pairing(3)).unwrap();
        let dd = dual_cone(&d, &std_pairing(3)).unwrap();
        assert!(dd.same_cone(&ray));
    }

    #[test]
    fn proj_bundle_dual() {
        // divisor basis (f, ξ), curve basis (ξf, ξ²): f·ξf = 0, f·ξ² = 1, ξ·ξf = 1, ξ·ξ² = -1
        let pairing = vec![qvec(&[0, 1]), qvec(&[1, -1])];
        let nef = PolyhedralCone::from_ints(2, &[&[1, 0], &[1, 1]]).unwrap();
        // curves c with D·c ≥ 0: ⟨c, D⟩ = cᵀ Pᵀ D
        let eff = dual_cone(&nef, &linalg::transpose(&pairing)).unwrap();
        assert!(eff.same_cone(&PolyhedralCone::orthant(2)));
        let back = dual_cone(&eff, &pairing).unwrap();
        assert!(back.same_cone(&nef));
        assert!(eff.interior_contains_exact(&qvec(&[3, 1])).unwrap());
    }

    #[test]
    fn degenerate_pairing_rejected() {
        let c = PolyhedralCone::orthant(2);
        let p = vec![qvec(&[1, 2]), qvec(&[2, 4])];
        assert!(matches!(dual_cone(&c, &p), Err(Error::DegeneratePairing)));
    }
}
