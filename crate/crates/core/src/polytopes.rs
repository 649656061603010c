//! Exact H-polytopes: vertex enumeration, volume and mixed volume.
//!
//! Polytopes are `{u : ⟨u, v_i⟩ + a_i ≥ 0}`. Vertices are found by scanning
//! `dim`-subsets of facets; volumes come from the barycentric flag
//! triangulation of the face lattice, so everything stays rational.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::cones;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, dot, q, QVec, Q};
use crate::toric::Fan;

#[derive(Clone, Debug)]
pub struct HPolytope {
    dim: usize,
    normals: Vec<QVec>,
    offsets: QVec,
    vertices: Vec<QVec>,
    affine_dim: Option<usize>,
}

impl HPolytope {
    pub fn new(normals: Vec<QVec>, offsets: QVec) -> Result<Self> {
        let dim = normals.first().map_or(0, Vec::len);
        if normals.len() != offsets.len() {
            return Err(Error::DimensionMismatch { expected: normals.len(), got: offsets.len() });
        }
        if let Some(bad) = normals.iter().find(|n| n.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
        }
        let (rays, lin) = cones::double_description(&normals, dim);
        if let Some(r) = rays.into_iter().chain(lin).next() {
            return Err(Error::Unbounded(r.iter().map(rational::format_q).collect()));
        }
        let vertices = enumerate_vertices(&normals, &offsets, dim);
        let affine_dim = affine_dimension(&vertices);
        Ok(HPolytope { dim, normals, offsets, vertices, affine_dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[QVec] {
        &self.normals
    }

    pub fn offsets(&self) -> &[Q] {
        &self.offsets
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Empty or lower-dimensional.
    pub fn is_degenerate(&self) -> bool {
        self.affine_dim.is_none_or(|d| d < self.dim)
    }

    pub fn contains(&self, u: &[Q]) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(n, a)| !(dot(n, u) + a).is_negative())
    }

    /// Offsets replaced by the support values `-min_{vertex} ⟨u, v_i⟩`.
    pub fn tightened(&self) -> HPolytope {
        if self.is_empty() {
            return self.clone();
        }
        let offsets: QVec = self
            .normals
            .iter()
            .map(|n| -self.vertices.iter().map(|u| dot(n, u)).min().expect("nonempty"))
            .collect();
        HPolytope {
            dim: self.dim,
            normals: self.normals.clone(),
            offsets,
            vertices: self.vertices.clone(),
            affine_dim: self.affine_dim,
        }
    }

    /// Euclidean volume; zero for degenerate polytopes.
    pub fn volume(&self) -> Q {
        if self.is_degenerate() {
            return Q::zero();
        }
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let tight = self.tight_sets();
        let mut total = Q::zero();
        for simplex in self.flag_simplices(&all, self.dim, &tight) {
            let base = &simplex[0];
            let m: Vec<QVec> = simplex[1..].iter().map(|p| rational::sub(p, base)).collect();
            total += linalg::det(&m).abs();
        }
        total / factorial(self.dim)
    }

    fn tight_sets(&self) -> Vec<Vec<usize>> {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, a)| {
                (0..self.vertices.len())
                    .filter(|&k| (dot(n, &self.vertices[k]) + a).is_zero())
                    .collect()
            })
            .collect()
    }

    /// Simplices (as point lists) of the flag triangulation of a face.
    fn flag_simplices(&self, face: &[usize], k: usize, tight: &[Vec<usize>]) -> Vec<Vec<QVec>> {
        if k == 0 {
            return vec![vec![self.vertices[face[0]].clone()]];
        }
        let center = barycenter(face.iter().map(|&i| &self.vertices[i]));
        let mut subfaces: Vec<Vec<usize>> = Vec::new();
        for t in tight {
            let sub: Vec<usize> = face.iter().copied().filter(|i| t.contains(i)).collect();
            if sub.len() == face.len() || sub.is_empty() || subfaces.contains(&sub) {
                continue;
            }
            let pts: Vec<QVec> = sub.iter().map(|&i| self.vertices[i].clone()).collect();
            if affine_dimension(&pts) == Some(k - 1) {
                subfaces.push(sub);
            }
        }
        let mut out = Vec::new();
        for sub in subfaces {
            for mut s in self.flag_simplices(&sub, k - 1, tight) {
                s.insert(0, center.clone());
                out.push(s);
            }
        }
        out
    }

    /// Minkowski sum of polytopes sharing the same normal list.
    ///
    /// Offsets are tightened and added; the result is certified by checking
    /// that every vertex of the sum decomposes as a sum of vertices.
    pub fn minkowski_sum(&self, other: &HPolytope) -> Result<HPolytope> {
        if self.normals != other.normals {
            return Err(Error::MinkowskiNormals);
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        if other.is_empty() {
            return Ok(other.clone());
        }
        let a = self.tightened();
        let b = other.tightened();
        let offsets = rational::add(&a.offsets, &b.offsets);
        let sum = HPolytope::new(self.normals.clone(), offsets)?;
        for w in &sum.vertices {
            let ok = a
                .vertices
                .iter()
                .any(|p| b.vertices.iter().any(|r| rational::add(p, r) == *w));
            if !ok {
                return Err(Error::MinkowskiNormals);
            }
        }
        Ok(sum)
    }

    pub fn scaled(&self, t: &Q) -> HPolytope {
        let offsets = rational::scale(t, &self.offsets);
        HPolytope {
            dim: self.dim,
            normals: self.normals.clone(),
            offsets,
            vertices: self.vertices.iter().map(|v| rational::scale(t, v)).collect(),
            affine_dim: if t.is_zero() && !self.vertices.is_empty() { Some(0) } else { self.affine_dim },
        }
    }
}

/// Polytope of the torus-invariant divisor `Σ a_ρ D_ρ` on a complete fan.
pub fn polytope_from_divisor(fan: &Fan, coeffs: &[Q]) -> Result<HPolytope> {
    if coeffs.len() != fan.rays().len() {
        return Err(Error::DimensionMismatch { expected: fan.rays().len(), got: coeffs.len() });
    }
    HPolytope::new(fan.rays_q(), coeffs.to_vec())
}

/// Mixed volume `V(P_1, …, P_n)` by polarization over nonempty subsets:
/// `n!·V = Σ_S (-1)^{n-|S|} vol(Σ_{i∈S} P_i)`.
pub fn mixed_volume(ps: &[HPolytope]) -> Result<Q> {
    let n = ps.first().map_or(0, HPolytope::dim);
    if ps.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: ps.len() });
    }
    if let Some(bad) = ps.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.dim() });
    }
    let mut total = Q::zero();
    for mask in 1u32..(1u32 << n) {
        let members: Vec<&HPolytope> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &ps[i]).collect();
        let mut sum = members[0].clone();
        for p in &members[1..] {
            sum = sum.minkowski_sum(p)?;
        }
        let sign = if (n - members.len()).is_multiple_of(2) { Q::one() } else { -Q::one() };
        total += sign * sum.volume();
    }
    Ok(total / factorial(n))
}

pub fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

fn barycenter<'a>(pts: impl Iterator<Item = &'a QVec>) -> QVec {
    let mut acc: Option<QVec> = None;
    let mut count = 0i64;
    for p in pts {
        count += 1;
        acc = Some(match acc {
            None => p.clone(),
            Some(a) => rational::add(&a, p),
        });
    }
    let acc = acc.unwrap_or_default();
    rational::scale(&(Q::one() / q(count.max(1))), &acc)
}

fn affine_dimension(pts: &[QVec]) -> Option<usize> {
    let first = pts.first()?;
    let diffs: Vec<QVec> = pts[1..].iter().map(|p| rational::sub(p, first)).collect();
    Some(if diffs.is_empty() { 0 } else { linalg::rank(&diffs) })
}

fn enumerate_vertices(normals: &[QVec], offsets: &[Q], dim: usize) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    if dim == 0 {
        return out;
    }
    for subset in (0..normals.len()).combinations(dim) {
        let m: Vec<QVec> = subset.iter().map(|&i| normals[i].clone()).collect();
        let Some(inv) = linalg::inverse(&m) else {
            continue;
        };
        let rhs: QVec = subset.iter().map(|&i| -offsets[i].clone()).collect();
        let u = linalg::mat_vec(&inv, &rhs);
        let feasible = normals.iter().zip(offsets).all(|(n, a)| !(dot(n, &u) + a).is_negative());
        if feasible && !out.contains(&u) {
            out.push(u);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qf, qvec};

    fn square(w: i64, h: i64) -> HPolytope {
        HPolytope::new(
            vec![qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[-1, 0]), qvec(&[0, -1])],
            qvec(&[0, 0, w, h]),
        )
        .unwrap()
    }

    #[test]
    fn unit_square_vertices_and_volume() {
        let p = square(1, 1);
        assert_eq!(p.vertices(), &[qvec(&[0, 0]), qvec(&[0, 1]), qvec(&[1, 0]), qvec(&[1, 1])]);
        assert_eq!(p.volume(), q(1));
    }

    #[test]
    fn simplices() {
        let tri = HPolytope::new(vec![qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[-1, -1])], qvec(&[0, 0, 1])).unwrap();
        assert_eq!(tri.vertices().len(), 3);
        assert_eq!(tri.volume(), qf(1, 2));
        let tet = HPolytope::new(
            vec![qvec(&[1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[0, 0, 1]), qvec(&[-1, -1, -1])],
            qvec(&[0, 0, 0, 1]),
        )
        .unwrap();
        assert_eq!(tet.volume(), qf(1, 6));
    }

    #[test]
    fn unit_cube() {
        let cube = HPolytope::new(
            vec![
                qvec(&[1, 0, 0]),
                qvec(&[0, 1, 0]),
                qvec(&[0, 0, 1]),
                qvec(&[-1, 0, 0]),
                qvec(&[0, -1, 0]),
                qvec(&[0, 0, -1]),
            ],
            qvec(&[0, 0, 0, 1, 1, 1]),
        )
        .unwrap();
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(cube.volume(), q(1));
    }

    #[test]
    fn degenerate_point() {
        let p = HPolytope::new(vec![qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[-1, -1])], qvec(&[0, 0, 0])).unwrap();
        assert_eq!(p.vertices(), &[qvec(&[0, 0])]);
        assert!(p.is_degenerate());
        assert_eq!(p.volume(), q(0));
    }

    #[test]
    fn unbounded_rejected() {
        let r = HPolytope::new(vec![qvec(&[1, 0]), qvec(&[0, 1])], qvec(&[0, 0]));
        assert!(matches!(r, Err(Error::Unbounded(_))));
    }

    #[test]
    fn mixed_volumes_of_boxes() {
        let p = square(1, 1);
        let r = square(2, 1);
        assert_eq!(mixed_volume(&[p.clone(), p.clone()]).unwrap(), q(1));
        assert_eq!(mixed_volume(&[p.clone(), r.clone()]).unwrap(), qf(3, 2));
        assert_eq!(mixed_volume(&[r.clone(), p]).unwrap(), qf(3, 2));
        assert_eq!(mixed_volume(&[r.clone(), r.clone()]).unwrap(), r.volume());
    }

    #[test]
    fn minkowski_of_boxes() {
        let s = square(1, 1).minkowski_sum(&square(2, 1)).unwrap();
        assert_eq!(s.volume(), q(6));
    }
}
