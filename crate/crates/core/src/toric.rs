//! Numerical intersection theory of simplicial complete toric varieties.
//!
//! From a fan we build the divisor class group `N¹` (ray divisors modulo
//! the character relations), the torus-invariant wall curves and their
//! pairing rows, the four standard cones, and the full `n`-fold
//! intersection tensor. Intersection numbers come only from mixed volumes
//! of nef polytopes followed by a change of basis; the wall-curve
//! combinatorics are used as an independent cross-check.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chow::{ChowModel, Provenance, SymTensor};
use crate::cones::{double_description, dual_cone, PolyhedralCone};
use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::lp;
use crate::polytopes::{self, HPolytope};
use crate::rational::{self, q, QVec, Q};

/// A simplicial fan given by primitive rays and maximal cones (0-based).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    #[serde(skip)]
    warnings: Vec<String>,
}

/// On-disk fan description; extra basis hints are optional.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanFile {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub div_basis: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_basis: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FanViolation {
    RayDimension { ray: usize },
    ZeroRay { ray: usize },
    DuplicateRays { first: usize, second: usize },
    ConeSize { cone: usize },
    RayIndex { cone: usize, index: usize },
    NotSimplicial { cone: usize },
    WallCofaces { wall: Vec<usize>, count: usize },
    OverlappingCones { first: usize, second: usize },
}

impl std::fmt::Display for FanViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FanViolation::RayDimension { ray } => write!(f, "ray {ray} has wrong dimension"),
            FanViolation::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            FanViolation::DuplicateRays { first, second } => write!(f, "rays {first} and {second} coincide"),
            FanViolation::ConeSize { cone } => write!(f, "max cone {cone} does not have dim rays"),
            FanViolation::RayIndex { cone, index } => write!(f, "max cone {cone} references missing ray {index}"),
            FanViolation::NotSimplicial { cone } => write!(f, "max cone {cone} is not full-dimensional simplicial"),
            FanViolation::WallCofaces { wall, count } => write!(f, "wall {wall:?} lies in {count} max cones (expected 2)"),
            FanViolation::OverlappingCones { first, second } => write!(f, "max cones {first} and {second} overlap"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub violation: Option<FanViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

impl Fan {
    /// Builds a fan, normalizing non-primitive rays (recorded in `warnings`).
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Self {
        let mut warnings = Vec::new();
        let rays = rays
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let g = r.iter().fold(0i64, |g, &x| g.gcd(&x));
                if g > 1 {
                    warnings.push(format!("ray {i} {r:?} not primitive; divided by {g}"));
                    r.iter().map(|x| x / g).collect()
                } else {
                    r
                }
            })
            .collect();
        let max_cones = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Fan { dim, rays, max_cones, warnings }
    }

    pub fn from_file(f: &FanFile) -> Self {
        Fan::new(f.dim, f.rays.clone(), f.max_cones.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn rays_q(&self) -> Vec<QVec> {
        self.rays.iter().map(|r| rational::qvec(r)).collect()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn cone_matrix(&self, idx: &[usize]) -> QMat {
        idx.iter().map(|&i| rational::qvec(&self.rays[i])).collect()
    }

    /// `|det|` of the ray generators of a maximal cone.
    pub fn multiplicity(&self, cone: &[usize]) -> Q {
        linalg::det(&self.cone_matrix(cone)).abs()
    }

    /// Index of the lattice spanned by the wall rays in its saturation
    /// (gcd of the maximal minors).
    pub fn wall_multiplicity(&self, wall: &[usize]) -> Q {
        let m = self.cone_matrix(wall);
        let k = wall.len();
        let mut g = BigInt::zero();
        for cols in (0..self.dim).combinations(k) {
            let sub: QMat = m.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            let d = linalg::det(&sub);
            g = g.gcd(&d.to_integer());
        }
        Q::from_integer(g)
    }

    /// Walls with their (one or more) containing max cones.
    fn wall_map(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.max_cones.iter().enumerate() {
            for w in c.iter().copied().combinations(self.dim - 1) {
                walls.entry(w).or_default().push(ci);
            }
        }
        walls
    }
}

pub fn validate_fan(f: &Fan) -> ValidationReport {
    let bad = |v| ValidationReport { violation: Some(v) };
    for (i, r) in f.rays.iter().enumerate() {
        if r.len() != f.dim {
            return bad(FanViolation::RayDimension { ray: i });
        }
        if r.iter().all(|&x| x == 0) {
            return bad(FanViolation::ZeroRay { ray: i });
        }
    }
    for (i, j) in (0..f.rays.len()).tuple_combinations() {
        if f.rays[i] == f.rays[j] {
            return bad(FanViolation::DuplicateRays { first: i, second: j });
        }
    }
    for (ci, c) in f.max_cones.iter().enumerate() {
        if c.len() != f.dim || c.iter().collect::<std::collections::BTreeSet<_>>().len() != f.dim {
            return bad(FanViolation::ConeSize { cone: ci });
        }
        if let Some(&index) = c.iter().find(|&&i| i >= f.rays.len()) {
            return bad(FanViolation::RayIndex { cone: ci, index });
        }
        if f.multiplicity(c).is_zero() {
            return bad(FanViolation::NotSimplicial { cone: ci });
        }
    }
    for (wall, cofaces) in f.wall_map() {
        if cofaces.len() != 2 {
            return bad(FanViolation::WallCofaces { wall, count: cofaces.len() });
        }
    }
    // interiors overlap iff Σλ r = Σμ r' has a solution with λ, μ ≥ 1
    for (a, b) in (0..f.max_cones.len()).tuple_combinations() {
        let ra = f.cone_matrix(&f.max_cones[a]);
        let rb = f.cone_matrix(&f.max_cones[b]);
        let mut cols: Vec<QVec> = ra.clone();
        cols.extend(rb.iter().map(|r| r.iter().map(|x| -x).collect::<QVec>()));
        let sa = ra.iter().fold(vec![Q::zero(); f.dim], |acc, r| rational::add(&acc, r));
        let sb = rb.iter().fold(vec![Q::zero(); f.dim], |acc, r| rational::add(&acc, r));
        let target = rational::sub(&sb, &sa);
        if lp::nonneg_combination(&cols, &target).is_some() {
            return bad(FanViolation::OverlappingCones { first: a, second: b });
        }
    }
    ValidationReport { violation: None }
}

fn require_valid(f: &Fan) -> Result<()> {
    match validate_fan(f).violation {
        None => Ok(()),
        Some(v) => Err(Error::InvalidFan(v.to_string())),
    }
}

/// `N¹` as ray divisors modulo character relations, with a ray basis.
#[derive(Clone, Debug)]
pub struct ClassGroups {
    /// Ray indices whose divisors form the basis.
    pub basis: Vec<usize>,
    /// Coordinates of every ray divisor `D_ρ` in that basis.
    pub ray_coords: Vec<QVec>,
}

impl ClassGroups {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

pub fn class_groups(f: &Fan, preferred: Option<&[usize]>) -> Result<ClassGroups> {
    require_valid(f)?;
    let nrays = f.rays.len();
    let rho = nrays - f.dim;
    // relation rows r_k = (⟨e_k, v_i⟩)_i
    let relations: Vec<QVec> = (0..f.dim).map(|k| f.rays.iter().map(|r| q(r[k])).collect()).collect();
    let basis = match preferred {
        Some(b) => {
            if b.len() != rho {
                return Err(Error::InvalidFan(format!("divisor basis needs {rho} rays, got {}", b.len())));
            }
            b.to_vec()
        }
        None => {
            let mut chosen: Vec<usize> = Vec::new();
            let mut rows = relations.clone();
            for i in 0..nrays {
                let mut e = vec![Q::zero(); nrays];
                e[i] = q(1);
                rows.push(e);
                if linalg::rank(&rows) == f.dim + chosen.len() + 1 {
                    chosen.push(i);
                } else {
                    rows.pop();
                }
                if chosen.len() == rho {
                    break;
                }
            }
            chosen
        }
    };
    // columns: unit vectors at basis rays, then the relation vectors
    let mut cols: Vec<QVec> = basis
        .iter()
        .map(|&i| {
            let mut e = vec![Q::zero(); nrays];
            e[i] = q(1);
            e
        })
        .collect();
    cols.extend(relations.iter().cloned());
    let m = linalg::transpose(&cols);
    let inv = linalg::inverse(&m)
        .ok_or_else(|| Error::InvalidFan(format!("rays {basis:?} do not give a basis of N¹")))?;
    let ray_coords = (0..nrays)
        .map(|i| {
            let mut e = vec![Q::zero(); nrays];
            e[i] = q(1);
            let sol = linalg::mat_vec(&inv, &e);
            sol[..rho].to_vec()
        })
        .collect();
    Ok(ClassGroups { basis, ray_coords })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WallCurve {
    pub wall: Vec<usize>,
    pub adjacent: (usize, usize),
    /// `D_ρ · C` for every ray ρ.
    pub pairing_row: QVec,
}

pub fn wall_curves(f: &Fan) -> Result<Vec<WallCurve>> {
    require_valid(f)?;
    let mut out = Vec::new();
    for (wall, cofaces) in f.wall_map() {
        let cone_a = &f.max_cones[cofaces[0]];
        let cone_b = &f.max_cones[cofaces[1]];
        let u0 = *cone_a.iter().find(|i| !wall.contains(i)).expect("wall is a proper face");
        let un = *cone_b.iter().find(|i| !wall.contains(i)).expect("wall is a proper face");
        let mult_wall = f.wall_multiplicity(&wall);
        let d0 = &mult_wall / f.multiplicity(cone_a);
        let dn = &mult_wall / f.multiplicity(cone_b);
        // Σ_{i∈wall} x_i v_i = -(d0 v_u0 + dn v_un)
        let rhs: QVec = (0..f.dim).map(|k| -(&d0 * q(f.rays[u0][k]) + &dn * q(f.rays[un][k]))).collect();
        let m: QMat = (0..f.dim).map(|k| wall.iter().map(|&i| q(f.rays[i][k])).collect()).collect();
        let x = linalg::solve(&m, &rhs)
            .ok_or_else(|| Error::InvalidFan(format!("wall {wall:?}: relations inconsistent")))?;
        let mut row = vec![Q::zero(); f.rays.len()];
        row[u0] = d0;
        row[un] = dn;
        for (&i, xi) in wall.iter().zip(x) {
            row[i] = xi;
        }
        out.push(WallCurve { wall, adjacent: (u0, un), pairing_row: row });
    }
    Ok(out)
}

/// Labels `D1, D2, …` and `C12, …` (1-based, as usually written).
pub fn ray_label(i: usize) -> String {
    format!("D{}", i + 1)
}

pub fn wall_label(wall: &[usize]) -> String {
    if wall.iter().all(|&i| i < 9) {
        format!("C{}", wall.iter().map(|i| (i + 1).to_string()).collect::<String>())
    } else {
        format!("C{}", wall.iter().map(|i| (i + 1).to_string()).join("_"))
    }
}

/// Everything derived from a fan in the chosen bases.
#[derive(Clone, Debug)]
pub struct ToricData {
    pub groups: ClassGroups,
    pub walls: Vec<WallCurve>,
    /// Indices into `walls` forming the curve basis.
    pub curve_basis: Vec<usize>,
    /// `P[i][j] = D_{basis i} · C_{curve j}`.
    pub pairing: QMat,
    /// Curve coordinates of each wall curve.
    pub wall_coords: Vec<QVec>,
}

pub fn toric_data(f: &Fan, div_basis: Option<&[usize]>, curve_basis: Option<&[Vec<usize>]>) -> Result<ToricData> {
    let groups = class_groups(f, div_basis)?;
    let walls = wall_curves(f)?;
    let rho = groups.rank();
    // pairing of each wall with the basis divisors
    let basis_rows: Vec<QVec> = walls
        .iter()
        .map(|w| groups.basis.iter().map(|&b| w.pairing_row[b].clone()).collect())
        .collect();
    let chosen: Vec<usize> = match curve_basis {
        Some(cb) => {
            let mut idx = Vec::new();
            for w in cb {
                let mut w = w.clone();
                w.sort_unstable();
                let i = walls
                    .iter()
                    .position(|x| x.wall == w)
                    .ok_or_else(|| Error::InvalidFan(format!("{w:?} is not a wall")))?;
                idx.push(i);
            }
            idx
        }
        None => {
            let mut idx: Vec<usize> = Vec::new();
            let mut rows: Vec<QVec> = Vec::new();
            for (i, r) in basis_rows.iter().enumerate() {
                rows.push(r.clone());
                if linalg::rank(&rows) == rows.len() {
                    idx.push(i);
                } else {
                    rows.pop();
                }
                if idx.len() == rho {
                    break;
                }
            }
            idx
        }
    };
    if chosen.len() != rho {
        return Err(Error::InvalidFan(format!("curve basis needs {rho} walls, got {}", chosen.len())));
    }
    // P columns are the basis-divisor pairings of the chosen curves
    let pairing: QMat = (0..rho).map(|i| chosen.iter().map(|&j| basis_rows[j][i].clone()).collect()).collect();
    let inv = linalg::inverse(&pairing).ok_or(Error::DegeneratePairing)?;
    let wall_coords = basis_rows.iter().map(|r| linalg::mat_vec(&inv, r)).collect();
    Ok(ToricData { groups, walls, curve_basis: chosen, pairing, wall_coords })
}

/// The cones `Eff¹`, `Eff₁`, `Nef¹`, `Mov₁` in the model bases.
#[derive(Clone, Debug)]
pub struct ConePackage {
    pub eff_div: PolyhedralCone,
    pub eff_curve: PolyhedralCone,
    pub nef: PolyhedralCone,
    pub mov_curve: PolyhedralCone,
}

pub fn cone_package(data: &ToricData) -> Result<ConePackage> {
    let rho = data.groups.rank();
    let eff_div = PolyhedralCone::new(rho, dedup_primitive(&data.groups.ray_coords))?;
    let eff_curve = PolyhedralCone::new(rho, dedup_primitive(&data.wall_coords))?;
    let nef = dual_cone(&eff_curve, &data.pairing)?;
    if !nef.is_full_dim() {
        return Err(Error::NotProjective { rank: linalg::rank(nef.generators()), dim: rho });
    }
    let mov_curve = dual_cone(&eff_div, &linalg::transpose(&data.pairing))?;
    Ok(ConePackage { eff_div, eff_curve, nef, mov_curve })
}

/// `Mov¹ = ⋂_ρ cone(D_σ : σ ≠ ρ)`: divisors with no fixed toric component.
pub fn movable_divisors(data: &ToricData) -> Result<PolyhedralCone> {
    let rho = data.groups.rank();
    let coords = &data.groups.ray_coords;
    let mut ineqs: Vec<QVec> = Vec::new();
    for skip in 0..coords.len() {
        let others: Vec<QVec> = coords.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, c)| c.clone()).collect();
        let c = PolyhedralCone::new(rho, dedup_primitive(&others))?;
        ineqs.extend(c.facet_normals().iter().cloned());
    }
    let (rays, lineality) = double_description(&ineqs, rho);
    if !lineality.is_empty() {
        return Err(Error::InvalidFan("movable cone is not pointed".into()));
    }
    PolyhedralCone::new(rho, rays)
}

fn dedup_primitive(v: &[QVec]) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    for x in v {
        if rational::is_zero_vec(x) {
            continue;
        }
        let p = rational::primitive(x);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Ray coefficients representing a class given in basis coordinates.
fn ray_coefficients(f: &Fan, groups: &ClassGroups, class: &[Q]) -> QVec {
    let mut a = vec![Q::zero(); f.rays.len()];
    for (&b, c) in groups.basis.iter().zip(class) {
        a[b] = c.clone();
    }
    a
}

/// Polytope of a class given in basis coordinates.
pub fn class_polytope(f: &Fan, groups: &ClassGroups, class: &[Q]) -> Result<HPolytope> {
    polytopes::polytope_from_divisor(f, &ray_coefficients(f, groups, class))
}

/// Intersection tensor from mixed volumes of `ρ` independent nef generators.
pub fn intersection_tensor(f: &Fan, data: &ToricData, cones: &ConePackage) -> Result<SymTensor> {
    let rho = data.groups.rank();
    let n = f.dim;
    let mut nef_basis: Vec<QVec> = Vec::new();
    for g in cones.nef.extreme_rays() {
        nef_basis.push(g);
        if linalg::rank(&nef_basis) < nef_basis.len() {
            nef_basis.pop();
        }
        if nef_basis.len() == rho {
            break;
        }
    }
    if nef_basis.len() < rho {
        return Err(Error::NotProjective { rank: nef_basis.len(), dim: rho });
    }
    let polys: Vec<HPolytope> = nef_basis
        .iter()
        .map(|g| class_polytope(f, &data.groups, g))
        .collect::<Result<_>>()?;
    let nfact = polytopes::factorial(n);
    let mut in_nef = SymTensor::zeros(rho, n);
    for idx in (0..rho).combinations_with_replacement(n) {
        let ps: Vec<HPolytope> = idx.iter().map(|&i| polys[i].clone()).collect();
        let v = &nfact * polytopes::mixed_volume(&ps)?;
        in_nef.set_sym(&idx, v);
    }
    // D_i = Σ_k (G^{-1})_{ik} N_k where rows of G are the nef generators
    let ginv = linalg::inverse(&nef_basis).ok_or(Error::DegeneratePairing)?;
    Ok(in_nef.change_basis(&ginv))
}

/// Checks `D_{τ_1} ⋯ D_{τ_{n-1}} · D_j = (D_j · C_τ) / mult(τ)` on every wall.
pub fn check_wall_consistency(f: &Fan, data: &ToricData, tensor: &SymTensor) -> Result<()> {
    let rho = data.groups.rank();
    for w in &data.walls {
        let mult = f.wall_multiplicity(&w.wall);
        let mut factors: Vec<QVec> = w.wall.iter().map(|&r| data.groups.ray_coords[r].clone()).collect();
        for j in 0..rho {
            let mut e = vec![Q::zero(); rho];
            e[j] = q(1);
            factors.push(e);
            let lhs = tensor.eval_exact(&factors);
            factors.pop();
            let rhs = &w.pairing_row[data.groups.basis[j]] / &mult;
            if lhs != rhs {
                return Err(Error::InvalidModel(format!(
                    "wall {:?}: tensor gives {} but wall curve gives {}",
                    w.wall,
                    rational::format_q(&lhs),
                    rational::format_q(&rhs)
                )));
            }
        }
    }
    Ok(())
}

/// Full ChowModel of a fan.
pub fn fan_to_chow(f: &Fan, div_basis: Option<&[usize]>, curve_basis: Option<&[Vec<usize>]>) -> Result<ChowModel> {
    let data = toric_data(f, div_basis, curve_basis)?;
    let cones = cone_package(&data)?;
    let tensor = intersection_tensor(f, &data, &cones)?;
    check_wall_consistency(f, &data, &tensor)?;
    let div_labels = data.groups.basis.iter().map(|&i| ray_label(i)).collect();
    let curve_labels = data.curve_basis.iter().map(|&j| wall_label(&data.walls[j].wall)).collect();
    ChowModel::new(
        f.dim,
        div_labels,
        curve_labels,
        data.pairing,
        tensor,
        cones.nef,
        cones.eff_div,
        cones.eff_curve,
        Some(cones.mov_curve),
        Provenance::FanDerived,
    )
}

pub fn fan_file_to_chow(ff: &FanFile) -> Result<ChowModel> {
    let fan = Fan::from_file(ff);
    fan_to_chow(&fan, ff.div_basis.as_deref(), ff.curve_basis.as_deref())
}

/// Fans used by presets and tests.
pub mod fans {
    use super::{Fan, FanFile};

    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
        Fan::new(n, rays, cones)
    }

    /// The rank-3 threefold with a single flip (rays v1..v6, eight cones).
    pub fn flip_threefold() -> FanFile {
        FanFile {
            dim: 3,
            rays: vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![1, 1, 1],
                vec![-1, 0, 0],
                vec![0, -1, 0],
                vec![0, 0, -1],
            ],
            max_cones: vec![
                vec![0, 1, 2],
                vec![0, 1, 5],
                vec![0, 2, 4],
                vec![0, 4, 5],
                vec![1, 2, 3],
                vec![1, 3, 5],
                vec![2, 3, 4],
                vec![3, 4, 5],
            ],
            div_basis: Some(vec![0, 1, 2]),
            curve_basis: Some(vec![vec![0, 1], vec![0, 2], vec![1, 2]]),
        }
    }

    /// Smooth threefold (blow-up of P³ along four lines) whose nef divisors are all big.
    pub fn nonconvex_threefold() -> FanFile {
        FanFile {
            dim: 3,
            rays: vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![-1, -1, -1],
                vec![1, -1, -2],
                vec![1, 0, -1],
                vec![0, -1, -2],
                vec![0, 0, -1],
            ],
            max_cones: vec![
                vec![0, 1, 2],
                vec![0, 1, 5],
                vec![0, 2, 3],
                vec![0, 3, 4],
                vec![0, 4, 5],
                vec![1, 2, 3],
                vec![1, 3, 7],
                vec![1, 4, 5],
                vec![1, 4, 7],
                vec![3, 4, 6],
                vec![3, 6, 7],
                vec![4, 6, 7],
            ],
            div_basis: Some(vec![0, 4, 5, 6, 7]),
            curve_basis: Some(vec![vec![0, 3], vec![0, 5], vec![1, 4], vec![3, 6], vec![3, 7]]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    #[test]
    fn projective_fans_valid() {
        assert!(validate_fan(&fans::projective_space(2)).is_valid());
        assert!(validate_fan(&fans::projective_space(3)).is_valid());
        let g = class_groups(&fans::projective_space(3), None).unwrap();
        assert_eq!(g.rank(), 1);
    }

    #[test]
    fn preset_fans_valid_with_expected_ranks() {
        let t = Fan::from_file(&fans::flip_threefold());
        assert!(validate_fan(&t).is_valid());
        assert_eq!(class_groups(&t, None).unwrap().rank(), 3);
        let a = Fan::from_file(&fans::nonconvex_threefold());
        assert!(validate_fan(&a).is_valid());
        assert_eq!(class_groups(&a, None).unwrap().rank(), 5);
    }

    #[test]
    fn missing_cone_reports_wall() {
        let mut f = fans::projective_space(2);
        f.max_cones.pop();
        let report = validate_fan(&f);
        assert!(matches!(report.violation, Some(FanViolation::WallCofaces { count: 1, .. })));
    }

    #[test]
    fn overlapping_cones_detected() {
        // two copies of the same quadrant plus the rest of a valid-looking wall structure
        let f = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![1, 1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0], vec![0, 4], vec![4, 1]],
        );
        let r = validate_fan(&f);
        assert!(!r.is_valid());
    }

    #[test]
    fn non_primitive_rays_normalized() {
        let f = Fan::new(2, vec![vec![2, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(f.rays()[0], vec![1, 0]);
        assert_eq!(f.warnings().len(), 1);
    }

    #[test]
    fn p2_wall_curves() {
        let walls = wall_curves(&fans::projective_space(2)).unwrap();
        assert_eq!(walls.len(), 3);
        for w in walls {
            assert_eq!(w.pairing_row, qvec(&[1, 1, 1]));
        }
    }

    #[test]
    fn flip_threefold_table() {
        let t = Fan::from_file(&fans::flip_threefold());
        let data = toric_data(&t, Some(&[0, 1, 2]), Some(&[vec![0, 1], vec![0, 2], vec![1, 2]])).unwrap();
        // columns: C12, C13, C23; rows D1, D2, D3
        let table = linalg::transpose(&data.pairing);
        assert_eq!(table, vec![qvec(&[-1, -1, 1]), qvec(&[0, 1, 0]), qvec(&[1, 0, 0])]);
        for w in &data.walls {
            for k in 0..3 {
                let s: Q = t.rays().iter().zip(&w.pairing_row).map(|(r, d)| q(r[k]) * d).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn flip_threefold_cones() {
        let t = Fan::from_file(&fans::flip_threefold());
        let data = toric_data(&t, Some(&[0, 1, 2]), Some(&[vec![0, 1], vec![0, 2], vec![1, 2]])).unwrap();
        let c = cone_package(&data).unwrap();
        let nef = PolyhedralCone::from_ints(3, &[&[1, 0, 1], &[0, 1, 1], &[0, 0, 1]]).unwrap();
        assert!(c.nef.same_cone(&nef));
        assert!(c.eff_curve.same_cone(&PolyhedralCone::orthant(3)));
        assert!(c.eff_div.same_cone(&PolyhedralCone::orthant(3)));
        // Mov₁ is cut out by the effective divisors; C12 pairs negatively with D1
        assert!(c.mov_curve.is_full_dim());
        assert!(!c.mov_curve.contains_exact(&qvec(&[1, 0, 0])));
        for g in c.mov_curve.generators() {
            for e in c.eff_div.generators() {
                assert!(!rational::dot(e, &linalg::mat_vec(&data.pairing, g)).is_negative());
            }
        }
        let back = dual_cone(&c.nef, &linalg::transpose(&data.pairing)).unwrap();
        assert!(back.same_cone(&c.eff_curve));
        // intersection of the ray-omitting cones; D1+D2 carries D1 or D2 in its base locus
        let mov = PolyhedralCone::from_ints(3, &[&[1, 1, 1], &[1, 0, 1], &[0, 1, 1], &[0, 0, 1]]).unwrap();
        assert!(movable_divisors(&data).unwrap().same_cone(&mov));
        let nef1 = PolyhedralCone::from_ints(3, &[&[1, 1, 1], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(c.mov_curve.same_cone(&nef1));
    }

    #[test]
    fn flip_threefold_curve_squares() {
        let m = fan_file_to_chow(&fans::flip_threefold()).unwrap();
        for (a, b) in [(1i64, 1i64), (2, 3), (5, 1)] {
            let bq = qvec(&[a, b, a + b]);
            let sq = m.curve_power_exact(&bq);
            assert_eq!(sq, qvec(&[2 * a * b, a * a + 2 * a * b, b * b + 2 * a * b]));
            assert_eq!(m.vol_exact(&bq), q(3 * a * b * (a + b)));
        }
    }

    #[test]
    fn nonconvex_threefold_nef_generators() {
        let m = fan_file_to_chow(&fans::nonconvex_threefold()).unwrap();
        let expected = PolyhedralCone::from_ints(
            5,
            &[&[1, 3, 2, 2, 1], &[3, 6, 4, 4, 2], &[6, 12, 9, 8, 4], &[2, 4, 3, 2, 1], &[4, 8, 6, 5, 2]],
        )
        .unwrap();
        assert!(m.nef().same_cone(&expected));
        // every nef generator is big
        for g in m.nef().generators() {
            assert!(m.vol_exact(g).is_positive());
        }
    }

    #[test]
    fn p3_tensor() {
        let m = fan_to_chow(&fans::projective_space(3), None, None).unwrap();
        assert_eq!(m.tensor().get(&[0, 0, 0]), q(1));
    }

    #[test]
    fn weighted_projective_smoke() {
        // P(1,1,2): v1 + v2 + 2 v3 = 0
        let f = Fan::new(2, vec![vec![1, 0], vec![-1, -2], vec![0, 1]], vec![vec![0, 2], vec![1, 2], vec![0, 1]]);
        assert!(validate_fan(&f).is_valid());
        let m = fan_to_chow(&f, None, None).unwrap();
        assert_eq!(m.rho(), 1);
        // D_{v1}² = 1/2 on P(1,1,2)
        assert_eq!(m.tensor().get(&[0, 0]), crate::rational::qf(1, 2));
    }
}
