//! Built-in models.
//!
//! | name | model |
//! |---|---|
//! | `proj-bundle-p1` | `P(O ⊕ O ⊕ O(−1))` over `P¹`; divisors `(f, ξ)`, curves `(ξf, ξ²)` |
//! | `toric-flip-3fold` | rank-3 toric threefold with a flipping wall, from its fan |
//! | `fs-nonconvex` | rank-5 toric threefold whose complete intersection cone is not convex |
//! | `diagonal-abelian(n)` | `N¹ = Rⁿ`, `vol(λ) = n!∏λⱼ`, pairing `(n−1)!·I` so `curve_power(𝟙) = 𝟙` |
//! | `quadratic-surface` | one-point blow-up of `P²`, `q = diag(1, −1)` on `(H, E)` |
//! | `p2`, `p3` | projective plane and space |

use crate::chow::{ChowModel, Provenance, SymTensor};
use crate::cones::PolyhedralCone;
use crate::error::{Error, Result};
use crate::linalg;
use crate::polytopes::factorial;
use crate::rational::{q, qvec};
use crate::toric::{self, fans};

pub const PRESET_NAMES: &[&str] =
    &["proj-bundle-p1", "toric-flip-3fold", "fs-nonconvex", "diagonal-abelian(n)", "quadratic-surface", "p2", "p3"];

pub fn preset(name: &str) -> Result<ChowModel> {
    let name = name.trim();
    match name {
        "proj-bundle-p1" => proj_bundle(),
        "toric-flip-3fold" => tagged(toric::fan_file_to_chow(&fans::flip_threefold())?, name),
        "fs-nonconvex" => tagged(toric::fan_file_to_chow(&fans::nonconvex_threefold())?, name),
        "quadratic-surface" | "quadratic-surface(1,-1)" => quadratic_surface(),
        "p2" => tagged(toric::fan_to_chow(&fans::projective_space(2), None, None)?, name),
        "p3" => tagged(toric::fan_to_chow(&fans::projective_space(3), None, None)?, name),
        _ => {
            let n = name
                .strip_prefix("diagonal-abelian")
                .map(|r| r.trim_start_matches(['(', '-', ':']).trim_end_matches(')'))
                .and_then(|r| r.parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
            diagonal_abelian(n)
        }
    }
}

fn tagged(m: ChowModel, name: &str) -> Result<ChowModel> {
    let f = m.to_file();
    let mut f = f;
    f.provenance = Some(Provenance::Preset(name.to_string()));
    ChowModel::from_file(&f)
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn proj_bundle() -> Result<ChowModel> {
    // indices: 0 = f, 1 = ξ
    let mut t = SymTensor::zeros(2, 3);
    t.set_sym(&[0, 1, 1], q(1));
    t.set_sym(&[1, 1, 1], q(-1));
    ChowModel::new(
        3,
        labels(&["f", "xi"]),
        labels(&["xi*f", "xi^2"]),
        vec![qvec(&[0, 1]), qvec(&[1, -1])],
        t,
        PolyhedralCone::from_ints(2, &[&[1, 0], &[1, 1]])?,
        PolyhedralCone::from_ints(2, &[&[1, 0], &[0, 1]])?,
        PolyhedralCone::orthant(2),
        None,
        Provenance::Preset("proj-bundle-p1".into()),
    )
}

fn quadratic_surface() -> Result<ChowModel> {
    let mut t = SymTensor::zeros(2, 2);
    t.set_sym(&[0, 0], q(1));
    t.set_sym(&[1, 1], q(-1));
    ChowModel::new(
        2,
        labels(&["H", "E"]),
        labels(&["H", "E"]),
        vec![qvec(&[1, 0]), qvec(&[0, -1])],
        t,
        PolyhedralCone::from_ints(2, &[&[1, 0], &[1, -1]])?,
        PolyhedralCone::from_ints(2, &[&[0, 1], &[1, -1]])?,
        PolyhedralCone::from_ints(2, &[&[0, 1], &[1, -1]])?,
        None,
        Provenance::Preset("quadratic-surface".into()),
    )
}

/// `fs-nonconvex`: the nef generators `A₁..A₅` in divisor coordinates.
pub const NONCONVEX_NEF: [[i64; 5]; 5] =
    [[1, 3, 2, 2, 1], [3, 6, 4, 4, 2], [6, 12, 9, 8, 4], [2, 4, 3, 2, 1], [4, 8, 6, 5, 2]];

/// `fs-nonconvex`: curve classes `u₁..u₅` spanning the image of `(Σ xᵢAᵢ)²`.
pub const NONCONVEX_U: [[i64; 5]; 5] =
    [[1, 3, 6, 2, 4], [9, 22, 45, 15, 30], [12, 30, 60, 20, 40], [4, 10, 20, 6, 13], [16, 40, 80, 26, 52]];

/// `fs-nonconvex`: `(Σ xᵢAᵢ)² = Σ_{i≤j} c_{ij} xᵢxⱼ u_{k(i,j)}` as `(i, j, c, k)`, 0-based.
pub const NONCONVEX_EXPANSION: [(usize, usize, i64, usize); 15] = [
    (0, 0, 1, 0),
    (0, 1, 6, 0),
    (0, 2, 12, 0),
    (0, 3, 4, 0),
    (0, 4, 8, 0),
    (1, 1, 1, 1),
    (1, 2, 3, 2),
    (1, 3, 1, 2),
    (1, 4, 2, 2),
    (2, 2, 3, 2),
    (2, 3, 2, 2),
    (2, 4, 4, 2),
    (3, 3, 1, 3),
    (3, 4, 1, 4),
    (4, 4, 1, 4),
];

/// Matrix taking `fs-nonconvex` curve coordinates to coordinates in the basis `u₁..u₅`.
pub fn nonconvex_u_transform() -> Vec<Vec<f64>> {
    let cols: Vec<_> = NONCONVEX_U.iter().map(|r| qvec(r)).collect();
    let inv = linalg::inverse(&linalg::transpose(&cols)).expect("u classes are a basis");
    linalg::to_f64_mat(&inv)
}

pub fn diagonal_abelian(n: usize) -> Result<ChowModel> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidModel(format!("diagonal-abelian supports 2 ≤ n ≤ 6, got {n}")));
    }
    let mut t = SymTensor::zeros(n, n);
    let idx: Vec<usize> = (0..n).collect();
    t.set_sym(&idx, q(1));
    let pairing = linalg::identity(n).into_iter().map(|r| r.into_iter().map(|x| x * factorial(n - 1)).collect()).collect();
    let gens: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let orth = || {
        let g: Vec<&[i64]> = gens.iter().map(Vec::as_slice).collect();
        PolyhedralCone::from_ints(n, &g)
    };
    ChowModel::new(
        n,
        (1..=n).map(|i| format!("L{i}")).collect(),
        (1..=n).map(|i| format!("C{i}")).collect(),
        pairing,
        t,
        orth()?,
        orth()?,
        orth()?,
        None,
        Provenance::Preset(format!("diagonal-abelian({n})")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::DivisorClass;

    #[test]
    fn proj_bundle_identities() {
        let m = preset("proj-bundle-p1").unwrap();
        assert_eq!(m.tensor().get(&[0, 1, 1]), q(1));
        assert_eq!(m.tensor().get(&[1, 1, 1]), q(-1));
        assert_eq!(m.tensor().get(&[0, 0, 1]), q(0));
        assert_eq!(m.tensor().get(&[0, 0, 0]), q(0));
        assert_eq!(m.vol_nef(&DivisorClass(vec![1.0, 1.0])).unwrap(), 2.0);
        assert_eq!(m.curve_power(&DivisorClass(vec![1.0, 1.0])).0, vec![2.0, 1.0]);
        assert_eq!(m.pair(&[0.0, 1.0], &[1.0, 0.0]), 1.0);
        assert_eq!(m.pair(&[1.0, 0.0], &[1.0, 0.0]), 0.0);
        assert!(m.vol_nef(&DivisorClass(vec![0.0, 1.0])).is_err());
    }

    #[test]
    fn diagonal_normalization() {
        let m = preset("diagonal-abelian(3)").unwrap();
        assert_eq!(m.vol(&[1.0, 1.0, 1.0]), 6.0);
        let c = m.curve_power(&DivisorClass(vec![1.0; 3])).0;
        assert!(c.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn flip_threefold_b11() {
        let m = preset("toric-flip-3fold").unwrap();
        assert_eq!(m.vol_nef(&DivisorClass(vec![1.0, 1.0, 2.0])).unwrap(), 6.0);
        for (a, b) in [(1.0, 2.0), (0.3, 0.7)] {
            assert!(m.pair(&[a, b, a + b], &[1.0, 0.0, 0.0]).abs() < 1e-15);
        }
    }

    #[test]
    fn nonconvex_expansion_coefficients() {
        let m = preset("fs-nonconvex").unwrap();
        let a: Vec<_> = NONCONVEX_NEF.iter().map(|r| qvec(r)).collect();
        for &(i, j, c, k) in &NONCONVEX_EXPANSION {
            let mixed = m.mixed_curve_exact(&[a[i].clone(), a[j].clone()]);
            let mult = if i == j { q(c) } else { q(c) / q(2) };
            let want: Vec<_> = qvec(&NONCONVEX_U[k]).into_iter().map(|x| x * &mult).collect();
            assert_eq!(mixed, want, "A{}A{}", i + 1, j + 1);
        }
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(preset("nope"), Err(Error::UnknownPreset(_))));
        assert!(preset("diagonal-abelian(4)").is_ok());
    }

    #[test]
    fn model_json_round_trip() {
        for name in ["proj-bundle-p1", "toric-flip-3fold", "quadratic-surface"] {
            let m = preset(name).unwrap();
            let s = serde_json::to_string(&m.to_file()).unwrap();
            let back = ChowModel::from_file(&serde_json::from_str(&s).unwrap()).unwrap();
            assert_eq!(back.tensor(), m.tensor());
            assert_eq!(back.pairing(), m.pairing());
            assert!(back.nef().same_cone(m.nef()));
        }
    }
}
