//! Unitary irreducible representations, the subgroup averages `T_H^pi` and
//! the dual object of a coset space.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{CosetSpace, FiniteGroup, Subgroup};
use crate::linalg::{self, c, CMat};

/// Tolerance used when validating representations.
pub const IRREP_TOL: f64 = 1e-10;
/// `||T_H^pi||_F` above this admits `pi` into the dual object.
pub const DUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Irrep {
    label: String,
    dim: usize,
    matrices: Vec<CMat>,
    character: Vec<Complex64>,
}

impl Irrep {
    /// Builds a representation from one matrix per group element. Only shapes
    /// are checked here; see [`verify_irrep`] for the algebraic checks.
    pub fn new(label: impl Into<String>, matrices: Vec<CMat>) -> Result<Self> {
        let label = label.into();
        let dim = matrices.first().map(|m| m.nrows()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::Irrep {
                label,
                reason: "no matrices".into(),
            });
        }
        if let Some((g, m)) = matrices
            .iter()
            .enumerate()
            .find(|(_, m)| m.shape() != (dim, dim))
        {
            return Err(Error::Irrep {
                label,
                reason: format!(
                    "matrix of element {g} is {:?}, expected {dim}x{dim}",
                    m.shape()
                ),
            });
        }
        let character = matrices.iter().map(linalg::trace).collect();
        Ok(Self {
            label,
            dim,
            matrices,
            character,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn character(&self) -> &[Complex64] {
        &self.character
    }

    pub fn is_trivial(&self) -> bool {
        self.dim == 1 && self.character.iter().all(|z| (z - 1.0).norm() < IRREP_TOL)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IrrepReport {
    pub label: String,
    pub shapes_ok: bool,
    pub homomorphism_residual: f64,
    pub unitarity_residual: f64,
    /// `(1/|G|) sum_g |chi(g)|^2`; equals 1 exactly for irreducible representations.
    pub irreducibility: f64,
    pub passed: bool,
}

/// Checks homomorphism, unitarity and irreducibility. Never fails: shape
/// problems are reported as a failed check.
pub fn verify_irrep(group: &FiniteGroup, matrices: &[CMat], label: &str) -> IrrepReport {
    let n = group.order();
    let dim = matrices.first().map(|m| m.nrows()).unwrap_or(0);
    let shapes_ok =
        matrices.len() == n && dim > 0 && matrices.iter().all(|m| m.shape() == (dim, dim));
    if !shapes_ok {
        return IrrepReport {
            label: label.to_string(),
            shapes_ok,
            homomorphism_residual: f64::INFINITY,
            unitarity_residual: f64::INFINITY,
            irreducibility: f64::NAN,
            passed: false,
        };
    }
    let mut hom: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let lhs = &matrices[a] * &matrices[b];
            hom = hom.max(linalg::max_abs_diff(&lhs, &matrices[group.mul(a, b)]));
        }
    }
    let id = CMat::identity(dim, dim);
    let unit = matrices
        .iter()
        .map(|m| linalg::max_abs_diff(&(m * m.adjoint()), &id))
        .fold(0.0, f64::max);
    let irreducibility = matrices
        .iter()
        .map(|m| linalg::trace(m).norm_sqr())
        .sum::<f64>()
        / n as f64;
    IrrepReport {
        label: label.to_string(),
        shapes_ok,
        homomorphism_residual: hom,
        unitarity_residual: unit,
        irreducibility,
        passed: hom < IRREP_TOL && unit < IRREP_TOL && (irreducibility - 1.0).abs() < IRREP_TOL,
    }
}

/// The average `T_H^pi = (1/|H|) sum_{h in H} pi(h)`, an orthogonal projection
/// onto the `H`-fixed vectors of `pi`.
#[derive(Clone, Debug)]
pub struct HProjection {
    pub matrix: CMat,
    pub rank: usize,
}

pub fn h_projection(subgroup: &Subgroup, irrep: &Irrep) -> Result<HProjection> {
    let d = irrep.dim();
    let mut t = CMat::zeros(d, d);
    for &h in subgroup.elements() {
        t += irrep.matrix(h);
    }
    t /= c(subgroup.order() as f64, 0.0);
    let rank = linalg::psd_rank(&t, DUAL_TOL)?;
    Ok(HProjection { matrix: t, rank })
}

/// `Gamma_pi(xH) = pi(x) T_H^pi`, well defined on cosets.
pub fn gamma(irrep: &Irrep, projection: &HProjection, cosets: &CosetSpace, coset: usize) -> CMat {
    irrep.matrix(cosets.representative(coset)) * &projection.matrix
}

#[derive(Clone, Debug)]
pub struct DualClass {
    pub irrep: Arc<Irrep>,
    pub projection: HProjection,
}

impl DualClass {
    pub fn dim(&self) -> usize {
        self.irrep.dim()
    }

    pub fn label(&self) -> &str {
        self.irrep.label()
    }
}

/// The irreps with nonzero `T_H^pi`, ordered by `(dim, label)`.
#[derive(Clone, Debug)]
pub struct DualObject {
    classes: Vec<DualClass>,
}

impl DualObject {
    pub fn new(group: &FiniteGroup, subgroup: &Subgroup, catalog: &[Arc<Irrep>]) -> Result<Self> {
        let sum: usize = catalog.iter().map(|p| p.dim() * p.dim()).sum();
        if sum != group.order() {
            return Err(Error::IncompleteCatalog {
                group: group.name().to_string(),
                sum,
                order: group.order(),
                deficit: group.order() as i64 - sum as i64,
            });
        }
        if let Some(p) = catalog.iter().find(|p| p.matrices().len() != group.order()) {
            return Err(Error::Irrep {
                label: p.label().to_string(),
                reason: format!(
                    "has {} matrices for a group of order {}",
                    p.matrices().len(),
                    group.order()
                ),
            });
        }
        let mut classes = Vec::new();
        for irrep in catalog {
            let projection = h_projection(subgroup, irrep)?;
            if linalg::frobenius(&projection.matrix) > DUAL_TOL {
                classes.push(DualClass {
                    irrep: irrep.clone(),
                    projection,
                });
            }
        }
        classes.sort_by(|a, b| (a.dim(), a.label()).cmp(&(b.dim(), b.label())));
        Ok(Self { classes })
    }

    pub fn classes(&self) -> &[DualClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|k| k.label() == label)
    }

    /// `sum_xi d_xi rank(T_H^xi)`, which equals `[G:H]`.
    pub fn dimension_count(&self) -> usize {
        self.classes
            .iter()
            .map(|k| k.dim() * k.projection.rank)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn trivial_rep_passes() {
        let b = catalog::builtin("S4").unwrap();
        let m = vec![CMat::identity(1, 1); 24];
        let r = verify_irrep(&b.group, &m, "triv");
        assert!(r.passed);
        assert!((r.irreducibility - 1.0).abs() < 1e-15);
    }

    #[test]
    fn s3_standard_rep_passes() {
        let b = catalog::builtin("S3").unwrap();
        let std = b.irreps.iter().find(|p| p.dim() == 2).unwrap();
        let r = verify_irrep(&b.group, std.matrices(), std.label());
        assert!(r.passed, "{r:?}");
        // brute-force character norm
        let s: f64 = std.character().iter().map(|z| z.norm_sqr()).sum::<f64>() / 6.0;
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doubled_trivial_fails_irreducibility() {
        let b = catalog::builtin("S3").unwrap();
        let m = vec![CMat::identity(2, 2); 6];
        let r = verify_irrep(&b.group, &m, "triv+triv");
        assert!(!r.passed);
        // chi == 2 everywhere: (1/6) * 6 * 4
        assert!((r.irreducibility - 4.0).abs() < 1e-12);
        assert!(r.homomorphism_residual < 1e-15);
    }

    #[test]
    fn mismatched_dimensions_reported_not_raised() {
        let b = catalog::builtin("S3").unwrap();
        let mut m = vec![CMat::identity(2, 2); 6];
        m[3] = CMat::identity(1, 1);
        let r = verify_irrep(&b.group, &m, "broken");
        assert!(!r.shapes_ok && !r.passed);
    }

    #[test]
    fn s3_projections() {
        let b = catalog::builtin("S3").unwrap();
        let h = b.subgroup("Z2a").unwrap();
        let by_label = |l: &str| b.irreps.iter().find(|p| p.label() == l).unwrap().clone();
        let t = h_projection(&h, &by_label("trivial")).unwrap();
        assert_eq!(t.rank, 1);
        assert!((t.matrix[(0, 0)] - 1.0).norm() < 1e-15);
        let s = h_projection(&h, &by_label("sign")).unwrap();
        assert_eq!(s.rank, 0);
        assert!(s.matrix[(0, 0)].norm() < 1e-15);
        let st = h_projection(&h, &by_label("standard")).unwrap();
        assert_eq!(st.rank, 1);
        assert!((linalg::trace(&st.matrix) - 1.0).norm() < 1e-14);
    }

    #[test]
    fn s3_dual_object() {
        let b = catalog::builtin("S3").unwrap();
        let h = b.subgroup("Z2a").unwrap();
        let dual = DualObject::new(&b.group, &h, &b.irreps).unwrap();
        let labels: Vec<&str> = dual.classes().iter().map(|k| k.label()).collect();
        assert_eq!(labels, vec!["trivial", "standard"]);
        assert_eq!(dual.dimension_count(), 3);
    }

    #[test]
    fn z12_dual_is_annihilator() {
        let b = catalog::builtin("Z12").unwrap();
        let h = b.subgroup("Z3").unwrap();
        assert_eq!(h.elements(), &[0, 4, 8]);
        let dual = DualObject::new(&b.group, &h, &b.irreps).unwrap();
        // brute force: characters with chi_k(4) = 1
        let expected: Vec<String> = (0..12)
            .filter(|k| {
                let z =
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (4 * k) as f64 / 12.0);
                (z - 1.0).norm() < 1e-12
            })
            .map(|k| format!("chi{k:02}"))
            .collect();
        assert_eq!(expected, vec!["chi00", "chi03", "chi06", "chi09"]);
        let labels: Vec<String> = dual
            .classes()
            .iter()
            .map(|k| k.label().to_string())
            .collect();
        assert_eq!(labels, expected);
    }

    #[test]
    fn trivial_subgroup_dual_is_full_catalog() {
        let b = catalog::builtin("S4").unwrap();
        let h = Subgroup::trivial(&b.group);
        let dual = DualObject::new(&b.group, &h, &b.irreps).unwrap();
        assert_eq!(dual.len(), b.irreps.len());
        for k in dual.classes() {
            assert!(
                linalg::max_abs_diff(&k.projection.matrix, &CMat::identity(k.dim(), k.dim()))
                    < 1e-15
            );
        }
    }

    #[test]
    fn incomplete_catalog_names_deficit() {
        let b = catalog::builtin("S3").unwrap();
        let partial: Vec<_> = b.irreps.iter().filter(|p| p.dim() == 1).cloned().collect();
        let err = DualObject::new(&b.group, &Subgroup::trivial(&b.group), &partial).unwrap_err();
        match err {
            Error::IncompleteCatalog { deficit, .. } => assert_eq!(deficit, 4),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn gamma_representative_independence() {
        let b = catalog::builtin("S3").unwrap();
        let x = CosetSpace::new(b.group.clone(), b.subgroup("Z2a").unwrap()).unwrap();
        for irrep in b.irreps.iter() {
            let p = h_projection(x.subgroup(), irrep).unwrap();
            for coset in 0..x.len() {
                let g = gamma(irrep, &p, &x, coset);
                for &m in &x.members(coset) {
                    let alt = irrep.matrix(m) * &p.matrix;
                    assert!(linalg::max_abs_diff(&g, &alt) < 1e-14);
                }
            }
            let g0 = gamma(irrep, &p, &x, 0);
            assert!(linalg::max_abs_diff(&g0, &p.matrix) < 1e-15);
        }
    }
}
