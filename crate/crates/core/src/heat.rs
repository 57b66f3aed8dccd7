//! Cayley-graph Laplacians that commute with both translations, their
//! descent to `G/H`, and the heat semigroup.
//!
//! For a generating multiset `S` that is closed under inverses and
//! conjugation, `(L f)(x) = sum_{s in S} (f(x) - f(x s))` acts on the matrix
//! coefficients of `xi` by the scalar `lambda_xi = |S| - (1/d_xi) sum_s chi_xi(s)`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::catalog::GroupBundle;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::irrep::Irrep;
use crate::linalg::{self, c, CMat};
use crate::quantize::{LinearOperator, MatrixSymbol};
use crate::space::HomogeneousSpace;

/// Tolerance for the scalar action of `sum_s xi(s)`.
pub const SCHUR_TOL: f64 = 1e-11;

#[derive(Clone, Debug)]
pub struct BiInvariantLaplacian {
    group: Arc<FiniteGroup>,
    generators: Vec<usize>,
    /// `(irrep label, lambda)` in catalog order.
    eigenvalues: Vec<(String, f64)>,
}

impl BiInvariantLaplacian {
    pub fn new(
        group: Arc<FiniteGroup>,
        irreps: &[Arc<Irrep>],
        generators: &[usize],
    ) -> Result<Self> {
        let order = group.order();
        if let Some(&bad) = generators.iter().find(|&&s| s >= order) {
            return Err(Error::Generators(format!(
                "element {bad} is outside a group of order {order}"
            )));
        }
        let count = |g: usize| generators.iter().filter(|&&s| s == g).count();
        for &s in generators {
            if count(group.inv(s)) != count(s) {
                return Err(Error::Generators(format!(
                    "not symmetric: element {s} appears {} times but its inverse {} appears {} times",
                    count(s),
                    group.inv(s),
                    count(group.inv(s))
                )));
            }
            for g in 0..order {
                let conj = group.conjugate(s, g);
                if count(conj) != count(s) {
                    return Err(Error::Generators(format!(
                        "not closed under conjugation: element {s} has conjugate {conj} (by {g}) with a different multiplicity"
                    )));
                }
            }
        }

        let size = generators.len() as f64;
        let mut eigenvalues = Vec::with_capacity(irreps.len());
        for irrep in irreps {
            let d = irrep.dim();
            let chi_sum: Complex64 = generators.iter().map(|&s| irrep.character()[s]).sum();
            let scalar = chi_sum / d as f64;
            let mut sum = CMat::zeros(d, d);
            for &s in generators {
                sum += irrep.matrix(s);
            }
            let schur = linalg::max_abs_diff(&sum, &(CMat::identity(d, d) * scalar));
            if schur > SCHUR_TOL {
                return Err(Error::Generators(format!(
                    "sum of generators is not scalar on {} (deviation {schur:e})",
                    irrep.label()
                )));
            }
            let lambda = c(size, 0.0) - scalar;
            if lambda.im.abs() > 1e-12 || lambda.re < -1e-12 {
                return Err(Error::Generators(format!(
                    "eigenvalue {lambda} on {} is not real and nonnegative",
                    irrep.label()
                )));
            }
            eigenvalues.push((irrep.label().to_string(), lambda.re.max(0.0)));
        }
        Ok(Self {
            group,
            generators: generators.to_vec(),
            eigenvalues,
        })
    }

    /// Laplacian for the bundle's default generating set.
    pub fn for_bundle(bundle: &GroupBundle) -> Result<Self> {
        Self::new(
            bundle.group.clone(),
            &bundle.irreps,
            &bundle.heat_generators,
        )
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn eigenvalues(&self) -> &[(String, f64)] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, label: &str) -> Option<f64> {
        self.eigenvalues
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, v)| v)
    }

    /// `lambda` for dual class `k` of `space`.
    pub fn class_eigenvalue(&self, space: &HomogeneousSpace, k: usize) -> Result<f64> {
        let label = space.classes()[k].label();
        self.eigenvalue(label).ok_or_else(|| Error::Unknown {
            kind: "irrep",
            name: label.to_string(),
        })
    }

    /// The `|G| x |G|` matrix of `f -> sum_s (f(x) - f(x s))`.
    pub fn group_matrix(&self) -> CMat {
        let n = self.group.order();
        let mut m = CMat::identity(n, n) * c(self.generators.len() as f64, 0.0);
        for x in 0..n {
            for &s in &self.generators {
                m[(x, self.group.mul(x, s))] -= c(1.0, 0.0);
            }
        }
        m
    }

    fn check_space(&self, space: &HomogeneousSpace) -> Result<()> {
        if space.group().cayley() == self.group.cayley() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

/// `(L f)(xH) = sum_s (f(xH) - f(x s H))`, well defined because `S` is
/// conjugation-closed.
pub fn descend_laplacian(
    laplacian: &BiInvariantLaplacian,
    space: &HomogeneousSpace,
) -> Result<LinearOperator> {
    laplacian.check_space(space)?;
    let n = space.len();
    let group = laplacian.group();
    let mut m = CMat::identity(n, n) * c(laplacian.generators.len() as f64, 0.0);
    for x in 0..n {
        let rep = space.cosets().representative(x);
        for &s in &laplacian.generators {
            m[(x, space.cosets().coset_of(group.mul(rep, s)))] -= c(1.0, 0.0);
        }
    }
    LinearOperator::from_matrix(space, m)
}

#[derive(Clone, Debug)]
pub struct HeatSymbol {
    pub t: f64,
    /// `e^{-t lambda_xi} T_H^xi` at every coset.
    pub symbol: MatrixSymbol,
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        Err(Error::Parameter(format!(
            "heat time must be nonnegative, got {t}"
        )))
    } else {
        Ok(())
    }
}

pub fn heat_symbol(
    laplacian: &BiInvariantLaplacian,
    space: &HomogeneousSpace,
    t: f64,
) -> Result<HeatSymbol> {
    check_time(t)?;
    laplacian.check_space(space)?;
    let factors = (0..space.dual().len())
        .map(|k| Ok((-t * laplacian.class_eigenvalue(space, k)?).exp()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(HeatSymbol {
        t,
        symbol: MatrixSymbol::constant_in_x(space, |k| space.projection(k) * c(factors[k], 0.0)),
    })
}

/// `sum_xi d_xi e^{-t lambda_xi} Tr(T_H^xi)`
pub fn heat_trace(
    laplacian: &BiInvariantLaplacian,
    space: &HomogeneousSpace,
    t: f64,
) -> Result<f64> {
    check_time(t)?;
    laplacian.check_space(space)?;
    let mut total = 0.0;
    for k in 0..space.dual().len() {
        let lambda = laplacian.class_eigenvalue(space, k)?;
        total += space.dim(k) as f64 * (-t * lambda).exp() * linalg::trace(space.projection(k)).re;
    }
    Ok(total)
}

/// `exp(-t L_{G/H})` from a Jacobi eigendecomposition of the descended matrix.
pub fn heat_operator_oracle(
    laplacian: &BiInvariantLaplacian,
    space: &HomogeneousSpace,
    t: f64,
) -> Result<LinearOperator> {
    check_time(t)?;
    let m = descend_laplacian(laplacian, space)?.matrix();
    let eig = linalg::hermitian_eigen(&m)?;
    LinearOperator::from_matrix(space, eig.map_spectrum(|v| (-t * v).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fourier::CosetFunction;
    use crate::quantize::{apply, op_from_symbol};

    fn s3_laplacian() -> (GroupBundle, BiInvariantLaplacian) {
        let b = catalog::builtin("S3").unwrap();
        let l = BiInvariantLaplacian::for_bundle(&b).unwrap();
        (b, l)
    }

    #[test]
    fn cycle_spectrum() {
        let n = 9;
        let b = catalog::builtin("Z9").unwrap();
        let l = BiInvariantLaplacian::new(b.group.clone(), &b.irreps, &[1, n - 1]).unwrap();
        for (k, irrep) in b.irreps.iter().enumerate() {
            // characters are e^{2 pi i k m / n}; recover k from the value at 1
            let chi = irrep.character()[1];
            let k_eff = (chi.arg() / (2.0 * std::f64::consts::PI) * n as f64).round();
            let expected = 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k_eff / n as f64).cos();
            assert!((l.eigenvalues()[k].1 - expected).abs() < 1e-12);
        }
        let empty = BiInvariantLaplacian::new(b.group.clone(), &b.irreps, &[]).unwrap();
        assert!(empty.eigenvalues().iter().all(|(_, v)| *v == 0.0));
    }

    #[test]
    fn s3_transpositions() {
        let (_, l) = s3_laplacian();
        assert!(l.eigenvalue("trivial").unwrap().abs() < 1e-13);
        assert!((l.eigenvalue("sign").unwrap() - 6.0).abs() < 1e-12);
        assert!((l.eigenvalue("standard").unwrap() - 3.0).abs() < 1e-12);
        let mut spectrum = linalg::hermitian_eigen(&l.group_matrix()).unwrap().values;
        spectrum.sort_by(f64::total_cmp);
        // trivial once, standard d^2 = 4 times, sign once
        let expected = [0.0, 3.0, 3.0, 3.0, 3.0, 6.0];
        for (a, b) in spectrum.iter().zip(expected) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_bad_generators() {
        let b = catalog::builtin("S3").unwrap();
        // a single 3-cycle is not inverse-closed
        let three_cycle = (0..6).find(|&g| g != 0 && b.group.mul(g, g) != 0).unwrap();
        let err =
            BiInvariantLaplacian::new(b.group.clone(), &b.irreps, &[three_cycle]).unwrap_err();
        assert!(err.to_string().contains("not symmetric"), "{err}");
        // one transposition is symmetric but not conjugation-closed
        let t = b.subgroups["Z2a"][1];
        let err = BiInvariantLaplacian::new(b.group.clone(), &b.irreps, &[t]).unwrap_err();
        assert!(err.to_string().contains("conjugation"), "{err}");
        assert!(BiInvariantLaplacian::new(b.group.clone(), &b.irreps, &[99]).is_err());
    }

    #[test]
    fn descended_operator_properties() {
        for (g, h) in catalog::standard_pairs() {
            let b = catalog::builtin(g).unwrap();
            let space = b.space(h).unwrap();
            let l = BiInvariantLaplacian::for_bundle(&b).unwrap();
            let op = descend_laplacian(&l, &space).unwrap();
            assert!(op.hermitian_residual() < 1e-14);
            let one = CosetFunction::constant(&space, c(1.0, 0.0));
            let out = apply(&space, &op, &one).unwrap();
            assert!(out.values().iter().all(|v| v.norm() < 1e-12));
            for k in 0..space.dual().len() {
                let lambda = l.class_eigenvalue(&space, k).unwrap();
                for i in 0..space.dim(k) {
                    for j in 0..space.dim(k) {
                        let f = CosetFunction::new(&space, space.coefficient_function(k, i, j))
                            .unwrap();
                        let lf = apply(&space, &op, &f).unwrap();
                        assert!(lf.max_abs_diff(&f.scale(c(lambda, 0.0))) < 1e-11, "{g}/{h}");
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_subgroup_gives_full_laplacian() {
        let b = catalog::builtin("D4").unwrap();
        let space = b.space("trivial").unwrap();
        let l = BiInvariantLaplacian::for_bundle(&b).unwrap();
        let op = descend_laplacian(&l, &space).unwrap();
        assert!(linalg::max_abs_diff(&op.matrix(), &l.group_matrix()) < 1e-15);
    }

    #[test]
    fn heat_symbol_matches_oracle() {
        let (b, l) = s3_laplacian();
        let space = b.space("Z2a").unwrap();
        for t in [0.0, 0.1, 0.7, 2.0] {
            let op = op_from_symbol(&space, &heat_symbol(&l, &space, t).unwrap().symbol).unwrap();
            let oracle = heat_operator_oracle(&l, &space, t).unwrap();
            assert!(op.relative_diff(&oracle) < 1e-10);
        }
        assert!((heat_trace(&l, &space, 0.0).unwrap() - 3.0).abs() < 1e-12);
        let expected = 1.0 + 2.0 * (-0.3f64).exp();
        assert!((heat_trace(&l, &space, 0.1).unwrap() - expected).abs() < 1e-12);
        assert!((heat_trace(&l, &space, 200.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(heat_symbol(&l, &space, -1.0).is_err());
        assert!(heat_trace(&l, &space, f64::NAN).is_err());
    }

    #[test]
    fn mismatched_group_rejected() {
        let (_, l) = s3_laplacian();
        let other = catalog::builtin("Z6").unwrap().space("trivial").unwrap();
        assert!(descend_laplacian(&l, &other).is_err());
    }
}
