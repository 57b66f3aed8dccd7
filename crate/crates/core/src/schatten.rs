//! Singular values, Schatten quasi-norms and their symbol-side counterparts.
//!
//! With the uniform coset measure the operator `T` on `L^2(G/H, mu)` is
//! represented in an orthonormal basis by `mu K` (the basis `sqrt(N) 1_{xH}`
//! rescales rows and columns by reciprocal factors), so its singular values
//! are those of the plain matrix [`LinearOperator::matrix`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat};
use crate::quantize::{symbol_from_operator, LinearOperator, MatrixSymbol};
use crate::space::HomogeneousSpace;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularSpectrum {
    /// Nonincreasing, nonnegative.
    pub values: Vec<f64>,
    pub dim: usize,
}

impl SingularSpectrum {
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchattenReport {
    pub r: f64,
    /// `||T||_{S_r}^r` from the singular values.
    pub quasi_norm: f64,
    /// Squared symbol `L^2` norm of `|T|^{r/2}`.
    pub symbol_side: f64,
    /// `|quasi_norm - symbol_side| / quasi_norm` (absolute when `quasi_norm` is 0).
    pub residual: f64,
}

pub fn singular_values(op: &LinearOperator) -> Result<SingularSpectrum> {
    let values = linalg::jacobi_svd(&op.matrix())?.values;
    Ok(SingularSpectrum {
        dim: values.len(),
        values,
    })
}

/// `(sum s_n^r)^{1/r}`; `r = inf` gives `s_1`.
pub fn schatten_norm(spectrum: &SingularSpectrum, r: f64) -> Result<f64> {
    check_positive("Schatten exponent", r)?;
    if r.is_infinite() {
        return Ok(spectrum.largest());
    }
    // Factor out s_1 so large r does not overflow.
    let s1 = spectrum.largest();
    if s1 == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = spectrum.values.iter().map(|s| (s / s1).powf(r)).sum();
    Ok(s1 * sum.powf(1.0 / r))
}

/// `sqrt(sum_x mu sum_xi d_xi ||sigma(x, xi) T_H^xi||_HS^2)`.
pub fn hs_norm_via_symbol(space: &HomogeneousSpace, symbol: &MatrixSymbol) -> Result<f64> {
    space.check(symbol.space())?;
    let mut total = 0.0;
    for row in symbol.blocks() {
        for (k, block) in row.iter().enumerate() {
            let absorbed = block * space.projection(k);
            total += space.dim(k) as f64 * absorbed.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
    }
    Ok((total * space.weight()).sqrt())
}

/// `|T|^s = (T^* T)^{s/2}` as an operator on `L^2(G/H, mu)`.
pub fn fractional_modulus(
    space: &HomogeneousSpace,
    op: &LinearOperator,
    s: f64,
) -> Result<LinearOperator> {
    check_positive("modulus exponent", s)?;
    space.check(op.space())?;
    let svd = linalg::jacobi_svd(&op.matrix())?;
    LinearOperator::from_matrix(space, svd.map_modulus(|v| v.powf(s)))
}

/// Compares `||T||_{S_r}^r` with the squared symbol norm of `|T|^{r/2}`.
pub fn schatten_criterion_check(
    space: &HomogeneousSpace,
    op: &LinearOperator,
    r: f64,
) -> Result<SchattenReport> {
    check_positive("Schatten exponent", r)?;
    if r.is_infinite() {
        return Err(Error::Parameter("criterion check needs a finite r".into()));
    }
    let spectrum = singular_values(op)?;
    let quasi_norm = schatten_norm(&spectrum, r)?.powf(r);
    let modulus = fractional_modulus(space, op, r / 2.0)?;
    let symbol_side = hs_norm_via_symbol(space, &symbol_from_operator(space, &modulus)?)?.powi(2);
    let diff = (quasi_norm - symbol_side).abs();
    let residual = if quasi_norm > 0.0 {
        diff / quasi_norm
    } else {
        diff
    };
    Ok(SchattenReport {
        r,
        quasi_norm,
        symbol_side,
        residual,
    })
}

/// `sum_{x,w} mu^2 |K(x, w)|^2`, the squared `L^2(mu x mu)` kernel norm.
pub fn kernel_l2_norm_sq(space: &HomogeneousSpace, op: &LinearOperator) -> f64 {
    let mu = space.weight();
    op.kernel().iter().map(|z| z.norm_sqr()).sum::<f64>() * mu * mu
}

/// Operator of left translation `f(xH) -> f(g^{-1} xH)`, a unitary on `L^2(G/H)`.
pub fn translation(space: &HomogeneousSpace, g: usize) -> LinearOperator {
    let n = space.len();
    let ginv = space.group().inv(g);
    let mut m = CMat::zeros(n, n);
    for x in 0..n {
        m[(x, space.cosets().translate(ginv, x))] = c(1.0, 0.0);
    }
    LinearOperator::from_matrix(space, m).expect("square")
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v.is_nan() || v <= 0.0 {
        Err(Error::Parameter(format!(
            "{what} must be positive, got {v}"
        )))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::quantize::{op_from_symbol, MatrixSymbol};
    use crate::random::SeededRng;

    fn s3() -> HomogeneousSpace {
        catalog::builtin("S3").unwrap().space("Z2a").unwrap()
    }

    #[test]
    fn identity_spectrum_and_norms() {
        let space = catalog::builtin("S4").unwrap().space("V4").unwrap();
        let n = space.len() as f64;
        let spec = singular_values(&LinearOperator::identity(&space)).unwrap();
        assert!(spec.values.iter().all(|s| (s - 1.0).abs() < 1e-13));
        assert!((schatten_norm(&spec, 2.0).unwrap() - n.sqrt()).abs() < 1e-12);
        assert!((schatten_norm(&spec, 1.0).unwrap() - n).abs() < 1e-12);
        assert!((schatten_norm(&spec, f64::INFINITY).unwrap() - 1.0).abs() < 1e-13);
        assert!(schatten_norm(&spec, 0.0).is_err());
        assert!(schatten_norm(&spec, -1.0).is_err());
        let hs = hs_norm_via_symbol(&space, &MatrixSymbol::identity(&space)).unwrap();
        assert!((hs - n.sqrt()).abs() < 1e-12);
        assert_eq!(
            hs_norm_via_symbol(&space, &MatrixSymbol::zero(&space)).unwrap(),
            0.0
        );
    }

    #[test]
    fn rank_one_spectrum() {
        let space = s3();
        let n = space.len();
        // ||u||_{L^2(mu)} = 1 means sum |u|^2 = N
        let u = CMat::from_fn(n, 1, |i, _| c(1.0 + i as f64, -(i as f64)));
        let v = CMat::from_fn(n, 1, |i, _| c(0.5, i as f64 * 0.3));
        let un = &u * c((n as f64).sqrt() / linalg::frobenius(&u), 0.0);
        let vn = &v * c((n as f64).sqrt() / linalg::frobenius(&v), 0.0);
        // K = u v^* acts as f -> N u <f, v>_mu / N, so its only singular value is 1
        let kernel = &un * vn.adjoint();
        let op = LinearOperator::new(&space, kernel).unwrap();
        let spec = singular_values(&op).unwrap();
        assert!((spec.values[0] - 1.0).abs() < 1e-12, "{:?}", spec.values);
        assert!(spec.values[1..].iter().all(|s| s.abs() < 1e-14));
        let report = schatten_criterion_check(&space, &op, 1.0).unwrap();
        assert!((report.quasi_norm - 1.0).abs() < 1e-10);
        assert!(report.residual < 1e-9);
    }

    #[test]
    fn unitary_scaling() {
        let space = s3();
        let op = LinearOperator::identity(&space).scale(c(0.6, 0.8) * 2.5);
        let spec = singular_values(&op).unwrap();
        assert!(spec.values.iter().all(|s| (s - 2.5).abs() < 1e-12));
    }

    #[test]
    fn hs_matches_frobenius_and_symbol() {
        let mut rng = SeededRng::new(21);
        for (g, h) in catalog::standard_pairs() {
            let space = catalog::builtin(g).unwrap().space(h).unwrap();
            let op = rng.operator(&space);
            let s2 = schatten_norm(&singular_values(&op).unwrap(), 2.0).unwrap();
            assert!((s2 - linalg::frobenius(&op.matrix())).abs() < 1e-12 * s2);
            assert!((s2 * s2 - kernel_l2_norm_sq(&space, &op)).abs() < 1e-12 * s2 * s2);
            let via =
                hs_norm_via_symbol(&space, &symbol_from_operator(&space, &op).unwrap()).unwrap();
            assert!((s2 - via).abs() < 1e-10 * s2, "{g}/{h}");
        }
    }

    #[test]
    fn modulus_powers() {
        let mut rng = SeededRng::new(22);
        let space = catalog::builtin("D4").unwrap().space("Z2r").unwrap();
        let op = rng.operator(&space);
        let sq = fractional_modulus(&space, &op, 2.0).unwrap();
        let direct = op.adjoint().compose(&op).unwrap();
        assert!(sq.relative_diff(&direct) < 1e-11);

        let a = rng.operator(&space);
        let psd = a.adjoint().compose(&a).unwrap();
        assert!(
            fractional_modulus(&space, &psd, 1.0)
                .unwrap()
                .relative_diff(&psd)
                < 1e-11
        );

        let base = singular_values(&op).unwrap();
        for s in [0.5, 1.5, 3.0] {
            let powered = singular_values(&fractional_modulus(&space, &op, s).unwrap()).unwrap();
            for (p, b) in powered.values.iter().zip(&base.values) {
                assert!((p - b.powf(s)).abs() < 1e-11 * (1.0 + b.powf(s)));
            }
        }
        assert!(fractional_modulus(&space, &op, 0.0).is_err());
    }

    #[test]
    fn criterion_identity_and_random() {
        let space = s3();
        let id = schatten_criterion_check(&space, &LinearOperator::identity(&space), 1.0).unwrap();
        assert!((id.quasi_norm - 3.0).abs() < 1e-12 && (id.symbol_side - 3.0).abs() < 1e-12);
        let mut rng = SeededRng::new(23);
        let op = rng.operator(&space);
        for r in [0.5, 1.0, 2.0, 3.0] {
            assert!(schatten_criterion_check(&space, &op, r).unwrap().residual < 1e-9);
        }
        assert!(schatten_criterion_check(&space, &op, -2.0).is_err());
    }

    #[test]
    fn translation_invariance_and_monotonicity() {
        let mut rng = SeededRng::new(24);
        let space = catalog::builtin("S4").unwrap().space("S3").unwrap();
        let op = rng.operator(&space);
        let base = singular_values(&op).unwrap();
        for g in [1, 7, 23] {
            let u = translation(&space, g);
            let moved = singular_values(&u.compose(&op).unwrap()).unwrap();
            for (a, b) in moved.values.iter().zip(&base.values) {
                assert!((a - b).abs() < 1e-11);
            }
        }
        let norms: Vec<f64> = [0.5, 1.0, 2.0, 4.0, f64::INFINITY]
            .iter()
            .map(|&r| schatten_norm(&base, r).unwrap())
            .collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }

    #[test]
    fn identity_symbol_quantizes_with_unit_spectrum() {
        let space = catalog::builtin("Q8").unwrap().space("Z4").unwrap();
        let op = op_from_symbol(&space, &MatrixSymbol::identity(&space)).unwrap();
        let spec = singular_values(&op).unwrap();
        assert!(spec.values.iter().all(|s| (s - 1.0).abs() < 1e-12));
    }
}
