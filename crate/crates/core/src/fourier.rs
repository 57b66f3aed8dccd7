//! Fourier transform on `G/H`.
//!
//! `f^(xi) = sum_{xH} mu * f(xH) * Gamma_xi(xH)^*`, with inverse
//! `f(xH) = sum_xi d_xi Tr[f^(xi) pi(x) T_H^xi]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, ZERO};
use crate::space::{HomogeneousSpace, SpaceId};

/// A function on the coset space, indexed by coset.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetFunction {
    space: SpaceId,
    values: Vec<Complex64>,
}

impl CosetFunction {
    pub fn new(space: &HomogeneousSpace, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Shape(format!(
                "coset function needs {} values, got {}",
                space.len(),
                values.len()
            )));
        }
        Ok(Self {
            space: space.id(),
            values,
        })
    }

    pub fn constant(space: &HomogeneousSpace, value: Complex64) -> Self {
        Self {
            space: space.id(),
            values: vec![value; space.len()],
        }
    }

    pub fn indicator(space: &HomogeneousSpace, coset: usize) -> Self {
        let mut values = vec![ZERO; space.len()];
        values[coset] = c(1.0, 0.0);
        Self {
            space: space.id(),
            values,
        }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn conj(&self) -> Self {
        Self {
            space: self.space,
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            space: self.space,
            values: self.values.iter().map(|z| z * s).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// One `d_xi x d_xi` block per dual class.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients {
    space: SpaceId,
    blocks: Vec<CMat>,
}

impl FourierCoefficients {
    pub fn new(space: &HomogeneousSpace, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != space.dual().len() {
            return Err(Error::Shape(format!(
                "expected {} Fourier blocks, got {}",
                space.dual().len(),
                blocks.len()
            )));
        }
        for (k, b) in blocks.iter().enumerate() {
            let d = space.dim(k);
            if b.shape() != (d, d) {
                return Err(Error::Shape(format!(
                    "block {k} is {:?}, expected {d}x{d}",
                    b.shape()
                )));
            }
        }
        Ok(Self {
            space: space.id(),
            blocks,
        })
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, class: usize) -> &CMat {
        &self.blocks[class]
    }
}

pub fn forward(space: &HomogeneousSpace, f: &CosetFunction) -> Result<FourierCoefficients> {
    space.check(f.space)?;
    let mu = c(space.weight(), 0.0);
    let blocks = (0..space.dual().len())
        .map(|k| {
            let mut acc = CMat::zeros(space.dim(k), space.dim(k));
            for (x, &v) in f.values.iter().enumerate() {
                acc += space.gamma(k, x).adjoint() * (v * mu);
            }
            acc
        })
        .collect();
    Ok(FourierCoefficients {
        space: space.id(),
        blocks,
    })
}

pub fn inverse(space: &HomogeneousSpace, coeffs: &FourierCoefficients) -> Result<CosetFunction> {
    space.check(coeffs.space)?;
    let values = (0..space.len())
        .map(|x| {
            coeffs
                .blocks
                .iter()
                .enumerate()
                .map(|(k, b)| linalg::trace(&(b * space.gamma(k, x))) * space.dim(k) as f64)
                .sum()
        })
        .collect();
    Ok(CosetFunction {
        space: space.id(),
        values,
    })
}

/// `sqrt(sum_xi d_xi ||F(xi)||_HS^2)`
pub fn plancherel_norm(space: &HomogeneousSpace, coeffs: &FourierCoefficients) -> Result<f64> {
    space.check(coeffs.space)?;
    Ok(coeffs
        .blocks
        .iter()
        .enumerate()
        .map(|(k, b)| space.dim(k) as f64 * b.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum::<f64>()
        .sqrt())
}

/// `L^q(G/H, mu)` norm for `q >= 1`; pass `f64::INFINITY` for the max norm.
pub fn lq_norm(space: &HomogeneousSpace, g: &CosetFunction, q: f64) -> Result<f64> {
    space.check(g.space)?;
    lq_norm_values(g.values(), space.weight(), q)
}

pub(crate) fn lq_norm_values(values: &[Complex64], weight: f64, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::Parameter(format!("L^q norm needs q >= 1, got {q}")));
    }
    if q.is_infinite() {
        return Ok(values.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok((values.iter().map(|z| z.norm().powf(q)).sum::<f64>() * weight).powf(1.0 / q))
}

/// `L^2(G/H, mu)` inner product `sum mu f conj(g)`.
pub fn inner(space: &HomogeneousSpace, f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter()
        .zip(g)
        .map(|(a, b)| a * b.conj())
        .sum::<Complex64>()
        * space.weight()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::random::SeededRng;

    fn s3() -> HomogeneousSpace {
        catalog::builtin("S3").unwrap().space("Z2a").unwrap()
    }

    /// Entry-by-entry double loop, written without matrix products.
    fn naive_forward(space: &HomogeneousSpace, f: &[Complex64]) -> Vec<CMat> {
        (0..space.dual().len())
            .map(|k| {
                let d = space.dim(k);
                CMat::from_fn(d, d, |i, j| {
                    let mut acc = ZERO;
                    for (x, v) in f.iter().enumerate() {
                        acc += v * space.gamma(k, x)[(j, i)].conj() / space.len() as f64;
                    }
                    acc
                })
            })
            .collect()
    }

    #[test]
    fn constant_one_only_hits_trivial() {
        for (g, h) in catalog::standard_pairs() {
            let space = catalog::builtin(g).unwrap().space(h).unwrap();
            let f = CosetFunction::constant(&space, c(1.0, 0.0));
            let fh = forward(&space, &f).unwrap();
            for (k, class) in space.classes().iter().enumerate() {
                if class.irrep.is_trivial() {
                    assert!((fh.block(k)[(0, 0)] - 1.0).norm() < 1e-13);
                } else {
                    assert!(
                        linalg::max_abs(fh.block(k)) < 1e-13,
                        "{g}/{h} {}",
                        class.label()
                    );
                }
            }
        }
    }

    #[test]
    fn indicator_of_identity_coset() {
        let space = s3();
        let f = CosetFunction::indicator(&space, 0);
        let fh = forward(&space, &f).unwrap();
        let triv = space.dual().position("trivial").unwrap();
        assert!((fh.block(triv)[(0, 0)] - 1.0 / 3.0).norm() < 1e-15);
        // Plancherel: both sides 1/sqrt(3)
        let l2 = lq_norm(&space, &f, 2.0).unwrap();
        assert!((l2 - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((plancherel_norm(&space, &fh).unwrap() - l2).abs() < 1e-14);
    }

    #[test]
    fn forward_matches_naive_and_absorbs() {
        let mut rng = SeededRng::new(11);
        for (g, h) in catalog::standard_pairs() {
            let space = catalog::builtin(g).unwrap().space(h).unwrap();
            let f = rng.function(&space);
            let fh = forward(&space, &f).unwrap();
            let naive = naive_forward(&space, f.values());
            for k in 0..space.dual().len() {
                assert!(linalg::max_abs_diff(fh.block(k), &naive[k]) < 1e-13);
                let absorbed = space.projection(k) * fh.block(k);
                assert!(linalg::max_abs_diff(&absorbed, fh.block(k)) < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_of_trivial_block_is_constant() {
        let space = s3();
        let mut blocks = space.zero_blocks();
        let triv = space.dual().position("trivial").unwrap();
        blocks[triv][(0, 0)] = c(2.0, -0.5);
        let f = inverse(&space, &FourierCoefficients::new(&space, blocks).unwrap()).unwrap();
        assert!(f.values().iter().all(|v| (v - c(2.0, -0.5)).norm() < 1e-15));
    }

    #[test]
    fn forward_after_inverse_is_left_projection() {
        let mut rng = SeededRng::new(5);
        for (g, h) in catalog::standard_pairs() {
            let space = catalog::builtin(g).unwrap().space(h).unwrap();
            let blocks: Vec<CMat> = (0..space.dual().len())
                .map(|k| rng.matrix(space.dim(k), space.dim(k)))
                .collect();
            let coeffs = FourierCoefficients::new(&space, blocks.clone()).unwrap();
            let back = forward(&space, &inverse(&space, &coeffs).unwrap()).unwrap();
            for k in 0..space.dual().len() {
                let expected = space.projection(k) * &blocks[k];
                assert!(
                    linalg::max_abs_diff(back.block(k), &expected) < 1e-11,
                    "{g}/{h}"
                );
            }
        }
    }

    #[test]
    fn lq_norm_basics() {
        let space = s3();
        let f = CosetFunction::constant(&space, c(0.0, -3.0));
        for q in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert!((lq_norm(&space, &f, q).unwrap() - 3.0).abs() < 1e-14);
        }
        let ind = CosetFunction::indicator(&space, 2);
        assert!((lq_norm(&space, &ind, 2.0).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(lq_norm(&space, &f, 0.5).is_err());
        assert!(lq_norm(&space, &f, f64::NAN).is_err());
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let a = s3();
        let b = catalog::builtin("S3").unwrap().space("Z2b").unwrap();
        let f = CosetFunction::constant(&a, c(1.0, 0.0));
        assert!(matches!(forward(&b, &f), Err(Error::SpaceMismatch)));
        assert!(CosetFunction::new(&a, vec![ZERO; 2]).is_err());
    }
}
