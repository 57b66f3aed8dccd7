//! Seeded random objects for verification runs.
//!
//! The generator is ChaCha8 seeded from a `u64`; independent substreams are
//! obtained with [`SeededRng::split`], so a check can be re-run in isolation
//! and still see the same inputs.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::fourier::CosetFunction;
use crate::linalg::{c, CMat};
use crate::quantize::{LinearOperator, MatrixSymbol};
use crate::space::HomogeneousSpace;

#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A generator on substream `stream` of the same seed.
    pub fn split(&self, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(stream);
        Self {
            seed: self.seed,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1).
    pub fn complex(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        c(re, im)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> CMat {
        CMat::from_fn(rows, cols, |_, _| self.complex())
    }

    pub fn function(&mut self, space: &HomogeneousSpace) -> CosetFunction {
        let values = (0..space.len()).map(|_| self.complex()).collect();
        CosetFunction::new(space, values).expect("length matches")
    }

    /// Operator with i.i.d. complex Gaussian kernel entries.
    pub fn operator(&mut self, space: &HomogeneousSpace) -> LinearOperator {
        LinearOperator::new(space, self.matrix(space.len(), space.len())).expect("square kernel")
    }

    pub fn hermitian_operator(&mut self, space: &HomogeneousSpace) -> LinearOperator {
        let a = self.matrix(space.len(), space.len());
        LinearOperator::new(space, &a + a.adjoint()).expect("square kernel")
    }

    /// Random symbol satisfying `sigma T_H = sigma` blockwise.
    pub fn canonical_symbol(&mut self, space: &HomogeneousSpace) -> MatrixSymbol {
        let blocks = (0..space.len())
            .map(|_| {
                (0..space.dual().len())
                    .map(|k| self.matrix(space.dim(k), space.dim(k)) * space.projection(k))
                    .collect()
            })
            .collect();
        MatrixSymbol::new(space, blocks).expect("shaped per dual")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_splittable() {
        let mut a = SeededRng::new(42);
        let mut b = SeededRng::new(42);
        assert_eq!(a.complex(), b.complex());
        let mut s1 = a.split(3);
        let mut s2 = b.split(3);
        assert_eq!(s1.matrix(3, 3), s2.matrix(3, 3));
        let mut s3 = a.split(4);
        assert_ne!(s3.complex(), SeededRng::new(42).split(3).complex());
    }
}
