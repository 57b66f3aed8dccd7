//! Matrix-valued symbols on `G/H x dual(G/H)` and their quantization.
//!
//! # Symbol convention
//!
//! For an operator `T` the symbol is pinned down by
//! `T_H^xi sigma(xH, xi) = pi_xi(x)^* (T Gamma_xi)(xH)`. The right-hand side is
//! what this crate stores: the block at `(xH, xi)` is
//!
//! ```text
//! A(xH, xi) = pi_xi(x)^* (T Gamma_xi)(xH),   x = minimal representative of xH
//! ```
//!
//! Every formula in the calculus reads the symbol only through the product
//! `Gamma_xi(xH) sigma(xH, xi) = pi_xi(x) T_H^xi sigma(xH, xi) = pi_xi(x) A(xH, xi)`,
//! so quantization uses `pi_xi(x) A`. Stored blocks satisfy `A T_H^xi = A`
//! ("canonical" symbols). When `H` is not normal, `T_H^xi A = A` can fail:
//! the defining equation then has no exact solution `sigma`, and
//! [`MatrixSymbol::solvability_residual`] reports by how much.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{self, CosetFunction};
use crate::linalg::{self, c, CMat, ZERO};
use crate::space::{HomogeneousSpace, SpaceId};

/// Blocks indexed `[coset][class]`, each `d_xi x d_xi`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSymbol {
    space: SpaceId,
    blocks: Vec<Vec<CMat>>,
}

impl MatrixSymbol {
    pub fn new(space: &HomogeneousSpace, blocks: Vec<Vec<CMat>>) -> Result<Self> {
        if blocks.len() != space.len() {
            return Err(Error::Shape(format!(
                "symbol needs {} cosets, got {}",
                space.len(),
                blocks.len()
            )));
        }
        for (x, row) in blocks.iter().enumerate() {
            if row.len() != space.dual().len() {
                return Err(Error::Shape(format!(
                    "coset {x}: expected {} classes",
                    space.dual().len()
                )));
            }
            for (k, b) in row.iter().enumerate() {
                let d = space.dim(k);
                if b.shape() != (d, d) {
                    return Err(Error::Shape(format!(
                        "block ({x}, {k}) is {:?}, expected {d}x{d}",
                        b.shape()
                    )));
                }
            }
        }
        Ok(Self {
            space: space.id(),
            blocks,
        })
    }

    pub fn zero(space: &HomogeneousSpace) -> Self {
        Self {
            space: space.id(),
            blocks: vec![space.zero_blocks(); space.len()],
        }
    }

    /// `sigma(xH, xi) = T_H^xi`, the symbol of the identity operator.
    pub fn identity(space: &HomogeneousSpace) -> Self {
        Self::constant_in_x(space, |k| space.projection(k).clone())
    }

    /// Blocks that do not depend on the coset.
    pub fn constant_in_x(space: &HomogeneousSpace, f: impl Fn(usize) -> CMat) -> Self {
        let row: Vec<CMat> = (0..space.dual().len()).map(f).collect();
        Self {
            space: space.id(),
            blocks: vec![row; space.len()],
        }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn block(&self, coset: usize, class: usize) -> &CMat {
        &self.blocks[coset][class]
    }

    pub fn blocks(&self) -> &[Vec<CMat>] {
        &self.blocks
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|_, _, b| b * s)
    }

    pub fn map(&self, f: impl Fn(usize, usize, &CMat) -> CMat) -> Self {
        Self {
            space: self.space,
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .map(|(x, row)| row.iter().enumerate().map(|(k, b)| f(x, k, b)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.map(|x, k, b| b + other.block(x, k)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
            .map(|(a, b)| linalg::max_abs_diff(a, b))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .map(linalg::max_abs)
            .fold(0.0, f64::max)
    }

    /// `max ||sigma T_H - sigma||`; zero for canonical symbols.
    pub fn absorption_residual(&self, space: &HomogeneousSpace) -> f64 {
        self.residual_against(space, |b, t| b * t)
    }

    /// `max ||T_H sigma - sigma||`: how far the defining equation is from
    /// having this block as an exact solution.
    pub fn solvability_residual(&self, space: &HomogeneousSpace) -> f64 {
        self.residual_against(space, |b, t| t * b)
    }

    fn residual_against(&self, space: &HomogeneousSpace, f: impl Fn(&CMat, &CMat) -> CMat) -> f64 {
        self.blocks
            .iter()
            .flat_map(|row| row.iter().enumerate())
            .map(|(k, b)| linalg::max_abs_diff(&f(b, space.projection(k)), b))
            .fold(0.0, f64::max)
    }

    /// Projects every block onto the canonical form `sigma T_H`.
    pub fn canonicalize(&self, space: &HomogeneousSpace) -> Self {
        self.map(|_, k, b| b * space.projection(k))
    }
}

/// Integral operator on `L^2(G/H, mu)`:
/// `(Tf)(xH) = sum_w mu K(xH, wH) f(wH)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    space: SpaceId,
    kernel: CMat,
}

impl LinearOperator {
    pub fn new(space: &HomogeneousSpace, kernel: CMat) -> Result<Self> {
        let n = space.len();
        if kernel.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "kernel is {:?}, expected {n}x{n}",
                kernel.shape()
            )));
        }
        Ok(Self {
            space: space.id(),
            kernel,
        })
    }

    /// Builds the operator whose matrix in coset coordinates is `m`.
    pub fn from_matrix(space: &HomogeneousSpace, m: CMat) -> Result<Self> {
        Self::new(space, m * c(space.len() as f64, 0.0))
    }

    pub fn identity(space: &HomogeneousSpace) -> Self {
        let n = space.len();
        Self {
            space: space.id(),
            kernel: CMat::identity(n, n) * c(n as f64, 0.0),
        }
    }

    pub fn zero(space: &HomogeneousSpace) -> Self {
        Self {
            space: space.id(),
            kernel: CMat::zeros(space.len(), space.len()),
        }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn kernel(&self) -> &CMat {
        &self.kernel
    }

    pub fn size(&self) -> usize {
        self.kernel.nrows()
    }

    /// The matrix acting on coset-value vectors: `mu K`.
    pub fn matrix(&self) -> CMat {
        &self.kernel / c(self.size() as f64, 0.0)
    }

    /// Kernel of `self * other` under the weighted composition.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self {
            space: self.space,
            kernel: (&self.kernel * &other.kernel) / c(self.size() as f64, 0.0),
        })
    }

    /// Adjoint for the `L^2(mu)` pairing: `K^*(x, w) = conj(K(w, x))`.
    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            kernel: self.kernel.adjoint(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            space: self.space,
            kernel: &self.kernel * s,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self {
            space: self.space,
            kernel: &self.kernel + &other.kernel,
        })
    }

    /// `max |K(x, w) - conj(K(w, x))|`
    pub fn hermitian_residual(&self) -> f64 {
        linalg::max_abs_diff(&self.kernel, &self.kernel.adjoint())
    }

    /// Largest entrywise kernel difference divided by the largest kernel entry of `self` (at least 1e-300).
    pub fn relative_diff(&self, other: &Self) -> f64 {
        linalg::max_abs_diff(&self.kernel, &other.kernel)
            / linalg::max_abs(&self.kernel).max(1e-300)
    }
}

pub fn apply(
    space: &HomogeneousSpace,
    op: &LinearOperator,
    f: &CosetFunction,
) -> Result<CosetFunction> {
    space.check(op.space)?;
    space.check(f.space())?;
    let mu = space.weight();
    let values = (0..space.len())
        .map(|x| {
            (0..space.len())
                .map(|w| op.kernel[(x, w)] * f.values()[w])
                .sum::<Complex64>()
                * mu
        })
        .collect();
    CosetFunction::new(space, values)
}

/// `Gamma_xi(xH) sigma(xH, xi)` in the stored convention: `pi_xi(x) A(xH, xi)`.
pub fn left_factor(
    space: &HomogeneousSpace,
    symbol: &MatrixSymbol,
    coset: usize,
    class: usize,
) -> CMat {
    space.rep_matrix(class, coset) * symbol.block(coset, class)
}

/// `K(xH, wH) = sum_xi d_xi Tr[Gamma_xi(xH) sigma(xH, xi) Gamma_xi(wH)^*]`.
pub fn op_from_symbol(space: &HomogeneousSpace, symbol: &MatrixSymbol) -> Result<LinearOperator> {
    space.check(symbol.space)?;
    let n = space.len();
    let mut kernel = CMat::zeros(n, n);
    for x in 0..n {
        for k in 0..space.dual().len() {
            let lf = left_factor(space, symbol, x, k);
            let d = space.dim(k) as f64;
            for w in 0..n {
                // Tr[L Gamma(w)^*] = sum_ij L_ij conj(Gamma(w)_ij)
                let g = space.gamma(k, w);
                let tr: Complex64 = lf.iter().zip(g.iter()).map(|(a, b)| a * b.conj()).sum();
                kernel[(x, w)] += tr * d;
            }
        }
    }
    LinearOperator::new(space, kernel)
}

/// Applies `Op(sigma)` through the Fourier side:
/// `Tf(xH) = sum_xi d_xi Tr[Gamma_xi(xH) sigma(xH, xi) f^(xi)]`.
pub fn apply_symbol(
    space: &HomogeneousSpace,
    symbol: &MatrixSymbol,
    f: &CosetFunction,
) -> Result<CosetFunction> {
    space.check(symbol.space)?;
    let fh = fourier::forward(space, f)?;
    let values = (0..space.len())
        .map(|x| {
            (0..space.dual().len())
                .map(|k| {
                    linalg::trace(&(left_factor(space, symbol, x, k) * fh.block(k)))
                        * space.dim(k) as f64
                })
                .sum()
        })
        .collect();
    CosetFunction::new(space, values)
}

/// `A(xH, xi) = pi_xi(x)^* (T Gamma_xi)(xH)`, where `T` acts on each entry
/// function of `Gamma_xi`.
pub fn symbol_from_operator(space: &HomogeneousSpace, op: &LinearOperator) -> Result<MatrixSymbol> {
    space.check(op.space)?;
    let n = space.len();
    let mu = c(space.weight(), 0.0);
    let blocks = (0..n)
        .map(|x| {
            (0..space.dual().len())
                .map(|k| {
                    let d = space.dim(k);
                    let mut t_gamma = CMat::zeros(d, d);
                    for w in 0..n {
                        let kw = op.kernel[(x, w)];
                        if kw != ZERO {
                            t_gamma += space.gamma(k, w) * (kw * mu);
                        }
                    }
                    space.rep_matrix(k, x).adjoint() * t_gamma
                })
                .collect()
        })
        .collect();
    MatrixSymbol::new(space, blocks)
}
