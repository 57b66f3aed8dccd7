//! Nuclear decompositions, trace formulas, and adjoint/product symbols.
//!
//! Every finite-rank operator is r-nuclear for all `r`, so the sufficiency
//! functional and decomposition cost are reported as magnitudes. The same
//! adjoint kernel serves every `(p1, p2)` pair: on a finite space all the
//! `L^p(mu)` spaces share one underlying vector space, only their norms differ.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{self, lq_norm_values, CosetFunction};
use crate::linalg::{self, c, CMat, ZERO};
use crate::quantize::{self, apply_symbol, LinearOperator, MatrixSymbol};
use crate::schatten;
use crate::space::{HomogeneousSpace, SpaceId};

/// Singular values below this fraction of the largest are dropped by
/// [`kernel_factorization`].
pub const FACTOR_TRUNCATION: f64 = 1e-12;
/// Threshold on the symbol residual used by [`self_adjointness_check`].
pub const SELF_ADJOINT_TOL: f64 = 1e-9;

/// Exponent `r` in `(0, 1]` and Lebesgue indices `p1, p2` in `[1, inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NuclearIndices {
    pub r: f64,
    pub p1: f64,
    pub p2: f64,
}

impl NuclearIndices {
    pub fn new(r: f64, p1: f64, p2: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Parameter(format!(
                "nuclear exponent r must lie in (0, 1], got {r}"
            )));
        }
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::Parameter(format!(
                    "{name} must lie in [1, inf), got {p}"
                )));
            }
        }
        Ok(Self { r, p1, p2 })
    }

    /// Conjugate index of `p1`; `inf` when `p1 = 1`.
    pub fn p1_conjugate(&self) -> f64 {
        if self.p1 == 1.0 {
            f64::INFINITY
        } else {
            self.p1 / (self.p1 - 1.0)
        }
    }

    /// `min(2, p1)`
    pub fn p1_tilde(&self) -> f64 {
        self.p1.min(2.0)
    }
}

impl Default for NuclearIndices {
    fn default() -> Self {
        Self {
            r: 1.0,
            p1: 2.0,
            p2: 2.0,
        }
    }
}

/// `K(x, y) = sum_k h_k(x) g_k(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NuclearDecomposition {
    space: SpaceId,
    /// Pairs `(h_k, g_k)`.
    pub terms: Vec<(CosetFunction, CosetFunction)>,
    pub indices: NuclearIndices,
}

impl NuclearDecomposition {
    pub fn new(
        space: &HomogeneousSpace,
        terms: Vec<(CosetFunction, CosetFunction)>,
        indices: NuclearIndices,
    ) -> Result<Self> {
        for (h, g) in &terms {
            space.check(h.space())?;
            space.check(g.space())?;
        }
        Ok(Self {
            space: space.id(),
            terms,
            indices,
        })
    }

    pub fn empty(space: &HomogeneousSpace) -> Self {
        Self {
            space: space.id(),
            terms: Vec::new(),
            indices: NuclearIndices::default(),
        }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn with_indices(mut self, indices: NuclearIndices) -> Self {
        self.indices = indices;
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The operator with kernel `sum_k h_k(x) g_k(y)`.
    pub fn reconstruct(&self, space: &HomogeneousSpace) -> Result<LinearOperator> {
        space.check(self.space)?;
        let n = space.len();
        let mut kernel = CMat::zeros(n, n);
        for (h, g) in &self.terms {
            for x in 0..n {
                for y in 0..n {
                    kernel[(x, y)] += h.values()[x] * g.values()[y];
                }
            }
        }
        LinearOperator::new(space, kernel)
    }

    /// `(h, g) -> (conj g, conj h)`: a decomposition of the adjoint kernel.
    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(h, g)| (g.conj(), h.conj()))
                .collect(),
            indices: self.indices,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    /// `sum_x mu K(x, x)`
    pub trace_kernel: Complex64,
    /// `sum_x mu sum_xi d_xi Tr(T_H sigma)`
    pub trace_symbol: Complex64,
    /// Sum of eigenvalues of `mu K`.
    pub trace_eigen: Complex64,
    /// `||T||_{S_1}`, the scale for the residuals.
    pub trace_norm: f64,
    pub residual_kernel_symbol: f64,
    pub residual_kernel_eigen: f64,
    pub residual_symbol_eigen: f64,
}

impl TraceReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_kernel_symbol
            .max(self.residual_kernel_eigen)
            .max(self.residual_symbol_eigen)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuclearityReport {
    pub indices: NuclearIndices,
    pub functional: f64,
    pub cost: f64,
    pub terms: usize,
    pub trace: TraceReport,
}

/// Rank factorization from the SVD of the kernel matrix: `h_k = s_k u_k`,
/// `g_k = conj(v_k)`.
pub fn kernel_factorization(
    space: &HomogeneousSpace,
    op: &LinearOperator,
) -> Result<NuclearDecomposition> {
    space.check(op.space())?;
    let svd = linalg::jacobi_svd(op.kernel())?;
    let cutoff = FACTOR_TRUNCATION * svd.values.first().copied().unwrap_or(0.0);
    let mut terms = Vec::new();
    for (k, &s) in svd.values.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            break;
        }
        let v = svd.right.column(k);
        // K v_k = s_k u_k
        let h = op.kernel() * v;
        let g = v.iter().map(|z| z.conj()).collect();
        terms.push((
            CosetFunction::new(space, h.iter().copied().collect())?,
            CosetFunction::new(space, g)?,
        ));
    }
    NuclearDecomposition::new(space, terms, NuclearIndices::default())
}

/// `sum_k ||g_k||_{L^{p1'}}^r ||h_k||_{L^{p2}}^r`
pub fn decomposition_cost(space: &HomogeneousSpace, dec: &NuclearDecomposition) -> Result<f64> {
    space.check(dec.space)?;
    let idx = NuclearIndices::new(dec.indices.r, dec.indices.p1, dec.indices.p2)?;
    let mu = space.weight();
    let mut total = 0.0;
    for (h, g) in &dec.terms {
        let gn = lq_norm_values(g.values(), mu, idx.p1_conjugate())?;
        let hn = lq_norm_values(h.values(), mu, idx.p2)?;
        total += gn.powf(idx.r) * hn.powf(idx.r);
    }
    Ok(total)
}

/// Symbol `pi(x)^* sum_k l_k(x) F_k(xi)^*` shared by the decomposition formulas.
fn symbol_from_pairs(
    space: &HomogeneousSpace,
    pairs: impl Iterator<Item = (Vec<Complex64>, Vec<Complex64>)>,
) -> Result<MatrixSymbol> {
    let mut acc: Vec<Vec<CMat>> = vec![space.zero_blocks(); space.len()];
    for (left, right) in pairs {
        let rh = fourier::forward(space, &CosetFunction::new(space, right)?)?;
        let adj: Vec<CMat> = rh.blocks().iter().map(|b| b.adjoint()).collect();
        for (x, row) in acc.iter_mut().enumerate() {
            if left[x] == ZERO {
                continue;
            }
            for (k, block) in row.iter_mut().enumerate() {
                *block += &adj[k] * left[x];
            }
        }
    }
    let blocks = acc
        .into_iter()
        .enumerate()
        .map(|(x, row)| {
            row.into_iter()
                .enumerate()
                .map(|(k, b)| space.rep_matrix(k, x).adjoint() * b)
                .collect()
        })
        .collect();
    MatrixSymbol::new(space, blocks)
}

/// `pi(x)^* sum_k h_k(x) (conj(g_k))^(xi)^*`
pub fn symbol_from_decomposition(
    space: &HomogeneousSpace,
    dec: &NuclearDecomposition,
) -> Result<MatrixSymbol> {
    space.check(dec.space)?;
    symbol_from_pairs(
        space,
        dec.terms
            .iter()
            .map(|(h, g)| (h.values().to_vec(), g.conj().values().to_vec())),
    )
}

/// `sum_xi d_xi^{2 + r/p1~} (|| x -> ||sigma(x, xi)^t||_{l^inf -> l^inf} ||_{L^{p2}})^r`
/// with `p1~ = min(2, p1)`. The `l^inf` operator norm of `M^t` is the
/// largest absolute column sum of `M`.
pub fn sufficiency_functional(
    space: &HomogeneousSpace,
    symbol: &MatrixSymbol,
    indices: NuclearIndices,
) -> Result<f64> {
    space.check(symbol.space())?;
    let idx = NuclearIndices::new(indices.r, indices.p1, indices.p2)?;
    let mut total = 0.0;
    for k in 0..space.dual().len() {
        let norms: Vec<Complex64> = (0..space.len())
            .map(|x| {
                let b = symbol.block(x, k);
                let col_max = (0..b.ncols())
                    .map(|j| b.column(j).iter().map(|z| z.norm()).sum::<f64>())
                    .fold(0.0, f64::max);
                c(col_max, 0.0)
            })
            .collect();
        let lp = lq_norm_values(&norms, space.weight(), idx.p2)?;
        let d = space.dim(k) as f64;
        total += d.powf(2.0 + idx.r / idx.p1_tilde()) * lp.powf(idx.r);
    }
    Ok(total)
}

/// `sum_x mu sum_xi d_xi Tr(T_H^xi sigma(x, xi))`
pub fn nuclear_trace_via_symbol(
    space: &HomogeneousSpace,
    symbol: &MatrixSymbol,
) -> Result<Complex64> {
    space.check(symbol.space())?;
    let mut total = ZERO;
    for row in symbol.blocks() {
        for (k, b) in row.iter().enumerate() {
            total += linalg::trace(&(space.projection(k) * b)) * space.dim(k) as f64;
        }
    }
    Ok(total * space.weight())
}

/// `sum_x mu K(x, x)`
pub fn kernel_diagonal_trace(space: &HomogeneousSpace, op: &LinearOperator) -> Result<Complex64> {
    space.check(op.space())?;
    Ok(op.kernel().diagonal().iter().sum::<Complex64>() * space.weight())
}

/// Sum of the eigenvalues of the operator matrix `mu K`.
pub fn eigenvalue_sum(op: &LinearOperator) -> Result<Complex64> {
    Ok(linalg::general_eigenvalues(&op.matrix())?.into_iter().sum())
}

pub fn trace_report(space: &HomogeneousSpace, op: &LinearOperator) -> Result<TraceReport> {
    let trace_kernel = kernel_diagonal_trace(space, op)?;
    let trace_symbol =
        nuclear_trace_via_symbol(space, &quantize::symbol_from_operator(space, op)?)?;
    let trace_eigen = eigenvalue_sum(op)?;
    let trace_norm = schatten::schatten_norm(&schatten::singular_values(op)?, 1.0)?;
    let scale = trace_norm.max(f64::MIN_POSITIVE);
    Ok(TraceReport {
        trace_kernel,
        trace_symbol,
        trace_eigen,
        trace_norm,
        residual_kernel_symbol: (trace_kernel - trace_symbol).norm() / scale,
        residual_kernel_eigen: (trace_kernel - trace_eigen).norm() / scale,
        residual_symbol_eigen: (trace_symbol - trace_eigen).norm() / scale,
    })
}

pub fn nuclearity_report(
    space: &HomogeneousSpace,
    op: &LinearOperator,
    indices: NuclearIndices,
) -> Result<NuclearityReport> {
    let indices = NuclearIndices::new(indices.r, indices.p1, indices.p2)?;
    let dec = kernel_factorization(space, op)?.with_indices(indices);
    let symbol = quantize::symbol_from_operator(space, op)?;
    Ok(NuclearityReport {
        indices,
        functional: sufficiency_functional(space, &symbol, indices)?,
        cost: decomposition_cost(space, &dec)?,
        terms: dec.len(),
        trace: trace_report(space, op)?,
    })
}

/// Adjoint with respect to `int (Tf) conj(g) dmu = int f conj(T^* g) dmu`.
pub fn adjoint_operator(op: &LinearOperator) -> LinearOperator {
    op.adjoint()
}

/// `pi(x)^* sum_k conj(g_k(x)) h_k^(xi)^*`
pub fn adjoint_symbol_via_decomposition(
    space: &HomogeneousSpace,
    dec: &NuclearDecomposition,
) -> Result<MatrixSymbol> {
    space.check(dec.space)?;
    symbol_from_pairs(
        space,
        dec.terms
            .iter()
            .map(|(h, g)| (g.conj().values().to_vec(), h.values().to_vec())),
    )
}

/// `pi(x)^* sum_eta d_eta sum_y mu Tr[(Gamma_eta(y) sigma(y, eta))^* Gamma_eta(x)] Gamma_xi(y)`,
/// evaluated term by term.
pub fn adjoint_symbol_via_resummation(
    space: &HomogeneousSpace,
    symbol: &MatrixSymbol,
) -> Result<MatrixSymbol> {
    space.check(symbol.space())?;
    let n = space.len();
    let classes = space.dual().len();
    let left: Vec<Vec<CMat>> = (0..n)
        .map(|y| {
            (0..classes)
                .map(|k| quantize::left_factor(space, symbol, y, k).adjoint())
                .collect()
        })
        .collect();
    // weight[x][y] = sum_eta d_eta Tr[(Gamma sigma)(y)^* Gamma(x)]
    let mut weight = CMat::zeros(n, n);
    for x in 0..n {
        for (y, ly) in left.iter().enumerate() {
            weight[(x, y)] = (0..classes)
                .map(|k| linalg::trace(&(&ly[k] * space.gamma(k, x))) * space.dim(k) as f64)
                .sum();
        }
    }
    let mu = space.weight();
    let blocks = (0..n)
        .map(|x| {
            (0..classes)
                .map(|k| {
                    let mut acc = CMat::zeros(space.dim(k), space.dim(k));
                    for y in 0..n {
                        acc += space.gamma(k, y) * (weight[(x, y)] * mu);
                    }
                    space.rep_matrix(k, x).adjoint() * acc
                })
                .collect()
        })
        .collect();
    MatrixSymbol::new(space, blocks)
}

/// Compares the symbol of `T` with its adjoint symbol. The residual is
/// `max |sigma - tau|` divided by `max(1, max |sigma|)`.
pub fn self_adjointness_check(
    space: &HomogeneousSpace,
    op: &LinearOperator,
) -> Result<(bool, f64)> {
    let sigma = quantize::symbol_from_operator(space, op)?;
    let tau = adjoint_symbol_via_resummation(space, &sigma)?;
    let residual = sigma.max_abs_diff(&tau) / sigma.max_abs().max(1.0);
    Ok((residual < SELF_ADJOINT_TOL, residual))
}

/// Symbol of `S T` from the symbol of `S` and a decomposition of `T`:
/// `pi(x)^* sum_k h'_k(x) (conj(g_k))^(xi)^*` with `h'_k = Op(sigma_S) h_k`.
pub fn product_symbol(
    space: &HomogeneousSpace,
    sigma_s: &MatrixSymbol,
    dec_t: &NuclearDecomposition,
) -> Result<MatrixSymbol> {
    space.check(sigma_s.space())?;
    space.check(dec_t.space)?;
    let mut pairs = Vec::with_capacity(dec_t.len());
    for (h, g) in &dec_t.terms {
        let h_prime = apply_symbol(space, sigma_s, h)?;
        pairs.push((h_prime.values().to_vec(), g.conj().values().to_vec()));
    }
    symbol_from_pairs(space, pairs.into_iter())
}
