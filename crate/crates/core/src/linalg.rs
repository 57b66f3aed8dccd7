//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. The Hermitian eigensolver is a
//! cyclic complex Jacobi iteration; every spectral quantity in the crate
//! (singular values, `|T|^s`, matrix exponentials of self-adjoint generators)
//! goes through it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;

/// Shorthand for a complex number.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Maximum number of Jacobi sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal threshold, relative to the Frobenius norm of the input.
pub const JACOBI_REL_TOL: f64 = 1e-14;

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Eigendecomposition of a Hermitian matrix: `a = V diag(values) V*`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in nonincreasing order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMat,
    pub sweeps: usize,
}

impl HermitianEigen {
    /// Rebuilds `V diag(f(values)) V*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &v) in self.values.iter().enumerate() {
            let w = f(v);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Only the Hermitian part `(a + a*)/2` is used. Each rotation first removes
/// the phase of the pivot `a[p][q]` with a diagonal unitary and then applies
/// a real Givens rotation, so the whole step is one 2x2 unitary acting on
/// rows and columns `p, q`.
pub fn hermitian_eigen(a: &CMat) -> Result<HermitianEigen> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let mut m = (a + a.adjoint()) * c(0.5, 0.0);
    let mut v = CMat::identity(n, n);
    let scale = frobenius(&m);
    let threshold = JACOBI_REL_TOL * scale;

    let mut sweeps = 0;
    loop {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm())
            .fold(0.0, f64::max);
        if off <= threshold || scale == 0.0 {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= threshold {
                    continue;
                }
                let w = rotation(m[(p, p)].re, m[(q, q)].re, apq);
                let [w_pp, w_pq, w_qp, w_qq] = w;
                rotate_columns(&mut m, p, q, &w);
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
                    m[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                rotate_columns(&mut v, p, q, &w);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |r, col| v[(r, order[col])]);
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Singular value decomposition `a = U diag(values) V*`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Nonincreasing, nonnegative.
    pub values: Vec<f64>,
    /// Right singular vectors as columns.
    pub right: CMat,
    pub sweeps: usize,
}

impl Svd {
    /// `V diag(f(s)) V*`, a function of `|a| = (a* a)^{1/2}`.
    pub fn map_modulus(&self, f: impl Fn(f64) -> f64) -> CMat {
        let mut scaled = self.right.clone();
        for (j, &s) in self.values.iter().enumerate() {
            let w = f(s);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= w;
            }
        }
        &scaled * self.right.adjoint()
    }
}

/// One-sided Jacobi SVD: column pairs of `a` are rotated until mutually
/// orthogonal. Each rotation diagonalizes the 2x2 block of `a* a` on that
/// pair, but the Gram matrix is never formed, so small singular values keep
/// absolute accuracy near `eps ||a||` instead of `sqrt(eps) ||a||`.
pub fn jacobi_svd(a: &CMat) -> Result<Svd> {
    let (rows, n) = a.shape();
    let mut u = a.clone();
    let mut v = CMat::identity(n, n);
    let scale = frobenius(a);
    // Pairs whose inner product is below this are treated as orthogonal.
    let floor = (f64::EPSILON * scale).powi(2);

    let mut sweeps = 0;
    loop {
        let mut worst: f64 = 0.0;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..rows {
                    alpha += u[(k, p)].norm_sqr();
                    beta += u[(k, q)].norm_sqr();
                    gamma += u[(k, p)].conj() * u[(k, q)];
                }
                let g = gamma.norm();
                if g <= floor || g <= JACOBI_REL_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                worst = worst.max(g / (alpha * beta).sqrt());
                if sweeps == JACOBI_MAX_SWEEPS {
                    continue;
                }
                rotated = true;
                let w = rotation(alpha, beta, gamma);
                rotate_columns(&mut u, p, q, &w);
                rotate_columns(&mut v, p, q, &w);
            }
        }
        if !rotated {
            if worst > 0.0 {
                return Err(Error::NoConvergence {
                    sweeps,
                    off_diagonal: worst,
                });
            }
            break;
        }
        sweeps += 1;
    }

    let norms: Vec<f64> = (0..n).map(|j| u.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    Ok(Svd {
        values: order.iter().map(|&i| norms[i]).collect(),
        right: CMat::from_fn(n, n, |r, col| v[(r, order[col])]),
        sweeps,
    })
}

/// Entries `(w_pp, w_pq, w_qp, w_qq)` of the 2x2 unitary that diagonalizes
/// `[[app, apq], [conj(apq), aqq]]`.
fn rotation(app: f64, aqq: f64, apq: Complex64) -> [Complex64; 4] {
    let r = apq.norm();
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    // W = diag(1, conj(phase)) * [[c, s], [-s, c]]
    [
        c(cs, 0.0),
        c(sn, 0.0),
        -phase.conj() * sn,
        phase.conj() * cs,
    ]
}

fn rotate_columns(m: &mut CMat, p: usize, q: usize, w: &[Complex64; 4]) {
    let [w_pp, w_pq, w_qp, w_qq] = *w;
    for k in 0..m.nrows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * w_pp + mq * w_qp;
        m[(k, q)] = mp * w_pq + mq * w_qq;
    }
}

/// Eigenvalues of a general square complex matrix, via nalgebra's Schur
/// decomposition. Used as an independent check on trace identities.
pub fn general_eigenvalues(a: &CMat) -> Result<Vec<Complex64>> {
    let schur =
        nalgebra::linalg::Schur::try_new(a.clone(), 1e-15, 10_000).ok_or(Error::NoConvergence {
            sweeps: 10_000,
            off_diagonal: f64::NAN,
        })?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Numerical rank of a Hermitian positive semidefinite matrix.
pub fn psd_rank(a: &CMat, tol: f64) -> Result<usize> {
    Ok(hermitian_eigen(a)?
        .values
        .iter()
        .filter(|&&v| v > tol)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_hermitian(n: usize) -> CMat {
        let a = CMat::from_fn(n, n, |i, j| {
            c(
                ((i * 7 + j * 3) % 5) as f64 - 2.0,
                ((i * 2 + j * 5) % 7) as f64 - 3.0,
            )
        });
        &a + a.adjoint()
    }

    #[test]
    fn jacobi_reconstructs_hermitian() {
        for n in [1, 2, 3, 6, 11] {
            let a = sample_hermitian(n);
            let eig = hermitian_eigen(&a).unwrap();
            let back = eig.map_spectrum(|x| x);
            assert!(max_abs_diff(&a, &back) < 1e-12 * (1.0 + frobenius(&a)));
            let gram = eig.vectors.adjoint() * &eig.vectors;
            assert!(max_abs_diff(&gram, &CMat::identity(n, n)) < 1e-13);
            assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn jacobi_eigenvalues_match_trace_and_schur() {
        let a = sample_hermitian(7);
        let eig = hermitian_eigen(&a).unwrap();
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - trace(&a).re).abs() < 1e-11);
        let mut schur: Vec<f64> = general_eigenvalues(&a)
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        schur.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in eig.values.iter().zip(&schur) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_and_diagonal_need_no_sweeps() {
        let z = CMat::zeros(4, 4);
        let e = hermitian_eigen(&z).unwrap();
        assert_eq!(e.sweeps, 0);
        assert!(e.values.iter().all(|&v| v == 0.0));
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(3.0, 0.0)]));
        let e = hermitian_eigen(&d).unwrap();
        assert_eq!(e.values, vec![3.0, 1.0]);
    }

    #[test]
    fn svd_of_rank_one() {
        let u = nalgebra::DVector::from_vec(vec![c(1.0, 1.0), c(0.0, 2.0), c(-1.0, 0.0)]);
        let v = nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let a = &u * v.adjoint();
        let svd = jacobi_svd(&a).unwrap();
        let expected = u.norm() * v.norm();
        assert!((svd.values[0] - expected).abs() < 1e-12);
        assert!(svd.values[1..].iter().all(|&x| x < 1e-14));
    }

    #[test]
    fn svd_matches_nalgebra_and_rebuilds_modulus() {
        let a = CMat::from_fn(6, 6, |i, j| {
            c(
                ((i * 5 + j * 3) % 7) as f64 - 3.0,
                ((i + 2 * j) % 5) as f64 - 2.0,
            )
        });
        let svd = jacobi_svd(&a).unwrap();
        let mut oracle: Vec<f64> = a
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        oracle.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in svd.values.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-12 * oracle[0]);
        }
        let sq = svd.map_modulus(|s| s * s);
        assert!(max_abs_diff(&sq, &(a.adjoint() * &a)) < 1e-11 * oracle[0] * oracle[0]);
    }

    #[test]
    fn nonsquare_is_rejected() {
        assert!(matches!(
            hermitian_eigen(&CMat::zeros(2, 3)),
            Err(Error::Shape(_))
        ));
    }
}
