//! Seeded verification suites: each check evaluates one identity of the
//! calculus on a coset space and records its worst residual.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::catalog::GroupBundle;
use crate::error::{Error, Result};
use crate::fourier::{self, lq_norm_values, CosetFunction, FourierCoefficients};
use crate::heat::{self, BiInvariantLaplacian};
use crate::linalg::{self, c, CMat};
use crate::nuclear::{self, NuclearIndices};
use crate::quantize::{self, LinearOperator, MatrixSymbol};
use crate::random::SeededRng;
use crate::schatten;
use crate::space::HomogeneousSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Fourier,
    Quantize,
    Schatten,
    Nuclear,
    Heat,
}

impl Suite {
    pub const NAMES: [&'static str; 6] =
        ["all", "fourier", "quantize", "schatten", "nuclear", "heat"];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "fourier" => Suite::Fourier,
            "quantize" => Suite::Quantize,
            "schatten" => Suite::Schatten,
            "nuclear" => Suite::Nuclear,
            "heat" => Suite::Heat,
            _ => {
                return Err(Error::Unknown {
                    kind: "suite",
                    name: s.to_string(),
                })
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            Suite::All,
            Suite::Fourier,
            Suite::Quantize,
            Suite::Schatten,
            Suite::Nuclear,
            Suite::Heat,
        ]
        .iter()
        .position(|s| s == self)
        .unwrap_or(0);
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Replaces every per-check tolerance when set.
    pub tolerance: Option<f64>,
    /// Random functions / operators per sampled check.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            tolerance: None,
            samples: 10,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub pair: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Wall-clock time; kept out of structured output so it stays byte-stable.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub pair: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// The failing check with the largest residual-to-tolerance ratio.
    pub fn worst(&self) -> Option<&CheckRecord> {
        let ratio = |r: &CheckRecord| {
            if r.residual.is_nan() {
                f64::INFINITY
            } else {
                r.residual / r.tolerance.max(f64::MIN_POSITIVE)
            }
        };
        self.checks
            .iter()
            .filter(|r| !r.passed)
            .max_by(|a, b| ratio(a).total_cmp(&ratio(b)))
    }
}

struct Runner<'a> {
    space: &'a HomogeneousSpace,
    bundle: &'a GroupBundle,
    opts: &'a VerifyOptions,
    records: Vec<CheckRecord>,
}

impl Runner<'_> {
    /// Runs `f` with its own substream so checks are reproducible in isolation.
    fn check(&mut self, id: &str, tol: f64, f: impl FnOnce(&mut SeededRng) -> Result<f64>) {
        let stream = self.records.len() as u64 + 1;
        let mut rng = SeededRng::new(self.opts.seed).split(stream);
        let start = Instant::now();
        let outcome = f(&mut rng);
        let seconds = start.elapsed().as_secs_f64();
        let tolerance = self.opts.tolerance.unwrap_or(tol);
        let (residual, note) = match outcome {
            Ok(r) => (r, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        self.records.push(CheckRecord {
            id: id.to_string(),
            pair: self.space.label(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            note,
            seconds,
        });
    }

    fn samples(&self) -> usize {
        self.opts.samples.max(1)
    }
}

fn max_over<T>(
    items: impl IntoIterator<Item = T>,
    mut f: impl FnMut(T) -> Result<f64>,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for item in items {
        let r = f(item)?;
        if r.is_nan() {
            return Ok(f64::NAN);
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(f64::MIN_POSITIVE)
}

pub fn run_suite(
    bundle: &GroupBundle,
    space: &HomogeneousSpace,
    suite: Suite,
    opts: &VerifyOptions,
) -> VerificationReport {
    let mut run = Runner {
        space,
        bundle,
        opts,
        records: Vec::new(),
    };
    if suite.includes(Suite::Fourier) {
        fourier_checks(&mut run);
    }
    if suite.includes(Suite::Quantize) {
        quantize_checks(&mut run);
    }
    if suite.includes(Suite::Schatten) {
        schatten_checks(&mut run);
    }
    if suite.includes(Suite::Nuclear) {
        nuclear_checks(&mut run);
    }
    if suite.includes(Suite::Heat) {
        heat_checks(&mut run);
    }
    let passed = run.records.iter().filter(|r| r.passed).count();
    VerificationReport {
        suite,
        pair: space.label(),
        seed: opts.seed,
        failed: run.records.len() - passed,
        passed,
        checks: run.records,
    }
}

fn random_coefficients(space: &HomogeneousSpace, rng: &mut SeededRng) -> FourierCoefficients {
    let blocks = (0..space.dual().len())
        .map(|k| rng.matrix(space.dim(k), space.dim(k)))
        .collect();
    FourierCoefficients::new(space, blocks).expect("shaped per dual")
}

/// `Some(n)` when the Cayley table is `(i + j) mod n`.
fn cyclic_order(bundle: &GroupBundle) -> Option<usize> {
    let n = bundle.group.order();
    let table = bundle.group.cayley();
    (0..n)
        .all(|i| (0..n).all(|j| table[i][j] == (i + j) % n))
        .then_some(n)
}

/// For a cyclic group, the forward transform against the classical DFT on
/// the quotient `Z_n / H = Z_N`; returns the worst entry deviation.
pub fn classical_dft_residual(
    bundle: &GroupBundle,
    space: &HomogeneousSpace,
    f: &CosetFunction,
) -> Result<f64> {
    let n = cyclic_order(bundle)
        .ok_or_else(|| Error::Parameter("classical DFT check needs a cyclic group".into()))?;
    let big_n = space.len();
    if space.cosets().representatives() != (0..big_n).collect::<Vec<_>>() {
        return Err(Error::Parameter(
            "coset representatives are not 0..N".into(),
        ));
    }
    let fh = fourier::forward(space, f)?;
    let mut hit = vec![false; big_n];
    let mut worst: f64 = 0.0;
    for k in 0..space.dual().len() {
        // chi(1) = e^{2 pi i k / n}; on the quotient this is frequency k N / n
        let chi = space.classes()[k].irrep.character()[1 % n];
        let freq = (chi.arg() / std::f64::consts::TAU * big_n as f64)
            .round()
            .rem_euclid(big_n as f64) as usize;
        hit[freq] = true;
        let classical: Complex64 = f
            .values()
            .iter()
            .enumerate()
            .map(|(x, v)| {
                v * Complex64::from_polar(
                    1.0,
                    -std::f64::consts::TAU * (freq * x) as f64 / big_n as f64,
                )
            })
            .sum::<Complex64>()
            / big_n as f64;
        worst = worst.max((fh.block(k)[(0, 0)] - classical).norm());
    }
    if hit.iter().any(|h| !h) {
        return Err(Error::Parameter(
            "dual classes do not cover every quotient frequency".into(),
        ));
    }
    Ok(worst)
}

fn fourier_checks(run: &mut Runner) {
    let space = run.space;
    let samples = run.samples();
    run.check("fourier.plancherel", 1e-12, |rng| {
        max_over(0..samples * 10, |_| {
            let f = rng.function(space);
            let l2 = fourier::lq_norm(space, &f, 2.0)?;
            let p = fourier::plancherel_norm(space, &fourier::forward(space, &f)?)?;
            Ok(rel((l2 * l2 - p * p).abs(), l2 * l2))
        })
    });
    run.check("fourier.inversion", 1e-11, |rng| {
        max_over(0..samples, |_| {
            let f = rng.function(space);
            Ok(fourier::inverse(space, &fourier::forward(space, &f)?)?.max_abs_diff(&f))
        })
    });
    run.check("fourier.forward_after_inverse", 1e-11, |rng| {
        max_over(0..samples, |_| {
            let coeffs = random_coefficients(space, rng);
            let back = fourier::forward(space, &fourier::inverse(space, &coeffs)?)?;
            max_over(0..space.dual().len(), |k| {
                Ok(linalg::max_abs_diff(
                    back.block(k),
                    &(space.projection(k) * coeffs.block(k)),
                ))
            })
        })
    });
    run.check("fourier.constant_only_trivial", 1e-13, |_| {
        let fh = fourier::forward(space, &CosetFunction::constant(space, c(1.0, 0.0)))?;
        max_over(space.classes().iter().enumerate(), |(k, class)| {
            let expected = if class.irrep.is_trivial() {
                CMat::identity(1, 1)
            } else {
                CMat::zeros(class.dim(), class.dim())
            };
            Ok(linalg::max_abs_diff(fh.block(k), &expected))
        })
    });
    run.check("fourier.projection_axioms", 1e-12, |_| {
        max_over(space.classes().iter().enumerate(), |(k, class)| {
            let t = space.projection(k);
            let mut r =
                linalg::max_abs_diff(&(t * t), t).max(linalg::max_abs_diff(&t.adjoint(), t));
            for &h in space.subgroup().elements() {
                r = r.max(linalg::max_abs_diff(&(class.irrep.matrix(h) * t), t));
            }
            Ok(r)
        })
    });
    run.check("fourier.dimension_count", 1e-10, |_| {
        let total: f64 = (0..space.dual().len())
            .map(|k| space.dim(k) as f64 * linalg::trace(space.projection(k)).re)
            .sum();
        Ok((total - space.len() as f64).abs())
    });
    run.check("fourier.coefficient_gram", 1e-10, |_| {
        let classes = space.dual().len();
        max_over(
            (0..classes).flat_map(|a| (0..classes).map(move |b| (a, b))),
            |(a, b)| {
                let scale = ((space.dim(a) * space.dim(b)) as f64).sqrt();
                let mut worst: f64 = 0.0;
                for i in 0..space.dim(a) {
                    for j in 0..space.dim(a) {
                        let f = space.coefficient_function(a, i, j);
                        for k in 0..space.dim(b) {
                            for l in 0..space.dim(b) {
                                let ip =
                                    fourier::inner(space, &f, &space.coefficient_function(b, k, l))
                                        * scale;
                                let expected = if a == b && i == k {
                                    space.projection(a)[(l, j)]
                                } else {
                                    c(0.0, 0.0)
                                };
                                worst = worst.max((ip - expected).norm());
                            }
                        }
                    }
                }
                Ok(worst)
            },
        )
    });
    run.check("fourier.coefficient_lq_bounds", 1e-12, |_| {
        max_over(0..space.dual().len(), |k| {
            let d = space.dim(k) as f64;
            let mut worst: f64 = 0.0;
            for i in 0..space.dim(k) {
                for j in 0..space.dim(k) {
                    let f = space.coefficient_function(k, i, j);
                    for q in [1.0, 2.0, 4.0, f64::INFINITY] {
                        let bound = if q >= 2.0 {
                            d.powf(-1.0 / q)
                        } else {
                            d.powf(-0.5)
                        };
                        worst = worst.max(lq_norm_values(&f, space.weight(), q)? - bound);
                    }
                }
            }
            Ok(worst.max(0.0))
        })
    });
    if cyclic_order(run.bundle).is_some() {
        let bundle = run.bundle;
        run.check("fourier.classical_dft", 1e-12, |rng| {
            max_over(0..samples, |_| {
                classical_dft_residual(bundle, space, &rng.function(space))
            })
        });
    }
}

fn quantize_checks(run: &mut Runner) {
    let space = run.space;
    let samples = run.samples();
    run.check("quantize.identity_symbol", 1e-12, |_| {
        let op = quantize::op_from_symbol(space, &MatrixSymbol::identity(space))?;
        Ok(op.relative_diff(&LinearOperator::identity(space)))
    });
    run.check("quantize.operator_round_trip", 1e-10, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            let back =
                quantize::op_from_symbol(space, &quantize::symbol_from_operator(space, &op)?)?;
            Ok(op.relative_diff(&back))
        })
    });
    run.check("quantize.symbol_round_trip", 1e-10, |rng| {
        max_over(0..samples, |_| {
            let sigma = rng.canonical_symbol(space);
            let back =
                quantize::symbol_from_operator(space, &quantize::op_from_symbol(space, &sigma)?)?;
            Ok(rel(back.max_abs_diff(&sigma), sigma.max_abs()))
        })
    });
    run.check("quantize.extracted_absorption", 1e-11, |rng| {
        max_over(0..samples, |_| {
            let sigma = quantize::symbol_from_operator(space, &rng.operator(space))?;
            Ok(sigma.absorption_residual(space))
        })
    });
    run.check("quantize.kernel_vs_trace_sum", 1e-12, |rng| {
        max_over(0..samples, |_| {
            let sigma = rng.canonical_symbol(space);
            let f = rng.function(space);
            let a = quantize::apply(space, &quantize::op_from_symbol(space, &sigma)?, &f)?;
            let b = quantize::apply_symbol(space, &sigma, &f)?;
            let scale = a.values().iter().map(|z| z.norm()).fold(1.0, f64::max);
            Ok(a.max_abs_diff(&b) / scale)
        })
    });
}

fn schatten_checks(run: &mut Runner) {
    let space = run.space;
    let samples = run.samples();
    run.check("schatten.hs_symbol", 1e-10, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            let s2 = schatten::schatten_norm(&schatten::singular_values(&op)?, 2.0)?;
            let via =
                schatten::hs_norm_via_symbol(space, &quantize::symbol_from_operator(space, &op)?)?;
            Ok(rel((s2 - via).abs(), s2))
        })
    });
    run.check("schatten.hs_kernel", 1e-12, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            let s2 = schatten::schatten_norm(&schatten::singular_values(&op)?, 2.0)?;
            Ok(rel(
                (s2 * s2 - schatten::kernel_l2_norm_sq(space, &op)).abs(),
                s2 * s2,
            ))
        })
    });
    run.check("schatten.criterion", 1e-9, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            max_over([0.5, 1.0, 2.0, 3.0], |r| {
                Ok(schatten::schatten_criterion_check(space, &op, r)?.residual)
            })
        })
    });
    run.check("schatten.modulus_power", 1e-9, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            let spectrum = schatten::singular_values(&op)?;
            max_over(
                [
                    (0.5, 1.0),
                    (0.5, 2.0),
                    (1.0, 1.0),
                    (1.0, 2.0),
                    (3.0, 1.0),
                    (3.0, 2.0),
                ],
                |(r, t)| {
                    let lhs = schatten::schatten_norm(&spectrum, r)?.powf(r);
                    let modulus = schatten::fractional_modulus(space, &op, r / t)?;
                    let rhs =
                        schatten::schatten_norm(&schatten::singular_values(&modulus)?, t)?.powf(t);
                    Ok(rel((lhs - rhs).abs(), lhs))
                },
            )
        })
    });
    run.check("schatten.translation_invariance", 1e-11, |rng| {
        let op = rng.operator(space);
        let base = schatten::singular_values(&op)?;
        max_over(0..space.group().order(), |g| {
            let moved = schatten::singular_values(&schatten::translation(space, g).compose(&op)?)?;
            Ok(moved
                .values
                .iter()
                .zip(&base.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max))
        })
    });
    run.check("schatten.monotone_in_r", 1e-12, |rng| {
        max_over(0..samples, |_| {
            let spectrum = schatten::singular_values(&rng.operator(space))?;
            let norms = [0.5, 1.0, 2.0, 4.0, f64::INFINITY]
                .iter()
                .map(|&r| schatten::schatten_norm(&spectrum, r))
                .collect::<Result<Vec<_>>>()?;
            Ok(norms
                .windows(2)
                .map(|w| rel((w[1] - w[0]).max(0.0), w[0]))
                .fold(0.0, f64::max))
        })
    });
}

fn nuclear_checks(run: &mut Runner) {
    let space = run.space;
    let samples = run.samples();
    run.check("nuclear.factorization", 1e-11, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            let back = nuclear::kernel_factorization(space, &op)?.reconstruct(space)?;
            Ok(linalg::max_abs_diff(back.kernel(), op.kernel()))
        })
    });
    run.check("nuclear.decomposition_symbol", 1e-10, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            let dec = nuclear::kernel_factorization(space, &op)?;
            let direct = quantize::symbol_from_operator(space, &op)?;
            Ok(nuclear::symbol_from_decomposition(space, &dec)?.max_abs_diff(&direct))
        })
    });
    run.check("nuclear.kernel_bilinear", 1e-10, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            let dec = nuclear::kernel_factorization(space, &op)?;
            let sigma = nuclear::symbol_from_decomposition(space, &dec)?;
            let from_symbol = quantize::op_from_symbol(space, &sigma)?;
            let from_terms = dec.reconstruct(space)?;
            Ok(linalg::max_abs_diff(
                from_symbol.kernel(),
                from_terms.kernel(),
            ))
        })
    });
    run.check("nuclear.trace_three_way", 1e-10, |rng| {
        max_over(0..samples, |_| {
            Ok(nuclear::trace_report(space, &rng.operator(space))?.max_residual())
        })
    });
    run.check("nuclear.adjoint_decomposition", 1e-9, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            let direct = quantize::symbol_from_operator(space, &nuclear::adjoint_operator(&op))?;
            let dec = nuclear::kernel_factorization(space, &op)?;
            Ok(nuclear::adjoint_symbol_via_decomposition(space, &dec)?.max_abs_diff(&direct))
        })
    });
    run.check("nuclear.adjoint_resummation", 1e-9, |rng| {
        max_over(0..samples, |_| {
            let op = rng.operator(space);
            let direct = quantize::symbol_from_operator(space, &nuclear::adjoint_operator(&op))?;
            let sigma = quantize::symbol_from_operator(space, &op)?;
            Ok(nuclear::adjoint_symbol_via_resummation(space, &sigma)?.max_abs_diff(&direct))
        })
    });
    run.check("nuclear.self_adjoint_mismatches", 0.0, |rng| {
        let mut mismatches = 0;
        for i in 0..samples.max(2) {
            let op = if i % 2 == 0 {
                rng.hermitian_operator(space)
            } else {
                let a = rng.operator(space);
                LinearOperator::new(
                    space,
                    (a.kernel() - a.kernel().adjoint()) * c(0.0, 1.0) + a.kernel() * c(0.05, 0.0),
                )?
            };
            let (flag, _) = nuclear::self_adjointness_check(space, &op)?;
            if flag != (op.hermitian_residual() < 1e-12) {
                mismatches += 1;
            }
        }
        Ok(mismatches as f64)
    });
    run.check("nuclear.product_symbol", 1e-9, |rng| {
        max_over(0..samples, |_| {
            let (s, t) = (rng.operator(space), rng.operator(space));
            let lambda = nuclear::product_symbol(
                space,
                &quantize::symbol_from_operator(space, &s)?,
                &nuclear::kernel_factorization(space, &t)?,
            )?;
            Ok(quantize::op_from_symbol(space, &lambda)?.relative_diff(&s.compose(&t)?))
        })
    });
    run.check("nuclear.functional_homogeneity", 1e-12, |rng| {
        let sigma = rng.canonical_symbol(space);
        max_over(
            [(0.5, 3.0), (0.5, 0.2), (1.0, 3.0), (1.0, 0.2)],
            |(r, s)| {
                let idx = NuclearIndices::new(r, 1.5, 2.0)?;
                let base = nuclear::sufficiency_functional(space, &sigma, idx)?;
                let scaled = nuclear::sufficiency_functional(space, &sigma.scale(c(s, 0.0)), idx)?;
                Ok(rel((scaled - s.powf(r) * base).abs(), scaled))
            },
        )
    });
}

fn heat_checks(run: &mut Runner) {
    let space = run.space;
    let laplacian = match BiInvariantLaplacian::for_bundle(run.bundle) {
        Ok(l) => l,
        Err(e) => {
            run.check("heat.laplacian", 0.0, |_| Err(e));
            return;
        }
    };
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1).collect();
    run.check("heat.eigenfunctions", 1e-11, |_| {
        let op = heat::descend_laplacian(&laplacian, space)?;
        max_over(0..space.dual().len(), |k| {
            let lambda = laplacian.class_eigenvalue(space, k)?;
            let mut worst: f64 = 0.0;
            for i in 0..space.dim(k) {
                for j in 0..space.dim(k) {
                    let f = CosetFunction::new(space, space.coefficient_function(k, i, j))?;
                    let lf = quantize::apply(space, &op, &f)?;
                    worst = worst.max(lf.max_abs_diff(&f.scale(c(lambda, 0.0))));
                }
            }
            Ok(worst)
        })
    });
    run.check("heat.symbol_vs_exponential", 1e-10, |_| {
        max_over(grid.iter(), |&t| {
            let op =
                quantize::op_from_symbol(space, &heat::heat_symbol(&laplacian, space, t)?.symbol)?;
            Ok(op.relative_diff(&heat::heat_operator_oracle(&laplacian, space, t)?))
        })
    });
    run.check("heat.trace_formula", 1e-10, |_| {
        max_over(grid.iter(), |&t| {
            let formula = heat::heat_trace(&laplacian, space, t)?;
            let oracle =
                linalg::trace(&heat::heat_operator_oracle(&laplacian, space, t)?.matrix()).re;
            let sym = nuclear::nuclear_trace_via_symbol(
                space,
                &heat::heat_symbol(&laplacian, space, t)?.symbol,
            )?
            .re;
            Ok(rel(
                (formula - oracle).abs().max((formula - sym).abs()),
                oracle,
            ))
        })
    });
    run.check("heat.initial_trace", 1e-12, |_| {
        Ok((heat::heat_trace(&laplacian, space, 0.0)? - space.len() as f64).abs())
    });
    run.check("heat.semigroup", 1e-10, |_| {
        let op = |t| -> Result<LinearOperator> {
            quantize::op_from_symbol(space, &heat::heat_symbol(&laplacian, space, t)?.symbol)
        };
        max_over(
            [(0.1, 0.2), (0.5, 0.5), (1.0, 0.3), (0.0, 1.7)],
            |(a, b)| Ok(op(a)?.compose(&op(b)?)?.relative_diff(&op(a + b)?)),
        )
    });
    // Counts grid points where the trace drops below 1, or fails to strictly
    // decrease although some class with a nonzero projection has lambda > 0.
    run.check("heat.trace_monotone_violations", 0.0, |_| {
        let traces = grid
            .iter()
            .map(|&t| heat::heat_trace(&laplacian, space, t))
            .collect::<Result<Vec<_>>>()?;
        let decays = (0..space.dual().len()).any(|k| {
            laplacian
                .class_eigenvalue(space, k)
                .is_ok_and(|l| l > 1e-12)
                && linalg::trace(space.projection(k)).re > 0.5
        });
        let below_one = traces.iter().filter(|&&t| t < 1.0 - 1e-12).count();
        let not_decreasing = if decays {
            traces.windows(2).filter(|w| w[1] >= w[0]).count()
        } else {
            0
        };
        Ok((below_one + not_decreasing) as f64)
    });
    run.check("heat.contraction", 1e-12, |_| {
        max_over(grid.iter().skip(1), |&t| {
            let m =
                quantize::op_from_symbol(space, &heat::heat_symbol(&laplacian, space, t)?.symbol)?
                    .matrix();
            let eig = linalg::hermitian_eigen(&m)?;
            Ok(eig
                .values
                .iter()
                .map(|&v| (v - 1.0).max(0.0) + (-v).max(0.0))
                .fold(0.0, f64::max))
        })
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn s3_all_passes_with_twenty_checks() {
        let bundle = catalog::builtin("S3").unwrap();
        let space = bundle.space("Z2a").unwrap();
        let report = run_suite(&bundle, &space, Suite::All, &VerifyOptions::default());
        assert!(report.checks.len() >= 20);
        assert!(report.all_passed(), "{:?}", report.worst());
        assert_eq!(report.pair, "S3/Z2a");
    }

    #[test]
    fn cyclic_fourier_includes_dft() {
        let bundle = catalog::builtin("Z12").unwrap();
        let space = bundle.space("Z3").unwrap();
        let report = run_suite(&bundle, &space, Suite::Fourier, &VerifyOptions::default());
        assert!(report
            .checks
            .iter()
            .any(|r| r.id == "fourier.classical_dft"));
        assert!(report.all_passed(), "{:?}", report.worst());
    }

    #[test]
    fn unreachable_tolerance_fails() {
        let bundle = catalog::builtin("S3").unwrap();
        let space = bundle.space("Z2a").unwrap();
        let opts = VerifyOptions {
            tolerance: Some(1e-30),
            ..VerifyOptions::default()
        };
        let report = run_suite(&bundle, &space, Suite::All, &opts);
        assert!(!report.all_passed());
        assert!(report.worst().is_some());
    }

    #[test]
    fn deterministic() {
        let bundle = catalog::builtin("Q8").unwrap();
        let space = bundle.space("Z4").unwrap();
        let opts = VerifyOptions {
            seed: 9,
            ..VerifyOptions::default()
        };
        let a = serde_json::to_string(&run_suite(&bundle, &space, Suite::Nuclear, &opts)).unwrap();
        let b = serde_json::to_string(&run_suite(&bundle, &space, Suite::Nuclear, &opts)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn suite_names_parse() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
