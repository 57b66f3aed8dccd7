//! JSON documents: group specs, kernel files, and dumps of functions,
//! Fourier coefficients and symbols. Complex numbers are `[re, im]` pairs.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::GroupBundle;
use crate::error::{Error, LoadError, Result};
use crate::fourier::{CosetFunction, FourierCoefficients};
use crate::group::{FiniteGroup, Subgroup};
use crate::irrep::{verify_irrep, Irrep};
use crate::linalg::{c, CMat};
use crate::quantize::{LinearOperator, MatrixSymbol};
use crate::space::HomogeneousSpace;

pub type Pair = [f64; 2];

pub fn to_pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn from_pair(p: Pair) -> Complex64 {
    c(p[0], p[1])
}

pub fn matrix_to_pairs(m: &CMat) -> Vec<Vec<Pair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| to_pair(m[(i, j)])).collect())
        .collect()
}

/// Parses a rectangular array of pairs; `what` names it in error messages.
pub fn pairs_to_matrix(rows: &[Vec<Pair>], what: &str) -> Result<CMat> {
    let r = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != cols) {
        return Err(Error::Format(format!(
            "{what}: row {i} has {} entries, expected {cols}",
            row.len()
        )));
    }
    Ok(CMat::from_fn(r, cols, |i, j| from_pair(rows[i][j])))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IrrepSpec {
    pub label: String,
    pub dim: usize,
    /// One `dim x dim` matrix per group element.
    pub matrices: Vec<Vec<Vec<Pair>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
    #[serde(default)]
    pub subgroups: BTreeMap<String, Vec<usize>>,
    pub irreps: Vec<IrrepSpec>,
    /// Generating multiset for the heat Laplacian; all non-identity elements when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heat_generators: Option<Vec<usize>>,
}

impl GroupSpec {
    pub fn from_bundle(bundle: &GroupBundle) -> Self {
        Self {
            name: bundle.group.name().to_string(),
            order: bundle.group.order(),
            cayley: bundle.group.cayley().to_vec(),
            subgroups: bundle.subgroups.clone(),
            irreps: bundle
                .irreps
                .iter()
                .map(|irrep| IrrepSpec {
                    label: irrep.label().to_string(),
                    dim: irrep.dim(),
                    matrices: irrep.matrices().iter().map(matrix_to_pairs).collect(),
                })
                .collect(),
            heat_generators: Some(bundle.heat_generators.clone()),
        }
    }

    pub fn into_bundle(self) -> Result<GroupBundle> {
        if self.order != self.cayley.len() {
            return Err(LoadError::OrderMismatch {
                declared: self.order,
                actual: self.cayley.len(),
            }
            .into());
        }
        let group = Arc::new(FiniteGroup::from_table(self.name, self.cayley)?);
        let mut irreps = Vec::with_capacity(self.irreps.len());
        for spec in self.irreps {
            let fail = |reason: String| Error::Irrep {
                label: spec.label.clone(),
                reason,
            };
            if spec.matrices.len() != group.order() {
                return Err(fail(format!(
                    "{} matrices for a group of order {}",
                    spec.matrices.len(),
                    group.order()
                )));
            }
            let matrices = spec
                .matrices
                .iter()
                .enumerate()
                .map(|(g, m)| {
                    let m = pairs_to_matrix(m, &format!("irrep {} element {g}", spec.label))?;
                    if m.shape() != (spec.dim, spec.dim) {
                        return Err(fail(format!(
                            "element {g} has shape {:?}, declared dim {}",
                            m.shape(),
                            spec.dim
                        )));
                    }
                    Ok(m)
                })
                .collect::<Result<Vec<_>>>()?;
            let report = verify_irrep(&group, &matrices, &spec.label);
            if !report.passed {
                return Err(fail(format!(
                    "homomorphism residual {:e}, unitarity residual {:e}, character norm {}",
                    report.homomorphism_residual, report.unitarity_residual, report.irreducibility
                )));
            }
            irreps.push(Arc::new(Irrep::new(spec.label, matrices)?));
        }
        for elems in self.subgroups.values() {
            Subgroup::new(&group, elems)?;
        }
        let heat_generators = self.heat_generators.unwrap_or_else(|| {
            (0..group.order())
                .filter(|&g| g != group.identity())
                .collect()
        });
        Ok(GroupBundle {
            group,
            subgroups: self.subgroups,
            irreps,
            heat_generators,
        })
    }
}

pub fn load_group(text: &str) -> Result<GroupBundle> {
    serde_json::from_str::<GroupSpec>(text)?.into_bundle()
}

pub fn export_group(bundle: &GroupBundle) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GroupSpec::from_bundle(
        bundle,
    ))?)
}

/// `{ "size": N, "kernel": N x N pairs }`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelFile {
    pub size: usize,
    pub kernel: Vec<Vec<Pair>>,
}

impl KernelFile {
    pub fn from_operator(op: &LinearOperator) -> Self {
        Self {
            size: op.size(),
            kernel: matrix_to_pairs(op.kernel()),
        }
    }

    pub fn into_operator(self, space: &HomogeneousSpace) -> Result<LinearOperator> {
        if self.size != self.kernel.len() {
            return Err(Error::Format(format!(
                "kernel declares size {} but has {} rows",
                self.size,
                self.kernel.len()
            )));
        }
        if self.size != space.len() {
            return Err(Error::Format(format!(
                "kernel size {} does not match {} cosets",
                self.size,
                space.len()
            )));
        }
        let m = pairs_to_matrix(&self.kernel, "kernel")?;
        if m.ncols() != self.size {
            return Err(Error::Format(format!(
                "kernel rows have {} entries, expected {}",
                m.ncols(),
                self.size
            )));
        }
        LinearOperator::new(space, m)
    }
}

pub fn load_kernel(space: &HomogeneousSpace, text: &str) -> Result<LinearOperator> {
    serde_json::from_str::<KernelFile>(text)?.into_operator(space)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub values: Vec<Pair>,
}

impl FunctionDoc {
    pub fn from_function(f: &CosetFunction) -> Self {
        Self {
            values: f.values().iter().copied().map(to_pair).collect(),
        }
    }

    pub fn into_function(self, space: &HomogeneousSpace) -> Result<CosetFunction> {
        CosetFunction::new(space, self.values.into_iter().map(from_pair).collect())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockDoc {
    pub label: String,
    pub dim: usize,
    pub block: Vec<Vec<Pair>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientsDoc {
    pub classes: Vec<BlockDoc>,
}

impl CoefficientsDoc {
    pub fn from_coefficients(space: &HomogeneousSpace, coeffs: &FourierCoefficients) -> Self {
        Self {
            classes: block_docs(space, coeffs.blocks()),
        }
    }

    /// Blocks are matched to dual classes by label, so order in the file is free.
    pub fn into_coefficients(self, space: &HomogeneousSpace) -> Result<FourierCoefficients> {
        let mut blocks = space.zero_blocks();
        let mut seen = vec![false; blocks.len()];
        for doc in self.classes {
            let k = space
                .dual()
                .position(&doc.label)
                .ok_or_else(|| Error::Unknown {
                    kind: "dual class",
                    name: doc.label.clone(),
                })?;
            blocks[k] = pairs_to_matrix(&doc.block, &doc.label)?;
            seen[k] = true;
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::Format(format!(
                "missing block for class {}",
                space.classes()[k].label()
            )));
        }
        FourierCoefficients::new(space, blocks)
    }
}

fn block_docs(space: &HomogeneousSpace, blocks: &[CMat]) -> Vec<BlockDoc> {
    space
        .classes()
        .iter()
        .zip(blocks)
        .map(|(class, b)| BlockDoc {
            label: class.label().to_string(),
            dim: class.dim(),
            block: matrix_to_pairs(b),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetBlocks {
    pub coset: usize,
    pub representative: usize,
    pub classes: Vec<BlockDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolDoc {
    pub group: String,
    pub subgroup: Vec<usize>,
    pub solvability_residual: f64,
    pub cosets: Vec<CosetBlocks>,
}

impl SymbolDoc {
    pub fn from_symbol(space: &HomogeneousSpace, symbol: &MatrixSymbol) -> Self {
        Self {
            group: space.group().name().to_string(),
            subgroup: space.subgroup().elements().to_vec(),
            solvability_residual: symbol.solvability_residual(space),
            cosets: symbol
                .blocks()
                .iter()
                .enumerate()
                .map(|(x, row)| CosetBlocks {
                    coset: x,
                    representative: space.cosets().representative(x),
                    classes: block_docs(space, row),
                })
                .collect(),
        }
    }
}
