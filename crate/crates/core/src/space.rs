//! A coset space `G/H` bundled with its dual object and cached matrix
//! coefficients. Every analytic object in the crate (functions, Fourier
//! coefficients, symbols, operators) is tied to one of these.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{CosetSpace, FiniteGroup, Subgroup};
use crate::irrep::{DualClass, DualObject, Irrep};
use crate::linalg::CMat;

/// Identity of a coset space, used to reject mixing objects from different spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceId(u64);

#[derive(Clone, Debug)]
pub struct HomogeneousSpace {
    id: SpaceId,
    name: Option<String>,
    cosets: CosetSpace,
    dual: DualObject,
    /// `[class][coset]`: pi(rep(xH))
    rep_matrices: Vec<Vec<CMat>>,
    /// `[class][coset]`: Gamma(xH) = pi(rep(xH)) T_H
    gammas: Vec<Vec<CMat>>,
}

impl HomogeneousSpace {
    pub fn new(
        group: Arc<FiniteGroup>,
        subgroup: Subgroup,
        catalog: &[Arc<Irrep>],
    ) -> Result<Self> {
        let dual = DualObject::new(&group, &subgroup, catalog)?;
        let cosets = CosetSpace::new(group, subgroup)?;
        let mut hasher = DefaultHasher::new();
        cosets.group().name().hash(&mut hasher);
        cosets.group().cayley().hash(&mut hasher);
        cosets.subgroup().elements().hash(&mut hasher);
        let id = SpaceId(hasher.finish());

        let rep_matrices: Vec<Vec<CMat>> = dual
            .classes()
            .iter()
            .map(|k| {
                cosets
                    .representatives()
                    .iter()
                    .map(|&x| k.irrep.matrix(x).clone())
                    .collect()
            })
            .collect();
        let gammas = dual
            .classes()
            .iter()
            .zip(&rep_matrices)
            .map(|(k, reps)| reps.iter().map(|p| p * &k.projection.matrix).collect())
            .collect();
        let space = Self {
            id,
            name: None,
            cosets,
            dual,
            rep_matrices,
            gammas,
        };
        debug_assert_eq!(space.dual.dimension_count(), space.len());
        Ok(space)
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.cosets.group()
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.cosets.subgroup()
    }

    pub fn dual(&self) -> &DualObject {
        &self.dual
    }

    pub fn classes(&self) -> &[DualClass] {
        self.dual.classes()
    }

    /// Number of cosets.
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn weight(&self) -> f64 {
        self.cosets.weight()
    }

    pub fn dim(&self, class: usize) -> usize {
        self.dual.classes()[class].dim()
    }

    pub fn projection(&self, class: usize) -> &CMat {
        &self.dual.classes()[class].projection.matrix
    }

    /// `pi_xi(x)` at the minimal representative `x` of the coset.
    pub fn rep_matrix(&self, class: usize, coset: usize) -> &CMat {
        &self.rep_matrices[class][coset]
    }

    pub fn gamma(&self, class: usize, coset: usize) -> &CMat {
        &self.gammas[class][coset]
    }

    /// Names the subgroup for [`HomogeneousSpace::label`].
    pub fn with_subgroup_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// A short human label such as `S3/Z2a`.
    pub fn label(&self) -> String {
        match &self.name {
            Some(h) => format!("{}/{h}", self.group().name()),
            None => format!(
                "{}/{{{} elements}}",
                self.group().name(),
                self.subgroup().order()
            ),
        }
    }

    pub(crate) fn check(&self, other: SpaceId) -> Result<()> {
        if self.id == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Zero matrices shaped per dual class.
    pub fn zero_blocks(&self) -> Vec<CMat> {
        self.classes()
            .iter()
            .map(|k| CMat::zeros(k.dim(), k.dim()))
            .collect()
    }

    /// The coefficient function `xH -> Gamma_xi(xH)[i][j]`.
    pub fn coefficient_function(&self, class: usize, i: usize, j: usize) -> Vec<Complex64> {
        (0..self.len())
            .map(|x| self.gamma(class, x)[(i, j)])
            .collect()
    }
}
