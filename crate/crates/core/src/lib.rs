//! Pseudo-differential operators on homogeneous spaces `G/H` of finite groups.
//!
//! Groups come from Cayley tables ([`group`]), irreducible representations
//! and the dual object from [`irrep`], and a [`HomogeneousSpace`] ties them
//! together. On top of that sit the Fourier transform, the matrix-symbol
//! quantization, Schatten and nuclear estimates, and heat kernels.

pub mod catalog;
pub mod error;
pub mod fourier;
pub mod group;
pub mod heat;
pub mod io;
pub mod irrep;
pub mod linalg;
pub mod nuclear;
pub mod quantize;
pub mod random;
pub mod schatten;
pub mod space;
pub mod verify;

pub use error::{Error, LoadError, Result};
pub use fourier::{CosetFunction, FourierCoefficients};
pub use group::{CosetSpace, FiniteGroup, Subgroup};
pub use irrep::{DualClass, DualObject, Irrep};
pub use linalg::CMat;
pub use quantize::{LinearOperator, MatrixSymbol};
pub use random::SeededRng;
pub use space::{HomogeneousSpace, SpaceId};
