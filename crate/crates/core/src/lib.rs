//! Mesh patterns in permutations: occurrence counting, joint distributions over
//! the symmetric group, the bijections that witness joint equidistributions, and
//! a catalog of pattern pairs together with finite-depth verification of their
//! claimed equidistributions.

pub mod bij;
pub mod catalog;
pub mod dist;
pub mod forms;
pub mod mesh;
pub mod occur;
pub mod perm;

pub use catalog::{Catalog, PairEntry, Status, Technique};
pub use dist::JointDistribution;
pub use mesh::{MeshPattern, ShadingType};
pub use perm::{Decomposition, Permutation};
