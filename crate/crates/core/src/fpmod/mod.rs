//! Exact linear algebra over F_p and module theory over R_p = F_p[t]/(t^p),
//! where t stands for sigma - 1 under a cyclic group of order p.

mod jordan;
mod local;
mod matrix;

pub use jordan::{
    adapted_basis, block_shift_matrix, fixed_subspace, jordan_type, membership, power_image,
    restricted_action, submodule_type, AdaptedBasis, JordanType, NilpotentAction,
};
pub use local::{present_normal_form, ModulePresentation, QuotientMap, RPoly};
pub use matrix::{column_space, kernel, rref, FpMatrix, FpVector, Prime, Subspace};
