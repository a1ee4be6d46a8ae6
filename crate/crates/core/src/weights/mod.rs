//! Weights, weight families and the mollifier construction.

mod chain;
pub mod conditions;
mod family;
mod function;
mod mollifier;
mod profile;
mod weight;

pub use chain::{verify_mollify_chain, ChainConstant, MollifyChainReport};
pub use conditions::{
    check_class_a, estimate_excess, grid_sup, ClassAReport, Condition, ConstantEstimate,
    Divergence, ProbeGrid,
};
pub use family::{make_radial_family, make_shifted_family, FamilyInfo, WeightFamily};
pub use function::{Smoothness, WeightForm, WeightFunction};
pub use mollifier::{
    bump_mollifier, bump_normalization, chi, mollify, BumpKernel, TensorRule,
    DEFAULT_QUADRATURE_ORDER,
};
pub use profile::{FamilySpec, Profile};
pub use weight::{FnWeight, Weight};
