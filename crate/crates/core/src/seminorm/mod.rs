//! Entire test functions and the seminorms of the spaces they belong to.

mod chains;
pub(crate) mod norms;
mod taylor;
pub(crate) mod test_function;

pub use chains::{
    b_series, conjugate_on_grid, derivative_decay, log_shift_constant, log_shift_suite,
    psi_star_table, verify_embedding_chain, verify_theorem4_equivalence, ChainSettings,
    DerivativeDecay, EmbeddingReport, EquivalenceReport, SeriesSum, MARGIN_TOLERANCE,
};
pub use norms::{
    g_seminorm, p_seminorm, q_seminorm, rho_seminorm, ComplexGrid, RealGrid, SeminormReport,
    Truncation,
};
pub use taylor::{taylor_extend, TaylorValue, MAX_TAYLOR_ORDER_1D, MAX_TAYLOR_ORDER_ND};
pub use test_function::{Factor, TestFunction, TestFunctionSpec};
