//! Fourier transforms of the test functions and the seminorm bounds they obey.

mod bound;
mod quadrature;
mod stirling;
mod surface;
mod table;

pub use bound::{
    verify_contour_shift, verify_pre_supremum, verify_theorem3_bound, BlockSettings, ContourSample,
    ContourShiftReport, FourierBoundReport, PreSupremumRecord, PreSupremumReport,
};
pub use quadrature::{
    closed_form_transform, default_nodes, fourier, fourier_derivative, fourier_on_grid,
    inverse_fourier, parseval_check, ParsevalCheck, QuadratureSpec, SampledTransform,
    TransformValue, TAIL_TOLERANCE, TARGET_TAIL,
};
pub use stirling::{stirling_certified, verify_stirling, StirlingReport};
pub use surface::{surface_constant, SurfaceConstant};
pub use table::TransformTable;
