//! Numerical toolkit for Young-Fenchel conjugates, weight families of
//! Gelfand-Shilov type, the seminorms they generate, and Fourier-transform
//! bounds, all verified on finite grids.

pub mod check;
pub mod conjugate;
pub mod error;
pub mod extended;
pub mod fourier;
pub mod grid;
pub mod multi_index;
pub mod numerics;
pub mod report;
pub mod seminorm;
pub mod weights;

pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use grid::GridFunction;
pub use multi_index::MultiIndex;
