//! Numerical building blocks shared by the toolkit.

pub mod optimize;
pub mod quadrature;
pub mod scan;
pub mod sum;
