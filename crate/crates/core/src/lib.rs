//! Exact analysis and decomposition of periodic matrices over ℚ, 𝔽_p and ℚ(√d).

pub mod cli;
pub mod decompose;
pub mod error;
pub mod generate;
pub mod json;
pub mod matrix;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use poly::Polynomial;
pub use scalar::{Field, Scalar};
