pub mod bounds;
pub mod cli;
pub mod domain;
pub mod error;
pub mod fourier_verify;
pub mod kernel;
pub mod operator;
pub mod plot;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod special;
pub mod spectrum;
mod tensor;
pub mod verify;

pub use error::{Error, Result};
