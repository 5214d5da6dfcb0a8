//! Generalized discrete Fourier transforms over finite groups.

pub mod adapted;
pub mod engine;
pub mod error;
pub mod factory;
pub mod group;
pub mod linalg;
pub mod rep;

pub use error::{Error, Result};
