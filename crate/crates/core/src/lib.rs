//! Maximum likelihood estimation for toric (log-linear) statistical models.

pub mod delpezzo;
pub mod discriminant;
pub mod error;
pub mod geometry;
pub mod ipf;
pub mod linalg;
pub mod model;
pub mod phylo;
pub mod poly;
pub mod quadratic;
pub mod rational;
pub mod tfp;

pub use error::{Error, Result};
