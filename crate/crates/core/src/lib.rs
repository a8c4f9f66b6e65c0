pub mod cli;
pub mod error;
pub mod gibbs;
pub mod io;
pub mod joint;
pub mod kernels;
pub mod neural;
pub mod robustness;
pub mod scalar;
pub mod space;
pub mod structures;

pub use error::{Error, Result};
