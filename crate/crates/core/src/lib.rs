pub mod chow;
pub mod cli;
pub mod cones;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod polar;
pub mod polytopes;
pub mod presets;
pub mod quadratic;
pub mod rational;
pub mod toric;
pub mod verify;

pub use error::{Error, Result};
