pub mod acceptance;
pub mod config;
pub mod csvio;
pub mod enp;
pub mod error;
pub mod fourier;
pub mod linalg;
pub mod planar;
pub mod report;
pub mod runner;
pub mod suite;

pub use enp_core;
pub use error::{LabError, LabResult};
