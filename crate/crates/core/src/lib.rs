pub mod driver;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod regional;
pub mod reinit;
pub mod scenarios;
pub mod schemes;
pub mod simulation;
pub mod transport;

pub use error::{Error, Result};
