pub mod asymptotics;
pub mod bs_integral;
pub mod coupling;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod numerics;
pub mod one_dim;
pub mod radial;

pub use coupling::Coupling;
pub use error::{Error, Result};
pub use numerics::C64;
