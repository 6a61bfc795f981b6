pub mod error;
pub mod quad;
pub mod funcs;
pub mod measures;
pub mod rng;
pub mod special;
pub mod stats;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use rng::RngStream;
