pub mod cf;
pub mod cli;
pub mod construct;
pub mod enumeration;
pub mod error;
pub mod estimate;
pub mod numeric;
pub mod psi;

pub use error::{Error, Result};
