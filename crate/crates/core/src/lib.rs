pub mod decomp;
pub mod driver;
pub mod error;
pub mod intpoly;
pub mod ntheory;
pub mod sieve;
pub mod weilgate;

pub use error::{Error, Result};
