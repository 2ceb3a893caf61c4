pub mod error;
pub mod linalg;
mod serde_q;
pub mod datum;
pub mod subspace;
pub mod cover;
pub mod optimize;
pub mod polytope;
pub mod compare;
pub mod verify;
pub mod random;
pub mod certify;
pub mod integrate;
pub mod search;

pub use error::{Error, Result};
