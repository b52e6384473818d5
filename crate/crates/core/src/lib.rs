//! Symplectic and Hodge star operators on finite-dimensional exterior
//! algebras, Lefschetz decompositions, a variation formula for families of
//! symplectic forms and mixed Hodge-Riemann / Alexandrov-Fenchel checks.

pub mod basis;
pub mod cli;
pub mod complex_structure;
pub mod error;
pub mod lefschetz;
pub mod linalg;
pub mod multivector;
pub mod oracle;
pub mod random;
pub mod symplectic;
pub mod timorin;
pub mod variation;
pub mod verify;

pub use error::{Error, Result};
pub use multivector::{GradedSlice, Multivector, C64};
pub use symplectic::SymplecticForm;
