pub mod bound_quiver;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod exactalg;
pub mod forms;
pub mod rep;
pub mod sampling;
pub mod semi_invariants;
pub mod stability;
pub mod tilting;

pub use error::{Error, Result};
