pub mod dynamics;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod galois;
pub mod lattice;
pub mod latsig;
pub mod semantics;
pub mod sheaf;
pub mod spec_file;

pub use error::{Error, Result};
pub use exec::Exec;
pub use lattice::{Elem, FiniteLattice, MonotoneMap};
