//! Entropy-stable finite-difference solver for double-adiabatic (CGL) plasma flow
//! with optional pressure-isotropization relaxation.

pub mod cases;
pub mod diagnostics;
pub mod eigen;
pub mod error;
pub mod flux;
pub mod noncons;
pub mod reconstruct;
pub mod run;
pub mod scheme;
pub mod solver;
pub mod state;
pub mod timeint;
pub mod verify;

pub use cases::{CaseId, TestCase};
pub use error::{Error, Result};
pub use run::{run, RunConfig};
pub use scheme::{Boundary, Field, Grid, SchemeConfig};
pub use solver::{SchemeName, Simulation};
pub use state::{Axis, Conserved, Primitive};
