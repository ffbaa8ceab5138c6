//! Rigorous lower bounds for the ground-state energy per site of the
//! Edwards-Anderson spin glass on the square and cubic lattices.
//!
//! The lattice Hamiltonian with periodic boundary conditions is split into
//! overlapping unit cells (squares or cubes) anchored at every site, each
//! weighted by the factor `c_d` that undoes the repeated counting of bonds.
//! The variational principle then bounds the lattice ground energy from
//! below by the sum of the cell ground energies, and independence of the
//! couplings turns the disorder average of that sum into `N` copies of a
//! single cell average, which is computed here by exact enumeration.
//!
//! Module map:
//!
//! - [`lattice`]: unit cells, finite lattices and the cell cover.
//! - [`classical`]: exact Ising cell ground states, frustration and gauge maps.
//! - [`bounds`]: coupling distributions, exact and sampled cell averages,
//!   bound reports with comparison constants and the misfit parameter.
//! - [`quantum`]: anisotropic quantum cell Hamiltonians and their spectra.
//! - [`exact_gs`]: exact finite-lattice ground states (the upper-bound side)
//!   and per-sample checks of the cell inequality.
//! - [`checks`]: the property suite behind `ea-bounds verify`.

pub mod bounds;
pub mod checks;
pub mod classical;
pub mod error;
pub mod exact_gs;
pub mod lattice;
pub mod quantum;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;

/// Version string embedded in every report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema tag for JSON output.
pub const SCHEMA_VERSION: &str = "ea-bounds/1";
