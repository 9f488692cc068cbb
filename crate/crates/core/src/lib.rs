#[cfg(feature = "cli")]
pub mod cli;
pub mod cone;
pub mod divisor;
pub mod error;
pub mod examples;
pub mod lattice;
pub mod oracle;
pub mod polyhedron;
pub mod random;
pub mod semigroup;
pub mod toroidal;
