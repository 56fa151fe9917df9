//! Contraction subgroups, stable images and semidirect decompositions for
//! endomorphisms of finite groups, and for towers of finite quotients that
//! stand in for profinite groups.
pub mod acceptance;
pub mod catalog;
pub mod check;
pub mod dsl;
pub mod endo;
pub mod error;
pub mod group;
pub mod lattice;
pub mod mask;
pub mod oracle;
pub mod report;
pub mod tower;

pub use check::{Check, CheckRecord};
pub use error::{Error, Result};
