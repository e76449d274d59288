//! Exact Ehrhart theory for lattice polytopes: lattice point enumeration,
//! h*-vectors, the integer decomposition property, triangulations and
//! unimodular equivalence.

pub mod data;
pub mod digraph;
pub mod ehrhart;
pub mod error;
pub mod idp;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod polytope;
pub mod search;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
