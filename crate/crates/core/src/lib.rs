//! Building sets, nested complexes and their removahedra, in exact arithmetic.
//!
//! The combinatorial side ([`building`], [`nested`], [`geometry`],
//! [`minkowski`]) decides realizability and computes vertices and Minkowski
//! decompositions. The [`oracle`] recomputes polytopes by brute force so the
//! two sides can be checked against each other.

pub mod building;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod minkowski;
pub mod nested;
pub mod oracle;
pub mod rational;
pub mod set;

pub use building::{BuildingSet, Graph};
pub use error::{Error, Result};
pub use geometry::{Decision, HPolytope};
pub use nested::{BTree, NestedSet};
pub use rational::{Rational, RationalPoint};
pub use set::{Block, GroundSet};
