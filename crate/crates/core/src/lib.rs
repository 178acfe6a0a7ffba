//! Exact symbolic engine for hammock functions on repetition quivers, the
//! Serre tilting calculus of hammock objects, iterated mapping cones and
//! their Euler characteristics, cross-checked against truncated
//! q-characters obtained from cluster mutation.

pub mod cluster;
pub mod complexes;
pub mod context;
pub mod error;
pub mod hammock;
pub mod laurent;
pub mod objects;
pub mod qchar;
pub mod quiver;
pub mod repetition;

pub use context::Context;
pub use error::{Error, Result};
pub use hammock::QFun;
pub use quiver::{DynkinQuiver, DynkinType, Root, Vertex};
pub use repetition::ZVertex;
