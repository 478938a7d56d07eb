//! DP-colouring with colour-class properties: covers of graphs, variable-degeneracy
//! configurations, constructible configurations and exact chromatic
//! invariants for small graphs.

pub mod chromatic;
pub mod config;
pub mod constructible;
pub mod cover;
pub mod graph;
pub mod property;
pub mod theorems;

pub use config::{ConfigError, Configuration};
pub use cover::{Cover, CoverError, JsonInputError, PartialTransversal, Transversal};
pub use graph::{Graph, GraphError};
pub use property::{PropertyError, PropertyOracle};
