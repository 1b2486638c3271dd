pub mod arrowing;
pub mod claims;
pub mod cli;
pub mod colouring;
pub mod connectivity;
pub mod constructions;
pub mod copies;
pub mod density;
pub mod error;
pub mod forest;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod inseparable;
pub mod structure;

pub use error::{Error, Result};
