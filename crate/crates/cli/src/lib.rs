//! Library surface of the `tropic` frontend: document parsing and
//! serialization, the error taxonomy with its exit codes, and the SVG
//! renderer. The binary wires these to the solver crate.

pub mod doc;
pub mod error;
pub mod render;
