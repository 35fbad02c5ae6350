//! Planar graphs quasi-isometric to string graphs.
//!
//! A string graph is given as a region intersection graph `RIG(G, H)`: a
//! plane graph `G` and a family `H` of connected vertex sets, two sets being
//! adjacent when they share a vertex. The pipeline builds a planar graph on
//! the regions together with machine-checked distortion certificates.

pub mod constants;
pub mod encase;
pub mod error;
pub mod harness;
pub mod metricgraph;
pub mod plane;
pub mod planarize;
pub mod outerstring;
pub mod rig;

pub use error::{Error, Result};
