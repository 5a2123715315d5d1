//! Adjacency labeling schemes for bounded-degree trees, outerplanar, planar
//! and general graphs.

pub mod bits;
pub mod embed;
pub mod error;
pub mod graph;
pub mod scheme;
pub mod universal;

pub use bits::BitString;
pub use error::{Error, Result};
pub use graph::{FamilyTag, Graph};
