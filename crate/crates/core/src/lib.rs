//! Upper bounds on the size of permutation codes under the Kendall tau metric.

pub mod bounds;
pub mod cache;
pub mod characters;
pub mod coherent;
pub mod error;
pub mod limits;
pub mod linalg;
pub mod lp;
pub mod lp_bound;
pub mod metrics;
pub mod partition;
pub mod permgroup;
pub mod sdp;
pub mod search;

pub use error::{Error, Result};
pub use limits::Limits;
pub use permgroup::{Permutation, SubgroupKind};
