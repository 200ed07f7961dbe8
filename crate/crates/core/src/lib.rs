pub mod error;
pub mod functions;
pub mod graph;
pub(crate) mod json;
pub mod lipschitz;
pub mod mult_op;
pub mod oracle;
pub mod tolerance;

pub use error::{Error, Result};
