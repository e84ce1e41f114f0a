pub mod arith;
pub mod closure;
pub mod criteria;
pub mod curves;
pub mod error;
pub mod galois_ring;
pub mod lie_layers;
pub mod linalg;
pub mod matrix;
pub mod matrix_groups;
pub mod oracle;
pub mod poly_fp;
pub mod subgroup_engine;

pub use error::{Error, Result};
