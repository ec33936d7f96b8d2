#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod curvature;
pub mod error;
pub mod global_geom;
pub mod moment_map;
pub mod montecarlo;
pub mod numerics;
pub mod profiles;
pub mod quantization;
pub mod sl2c;
pub mod verify;

pub use error::{Error, Result};
