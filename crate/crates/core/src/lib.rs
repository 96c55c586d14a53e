#![no_std]
// `!(x > 0.0)` is how NaN arguments get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod numeric;

pub use error::{Error, Result};
pub mod geometry;
pub mod matrix;
pub mod spectral;
pub mod trace;
pub mod zeta;
