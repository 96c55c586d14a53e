//! Numerical building blocks.

pub mod dd;
pub mod fit;
pub mod quad;
pub mod rng;
pub mod special;
pub mod sum;
pub mod zeta;
