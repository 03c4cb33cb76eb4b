//! Mutually unbiased Bush-type Hadamard matrices and the association schemes
//! they generate, with exact (integer and rational) certification.

#![allow(clippy::needless_range_loop)]

pub mod cover;
pub mod gfl;
pub mod hadamard;
pub mod matrix;
pub mod mubh_scheme;
pub mod scheme;
pub mod spectral;
