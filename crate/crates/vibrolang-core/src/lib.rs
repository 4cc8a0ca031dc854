#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod error;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub mod fft;
pub mod quad;
pub mod model;
pub mod kernels;
pub mod microsim;
pub mod spectra;
pub mod cavity;
