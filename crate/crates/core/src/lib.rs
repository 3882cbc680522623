//! Link-level simulation of multicarrier continuous-aperture links over
//! doubly-dispersive channels, with a Gaussian belief propagation receiver.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod channel;
pub mod detector;
pub mod error;
pub mod linalg;
pub mod sim;
pub mod waveform;

pub use error::{Result, SimError};
pub use linalg::{ComplexMatrix, ComplexVector};
