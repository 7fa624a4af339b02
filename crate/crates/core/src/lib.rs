//! Rigorous upper bounds on probability-distribution tails computed
//! directly from characteristic functions.

// `!(x > 0)` style tests are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cf;
pub mod cli;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod trigpoly;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type CharFn64 = cf::CharFn<f64>;
pub type CharFn32 = cf::CharFn<f32>;
pub type TrigPoly64 = trigpoly::TrigPoly<f64>;
pub type TrigPoly32 = trigpoly::TrigPoly<f32>;
pub type TailBound64 = bounds::TailBound<f64>;
pub type TailBound32 = bounds::TailBound<f32>;
pub type BoundOptions64 = bounds::BoundOptions<f64>;
pub type BoundOptions32 = bounds::BoundOptions<f32>;
