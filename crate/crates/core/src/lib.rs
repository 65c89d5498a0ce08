//! Exact operator calculus on q-deformed quantum spaces.
//!
//! The engine is generic over a [`Scalar`] field; the aliases at the crate
//! root fix the exact field [`QRational`].

pub mod error;
pub mod scalar;
pub mod poly;
pub mod ncalg;
pub mod qcalc;
pub mod qscalar;
pub mod reps;
pub mod hopf;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{lambda, lambda_plus, QRational, SampledQ, Scalar};
