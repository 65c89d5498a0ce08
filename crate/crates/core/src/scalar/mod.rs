//! Scalar fields for the engine.
//!
//! Everything above this module is generic over [`Scalar`]. The exact field
//! is [`QRational`]; [`SampledQ`] evaluates at a fixed rational `q0` and is
//! a cheap homomorphic image used for fast spot checks.

mod parse;
mod qrational;
mod sampled;
mod zpoly;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub use parse::{parse_qrational, parse_qrational_at};
pub use qrational::{lambda, lambda_plus, QRational};
pub use sampled::SampledQ;
pub use zpoly::ZPoly;

/// A field containing `q` and closed under `q -> 1/q`.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Image of an exact value. Panics if the value has a pole at the
    /// sample point of a sampled scalar.
    fn from_qrational(r: &QRational) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// The substitution `q -> 1/q`.
    fn invert_q(&self) -> Self;

    fn q_pow(e: i64) -> Self {
        Self::from_qrational(&QRational::q_pow(e))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_qrational(&QRational::from_int(n))
    }

    fn div(&self, other: &Self) -> Self {
        self.clone() * other.inv().expect("division by zero scalar")
    }

    /// Integer power; negative exponents invert.
    fn powi(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").powi(-e);
        }
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for QRational {
    fn from_qrational(r: &QRational) -> Self {
        r.clone()
    }

    fn inv(&self) -> Option<Self> {
        QRational::inv(self)
    }

    fn invert_q(&self) -> Self {
        QRational::invert_q(self)
    }

    fn q_pow(e: i64) -> Self {
        QRational::q_pow(e)
    }

    fn from_i64(n: i64) -> Self {
        QRational::from_int(n)
    }

    fn powi(&self, e: i64) -> Self {
        self.pow(e)
    }
}
