use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{QRational, Scalar};

/// Exact value of a rational function at `q0 = N/D`, paired with its value
/// at `1/q0` so that `q -> 1/q` stays a field automorphism.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SampledQ<const N: i64, const D: i64> {
    at: BigRational,
    at_inv: BigRational,
}

impl<const N: i64, const D: i64> SampledQ<N, D> {
    pub fn point() -> BigRational {
        BigRational::new(BigInt::from(N), BigInt::from(D))
    }

    pub fn value(&self) -> &BigRational {
        &self.at
    }

    fn pair(at: BigRational, at_inv: BigRational) -> Self {
        SampledQ { at, at_inv }
    }
}

impl<const N: i64, const D: i64> fmt::Display for SampledQ<N, D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.at)
    }
}

impl<const N: i64, const D: i64> fmt::Debug for SampledQ<N, D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@q={}/{}", self.at, N, D)
    }
}

impl<const N: i64, const D: i64> Add for SampledQ<N, D> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::pair(self.at + o.at, self.at_inv + o.at_inv)
    }
}

impl<const N: i64, const D: i64> Sub for SampledQ<N, D> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::pair(self.at - o.at, self.at_inv - o.at_inv)
    }
}

impl<const N: i64, const D: i64> Mul for SampledQ<N, D> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::pair(self.at * o.at, self.at_inv * o.at_inv)
    }
}

impl<const N: i64, const D: i64> Neg for SampledQ<N, D> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::pair(-self.at, -self.at_inv)
    }
}

impl<const N: i64, const D: i64> Zero for SampledQ<N, D> {
    fn zero() -> Self {
        Self::pair(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.at.is_zero() && self.at_inv.is_zero()
    }
}

impl<const N: i64, const D: i64> One for SampledQ<N, D> {
    fn one() -> Self {
        Self::pair(BigRational::one(), BigRational::one())
    }
}

impl<const N: i64, const D: i64> Scalar for SampledQ<N, D> {
    fn from_qrational(r: &QRational) -> Self {
        let p = Self::point();
        let at = r.eval(&p).expect("sample point is a pole");
        let at_inv = r.eval(&p.recip()).expect("sample point is a pole");
        Self::pair(at, at_inv)
    }

    fn inv(&self) -> Option<Self> {
        if self.at.is_zero() || self.at_inv.is_zero() {
            return None;
        }
        Some(Self::pair(self.at.recip(), self.at_inv.recip()))
    }

    fn invert_q(&self) -> Self {
        Self::pair(self.at_inv.clone(), self.at.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = SampledQ<3, 2>;

    #[test]
    fn homomorphic_image() {
        let a: QRational = "(1+q^2)/q - 3/(1-q)".parse().unwrap();
        let b: QRational = "q^-2 + lambda".parse().unwrap();
        let lhs = S::from_qrational(&(&a * &b + a.invert_q()));
        let rhs = S::from_qrational(&a) * S::from_qrational(&b) + S::from_qrational(&a).invert_q();
        assert_eq!(lhs, rhs);
    }
}
