//! Dense univariate polynomials in `q` with integer coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, coefficients stored in ascending powers of `q`.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial
/// is the empty vector and structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^deg`
    pub fn monomial(c: BigInt, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Largest `k` with `q^k` dividing `self` (0 for the zero polynomial).
    pub fn q_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `q^k`; the caller guarantees `k <= q_valuation()`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(k <= self.q_valuation() || self.is_zero());
        ZPoly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly { coeffs }
    }

    /// Coefficients in reverse order: `q^deg * p(1/q)`.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        ZPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(short.coeffs.iter()) {
            *c += s;
        }
        ZPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, BigInt::zero());
        for (c, s) in coeffs.iter_mut().zip(other.coeffs.iter()) {
            *c -= s;
        }
        ZPoly::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        ZPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return ZPoly::zero();
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_scalar(&self, c: &BigInt) -> Self {
        ZPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero());
                    x / c
                })
                .collect(),
        }
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        if c.is_one() {
            self.clone()
        } else {
            self.div_scalar(&c)
        }
    }

    /// Pseudo-remainder of `self` by `divisor`.
    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree();
        let lc = divisor.leading().expect("division by zero polynomial").clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let lead = r.last().unwrap().clone();
            let shift = r.len() - 1 - dd;
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                r[shift + i] -= &lead * d;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        ZPoly::from_coeffs(r)
    }

    /// Exact quotient `self / divisor`; panics when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if divisor.is_one() {
            return self.clone();
        }
        if self.is_zero() {
            return ZPoly::zero();
        }
        if divisor.is_constant() {
            return self.div_scalar(&divisor.coeffs[0]);
        }
        let dd = divisor.degree();
        assert!(self.degree() >= dd, "inexact polynomial division");
        let lc = divisor.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(lc);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (i, d) in divisor.coeffs.iter().enumerate() {
                r[k + i] -= &qk * d;
            }
            quot[k] = qk;
        }
        assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        ZPoly::from_coeffs(quot)
    }

    /// Greatest common divisor in Z[q], normalized to a positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone().normalize_sign();
        }
        if other.is_zero() {
            return self.clone().normalize_sign();
        }
        let cg = self.content().gcd(&other.content());
        if self.is_constant() || other.is_constant() {
            return ZPoly::constant(cg);
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
            if !b.is_zero() && b.is_constant() {
                return ZPoly::constant(cg);
            }
        }
        a.primitive_part().scale(&cg)
    }

    fn normalize_sign(self) -> Self {
        if self.leading().is_some_and(|l| l.is_negative()) {
            self.neg()
        } else {
            self
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of the leading coefficient.
    pub fn leading_sign(&self) -> Ordering {
        match self.leading() {
            None => Ordering::Equal,
            Some(l) if l.is_negative() => Ordering::Less,
            Some(_) => Ordering::Greater,
        }
    }

    /// Renders with nonnegative powers in ascending order, e.g. `1-2*q+q^3`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => out.push_str(&mag.to_string()),
                (_, true) => {}
                (_, false) => {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
            }
            match k {
                0 => {}
                1 => out.push('q'),
                _ => {
                    out.push_str("q^");
                    out.push_str(&k.to_string());
                }
            }
        }
        out
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> ZPoly {
        ZPoly::from_i64s(cs)
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[1, 1]); // 1+q
        let b = p(&[1, 0, 1]); // 1+q^2
        let c = p(&[-1, 1]); // q-1
        let g = a.mul(&b).gcd(&a.mul(&c));
        assert_eq!(g, a);
        assert_eq!(p(&[2, 2]).gcd(&p(&[4, 4])), p(&[2, 2]));
        assert_eq!(p(&[3]).gcd(&p(&[6, 3])), p(&[3]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 1]);
        let b = p(&[1, 0, 1]);
        assert_eq!(a.mul(&b).div_exact(&b), a);
    }

    #[test]
    fn rendering() {
        assert_eq!(p(&[1, 0, 1]).render(), "1+q^2");
        assert_eq!(p(&[0, -1]).render(), "-q");
        assert_eq!(p(&[-1, 2, 0, -3]).render(), "-1+2*q-3*q^3");
    }
}
