//! Exact rational functions in the deformation parameter `q`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::zpoly::ZPoly;
use crate::error::{Error, Result};

/// A rational function `q^shift * num(q) / den(q)` over the integers.
///
/// Canonical form: `num` and `den` are coprime in Z[q], neither is divisible
/// by `q`, and `den` has a positive leading coefficient. The zero value has
/// `shift == 0`, `num == 0`, `den == 1`. Two equal values therefore share
/// the same representation, so derived equality is value equality.
#[derive(Clone, PartialEq, Eq)]
pub struct QRational {
    shift: i64,
    num: ZPoly,
    den: ZPoly,
}

impl Hash for QRational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.shift.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl QRational {
    pub fn zero() -> Self {
        QRational {
            shift: 0,
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        QRational {
            shift: 0,
            num: ZPoly::constant(n),
            den: ZPoly::one(),
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_parts(0, ZPoly::from_i64s(&[n]), ZPoly::from_i64s(&[d]))
    }

    pub fn from_big_rational(r: &BigRational) -> Self {
        Self::from_parts(
            0,
            ZPoly::constant(r.numer().clone()),
            ZPoly::constant(r.denom().clone()),
        )
    }

    /// `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        QRational {
            shift: e,
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// Laurent polynomial `sum c_k q^(low + k)`.
    pub fn laurent(low: i64, coeffs: &[i64]) -> Self {
        Self::from_parts(low, ZPoly::from_i64s(coeffs), ZPoly::one())
    }

    /// Builds and canonicalizes `q^shift * num / den`.
    pub fn from_parts(shift: i64, num: ZPoly, den: ZPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let vn = num.q_valuation();
        let vd = den.q_valuation();
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        let shift = shift + vn as i64 - vd as i64;
        if !den.is_one() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
            if den.leading().is_some_and(|l| l.is_negative()) {
                num = num.neg();
                den = den.neg();
            }
        }
        QRational { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial in `q`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// True when the value is `c * q^k` for a rational `c`.
    pub fn is_monomial(&self) -> bool {
        self.num.term_count() <= 1 && self.den.is_constant()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numer(&self) -> &ZPoly {
        &self.num
    }

    pub fn denom(&self) -> &ZPoly {
        &self.den
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.leading().is_some_and(|l| l.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        Some(QRational {
            shift: -self.shift,
            num,
            den,
        })
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self
                .inv()
                .expect("negative power of zero")
                .pow(-e);
        }
        let mut base = self.clone();
        let mut acc = QRational::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `q -> 1/q`.
    pub fn invert_q(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let dn = self.num.degree() as i64;
        let dd = self.den.degree() as i64;
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        if den.leading().is_some_and(|l| l.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        QRational {
            shift: -self.shift - dn + dd,
            num,
            den,
        }
    }

    /// Evaluates at a rational point; `None` when the point is a pole.
    pub fn eval(&self, q0: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let d = self.den.eval(q0);
        if d.is_zero() {
            return None;
        }
        let n = self.num.eval(q0);
        let p = if self.shift >= 0 {
            num_traits::pow(q0.clone(), self.shift as usize)
        } else {
            if q0.is_zero() {
                return None;
            }
            num_traits::pow(q0.recip(), (-self.shift) as usize)
        };
        Some(n / d * p)
    }

    /// Numerator and denominator as polynomials with nonnegative powers.
    pub fn to_fraction(&self) -> (ZPoly, ZPoly) {
        if self.shift >= 0 {
            (self.num.shift_up(self.shift as usize), self.den.clone())
        } else {
            (self.num.clone(), self.den.shift_up((-self.shift) as usize))
        }
    }

    /// True when the value is a nonnegative integer constant; returns it.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.shift == 0 && self.num.is_constant() && self.den.is_one() {
            return Some(self.num.constant_term());
        }
        None
    }

    fn add_impl(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.shift.min(other.shift);
        let a = self.num.shift_up((self.shift - low) as usize);
        let b = other.num.shift_up((other.shift - low) as usize);
        if self.den == other.den {
            return QRational::from_parts(low, a.add(&b), self.den.clone());
        }
        if self.den.is_one() {
            return QRational::from_parts(low, a.mul(&other.den).add(&b), other.den.clone());
        }
        if other.den.is_one() {
            return QRational::from_parts(low, a.add(&b.mul(&self.den)), self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        let da = self.den.div_exact(&g);
        let db = other.den.div_exact(&g);
        let num = a.mul(&db).add(&b.mul(&da));
        QRational::from_parts(low, num, da.mul(&other.den))
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QRational::zero();
        }
        let shift = self.shift + other.shift;
        if self.den.is_one() && other.den.is_one() {
            return QRational {
                shift,
                num: self.num.mul(&other.num),
                den: ZPoly::one(),
            };
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1);
        let d2 = other.den.div_exact(&g1);
        let n2 = other.num.div_exact(&g2);
        let d1 = self.den.div_exact(&g2);
        let mut num = n1.mul(&n2);
        let mut den = d1.mul(&d2);
        if den.leading().is_some_and(|l| l.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        QRational { shift, num, den }
    }

    fn neg_impl(&self) -> Self {
        QRational {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    /// Textual form: fraction of integer polynomials in `q` with caret powers.
    pub fn render(&self) -> String {
        let (n, d) = self.to_fraction();
        if d.is_one() {
            return n.render();
        }
        let wrap = |p: &ZPoly| {
            if p.term_count() > 1 {
                format!("({})", p.render())
            } else {
                p.render()
            }
        };
        // `1/2*q` would read back as `q/2`
        let den = if d.term_count() == 1 && !d.is_constant() && !d.leading().is_some_and(|l| l.is_one()) {
            format!("({})", d.render())
        } else {
            wrap(&d)
        };
        format!("{}/{den}", wrap(&n))
    }
}

impl Default for QRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRational({})", self.render())
    }
}

impl FromStr for QRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_qrational(s)
    }
}

impl From<i64> for QRational {
    fn from(n: i64) -> Self {
        QRational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<'a> $tr<&'a QRational> for &'a QRational {
            type Output = QRational;
            fn $m(self, rhs: &'a QRational) -> QRational {
                self.$imp(rhs)
            }
        }
        impl $tr<QRational> for QRational {
            type Output = QRational;
            fn $m(self, rhs: QRational) -> QRational {
                (&self).$imp(&rhs)
            }
        }
        impl<'a> $tr<&'a QRational> for QRational {
            type Output = QRational;
            fn $m(self, rhs: &'a QRational) -> QRational {
                (&self).$imp(rhs)
            }
        }
    };
}

impl QRational {
    fn sub_impl(&self, other: &Self) -> Self {
        self.add_impl(&other.neg_impl())
    }

    fn div_impl(&self, other: &Self) -> Self {
        self.mul_impl(&other.inv().expect("division by zero QRational"))
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        self.neg_impl()
    }
}

impl Neg for &QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        self.neg_impl()
    }
}

impl AddAssign for QRational {
    fn add_assign(&mut self, rhs: QRational) {
        *self = self.add_impl(&rhs);
    }
}

impl SubAssign for QRational {
    fn sub_assign(&mut self, rhs: QRational) {
        *self = self.sub_impl(&rhs);
    }
}

impl MulAssign for QRational {
    fn mul_assign(&mut self, rhs: QRational) {
        *self = self.mul_impl(&rhs);
    }
}

impl Zero for QRational {
    fn zero() -> Self {
        QRational::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for QRational {
    fn one() -> Self {
        QRational::one()
    }
}

/// `lambda = q - 1/q`
pub fn lambda() -> QRational {
    QRational::laurent(-1, &[-1, 0, 1])
}

/// `lambda_+ = q + 1/q`
pub fn lambda_plus() -> QRational {
    QRational::laurent(-1, &[1, 0, 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_denominators_are_parenthesized() {
        let a = QRational::q_pow(-1) / QRational::from_int(-2);
        assert_eq!(a.render(), "-1/(2*q)");
        assert_eq!(a.render().parse::<QRational>().unwrap(), a);
        assert_eq!(QRational::q_pow(-2).render(), "1/q^2");
    }

    #[test]
    fn canonical_forms_agree() {
        // (q^2 - 1) / (q - 1) == 1 + q
        let a = QRational::from_parts(0, ZPoly::from_i64s(&[-1, 0, 1]), ZPoly::from_i64s(&[-1, 1]));
        assert_eq!(a, QRational::laurent(0, &[1, 1]));
        // 2q / 4q^3 == 1/(2 q^2)
        let b = QRational::from_parts(0, ZPoly::from_i64s(&[0, 2]), ZPoly::from_i64s(&[0, 0, 0, 4]));
        assert_eq!(b, QRational::q_pow(-2) / QRational::from_int(2));
        // sign lives in the numerator
        let c = QRational::from_parts(0, ZPoly::from_i64s(&[1]), ZPoly::from_i64s(&[-1, -1]));
        assert_eq!(c.denom(), &ZPoly::from_i64s(&[1, 1]));
    }

    #[test]
    fn lambda_identities() {
        let l = lambda();
        let lp = lambda_plus();
        // lambda * lambda_+ = q^2 - q^-2
        assert_eq!(&l * &lp, QRational::q_pow(2) - QRational::q_pow(-2));
        assert_eq!(l.invert_q(), -l.clone());
        assert_eq!(lp.invert_q(), lp);
    }

    #[test]
    fn invert_q_of_fraction() {
        // 1/(1-q) -> 1/(1-1/q) = q/(q-1)
        let a = QRational::one() / QRational::laurent(0, &[1, -1]);
        let expected = QRational::q() / QRational::laurent(0, &[-1, 1]);
        assert_eq!(a.invert_q(), expected);
        assert_eq!(a.invert_q().invert_q(), a);
    }

    #[test]
    fn render_forms() {
        assert_eq!((-QRational::q_pow(-1)).render(), "-1/q");
        assert_eq!(QRational::q_pow(2).render(), "q^2");
        let a = QRational::laurent(-1, &[1, 0, 1]);
        assert_eq!(a.render(), "(1+q^2)/q");
        assert_eq!(QRational::from_ratio(3, -6).render(), "-1/2");
    }

    #[test]
    fn eval_and_poles() {
        let one = BigRational::one();
        assert_eq!(lambda().eval(&one), Some(BigRational::zero()));
        let pole = QRational::one() / QRational::laurent(0, &[1, -1]);
        assert_eq!(pole.eval(&one), None);
    }
}
