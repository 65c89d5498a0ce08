//! q-numbers, q-factorials and q-binomials.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{QRational, Scalar};

/// `[[c]]_{q^a} = (1 - q^(a c)) / (1 - q^a)`.
pub fn qnum<S: Scalar>(c: i64, a: i64) -> Result<S> {
    if a == 0 {
        return Err(Error::InvalidParameter("q-number base exponent a = 0".into()));
    }
    Ok(qnum_unchecked(c, a))
}

pub(crate) fn qnum_unchecked<S: Scalar>(c: i64, a: i64) -> S {
    let mut acc = S::zero();
    if c >= 0 {
        for i in 0..c {
            acc = acc + S::q_pow(a * i);
        }
    } else {
        for i in c..0 {
            acc = acc - S::q_pow(a * i);
        }
    }
    acc
}

/// `[[m]]_{q^a}! = [[1]] [[2]] ... [[m]]`.
pub fn qfact<S: Scalar>(m: u32, a: i64) -> Result<S> {
    let mut acc = S::one();
    for k in 1..=m as i64 {
        acc = acc * qnum::<S>(k, a)?;
    }
    Ok(acc)
}

/// `[[alpha]] [[alpha-1]] ... [[alpha-m+1]] / [[m]]!` for integer `alpha`.
pub fn qbinom<S: Scalar>(alpha: i64, m: u32, a: i64) -> Result<S> {
    let mut num = S::one();
    for i in 0..m as i64 {
        num = num * qnum::<S>(alpha - i, a)?;
    }
    Ok(num.div(&qfact::<S>(m, a)?))
}

/// Value of `r` at the rational point `q0`.
pub fn eval_at(r: &QRational, q0: &BigRational) -> Result<BigRational> {
    r.eval(q0).ok_or_else(|| Error::Pole(q0.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn qr(s: &str) -> QRational {
        s.parse().unwrap()
    }

    #[test]
    fn small_values() {
        assert!(qnum::<QRational>(0, 1).unwrap().is_zero());
        assert_eq!(qnum::<QRational>(2, 1).unwrap(), qr("1+q"));
        assert_eq!(qnum::<QRational>(3, 2).unwrap(), qr("1+q^2+q^4"));
        assert_eq!(qnum::<QRational>(-1, 2).unwrap(), qr("-q^-2"));
        assert!(qnum::<QRational>(3, 0).is_err());
        assert!(qfact::<QRational>(0, 4).unwrap().is_one());
        assert!(qfact::<QRational>(1, 2).unwrap().is_one());
        assert_eq!(qfact::<QRational>(2, 1).unwrap(), qr("1+q"));
        assert!(qbinom::<QRational>(7, 0, 3).unwrap().is_one());
        assert_eq!(qbinom::<QRational>(2, 1, 1).unwrap(), qr("1+q"));
    }

    #[test]
    fn negative_qnum_matches_quotient() {
        for c in -4..5 {
            for a in [-3, -1, 1, 2] {
                let direct = (QRational::one() - QRational::q_pow(a * c))
                    / (QRational::one() - QRational::q_pow(a));
                assert_eq!(qnum::<QRational>(c, a).unwrap(), direct);
            }
        }
    }

    #[test]
    fn qbinom_four_two() {
        // termwise expansion of [[4]][[3]]/[[2]]: (1+q+q^2+q^3)(1+q+q^2)/(1+q)
        let v = qbinom::<QRational>(4, 2, 1).unwrap();
        assert_eq!(v, qr("1+q+2q^2+q^3+q^4"));
    }

    #[test]
    fn pole_reported() {
        let one = BigRational::one();
        assert_eq!(eval_at(&qnum(3, 1).unwrap(), &one).unwrap(), BigRational::from_integer(3.into()));
        assert!(matches!(eval_at(&qr("1/(1-q)"), &one), Err(Error::Pole(_))));
        assert!(eval_at(&crate::lambda(), &one).unwrap().is_zero());
    }
}
