//! Four-dimensional q-Euclidean space, coordinates `(x1, x2, x3, x4)`.

use super::{Build, RepOperator, RightRule, Tables};
use crate::error::Result;
use crate::ncalg::{Ordering, SpaceDef};
use crate::qcalc::QuadForm;
use crate::qscalar::qfact;
use crate::scalar::{lambda, Scalar};

pub(crate) fn tables<S: Scalar>(space: &SpaceDef) -> Result<Tables<S>> {
    let b = Build::new(space);
    let fwd = Ordering::Forward;
    let rev = Ordering::Reversed;
    // f(q^{s_1} x1, ..., q^{s_4} x4)
    let scaled = |s: [i64; 4]| {
        RepOperator::compose(s.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| b.sc(i, e)))
    };

    let l1p = RepOperator::sum([
        RepOperator::compose([b.mul_x(3), b.d(2, 2), scaled([1, -1, -1, 0])]),
        RepOperator::compose([b.mul_x(1), b.d(0, 2), scaled([-1, 0, 0, 0])]).times(b.k("-1")),
    ]);
    let l2p = RepOperator::sum([
        RepOperator::compose([b.mul_x(3), b.d(1, 2), scaled([1, -1, -1, 0])]),
        RepOperator::compose([b.mul_x(2), b.d(0, 2), scaled([-1, 0, 0, 0])]).times(b.k("-1")),
    ]);
    let l1m = RepOperator::sum([
        RepOperator::compose([b.mul_x(2), b.d(3, -2), scaled([1, -1, 1, 0])]),
        RepOperator::compose([b.mul_x(0), b.d(1, -2), scaled([1, 0, 0, 0])]).times(b.k("-1")),
    ])
    .times(b.k("q"));
    let l2m = RepOperator::sum([
        RepOperator::compose([b.mul_x(1), b.d(3, -2), scaled([1, 1, -1, 0])]),
        RepOperator::compose([b.mul_x(0), b.d(2, -2), scaled([1, 0, 0, 0])]).times(b.k("-1")),
    ])
    .times(b.k("q"));

    let h1 = RepOperator::sum([
        RepOperator::compose([b.d(3, -2), scaled([0, -1, -1, 0])]),
        RepOperator::compose([b.mul_x(0), b.d(1, -2), b.d(2, -2)]).times(b.k("lambda")),
    ])
    .times(b.k("q^-1"));
    let h2 = RepOperator::compose([b.d(2, -2), scaled([-1, 0, 0, 0])]);
    let h3 = RepOperator::compose([b.d(1, -2), scaled([-1, 0, 0, 0])]);
    let h4 = b.d(0, -2).times(b.k("q"));

    let d4 = RepOperator::sum([
        RepOperator::compose([b.d(0, 2), scaled([0, 1, 1, 0])]),
        RepOperator::compose([b.mul_x(3), b.d(1, 2), b.d(2, 2)]).times(b.k("-lambda")),
    ])
    .times(b.k("q"));
    let d3 = RepOperator::compose([b.d(1, 2), scaled([0, 0, 0, 1])]);
    let d2 = RepOperator::compose([b.d(2, 2), scaled([0, 0, 0, 1])]);
    let d1 = b.d(3, 2).times(b.k("q^-1"));

    let left = vec![
        ("L1p", fwd, l1p),
        ("L2p", fwd, l2p),
        ("L1m", fwd, l1m),
        ("L2m", fwd, l2m),
        ("K1", fwd, scaled([-1, 1, -1, 1])),
        ("K2", fwd, scaled([-1, -1, 1, 1])),
        ("K1i", fwd, scaled([1, -1, 1, -1])),
        ("K2i", fwd, scaled([1, 1, -1, -1])),
        ("Kpp", fwd, scaled([-1, 0, 0, 1])),
        ("Kpm", fwd, scaled([0, 1, -1, 0])),
        ("Kmp", fwd, scaled([0, -1, 1, 0])),
        ("Kmm", fwd, scaled([1, 0, 0, -1])),
        ("Lh", fwd, b.sc_all(1)),
        ("Lhi", fwd, b.sc_all(-1)),
        ("h1", fwd, h1),
        ("h2", fwd, h2),
        ("h3", fwd, h3),
        ("h4", fwd, h4),
        ("d1", rev, d1),
        ("d2", rev, d2),
        ("d3", rev, d3),
        ("d4", rev, d4),
    ];

    let tr = |target: &'static str, factor: &str| RightRule::Translate { target, factor: b.k(factor) };
    let diag = |target: &'static str| RightRule::Diagonal { targets: vec![target], factor: S::one() };
    let right = vec![
        ("d1", tr("h4", "-q^-4")),
        ("d2", tr("h3", "-q^-4")),
        ("d3", tr("h2", "-q^-4")),
        ("d4", tr("h1", "-q^-4")),
        ("h1", tr("d4", "-q^4")),
        ("h2", tr("d3", "-q^4")),
        ("h3", tr("d2", "-q^4")),
        ("h4", tr("d1", "-q^4")),
        ("L1p", tr("L1m", "q^-3")),
        ("L2p", tr("L2m", "q^-3")),
        ("L1m", tr("L1p", "q^3")),
        ("L2m", tr("L2p", "q^3")),
        ("K1", diag("K1i")),
        ("K2", diag("K2i")),
        ("K1i", diag("K1")),
        ("K2i", diag("K2")),
        ("Kpp", diag("Kmm")),
        ("Kmm", diag("Kpp")),
        ("Kpm", diag("Kmp")),
        ("Kmp", diag("Kpm")),
        ("Lh", diag("Lhi")),
        ("Lhi", diag("Lh")),
    ];

    // sum_i (±λ)^i (x2 x3)^i / [[i]]_{q^{∓2}}! q^{∓(n2+n3)(n1+n4+i)} (D4 D1)^i
    let x23 = b.x::<S>(1).mul(&b.x(2));
    let u = move |sign: i64| {
        let x23 = x23.clone();
        RepOperator::series(move |i| {
            let c = (S::from_qrational(&lambda()) * S::from_i64(sign)).powi(i as i64)
                * qfact::<S>(i, -2 * sign).expect("nonzero base").inv().expect("nonzero factorial");
            let mut w = QuadForm::default();
            for a in [1, 2] {
                for bb in [0, 3] {
                    w = w.plus(&QuadForm::quad(a, bb, -sign));
                }
                w = w.plus(&QuadForm::lin(a, -sign * i as i64));
            }
            let mut ops = vec![RepOperator::Scalar(c), RepOperator::Mul(x23.pow(i)), RepOperator::Weight(w)];
            for _ in 0..i {
                ops.push(RepOperator::Jackson { coord: 3, a: -2 * sign });
                ops.push(RepOperator::Jackson { coord: 0, a: -2 * sign });
            }
            RepOperator::Compose(ops)
        })
    };

    Ok(Tables {
        left,
        right,
        swap: vec![3, 2, 1, 0],
        to_forward: u(1),
        to_reversed: u(-1),
    })
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::super::{Direction, Reps};
    use crate::ncalg::Ordering;
    use crate::poly::{CommPolynomial, Mono};
    use crate::scalar::QRational;

    const ALL: [&str; 22] = [
        "L1p", "L2p", "L1m", "L2m", "K1", "K2", "K1i", "K2i", "Kpp", "Kpm", "Kmp", "Kmm", "Lh", "Lhi", "h1", "h2",
        "h3", "h4", "d1", "d2", "d3", "d4",
    ];

    fn reps() -> Reps<QRational> {
        Reps::new(space("euclid4")).unwrap()
    }

    #[test]
    fn left_forms_match_oracle_in_both_orderings() {
        let r = reps();
        let mut bad = Vec::new();
        for id in ALL {
            for o in [Ordering::Forward, Ordering::Reversed] {
                bad.extend(left_mismatches(&r, id, o, 3).into_iter().take(2));
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn right_forms_match_oracle() {
        let r = reps();
        let mut bad = Vec::new();
        for id in ALL {
            for o in [Ordering::Forward, Ordering::Reversed] {
                bad.extend(right_mismatches(&r, id, o, 3).into_iter().take(2));
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn u_hat_round_trip() {
        let r = reps();
        let c = r.space().coords().clone();
        for m in Mono::up_to_degree(4, 4) {
            let f = CommPolynomial::term(c.clone(), m, QRational::one());
            let back = r.u_hat(Direction::Inverse, &r.u_hat(Direction::Forward, &f).unwrap()).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn hatted_four_on_x1() {
        let r = reps();
        let sp = r.space().clone();
        let f = CommPolynomial::parse(sp.coords().clone(), "x1").unwrap();
        let g = r.rep_left(None, sp.gen("h4").unwrap(), &f, Ordering::Forward).unwrap();
        assert_eq!(g, CommPolynomial::parse(sp.coords().clone(), "(q)").unwrap());
    }
}
