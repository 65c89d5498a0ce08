//! Three-dimensional q-Euclidean space, coordinates `(x+, x3, x-)`.

use super::{Build, RepOperator, RightRule, Tables};
use crate::error::Result;
use crate::ncalg::{Ordering, SpaceDef};
use crate::qcalc::QuadForm;
use crate::qscalar::qfact;
use crate::scalar::{lambda, Scalar};

const P: usize = 0;
const T: usize = 1;
const M: usize = 2;

pub(crate) fn tables<S: Scalar>(space: &SpaceDef) -> Result<Tables<S>> {
    let b = Build::new(space);
    let x3 = b.x::<S>(T);
    let fwd = Ordering::Forward;
    let rev = Ordering::Reversed;
    // (D f)(q^-2 x-)
    let after_m = |op: RepOperator<S>| RepOperator::compose([b.sc(M, -2), op]);

    let l_plus = RepOperator::sum([
        RepOperator::compose([b.mul_x(T), after_m(b.d(M, 4))]).times(b.k("-1")),
        RepOperator::compose([b.mul_x(P), after_m(b.d(T, 2))]).times(b.k("-q")),
    ]);
    let l_minus = RepOperator::sum([
        RepOperator::compose([b.mul_x(T), after_m(b.d(P, 4))]),
        RepOperator::compose([b.mul_x(M), after_m(b.d(T, 2))]).times(b.k("q^-1")),
    ]);

    let d_minus = b.d(P, 4).times(b.k("-q^-1"));
    let d_three = RepOperator::compose([b.d(T, 2), b.sc(P, 2)]);
    let d_plus = RepOperator::sum([
        RepOperator::compose([b.d(M, 4), b.sc(T, 2)]).times(b.k("-q")),
        RepOperator::compose([b.mul_x(P), b.d(T, 2), b.d(T, 2)]).times(b.k("-q lambda")),
    ]);

    let h_plus = b.d(M, -4).times(b.k("-q"));
    let h_three = RepOperator::compose([b.d(T, -2), b.sc(M, -2)]);
    let h_minus = RepOperator::sum([
        RepOperator::compose([b.d(P, -4), b.sc(T, -2)]).times(b.k("-q^-1")),
        RepOperator::compose([b.mul_x(M), b.d(T, -2), b.d(T, -2)]).times(b.k("q^-1 lambda")),
    ]);

    // tau^{1/2}: f(q^-2 x+, q^2 x-)
    let tau = |s: i64| RepOperator::compose([b.sc(P, -2 * s), b.sc(M, 2 * s)]);

    let left = vec![
        ("Lp", fwd, l_plus),
        ("Lm", fwd, l_minus),
        ("tp", fwd, tau(1)),
        ("tm", fwd, tau(-1)),
        ("Lh", fwd, b.sc_all(2)),
        ("Lhi", fwd, b.sc_all(-2)),
        ("dm", fwd, d_minus),
        ("d3", fwd, d_three),
        ("dp", fwd, d_plus),
        ("hp", rev, h_plus),
        ("h3", rev, h_three),
        ("hm", rev, h_minus),
    ];

    let tr = |target: &'static str, factor: &str| RightRule::Translate { target, factor: b.k(factor) };
    let diag = |target: &'static str| RightRule::Diagonal { targets: vec![target], factor: S::one() };
    let right = vec![
        ("Lp", tr("Lm", "1")),
        ("Lm", tr("Lp", "1")),
        ("dp", tr("hm", "-q^-6")),
        ("d3", tr("h3", "-q^-6")),
        ("dm", tr("hp", "-q^-6")),
        ("hp", tr("dm", "-q^6")),
        ("h3", tr("d3", "-q^6")),
        ("hm", tr("dp", "-q^6")),
        ("tp", diag("tm")),
        ("tm", diag("tp")),
        ("Lh", diag("Lhi")),
        ("Lhi", diag("Lh")),
    ];

    // sum_i (±λ)^i x3^{2i} / [[i]]_{q^{±4}}! q^{±2 n3 (n+ + n- + i)} (D+ D-)^i
    let u = |sign: i64| {
        let x3 = x3.clone();
        RepOperator::series(move |i| {
            let c = (S::from_qrational(&lambda()) * S::from_i64(sign)).powi(i as i64)
                * qfact::<S>(i, 4 * sign).expect("nonzero base").inv().expect("nonzero factorial");
            let w = QuadForm::quad(T, P, 2 * sign)
                .plus(&QuadForm::quad(T, M, 2 * sign))
                .plus(&QuadForm::lin(T, 2 * sign * i as i64));
            let mut ops = vec![RepOperator::Scalar(c), RepOperator::Mul(x3.pow(2 * i)), RepOperator::Weight(w)];
            for _ in 0..i {
                ops.push(RepOperator::Jackson { coord: P, a: 4 * sign });
                ops.push(RepOperator::Jackson { coord: M, a: 4 * sign });
            }
            RepOperator::Compose(ops)
        })
    };

    Ok(Tables {
        left,
        right,
        swap: vec![M, T, P],
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

    fn reps() -> Reps<QRational> {
        Reps::new(space("euclid3")).unwrap()
    }

    #[test]
    fn left_forms_match_oracle_in_both_orderings() {
        let r = reps();
        let mut bad = Vec::new();
        for id in ["Lp", "Lm", "tp", "tm", "Lh", "Lhi", "dp", "d3", "dm", "hp", "h3", "hm"] {
            for o in [Ordering::Forward, Ordering::Reversed] {
                bad.extend(left_mismatches(&r, id, o, 4).into_iter().take(2));
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn right_forms_match_oracle() {
        let r = reps();
        let mut bad = Vec::new();
        for id in ["Lp", "Lm", "tp", "tm", "Lh", "Lhi", "dp", "d3", "dm", "hp", "h3", "hm"] {
            for o in [Ordering::Forward, Ordering::Reversed] {
                bad.extend(right_mismatches(&r, id, o, 3).into_iter().take(2));
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn u_hat_examples() {
        let r = reps();
        let c = r.space().coords().clone();
        let f = CommPolynomial::parse(c.clone(), "x+ x-").unwrap();
        let g = r.u_hat(Direction::Inverse, &f).unwrap();
        assert_eq!(g, CommPolynomial::parse(c.clone(), "x+ x- + (q - q^-1)*x3^2").unwrap());
        for m in Mono::up_to_degree(3, 5) {
            let f = CommPolynomial::term(c.clone(), m, QRational::one());
            let back = r.u_hat(Direction::Forward, &r.u_hat(Direction::Inverse, &f).unwrap()).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn printed_values() {
        let r = reps();
        let sp = r.space().clone();
        let c = sp.coords().clone();
        let p = |s: &str| CommPolynomial::parse(c.clone(), s).unwrap();
        let on = |g: &str, f: &str| r.rep_left(None, sp.gen(g).unwrap(), &p(f), Ordering::Forward).unwrap();
        assert_eq!(on("dm", "x+"), p("(-q^-1)"));
        assert_eq!(on("dp", "x+ x3"), p("0"));
        assert_eq!(on("d3", "x+ x3"), p("(q^2)*x+"));
    }
}
