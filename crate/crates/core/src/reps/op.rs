//! Operator pipelines built from the primitive actions of `qcalc`.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::poly::{CommPolynomial, Coords, Mono};
use crate::qcalc::{binom, jackson_d_idx, k_compositions, scale_idx, weight_factor, QuadForm};
use crate::scalar::Scalar;

/// Base of one block of a generalized derivative acting on `x`.
#[derive(Clone, Debug)]
pub enum Base<S: Scalar> {
    /// A scalar `a`.
    Const(S),
    /// The ratio `c * y / x` for a polynomial `y` free of `x`.
    Ratio { c: S, y: CommPolynomial<S> },
}

pub type Term<S> = Arc<dyn Fn(u32) -> RepOperator<S> + Send + Sync>;

/// A linear operator on commutative polynomials.
#[derive(Clone)]
pub enum RepOperator<S: Scalar> {
    Id,
    Scalar(S),
    /// Multiplication by a fixed polynomial over the current coordinates.
    Mul(CommPolynomial<S>),
    /// `D_{q^a}` in coordinate `coord`.
    Jackson { coord: usize, a: i64 },
    /// `f(.., q^s x, ..)`.
    Scale { coord: usize, s: i64 },
    /// `q^{w(n)}` on each monomial.
    Weight(QuadForm),
    /// `D^{(k..)}_{a..}` in coordinate `coord`.
    GenD { coord: usize, orders: Vec<u32>, bases: Vec<Base<S>> },
    /// Replaces coordinate `i` by `images[i]`; may change the coordinate list.
    Substitute(Vec<CommPolynomial<S>>),
    /// Applied right to left, like operator composition.
    Compose(Vec<RepOperator<S>>),
    Sum(Vec<RepOperator<S>>),
    /// `sum_{k >= 0} term(k)`, cut at the total degree of the operand.
    Series(Term<S>),
    /// `P o inner o P^-1` where `P` permutes coordinates and optionally
    /// inverts `q`.
    Conj { perm: Vec<usize>, invert_q: bool, inner: Box<RepOperator<S>> },
}

impl<S: Scalar> fmt::Debug for RepOperator<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepOperator::Id => write!(f, "Id"),
            RepOperator::Scalar(c) => write!(f, "({c})"),
            RepOperator::Mul(p) => write!(f, "mul[{p}]"),
            RepOperator::Jackson { coord, a } => write!(f, "D{coord}_q^{a}"),
            RepOperator::Scale { coord, s } => write!(f, "scale{coord}(q^{s})"),
            RepOperator::Weight(w) => write!(f, "weight{w:?}"),
            RepOperator::GenD { coord, orders, .. } => write!(f, "D{coord}^{orders:?}"),
            RepOperator::Substitute(_) => write!(f, "subst"),
            RepOperator::Compose(v) => f.debug_list().entries(v).finish(),
            RepOperator::Sum(v) => write!(f, "sum{v:?}"),
            RepOperator::Series(_) => write!(f, "series"),
            RepOperator::Conj { perm, invert_q, inner } => write!(f, "conj{perm:?}{invert_q}({inner:?})"),
        }
    }
}

impl<S: Scalar> RepOperator<S> {
    pub fn compose(ops: impl IntoIterator<Item = RepOperator<S>>) -> Self {
        RepOperator::Compose(ops.into_iter().collect())
    }

    pub fn sum(ops: impl IntoIterator<Item = RepOperator<S>>) -> Self {
        RepOperator::Sum(ops.into_iter().collect())
    }

    pub fn series(term: impl Fn(u32) -> RepOperator<S> + Send + Sync + 'static) -> Self {
        RepOperator::Series(Arc::new(term))
    }

    /// `c * self`.
    pub fn times(self, c: S) -> Self {
        RepOperator::Compose(vec![RepOperator::Scalar(c), self])
    }

    /// `self` applied after `inner`.
    pub fn after(self, inner: RepOperator<S>) -> Self {
        RepOperator::Compose(vec![self, inner])
    }

    pub fn apply(&self, f: &CommPolynomial<S>) -> CommPolynomial<S> {
        match self {
            RepOperator::Id => f.clone(),
            RepOperator::Scalar(c) => f.scale(c),
            RepOperator::Mul(p) => p.mul(f),
            RepOperator::Jackson { coord, a } => jackson_d_idx(f, *coord, *a),
            RepOperator::Scale { coord, s } => scale_idx(f, *coord, *s),
            RepOperator::Weight(w) => weight_factor(f, w),
            RepOperator::GenD { coord, orders, bases } => gen_d(f, *coord, orders, bases),
            RepOperator::Substitute(images) => f.substitute(images),
            RepOperator::Compose(ops) => {
                let mut g = f.clone();
                // no early exit on zero: a later substitution may still
                // change the coordinate list
                for op in ops.iter().rev() {
                    g = op.apply(&g);
                }
                g
            }
            RepOperator::Sum(ops) => {
                let mut acc: Option<CommPolynomial<S>> = None;
                for op in ops {
                    let t = op.apply(f);
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a.add(&t),
                    });
                }
                acc.unwrap_or_else(|| CommPolynomial::zero(f.coords().clone()))
            }
            RepOperator::Series(term) => {
                let bound = f.degree();
                let mut acc = term(0).apply(f);
                for k in 1..=bound {
                    acc = acc.add(&term(k).apply(f));
                }
                acc
            }
            RepOperator::Conj { perm, invert_q, inner } => {
                let p = permute(f, perm, *invert_q);
                let g = inner.apply(&p);
                unpermute(&g, perm, *invert_q)
            }
        }
    }
}

/// `P⁻¹ (inner (P f))` for the coordinate permutation `P` of a [`RepOperator::Conj`],
/// with an arbitrary fallible inner map.
pub fn conjugate<S: Scalar>(
    perm: &[usize],
    invert_q: bool,
    f: &CommPolynomial<S>,
    inner: impl FnOnce(&CommPolynomial<S>) -> Result<CommPolynomial<S>>,
) -> Result<CommPolynomial<S>> {
    Ok(unpermute(&inner(&permute(f, perm, invert_q))?, perm, invert_q))
}

fn permute<S: Scalar>(f: &CommPolynomial<S>, perm: &[usize], invert_q: bool) -> CommPolynomial<S> {
    // new exponent at perm[i] comes from old slot i
    f.map_terms(|m, c| {
        let mut e = Mono::zeros(m.0.len());
        for (i, &p) in perm.iter().enumerate() {
            e.0[p] = m.0[i];
        }
        Some((e, if invert_q { c.invert_q() } else { c.clone() }))
    })
}

fn unpermute<S: Scalar>(f: &CommPolynomial<S>, perm: &[usize], invert_q: bool) -> CommPolynomial<S> {
    f.map_terms(|m, c| {
        let mut e = Mono::zeros(m.0.len());
        for (i, &p) in perm.iter().enumerate() {
            e.0[i] = m.0[p];
        }
        Some((e, if invert_q { c.invert_q() } else { c.clone() }))
    })
}

/// `D^{(k..)}_{b..} x^n = (K_n) x^{n-K}`. A ratio base `c y/x` turns each
/// factor `b^J x^{n-K}` into `c^J y^J x^{n-K-J}`.
fn gen_d<S: Scalar>(f: &CommPolynomial<S>, coord: usize, orders: &[u32], bases: &[Base<S>]) -> CommPolynomial<S> {
    let total: u32 = orders.iter().sum();
    if bases.iter().all(|b| matches!(b, Base::Const(_))) {
        let consts: Vec<S> = bases
            .iter()
            .map(|b| match b {
                Base::Const(c) => c.clone(),
                Base::Ratio { .. } => unreachable!(),
            })
            .collect();
        return f.map_terms(|m, c| {
            let n = m.0[coord];
            if n < total {
                return None;
            }
            let mut m2 = m.clone();
            m2.0[coord] -= total;
            let k = k_compositions(n, orders, &consts);
            if k.is_zero() {
                None
            } else {
                Some((m2, c.clone() * k))
            }
        });
    }
    let coords: Coords = f.coords().clone();
    let mut out = CommPolynomial::zero(coords.clone());
    for (m, c) in f.terms() {
        let n = m.0[coord];
        if n < total {
            continue;
        }
        let budget = n - total;
        let mut js = vec![0u32; orders.len()];
        'tuples: loop {
            let used: u32 = js.iter().sum();
            if used <= budget && js.iter().zip(orders).all(|(&j, &k)| k > 0 || j == 0) {
                let mut count = 1i64;
                for (&j, &k) in js.iter().zip(orders) {
                    if k > 0 {
                        count *= binom(j + k - 1, k - 1);
                    }
                }
                let mut rest = m.clone();
                rest.0[coord] = budget;
                let mut t = CommPolynomial::term(coords.clone(), rest, c.clone() * S::from_i64(count));
                for (b, &j) in bases.iter().zip(&js) {
                    if j == 0 {
                        continue;
                    }
                    match b {
                        Base::Const(a) => t = t.scale(&a.powi(j as i64)),
                        Base::Ratio { c: a, y } => {
                            t = t.mul(&y.pow(j)).scale(&a.powi(j as i64));
                        }
                    }
                }
                // each ratio factor y/x removes one power of x
                let drop: u32 = bases
                    .iter()
                    .zip(&js)
                    .filter(|(b, _)| matches!(b, Base::Ratio { .. }))
                    .map(|(_, &j)| j)
                    .sum();
                debug_assert!(drop <= budget);
                t = t.map_terms(|mm, cc| {
                    let mut mm = mm.clone();
                    mm.0[coord] -= drop;
                    Some((mm, cc.clone()))
                });
                out.add_scaled(&t, &S::one());
            }
            // next tuple in the box [0, budget]^l
            let mut i = 0;
            loop {
                if i == js.len() {
                    break 'tuples;
                }
                if js[i] < budget {
                    js[i] += 1;
                    break;
                }
                js[i] = 0;
                i += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coords;
    use crate::scalar::QRational;

    type P = CommPolynomial<QRational>;

    #[test]
    fn ratio_base_with_y_equal_x_matches_constant_base() {
        let c = coords(&["x", "y"]);
        let f = P::parse(c.clone(), "x^5 y + (q)*x^3").unwrap();
        let a = QRational::q_pow(2);
        let x = P::var(c.clone(), "x").unwrap();
        let konst = RepOperator::GenD {
            coord: 0,
            orders: vec![1, 2],
            bases: vec![Base::Const(a.clone()), Base::Const(QRational::one())],
        };
        let ratio = RepOperator::GenD {
            coord: 0,
            orders: vec![1, 2],
            bases: vec![
                Base::Ratio { c: a, y: x.clone() },
                Base::Ratio { c: QRational::one(), y: x },
            ],
        };
        assert_eq!(konst.apply(&f), ratio.apply(&f));
    }

    #[test]
    fn conj_swaps_coordinates() {
        let c = coords(&["a", "b"]);
        let f = P::parse(c.clone(), "a^2 b").unwrap();
        // d/da (Jackson, q^2) conjugated by the swap acts on b
        let op = RepOperator::Conj {
            perm: vec![1, 0],
            invert_q: false,
            inner: Box::new(RepOperator::Jackson { coord: 0, a: 2 }),
        };
        assert_eq!(op.apply(&f), P::parse(c, "a^2").unwrap());
    }

    #[test]
    fn series_is_cut_at_operand_degree() {
        let c = coords(&["x"]);
        let f = P::parse(c, "x^3").unwrap();
        // sum_k D^k / k! with classical D: exp(d/dx) x^3 = (x+1)^3
        let op = RepOperator::series(|k| RepOperator::GenD {
            coord: 0,
            orders: vec![k],
            bases: vec![Base::Const(QRational::one())],
        });
        assert_eq!(op.apply(&f).render(), "1 + (3)*x + (3)*x^2 + x^3");
    }
}
