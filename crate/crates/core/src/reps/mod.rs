//! Closed-form representations of the generators on commutative
//! polynomials, the ordering conversion Û and the right representations.

mod euclid3;
mod euclid4;
pub mod minkowski;
pub mod expr;
pub mod op;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncalg::{Calculus, GenId, GenKind, Ordering, RewriteSystem, Side, SpaceDef};
use crate::poly::{CommPolynomial, Coords};
use crate::scalar::{parse_qrational, Scalar};

pub use minkowski::{mink_coeffs, MinkCoeff};
pub use expr::{DFactor, OpExpr};
pub use op::{conjugate, Base, RepOperator};

/// How a right action is obtained from a left one.
#[derive(Clone)]
pub(crate) enum RightRule<S: Scalar> {
    /// `f ◁ h = P (c · h' ▷ P f)`.
    Translate { target: &'static str, factor: S },
    /// `f ◁ h = c · h_1 ▷ (h_2 ▷ ... f)`.
    Diagonal { targets: Vec<&'static str>, factor: S },
}

/// Per-space data assembled by the space modules.
pub(crate) struct Tables<S: Scalar> {
    /// Generator id, native ordering, pipeline.
    pub left: Vec<(&'static str, Ordering, RepOperator<S>)>,
    pub right: Vec<(&'static str, RightRule<S>)>,
    /// Coordinate permutation used by the translation rules.
    pub swap: Vec<usize>,
    /// Û⁻¹: reversed-ordering basis to forward-ordering basis.
    pub to_forward: RepOperator<S>,
    /// Û: forward-ordering basis to reversed-ordering basis.
    pub to_reversed: RepOperator<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Û: forward basis to reversed basis.
    Forward,
    /// Û⁻¹: reversed basis to forward basis.
    Inverse,
}

/// All closed-form representations of one space.
pub struct Reps<S: Scalar> {
    space: Arc<SpaceDef>,
    left: HashMap<GenId, (Ordering, RepOperator<S>)>,
    right: HashMap<GenId, RightRule<S>>,
    swap: Vec<usize>,
    to_forward: RepOperator<S>,
    to_reversed: RepOperator<S>,
}

impl<S: Scalar> Reps<S> {
    pub fn new(space: Arc<SpaceDef>) -> Result<Self> {
        let t: Tables<S> = match space.name.as_str() {
            "euclid3" => euclid3::tables(&space)?,
            "euclid4" => euclid4::tables(&space)?,
            "minkowski" => minkowski::tables(&space)?,
            other => return Err(Error::NoRepresentation(format!("no closed forms for space {other}"))),
        };
        let mut left = HashMap::new();
        for (id, o, op) in t.left {
            left.insert(space.gen(id)?, (o, op));
        }
        let mut right = HashMap::new();
        for (id, r) in t.right {
            right.insert(space.gen(id)?, r);
        }
        Ok(Reps {
            space,
            left,
            right,
            swap: t.swap,
            to_forward: t.to_forward,
            to_reversed: t.to_reversed,
        })
    }

    pub fn space(&self) -> &Arc<SpaceDef> {
        &self.space
    }

    /// Generators with a left closed form, in declaration order.
    pub fn left_generators(&self) -> Vec<GenId> {
        let mut v: Vec<GenId> = self.left.keys().copied().collect();
        v.sort();
        v
    }

    pub fn right_generators(&self) -> Vec<GenId> {
        let mut v: Vec<GenId> = self.right.keys().copied().collect();
        v.sort();
        v
    }

    /// Coordinate permutation used by the translation rules.
    pub fn swap(&self) -> &[usize] {
        &self.swap
    }

    /// Native ordering of a closed form.
    pub fn native_ordering(&self, g: GenId) -> Option<Ordering> {
        self.left.get(&g).map(|(o, _)| *o)
    }

    /// Basis change `from -> to`: `W_to(convert f) = W_from(f)`.
    pub fn convert(&self, from: Ordering, to: Ordering) -> RepOperator<S> {
        match (from, to) {
            (Ordering::Reversed, Ordering::Forward) => self.to_forward.clone(),
            (Ordering::Forward, Ordering::Reversed) => self.to_reversed.clone(),
            _ => RepOperator::Id,
        }
    }

    /// The left pipeline of `g` for ordering `o`, conjugated by Û when the
    /// closed form lives in the other ordering.
    pub fn left_op(&self, g: GenId, o: Ordering) -> Result<RepOperator<S>> {
        let (native, op) = self.left.get(&g).ok_or_else(|| {
            Error::NoRepresentation(format!("{} has no closed form in {}", self.space.name_of(g), self.space.name))
        })?;
        if *native == o {
            return Ok(op.clone());
        }
        Ok(RepOperator::compose([
            self.convert(*native, o),
            op.clone(),
            self.convert(o, *native),
        ]))
    }

    pub fn right_op(&self, g: GenId, o: Ordering) -> Result<RepOperator<S>> {
        let rule = self.right.get(&g).ok_or_else(|| {
            Error::NoRepresentation(format!("{} has no right representation in {}", self.space.name_of(g), self.space.name))
        })?;
        match rule {
            RightRule::Diagonal { targets, factor } => {
                let mut ops = vec![RepOperator::Scalar(factor.clone())];
                for t in targets {
                    ops.push(self.left_op(self.space.gen(t)?, o)?);
                }
                Ok(RepOperator::Compose(ops))
            }
            RightRule::Translate { target, factor } => {
                let inner = self.left_op(self.space.gen(target)?, o)?.times(factor.clone());
                Ok(RepOperator::Conj {
                    perm: self.swap.clone(),
                    invert_q: false,
                    inner: Box::new(inner),
                })
            }
        }
    }

    fn check(&self, g: GenId, calculus: Option<Calculus>, f: &CommPolynomial<S>) -> Result<()> {
        if f.coords() != self.space.coords() {
            return Err(Error::InvalidParameter(format!(
                "polynomial coordinates {:?} do not match {}",
                f.coords(),
                self.space.name
            )));
        }
        let kind = self.space.generator(g).kind;
        let wrong = matches!(
            (calculus, kind),
            (Some(Calculus::Unhatted), GenKind::Hatted) | (Some(Calculus::Hatted), GenKind::Unhatted)
        );
        if wrong {
            return Err(Error::NoRepresentation(format!(
                "{} is not a generator of the {} calculus",
                self.space.name_of(g),
                calculus.unwrap()
            )));
        }
        Ok(())
    }

    /// `h ▷ f` for `f` written in the basis of ordering `o`.
    pub fn rep_left(&self, calculus: Option<Calculus>, g: GenId, f: &CommPolynomial<S>, o: Ordering) -> Result<CommPolynomial<S>> {
        self.check(g, calculus, f)?;
        Ok(self.left_op(g, o)?.apply(f))
    }

    /// `f ◁ h` for `f` written in the basis of ordering `o`.
    pub fn rep_right(&self, g: GenId, f: &CommPolynomial<S>, o: Ordering) -> Result<CommPolynomial<S>> {
        self.check(g, None, f)?;
        Ok(self.right_op(g, o)?.apply(f))
    }

    pub fn u_hat(&self, dir: Direction, f: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
        self.check_coords(f)?;
        Ok(match dir {
            Direction::Forward => self.to_reversed.apply(f),
            Direction::Inverse => self.to_forward.apply(f),
        })
    }

    fn check_coords(&self, f: &CommPolynomial<S>) -> Result<()> {
        if f.coords() != self.space.coords() {
            return Err(Error::InvalidParameter(format!("polynomial is not over {}", self.space.name)));
        }
        Ok(())
    }

    /// The intertwining identity of Û for `g`. With `n` the native ordering
    /// of the closed form and `Û_n` the conversion into it, compares
    /// `g ▷_n (Û_n f)` (closed form) with `Û_n (g ▷ f)`, where the inner
    /// action is taken from `oracle` in the other ordering. For the forward
    /// ordering this reads `∂ ▷ (Û⁻¹ f) = Û⁻¹ (∂ ▷̃ f)`.
    pub fn intertwine_check(&self, g: GenId, f: &CommPolynomial<S>, oracle: &RewriteSystem<S>) -> Result<IntertwineReport> {
        self.check_coords(f)?;
        let native = self
            .native_ordering(g)
            .ok_or_else(|| Error::NoRepresentation(format!("{} has no closed form", self.space.name_of(g))))?;
        if oracle.ordering() != native.flip() || oracle.side() != Side::Left {
            return Err(Error::OrderingMismatch(format!(
                "the oracle must act from the left in the {} ordering",
                native.flip()
            )));
        }
        let to_native = self.convert(native.flip(), native);
        let lhs = self.left_op(g, native)?.apply(&to_native.apply(f));
        let rhs = to_native.apply(&oracle.left_action_word(&[g], f)?);
        Ok(IntertwineReport {
            generator: self.space.name_of(g).to_string(),
            input: f.render(),
            lhs: lhs.render(),
            rhs: rhs.render(),
            equal: lhs == rhs,
        })
    }
}

/// The calculus whose rewrite system contains `g`; symmetry generators and
/// coordinates belong to both and map to the unhatted one.
pub fn calculus_of(space: &SpaceDef, g: GenId) -> Calculus {
    if space.generator(g).kind == GenKind::Hatted {
        Calculus::Hatted
    } else {
        Calculus::Unhatted
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwineReport {
    pub generator: String,
    pub input: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

/// Free-function form of [`Reps::rep_left`] for one-off calls.
pub fn rep_left<S: Scalar>(
    space: &Arc<SpaceDef>,
    calculus: Calculus,
    gen: &str,
    f: &CommPolynomial<S>,
    o: Ordering,
) -> Result<CommPolynomial<S>> {
    let r = Reps::new(space.clone())?;
    r.rep_left(Some(calculus), space.gen(gen)?, f, o)
}

pub fn rep_right<S: Scalar>(space: &Arc<SpaceDef>, gen: &str, f: &CommPolynomial<S>, o: Ordering) -> Result<CommPolynomial<S>> {
    let r = Reps::new(space.clone())?;
    r.rep_right(space.gen(gen)?, f, o)
}

pub fn u_hat<S: Scalar>(space: &Arc<SpaceDef>, dir: Direction, f: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
    Reps::new(space.clone())?.u_hat(dir, f)
}

/// Small constructors shared by the space modules.
pub(crate) struct Build {
    pub coords: Coords,
}

impl Build {
    pub fn new(space: &SpaceDef) -> Self {
        Build {
            coords: space.coords().clone(),
        }
    }

    /// A scalar written in the coefficient grammar of the data files.
    pub fn k<S: Scalar>(&self, text: &str) -> S {
        S::from_qrational(&parse_qrational(text).unwrap_or_else(|e| panic!("bad constant {text}: {e}")))
    }

    pub fn x<S: Scalar>(&self, i: usize) -> CommPolynomial<S> {
        let mut e = vec![0; self.coords.len()];
        e[i] = 1;
        CommPolynomial::monomial(self.coords.clone(), &e)
    }

    /// Multiplication by coordinate `i`.
    pub fn mul_x<S: Scalar>(&self, i: usize) -> RepOperator<S> {
        RepOperator::Mul(self.x(i))
    }

    pub fn d<S: Scalar>(&self, i: usize, a: i64) -> RepOperator<S> {
        RepOperator::Jackson { coord: i, a }
    }

    pub fn sc<S: Scalar>(&self, i: usize, s: i64) -> RepOperator<S> {
        RepOperator::Scale { coord: i, s }
    }

    /// Scales every coordinate by `q^s`.
    pub fn sc_all<S: Scalar>(&self, s: i64) -> RepOperator<S> {
        RepOperator::compose((0..self.coords.len()).map(|i| self.sc(i, s)))
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::poly::Mono;
    use crate::scalar::QRational;

    pub fn space(name: &str) -> Arc<SpaceDef> {
        Arc::new(SpaceDef::builtin(name).unwrap())
    }

    pub fn system(sp: &Arc<SpaceDef>, g: GenId, o: Ordering, side: Side) -> RewriteSystem<QRational> {
        RewriteSystem::new(sp.clone(), calculus_of(sp, g), o, side).unwrap()
    }

    /// Monomials on which closed form and oracle disagree.
    pub fn left_mismatches(reps: &Reps<QRational>, id: &str, o: Ordering, degree: u32) -> Vec<String> {
        let sp = reps.space().clone();
        let g = sp.gen(id).unwrap();
        let sys = system(&sp, g, o, Side::Left);
        let mut bad = Vec::new();
        for m in Mono::up_to_degree(sp.coords().len(), degree) {
            let f = CommPolynomial::term(sp.coords().clone(), m, QRational::one());
            let want = sys.left_action_word(&[g], &f).unwrap();
            let got = reps.rep_left(None, g, &f, o).unwrap();
            if want != got {
                bad.push(format!("{id} on {f}: oracle {want}, closed form {got}"));
            }
        }
        bad
    }

    pub fn right_mismatches(reps: &Reps<QRational>, id: &str, o: Ordering, degree: u32) -> Vec<String> {
        let sp = reps.space().clone();
        let g = sp.gen(id).unwrap();
        let sys = system(&sp, g, o, Side::Right);
        let mut bad = Vec::new();
        for m in Mono::up_to_degree(sp.coords().len(), degree) {
            let f = CommPolynomial::term(sp.coords().clone(), m, QRational::one());
            let want = sys.right_action_word(&f, &[g]).unwrap();
            let got = reps.rep_right(g, &f, o).unwrap();
            if want != got {
                bad.push(format!("{id} on {f}: oracle {want}, closed form {got}"));
            }
        }
        bad
    }
}
