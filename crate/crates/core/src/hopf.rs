//! Coproduct, antipode and counit tables of the derivatives, the Leibniz
//! rules they encode and the antipode axiom that gates them.
//!
//! Polynomials are written in the forward-ordering basis throughout.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncalg::{collect, Calculus, GenId, LinComb, NCPolynomial, Ordering, RewriteSystem, Side, SpaceDef, Word};
use crate::poly::{CommPolynomial, Mono};
use crate::reps::Reps;
use crate::scalar::{parse_qrational, QRational, Scalar};

const SHIPPED: [(&str, Calculus, &str); 6] = [
    ("euclid3", Calculus::Unhatted, include_str!("../data/euclid3.unhatted.hopf")),
    ("euclid3", Calculus::Hatted, include_str!("../data/euclid3.hatted.hopf")),
    ("euclid4", Calculus::Unhatted, include_str!("../data/euclid4.unhatted.hopf")),
    ("euclid4", Calculus::Hatted, include_str!("../data/euclid4.hatted.hopf")),
    ("minkowski", Calculus::Unhatted, include_str!("../data/minkowski.unhatted.hopf")),
    ("minkowski", Calculus::Hatted, include_str!("../data/minkowski.hatted.hopf")),
];

/// Hopf data of one generator.
#[derive(Clone, Debug)]
pub struct HopfEntry {
    /// Terms `c A ⊗ B` as `(A, B, c)`.
    pub coproduct: Vec<(Word, Word, QRational)>,
    pub antipode: LinComb,
    pub counit: QRational,
}

/// The Hopf tables of one calculus on one space.
#[derive(Clone, Debug)]
pub struct HopfData {
    space: Arc<SpaceDef>,
    calculus: Calculus,
    entries: BTreeMap<GenId, HopfEntry>,
}

impl HopfData {
    pub fn builtin(space: Arc<SpaceDef>, calculus: Calculus) -> Result<Self> {
        let (_, _, text) = SHIPPED
            .iter()
            .find(|(n, c, _)| *n == space.name && *c == calculus)
            .ok_or_else(|| Error::UnknownSpace(space.name.clone()))?;
        Self::parse(space, calculus, text)
    }

    /// Loads `<dir>/<space>.<calculus>.hopf`.
    pub fn from_dir(dir: &Path, space: Arc<SpaceDef>, calculus: Calculus) -> Result<Self> {
        let path = dir.join(format!("{}.{calculus}.hopf", space.name));
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(space, calculus, &text)
    }

    pub fn parse(space: Arc<SpaceDef>, calculus: Calculus, text: &str) -> Result<Self> {
        let mut delta: BTreeMap<GenId, Vec<(Word, Word, QRational)>> = BTreeMap::new();
        let mut anti: BTreeMap<GenId, LinComb> = BTreeMap::new();
        let mut eps: BTreeMap<GenId, QRational> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = format!("{}.{calculus}.hopf line {}", space.name, n + 1);
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::Config(format!("{ctx}: expected `->`")))?;
            let mut head = lhs.split_whitespace();
            let (Some(kw), Some(name), None) = (head.next(), head.next(), head.next()) else {
                return Err(Error::Config(format!("{ctx}: expected `KEYWORD generator`")));
            };
            let g = space.gen(name).map_err(|e| Error::Config(format!("{ctx}: {e}")))?;
            let w = space.odd_count(&[g]);
            let fresh = match kw {
                "DELTA" => delta.insert(g, space.parse_tensor(rhs, w, &ctx)?).is_none(),
                "S" => anti.insert(g, collect(space.parse_comb(rhs, w, &ctx)?)).is_none(),
                "EPS" => eps
                    .insert(g, parse_qrational(rhs.trim()).map_err(|e| Error::Config(format!("{ctx}: {e}")))?)
                    .is_none(),
                other => return Err(Error::Config(format!("{ctx}: unknown keyword `{other}`"))),
            };
            if !fresh {
                return Err(Error::Config(format!("{ctx}: duplicate {kw} entry for {name}")));
            }
        }
        let mut entries = BTreeMap::new();
        for (g, coproduct) in delta {
            let name = space.name_of(g).to_string();
            let antipode = anti
                .remove(&g)
                .ok_or_else(|| Error::Config(format!("{name}: coproduct without antipode")))?;
            let counit = eps
                .remove(&g)
                .ok_or_else(|| Error::Config(format!("{name}: coproduct without counit")))?;
            if space.generator(g).counit.as_ref() != Some(&counit) {
                return Err(Error::Config(format!("{name}: counit disagrees with the space definition")));
            }
            entries.insert(g, HopfEntry { coproduct, antipode, counit });
        }
        if let Some(g) = anti.keys().chain(eps.keys()).next() {
            return Err(Error::Config(format!("{}: antipode or counit without coproduct", space.name_of(*g))));
        }
        let data = HopfData { space, calculus, entries };
        data.check_words()?;
        Ok(data)
    }

    /// Every word must live in the algebra of this calculus.
    fn check_words(&self) -> Result<()> {
        let sys = RewriteSystem::<QRational>::new(self.space.clone(), self.calculus, Ordering::Forward, Side::Left)?;
        for (g, e) in &self.entries {
            let own = Word::from_slice(&[*g]);
            let words = e
                .coproduct
                .iter()
                .flat_map(|(a, b, _)| [a, b])
                .chain(e.antipode.iter().map(|(w, _)| w))
                .chain(std::iter::once(&own));
            for w in words {
                if let Some(&bad) = w.iter().find(|&&h| !sys.is_active(h)) {
                    return Err(Error::Config(format!(
                        "{}: {} is not part of the {} calculus",
                        self.space.name_of(*g),
                        self.space.name_of(bad),
                        self.calculus
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<SpaceDef> {
        &self.space
    }

    pub fn calculus(&self) -> Calculus {
        self.calculus
    }

    /// Tabulated generators in declaration order.
    pub fn generators(&self) -> Vec<GenId> {
        self.entries.keys().copied().collect()
    }

    pub fn entry(&self, g: GenId) -> Result<&HopfEntry> {
        self.entries.get(&g).ok_or_else(|| {
            Error::NoRepresentation(format!("no Hopf data for {} in the {} calculus", self.space.name_of(g), self.calculus))
        })
    }

    /// `S(w) = S(w_n) ... S(w_1)`.
    pub fn antipode_of_word(&self, w: &[GenId]) -> Result<LinComb> {
        let mut acc: LinComb = vec![(Word::new(), QRational::one())];
        for &g in w {
            let s = &self.entry(g)?.antipode;
            let mut next = Vec::with_capacity(acc.len() * s.len());
            for (a, c) in &acc {
                for (b, d) in s {
                    let mut ba = b.clone();
                    ba.extend_from_slice(a);
                    next.push((ba, c * d));
                }
            }
            acc = collect(next);
        }
        Ok(acc)
    }
}

/// Outcome of the antipode axiom on one input.
#[derive(Clone, Debug, Serialize)]
pub struct HopfAxiomReport {
    pub generator: String,
    pub input: String,
    /// `Σ h₍₁₎ ▷ (S(h₍₂₎) ▷ f) − ε(h) f`.
    pub residual: String,
    pub ok: bool,
}

/// Hopf tables together with the representations that evaluate them.
pub struct Hopf<S: Scalar> {
    data: HopfData,
    reps: Reps<S>,
    sys: RewriteSystem<S>,
    /// Images of single monomials under single letters.
    memo: RefCell<HashMap<(GenId, Mono), CommPolynomial<S>>>,
}

impl<S: Scalar> Hopf<S> {
    pub fn new(data: HopfData) -> Result<Self> {
        let reps = Reps::new(data.space.clone())?;
        let sys = RewriteSystem::new(data.space.clone(), data.calculus, Ordering::Forward, Side::Left)?;
        Ok(Hopf { data, reps, sys, memo: RefCell::new(HashMap::new()) })
    }

    pub fn builtin(space: Arc<SpaceDef>, calculus: Calculus) -> Result<Self> {
        Self::new(HopfData::builtin(space, calculus)?)
    }

    pub fn data(&self) -> &HopfData {
        &self.data
    }

    pub fn reps(&self) -> &Reps<S> {
        &self.reps
    }

    /// `w ▷ f` through the closed forms, last letter first.
    pub fn act_word(&self, w: &[GenId], f: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
        let mut g = f.clone();
        for &h in w.iter().rev() {
            g = self.act_letter(h, &g)?;
        }
        Ok(g)
    }

    /// `h ▷ f`, assembled termwise from memoized monomial images.
    pub fn act_letter(&self, h: GenId, f: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
        let mut out = CommPolynomial::zero(f.coords().clone());
        for (m, c) in f.terms() {
            let key = (h, m.clone());
            let cached = self.memo.borrow().get(&key).cloned();
            let img = match cached {
                Some(p) => p,
                None => {
                    let unit = CommPolynomial::term(f.coords().clone(), m.clone(), S::one());
                    let p = self.reps.rep_left(None, h, &unit, Ordering::Forward)?;
                    self.memo.borrow_mut().insert(key, p.clone());
                    p
                }
            };
            out.add_scaled(&img, c);
        }
        Ok(out)
    }

    fn act_comb(&self, comb: &LinComb, f: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
        let mut out = CommPolynomial::zero(f.coords().clone());
        for (w, c) in comb {
            out.add_scaled(&self.act_word(w, f)?, &S::from_qrational(c));
        }
        Ok(out)
    }

    pub fn star(&self, f: &CommPolynomial<S>, g: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
        self.sys.star(f, g)
    }

    /// `h₍₁₎ ▷ f` for every coproduct term of `gen`, in table order.
    pub fn left_legs(&self, gen: GenId, f: &CommPolynomial<S>) -> Result<Vec<CommPolynomial<S>>> {
        self.data.entry(gen)?.coproduct.iter().map(|(a, _, _)| self.act_word(a, f)).collect()
    }

    /// `h₍₂₎ ▷ g` for every coproduct term of `gen`, in table order.
    pub fn right_legs(&self, gen: GenId, g: &CommPolynomial<S>) -> Result<Vec<CommPolynomial<S>>> {
        self.data.entry(gen)?.coproduct.iter().map(|(_, b, _)| self.act_word(b, g)).collect()
    }

    /// `Σ c (h₍₁₎ ▷ f) ⋆ (h₍₂₎ ▷ g)` from precomputed legs.
    pub fn leibniz_from_legs(
        &self,
        gen: GenId,
        left: &[CommPolynomial<S>],
        right: &[CommPolynomial<S>],
    ) -> Result<CommPolynomial<S>> {
        let terms = &self.data.entry(gen)?.coproduct;
        if left.len() != terms.len() || right.len() != terms.len() {
            return Err(Error::InvalidParameter("one leg per coproduct term expected".into()));
        }
        let mut out = CommPolynomial::zero(self.data.space.coords().clone());
        for ((fa, gb), (_, _, c)) in left.iter().zip(right).zip(terms) {
            if fa.is_zero() || gb.is_zero() {
                continue;
            }
            out.add_scaled(&self.sys.star(fa, gb)?, &S::from_qrational(c));
        }
        Ok(out)
    }

    /// `Σ (h₍₁₎ ▷ f) ⋆ (h₍₂₎ ▷ g)`.
    pub fn leibniz_apply(&self, gen: GenId, f: &CommPolynomial<S>, g: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
        self.leibniz_from_legs(gen, &self.left_legs(gen, f)?, &self.right_legs(gen, g)?)
    }

    pub fn hopf_axiom_check(&self, gen: GenId, f: &CommPolynomial<S>) -> Result<HopfAxiomReport> {
        let e = self.data.entry(gen)?;
        let mut res = f.scale(&-S::from_qrational(&e.counit));
        for (a, b, c) in &e.coproduct {
            let inner = self.act_comb(&self.data.antipode_of_word(b)?, f)?;
            res.add_scaled(&self.act_word(a, &inner)?, &S::from_qrational(c));
        }
        Ok(HopfAxiomReport {
            generator: self.data.space.name_of(gen).to_string(),
            input: f.render(),
            residual: res.render(),
            ok: res.is_zero(),
        })
    }

    /// Checks `h X = Σ (h₍₁₎ ▷ X) h₍₂₎` in the algebra for every coordinate
    /// `X`, with the actions taken from the rewrite system alone. Returns
    /// one line per failing coordinate.
    pub fn coproduct_check(&self, gen: GenId) -> Result<Vec<String>> {
        let sp = &self.data.space;
        let mut bad = Vec::new();
        for x in sp.coordinate_gens() {
            let lhs = self.sys.left_mul_word(&[gen], &NCPolynomial::gen(x))?;
            let xf = self.sys.weyl_inv(&NCPolynomial::gen(x))?;
            let mut rhs = NCPolynomial::zero();
            for (a, b, c) in &self.data.entry(gen)?.coproduct {
                let ax = self.sys.weyl(&self.sys.left_action_word(a, &xf)?)?;
                let t = self.sys.left_mul_poly(&ax, &self.sys.normal_word(b)?)?;
                rhs.add_scaled(&t, &S::from_qrational(c));
            }
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                bad.push(format!("{} {}: residual {}", sp.name_of(gen), sp.name_of(x), diff.render(sp)));
            }
        }
        Ok(bad)
    }
}

/// One-off form of [`Hopf::leibniz_apply`] with the shipped tables.
pub fn leibniz_apply<S: Scalar>(
    space: &Arc<SpaceDef>,
    calculus: Calculus,
    gen: &str,
    f: &CommPolynomial<S>,
    g: &CommPolynomial<S>,
) -> Result<CommPolynomial<S>> {
    Hopf::<S>::builtin(space.clone(), calculus)?.leibniz_apply(space.gen(gen)?, f, g)
}

pub fn hopf_axiom_check<S: Scalar>(
    space: &Arc<SpaceDef>,
    calculus: Calculus,
    gen: &str,
    f: &CommPolynomial<S>,
) -> Result<HopfAxiomReport> {
    Hopf::<S>::builtin(space.clone(), calculus)?.hopf_axiom_check(space.gen(gen)?, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Mono;

    fn hopf(name: &str, c: Calculus) -> Hopf<QRational> {
        Hopf::builtin(Arc::new(SpaceDef::builtin(name).unwrap()), c).unwrap()
    }

    #[test]
    fn coproducts_follow_from_the_relations() {
        let mut bad = Vec::new();
        for name in ["euclid3", "euclid4", "minkowski"] {
            for c in [Calculus::Unhatted, Calculus::Hatted] {
                let h = hopf(name, c);
                for g in h.data().generators() {
                    bad.extend(h.coproduct_check(g).unwrap());
                }
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn antipode_axiom_on_low_degrees() {
        let mut bad = Vec::new();
        for name in ["euclid3", "euclid4", "minkowski"] {
            for c in [Calculus::Unhatted, Calculus::Hatted] {
                let h = hopf(name, c);
                let coords = h.data().space().coords().clone();
                for g in h.data().generators() {
                    for m in Mono::up_to_degree(coords.len(), 2) {
                        let f = CommPolynomial::term(coords.clone(), m, QRational::one());
                        let r = h.hopf_axiom_check(g, &f).unwrap();
                        if !r.ok {
                            bad.push(format!("{name} {c} {} on {}: {}", r.generator, r.input, r.residual));
                        }
                    }
                }
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn leibniz_matches_action_on_star_products() {
        let mut bad = Vec::new();
        for name in ["euclid3", "euclid4", "minkowski"] {
            for c in [Calculus::Unhatted, Calculus::Hatted] {
                let h = hopf(name, c);
                let coords = h.data().space().coords().clone();
                let monos = Mono::up_to_degree(coords.len(), 2);
                for g in h.data().space().derivatives(c) {
                    for a in &monos {
                        for b in &monos {
                            if a.degree() + b.degree() > 2 {
                                continue;
                            }
                            let f = CommPolynomial::term(coords.clone(), a.clone(), QRational::one());
                            let k = CommPolynomial::term(coords.clone(), b.clone(), QRational::one());
                            let lhs = h.leibniz_apply(g, &f, &k).unwrap();
                            let rhs = h.reps().rep_left(None, g, &h.star(&f, &k).unwrap(), Ordering::Forward).unwrap();
                            if lhs != rhs {
                                bad.push(format!("{name} {} on {f} * {k}", h.data().space().name_of(g)));
                            }
                        }
                    }
                }
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn leibniz_on_constant_second_factor() {
        let sp = Arc::new(SpaceDef::builtin("euclid3").unwrap());
        let c = sp.coords().clone();
        let f = CommPolynomial::parse(c.clone(), "x+").unwrap();
        let one = CommPolynomial::one(c.clone());
        let got = leibniz_apply::<QRational>(&sp, Calculus::Unhatted, "d-", &f, &one).unwrap();
        assert_eq!(got, CommPolynomial::parse(c, "(-q^-1)").unwrap());
    }
}
