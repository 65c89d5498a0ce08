//! Rewriting to PBW normal form.
//!
//! Rules are not read off the relation file directly: every relation is a
//! linear form over words, and the rules for a given ordering are obtained by
//! solving for the words that violate it. The same relations therefore serve
//! both coordinate orderings and both the left action (generators pushed to
//! the right) and the right action (generators pushed to the left).

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::Arc;

use super::ncpoly::NCPolynomial;
use super::space::{Calculus, GenId, GenKind, Ordering, Section, SpaceDef, Word};
use crate::error::{Error, Result};
use crate::scalar::{QRational, Scalar};

/// Where non-coordinate generators end up in a normal-ordered word.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Side {
    /// Coordinates first, then generators: used for left actions.
    Left,
    /// Generators first, then coordinates: used for right actions.
    Right,
}

const STEP_BUDGET: u64 = 200_000_000;

type Rule<S> = Vec<(Word, S)>;
type Memo<S> = RefCell<HashMap<(GenId, Word), Rc<NCPolynomial<S>>>>;
type RuleTable = HashMap<(GenId, GenId), Vec<(Word, QRational)>>;

pub struct RewriteSystem<S: Scalar> {
    space: Arc<SpaceDef>,
    calculus: Calculus,
    ordering: Ordering,
    side: Side,
    rank: Vec<Option<i32>>,
    rules: HashMap<(GenId, GenId), Rule<S>>,
    memo: Memo<S>,
    steps: Cell<u64>,
}

impl<S: Scalar> RewriteSystem<S> {
    pub fn new(space: Arc<SpaceDef>, calculus: Calculus, ordering: Ordering, side: Side) -> Result<Self> {
        let n = space.generators().len();
        let mut rank = vec![None; n];
        let coords = space.ordering(ordering);
        for (i, &g) in coords.iter().enumerate() {
            rank[g as usize] = Some(i as i32);
        }
        let others = match side {
            Side::Left => coords.len() as i32,
            Side::Right => -1,
        };
        let want = match calculus {
            Calculus::Unhatted => GenKind::Unhatted,
            Calculus::Hatted => GenKind::Hatted,
        };
        for (g, gen) in space.generators().iter().enumerate() {
            if gen.kind == want || matches!(gen.kind, GenKind::Symmetry | GenKind::Scaling) {
                rank[g] = Some(others);
            }
        }
        let section = match calculus {
            Calculus::Unhatted => Section::Unhatted,
            Calculus::Hatted => Section::Hatted,
        };
        let rows: Vec<BTreeMap<Word, QRational>> = space
            .relations()
            .iter()
            .filter(|r| matches!(r.section, Section::Coordinates | Section::Symmetry) || r.section == section)
            .map(|r| r.form.iter().cloned().collect())
            .collect();
        let rules = solve_rules(&space, &rank, rows, ordering, side)?
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().map(|(w, c)| (w, S::from_qrational(&c))).collect()))
            .collect();
        Ok(RewriteSystem {
            space,
            calculus,
            ordering,
            side,
            rank,
            rules,
            memo: RefCell::new(HashMap::new()),
            steps: Cell::new(0),
        })
    }

    pub fn space(&self) -> &Arc<SpaceDef> {
        &self.space
    }

    pub fn calculus(&self) -> Calculus {
        self.calculus
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_active(&self, g: GenId) -> bool {
        self.rank[g as usize].is_some()
    }

    fn check_active(&self, w: &[GenId]) -> Result<()> {
        match w.iter().find(|&&g| !self.is_active(g)) {
            Some(&g) => Err(Error::UnknownGenerator(format!(
                "{} does not belong to the {} calculus",
                self.space.name_of(g),
                self.calculus
            ))),
            None => Ok(()),
        }
    }

    pub fn is_disordered(&self, a: GenId, b: GenId) -> bool {
        self.rank[a as usize] > self.rank[b as usize]
    }

    pub fn is_normal(&self, w: &[GenId]) -> bool {
        w.windows(2).all(|p| !self.is_disordered(p[0], p[1]))
    }

    /// The rewrite rule for a disordered pair.
    pub fn rule(&self, a: GenId, b: GenId) -> Option<&[(Word, S)]> {
        self.rules.get(&(a, b)).map(|v| v.as_slice())
    }

    pub fn rules(&self) -> impl Iterator<Item = (&(GenId, GenId), &Rule<S>)> {
        self.rules.iter()
    }

    pub fn normal_order(&self, p: &NCPolynomial<S>) -> Result<NCPolynomial<S>> {
        let mut out = NCPolynomial::zero();
        for (w, c) in p.terms() {
            out.add_scaled(&self.normal_word(w)?, c);
        }
        Ok(out)
    }

    pub fn normal_word(&self, w: &[GenId]) -> Result<NCPolynomial<S>> {
        self.check_active(w)?;
        self.left_mul_word(w, &NCPolynomial::one())
    }

    /// `w * p` in normal form, for `p` already normal-ordered.
    pub fn left_mul_word(&self, w: &[GenId], p: &NCPolynomial<S>) -> Result<NCPolynomial<S>> {
        self.check_active(w)?;
        let mut acc = p.clone();
        for &g in w.iter().rev() {
            acc = self.left_mul(g, &acc)?;
        }
        Ok(acc)
    }

    /// `h * p` in normal form, for `p` already normal-ordered.
    pub fn left_mul_poly(&self, h: &NCPolynomial<S>, p: &NCPolynomial<S>) -> Result<NCPolynomial<S>> {
        let mut out = NCPolynomial::zero();
        for (w, c) in h.terms() {
            out.add_scaled(&self.left_mul_word(w, p)?, c);
        }
        Ok(out)
    }

    fn left_mul(&self, g: GenId, p: &NCPolynomial<S>) -> Result<NCPolynomial<S>> {
        let mut out = NCPolynomial::zero();
        for (u, c) in p.terms() {
            let part = self.insert(g, u)?;
            out.add_scaled(&part, c);
        }
        Ok(out)
    }

    /// Normal form of `g * u` for a normal word `u`.
    fn insert(&self, g: GenId, u: &Word) -> Result<Rc<NCPolynomial<S>>> {
        if u.is_empty() || !self.is_disordered(g, u[0]) {
            let mut w = Word::with_capacity(u.len() + 1);
            w.push(g);
            w.extend_from_slice(u);
            return Ok(Rc::new(NCPolynomial::word(w)));
        }
        let key = (g, u.clone());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let n = self.steps.get() + 1;
        self.steps.set(n);
        if n > STEP_BUDGET {
            return Err(Error::Internal("normal ordering exceeded its step budget".into()));
        }
        let rule = self.rules.get(&(g, u[0])).ok_or_else(|| {
            Error::Internal(format!(
                "no rule for {} {}",
                self.space.id_of(g),
                self.space.id_of(u[0])
            ))
        })?;
        let rest = NCPolynomial::word(Word::from_slice(&u[1..]));
        let mut out = NCPolynomial::zero();
        for (v, c) in rule {
            let mut acc = rest.clone();
            for &h in v.iter().rev() {
                acc = self.left_mul(h, &acc)?;
            }
            out.add_scaled(&acc, c);
        }
        let out = Rc::new(out);
        self.memo.borrow_mut().insert(key, out.clone());
        Ok(out)
    }
}

/// Gaussian elimination of the relation forms on the disordered pairs.
fn solve_rules(
    space: &SpaceDef,
    rank: &[Option<i32>],
    mut rows: Vec<BTreeMap<Word, QRational>>,
    ordering: Ordering,
    side: Side,
) -> Result<RuleTable> {
    let active: Vec<GenId> = (0..rank.len() as GenId).filter(|&g| rank[g as usize].is_some()).collect();
    let mut pivots: Vec<Word> = Vec::new();
    for &a in &active {
        for &b in &active {
            if rank[a as usize] > rank[b as usize] {
                pivots.push(Word::from_slice(&[a, b]));
            }
        }
    }
    let mut used = vec![false; rows.len()];
    let mut pivot_row: Vec<(Word, usize)> = Vec::new();
    for p in &pivots {
        let Some(r) = (0..rows.len()).find(|&i| !used[i] && rows[i].contains_key(p)) else {
            return Err(Error::Config(format!(
                "{}: no relation determines {} in the {ordering} ordering ({side:?} side)",
                space.name,
                space.render_word(p)
            )));
        };
        used[r] = true;
        let inv = rows[r][p].inv().expect("nonzero pivot");
        for c in rows[r].values_mut() {
            *c = c.clone() * inv.clone();
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            if let Some(f) = row.get(p).cloned() {
                for (w, c) in &prow {
                    let e = row.entry(w.clone()).or_insert_with(QRational::zero);
                    *e -= f.clone() * c.clone();
                }
                row.retain(|_, c| !c.is_zero());
            }
        }
        pivot_row.push((p.clone(), r));
    }
    if let Some(i) = (0..rows.len()).find(|&i| !used[i] && !rows[i].is_empty()) {
        let rendered: Vec<String> = rows[i]
            .iter()
            .map(|(w, c)| format!("({c})*{}", space.render_word(w)))
            .collect();
        return Err(Error::Config(format!(
            "{}: relations imply a relation among normal words: {} = 0",
            space.name,
            rendered.join(" + ")
        )));
    }
    let mut rules = HashMap::new();
    for (p, r) in pivot_row {
        let rhs: Vec<(Word, QRational)> = rows[r]
            .iter()
            .filter(|(w, _)| **w != p)
            .map(|(w, c)| (w.clone(), -c.clone()))
            .collect();
        rules.insert((p[0], p[1]), rhs);
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(name: &str, c: Calculus, o: Ordering, side: Side) -> RewriteSystem<QRational> {
        RewriteSystem::new(Arc::new(SpaceDef::builtin(name).unwrap()), c, o, side).unwrap()
    }

    #[test]
    fn all_systems_build() {
        for n in super::super::space::space_names() {
            for c in [Calculus::Unhatted, Calculus::Hatted] {
                for o in [Ordering::Forward, Ordering::Reversed] {
                    for s in [Side::Left, Side::Right] {
                        let r = RewriteSystem::<QRational>::new(
                            Arc::new(SpaceDef::builtin(n).unwrap()),
                            c,
                            o,
                            s,
                        );
                        assert!(r.is_ok(), "{n} {c} {o} {s:?}: {:?}", r.err());
                    }
                }
            }
        }
    }

    #[test]
    fn dminus_xplus() {
        let r = sys("euclid3", Calculus::Unhatted, Ordering::Forward, Side::Left);
        let s = r.space().clone();
        let w = s.word("d- x+").unwrap();
        let nf = r.normal_word(&w).unwrap();
        assert_eq!(nf.coeff(&[]), -QRational::q_pow(-1));
        assert_eq!(nf.coeff(&s.word("x+ d-").unwrap()), QRational::q_pow(4));
        assert_eq!(nf.len(), 2);
    }

    #[test]
    fn lplus_x3() {
        let r = sys("euclid3", Calculus::Unhatted, Ordering::Forward, Side::Left);
        let s = r.space().clone();
        let nf = r.normal_word(&s.word("L+ x3").unwrap()).unwrap();
        assert_eq!(nf.coeff(&s.word("x3 L+").unwrap()), QRational::one());
        assert_eq!(nf.coeff(&s.word("x+ tau-").unwrap()), -QRational::q());
        assert_eq!(nf.len(), 2);
    }

    #[test]
    fn ordered_words_untouched() {
        let r = sys("euclid3", Calculus::Unhatted, Ordering::Forward, Side::Left);
        let w = r.space().word("x+ x3").unwrap();
        assert_eq!(r.normal_word(&w).unwrap(), NCPolynomial::word(w));
    }

    #[test]
    fn wrong_calculus_is_rejected() {
        let r = sys("euclid3", Calculus::Unhatted, Ordering::Forward, Side::Left);
        let w = r.space().word("dh+ x+").unwrap();
        assert!(matches!(r.normal_word(&w), Err(Error::UnknownGenerator(_))));
    }
}
