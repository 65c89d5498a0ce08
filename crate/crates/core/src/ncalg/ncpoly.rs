use std::collections::BTreeMap;

use super::space::{GenId, SpaceDef, Word};
use crate::scalar::Scalar;

/// Linear combination of words in noncommuting generators.
#[derive(Clone, PartialEq, Debug)]
pub struct NCPolynomial<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> Default for NCPolynomial<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> NCPolynomial<S> {
    pub fn zero() -> Self {
        NCPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::word(Word::new())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, S::one())
    }

    pub fn gen(g: GenId) -> Self {
        Self::word(Word::from_slice(&[g]))
    }

    pub fn term(w: Word, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Word, S)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, S)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &[GenId]) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        for (w, d) in &other.terms {
            self.add_term(w.clone(), d.clone() * c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &S::one());
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &-S::one());
        r
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut r = Self::zero();
        r.add_scaled(self, c);
        r
    }

    /// Concatenation product, no reordering.
    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                r.add_term(w, c.clone() * d.clone());
            }
        }
        r
    }

    pub fn render(&self, space: &SpaceDef) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| if w.is_empty() { format!("({c})") } else { format!("({c})*{}", space.render_word(w)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
