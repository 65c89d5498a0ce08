//! Weyl map, star product and the brute-force action oracle.

use super::ncpoly::NCPolynomial;
use super::rewrite::{RewriteSystem, Side};
use super::space::{GenId, Word};
use crate::error::{Error, Result};
use crate::poly::{CommPolynomial, Mono};
use crate::scalar::Scalar;

impl<S: Scalar> RewriteSystem<S> {
    fn check_coords(&self, f: &CommPolynomial<S>) -> Result<()> {
        if f.coords() != self.space().coords() {
            return Err(Error::InvalidParameter(format!(
                "polynomial coordinates {:?} do not match {}",
                f.coords(),
                self.space().name
            )));
        }
        Ok(())
    }

    /// Coordinate positions of the ordering, as indices into the
    /// commutative coordinate list.
    fn slots(&self) -> Vec<(GenId, usize)> {
        let sp = self.space();
        sp.ordering(self.ordering())
            .iter()
            .map(|&g| (g, sp.coord_index(g).expect("ordering lists coordinates")))
            .collect()
    }

    pub fn weyl(&self, f: &CommPolynomial<S>) -> Result<NCPolynomial<S>> {
        self.check_coords(f)?;
        let slots = self.slots();
        Ok(NCPolynomial::from_terms(f.terms().map(|(m, c)| {
            let mut w = Word::new();
            for &(g, i) in &slots {
                w.extend(std::iter::repeat_n(g, m.0[i] as usize));
            }
            (w, c.clone())
        })))
    }

    /// Inverse of [`Self::weyl`] on normal-ordered coordinate words.
    pub fn weyl_inv(&self, p: &NCPolynomial<S>) -> Result<CommPolynomial<S>> {
        let sp = self.space();
        let mut f = CommPolynomial::zero(sp.coords().clone());
        for (w, c) in p.terms() {
            f.add_term(self.word_mono(w)?, c.clone());
        }
        Ok(f)
    }

    fn word_mono(&self, w: &[GenId]) -> Result<Mono> {
        let sp = self.space();
        let mut m = Mono::zeros(sp.coords().len());
        for &g in w {
            let i = sp.coord_index(g).ok_or_else(|| {
                Error::InvalidParameter(format!("{} is not a coordinate", sp.name_of(g)))
            })?;
            m.0[i] += 1;
        }
        if !self.is_normal(w) {
            return Err(Error::OrderingMismatch(format!(
                "{} is not normal-ordered in the {} ordering",
                sp.render_word(w),
                self.ordering()
            )));
        }
        Ok(m)
    }

    pub fn star(&self, f: &CommPolynomial<S>, g: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
        let wf = self.weyl(f)?;
        let wg = self.weyl(g)?;
        self.weyl_inv(&self.left_mul_poly(&wf, &wg)?)
    }

    /// Replaces the generator segment of each normal word by its counit.
    fn apply_counit(&self, p: &NCPolynomial<S>) -> Result<CommPolynomial<S>> {
        let sp = self.space();
        let mut f = CommPolynomial::zero(sp.coords().clone());
        for (w, c) in p.terms() {
            let split = match self.side() {
                Side::Left => w.iter().position(|&g| !sp.generator(g).is_coordinate()).unwrap_or(w.len()),
                Side::Right => w.iter().position(|&g| sp.generator(g).is_coordinate()).unwrap_or(w.len()),
            };
            let (coords, gens) = match self.side() {
                Side::Left => (&w[..split], &w[split..]),
                Side::Right => (&w[split..], &w[..split]),
            };
            let mut e = c.clone();
            for &g in gens {
                let cu = sp.generator(g).counit.as_ref().ok_or_else(|| {
                    Error::Internal(format!("coordinate {} inside the generator segment", sp.name_of(g)))
                })?;
                if cu.is_zero() {
                    e = S::zero();
                    break;
                }
                e = e * S::from_qrational(cu);
            }
            if !e.is_zero() {
                f.add_term(self.word_mono(coords)?, e);
            }
        }
        Ok(f)
    }

    /// `h ▷ f` computed by normal-ordering `h W(f)`.
    pub fn left_action(&self, h: &NCPolynomial<S>, f: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
        if self.side() != Side::Left {
            return Err(Error::InvalidParameter("left action needs a left rewrite system".into()));
        }
        let wf = self.weyl(f)?;
        self.apply_counit(&self.left_mul_poly(h, &wf)?)
    }

    pub fn left_action_word(&self, h: &[GenId], f: &CommPolynomial<S>) -> Result<CommPolynomial<S>> {
        self.left_action(&NCPolynomial::word(Word::from_slice(h)), f)
    }

    /// `f ◁ h` computed by normal-ordering `W(f) h` with generators moved left.
    pub fn right_action(&self, f: &CommPolynomial<S>, h: &NCPolynomial<S>) -> Result<CommPolynomial<S>> {
        if self.side() != Side::Right {
            return Err(Error::InvalidParameter("right action needs a right rewrite system".into()));
        }
        let wf = self.weyl(f)?;
        let hw = self.normal_order(h)?;
        let mut out = NCPolynomial::zero();
        for (a, c) in wf.terms() {
            out.add_scaled(&self.left_mul_word(a, &hw)?, c);
        }
        self.apply_counit(&out)
    }

    pub fn right_action_word(&self, f: &CommPolynomial<S>, h: &[GenId]) -> Result<CommPolynomial<S>> {
        self.right_action(f, &NCPolynomial::word(Word::from_slice(h)))
    }
}
