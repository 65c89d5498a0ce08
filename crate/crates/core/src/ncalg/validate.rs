//! Consistency checks on a space definition.

use std::sync::Arc;

use serde::Serialize;

use super::ncpoly::NCPolynomial;
use super::rewrite::{RewriteSystem, Side};
use super::space::{Calculus, GenId, Ordering, Section, SpaceDef, Word};
use crate::error::Result;
use crate::qcalc::binom;
use crate::scalar::{lambda_plus, QRational};

#[derive(Clone, Debug, Serialize)]
pub struct PbwCount {
    pub ordering: String,
    pub degree: u32,
    pub normal_monomials: u64,
    pub expected: u64,
    /// Relation instances `u r v` of this degree that failed to reduce to 0.
    pub ideal_failures: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub space: String,
    pub pbw: Vec<PbwCount>,
    pub overlaps_checked: u64,
    pub overlap_failures: Vec<String>,
    /// `None` where the space has no such identity.
    pub r2_identity: Option<bool>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.overlap_failures.is_empty()
            && self
                .pbw
                .iter()
                .all(|p| p.normal_monomials == p.expected && p.ideal_failures == 0)
            && self.r2_identity != Some(false)
    }
}

/// PBW counts up to `max_degree`, all length-3 overlaps for both calculi,
/// orderings and sides, and the Minkowski `r^2` identity.
pub fn validate_space(space: &Arc<SpaceDef>, max_degree: u32) -> Result<ValidationReport> {
    let mut rep = ValidationReport {
        space: space.name.clone(),
        pbw: Vec::new(),
        overlaps_checked: 0,
        overlap_failures: Vec::new(),
        r2_identity: None,
    };
    for o in [Ordering::Forward, Ordering::Reversed] {
        let sys = RewriteSystem::<QRational>::new(space.clone(), Calculus::Unhatted, o, Side::Left)?;
        for d in 0..=max_degree {
            rep.pbw.push(pbw_count(&sys, d)?);
        }
    }
    for c in [Calculus::Unhatted, Calculus::Hatted] {
        for o in [Ordering::Forward, Ordering::Reversed] {
            for side in [Side::Left, Side::Right] {
                let sys = RewriteSystem::<QRational>::new(space.clone(), c, o, side)?;
                check_overlaps(&sys, &mut rep)?;
            }
        }
    }
    if space.alias("X0").is_some() {
        let mut ok = true;
        for o in [Ordering::Forward, Ordering::Reversed] {
            let sys = RewriteSystem::<QRational>::new(space.clone(), Calculus::Unhatted, o, Side::Left)?;
            ok &= r2_identity(&sys)?;
        }
        rep.r2_identity = Some(ok);
    }
    Ok(rep)
}

fn all_words(alphabet: &[GenId], len: u32) -> Vec<Word> {
    let mut out = vec![Word::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&g| {
                    let mut v = w.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    out
}

fn pbw_count(sys: &RewriteSystem<QRational>, d: u32) -> Result<PbwCount> {
    let space = sys.space();
    let coords = space.coordinate_gens();
    let n = coords.len() as u32;
    let normal = all_words(&coords, d).iter().filter(|w| sys.is_normal(w)).count() as u64;
    // every relation instance u*r*v must reduce to zero
    let mut failures = 0;
    if d >= 2 {
        let rels: Vec<NCPolynomial<QRational>> = space
            .relations()
            .iter()
            .filter(|r| r.section == Section::Coordinates)
            .map(|r| NCPolynomial::from_terms(r.form.iter().cloned()))
            .collect();
        for left in 0..=d - 2 {
            let us = all_words(&coords, left);
            let vs = all_words(&coords, d - 2 - left);
            for r in &rels {
                for v in &vs {
                    let rv = r.mul(&NCPolynomial::word(v.clone()));
                    let tail = sys.normal_order(&rv)?;
                    for u in &us {
                        if !sys.left_mul_word(u, &tail)?.is_zero() {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(PbwCount {
        ordering: sys.ordering().to_string(),
        degree: d,
        normal_monomials: normal,
        expected: if n == 0 { 1 } else { binom(d + n - 1, n - 1) as u64 },
        ideal_failures: failures,
    })
}

fn check_overlaps(sys: &RewriteSystem<QRational>, rep: &mut ValidationReport) -> Result<()> {
    let space = sys.space().clone();
    let active: Vec<GenId> = (0..space.generators().len() as GenId)
        .filter(|&g| sys.is_active(g))
        .collect();
    for &a in &active {
        for &b in &active {
            if !sys.is_disordered(a, b) {
                continue;
            }
            for &c in &active {
                if !sys.is_disordered(b, c) {
                    continue;
                }
                rep.overlaps_checked += 1;
                // (ab)c
                let mut left = NCPolynomial::zero();
                for (v, k) in sys.rule(a, b).unwrap() {
                    let mut w = v.clone();
                    w.push(c);
                    left.add_scaled(&sys.normal_word(&w)?, k);
                }
                // a(bc)
                let mut right = NCPolynomial::zero();
                for (v, k) in sys.rule(b, c).unwrap() {
                    let mut w = Word::from_slice(&[a]);
                    w.extend_from_slice(v);
                    right.add_scaled(&sys.normal_word(&w)?, k);
                }
                if left != right {
                    rep.overlap_failures.push(format!(
                        "{} {} {} ({}, {} ordering, {:?} side)",
                        space.id_of(a),
                        space.id_of(b),
                        space.id_of(c),
                        sys.calculus(),
                        sys.ordering(),
                        sys.side()
                    ));
                }
            }
        }
    }
    Ok(())
}

/// `lambdap (X- X+ - X+ X-) = a_q - a_{1/q}` with
/// `a_q = q^2 Xt3 Xt3 + q lambdap X0 Xt3`.
fn r2_identity(sys: &RewriteSystem<QRational>) -> Result<bool> {
    let space = sys.space();
    let comb = |text: &str| -> Result<NCPolynomial<QRational>> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        Ok(NCPolynomial::from_terms(space.expand_tokens(&toks)?))
    };
    let lp = lambda_plus();
    let lhs = comb("Xm Xp")?.sub(&comb("Xp Xm")?).scale(&lp);
    let a = |q: QRational| -> Result<NCPolynomial<QRational>> {
        let mut p = comb("Xt3 Xt3")?.scale(&(q.clone() * q.clone()));
        p.add_scaled(&comb("X0 Xt3")?, &(q * lp.clone()));
        Ok(p)
    };
    let rhs = a(QRational::q())?.sub(&a(QRational::q_pow(-1))?);
    Ok(sys.normal_order(&lhs)? == sys.normal_order(&rhs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclid3_validates() {
        let s = Arc::new(SpaceDef::builtin("euclid3").unwrap());
        let r = validate_space(&s, 3).unwrap();
        assert!(r.ok(), "{r:#?}");
        let d3 = r.pbw.iter().find(|p| p.degree == 3).unwrap();
        assert_eq!(d3.normal_monomials, 10);
    }

    #[test]
    fn other_spaces_validate() {
        for n in ["euclid4", "minkowski"] {
            let s = Arc::new(SpaceDef::builtin(n).unwrap());
            let r = validate_space(&s, 3).unwrap();
            assert!(r.ok(), "{r:#?}");
        }
    }
}
