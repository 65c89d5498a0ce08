//! The acceptance harness: closed forms against the rewrite oracle, the
//! cross-identities between representations, Hopf tables and Û, and the
//! scalar identities of the generalized derivatives. Mismatches and
//! evaluation errors become report entries; only setup failures are errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::hopf::Hopf;
use crate::ncalg::{validate_space, Calculus, GenId, GenKind, NCPolynomial, Ordering, RewriteSystem, Side, SpaceDef, Word};
use crate::poly::{CommPolynomial, Mono};
use crate::qcalc::{binom, classical_d, gen_d_reduce, k_bruteforce, k_properties_check, KOperatorSpec};
use crate::qscalar::eval_at;
use crate::reps::{calculus_of, conjugate, Direction, OpExpr, Reps};
use crate::scalar::{lambda, lambda_plus, parse_qrational, QRational, Scalar};

type Q = QRational;

const ORDERINGS: [Ordering; 2] = [Ordering::Forward, Ordering::Reversed];
const CALCULI: [Calculus; 2] = [Calculus::Unhatted, Calculus::Hatted];

/// One comparison: a computed value against an independent reference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case {
    pub space: String,
    pub calculus: String,
    pub ordering: String,
    pub generator: String,
    pub input: String,
    /// Where the reference value comes from.
    pub source: String,
    pub closed_form: String,
    pub oracle: String,
    pub equal: bool,
}

impl Case {
    fn new(space: &str, generator: impl Into<String>, input: impl Into<String>, source: &str) -> Self {
        Case {
            space: space.to_string(),
            calculus: "-".into(),
            ordering: "-".into(),
            generator: generator.into(),
            input: input.into(),
            source: source.to_string(),
            closed_form: String::new(),
            oracle: String::new(),
            equal: false,
        }
    }

    fn calculus(mut self, c: Calculus) -> Self {
        self.calculus = c.to_string();
        self
    }

    fn ordering(mut self, o: Ordering) -> Self {
        self.ordering = o.to_string();
        self
    }

    fn outcome(self, r: Result<(String, String, bool)>) -> Self {
        match r {
            Ok((closed_form, oracle, equal)) => Case { closed_form, oracle, equal, ..self },
            Err(e) => Case {
                closed_form: format!("error: {e}"),
                oracle: String::new(),
                equal: false,
                ..self
            },
        }
    }

    fn compare<S: Scalar>(self, r: Result<(CommPolynomial<S>, CommPolynomial<S>)>) -> Self {
        self.outcome(r.map(|(a, b)| (a.render(), b.render(), a == b)))
    }

    fn describe(&self) -> String {
        format!(
            "{} {} {} [{}] on {}: got {}, {} gives {}",
            self.space, self.calculus, self.generator, self.ordering, self.input, self.closed_form, self.source, self.oracle
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub summary: Summary,
    pub failures: Vec<String>,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            summary: Summary::default(),
            failures: Vec::new(),
            cases: Vec::new(),
        }
    }

    pub fn push(&mut self, case: Case) {
        self.summary.total += 1;
        if case.equal {
            self.summary.passed += 1;
        } else {
            self.summary.failed += 1;
            self.failures.push(case.describe());
        }
        self.cases.push(case);
    }

    pub fn extend(&mut self, other: SuiteReport) {
        for c in other.cases {
            self.push(c);
        }
    }

    pub fn ok(&self) -> bool {
        self.summary.failed == 0
    }

    /// Summary and failures; with `verbose`, one line per case.
    pub fn render_text(&self, verbose: bool) -> String {
        let s = &self.summary;
        let mut out = format!("suite {}: {} cases, {} passed, {} failed\n", self.suite, s.total, s.passed, s.failed);
        if verbose {
            for c in &self.cases {
                let mark = if c.equal { "ok  " } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{mark} {} {} {} [{}] {} -> {} | {}",
                    c.space, c.calculus, c.generator, c.ordering, c.input, c.closed_form, c.oracle
                );
            }
        } else {
            for f in &self.failures {
                let _ = writeln!(out, "FAIL {f}");
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn collect(name: &str, parts: Vec<Result<Vec<Case>>>) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(name);
    for p in parts {
        for c in p? {
            rep.push(c);
        }
    }
    Ok(rep)
}

fn monomials(space: &SpaceDef, degree: u32) -> Vec<CommPolynomial<Q>> {
    let c = space.coords();
    Mono::up_to_degree(c.len(), degree)
        .into_iter()
        .map(|m| CommPolynomial::term(c.clone(), m, Q::one()))
        .collect()
}

fn is_derivative(space: &SpaceDef, g: GenId) -> bool {
    matches!(space.generator(g).kind, GenKind::Unhatted | GenKind::Hatted)
}

/// Every closed-form left representation against the oracle's left action,
/// in both orderings, on all monomials up to `degree`. With a calculus
/// given, only its derivatives and the symmetry generators are run.
pub fn run_equivalence(space: &Arc<SpaceDef>, calculus: Option<Calculus>, degree: u32) -> Result<SuiteReport> {
    let reps = Reps::<Q>::new(space.clone())?;
    let monos = monomials(space, degree);
    let mut jobs = Vec::new();
    for g in reps.left_generators() {
        let c = match (calculus, space.generator(g).kind) {
            (Some(Calculus::Unhatted), GenKind::Hatted) | (Some(Calculus::Hatted), GenKind::Unhatted) => continue,
            (Some(c), _) => c,
            (None, _) => calculus_of(space, g),
        };
        for o in ORDERINGS {
            jobs.push((g, c, o));
        }
    }
    let parts = jobs
        .par_iter()
        .map(|&(g, c, o)| {
            let sys = RewriteSystem::<Q>::new(space.clone(), c, o, Side::Left)?;
            Ok(monos
                .iter()
                .map(|f| {
                    Case::new(&space.name, space.name_of(g), f.render(), "oracle")
                        .calculus(c)
                        .ordering(o)
                        .compare((|| Ok((reps.rep_left(None, g, f, o)?, sys.left_action_word(&[g], f)?)))())
                })
                .collect())
        })
        .collect();
    collect("equivalence", parts)
}

/// Bounds of the identity suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityBounds {
    pub u_hat: u32,
    pub intertwine: u32,
    pub right: u32,
    pub hopf_axiom: u32,
    pub leibniz: u32,
    pub transrule: u32,
}

impl IdentityBounds {
    /// The acceptance configuration of a space.
    pub fn for_space(name: &str) -> Self {
        let u = if name == "minkowski" { 4 } else { 6 };
        IdentityBounds {
            u_hat: u,
            intertwine: u,
            right: 4,
            hopf_axiom: 3,
            leibniz: 4,
            transrule: 4,
        }
    }

    pub fn capped(self, degree: u32) -> Self {
        IdentityBounds {
            u_hat: self.u_hat.min(degree),
            intertwine: self.intertwine.min(degree),
            right: self.right.min(degree),
            hopf_axiom: self.hopf_axiom.min(degree),
            leibniz: self.leibniz.min(degree),
            transrule: self.transrule.min(degree),
        }
    }
}

/// Û∘Û⁻¹ and Û⁻¹∘Û on every monomial up to `degree`.
pub fn u_hat_suite(space: &Arc<SpaceDef>, degree: u32) -> Result<SuiteReport> {
    let reps = Reps::<Q>::new(space.clone())?;
    let parts = monomials(space, degree)
        .par_iter()
        .map(|f| {
            let round = |first: Direction, then: Direction, label: &str| {
                Case::new(&space.name, label, f.render(), "identity")
                    .compare((|| Ok((reps.u_hat(then, &reps.u_hat(first, f)?)?, f.clone())))())
            };
            Ok(vec![
                round(Direction::Inverse, Direction::Forward, "U U^-1"),
                round(Direction::Forward, Direction::Inverse, "U^-1 U"),
            ])
        })
        .collect();
    collect("u-hat", parts)
}

/// The intertwining identity of Û for every closed form, with the action in
/// the other ordering taken from the oracle.
pub fn intertwining_suite(space: &Arc<SpaceDef>, degree: u32) -> Result<SuiteReport> {
    let reps = Reps::<Q>::new(space.clone())?;
    let monos = monomials(space, degree);
    let parts = reps
        .left_generators()
        .par_iter()
        .map(|&g| {
            let native = reps.native_ordering(g).expect("listed generators have closed forms");
            let c = calculus_of(space, g);
            let sys = RewriteSystem::<Q>::new(space.clone(), c, native.flip(), Side::Left)?;
            Ok(monos
                .iter()
                .map(|f| {
                    Case::new(&space.name, space.name_of(g), f.render(), "U-conjugated oracle")
                        .calculus(c)
                        .ordering(native)
                        .outcome(reps.intertwine_check(g, f, &sys).map(|r| (r.lhs, r.rhs, r.equal)))
                })
                .collect())
        })
        .collect();
    collect("intertwining", parts)
}

/// Right representations from the translation rules against the oracle's
/// right action, in both orderings.
pub fn right_suite(space: &Arc<SpaceDef>, degree: u32) -> Result<SuiteReport> {
    let reps = Reps::<Q>::new(space.clone())?;
    let monos = monomials(space, degree);
    let jobs: Vec<(GenId, Ordering)> = reps
        .right_generators()
        .into_iter()
        .flat_map(|g| ORDERINGS.map(|o| (g, o)))
        .collect();
    let parts = jobs
        .par_iter()
        .map(|&(g, o)| {
            let c = calculus_of(space, g);
            let sys = RewriteSystem::<Q>::new(space.clone(), c, o, Side::Right)?;
            Ok(monos
                .iter()
                .map(|f| {
                    Case::new(&space.name, space.name_of(g), f.render(), "oracle right action")
                        .calculus(c)
                        .ordering(o)
                        .compare((|| Ok((reps.rep_right(g, f, o)?, sys.right_action_word(f, &[g])?)))())
                })
                .collect())
        })
        .collect();
    collect("right", parts)
}

/// Image of a word under the conjugation: letters reversed, each replaced
/// by its image. `None` when some letter has no image.
fn conjugate_word(space: &SpaceDef, w: &[GenId]) -> Option<NCPolynomial<Q>> {
    let mut out = NCPolynomial::one();
    for &g in w.iter().rev() {
        let img = space.conjugate_of(g)?;
        out = out.mul(&NCPolynomial::from_terms(img.iter().cloned()));
    }
    Some(out)
}

/// The conjugation is an anti-automorphism: the image of every defining
/// relation, with real coefficients, must vanish in the algebra.
pub fn conjugation_suite(space: &Arc<SpaceDef>) -> Result<SuiteReport> {
    let systems: BTreeMap<Calculus, RewriteSystem<Q>> = CALCULI
        .into_iter()
        .map(|c| Ok((c, RewriteSystem::new(space.clone(), c, Ordering::Forward, Side::Left)?)))
        .collect::<Result<_>>()?;
    let mut rep = SuiteReport::new("conjugation");
    for r in space.relations() {
        let mut image = NCPolynomial::zero();
        let mut complete = true;
        for (w, c) in &r.form {
            match conjugate_word(space, w) {
                Some(p) => image.add_scaled(&p, c),
                None => complete = false,
            }
        }
        if !complete {
            continue;
        }
        let hatted = image
            .terms()
            .any(|(w, _)| w.iter().any(|&g| space.generator(g).kind == GenKind::Hatted));
        let c = if hatted { Calculus::Hatted } else { Calculus::Unhatted };
        let relation = NCPolynomial::from_terms(r.form.iter().cloned()).render(space);
        let case = Case::new(&space.name, format!("relation at line {}", r.line), relation, "zero").calculus(c);
        rep.push(case.outcome(systems[&c].normal_order(&image).map(|p| (p.render(space), "0".into(), p.is_zero()))));
    }
    Ok(rep)
}

/// Hopf gates for both calculi: coproducts against the relations, the
/// antipode axiom on monomials up to `axiom_degree`, and the Leibniz rule of
/// every derivative on monomial pairs of total degree up to `leibniz_degree`.
pub fn hopf_suite(space: &Arc<SpaceDef>, axiom_degree: u32, leibniz_degree: u32) -> Result<SuiteReport> {
    hopf_suite_for(space, None, None, axiom_degree, leibniz_degree)
}

/// [`hopf_suite`] restricted to one calculus and/or one generator.
pub fn hopf_suite_for(
    space: &Arc<SpaceDef>,
    calculus: Option<Calculus>,
    gen: Option<GenId>,
    axiom_degree: u32,
    leibniz_degree: u32,
) -> Result<SuiteReport> {
    let mut jobs = Vec::new();
    for c in CALCULI.into_iter().filter(|c| calculus.is_none_or(|x| x == *c)) {
        for g in Hopf::<Q>::builtin(space.clone(), c)?.data().generators() {
            if gen.is_none_or(|x| x == g) {
                jobs.push((c, g));
            }
        }
    }
    let axiom_monos = monomials(space, axiom_degree);
    let leibniz_monos = monomials(space, leibniz_degree);
    let parts = jobs
        .par_iter()
        .map(|&(c, g)| {
            let h = Hopf::<Q>::builtin(space.clone(), c)?;
            let name = space.name_of(g);
            let mut cases = Vec::new();
            let bad = h.coproduct_check(g);
            cases.push(
                Case::new(&space.name, name, "coordinates", "relations")
                    .calculus(c)
                    .outcome(bad.map(|b| (b.join("; "), String::new(), b.is_empty()))),
            );
            for f in &axiom_monos {
                let r = h.hopf_axiom_check(g, f);
                cases.push(
                    Case::new(&space.name, format!("S-axiom {name}"), f.render(), "counit")
                        .calculus(c)
                        .outcome(r.map(|r| (r.residual, "0".into(), r.ok))),
                );
            }
            if is_derivative(space, g) {
                let left: Vec<_> = leibniz_monos.iter().map(|f| h.left_legs(g, f)).collect::<Result<_>>()?;
                let right: Vec<_> = leibniz_monos.iter().map(|f| h.right_legs(g, f)).collect::<Result<_>>()?;
                for (i, f1) in leibniz_monos.iter().enumerate() {
                    for (j, f2) in leibniz_monos.iter().enumerate() {
                        if f1.degree() + f2.degree() > leibniz_degree {
                            continue;
                        }
                        let lhs = h.leibniz_from_legs(g, &left[i], &right[j]);
                        let rhs = h.star(f1, f2).and_then(|p| h.act_letter(g, &p));
                        cases.push(
                            Case::new(&space.name, format!("Leibniz {name}"), format!("{f1} * {f2}"), "action on star product")
                                .calculus(c)
                                .ordering(Ordering::Forward)
                                .compare(lhs.and_then(|l| Ok((l, rhs?)))),
                        );
                    }
                }
            }
            Ok(cases)
        })
        .collect();
    collect("hopf", parts)
}

/// Minkowski only: the unhatted derivatives are the hatted ones under
/// `x+ <-> x-, q -> 1/q`, checked on the oracle alone, and that map applied
/// twice is the identity on the closed forms.
pub fn transrule_suite(space: &Arc<SpaceDef>, degree: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("transrule");
    if space.name != "minkowski" {
        return Ok(rep);
    }
    let reps = Reps::<Q>::new(space.clone())?;
    let hatted = RewriteSystem::<Q>::new(space.clone(), Calculus::Hatted, Ordering::Forward, Side::Left)?;
    let unhatted = RewriteSystem::<Q>::new(space.clone(), Calculus::Unhatted, Ordering::Reversed, Side::Left)?;
    let swap = reps.swap().to_vec();
    for (h, d) in [("dh+", "d-"), ("dh-", "d+"), ("dht3", "dt3"), ("dh0", "d0")] {
        let (hg, dg) = (space.gen(h)?, space.gen(d)?);
        for f in monomials(space, degree) {
            let case = Case::new(&space.name, format!("{d} from {h}"), f.render(), "conjugated hatted oracle")
                .calculus(Calculus::Unhatted)
                .ordering(Ordering::Reversed);
            rep.push(case.compare((|| {
                let lhs = unhatted.left_action_word(&[dg], &f)?;
                let rhs = conjugate(&swap, true, &f, |p| hatted.left_action_word(&[hg], p))?;
                Ok((lhs, rhs))
            })()));
            let case = Case::new(&space.name, format!("{h} twice mapped"), f.render(), "closed form")
                .calculus(Calculus::Hatted)
                .ordering(Ordering::Forward);
            rep.push(case.compare((|| {
                let twice = conjugate(&swap, true, &f, |p| {
                    conjugate(&swap, true, p, |r| reps.rep_left(None, hg, r, Ordering::Forward))
                })?;
                Ok((twice, reps.rep_left(None, hg, &f, Ordering::Forward)?))
            })()));
        }
    }
    Ok(rep)
}

/// Worked relabeling examples: `(space, source, relabeled)`.
pub const SUBSTITUTION_EXAMPLES: [(&str, &str, &str); 2] = [
    ("euclid3", "x+ x- (D+_q)^2 D-_q f(q^2 x-)", "x- x+ (D-_q)^2 D+_q f(q^2 x+)"),
    ("euclid4", "D1_q^2 D2_q^2 f(q x1, q^2 x3)", "D4_q^2 D3_q^2 f(q x4, q^2 x2)"),
];

/// The worked relabeling examples of `space`, textually and as operators:
/// conjugating the source by the coordinate swap gives the target.
pub fn substitution_suite(space: &Arc<SpaceDef>, degree: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("substitution");
    let reps = Reps::<Q>::new(space.clone())?;
    let coords = space.coords();
    for (_, src, want) in SUBSTITUTION_EXAMPLES.iter().filter(|e| e.0 == space.name) {
        let text = OpExpr::parse(src).and_then(|e| e.permute(coords, reps.swap()));
        rep.push(
            Case::new(&space.name, "swap", *src, "printed example")
                .outcome(text.map(|t| (t.to_string(), want.to_string(), t.to_string() == *want))),
        );
        let src_op = OpExpr::parse(src)?.to_op::<Q>(coords)?;
        let want_op = OpExpr::parse(want)?.to_op::<Q>(coords)?;
        for f in monomials(space, degree) {
            let case = Case::new(&space.name, format!("swap of {src}"), f.render(), "relabeled operator");
            rep.push(case.compare((|| {
                let lhs = conjugate(reps.swap(), false, &f, |p| Ok(src_op.apply(p)))?;
                Ok((lhs, want_op.apply(&f)))
            })()));
        }
    }
    Ok(rep)
}

/// PBW counts, overlap ambiguities and, for Minkowski, the `r^2` identity
/// as report entries.
pub fn validation_suite(space: &Arc<SpaceDef>, degree: u32) -> Result<SuiteReport> {
    let v = validate_space(space, degree)?;
    let mut rep = SuiteReport::new("validation");
    for p in &v.pbw {
        let case = Case::new(&space.name, "PBW count", format!("{} degree {}", p.ordering, p.degree), "commutative count");
        rep.push(case.outcome(Ok((
            format!("{} normal monomials, {} failed ideal checks", p.normal_monomials, p.ideal_failures),
            p.expected.to_string(),
            p.normal_monomials == p.expected && p.ideal_failures == 0,
        ))));
    }
    let case = Case::new(&space.name, "overlaps", format!("{} length-3 words", v.overlaps_checked), "confluence");
    rep.push(case.outcome(Ok((v.overlap_failures.join("; "), String::new(), v.overlap_failures.is_empty()))));
    if let Some(ok) = v.r2_identity {
        rep.push(Case::new(&space.name, "r^2", "both orderings", "r^2 identity").outcome(Ok((ok.to_string(), "true".into(), ok))));
    }
    Ok(rep)
}

/// Every suite of one space at the given bounds.
pub fn run_identity_suites(space: &Arc<SpaceDef>, bounds: IdentityBounds) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("identities");
    rep.extend(u_hat_suite(space, bounds.u_hat)?);
    rep.extend(intertwining_suite(space, bounds.intertwine)?);
    rep.extend(right_suite(space, bounds.right)?);
    rep.extend(conjugation_suite(space)?);
    rep.extend(hopf_suite(space, bounds.hopf_axiom, bounds.leibniz)?);
    rep.extend(transrule_suite(space, bounds.transrule)?);
    rep.extend(substitution_suite(space, bounds.right)?);
    Ok(rep)
}

fn at_one(p: &CommPolynomial<Q>) -> Result<CommPolynomial<Q>> {
    let one = BigRational::one();
    let mut out = CommPolynomial::zero(p.coords().clone());
    for (m, c) in p.terms() {
        out.add_term(m.clone(), Q::from_big_rational(&eval_at(c, &one)?));
    }
    Ok(out)
}

/// At `q = 1` every derivative acts as the constant-coefficient first-order
/// operator `Σ_j c_j ∂/∂x_j`, with `c_j` the oracle's value on `x_j`.
pub fn classical_suite(space: &Arc<SpaceDef>, degree: u32) -> Result<SuiteReport> {
    let reps = Reps::<Q>::new(space.clone())?;
    let coords = space.coords().clone();
    let monos = monomials(space, degree);
    let mut jobs = Vec::new();
    for c in CALCULI {
        for g in space.derivatives(c) {
            jobs.push((c, g));
        }
    }
    let parts = jobs
        .par_iter()
        .map(|&(c, g)| {
            let sys = RewriteSystem::<Q>::new(space.clone(), c, Ordering::Forward, Side::Left)?;
            let mut metric = Vec::new();
            for (j, x) in coords.iter().enumerate() {
                let v = at_one(&sys.left_action_word(&[g], &CommPolynomial::var(coords.clone(), x)?)?)?;
                metric.push((j, v.coeff(&Mono::zeros(coords.len())), v.degree() == 0));
            }
            Ok(monos
                .iter()
                .map(|f| {
                    let case = Case::new(&space.name, space.name_of(g), f.render(), "classical derivative")
                        .calculus(c)
                        .ordering(Ordering::Forward);
                    case.compare((|| {
                        let got = at_one(&reps.rep_left(None, g, f, Ordering::Forward)?)?;
                        let mut want = CommPolynomial::zero(coords.clone());
                        for (j, cj, constant) in &metric {
                            if !constant {
                                return Err(crate::Error::Internal(format!(
                                    "{} on {} is not constant at q = 1",
                                    space.name_of(g),
                                    coords[*j]
                                )));
                            }
                            want.add_scaled(&classical_d(f, *j), cj);
                        }
                        Ok((got, want))
                    })())
                })
                .collect())
        })
        .collect();
    collect("classical-limit", parts)
}

/// Bases of the generalized-derivative grid.
pub const APPENDIX_B_BASES: [&str; 7] = ["1", "q^2", "q^-2", "q^4", "2", "1/3 q^2", "-3/2 q^-2"];

/// Multisets of `(order, base)` blocks of length `1..=max_len`.
fn block_grid(max_order: u32, bases: &[Q], max_len: usize) -> Vec<Vec<(u32, usize)>> {
    let items: Vec<(u32, usize)> = (1..=max_order).flat_map(|k| (0..bases.len()).map(move |b| (k, b))).collect();
    let mut out = Vec::new();
    fn rec(items: &[(u32, usize)], from: usize, cur: &mut Vec<(u32, usize)>, max_len: usize, out: &mut Vec<Vec<(u32, usize)>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        for i in from..items.len() {
            cur.push(items[i]);
            rec(items, i, cur, max_len, out);
            cur.pop();
        }
    }
    rec(&items, 0, &mut Vec::new(), max_len, &mut out);
    out
}

/// Generalized derivatives: literal nested sums against the reduced
/// expansion for every multiset of up to `max_len` blocks of order up to
/// `max_order` over [`APPENDIX_B_BASES`] and `n <= n_max`; the three rules
/// and the permutation, binomial and merge properties on the same grid;
/// `(K_n)^{(k)}_1 = C(n, k)` for `n <= binom_max`.
pub fn appendix_b_suite(n_max: u32, max_len: usize, max_order: u32, binom_max: u32) -> Result<SuiteReport> {
    let bases: Vec<Q> = APPENDIX_B_BASES.iter().map(|b| parse_qrational(b)).collect::<Result<_>>()?;
    let b = Q::q_pow(2);
    let grid = block_grid(max_order, &bases, max_len);
    let parts = grid
        .par_iter()
        .map(|blocks| {
            let spec = KOperatorSpec::new(
                blocks.iter().map(|&(k, _)| k).collect(),
                blocks.iter().map(|&(_, i)| bases[i].clone()).collect(),
                "x",
            )?;
            let label = format!(
                "orders {:?} bases [{}]",
                spec.orders,
                blocks.iter().map(|&(_, i)| APPENDIX_B_BASES[i]).collect::<Vec<_>>().join(", ")
            );
            let red = gen_d_reduce(&spec);
            let perm: Vec<usize> = (0..blocks.len()).rev().collect();
            let mut cases = Vec::new();
            for n in spec.total_order()..=n_max {
                let case = Case::new("-", "K brute force", format!("{label} n {n}"), "reduced D");
                cases.push(case.outcome(k_bruteforce(n, &spec).map(|k| {
                    let r = red.eval_coeff(n);
                    (k.render(), r.render(), k == r)
                })));
                let case = Case::new("-", "K properties", format!("{label} n {n}"), "rules 1-3");
                cases.push(case.outcome(k_properties_check(n, &spec, &perm, &b).map(|p| (format!("{p:?}"), String::new(), p.all()))));
            }
            Ok(cases)
        })
        .collect();
    let mut rep = collect("appendix-b", parts)?;
    for n in 0..=binom_max {
        for k in 1..=n {
            let spec = KOperatorSpec::new(vec![k], vec![Q::one()], "x")?;
            let case = Case::new("-", "K with base 1", format!("n {n} k {k}"), "binomial");
            rep.push(case.outcome(k_bruteforce(n, &spec).map(|v| {
                let want = Q::from_int(binom(n, k));
                (v.render(), want.render(), v == want)
            })));
        }
    }
    Ok(rep)
}

/// Tuples `(j_1..j_m)` with `Σ j <= budget`, reduced to the sums over odd
/// and even positions.
fn nested_sums(m: usize, budget: u32) -> Vec<(u32, u32)> {
    fn rec(pos: usize, m: usize, left: u32, odd: u32, even: u32, out: &mut Vec<(u32, u32)>) {
        if pos > m {
            out.push((odd, even));
            return;
        }
        for j in 0..=left {
            let (o, e) = if pos % 2 == 1 { (odd + j, even) } else { (odd, even + j) };
            rec(pos + 1, m, left - j, o, e, out);
        }
    }
    let mut out = Vec::new();
    rec(1, m, budget, 0, 0, &mut out);
    out
}

/// The three groups of the closed expression for `∂̃³ (X³)^n` in the
/// unhatted Minkowski calculus, keyed by their trailing factor.
pub fn worked_identity_groups(space: &SpaceDef, n: u32) -> Result<[NCPolynomial<Q>; 3]> {
    let g = |s: &str| space.gen(s);
    let (x3, xt3, xp, xm) = (g("x3")?, g("xt3")?, g("x+")?, g("x-")?);
    let (dt3, dp) = (g("dt3")?, g("d+")?);
    let l = lambda();
    let lp_inv = lambda_plus().inv().expect("lambda_+ is nonzero");
    // (-q^-2 λ²/λ₊)^k: the alternating sign is forced by the X- X+ exchange
    let c = -(Q::q_pow(-2) * l.clone() * l.clone() * lp_inv.clone());
    let y = NCPolynomial::gen(x3).add(&NCPolynomial::term(Word::from_slice(&[xt3]), l.clone() * lp_inv));
    let pow = |p: &NCPolynomial<Q>, e: u32| (0..e).fold(NCPolynomial::one(), |acc, _| acc.mul(p));
    let xmxp = NCPolynomial::word(Word::from_slice(&[xm, xp]));
    let word = |w: &[GenId]| NCPolynomial::word(Word::from_slice(w));
    let n = n as i64;
    let mut groups = [NCPolynomial::zero(), NCPolynomial::zero(), NCPolynomial::zero()];
    for k in 0..=n / 2 {
        let rest = (n - 2 * k) as u32;
        let weight: Q = nested_sums(2 * k as usize, rest)
            .into_iter()
            .fold(Q::zero(), |acc, (_, even)| acc + Q::q_pow(2 * even as i64));
        let t = pow(&y, rest).mul(&pow(&xmxp, k as u32)).mul(&word(&[dt3]));
        groups[0].add_scaled(&t, &(c.powi(k) * weight * Q::q_pow(-2 * rest as i64)));
    }
    for k in (0..=(n - 1) / 2).filter(|_| n >= 1) {
        let rest = (n - 2 * k - 1) as u32;
        let mut weight = Q::zero();
        for (odd, even) in nested_sums(2 * k as usize + 1, rest) {
            let w = Q::q_pow(-2 * odd as i64);
            weight += w.clone();
            let total = odd + even;
            let t = pow(&y, total).mul(&pow(&xmxp, k as u32)).mul(&pow(&NCPolynomial::gen(x3), rest - total));
            groups[2].add_scaled(&t, &(c.powi(k) * w));
        }
        let t = pow(&y, rest).mul(&pow(&xmxp, k as u32)).mul(&word(&[xm, dp]));
        groups[1].add_scaled(&t, &(Q::q_pow(-2) * l.clone() * c.powi(k) * weight));
    }
    Ok(groups)
}

/// `∂̃³ (X³)^n` normal ordered by the oracle against the closed expression,
/// group by group, for `1 <= n <= n_max`.
pub fn worked_identity_suite(n_max: u32) -> Result<SuiteReport> {
    let space = Arc::new(SpaceDef::builtin("minkowski")?);
    let sys = RewriteSystem::<Q>::new(space.clone(), Calculus::Unhatted, Ordering::Forward, Side::Left)?;
    let (dt3, dp, x3) = (space.gen("dt3")?, space.gen("d+")?, space.gen("x3")?);
    let mut rep = SuiteReport::new("worked-identity");
    for n in 1..=n_max {
        let mut w = vec![dt3];
        w.extend(std::iter::repeat_n(x3, n as usize));
        let lhs = sys.normal_word(&w)?;
        let closed = worked_identity_groups(&space, n)?;
        let mut split = [NCPolynomial::zero(), NCPolynomial::zero(), NCPolynomial::zero()];
        for (word, c) in lhs.terms() {
            let i = match word.last() {
                Some(&g) if g == dt3 => 0,
                Some(&g) if g == dp => 1,
                _ => 2,
            };
            split[i].add_term(word.clone(), c.clone());
        }
        for (i, label) in ["ending in dt3", "ending in x- d+", "without derivative"].iter().enumerate() {
            let case = Case::new(&space.name, format!("dt3 (x3)^{n}"), *label, "oracle normal order")
                .calculus(Calculus::Unhatted)
                .ordering(Ordering::Forward);
            rep.push(case.outcome(sys.normal_order(&closed[i]).map(|p| {
                (p.render(&space), split[i].render(&space), p == split[i])
            })));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(name: &str) -> Arc<SpaceDef> {
        Arc::new(SpaceDef::builtin(name).unwrap())
    }

    #[test]
    fn nested_sum_counts() {
        // tuples of length m with sum <= b: C(b + m, m)
        assert_eq!(nested_sums(0, 3), vec![(0, 0)]);
        assert_eq!(nested_sums(2, 3).len(), 10);
        assert_eq!(nested_sums(3, 2).len(), 10);
    }

    #[test]
    fn degree_zero_slice_passes() {
        for name in ["euclid3", "euclid4", "minkowski"] {
            let r = run_equivalence(&space(name), None, 0).unwrap();
            assert!(r.ok(), "{}", r.render_text(false));
            assert_eq!(r.summary.total, r.cases.len());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let sp = space("euclid3");
        let a = run_equivalence(&sp, Some(Calculus::Unhatted), 2).unwrap();
        let b = run_equivalence(&sp, Some(Calculus::Unhatted), 2).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.summary.passed + a.summary.failed, a.summary.total);
    }

    #[test]
    fn failures_are_counted() {
        let mut r = SuiteReport::new("t");
        r.push(Case::new("s", "g", "1", "ref").outcome(Ok(("1".into(), "2".into(), false))));
        r.push(Case::new("s", "g", "1", "ref").outcome(Err(crate::Error::Internal("x".into()))));
        assert_eq!(r.summary, Summary { total: 2, passed: 0, failed: 2 });
        assert!(r.render_text(false).contains("FAIL"));
    }

    #[test]
    fn worked_identity_low_n() {
        let r = worked_identity_suite(3).unwrap();
        assert!(r.ok(), "{}", r.render_text(false));
    }

    #[test]
    fn substitution_examples() {
        for name in ["euclid3", "euclid4"] {
            let r = substitution_suite(&space(name), 3).unwrap();
            assert!(r.ok(), "{}", r.render_text(false));
            assert!(r.summary.total > 1);
        }
    }

    #[test]
    fn conjugation_is_compatible_with_relations() {
        for name in ["euclid3", "euclid4", "minkowski"] {
            let r = conjugation_suite(&space(name)).unwrap();
            assert!(r.ok(), "{}", r.render_text(false));
        }
    }

    #[test]
    fn classical_limit_low_degree() {
        for name in ["euclid3", "euclid4", "minkowski"] {
            let r = classical_suite(&space(name), 2).unwrap();
            assert!(r.ok(), "{}", r.render_text(false));
        }
    }

    #[test]
    fn appendix_b_small_grid() {
        let r = appendix_b_suite(5, 2, 2, 6).unwrap();
        assert!(r.ok(), "{}", r.render_text(false));
    }
}
