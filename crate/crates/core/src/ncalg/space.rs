//! Space definitions loaded from relation files.
//!
//! A relation file is a sequence of `[section]` blocks. Relation lines read
//! `A B -> rhs` and state the algebra identity `A*B = rhs`; the right side is
//! a sum of terms `coeff * WORD`, `WORD` or `coeff`. Coefficients follow the
//! scalar grammar; products containing `q^(n/2)` and `lambdap^(n/2)` are
//! allowed when the half powers pair up into `theta = q^(1/2) lambdap^(1/2)`.
//! Generators listed under `[odd]` are stored rescaled by `1/theta`, which
//! makes every coefficient rational.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::Coords;
use crate::scalar::{lambda_plus, parse_qrational, QRational};

pub type GenId = u16;
pub type Word = SmallVec<[GenId; 8]>;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum GenKind {
    Coordinate,
    Unhatted,
    Hatted,
    Symmetry,
    Scaling,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Calculus {
    Unhatted,
    Hatted,
}

impl Calculus {
    pub fn other(self) -> Self {
        match self {
            Calculus::Unhatted => Calculus::Hatted,
            Calculus::Hatted => Calculus::Unhatted,
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::Unhatted => "unhatted",
            Calculus::Hatted => "hatted",
        })
    }
}

/// Which of the two normal orderings of the coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Ordering {
    Forward,
    Reversed,
}

impl Ordering {
    pub fn flip(self) -> Self {
        match self {
            Ordering::Forward => Ordering::Reversed,
            Ordering::Reversed => Ordering::Forward,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Forward => "forward",
            Ordering::Reversed => "reversed",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Section {
    Coordinates,
    Unhatted,
    Hatted,
    Symmetry,
}

#[derive(Clone, Debug)]
pub struct Generator {
    /// Identifier used inside data files.
    pub id: String,
    /// Shell-safe name used on the command line and as coordinate name.
    pub name: String,
    pub kind: GenKind,
    /// `None` for coordinates.
    pub counit: Option<QRational>,
    pub odd: bool,
}

impl Generator {
    pub fn is_coordinate(&self) -> bool {
        self.kind == GenKind::Coordinate
    }
}

/// A linear combination of words, stored sparsely.
pub type LinComb = Vec<(Word, QRational)>;

/// One relation `lhs - rhs = 0` as a linear form over words.
#[derive(Clone, Debug)]
pub struct Relation {
    pub section: Section,
    pub form: LinComb,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct SpaceDef {
    pub name: String,
    generators: Vec<Generator>,
    lookup: HashMap<String, GenId>,
    aliases: HashMap<String, Vec<(GenId, QRational)>>,
    orderings: [Vec<GenId>; 2],
    relations: Vec<Relation>,
    conjugation: Vec<(GenId, LinComb)>,
    coords: Coords,
}

const SHIPPED: [(&str, &str); 3] = [
    ("euclid3", include_str!("../../data/euclid3.relations")),
    ("euclid4", include_str!("../../data/euclid4.relations")),
    ("minkowski", include_str!("../../data/minkowski.relations")),
];

/// Names of the shipped spaces.
pub fn space_names() -> [&'static str; 3] {
    [SHIPPED[0].0, SHIPPED[1].0, SHIPPED[2].0]
}

impl SpaceDef {
    /// One of the definitions compiled into the library.
    pub fn builtin(name: &str) -> Result<Self> {
        let (_, text) = SHIPPED
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownSpace(name.to_string()))?;
        Self::parse(name, text)
    }

    /// Loads `<dir>/<name>.relations`.
    pub fn from_dir(dir: &Path, name: &str) -> Result<Self> {
        let path = dir.join(format!("{name}.relations"));
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(name, &text)
    }

    pub fn parse(name: &str, text: &str) -> Result<Self> {
        Loader::new(name).run(text)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.generators[g as usize]
    }

    /// Resolves a data-file id or a command-line name.
    pub fn gen(&self, name: &str) -> Result<GenId> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(format!("`{name}` in {}", self.name)))
    }

    pub fn name_of(&self, g: GenId) -> &str {
        &self.generators[g as usize].name
    }

    pub fn id_of(&self, g: GenId) -> &str {
        &self.generators[g as usize].id
    }

    /// Parses a whitespace-separated word of generator names.
    pub fn word(&self, text: &str) -> Result<Word> {
        text.split_whitespace()
            .filter(|t| *t != "1")
            .map(|t| self.gen(t))
            .collect()
    }

    pub fn render_word(&self, w: &[GenId]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&g| self.name_of(g)).collect::<Vec<_>>().join(" ")
    }

    /// Coordinate generators in the given ordering.
    pub fn ordering(&self, o: Ordering) -> &[GenId] {
        &self.orderings[o.index()]
    }

    /// Commutative coordinate names in declaration order.
    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// Index into [`Self::coords`] of a coordinate generator.
    pub fn coord_index(&self, g: GenId) -> Option<usize> {
        self.coords.iter().position(|c| *c == self.generators[g as usize].name)
    }

    pub fn coordinate_gens(&self) -> Vec<GenId> {
        self.ids_of_kind(|k| k == GenKind::Coordinate)
    }

    pub fn derivatives(&self, c: Calculus) -> Vec<GenId> {
        let want = match c {
            Calculus::Unhatted => GenKind::Unhatted,
            Calculus::Hatted => GenKind::Hatted,
        };
        self.ids_of_kind(|k| k == want)
    }

    /// Symmetry and scaling generators.
    pub fn symmetries(&self) -> Vec<GenId> {
        self.ids_of_kind(|k| matches!(k, GenKind::Symmetry | GenKind::Scaling))
    }

    fn ids_of_kind(&self, pred: impl Fn(GenKind) -> bool) -> Vec<GenId> {
        (0..self.generators.len() as GenId)
            .filter(|&g| pred(self.generators[g as usize].kind))
            .collect()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn alias(&self, name: &str) -> Option<&[(GenId, QRational)]> {
        self.aliases.get(name).map(|v| v.as_slice())
    }

    pub fn conjugation(&self) -> &[(GenId, LinComb)] {
        &self.conjugation
    }

    pub fn conjugate_of(&self, g: GenId) -> Option<&LinComb> {
        self.conjugation.iter().find(|(h, _)| *h == g).map(|(_, c)| c)
    }

    /// Constant terms of the derivative-coordinate relations, keyed by
    /// (derivative, coordinate). These are the metric entries.
    pub fn metric(&self, c: Calculus) -> Vec<(GenId, GenId, QRational)> {
        let sec = match c {
            Calculus::Unhatted => Section::Unhatted,
            Calculus::Hatted => Section::Hatted,
        };
        let mut out = Vec::new();
        for r in self.relations.iter().filter(|r| r.section == sec) {
            let lhs = r.form.iter().find(|(w, _)| w.len() == 2 && !self.generator(w[0]).is_coordinate());
            let cst = r.form.iter().find(|(w, _)| w.is_empty());
            if let (Some((w, a)), Some((_, c0))) = (lhs, cst) {
                // form is lhs - rhs, so the constant enters with a minus sign
                out.push((w[0], w[1], -c0.clone() / a.clone()));
            }
        }
        out
    }

    /// Total theta weight of a word: the number of odd generators.
    pub fn odd_count(&self, w: &[GenId]) -> u32 {
        w.iter().filter(|&&g| self.generators[g as usize].odd).count() as u32
    }

    /// Expands a token list (generators or aliases) into a linear
    /// combination of words.
    pub fn expand_tokens(&self, tokens: &[&str]) -> Result<LinComb> {
        let mut acc: LinComb = vec![(Word::new(), QRational::one())];
        for t in tokens {
            let options: Vec<(GenId, QRational)> = if let Some(a) = self.aliases.get(*t) {
                a.clone()
            } else {
                vec![(self.gen(t)?, QRational::one())]
            };
            let mut next = Vec::with_capacity(acc.len() * options.len());
            for (w, c) in &acc {
                for (g, d) in &options {
                    let mut w2 = w.clone();
                    w2.push(*g);
                    next.push((w2, c * d));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Parses the right side of a relation or antipode line into a
    /// linear combination, applying the odd-generator normalization relative
    /// to `base_weight`, the theta weight of the left side.
    pub(crate) fn parse_comb(&self, rhs: &str, base_weight: u32, ctx: &str) -> Result<LinComb> {
        let mut out = Vec::new();
        for t in split_terms(rhs) {
            let raw = parse_term(&t, &|tok| self.is_word_token(tok), ctx)?;
            let Body::Word(toks) = &raw.body else {
                return Err(Error::Config(format!("{ctx}: unexpected tensor term `{t}`")));
            };
            for (w, c) in self.expand_tokens(&toks.iter().map(|s| s.as_str()).collect::<Vec<_>>())? {
                let weight = raw.theta as u32 + self.odd_count(&w);
                let c = c * raw.coeff.clone() * theta_sq_power(weight, base_weight, ctx)?;
                out.push((w, c));
            }
        }
        Ok(out)
    }

    /// Parses a user expression `coeff * WORD + ...` over generator names or
    /// ids. Odd generators are taken as stored, without theta factors.
    pub fn parse_expression(&self, text: &str) -> Result<LinComb> {
        let as_parse = |e: Error| match e {
            Error::Config(msg) => Error::parse(0, msg.trim_start_matches("expression: ")),
            e => e,
        };
        // names such as `x+` carry signs, so only free-standing `+`/`-` split
        let mut terms = vec![String::new()];
        let mut depth = 0i32;
        for tok in text.split_whitespace() {
            depth += tok.matches('(').count() as i32 - tok.matches(')').count() as i32;
            if depth == 0 && (tok == "+" || tok == "-") {
                terms.push(if tok == "-" { "-".into() } else { String::new() });
            } else {
                let t = terms.last_mut().expect("nonempty");
                t.push(' ');
                t.push_str(tok);
            }
        }
        let mut out = Vec::new();
        for t in terms.iter().filter(|t| !t.trim().is_empty() && t.trim() != "-") {
            let raw = parse_term(t, &|tok| self.is_word_token(tok), "expression").map_err(as_parse)?;
            let Body::Word(toks) = &raw.body else {
                return Err(Error::parse(0, format!("unexpected tensor term `{t}`")));
            };
            if raw.theta {
                return Err(Error::parse(0, format!("half-integer power in `{t}`")));
            }
            for (w, c) in self.expand_tokens(&toks.iter().map(|s| s.as_str()).collect::<Vec<_>>())? {
                out.push((w, c * raw.coeff.clone()));
            }
        }
        Ok(collect(out))
    }

    /// Parses a sum of `coeff * (WORD | WORD)` terms.
    pub(crate) fn parse_tensor(
        &self,
        rhs: &str,
        base_weight: u32,
        ctx: &str,
    ) -> Result<Vec<(Word, Word, QRational)>> {
        let mut out = Vec::new();
        for t in split_terms(rhs) {
            let raw = parse_term(&t, &|tok| self.is_word_token(tok), ctx)?;
            let Body::Tensor(l, r) = &raw.body else {
                return Err(Error::Config(format!("{ctx}: expected `(A | B)` in `{t}`")));
            };
            let lt: Vec<&str> = l.iter().map(|s| s.as_str()).collect();
            let rt: Vec<&str> = r.iter().map(|s| s.as_str()).collect();
            for (lw, lc) in self.expand_tokens(&lt)? {
                for (rw, rc) in self.expand_tokens(&rt)? {
                    let weight = raw.theta as u32 + self.odd_count(&lw) + self.odd_count(&rw);
                    let c = raw.coeff.clone() * lc.clone() * rc * theta_sq_power(weight, base_weight, ctx)?;
                    out.push((lw.clone(), rw, c));
                }
            }
        }
        Ok(out)
    }

    fn is_word_token(&self, tok: &str) -> bool {
        tok == "1" || self.lookup.contains_key(tok) || self.aliases.contains_key(tok)
    }
}

/// `(q lambdap)^((weight - base)/2)`; the weights must agree in parity.
fn theta_sq_power(weight: u32, base: u32, ctx: &str) -> Result<QRational> {
    let d = weight as i64 - base as i64;
    if d % 2 != 0 {
        return Err(Error::Config(format!(
            "{ctx}: half-integer power of q lambdap does not cancel"
        )));
    }
    Ok((QRational::q() * lambda_plus()).pow(d / 2))
}

#[derive(Debug)]
enum Body {
    Word(Vec<String>),
    Tensor(Vec<String>, Vec<String>),
}

#[derive(Debug)]
struct RawTerm {
    coeff: QRational,
    /// Whether the coefficient carries one factor of theta.
    theta: bool,
    body: Body,
}

/// Splits at top-level `+`/`-` that are binary operators.
fn split_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let prev = cur.trim_end().chars().last();
        let binary = matches!(prev, Some(p) if p != '^' && p != '*' && p != '(');
        if (ch == '+' || ch == '-') && depth == 0 && binary {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

fn top_level_star(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut found = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => found = Some(i),
            _ => {}
        }
    }
    found
}

fn parse_term(t: &str, is_tok: &dyn Fn(&str) -> bool, ctx: &str) -> Result<RawTerm> {
    let mut s = t.trim();
    let mut neg = false;
    while let Some(rest) = s.strip_prefix(['+', '-']) {
        neg ^= s.starts_with('-');
        s = rest.trim_start();
    }
    let (coeff_txt, body_txt) = match top_level_star(s) {
        Some(i) => (&s[..i], s[i + 1..].trim()),
        None if looks_like_body(s, is_tok) => ("", s),
        None => (s, ""),
    };
    let (coeff, theta) = if coeff_txt.trim().is_empty() {
        (QRational::one(), false)
    } else {
        parse_root_coeff(coeff_txt).map_err(|e| Error::Config(format!("{ctx}: {e}")))?
    };
    let body = parse_body(body_txt, is_tok, ctx)?;
    Ok(RawTerm {
        coeff: if neg { -coeff } else { coeff },
        theta,
        body,
    })
}

fn looks_like_body(s: &str, is_tok: &dyn Fn(&str) -> bool) -> bool {
    if let Some(inner) = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        if inner.contains('|') {
            return true;
        }
    }
    let toks: Vec<&str> = s.split_whitespace().collect();
    !toks.is_empty() && toks.iter().all(|t| is_tok(t)) && !(toks.len() == 1 && toks[0] == "1")
}

fn parse_body(s: &str, is_tok: &dyn Fn(&str) -> bool, ctx: &str) -> Result<Body> {
    let tokens = |x: &str| -> Result<Vec<String>> {
        let v: Vec<String> = x
            .split_whitespace()
            .filter(|t| *t != "1")
            .map(str::to_string)
            .collect();
        if let Some(bad) = v.iter().find(|t| !is_tok(t)) {
            return Err(Error::Config(format!("{ctx}: unknown generator `{bad}`")));
        }
        Ok(v)
    };
    if let Some(inner) = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        if let Some((l, r)) = inner.split_once('|') {
            return Ok(Body::Tensor(tokens(l)?, tokens(r)?));
        }
    }
    Ok(Body::Word(tokens(s)?))
}

/// Parses a coefficient, factoring out half-integer powers of `q` and
/// `lambdap`. Returns the rational part and whether a factor theta remains.
fn parse_root_coeff(s: &str) -> Result<(QRational, bool)> {
    let mut text = String::with_capacity(s.len());
    let mut half_q = false;
    let mut half_l = false;
    let mut rest = s;
    while let Some(i) = rest.find("^(") {
        let close = rest[i..]
            .find(')')
            .map(|j| i + j)
            .ok_or_else(|| Error::parse(i, "unbalanced exponent"))?;
        let inner = rest[i + 2..close].trim();
        let head = &rest[..i];
        text.push_str(head);
        if let Some((n, d)) = inner.split_once('/') {
            if d.trim() != "2" {
                return Err(Error::parse(i, "only halves are supported as fractional exponents"));
            }
            let n: i64 = n.trim().parse().map_err(|_| Error::parse(i, "bad exponent"))?;
            let base = if head.ends_with("lambdap") {
                &mut half_l
            } else if head.ends_with('q') {
                &mut half_q
            } else {
                return Err(Error::parse(i, "half powers apply to q or lambdap only"));
            };
            if n.rem_euclid(2) == 1 {
                *base = !*base;
            }
            text.push_str(&format!("^({})", n.div_euclid(2)));
        } else {
            text.push_str(&rest[i..=close]);
        }
        rest = &rest[close + 1..];
    }
    text.push_str(rest);
    if half_q != half_l {
        return Err(Error::parse(0, "unpaired half power of q or lambdap"));
    }
    Ok((parse_qrational(&text)?, half_q))
}

struct Loader {
    def: SpaceDef,
    odd: Vec<String>,
}

impl Loader {
    fn new(name: &str) -> Self {
        Loader {
            def: SpaceDef {
                name: name.to_string(),
                generators: Vec::new(),
                lookup: HashMap::new(),
                aliases: HashMap::new(),
                orderings: [Vec::new(), Vec::new()],
                relations: Vec::new(),
                conjugation: Vec::new(),
                coords: Vec::<String>::new().into(),
            },
            odd: Vec::new(),
        }
    }

    fn err(&self, line: usize, msg: impl fmt::Display) -> Error {
        Error::Config(format!("{}.relations:{line}: {msg}", self.def.name))
    }

    fn run(mut self, text: &str) -> Result<SpaceDef> {
        let mut section = String::new();
        let mut pending: Vec<(usize, String, String)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(s) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = s.trim().to_string();
                continue;
            }
            match section.as_str() {
                "generators" => self.generator(line_no, line)?,
                "odd" => self.odd.extend(line.split_whitespace().map(str::to_string)),
                "alias" | "orderings" => pending.push((line_no, section.clone(), line.to_string())),
                "coordinates" | "unhatted" | "hatted" | "symmetry" | "conjugation" => {
                    pending.push((line_no, section.clone(), line.to_string()))
                }
                "" => return Err(self.err(line_no, "content before the first section")),
                other => return Err(self.err(line_no, format!("unknown section `{other}`"))),
            }
        }
        for name in std::mem::take(&mut self.odd) {
            let g = self.def.gen(&name).map_err(|_| self.err(0, format!("odd: unknown `{name}`")))?;
            self.def.generators[g as usize].odd = true;
        }
        self.def.coords = self
            .def
            .generators
            .iter()
            .filter(|g| g.is_coordinate())
            .map(|g| g.name.clone())
            .collect::<Vec<_>>()
            .into();
        // aliases and orderings first, relations may refer to them
        pending.sort_by_key(|(_, s, _)| !matches!(s.as_str(), "alias" | "orderings"));
        for (line_no, sec, line) in pending {
            match sec.as_str() {
                "alias" => self.alias(line_no, &line)?,
                "orderings" => self.ordering(line_no, &line)?,
                "conjugation" => self.conjugation(line_no, &line)?,
                s => self.relation(line_no, s, &line)?,
            }
        }
        for o in [Ordering::Forward, Ordering::Reversed] {
            let mut v = self.def.orderings[o.index()].clone();
            v.sort_unstable();
            if v != self.def.coordinate_gens() {
                return Err(self.err(0, format!("ordering {o} must list every coordinate once")));
            }
        }
        Ok(self.def)
    }

    fn generator(&mut self, line_no: usize, line: &str) -> Result<()> {
        let p: Vec<&str> = line.split_whitespace().collect();
        if p.len() != 4 {
            return Err(self.err(line_no, "expected `id kind eps name`"));
        }
        let kind = match p[1] {
            "coordinate" => GenKind::Coordinate,
            "unhatted" => GenKind::Unhatted,
            "hatted" => GenKind::Hatted,
            "symmetry" => GenKind::Symmetry,
            "scaling" => GenKind::Scaling,
            k => return Err(self.err(line_no, format!("unknown kind `{k}`"))),
        };
        let counit = match (kind, p[2]) {
            (GenKind::Coordinate, "-") => None,
            (GenKind::Coordinate, _) => return Err(self.err(line_no, "coordinates have no counit")),
            (_, e) => Some(parse_qrational(e).map_err(|e| self.err(line_no, e))?),
        };
        let id = self.def.generators.len() as GenId;
        for key in [p[0], p[3]] {
            if let Some(&prev) = self.def.lookup.get(key) {
                if prev != id {
                    return Err(self.err(line_no, format!("duplicate generator name `{key}`")));
                }
            }
            self.def.lookup.insert(key.to_string(), id);
        }
        self.def.generators.push(Generator {
            id: p[0].to_string(),
            name: p[3].to_string(),
            kind,
            counit,
            odd: false,
        });
        Ok(())
    }

    fn alias(&mut self, line_no: usize, line: &str) -> Result<()> {
        let (name, rhs) = line
            .split_once('=')
            .ok_or_else(|| self.err(line_no, "expected `NAME = combination`"))?;
        let ctx = format!("{}.relations:{line_no}", self.def.name);
        let comb = self.def.parse_comb(rhs, 0, &ctx)?;
        let mut lin = Vec::new();
        for (w, c) in comb {
            if w.len() != 1 {
                return Err(self.err(line_no, "aliases must be linear in generators"));
            }
            lin.push((w[0], c));
        }
        let name = name.trim().to_string();
        // `x0` style lower-case name for polynomial input
        self.def.aliases.insert(name.to_lowercase(), lin.clone());
        self.def.aliases.insert(name, lin);
        Ok(())
    }

    fn ordering(&mut self, line_no: usize, line: &str) -> Result<()> {
        let (key, rhs) = line
            .split_once('=')
            .ok_or_else(|| self.err(line_no, "expected `forward = ...`"))?;
        let o = match key.trim() {
            "forward" => Ordering::Forward,
            "reversed" => Ordering::Reversed,
            k => return Err(self.err(line_no, format!("unknown ordering `{k}`"))),
        };
        let w = self.def.word(rhs).map_err(|e| self.err(line_no, e))?;
        if w.iter().any(|&g| !self.def.generator(g).is_coordinate()) {
            return Err(self.err(line_no, "orderings list coordinates only"));
        }
        self.def.orderings[o.index()] = w.into_vec();
        Ok(())
    }

    fn split_arrow<'a>(&self, line_no: usize, line: &'a str) -> Result<(&'a str, &'a str)> {
        line.split_once("->")
            .ok_or_else(|| self.err(line_no, "expected `->`"))
    }

    fn relation(&mut self, line_no: usize, sec: &str, line: &str) -> Result<()> {
        let section = match sec {
            "coordinates" => Section::Coordinates,
            "unhatted" => Section::Unhatted,
            "hatted" => Section::Hatted,
            _ => Section::Symmetry,
        };
        let (lhs, rhs) = self.split_arrow(line_no, line)?;
        let ctx = format!("{}.relations:{line_no}", self.def.name);
        let toks: Vec<&str> = lhs.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(self.err(line_no, "left side must be a pair of generators"));
        }
        let lhs_comb = self.def.expand_tokens(&toks)?;
        let base = self.def.odd_count(&lhs_comb[0].0);
        let mut form: LinComb = lhs_comb;
        for (w, c) in self.def.parse_comb(rhs, base, &ctx)? {
            form.push((w, -c));
        }
        self.def.relations.push(Relation {
            section,
            form: collect(form),
            line: line_no,
        });
        Ok(())
    }

    fn conjugation(&mut self, line_no: usize, line: &str) -> Result<()> {
        let (lhs, rhs) = self.split_arrow(line_no, line)?;
        let g = self.def.gen(lhs.trim()).map_err(|e| self.err(line_no, e))?;
        let ctx = format!("{}.relations:{line_no}", self.def.name);
        let comb = self.def.parse_comb(rhs, self.def.odd_count(&[g]), &ctx)?;
        self.def.conjugation.push((g, collect(comb)));
        Ok(())
    }
}

/// Merges equal words and drops zero coefficients.
pub fn collect(v: LinComb) -> LinComb {
    let mut m: std::collections::BTreeMap<Word, QRational> = Default::default();
    for (w, c) in v {
        let e = m.entry(w).or_insert_with(QRational::zero);
        *e += c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::lambda;

    #[test]
    fn loads_shipped_spaces() {
        for n in space_names() {
            let s = SpaceDef::builtin(n).unwrap();
            assert!(!s.relations().is_empty(), "{n}");
        }
    }

    #[test]
    fn relation_form_matches_text() {
        let s = SpaceDef::builtin("euclid3").unwrap();
        let dm = s.gen("d-").unwrap();
        let xp = s.gen("x+").unwrap();
        let r = s
            .relations()
            .iter()
            .find(|r| r.form.iter().any(|(w, _)| w.as_slice() == [dm, xp]))
            .unwrap();
        let cst = r.form.iter().find(|(w, _)| w.is_empty()).unwrap();
        assert_eq!(cst.1, QRational::q_pow(-1));
        assert_eq!(r.form.len(), 3);
    }

    #[test]
    fn half_powers_normalize() {
        let (c, th) = parse_root_coeff("q^(-3/2) lambdap^(1/2)").unwrap();
        assert!(th);
        assert_eq!(c, QRational::q_pow(-2));
        let (c, th) = parse_root_coeff("q^(3/2) lambdap^(-1/2) lambda^2").unwrap();
        assert!(th);
        assert_eq!(c, QRational::q() * lambda() * lambda() / lambda_plus());
        assert!(parse_root_coeff("q^(1/2)").is_err());
    }

    #[test]
    fn odd_generators_get_rational_coefficients() {
        let s = SpaceDef::builtin("minkowski").unwrap();
        let tp = s.gen("T+").unwrap();
        let xt = s.gen("xt3").unwrap();
        let xp = s.gen("x+").unwrap();
        let r = s
            .relations()
            .iter()
            .find(|r| {
                r.form.iter().any(|(w, _)| w.as_slice() == [tp, xt])
                    && r.form.iter().any(|(w, _)| w.as_slice() == [xp])
            })
            .unwrap();
        let lone = r.form.iter().find(|(w, _)| w.as_slice() == [xp]).unwrap();
        assert_eq!(lone.1, -QRational::q_pow(-2));
    }

    #[test]
    fn terms_split_on_binary_signs_only() {
        let t = split_terms("-q^-1 + q^4 * Xp dm - (a - b) * X");
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn metric_from_constants() {
        let s = SpaceDef::builtin("euclid3").unwrap();
        let m = s.metric(Calculus::Unhatted);
        assert_eq!(m.len(), 3);
    }
}
