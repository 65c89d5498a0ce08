//! Polynomials in commuting coordinates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{parse_qrational_at, QRational, Scalar};

/// Exponent vector ordered graded-lexicographically: lower total degree
/// first, ties broken lexicographically with the first coordinate most
/// significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(pub SmallVec<[u32; 6]>);

impl Mono {
    pub fn zeros(n: usize) -> Self {
        Mono(SmallVec::from_elem(0, n))
    }

    pub fn from_slice(e: &[u32]) -> Self {
        Mono(SmallVec::from_slice(e))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// All exponent vectors in `n` variables of total degree `d`, in
    /// graded-lex order.
    pub fn of_degree(n: usize, d: u32) -> Vec<Mono> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Mono>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(Mono::from_slice(prefix));
                prefix.pop();
                return;
            }
            for k in 0..=d {
                prefix.push(k);
                rec(n, d - k, prefix, out);
                prefix.pop();
            }
        }
        if n == 0 {
            return if d == 0 { vec![Mono::zeros(0)] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// All exponent vectors of total degree at most `d`.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<Mono> {
        (0..=d).flat_map(|k| Mono::of_degree(n, k)).collect()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered coordinate names shared between polynomials.
pub type Coords = Arc<[String]>;

pub fn coords(names: &[&str]) -> Coords {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

/// Sparse polynomial with scalar coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct CommPolynomial<S> {
    coords: Coords,
    terms: BTreeMap<Mono, S>,
}

impl<S: Scalar> CommPolynomial<S> {
    pub fn zero(coords: Coords) -> Self {
        CommPolynomial {
            coords,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(coords: Coords, c: S) -> Self {
        let n = coords.len();
        Self::term(coords, Mono::zeros(n), c)
    }

    pub fn one(coords: Coords) -> Self {
        Self::constant(coords, S::one())
    }

    pub fn term(coords: Coords, m: Mono, c: S) -> Self {
        assert_eq!(m.0.len(), coords.len(), "exponent vector length");
        let mut p = Self::zero(coords);
        p.add_term(m, c);
        p
    }

    pub fn monomial(coords: Coords, e: &[u32]) -> Self {
        Self::term(coords, Mono::from_slice(e), S::one())
    }

    pub fn var(coords: Coords, name: &str) -> Result<Self> {
        let i = index_of(&coords, name)?;
        let mut e = Mono::zeros(coords.len());
        e.0[i] = 1;
        Ok(Self::term(coords, e, S::one()))
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        index_of(&self.coords, name)
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &S)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Mono, S)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Mono) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        self.check_coords(other);
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone() * c.clone());
        }
    }

    fn check_coords(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.coords, &other.coords) || self.coords == other.coords,
            "coordinate mismatch: {:?} vs {:?}",
            self.coords,
            other.coords
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &S::one());
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &(-S::one()));
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.coords.clone());
        }
        CommPolynomial {
            coords: self.coords.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_coords(other);
        let mut r = Self::zero(self.coords.clone());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                r.add_term(a.mul(b), x.clone() * y.clone());
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.coords.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Rebuilds the polynomial term by term; images are summed.
    pub fn map_terms(&self, mut f: impl FnMut(&Mono, &S) -> Option<(Mono, S)>) -> Self {
        let mut r = Self::zero(self.coords.clone());
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                r.add_term(m2, c2);
            }
        }
        r
    }

    /// Linear image of every monomial.
    pub fn map_linear(&self, mut f: impl FnMut(&Mono) -> Self) -> Self {
        let mut r = Self::zero(self.coords.clone());
        for (m, c) in &self.terms {
            r.add_scaled(&f(m), c);
        }
        r
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CommPolynomial<T> {
        let mut r = CommPolynomial::zero(self.coords.clone());
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }

    /// Same polynomial over a different coordinate list of equal length.
    pub fn with_coords(&self, coords: Coords) -> Self {
        assert_eq!(coords.len(), self.coords.len());
        CommPolynomial {
            coords,
            terms: self.terms.clone(),
        }
    }

    /// Substitutes each coordinate by a polynomial, `images[i]` for coordinate `i`.
    pub fn substitute(&self, images: &[Self]) -> Self {
        assert_eq!(images.len(), self.coords.len());
        let target = images
            .first()
            .map(|p| p.coords.clone())
            .unwrap_or_else(|| self.coords.clone());
        let mut r = Self::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = Self::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            r.add_scaled(&t, &S::one());
        }
        r
    }

    /// `q -> 1/q` on every coefficient.
    pub fn invert_q(&self) -> Self {
        self.map_coeffs(|c| c.invert_q())
    }

    pub fn render(&self) -> String {
        render_terms(&self.coords, self.terms.iter())
    }
}

impl CommPolynomial<QRational> {
    /// Parses the polynomial grammar over the given coordinates.
    pub fn parse(coords: Coords, s: &str) -> Result<Self> {
        PolyParser::new(coords, s).parse()
    }

    pub fn to_scalar<T: Scalar>(&self) -> CommPolynomial<T> {
        self.map_coeffs(T::from_qrational)
    }
}

impl<S: Scalar> fmt::Display for CommPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<S: Scalar> fmt::Debug for CommPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn index_of(coords: &Coords, name: &str) -> Result<usize> {
    coords
        .iter()
        .position(|c| c == name)
        .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
}

pub(crate) fn render_mono(coords: &[String], m: &Mono) -> String {
    let mut parts = Vec::new();
    for (name, &e) in coords.iter().zip(m.0.iter()) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

fn render_terms<'a, S: Scalar>(
    coords: &[String],
    terms: impl Iterator<Item = (&'a Mono, &'a S)>,
) -> String {
    let mut out = Vec::new();
    for (m, c) in terms {
        let mono = render_mono(coords, m);
        let coeff = if c.is_one() {
            None
        } else {
            Some(format!("({c})"))
        };
        out.push(match (coeff, mono.is_empty()) {
            (None, true) => "1".to_string(),
            (None, false) => mono,
            (Some(c), true) => c,
            (Some(c), false) => format!("{c}*{mono}"),
        });
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out.join(" + ")
    }
}

struct PolyParser<'a> {
    coords: Coords,
    src: &'a str,
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn new(coords: Coords, src: &'a str) -> Self {
        PolyParser {
            coords,
            src,
            pos: 0,
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.pos, msg)
    }

    fn parse(mut self) -> Result<CommPolynomial<QRational>> {
        let mut acc = CommPolynomial::zero(self.coords.clone());
        let mut sign = QRational::one();
        if self.peek() == Some('-') {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some('+') {
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, &sign);
            match self.peek() {
                None => return Ok(acc),
                Some('+') => {
                    self.pos += 1;
                    sign = QRational::one();
                }
                Some('-') => {
                    self.pos += 1;
                    sign = -QRational::one();
                }
                Some(c) => return Err(self.err(format!("unexpected `{c}`"))),
            }
        }
    }

    fn term(&mut self) -> Result<CommPolynomial<QRational>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                // juxtaposed factor, e.g. `(q)x3` or `x+ x-`
                Some(c) if c == '(' || c.is_ascii_alphanumeric() => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn coordinate(&self) -> Option<usize> {
        let r = self.rest();
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| r.starts_with(c.as_str()))
            .max_by_key(|(_, c)| c.len())
            .map(|(i, _)| i)
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.err("expected nonnegative exponent"));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| self.err("exponent too large"))
    }

    fn factor(&mut self) -> Result<CommPolynomial<QRational>> {
        let coords = self.coords.clone();
        match self.peek() {
            Some('(') => {
                let start = self.pos;
                let mut depth = 0usize;
                let mut end = None;
                for (i, ch) in self.rest().char_indices() {
                    match ch {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(start + i);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let end = end.ok_or_else(|| self.err("unbalanced `(`"))?;
                let inner = &self.src[start + 1..end];
                let c = parse_qrational_at(inner, start + 1)?;
                self.pos = end + 1;
                let e = self.exponent()?;
                Ok(CommPolynomial::constant(coords, c.pow(e as i64)))
            }
            Some(c) if c.is_ascii_digit() => {
                let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
                let at = self.pos;
                self.pos += digits.len();
                let c = parse_qrational_at(&digits, at)?;
                let e = self.exponent()?;
                Ok(CommPolynomial::constant(coords, c.pow(e as i64)))
            }
            Some(_) => {
                let i = self.coordinate().ok_or_else(|| {
                    let tok: String = self
                        .rest()
                        .chars()
                        .take_while(|c| !c.is_whitespace() && *c != '*' && *c != '^')
                        .collect();
                    Error::parse(self.pos, format!("unknown coordinate `{tok}`"))
                })?;
                self.pos += self.coords[i].len();
                let e = self.exponent()?;
                let mut m = Mono::zeros(coords.len());
                m.0[i] = e;
                Ok(CommPolynomial::term(coords, m, QRational::one()))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e3() -> Coords {
        coords(&["x+", "x3", "x-"])
    }

    #[test]
    fn graded_lex_enumeration() {
        assert_eq!(Mono::of_degree(3, 3).len(), 10);
        let all = Mono::up_to_degree(3, 2);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn parse_and_render_round_trip() {
        let c = e3();
        for s in ["0", "1", "(-1/q)", "(q^2)*x3", "x+ + (1+q)*x+*x3^2 - x-", "x+x-", "2*x3^3"] {
            let p = CommPolynomial::parse(c.clone(), s).unwrap();
            let back = CommPolynomial::parse(c.clone(), &p.render()).unwrap();
            assert_eq!(p, back, "{s}");
            assert_eq!(back.render(), p.render());
        }
        let p = CommPolynomial::parse(c.clone(), "x+x-").unwrap();
        assert_eq!(p.render(), "x+*x-");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match CommPolynomial::parse(e3(), "x+ + y") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn substitution() {
        let c = e3();
        let p = CommPolynomial::parse(c.clone(), "x+*x3^2").unwrap();
        let imgs: Vec<_> = ["x-", "(q)*x3", "x+"]
            .iter()
            .map(|s| CommPolynomial::parse(c.clone(), s).unwrap())
            .collect();
        let r = p.substitute(&imgs);
        assert_eq!(r, CommPolynomial::parse(c, "(q^2)*x3^2*x-").unwrap());
    }
}
