//! Textual operator monomials such as `x+ x- (D+_q)^2 D-_q f(q^2 x-)`, the
//! form in which translation rules are stated, and their relabeling.
//!
//! The expression means: evaluate `f` at the scaled arguments, apply the
//! Jackson derivatives right to left, then multiply by the coordinates.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{index_of, CommPolynomial, Coords};
use crate::scalar::Scalar;

use super::RepOperator;

/// `D^{label}_{q^a}` raised to `power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DFactor {
    pub label: String,
    pub a: i64,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpExpr {
    /// Labels of the coordinate factors, `x<label>`.
    pub coords: Vec<String>,
    pub derivs: Vec<DFactor>,
    /// Arguments `q^s x<label>` of `f`.
    pub args: Vec<(i64, String)>,
}

fn q_power(s: i64) -> String {
    match s {
        1 => "q".to_string(),
        s => format!("q^{s}"),
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.coords.iter().map(|l| format!("x{l}")).collect();
        for d in &self.derivs {
            let base = format!("D{}_{}", d.label, q_power(d.a));
            parts.push(if d.power == 1 { base } else { format!("({base})^{}", d.power) });
        }
        let args: Vec<String> = self
            .args
            .iter()
            .map(|(s, l)| if *s == 0 { format!("x{l}") } else { format!("{} x{l}", q_power(*s)) })
            .collect();
        parts.push(if args.is_empty() { "f".to_string() } else { format!("f({})", args.join(", ")) });
        f.write_str(&parts.join(" "))
    }
}

fn parse_int(s: &str, pos: usize) -> Result<i64> {
    s.parse().map_err(|_| Error::parse(pos, format!("expected an integer, found `{s}`")))
}

/// `q`, `q^a` or `q^-a`.
fn parse_q_power(s: &str, pos: usize) -> Result<i64> {
    match s.strip_prefix('q') {
        Some("") => Ok(1),
        Some(rest) => parse_int(rest.strip_prefix('^').ok_or_else(|| Error::parse(pos, "expected `q^a`"))?, pos),
        None => Err(Error::parse(pos, format!("expected a power of q, found `{s}`"))),
    }
}

fn parse_d(s: &str, pos: usize) -> Result<(String, i64)> {
    let body = s.strip_prefix('D').ok_or_else(|| Error::parse(pos, "expected `D`"))?;
    let (label, base) = body
        .split_once('_')
        .ok_or_else(|| Error::parse(pos, "expected `D<label>_q^a`"))?;
    if label.is_empty() {
        return Err(Error::parse(pos, "missing derivative label"));
    }
    Ok((label.to_string(), parse_q_power(base, pos)?))
}

impl OpExpr {
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        let fpos = s.rfind('f').ok_or_else(|| Error::parse(s.len(), "expected a trailing `f(...)`"))?;
        let (head, tail) = s.split_at(fpos);
        let tail = tail.trim();
        let args = if tail == "f" {
            Vec::new()
        } else {
            let inner = tail
                .strip_prefix("f(")
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| Error::parse(fpos, "expected `f(...)`"))?;
            inner
                .split(',')
                .map(|a| {
                    let toks: Vec<&str> = a.split_whitespace().collect();
                    match toks.as_slice() {
                        [x] if x.starts_with('x') => Ok((0, x[1..].to_string())),
                        [c, x] if x.starts_with('x') => Ok((parse_q_power(c, fpos)?, x[1..].to_string())),
                        _ => Err(Error::parse(fpos, format!("bad argument `{}`", a.trim()))),
                    }
                })
                .collect::<Result<_>>()?
        };
        let mut coords = Vec::new();
        let mut derivs = Vec::new();
        let mut pos = 0;
        for tok in head.split_whitespace() {
            pos = head[pos..].find(tok).map_or(pos, |i| pos + i);
            if let Some(l) = tok.strip_prefix('x') {
                if !derivs.is_empty() {
                    return Err(Error::parse(pos, "coordinates must precede the derivatives"));
                }
                coords.push(l.to_string());
            } else if let Some(inner) = tok.strip_prefix('(') {
                let (d, p) = inner
                    .split_once(")^")
                    .ok_or_else(|| Error::parse(pos, "expected `(D..)^n`"))?;
                let (label, a) = parse_d(d, pos)?;
                let power = parse_int(p, pos)?;
                if power < 1 {
                    return Err(Error::parse(pos, "derivative powers must be positive"));
                }
                derivs.push(DFactor { label, a, power: power as u32 });
            } else {
                let (label, a) = parse_d(tok, pos)?;
                derivs.push(DFactor { label, a, power: 1 });
            }
        }
        Ok(OpExpr { coords, derivs, args })
    }

    /// Renames every coordinate label through `map`.
    pub fn relabel(&self, map: impl Fn(&str) -> Result<String>) -> Result<Self> {
        Ok(OpExpr {
            coords: self.coords.iter().map(|l| map(l)).collect::<Result<_>>()?,
            derivs: self
                .derivs
                .iter()
                .map(|d| Ok(DFactor { label: map(&d.label)?, ..d.clone() }))
                .collect::<Result<_>>()?,
            args: self.args.iter().map(|(s, l)| Ok((*s, map(l)?))).collect::<Result<_>>()?,
        })
    }

    /// Relabeling induced by a permutation of the coordinate list.
    pub fn permute(&self, coords: &Coords, perm: &[usize]) -> Result<Self> {
        self.relabel(|l| {
            let i = index_of(coords, &format!("x{l}"))?;
            Ok(coords[perm[i]][1..].to_string())
        })
    }

    pub fn to_op<S: Scalar>(&self, coords: &Coords) -> Result<RepOperator<S>> {
        let idx = |l: &str| index_of(coords, &format!("x{l}"));
        let mut mono = CommPolynomial::one(coords.clone());
        for l in &self.coords {
            mono = mono.mul(&CommPolynomial::var(coords.clone(), &format!("x{l}"))?);
        }
        let mut ops = vec![RepOperator::Mul(mono)];
        for d in &self.derivs {
            let coord = idx(&d.label)?;
            for _ in 0..d.power {
                ops.push(RepOperator::Jackson { coord, a: d.a });
            }
        }
        for (s, l) in &self.args {
            ops.push(RepOperator::Scale { coord: idx(l)?, s: *s });
        }
        Ok(RepOperator::Compose(ops))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{coords, Mono};
    use crate::scalar::QRational;
    use proptest::prelude::*;

    #[test]
    fn parses_and_renders() {
        let s = "x+ x- (D+_q)^2 D-_q f(q^2 x-)";
        let e = OpExpr::parse(s).unwrap();
        assert_eq!(e.to_string(), s);
        assert_eq!(e.derivs[0].power, 2);
        assert!(OpExpr::parse("x+ D+_q").is_err());
        assert!(OpExpr::parse("D+_q x+ f").is_err());
    }

    #[test]
    fn permuted_operator_is_conjugated_operator() {
        let c = coords(&["x+", "x3", "x-"]);
        let perm = [2, 1, 0];
        let e = OpExpr::parse("x+ x- (D+_q)^2 D-_q f(q^2 x-)").unwrap();
        let e2 = e.permute(&c, &perm).unwrap();
        let op = e.to_op::<QRational>(&c).unwrap();
        let conj = RepOperator::Conj { perm: perm.to_vec(), invert_q: false, inner: Box::new(op) };
        let op2 = e2.to_op::<QRational>(&c).unwrap();
        for m in Mono::up_to_degree(3, 4) {
            let f = CommPolynomial::term(c.clone(), m, QRational::one());
            assert_eq!(conj.apply(&f), op2.apply(&f));
        }
    }

    fn label() -> impl Strategy<Value = String> {
        prop::sample::select(vec!["+", "3", "-"]).prop_map(str::to_string)
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(
            cs in prop::collection::vec(label(), 0..3),
            ds in prop::collection::vec((label(), -4i64..5, 1u32..3), 0..3),
            args in prop::collection::vec((-3i64..4, label()), 0..3),
        ) {
            let e = OpExpr {
                coords: cs,
                derivs: ds.into_iter().map(|(label, a, power)| DFactor { label, a, power }).collect(),
                args,
            };
            prop_assert_eq!(OpExpr::parse(&e.to_string()).unwrap(), e);
        }

        #[test]
        fn swapping_twice_is_identity(ds in prop::collection::vec((label(), -4i64..5, 1u32..3), 0..4)) {
            let c = coords(&["x+", "x3", "x-"]);
            let e = OpExpr {
                coords: vec!["+".into()],
                derivs: ds.into_iter().map(|(label, a, power)| DFactor { label, a, power }).collect(),
                args: vec![(2, "-".into())],
            };
            let back = e.permute(&c, &[2, 1, 0]).unwrap().permute(&c, &[2, 1, 0]).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
