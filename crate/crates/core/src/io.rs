//! Plain-text tuple and poset files.
//!
//! A tuple file has `#` comments, the headers `field rational` or
//! `field gf <p>` and `dim <d>`, then one `subspace` line per entry followed
//! by that entry's integer generator rows:
//!
//! ```text
//! field rational
//! dim 2
//! subspace
//! 1 0
//! subspace
//! ```
//!
//! A poset file lists elements with `elements a b ..` or `element a` lines
//! and the order with `cover a b` lines meaning `a < b`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::bk::Poset;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Scalar, Subspace};
use crate::tuple::SubspaceTuple;

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns, comments
/// removed.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(s, tok)| (body[..s].chars().count() + 1, tok))
        .collect()
}

fn to_scalar(field: FieldSpec, v: &BigInt) -> Scalar {
    match field {
        FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
        FieldSpec::Prime(p) => {
            let p = BigInt::from(p);
            let r = ((v % &p) + &p) % &p;
            Scalar::Residue(r.to_u64().expect("residue below modulus"))
        }
    }
}

pub fn parse_tuple(text: &str) -> Result<SubspaceTuple> {
    let mut field: Option<FieldSpec> = None;
    let mut dim: Option<usize> = None;
    let mut blocks: Vec<Vec<Vec<Scalar>>> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        match head {
            "field" => {
                if field.is_some() {
                    return Err(parse_error(ln, col, "duplicate field header"));
                }
                if !blocks.is_empty() {
                    return Err(parse_error(ln, col, "field header after subspace data"));
                }
                field = Some(match toks.get(1) {
                    Some(&(_, "rational")) if toks.len() == 2 => FieldSpec::Rationals,
                    Some(&(c, "gf")) => {
                        let Some(&(pc, ptok)) = toks.get(2) else {
                            return Err(parse_error(ln, c, "expected a modulus after gf"));
                        };
                        if let Some(&(xc, _)) = toks.get(3) {
                            return Err(parse_error(ln, xc, "unexpected token"));
                        }
                        let p: u64 = ptok
                            .parse()
                            .map_err(|_| parse_error(ln, pc, format!("bad modulus {ptok:?}")))?;
                        FieldSpec::prime(p).map_err(|e| parse_error(ln, pc, e.to_string()))?
                    }
                    Some(&(c, other)) => {
                        return Err(parse_error(ln, c, format!("unknown field {other:?}")))
                    }
                    None => return Err(parse_error(ln, col, "missing field name")),
                });
            }
            "dim" => {
                if dim.is_some() {
                    return Err(parse_error(ln, col, "duplicate dim header"));
                }
                if !blocks.is_empty() {
                    return Err(parse_error(ln, col, "dim header after subspace data"));
                }
                let &[_, (dc, dtok)] = toks.as_slice() else {
                    return Err(parse_error(ln, col, "expected `dim <d>`"));
                };
                dim = Some(
                    dtok.parse()
                        .map_err(|_| parse_error(ln, dc, format!("bad dimension {dtok:?}")))?,
                );
            }
            "subspace" => {
                if field.is_none() || dim.is_none() {
                    return Err(parse_error(ln, col, "subspace before field and dim headers"));
                }
                if let Some(&(xc, _)) = toks.get(1) {
                    return Err(parse_error(ln, xc, "unexpected token after subspace"));
                }
                blocks.push(Vec::new());
            }
            _ => {
                let (Some(f), Some(d)) = (field, dim) else {
                    return Err(parse_error(ln, col, format!("unexpected {head:?}")));
                };
                let Some(block) = blocks.last_mut() else {
                    return Err(parse_error(ln, col, "generator row before any subspace"));
                };
                if toks.len() != d {
                    let c = toks.get(d).map_or(line.chars().count() + 1, |t| t.0);
                    return Err(parse_error(
                        ln,
                        c,
                        format!("row has {} entries, expected {d}", toks.len()),
                    ));
                }
                let row = toks
                    .iter()
                    .map(|&(c, tok)| {
                        tok.parse::<BigInt>()
                            .map(|v| to_scalar(f, &v))
                            .map_err(|_| parse_error(ln, c, format!("bad integer {tok:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                block.push(row);
            }
        }
    }
    let Some(field) = field else {
        return Err(parse_error(last_line.max(1), 1, "missing field header"));
    };
    let Some(dim) = dim else {
        return Err(parse_error(last_line.max(1), 1, "missing dim header"));
    };
    let entries = blocks
        .into_iter()
        .map(|rows| Subspace::new(field, dim, rows))
        .collect::<Result<_>>()?;
    SubspaceTuple::new(field, dim, entries)
}

/// Canonical text for a tuple; [`parse_tuple`] reads it back to an equal
/// tuple.
pub fn write_tuple(t: &SubspaceTuple) -> String {
    let mut out = String::new();
    match t.field() {
        FieldSpec::Rationals => out.push_str("field rational\n"),
        FieldSpec::Prime(p) => writeln!(out, "field gf {p}").expect("write to string"),
    }
    writeln!(out, "dim {}", t.ambient_dim()).expect("write to string");
    for e in t.entries() {
        out.push_str("subspace\n");
        for row in e.integer_rows() {
            let cells: Vec<String> = row.iter().map(BigInt::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut covers = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        match head {
            "element" | "elements" => {
                if head == "element" && toks.len() != 2 {
                    return Err(parse_error(ln, col, "expected `element <name>`"));
                }
                for &(c, name) in &toks[1..] {
                    if index.insert(name.to_string(), labels.len()).is_some() {
                        return Err(parse_error(ln, c, format!("duplicate element {name:?}")));
                    }
                    labels.push(name.to_string());
                }
            }
            "cover" => {
                let &[_, (ac, a), (bc, b)] = toks.as_slice() else {
                    return Err(parse_error(ln, col, "expected `cover <lower> <upper>`"));
                };
                let lookup = |name: &str, c: usize| {
                    index
                        .get(name)
                        .copied()
                        .ok_or_else(|| parse_error(ln, c, format!("unknown element {name:?}")))
                };
                covers.push((lookup(a, ac)?, lookup(b, bc)?));
            }
            other => return Err(parse_error(ln, col, format!("unexpected {other:?}"))),
        }
    }
    Poset::from_covers(labels, &covers)
}

pub fn write_poset(p: &Poset) -> String {
    let mut out = String::from("elements");
    for l in p.labels() {
        out.push(' ');
        out.push_str(l);
    }
    out.push('\n');
    for (a, b) in p.covers() {
        writeln!(out, "cover {} {}", p.labels()[a], p.labels()[b]).expect("write to string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn tuple_round_trip() {
        for t in [examples::ex1(), examples::ex2(), examples::ex3(), examples::der1()] {
            assert_eq!(parse_tuple(&write_tuple(&t)).unwrap(), t);
        }
        let empty = SubspaceTuple::new(FieldSpec::Rationals, 2, vec![]).unwrap();
        assert_eq!(parse_tuple(&write_tuple(&empty)).unwrap(), empty);
    }

    #[test]
    fn reads_comments_and_reduces() {
        let text = "# three lines\nfield gf 3\ndim 2   # plane\n\nsubspace\n4 -1\nsubspace\n";
        let t = parse_tuple(text).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(
            t.entries()[0],
            Subspace::from_integers(FieldSpec::Prime(3), 2, &[vec![1, 2]]).unwrap()
        );
        assert!(t.entries()[1].is_zero());
    }

    fn err_at(text: &str) -> (usize, usize) {
        match parse_tuple(text) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn tuple_errors() {
        assert_eq!(err_at("field gf 4\n"), (1, 10));
        assert_eq!(err_at("field real\n"), (1, 7));
        assert_eq!(err_at("field rational\ndim 2\nsubspace\n1 0 0\n"), (4, 5));
        assert_eq!(err_at("field rational\ndim 2\nsubspace\n1\n"), (4, 2));
        assert_eq!(err_at("field rational\ndim 2\nsubspace\n1 x\n"), (4, 3));
        assert_eq!(err_at("field rational\ndim 2\n1 0\n"), (3, 1));
        assert_eq!(err_at("dim 2\nsubspace\n"), (2, 1));
        assert_eq!(err_at("field rational\n"), (1, 1));
    }

    #[test]
    fn poset_files() {
        let p = parse_poset("elements a b c  # V shape\ncover a b\ncover a c\n").unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.lt(0, 2));
        assert_eq!(parse_poset(&write_poset(&p)).unwrap(), p);
        assert!(matches!(
            parse_poset("elements a b\ncover a b\ncover b a\n"),
            Err(Error::InvalidPoset(_))
        ));
        assert!(matches!(
            parse_poset("elements a\ncover a z\n"),
            Err(Error::Parse { line: 2, column: 9, .. })
        ));
    }
}
