//! Line-oriented presentation files.
//!
//! ```text
//! # Heisenberg
//! field Q
//! generators: x1:1 x2:1 x3:2
//! relations:
//!   x1*x2 - x2*x1 - x3
//!   x1*x3 = x3*x1
//! attest koszul
//! bimodule p10 dim 1
//!   left x1: 1
//!   right x1: 0
//! ```
//!
//! Matrix rows are separated by `;`, entries by `,` or whitespace. Matrices act
//! on column vectors; omitted actions are zero.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::{Bimodule, FilteredRelation, Generator, NcPoly, Presentation, Word};
use crate::linalg::{Matrix, SparseVector};
use crate::scalar::{Field, FieldError, QPoly, Scalar};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

const KEYWORDS: [&str; 5] = ["field", "generators", "relations", "attest", "bimodule"];
const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Sym(char),
}

/// Tokenizer over a single line; columns are 1-based character positions.
fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), col));
        } else if "+-*^/()=".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_continue(chars[i]) {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(ParseError::new(
                line,
                col,
                format!("unexpected character '{c}'"),
            ));
        }
    }
    Ok(out)
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic() || (!c.is_ascii() && !c.is_whitespace())
}

fn is_ident_continue(c: char) -> bool {
    is_ident_start(c) || c.is_ascii_digit() || c == '\''
}

/// Noncommutative polynomial with coefficients in `Q[t]`, the raw parse result.
type RawPoly = BTreeMap<Word, QPoly>;

fn raw_add(a: &RawPoly, b: &RawPoly, sign: i64) -> RawPoly {
    let mut out = a.clone();
    for (w, c) in b {
        let c = if sign < 0 { c.neg() } else { c.clone() };
        let e = out.entry(w.clone()).or_insert_with(QPoly::zero);
        *e = e.add(&c);
        if e.is_zero() {
            out.remove(w);
        }
    }
    out
}

fn raw_mul(a: &RawPoly, b: &RawPoly, modulus: Option<&QPoly>) -> RawPoly {
    let mut out = RawPoly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            let mut c = ca.mul(cb);
            if let Some(m) = modulus {
                c = c.rem(m);
            }
            let e = out.entry(w.clone()).or_insert_with(QPoly::zero);
            *e = e.add(&c);
            if e.is_zero() {
                out.remove(&w);
            }
        }
    }
    out
}

fn raw_scalar(c: QPoly) -> RawPoly {
    let mut out = RawPoly::new();
    if !c.is_zero() {
        out.insert(Vec::new(), c);
    }
    out
}

/// Recursive-descent parser for one expression.
struct ExprParser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
    generators: &'a [String],
    allow_t: bool,
    modulus: Option<&'a QPoly>,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RawPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = raw_add(&acc, &self.term()?, 1);
            } else if self.eat('-') {
                acc = raw_add(&acc, &self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RawPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = raw_mul(&acc, &self.unary()?, self.modulus);
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let col = self.col();
                self.pos += 1;
                let d = self.unary()?;
                let c = match (d.len(), d.get(&Vec::new())) {
                    (1, Some(c)) if c.is_constant() => c.coeff(0),
                    (0, _) => return Err(ParseError::new(self.line, col, "division by zero")),
                    _ => {
                        return Err(ParseError::new(
                            self.line,
                            col,
                            "can only divide by a rational constant",
                        ))
                    }
                };
                acc = raw_mul(&acc, &raw_scalar(QPoly::constant(c.recip())), self.modulus);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RawPoly, ParseError> {
        if self.eat('-') {
            Ok(raw_add(&RawPoly::new(), &self.unary()?, -1))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RawPoly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.peek().cloned() {
            Some(Tok::Num(e)) => {
                let e: u32 = match u32::try_from(&e) {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => return Err(self.err(format!("exponent must be at most {MAX_EXPONENT}"))),
                };
                self.pos += 1;
                let mut out = raw_scalar(QPoly::from_i64(1));
                for _ in 0..e {
                    out = raw_mul(&out, &base, self.modulus);
                }
                Ok(out)
            }
            _ => Err(self.err("expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<RawPoly, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(raw_scalar(QPoly::constant(BigRational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.generators.iter().position(|g| *g == name) {
                    self.pos += 1;
                    let mut out = RawPoly::new();
                    out.insert(vec![i], QPoly::from_i64(1));
                    Ok(out)
                } else if name == "t" && self.allow_t {
                    self.pos += 1;
                    let mut t = QPoly::t();
                    if let Some(m) = self.modulus {
                        t = t.rem(m);
                    }
                    Ok(raw_scalar(t))
                } else if name == "t" {
                    Err(self
                        .err("the parameter t needs a number field, e.g. `field Q[t]/(t^2-t+1)`"))
                } else {
                    Err(self.err(format!("unknown generator '{name}'")))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(Tok::Sym(c)) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parse `lhs [= rhs]` into `lhs - rhs`.
fn parse_equation(
    text: &str,
    line: usize,
    col0: usize,
    generators: &[String],
    field: &Field,
) -> Result<RawPoly, ParseError> {
    let modulus = match field {
        Field::NumberField { modulus } => Some(modulus),
        Field::Rationals => None,
    };
    parse_raw(text, line, col0, generators, modulus.is_some(), modulus)
}

fn parse_raw(
    text: &str,
    line: usize,
    col0: usize,
    generators: &[String],
    allow_t: bool,
    modulus: Option<&QPoly>,
) -> Result<RawPoly, ParseError> {
    let toks = tokenize(text, line, col0)?;
    let mut p = ExprParser {
        toks: &toks,
        pos: 0,
        line,
        end_col: col0 + text.chars().count(),
        generators,
        allow_t,
        modulus,
    };
    let lhs = p.expr()?;
    let value = if p.eat('=') {
        raw_add(&lhs, &p.expr()?, -1)
    } else {
        lhs
    };
    if p.pos < toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(value)
}

fn embed<S: Scalar>(c: &QPoly, field: &Field, line: usize, col: usize) -> Result<S, ParseError> {
    S::embed(c, field).map_err(|e: FieldError| ParseError::new(line, col, e.to_string()))
}

/// Parse a polynomial in the generators of `p`, such as a central element `x3^2`.
pub fn parse_element<S: Scalar>(text: &str, p: &Presentation<S>) -> Result<NcPoly<S>, ParseError> {
    let names: Vec<String> = p.generators.iter().map(|g| g.name.clone()).collect();
    let raw = parse_equation(text, 1, 1, &names, &p.field)?;
    let mut out = NcPoly::zero();
    for (w, c) in raw {
        out.add_term(w, embed(&c, &p.field, 1, 1)?);
    }
    Ok(out)
}

fn parse_field(spec: &str, line: usize, col: usize) -> Result<Field, ParseError> {
    let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "Q" {
        return Ok(Field::Rationals);
    }
    let Some(inner) = compact
        .strip_prefix("Q[t]/(")
        .and_then(|s| s.strip_suffix(')'))
    else {
        return Err(ParseError::new(
            line,
            col,
            format!("unknown field '{spec}', expected Q or Q[t]/(m(t))"),
        ));
    };
    let raw = parse_raw(inner, line, col + 6, &[], true, None)?;
    let m = raw.get(&Vec::new()).cloned().unwrap_or_else(QPoly::zero);
    Field::number_field(m).map_err(|e| ParseError::new(line, col, e.to_string()))
}

/// The field declared by a presentation file, without parsing the rest.
pub fn declared_field(text: &str) -> Result<Field, ParseError> {
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("field") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let col = line.len() - trimmed.len() + 6;
                return parse_field(rest.trim(), ln + 1, col);
            }
        }
    }
    Ok(Field::Rationals)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

enum Section {
    None,
    Relations,
    Bimodule(usize),
}

struct RawBimodule {
    name: String,
    dim: usize,
    line: usize,
    left: BTreeMap<usize, Vec<Vec<QPoly>>>,
    right: BTreeMap<usize, Vec<Vec<QPoly>>>,
}

/// Parse a presentation file into exact scalars of type `S`.
pub fn parse_presentation<S: Scalar>(text: &str) -> Result<Presentation<S>, ParseError> {
    let field = declared_field(text)?;
    let mut generators: Vec<Generator> = Vec::new();
    let mut gen_line = None;
    let mut raw_relations: Vec<(RawPoly, usize, usize)> = Vec::new();
    let mut pending_relations: Vec<(String, usize, usize)> = Vec::new();
    let mut attest = false;
    let mut bimodules: Vec<RawBimodule> = Vec::new();
    let mut pending_actions: Vec<(usize, bool, String, String, usize, usize)> = Vec::new();
    let mut section = Section::None;

    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.chars().take_while(|c| c.is_whitespace()).count();
        let col = indent + 1;
        let keyword = trimmed
            .split(|c: char| c.is_whitespace() || c == ':')
            .next()
            .unwrap_or("");
        if KEYWORDS.contains(&keyword) {
            let rest = trimmed[keyword.len()..].trim_start();
            let rest = rest.strip_prefix(':').unwrap_or(rest).trim();
            let rest_col = col + trimmed.chars().count() - rest.chars().count();
            match keyword {
                "field" => section = Section::None,
                "generators" => {
                    if gen_line.is_some() {
                        return Err(ParseError::new(ln, col, "generators declared twice"));
                    }
                    gen_line = Some(ln);
                    generators = parse_generators(rest, ln, rest_col)?;
                    section = Section::None;
                }
                "relations" => {
                    section = Section::Relations;
                    if !rest.is_empty() {
                        pending_relations.push((rest.to_string(), ln, rest_col));
                    }
                }
                "attest" => {
                    if rest != "koszul" {
                        return Err(ParseError::new(ln, rest_col, "expected `attest koszul`"));
                    }
                    attest = true;
                    section = Section::None;
                }
                "bimodule" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let (name, dim) = match parts.as_slice() {
                        [name, "dim", d] => match d.parse::<usize>() {
                            Ok(d) => (name.to_string(), d),
                            Err(_) => {
                                return Err(ParseError::new(
                                    ln,
                                    rest_col,
                                    "bimodule dimension must be a nonnegative integer",
                                ))
                            }
                        },
                        _ => {
                            return Err(ParseError::new(
                                ln,
                                rest_col,
                                "expected `bimodule <name> dim <n>`",
                            ))
                        }
                    };
                    if bimodules.iter().any(|b| b.name == name) {
                        return Err(ParseError::new(
                            ln,
                            rest_col,
                            format!("bimodule '{name}' declared twice"),
                        ));
                    }
                    bimodules.push(RawBimodule {
                        name,
                        dim,
                        line: ln,
                        left: BTreeMap::new(),
                        right: BTreeMap::new(),
                    });
                    section = Section::Bimodule(bimodules.len() - 1);
                }
                _ => unreachable!(),
            }
            continue;
        }
        match section {
            Section::Relations => pending_relations.push((trimmed.to_string(), ln, col)),
            Section::Bimodule(b) => {
                let (side, rest) = if let Some(r) = trimmed.strip_prefix("left") {
                    (true, r)
                } else if let Some(r) = trimmed.strip_prefix("right") {
                    (false, r)
                } else {
                    return Err(ParseError::new(
                        ln,
                        col,
                        "expected `left <gen>: ...` or `right <gen>: ...`",
                    ));
                };
                let Some((g, m)) = rest.split_once(':') else {
                    return Err(ParseError::new(ln, col, "missing ':' after generator name"));
                };
                let mcol = col + trimmed.chars().count() - m.chars().count();
                pending_actions.push((b, side, g.trim().to_string(), m.to_string(), ln, mcol));
            }
            Section::None => {
                return Err(ParseError::new(
                    ln,
                    col,
                    format!("unexpected line outside any section: '{trimmed}'"),
                ))
            }
        }
    }

    if generators.is_empty() {
        return Err(ParseError::new(
            gen_line.unwrap_or(1),
            1,
            "no generators declared",
        ));
    }
    let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
    let n = names.len();

    for (text, ln, col) in &pending_relations {
        let raw = parse_equation(text, *ln, *col, &names, &field)?;
        if raw.keys().any(|w| w.len() > 2) {
            return Err(ParseError::new(*ln, *col, "relation has a word length > 2"));
        }
        raw_relations.push((raw, *ln, *col));
    }

    let mut relations = Vec::new();
    for (raw, ln, col) in raw_relations {
        let mut quad = Vec::new();
        let mut lin = Vec::new();
        let mut constant = S::zero();
        for (w, c) in &raw {
            let c: S = embed(c, &field, ln, col)?;
            match w.as_slice() {
                [] => constant = c,
                [a] => lin.push((*a, c)),
                [a, b] => quad.push((a * n + b, c)),
                _ => unreachable!(),
            }
        }
        let quadratic = SparseVector::from_entries(n * n, quad);
        if quadratic.is_zero() {
            return Err(ParseError::new(ln, col, "relation has no quadratic part"));
        }
        relations.push(FilteredRelation {
            quadratic,
            linear: SparseVector::from_entries(n, lin),
            constant,
        });
    }

    for (b, left, g, m, ln, col) in pending_actions {
        let Some(gi) = names.iter().position(|x| *x == g) else {
            return Err(ParseError::new(ln, col, format!("unknown generator '{g}'")));
        };
        let rows = parse_matrix(&m, ln, col, bimodules[b].dim, &field)?;
        let target = if left {
            &mut bimodules[b].left
        } else {
            &mut bimodules[b].right
        };
        if target.insert(gi, rows).is_some() {
            return Err(ParseError::new(
                ln,
                col,
                format!("action of '{g}' given twice"),
            ));
        }
    }

    let mut out_bimodules = Vec::new();
    for rb in bimodules {
        let build =
            |side: &BTreeMap<usize, Vec<Vec<QPoly>>>| -> Result<Vec<Matrix<S>>, ParseError> {
                (0..n)
                    .map(|g| match side.get(&g) {
                        Some(rows) => {
                            let rows: Result<Vec<Vec<S>>, ParseError> = rows
                                .iter()
                                .map(|r| r.iter().map(|c| embed(c, &field, rb.line, 1)).collect())
                                .collect();
                            Ok(Matrix::from_dense(rows?))
                        }
                        None => Ok(Matrix::zeros(rb.dim, rb.dim)),
                    })
                    .collect()
            };
        out_bimodules.push(Bimodule {
            name: rb.name.clone(),
            dim: rb.dim,
            left: build(&rb.left)?,
            right: build(&rb.right)?,
        });
    }

    Ok(Presentation {
        field,
        generators,
        relations,
        attest_koszul: attest,
        bimodules: out_bimodules,
    })
}

fn parse_generators(rest: &str, ln: usize, col: usize) -> Result<Vec<Generator>, ParseError> {
    let mut out: Vec<Generator> = Vec::new();
    let mut offset = 0;
    for tok in rest.split_whitespace() {
        let tcol = col
            + rest[offset..]
                .find(tok)
                .map_or(0, |i| rest[..offset + i].chars().count());
        offset += rest[offset..].find(tok).unwrap_or(0) + tok.len();
        let (name, weight) = match tok.split_once(':') {
            Some((name, w)) => match w.parse::<u32>() {
                Ok(w) if w > 0 => (name, w),
                _ => {
                    return Err(ParseError::new(
                        ln,
                        tcol,
                        format!("weight of '{name}' must be a positive integer"),
                    ))
                }
            },
            None => (tok, 1),
        };
        let mut chars = name.chars();
        let valid = chars.next().is_some_and(is_ident_start) && chars.all(is_ident_continue);
        if !valid {
            return Err(ParseError::new(
                ln,
                tcol,
                format!("invalid generator name '{name}'"),
            ));
        }
        if name == "t" || KEYWORDS.contains(&name) || name == "left" || name == "right" {
            return Err(ParseError::new(ln, tcol, format!("'{name}' is reserved")));
        }
        if out.iter().any(|g| g.name == name) {
            return Err(ParseError::new(
                ln,
                tcol,
                format!("duplicate generator '{name}'"),
            ));
        }
        out.push(Generator {
            name: name.to_string(),
            weight,
        });
    }
    Ok(out)
}

fn parse_matrix(
    text: &str,
    ln: usize,
    col: usize,
    dim: usize,
    field: &Field,
) -> Result<Vec<Vec<QPoly>>, ParseError> {
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != dim {
        return Err(ParseError::new(
            ln,
            col,
            format!("expected {dim} matrix rows, found {}", rows.len()),
        ));
    }
    rows.iter()
        .map(|row| {
            let cells: Vec<&str> = if row.contains(',') {
                row.split(',').collect()
            } else {
                row.split_whitespace().collect()
            };
            if cells.len() != dim {
                return Err(ParseError::new(
                    ln,
                    col,
                    format!("expected {dim} entries per row, found {}", cells.len()),
                ));
            }
            cells
                .iter()
                .map(|cell| {
                    let raw = parse_equation(cell, ln, col, &[], field)?;
                    match (raw.len(), raw.get(&Vec::new())) {
                        (0, _) => Ok(QPoly::zero()),
                        (1, Some(c)) => Ok(c.clone()),
                        _ => Err(ParseError::new(ln, col, "matrix entries must be scalars")),
                    }
                })
                .collect()
        })
        .collect()
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.weight)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use num_traits::One;

    type Q = BigRational;

    const HEIS: &str = "field Q\ngenerators: x1:1 x2:1 x3:2\nrelations:\n  x1*x2 - x2*x1 - x3\n  x1*x3 - x3*x1\n  x2*x3 - x3*x2\n";

    #[test]
    fn heisenberg_parses() {
        let p: Presentation<Q> = parse_presentation(HEIS).unwrap();
        assert_eq!(p.generators.len(), 3);
        assert_eq!(p.relations.len(), 3);
        assert_eq!(p.generators[2].weight, 2);
        assert_eq!(p.relations[0].linear.get(2), -Q::one());
    }

    #[test]
    fn long_word_rejected() {
        let text = "generators: x1 x2 x3\nrelations:\n  x1*x2*x3 - 1\n";
        let err = parse_presentation::<Q>(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("word length > 2"), "{err}");
    }

    #[test]
    fn unknown_generator_has_position() {
        let text = "generators: x y\nrelations:\n  x*z - z*x\n";
        let err = parse_presentation::<Q>(text).unwrap_err();
        assert_eq!((err.line, err.column), (3, 5));
        assert!(err.message.contains("unknown generator 'z'"));
    }

    #[test]
    fn equations_and_fractions() {
        let text = "generators: x d\nrelations:\n  d*x = x*d + 1/2  # comment\n";
        let p: Presentation<Q> = parse_presentation(text).unwrap();
        let r = &p.relations[0];
        assert_eq!(r.constant, -Q::new(1.into(), 2.into()));
        assert_eq!(r.quadratic.get(2), Q::one());
        assert_eq!(r.quadratic.get(1), -Q::one());
    }

    #[test]
    fn parameter_needs_number_field() {
        let text = "generators: x y\nrelations:\n  x*y - t*y*x\n";
        assert!(parse_presentation::<Q>(text).is_err());
        let text =
            "field Q[t]/(t^2 - t + 1)\ngenerators: x y\nrelations:\n  x*y - t*y*x - (1-t)^2*x\n";
        let p: Presentation<crate::scalar::NumberFieldElement> = parse_presentation(text).unwrap();
        // (1-t)^2 = -t modulo t^2 - t + 1
        assert_eq!(p.relations[0].linear.get(0).to_string(), "t");
    }

    #[test]
    fn bimodule_block() {
        let text = "generators: x y\nrelations:\n x*y - y*x\nbimodule m dim 2\n left x: 0 1; 0 0\n right y: 1,0;0,1\n";
        let p: Presentation<Q> = parse_presentation(text).unwrap();
        let m = &p.bimodules[0];
        assert_eq!(m.dim, 2);
        assert_eq!(m.left[0].get(0, 1), Q::one());
        assert!(m.left[1].is_zero());
        assert_eq!(m.right[1], Matrix::identity(2));
    }

    #[test]
    fn syntax_errors_report_columns() {
        let err = parse_presentation::<Q>("generators: x\nrelations:\n x*x - (1\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("')'"));
        let err = parse_presentation::<Q>("generators: x x\n").unwrap_err();
        assert!(err.message.contains("duplicate"));
    }
}
