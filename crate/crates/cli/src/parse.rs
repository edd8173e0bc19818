//! Text grammar for polynomials, forms, multivectors, points, chart files
//! and connection dumps.
//!
//! ```text
//! object   := term (('+' | '-') term)*
//! term     := [polyexpr '*'] basis | polyexpr
//! basis    := ('dx' | 'Dx') '[' int (',' int)* ']'
//! polyexpr := rationals, x<k>, + - * ^, parentheses
//! ```

use constcoef::connection::Connection;
use constcoef::detector::{ChartWitness, Object};
use constcoef::exterior::Homogeneous;
use constcoef::poly::parse_rational;
use constcoef::{Chart, DiffForm, ForwardChart, MultiVector, Poly, Rational};
use num_traits::Signed;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index {index} at position {pos} outside 1..={n}")]
    IndexOutOfRange { pos: usize, index: usize, n: usize },
    #[error("mixed dx/Dx terms at position {pos}")]
    MixedVariance { pos: usize },
    #[error("degree inhomogeneity at position {pos}: expected degree {expected}, got {got}")]
    DegreeInhomogeneous {
        pos: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] constcoef::Error),
}

pub type Result<T> = std::result::Result<T, ParseError>;

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(ParseError::Syntax {
        pos,
        msg: msg.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(Rational),
    Var(usize),
    Basis {
        covariant: bool,
        indices: Vec<usize>,
    },
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str, letter: char) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_from = |mut k: usize| {
        while k < bytes.len() && bytes[k].is_ascii_digit() {
            k += 1;
        }
        k
    };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '/' => out.push((start, Tok::Slash)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '0'..='9' => {
                let mut end = digits_from(i);
                // a rational literal carries its '/' without spaces
                if end + 1 < bytes.len() && bytes[end] == b'/' && bytes[end + 1].is_ascii_digit() {
                    end = digits_from(end + 1);
                }
                let value = parse_rational(&text[i..end]).map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("bad number {:?}", &text[i..end]),
                })?;
                out.push((start, Tok::Num(value)));
                i = end;
                continue;
            }
            'd' | 'D' if bytes.get(i + 1) == Some(&b'x') && bytes.get(i + 2) == Some(&b'[') => {
                let close = text[i..].find(']').map(|k| i + k);
                let Some(close) = close else {
                    return syntax(start, "unterminated basis");
                };
                let mut indices = Vec::new();
                let mut offset = i + 3;
                for part in text[i + 3..close].split(',') {
                    let trimmed = part.trim();
                    let value: usize = trimmed.parse().map_err(|_| ParseError::Syntax {
                        pos: offset,
                        msg: format!("bad basis index {trimmed:?}"),
                    })?;
                    indices.push(value);
                    offset += part.len() + 1;
                }
                out.push((
                    start,
                    Tok::Basis {
                        covariant: c == 'd',
                        indices,
                    },
                ));
                i = close + 1;
                continue;
            }
            c if c == letter => {
                let end = digits_from(i + 1);
                if end == i + 1 {
                    return syntax(start, format!("expected digits after {letter}"));
                }
                let k: usize = text[i + 1..end].parse().expect("digits");
                out.push((start, Tok::Var(k)));
                i = end;
                continue;
            }
            other => return syntax(start, format!("unexpected character {other:?}")),
        }
        i += 1;
    }
    Ok(out)
}

struct Basis {
    pos: usize,
    covariant: bool,
    indices: Vec<usize>,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    n: usize,
}

impl Parser {
    fn new(text: &str, n: usize, letter: char) -> Result<Self> {
        Ok(Parser {
            toks: lex(text, letter)?,
            at: 0,
            end: text.len(),
            n,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect_end(&self) -> Result<()> {
        if self.at < self.toks.len() {
            return syntax(self.pos(), "unexpected trailing input");
        }
        Ok(())
    }

    /// Signed sum of terms, each an optional basis times a polynomial.
    fn sum(&mut self) -> Result<Vec<(usize, Poly, Option<Basis>)>> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let start = self.pos();
            let (p, basis) = self.product()?;
            terms.push((start, if negate { -p } else { p }, basis));
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(terms),
            }
            self.bump();
        }
    }

    fn product(&mut self) -> Result<(Poly, Option<Basis>)> {
        let mut acc = Poly::one(self.n);
        let mut basis: Option<Basis> = None;
        loop {
            if let Some(Tok::Basis { .. }) = self.peek() {
                let pos = self.pos();
                let Some(Tok::Basis { covariant, indices }) = self.bump() else {
                    unreachable!()
                };
                if basis.is_some() {
                    return syntax(pos, "two basis tokens in one term");
                }
                basis = Some(Basis {
                    pos,
                    covariant,
                    indices,
                });
            } else {
                acc = &acc * &self.factor()?;
            }
            if self.peek() != Some(&Tok::Star) {
                return Ok((acc, basis));
            }
            self.bump();
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(e)) if e.is_integer() && !e.is_negative() => {
                let e: u32 = e.to_integer().try_into().map_err(|_| ParseError::Syntax {
                    pos,
                    msg: "exponent too large".into(),
                })?;
                Ok(base.pow(e))
            }
            _ => syntax(pos, "expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Poly::constant(self.n, v)),
            Some(Tok::Var(k)) => {
                if k == 0 || k > self.n {
                    return Err(ParseError::IndexOutOfRange {
                        pos,
                        index: k,
                        n: self.n,
                    });
                }
                Ok(Poly::var(self.n, k)?)
            }
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                if let Some((_, _, Some(b))) = inner.iter().find(|(_, _, b)| b.is_some()) {
                    return syntax(b.pos, "basis inside parentheses");
                }
                let close = self.pos();
                if self.bump() != Some(Tok::RParen) {
                    return syntax(close, "expected ')'");
                }
                Ok(inner
                    .into_iter()
                    .fold(Poly::zero(self.n), |acc, (_, p, _)| &acc + &p))
            }
            Some(_) => syntax(pos, "expected a number, variable or '('"),
            None => syntax(pos, "unexpected end of input"),
        }
    }
}

/// Polynomial in `x1..xn`.
pub fn parse_poly(text: &str, n: usize) -> Result<Poly> {
    parse_poly_in(text, n, 'x')
}

fn parse_poly_in(text: &str, n: usize, letter: char) -> Result<Poly> {
    let mut p = Parser::new(text, n, letter)?;
    if p.toks.is_empty() {
        return syntax(0, "empty expression");
    }
    let terms = p.sum()?;
    p.expect_end()?;
    if let Some((_, _, Some(b))) = terms.iter().find(|(_, _, b)| b.is_some()) {
        return syntax(b.pos, "basis token in a polynomial");
    }
    Ok(terms
        .into_iter()
        .fold(Poly::zero(n), |acc, (_, t, _)| &acc + &t))
}

fn build<V: constcoef::exterior::Variance>(
    n: usize,
    degree: usize,
    terms: Vec<(Poly, Vec<usize>)>,
) -> Result<Homogeneous<V>> {
    let mut out = Homogeneous::<V>::zero(n, degree);
    for (c, idx) in terms {
        out = out.checked_add(&Homogeneous::<V>::term(n, &idx, c)?)?;
    }
    Ok(out)
}

/// A form (`dx[...]` terms) or multivector (`Dx[...]` terms) on `R^n`.
/// Terms without a basis token are functions; an object made only of them
/// is a degree-0 form.
pub fn parse_object(text: &str, n: usize) -> Result<Object> {
    let mut p = Parser::new(text, n, 'x')?;
    if p.toks.is_empty() {
        return syntax(0, "empty expression");
    }
    let terms = p.sum()?;
    p.expect_end()?;
    let mut variance: Option<bool> = None;
    let mut degree: Option<usize> = None;
    let mut plain = Vec::new();
    for (start, c, basis) in terms {
        let (pos, covariant, indices) = match basis {
            Some(b) => (b.pos, Some(b.covariant), b.indices),
            None => (start, None, Vec::new()),
        };
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(ParseError::IndexOutOfRange { pos, index: bad, n });
        }
        if let Some(cov) = covariant {
            match variance {
                Some(v) if v != cov => return Err(ParseError::MixedVariance { pos }),
                _ => variance = Some(cov),
            }
        }
        match degree {
            Some(d) if d != indices.len() => {
                return Err(ParseError::DegreeInhomogeneous {
                    pos,
                    expected: d,
                    got: indices.len(),
                })
            }
            _ => degree = Some(indices.len()),
        }
        plain.push((c, indices));
    }
    let degree = degree.unwrap_or(0);
    Ok(match variance {
        Some(false) => Object::MultiVector(build::<constcoef::exterior::Contravariant>(
            n, degree, plain,
        )?),
        _ => Object::Form(build::<constcoef::exterior::Covariant>(n, degree, plain)?),
    })
}

pub fn parse_form(text: &str, n: usize) -> Result<DiffForm> {
    match parse_object(text, n)? {
        Object::Form(a) => Ok(a),
        Object::MultiVector(_) => syntax(0, "expected a differential form"),
    }
}

pub fn parse_multivector(text: &str, n: usize) -> Result<MultiVector> {
    match parse_object(text, n)? {
        Object::MultiVector(v) => Ok(v),
        Object::Form(a) if a.is_zero() || a.degree() == 0 => Ok(MultiVector::from_terms(
            n,
            a.degree(),
            a.terms().map(|(i, c)| (i.clone(), c.clone())),
        )?),
        Object::Form(_) => syntax(0, "expected a multivector"),
    }
}

/// Comma-separated rationals, e.g. `0,1/2,-3`.
pub fn parse_point(text: &str, n: usize) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in text.split(',') {
        let trimmed = part.trim();
        out.push(parse_rational(trimmed).map_err(|_| ParseError::Syntax {
            pos,
            msg: format!("bad rational {trimmed:?}"),
        })?);
        pos += part.len() + 1;
    }
    if out.len() != n {
        return syntax(
            0,
            format!("point has {} coordinates, expected {n}", out.len()),
        );
    }
    Ok(out)
}

/// `P` or `(P) / (D)`.
fn parse_quotient(text: &str, n: usize, line: usize) -> Result<(Poly, Poly)> {
    let mut p = Parser::new(text, n, 'x').map_err(|e| at_line(line, e))?;
    let num = p.sum().map_err(|e| at_line(line, e))?;
    let den = if p.peek() == Some(&Tok::Slash) {
        p.bump();
        p.factor().map_err(|e| at_line(line, e))?
    } else {
        Poly::one(n)
    };
    p.expect_end().map_err(|e| at_line(line, e))?;
    if num.iter().any(|(_, _, b)| b.is_some()) {
        return Err(ParseError::Line {
            line,
            msg: "basis token in a chart".into(),
        });
    }
    let num = num
        .into_iter()
        .fold(Poly::zero(n), |acc, (_, t, _)| &acc + &t);
    Ok((num, den))
}

fn at_line(line: usize, e: ParseError) -> ParseError {
    ParseError::Line {
        line,
        msg: e.to_string(),
    }
}

fn numbered(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

/// Chart file: `u<i> = <poly in x>` lines, optionally followed by
/// `inv x<i> = <poly in u>` lines. Without inverse lines the chart is a
/// forward-only witness, and `u<i>` may be written `(P) / (D)`.
/// Blank lines and `#` comments are skipped.
pub fn parse_chart(text: &str, n: usize) -> Result<ChartWitness> {
    let mut forward: Vec<Option<(Poly, Poly)>> = vec![None; n];
    let mut inverse: Vec<Option<Poly>> = vec![None; n];
    let mut any_inverse = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let Some((lhs, rhs)) = body.split_once('=') else {
            return Err(ParseError::Line {
                line,
                msg: "expected '='".into(),
            });
        };
        let lhs = lhs.trim();
        let (slot, is_inverse) = if let Some(rest) = lhs.strip_prefix("inv") {
            (numbered(rest.trim(), "x"), true)
        } else {
            (numbered(lhs, "u"), false)
        };
        let Some(i) = slot.filter(|&i| (1..=n).contains(&i)) else {
            return Err(ParseError::Line {
                line,
                msg: format!("bad left-hand side {lhs:?}"),
            });
        };
        if is_inverse {
            any_inverse = true;
            let p = parse_poly_in(rhs, n, 'u').map_err(|e| at_line(line, e))?;
            if inverse[i - 1].replace(p).is_some() {
                return Err(ParseError::Line {
                    line,
                    msg: format!("x{i} given twice"),
                });
            }
        } else if forward[i - 1]
            .replace(parse_quotient(rhs, n, line)?)
            .is_some()
        {
            return Err(ParseError::Line {
                line,
                msg: format!("u{i} given twice"),
            });
        }
    }
    let missing = |what: &str, k: usize| ParseError::Line {
        line: 0,
        msg: format!("missing {what}{k}"),
    };
    let mut parts = Vec::with_capacity(n);
    for (k, f) in forward.into_iter().enumerate() {
        parts.push(f.ok_or_else(|| missing("u", k + 1))?);
    }
    if any_inverse {
        let mut inv = Vec::with_capacity(n);
        for (k, x) in inverse.into_iter().enumerate() {
            inv.push(x.ok_or_else(|| missing("inv x", k + 1))?);
        }
        let mut fwd = Vec::with_capacity(n);
        for (p, d) in parts {
            let Some(c) = d.constant_value() else {
                return Err(ParseError::Line {
                    line: 0,
                    msg: "rational components need a forward-only chart".into(),
                });
            };
            fwd.push(p.scale(&c.recip()));
        }
        return Ok(ChartWitness::Exact(Chart::new(fwd, inv)?));
    }
    if parts.iter().all(|(_, d)| d.is_constant()) {
        let fwd = parts
            .into_iter()
            .map(|(p, d)| p.scale(&d.constant_value().expect("constant").recip()))
            .collect();
        return Ok(ChartWitness::Formal(ForwardChart::polynomial(fwd)?));
    }
    // common denominator: product of the distinct denominators
    let mut common = Poly::one(n);
    for (_, d) in &parts {
        if common.div_exact(d)?.is_none() {
            common = &common * d;
        }
    }
    let mut numerators = Vec::with_capacity(n);
    for (p, d) in parts {
        let factor = common.div_exact(&d)?.expect("divides the product");
        numerators.push(&p * &factor);
    }
    Ok(ChartWitness::Formal(ForwardChart::rational(
        numerators, common,
    )?))
}

/// `Gamma[a][b][c] = <poly>` lines; omitted entries are zero.
pub fn parse_connection(text: &str, n: usize) -> Result<Connection> {
    let mut conn = Connection::zero(n);
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let bad = || ParseError::Line {
            line,
            msg: "expected Gamma[a][b][c] = <poly>".into(),
        };
        let (lhs, rhs) = body.split_once('=').ok_or_else(bad)?;
        let inner = lhs
            .trim()
            .strip_prefix("Gamma[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(bad)?;
        let idx: Vec<usize> = inner
            .split("][")
            .map(|s| s.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let [a, b, c] = idx[..] else {
            return Err(bad());
        };
        let p = parse_poly(rhs, n).map_err(|e| at_line(line, e))?;
        conn.set(a, b, c, p).map_err(|e| at_line(line, e.into()))?;
    }
    Ok(conn)
}
