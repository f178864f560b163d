//! Reader for `.var` and `.zvar` files.
//!
//! ```text
//! # the Whitney umbrella
//! vars: x y z
//! x^2 - y^2*z
//! ```
//!
//! The first non-comment line declares the variables (separated by blanks or
//! commas); every further line holds one polynomial built from integers,
//! variables, `+ - * / ^` and parentheses. Division is only allowed by
//! constants. `#` starts a comment.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{Polynomial, Rational, Ring, VariableSet};

/// A parsed file: the declared variables and the polynomials.
#[derive(Debug, Clone)]
pub struct VarietyFile {
    pub ring: Ring,
    pub polynomials: Vec<Polynomial>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn parse_file(text: &str) -> Result<VarietyFile> {
    let mut ring = None;
    let mut polynomials = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        match &ring {
            None => ring = Some(parse_header(body, line_no)?),
            Some(r) => {
                let p = Parser::new(r, body, line_no).parse_line()?;
                if !p.is_zero() {
                    polynomials.push(p);
                }
            }
        }
    }
    let ring = ring.ok_or_else(|| syntax(1, 1, "missing `vars:` header"))?;
    Ok(VarietyFile { ring, polynomials })
}

fn parse_header(body: &str, line: usize) -> Result<Ring> {
    let offset = body.len() - body.trim_start().len();
    let rest = body
        .trim_start()
        .strip_prefix("vars:")
        .ok_or_else(|| syntax(line, offset + 1, "expected `vars:` header"))?;
    let names: Vec<&str> = rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(syntax(line, body.len() + 1, "no variables declared"));
    }
    for name in &names {
        let ok = name.chars().next().is_some_and(is_name_start) && name.chars().all(is_name_char);
        if !ok {
            let col = body.find(name).map_or(1, |p| body[..p].chars().count() + 1);
            return Err(syntax(line, col, format!("invalid variable name `{name}`")));
        }
    }
    VariableSet::new(&names).map_err(|e| syntax(line, offset + 1, e.to_string()))
}

struct Parser<'a> {
    ring: &'a Ring,
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Ring, body: &str, line: usize) -> Self {
        Parser {
            ring,
            chars: body.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        syntax(self.line, self.pos + 1, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_line(mut self) -> Result<Polynomial> {
        let p = self.expr()?;
        match self.peek() {
            None => Ok(p),
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let start = self.pos;
            let f = self.power()?;
            if c == '*' {
                acc = &acc * &f;
            } else {
                let q = f.constant_value().ok_or_else(|| syntax(self.line, start + 1, "division by a non-constant"))?;
                if q.is_zero() {
                    return Err(syntax(self.line, start + 1, "division by zero"));
                }
                acc = acc.scale(&(Rational::from_integer(1.into()) / q));
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.integer()?;
            let e = e.to_u32().filter(|&e| e <= u16::MAX as u32).ok_or_else(|| syntax(self.line, start + 1, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Polynomial::constant(self.ring, Rational::from_integer(n)))
            }
            Some(c) if is_name_start(c) => {
                let start = self.pos;
                while self.pos < self.chars.len() && is_name_char(self.chars[self.pos]) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.ring
                    .index_of(&name)
                    .map(|i| Polynomial::var(self.ring, i))
                    .ok_or_else(|| syntax(self.line, start + 1, format!("undeclared variable `{name}`")))
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of line")),
        }
    }
}

/// Parses a comma separated point whose entries are rationals or Gaussian
/// rationals such as `1/2`, `-i`, `3-2/5i`. Returns real and imaginary parts.
pub fn parse_point(s: &str) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let mut re = Vec::new();
    let mut im = Vec::new();
    let mut column = 1;
    for entry in s.split(',') {
        let (r, i) = parse_gaussian(entry.trim()).map_err(|m| syntax(1, column, m))?;
        re.push(r);
        im.push(i);
        column += entry.chars().count() + 1;
    }
    Ok((re, im))
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let bad = || format!("invalid number `{s}`");
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.trim().parse().map_err(|_| bad())?;
    let d: BigInt = den.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn parse_gaussian(s: &str) -> std::result::Result<(Rational, Rational), String> {
    let zero = Rational::zero();
    if s.is_empty() {
        return Err("empty coordinate".into());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok((parse_rational(s)?, zero));
    };
    // split at the last sign that is not leading
    let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
    let (real, imag) = match split {
        Some(i) => (parse_rational(&body[..i])?, &body[i..]),
        None => (zero, body),
    };
    let imag = match imag {
        "" | "+" => Rational::from_integer(1.into()),
        "-" => Rational::from_integer((-1).into()),
        other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
    };
    Ok((real, imag))
}

/// Parses `1,3` or `none` into 0-based axis indices from 1-based input.
pub fn parse_axes(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "none" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(syntax(1, 1, format!("invalid axis `{t}` (axes are 1-based)"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rational;

    #[test]
    fn parses_corpus_shapes() {
        let f = parse_file("# umbrella\nvars: x y z\nx^2 - y^2*z\n").unwrap();
        assert_eq!(f.ring.names(), ["x", "y", "z"]);
        assert_eq!(f.polynomials.len(), 1);
        let f = parse_file("vars: x, y\n  (x + 1/2)*(x - y)  # trailing\n\n-3*y^2/4 + 2\n").unwrap();
        let x = Polynomial::var(&f.ring, 0);
        let y = Polynomial::var(&f.ring, 1);
        let half = Polynomial::constant(&f.ring, rational(1, 2));
        assert_eq!(f.polynomials[0], &(&x + &half) * &(&x - &y));
        let expected = &(&y * &y).scale(&rational(-3, 4)) + &Polynomial::integer(&f.ring, 2);
        assert_eq!(f.polynomials[1], expected);
    }

    #[test]
    fn reports_positions() {
        let err = parse_file("vars: x y\nx + * y").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 5,
                message: "unexpected `*`".into()
            }
        );
        match parse_file("vars: x\n\nx + q").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (3, 5)),
            e => panic!("{e}"),
        }
        assert!(matches!(parse_file("x^2").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(parse_file("vars: x\nx/x").unwrap_err(), Error::Parse { column: 3, .. }));
        assert!(matches!(parse_file("vars: x\n(x").unwrap_err(), Error::Parse { .. }));
    }

    #[test]
    fn points_and_axes() {
        let (re, im) = parse_point("1, 0, i").unwrap();
        assert_eq!(re, vec![rational(1, 1), rational(0, 1), rational(0, 1)]);
        assert_eq!(im, vec![rational(0, 1), rational(0, 1), rational(1, 1)]);
        let (re, im) = parse_point("3-2/5i,-1/2,-i").unwrap();
        assert_eq!(re, vec![rational(3, 1), rational(-1, 2), rational(0, 1)]);
        assert_eq!(im, vec![rational(-2, 5), rational(0, 1), rational(-1, 1)]);
        assert!(parse_point("1,,2").is_err());
        assert_eq!(parse_axes("3").unwrap(), vec![2]);
        assert_eq!(parse_axes("none").unwrap(), Vec::<usize>::new());
        assert!(parse_axes("0").is_err());
    }
}
