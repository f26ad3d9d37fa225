//! Presentations of graded algebras and their line-oriented text format.
//!
//! ```text
//! # comment
//! algebra    NAME
//! generators a b c d
//! order      a=2 b=1 c=1 d=2          # weights for the monomial order (default 1)
//! grading    right a=1 b=-1 c=1 d=-1  # any number of named Z-gradings
//! stargrading on                      # (xy)* = (-1)^(|x||y|) y* x* with all generators odd
//! rule       b a -> q^-1 a b
//! star       a -> d
//! coproduct  a -> a (x) a + b (x) c
//! counit     a -> 1
//! antipode   b -> -q^-1 b
//! pairing    E b -> 1
//! ```
//!
//! Scalars may use integers, fractions, `i`, `q^k`, `s^k` (with `s^2 = q`) and parenthesized sums.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::qarith::gauss::gauss_rat;
use crate::qarith::QScalar;

use super::ncpoly::{NCPoly, Tensor, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NCPoly,
}

#[derive(Clone, Debug, Default)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<String>,
    pub order_weights: Vec<i64>,
    pub gradings: Vec<(String, Vec<i64>)>,
    pub graded_star: bool,
    pub rules: Vec<Rule>,
    pub star: BTreeMap<u8, NCPoly>,
    pub coproduct: BTreeMap<u8, Tensor>,
    pub counit: BTreeMap<u8, QScalar>,
    pub antipode: BTreeMap<u8, NCPoly>,
    /// `(dual generator name, generator, value)`.
    pub pairing: Vec<(String, u8, QScalar)>,
}

impl Presentation {
    pub fn generator_index(&self, name: &str) -> Option<u8> {
        self.generators.iter().position(|g| g == name).map(|i| i as u8)
    }

    pub fn grading_index(&self, name: &str) -> Option<usize> {
        self.gradings.iter().position(|(n, _)| n == name)
    }

    /// Render a word as `a*b^2*c`.
    pub fn word_name(&self, w: &[u8]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let g = &self.generators[w[i] as usize];
            if j - i == 1 {
                parts.push(g.clone());
            } else {
                parts.push(format!("{g}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }

    pub fn poly_name(&self, p: &NCPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        p.terms()
            .map(|(w, c)| format!("({c})*{}", self.word_name(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Presentation::default();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim_start();
            if trimmed.is_empty() {
                continue;
            }
            let offset = content.len() - trimmed.len();
            let (kw, rest) = match trimmed.find(char::is_whitespace) {
                Some(i) => (&trimmed[..i], &trimmed[i..]),
                None => (trimmed, ""),
            };
            let rest_col = offset + kw.len() + 1;
            let err = |col: usize, msg: String| Error::Parse {
                line: line_no,
                col,
                msg,
            };
            match kw {
                "algebra" => p.name = rest.trim().to_string(),
                "generators" => {
                    if !p.generators.is_empty() {
                        return Err(err(offset + 1, "generators declared twice".into()));
                    }
                    for g in rest.split_whitespace() {
                        if !is_ident(g) || matches!(g, "q" | "s" | "i") {
                            return Err(err(col_of(raw, g), format!("invalid generator name {g:?}")));
                        }
                        p.generators.push(g.to_string());
                    }
                    if p.generators.len() > 255 {
                        return Err(err(offset + 1, "too many generators".into()));
                    }
                    p.order_weights = vec![1; p.generators.len()];
                }
                "order" | "grading" => {
                    let mut items = rest.split_whitespace();
                    let gname = if kw == "grading" {
                        match items.next() {
                            Some(n) => n.to_string(),
                            None => return Err(err(rest_col, "grading needs a name".into())),
                        }
                    } else {
                        String::new()
                    };
                    let mut values = vec![0i64; p.generators.len()];
                    if kw == "order" {
                        values = vec![1; p.generators.len()];
                    }
                    for item in items {
                        let col = col_of(raw, item);
                        let (g, v) = item
                            .split_once('=')
                            .ok_or_else(|| err(col, format!("expected gen=value, found {item:?}")))?;
                        let gi = p
                            .generator_index(g)
                            .ok_or_else(|| err(col, format!("unknown generator {g:?}")))?;
                        let v: i64 = v
                            .parse()
                            .map_err(|_| err(col, format!("invalid integer in {item:?}")))?;
                        values[gi as usize] = v;
                    }
                    if kw == "order" {
                        if values.iter().any(|&w| w <= 0) {
                            return Err(err(rest_col, "order weights must be positive".into()));
                        }
                        p.order_weights = values;
                    } else {
                        p.gradings.push((gname, values));
                    }
                }
                "stargrading" => {
                    p.graded_star = match rest.trim() {
                        "on" => true,
                        "off" => false,
                        other => return Err(err(rest_col, format!("expected on/off, found {other:?}"))),
                    }
                }
                "rule" | "star" | "coproduct" | "counit" | "antipode" | "pairing" => {
                    let arrow = rest.find("->").ok_or_else(|| err(rest_col, "expected '->'".into()))?;
                    let lhs_text = &rest[..arrow];
                    let rhs_text = &rest[arrow + 2..];
                    let rhs_col = rest_col + arrow + 2;
                    let mut lhs_tokens = lhs_text.split_whitespace();
                    if kw == "pairing" {
                        let dual = lhs_tokens
                            .next()
                            .ok_or_else(|| err(rest_col, "pairing needs a dual generator".into()))?;
                        let g = lhs_tokens
                            .next()
                            .ok_or_else(|| err(rest_col, "pairing needs a generator".into()))?;
                        let gi = p
                            .generator_index(g)
                            .ok_or_else(|| err(col_of(raw, g), format!("unknown generator {g:?}")))?;
                        let val = parse_scalar(rhs_text, &p.generators, line_no, rhs_col)?;
                        p.pairing.push((dual.to_string(), gi, val));
                        continue;
                    }
                    let lhs_word: Vec<u8> = lhs_tokens
                        .map(|t| {
                            p.generator_index(t)
                                .ok_or_else(|| err(col_of(raw, t), format!("unknown generator {t:?}")))
                        })
                        .collect::<Result<_>>()?;
                    if lhs_word.is_empty() {
                        return Err(err(rest_col, "empty left-hand side".into()));
                    }
                    if kw != "rule" && lhs_word.len() != 1 {
                        return Err(err(rest_col, format!("{kw} is defined on single generators")));
                    }
                    let g = lhs_word[0];
                    match kw {
                        "rule" => {
                            let rhs = parse_poly(rhs_text, &p.generators, line_no, rhs_col)?;
                            p.rules.push(Rule { lhs: lhs_word, rhs });
                        }
                        "star" => {
                            p.star.insert(g, parse_poly(rhs_text, &p.generators, line_no, rhs_col)?);
                        }
                        "antipode" => {
                            p.antipode
                                .insert(g, parse_poly(rhs_text, &p.generators, line_no, rhs_col)?);
                        }
                        "counit" => {
                            p.counit
                                .insert(g, parse_scalar(rhs_text, &p.generators, line_no, rhs_col)?);
                        }
                        "coproduct" => {
                            p.coproduct
                                .insert(g, parse_tensor(rhs_text, &p.generators, line_no, rhs_col)?);
                        }
                        _ => unreachable!(),
                    }
                }
                other => return Err(err(offset + 1, format!("unknown directive {other:?}"))),
            }
        }
        if p.generators.is_empty() {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                col: 1,
                msg: "no generators declared".into(),
            });
        }
        Ok(p)
    }
}

fn col_of(line: &str, token: &str) -> usize {
    line.find(token).map(|i| i + 1).unwrap_or(1)
}

fn is_ident(t: &str) -> bool {
    let mut ch = t.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic())
        && ch.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Caret,
    Plus,
    Minus,
    Times,
    Slash,
    LParen,
    RParen,
    TensorSep,
}

struct Lexer<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    gens: &'a [String],
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '(' && chars.get(i + 1) == Some(&'x') && chars.get(i + 2) == Some(&')') {
            out.push((Tok::TensorSep, col));
            i += 3;
            continue;
        }
        let simple = match c {
            '^' => Some(Tok::Caret),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Times),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, col));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().unwrap()), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        return Err(Error::Parse {
            line,
            col,
            msg: format!("unexpected character {c:?}"),
        });
    }
    Ok(out)
}

/// A parsed term: scalar, left word, and (in tensor mode) right word.
type Term = (QScalar, Word, Option<Word>);

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn int_exponent(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Num(n)) => {
                let v: i64 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected an integer exponent"))
            }
        }
    }

    fn opt_power(&mut self) -> Result<i64> {
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            if self.peek() == Some(&Tok::LParen) {
                self.pos += 1;
                let e = self.int_exponent()?;
                if self.next() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return Err(self.err("expected ')'"));
                }
                return Ok(e);
            }
            self.int_exponent()
        } else {
            Ok(1)
        }
    }

    fn poly(&mut self, tensor: bool, scalar_only: bool) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (c, w, w2) = self.term(tensor, scalar_only)?;
            let c = if sign < 0 { -c } else { c };
            out.push((c, w, w2));
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(out)
    }

    fn term(&mut self, tensor: bool, scalar_only: bool) -> Result<Term> {
        let mut coef = QScalar::one();
        let mut left: Word = Vec::new();
        let mut right: Option<Word> = None;
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(Tok::Times) if factors > 0 => {
                    self.pos += 1;
                    continue;
                }
                Some(Tok::Num(_)) => {
                    let Some(Tok::Num(n)) = self.next() else { unreachable!() };
                    let mut r = BigRational::from_integer(n);
                    if self.peek() == Some(&Tok::Slash) {
                        self.pos += 1;
                        match self.next() {
                            Some(Tok::Num(d)) if d != BigInt::from(0) => r /= BigRational::from_integer(d),
                            _ => {
                                self.pos -= 1;
                                return Err(self.err("expected a nonzero denominator"));
                            }
                        }
                    }
                    coef = &coef * &QScalar::constant(gauss_rat(r));
                }
                Some(Tok::Ident(_)) => {
                    let Some(Tok::Ident(name)) = self.next() else {
                        unreachable!()
                    };
                    let start = self.pos - 1;
                    match name.as_str() {
                        "q" => {
                            let e = self.opt_power()?;
                            coef = &coef * &QScalar::q_pow(e);
                        }
                        "s" => {
                            let e = self.opt_power()?;
                            coef = &coef * &QScalar::s_pow(e);
                        }
                        "i" => coef = &coef * &QScalar::i(),
                        _ => {
                            if scalar_only {
                                self.pos = start;
                                return Err(self.err(format!("generator {name:?} not allowed in a scalar")));
                            }
                            let Some(g) = self.gens.iter().position(|x| *x == name) else {
                                self.pos = start;
                                return Err(self.err(format!("unknown symbol {name:?}")));
                            };
                            let e = self.opt_power()?;
                            if e < 0 {
                                return Err(self.err("negative power of a generator"));
                            }
                            let target = match right.as_mut() {
                                Some(r) => r,
                                None => &mut left,
                            };
                            for _ in 0..e {
                                target.push(g as u8);
                            }
                        }
                    }
                }
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let inner = self.poly(false, true)?;
                    if self.next() != Some(Tok::RParen) {
                        self.pos -= 1;
                        return Err(self.err("expected ')'"));
                    }
                    let mut sum = QScalar::zero();
                    for (c, _, _) in inner {
                        sum += &c;
                    }
                    let e = self.opt_power()?;
                    if e < 0 {
                        return Err(self.err("negative power of a parenthesized sum"));
                    }
                    coef = &coef * &sum.pow(e as u32);
                }
                Some(Tok::TensorSep) if tensor && right.is_none() => {
                    self.pos += 1;
                    right = Some(Vec::new());
                    continue;
                }
                _ => break,
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(self.err("expected a term"));
        }
        if tensor && right.is_none() {
            return Err(self.err("tensor term needs '(x)'"));
        }
        Ok((coef, left, right))
    }
}

fn run_parser(
    text: &str,
    gens: &[String],
    line: usize,
    col: usize,
    tensor: bool,
    scalar_only: bool,
) -> Result<Vec<Term>> {
    let toks = lex(text, line, col)?;
    let end_col = col + text.chars().count();
    let mut lx = Lexer {
        toks,
        pos: 0,
        line,
        end_col,
        gens,
    };
    let out = lx.poly(tensor, scalar_only)?;
    if lx.pos < lx.toks.len() {
        return Err(lx.err("unexpected trailing input"));
    }
    Ok(out)
}

pub fn parse_poly(text: &str, gens: &[String], line: usize, col: usize) -> Result<NCPoly> {
    let mut p = NCPoly::zero();
    for (c, w, _) in run_parser(text, gens, line, col, false, false)? {
        p.add_term(w, c);
    }
    Ok(p)
}

pub fn parse_tensor(text: &str, gens: &[String], line: usize, col: usize) -> Result<Tensor> {
    let mut t = Tensor::zero();
    for (c, w, w2) in run_parser(text, gens, line, col, true, false)? {
        t.add_term(w, w2.unwrap_or_default(), c);
    }
    Ok(t)
}

pub fn parse_scalar(text: &str, gens: &[String], line: usize, col: usize) -> Result<QScalar> {
    let mut s = QScalar::zero();
    for (c, _, _) in run_parser(text, gens, line, col, false, true)? {
        s += &c;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_directives() {
        let p = Presentation::parse(
            "generators a b\norder a=2 b=1\ngrading w a=1 b=-1\nrule b a -> q^-1 a b\nrule a a -> (q - q^-1) b b + 1/2\nstar a -> -q b\ncoproduct a -> a (x) a + 3 b (x) b\ncounit a -> 1\npairing E a -> s^-1\n",
        )
        .unwrap();
        assert_eq!(p.generators, vec!["a", "b"]);
        assert_eq!(p.rules.len(), 2);
        assert_eq!(p.rules[0].lhs, vec![1, 0]);
        assert_eq!(p.rules[0].rhs.coeff(&[0, 1]), QScalar::q_pow(-1));
        assert_eq!(
            p.rules[1].rhs.coeff(&[]),
            QScalar::constant(gauss_rat(BigRational::new(1.into(), 2.into())))
        );
        assert_eq!(p.coproduct[&0].coeff(&[1], &[1]), QScalar::from_int(3));
        assert_eq!(p.pairing[0].2, QScalar::s_pow(-1));
        assert_eq!(p.gradings[0].1, vec![1, -1]);
    }

    #[test]
    fn reports_positions() {
        let e = Presentation::parse("generators a b\nrule b a -> q^-1 a z\n").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                col: 20,
                msg: "unknown symbol \"z\"".into()
            }
        );
        let e = Presentation::parse("generators a\nfoo a\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 1, .. }));
        let e = Presentation::parse("generators a\nrule a a -> (a)\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 14, .. }));
        let e = Presentation::parse("generators a\nrule a a -> 2 $\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 15, .. }));
    }
}
