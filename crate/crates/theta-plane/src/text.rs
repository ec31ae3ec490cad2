//! Canonical text form of elements and scalars.
//!
//! Grammar (whitespace insignificant, no implicit multiplication):
//!
//! ```text
//! expr := sum
//! sum  := "-"? prod (("+" | "-") prod)*
//! prod := pow ("*" pow)*
//! pow  := atom ("^" int)?
//! atom := "z" uint | "zb" uint | "x" | "i" | rat
//!       | "L[" uint "," uint "]" | "(" expr ")" | "star(" expr ")"
//! rat  := uint ("/" uint)?
//! int  := "-"? uint
//! ```
//!
//! Negative exponents are accepted only on phase literals, whose inverses
//! exist. The formatter emits one term per monomial in graded-lexicographic
//! order, so parse(format(a)) reproduces a exactly, in both modes: numeric
//! coefficients print as the exact rational value of their doubles.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};

use crate::element::{AlgebraSignature, Element};
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::phase::PhaseWord;
use crate::rational::{f64_to_rational, GaussianRational};
use crate::scalar::Coeff;

// ---------------------------------------------------------------------------
// lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Times,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Int(String),
    Z(u32),
    Zb(u32),
    X,
    I,
    L,
    StarFn,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        while let Some(&b) = self.src.get(self.pos) {
            let start = self.pos;
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.pos += 1;
                    continue;
                }
                b'+' => out.push((start, Tok::Plus)),
                b'-' => out.push((start, Tok::Minus)),
                b'*' => out.push((start, Tok::Times)),
                b'^' => out.push((start, Tok::Caret)),
                b'/' => out.push((start, Tok::Slash)),
                b'(' => out.push((start, Tok::LParen)),
                b')' => out.push((start, Tok::RParen)),
                b'[' => out.push((start, Tok::LBracket)),
                b']' => out.push((start, Tok::RBracket)),
                b',' => out.push((start, Tok::Comma)),
                b'0'..=b'9' => {
                    out.push((start, Tok::Int(self.read_digits())));
                    continue;
                }
                b'L' => out.push((start, Tok::L)),
                b'a'..=b'z' => {
                    out.push((start, self.read_word()?));
                    continue;
                }
                other => {
                    return Err(err(start, format!("unexpected character `{}`", other as char)));
                }
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn read_digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn read_word(&mut self) -> Result<Tok> {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(b'a'..=b'z')) {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match word {
            "x" => Ok(Tok::X),
            "i" => Ok(Tok::I),
            "star" => Ok(Tok::StarFn),
            "z" | "zb" => {
                let digits = self.read_digits();
                if digits.is_empty() {
                    return Err(err(start, format!("generator `{word}` needs an index")));
                }
                let j: u32 = digits
                    .parse()
                    .map_err(|_| err(start, "generator index too large"))?;
                Ok(if word == "z" { Tok::Z(j) } else { Tok::Zb(j) })
            }
            _ => Err(err(start, format!("unknown name `{word}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// parser

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    cursor: usize,
    sig: &'a AlgebraSignature,
    end: usize,
}

pub fn parse_element(text: &str, sig: &AlgebraSignature) -> Result<Element> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        cursor: 0,
        sig,
        end: text.len(),
    };
    let e = p.sum()?;
    if let Some((pos, t)) = p.peek_with_pos() {
        return Err(err(pos, format!("unexpected token {t:?} after expression")));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cursor).map(|(_, t)| t)
    }

    fn peek_with_pos(&self) -> Option<(usize, &Tok)> {
        self.toks.get(self.cursor).map(|(p, t)| (*p, t))
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.cursor)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.cursor).map(|(_, t)| t.clone());
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let pos = self.pos();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(err(pos, format!("expected {want:?}, found {t:?}"))),
            None => Err(err(pos, format!("expected {want:?}, found end of input"))),
        }
    }

    fn sum(&mut self) -> Result<Element> {
        let mut acc = if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            self.prod()?.neg()
        } else {
            self.prod()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.prod()?)?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.prod()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn prod(&mut self) -> Result<Element> {
        let mut acc = self.pow()?;
        while matches!(self.peek(), Some(Tok::Times)) {
            self.next();
            acc = acc.mul(&self.pow()?)?;
        }
        Ok(acc)
    }

    fn pow(&mut self) -> Result<Element> {
        let (base, phase) = self.atom()?;
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(base);
        }
        self.next();
        let negative = if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            true
        } else {
            false
        };
        let pos = self.pos();
        let e = match self.next() {
            Some(Tok::Int(d)) => d
                .parse::<u32>()
                .map_err(|_| err(pos, "exponent too large"))?,
            _ => return Err(err(pos, "expected an exponent")),
        };
        if negative {
            let word = phase.ok_or(Error::NegativeExponent)?;
            let c = self.sig.coeff_from_word(word.pow(-(e as i64)))?;
            return Element::monomial(self.sig.clone(), MultiIndex::constant(self.sig.n()), Some(c));
        }
        base.pow(e)
    }

    /// Returns the atom and, for a phase literal, its word (so that a
    /// negative exponent can invert it).
    fn atom(&mut self) -> Result<(Element, Option<PhaseWord>)> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Z(j)) => Ok((Element::z(self.sig.clone(), j)?, None)),
            Some(Tok::Zb(j)) => Ok((Element::zb(self.sig.clone(), j)?, None)),
            Some(Tok::X) => Ok((Element::x(self.sig.clone())?, None)),
            Some(Tok::I) => Ok((
                Element::from_gaussian(self.sig.clone(), &GaussianRational::i()),
                None,
            )),
            Some(Tok::Int(digits)) => {
                let num: BigInt = digits.parse().expect("digit runs parse as integers");
                let den = if matches!(self.peek(), Some(Tok::Slash)) {
                    self.next();
                    let dpos = self.pos();
                    match self.next() {
                        Some(Tok::Int(d)) => {
                            let den: BigInt = d.parse().expect("digit runs parse as integers");
                            if den.is_zero() {
                                return Err(err(dpos, "zero denominator"));
                            }
                            den
                        }
                        _ => return Err(err(dpos, "expected a denominator")),
                    }
                } else {
                    BigInt::one()
                };
                let g = GaussianRational::from_rational(BigRational::new(num, den));
                Ok((Element::from_gaussian(self.sig.clone(), &g), None))
            }
            Some(Tok::L) => {
                self.expect(Tok::LBracket)?;
                let k = self.index_literal()?;
                self.expect(Tok::Comma)?;
                let l = self.index_literal()?;
                self.expect(Tok::RBracket)?;
                let word = PhaseWord::generator(self.sig.n(), k, l)?;
                let c = self.sig.coeff_from_word(word.clone())?;
                let e = Element::monomial(
                    self.sig.clone(),
                    MultiIndex::constant(self.sig.n()),
                    Some(c),
                )?;
                Ok((e, Some(word)))
            }
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok((e, None))
            }
            Some(Tok::StarFn) => {
                self.expect(Tok::LParen)?;
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok((e.star(), None))
            }
            Some(t) => Err(err(pos, format!("unexpected token {t:?}"))),
            None => Err(err(pos, "unexpected end of input")),
        }
    }

    fn index_literal(&mut self) -> Result<u32> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Int(d)) => d.parse::<u32>().map_err(|_| err(pos, "index too large")),
            _ => Err(err(pos, "expected an index")),
        }
    }
}

// ---------------------------------------------------------------------------
// formatter

/// Canonical text for an element; `parse_element` inverts it.
pub fn format_element(e: &Element) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (idx, coeff)) in e.terms().enumerate() {
        let (neg, body) = render_term(idx, coeff);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

/// Canonical text for a bare coefficient (used for scalar output).
pub fn format_coeff(c: &Coeff) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    let (neg, body) = render_coeff(c);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn render_term(idx: &MultiIndex, coeff: &Coeff) -> (bool, String) {
    let mono = render_monomial(idx);
    if mono.is_empty() {
        return render_coeff(coeff);
    }
    if coeff.is_one() {
        return (false, mono);
    }
    let minus_one = coeff.neg();
    if minus_one.is_one() {
        return (true, mono);
    }
    let (neg, body) = render_coeff(coeff);
    (neg, format!("{body} * {mono}"))
}

fn render_monomial(idx: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (j, &e) in idx.p().iter().enumerate() {
        if e > 0 {
            parts.push(power(&format!("z{}", j + 1), e));
        }
    }
    for (j, &e) in idx.q().iter().enumerate() {
        if e > 0 {
            parts.push(power(&format!("zb{}", j + 1), e));
        }
    }
    if idx.t() > 0 {
        parts.push(power("x", idx.t()));
    }
    parts.join("*")
}

fn power(base: &str, e: u32) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

fn render_coeff(c: &Coeff) -> (bool, String) {
    match c {
        Coeff::Exact(s) => {
            let terms: Vec<(&PhaseWord, GaussianRational)> =
                s.terms().map(|(w, g)| (w, g.clone())).collect();
            if terms.len() == 1 {
                let (w, g) = &terms[0];
                render_scalar_term(w, g)
            } else {
                let mut inner = String::new();
                for (i, (w, g)) in terms.iter().enumerate() {
                    let (neg, body) = render_scalar_term(w, g);
                    if i == 0 {
                        if neg {
                            inner.push('-');
                        }
                    } else {
                        inner.push_str(if neg { " - " } else { " + " });
                    }
                    inner.push_str(&body);
                }
                (false, format!("({inner})"))
            }
        }
        Coeff::Numeric(v) => {
            let g = GaussianRational::new(
                f64_to_rational(v.value().re).expect("stored doubles are finite"),
                f64_to_rational(v.value().im).expect("stored doubles are finite"),
            );
            render_gauss(&g)
        }
    }
}

fn render_scalar_term(w: &PhaseWord, g: &GaussianRational) -> (bool, String) {
    if w.is_identity() {
        return render_gauss(g);
    }
    let wstr = render_word(w);
    if g.is_one() {
        return (false, wstr);
    }
    if g.neg().is_one() {
        return (true, wstr);
    }
    let (neg, gbody) = render_gauss(g);
    (neg, format!("{gbody} * {wstr}"))
}

fn render_word(w: &PhaseWord) -> String {
    w.factors()
        .map(|((k, l), e)| {
            if e == 1 {
                format!("L[{k},{l}]")
            } else {
                format!("L[{k},{l}]^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn render_gauss(g: &GaussianRational) -> (bool, String) {
    let re = g.re();
    let im = g.im();
    if im.is_zero() {
        (re.is_negative(), rat_abs(re))
    } else if re.is_zero() {
        (im.is_negative(), imag_abs(im))
    } else {
        let mid = if im.is_negative() { " - " } else { " + " };
        let lead = if re.is_negative() {
            format!("-{}", rat_abs(re))
        } else {
            rat_abs(re)
        };
        (false, format!("({lead}{mid}{})", imag_abs(im)))
    }
}

fn rat_abs(r: &BigRational) -> String {
    let a = r.abs();
    if a.denom().is_one() {
        format!("{}", a.numer())
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

fn imag_abs(im: &BigRational) -> String {
    if im.abs().is_one() {
        "i".to_string()
    } else {
        format!("{} * i", rat_abs(im))
    }
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", format_element(self))
    }
}

// ---------------------------------------------------------------------------
// named element files

/// Parses a file of lines `name = expr`, with `#` comments and blank lines
/// ignored. Names must be unique identifiers.
pub fn parse_named_elements(text: &str, sig: &AlgebraSignature) -> Result<Vec<(String, Element)>> {
    let mut out: Vec<(String, Element)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let (name, expr) = line.split_once('=').ok_or_else(|| {
            err(line_no, format!("line {line_no}: expected `name = expr`"))
        })?;
        let name = name.trim();
        if name.is_empty()
            || !name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_')
            || name.chars().next().unwrap().is_ascii_digit()
        {
            return Err(err(line_no, format!("line {line_no}: bad name `{name}`")));
        }
        if out.iter().any(|(n, _)| n == name) {
            return Err(err(line_no, format!("line {line_no}: repeated name `{name}`")));
        }
        let e = parse_element(expr, sig)?;
        out.push((name.to_string(), e));
    }
    Ok(out)
}

pub fn format_named_elements(items: &[(String, Element)]) -> String {
    let mut out = String::new();
    for (name, e) in items {
        out.push_str(name);
        out.push_str(" = ");
        out.push_str(&format_element(e));
        out.push('\n');
    }
    out
}
