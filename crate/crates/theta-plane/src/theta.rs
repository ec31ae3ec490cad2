//! Skew-symmetric deformation matrices and their evaluation.
//!
//! Only the strictly lower triangle (k > l) is stored; the transpose entry is
//! the negation and the diagonal is zero. Angles are either exact rational
//! multiples of pi or raw radians. Rational multiples let the common corner
//! values (multiples of pi/2) evaluate to exact units.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::complex::Complex64;
use num::rational::BigRational;
use num::{BigInt, Zero};

use crate::error::{Error, Result};
use crate::rational::rational_to_f64;

#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    /// The coefficient r in theta = r * pi.
    PiMultiple(BigRational),
    Radians(f64),
}

impl Angle {
    fn is_zero(&self) -> bool {
        match self {
            Angle::PiMultiple(r) => r.is_zero(),
            Angle::Radians(x) => *x == 0.0,
        }
    }
}

impl std::fmt::Display for Angle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Angle::PiMultiple(r) => write!(f, "{}pi", r),
            Angle::Radians(x) => write!(f, "{}", x),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaMatrix {
    n: u32,
    entries: BTreeMap<(u32, u32), Angle>,
}

impl ThetaMatrix {
    /// The zero deformation (the commutative polynomial algebra).
    pub fn zero(n: u32) -> Self {
        ThetaMatrix {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Sets the angle for the pair (k, l); requires 1 <= l < k <= n.
    pub fn set(&mut self, k: u32, l: u32, angle: Angle) -> Result<()> {
        if l == 0 || k <= l || k > self.n {
            return Err(Error::GeneratorOutOfRange {
                index: k.max(l),
                n: self.n,
            });
        }
        if let Angle::Radians(x) = angle {
            if !x.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        if angle.is_zero() {
            self.entries.remove(&(k, l));
        } else {
            self.entries.insert((k, l), angle);
        }
        Ok(())
    }

    /// Stored angle for k > l, if nonzero.
    pub fn angle(&self, k: u32, l: u32) -> Option<&Angle> {
        self.entries.get(&(k, l))
    }

    /// e^(i * sum of e * theta_(k,l)) over stored-orientation factors.
    pub fn eval_exponents(&self, factors: impl Iterator<Item = ((u32, u32), i64)>) -> Complex64 {
        let mut pi_part = BigRational::zero();
        let mut rad_part = 0.0f64;
        for ((k, l), e) in factors {
            match self.entries.get(&(k, l)) {
                Some(Angle::PiMultiple(r)) => pi_part += r * BigRational::from(BigInt::from(e)),
                Some(Angle::Radians(x)) => rad_part += x * e as f64,
                None => {}
            }
        }
        if rad_part == 0.0 {
            // Reduce mod 2 and hit the quarter-turn corners exactly.
            let two = BigRational::from(BigInt::from(2));
            let frac = &pi_part - (&pi_part / &two).floor() * &two;
            let half = BigRational::new(BigInt::from(1), BigInt::from(2));
            if frac.is_zero() {
                return Complex64::new(1.0, 0.0);
            } else if frac == half {
                return Complex64::new(0.0, 1.0);
            } else if frac == BigRational::from(BigInt::from(1)) {
                return Complex64::new(-1.0, 0.0);
            } else if frac == &half + BigRational::from(BigInt::from(1)) {
                return Complex64::new(0.0, -1.0);
            }
            let angle = rational_to_f64(&frac) * std::f64::consts::PI;
            return Complex64::new(angle.cos(), angle.sin());
        }
        let angle = rational_to_f64(&pi_part) * std::f64::consts::PI + rad_part;
        Complex64::new(angle.cos(), angle.sin())
    }

    /// e^(i * e * theta_(k,l)) for any pair of coordinates.
    pub fn lambda_pow(&self, k: u32, l: u32, e: i64) -> Complex64 {
        if k == l {
            return Complex64::new(1.0, 0.0);
        }
        let (key, exp) = if k > l { ((k, l), e) } else { ((l, k), -e) };
        self.eval_exponents(std::iter::once((key, exp)))
    }

    /// Parses the line-oriented config format:
    ///
    /// ```text
    /// # comment
    /// n 2
    /// theta 2 1 1/2pi
    /// theta 2 1 0.25
    /// ```
    ///
    /// The `n` line must come first; pairs not mentioned stay zero.
    pub fn parse_config(text: &str) -> Result<Self> {
        let mut result: Option<ThetaMatrix> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            match tokens[0] {
                "n" => {
                    if result.is_some() {
                        return Err(config_err(line_no, "repeated n line"));
                    }
                    if tokens.len() != 2 {
                        return Err(config_err(line_no, "expected `n <int>`"));
                    }
                    let n: u32 = tokens[1]
                        .parse()
                        .map_err(|_| config_err(line_no, "bad value for n"))?;
                    if n == 0 {
                        return Err(config_err(line_no, "n must be at least 1"));
                    }
                    result = Some(ThetaMatrix::zero(n));
                }
                "theta" => {
                    let th = result
                        .as_mut()
                        .ok_or_else(|| config_err(line_no, "theta line before n line"))?;
                    if tokens.len() != 4 {
                        return Err(config_err(line_no, "expected `theta <k> <l> <angle>`"));
                    }
                    let k: u32 = tokens[1]
                        .parse()
                        .map_err(|_| config_err(line_no, "bad row index"))?;
                    let l: u32 = tokens[2]
                        .parse()
                        .map_err(|_| config_err(line_no, "bad column index"))?;
                    let angle = parse_angle(tokens[3])
                        .ok_or_else(|| config_err(line_no, "bad angle"))?;
                    if th.entries.contains_key(&(k, l)) {
                        return Err(config_err(line_no, "repeated theta pair"));
                    }
                    th.set(k, l, angle)
                        .map_err(|_| config_err(line_no, "indices must satisfy 1 <= l < k <= n"))?;
                }
                other => {
                    return Err(config_err(line_no, &format!("unknown directive `{other}`")));
                }
            }
        }
        result.ok_or_else(|| config_err(0, "missing n line"))
    }

    pub fn format_config(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n);
        for ((k, l), angle) in &self.entries {
            let _ = writeln!(out, "theta {} {} {}", k, l, angle);
        }
        out
    }
}

fn config_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        pos: line,
        msg: format!("deformation config, line {line}: {msg}"),
    }
}

/// `<rat>pi` (rational multiple of pi, optionally signed) or a decimal.
fn parse_angle(token: &str) -> Option<Angle> {
    if let Some(body) = token.strip_suffix("pi") {
        let (sign, digits) = match body.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, body),
        };
        let (num_s, den_s) = match digits.split_once('/') {
            Some((a, b)) => (a, b),
            None => (digits, "1"),
        };
        if num_s.is_empty() || !num_s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if den_s.is_empty() || !den_s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let num: BigInt = num_s.parse().ok()?;
        let den: BigInt = den_s.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Angle::PiMultiple(BigRational::new(num * BigInt::from(sign), den)));
    }
    let x: f64 = token.parse().ok()?;
    x.is_finite().then_some(Angle::Radians(x))
}
