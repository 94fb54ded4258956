//! Text syntax for rational functions in `q`.
//!
//! ```text
//! expr   := ["-"] term { ("+" | "-") ["-"] term }
//! term   := factor { ("*" | "/") factor }
//! factor := atom [ "^" exponent ]
//! exponent := uint | "m" | "(" expr ")"      (must fold to an integer >= 0)
//! atom   := "(" expr ")" | "q" | "m" | uint
//! ```
//!
//! Whitespace is ignored. `m` is replaced by its numeric value. Division is
//! exact rational-function division; only the final result has to be a power
//! series, so `q * (1/q)` is accepted while `1/q` is not.
//!
//! Rendering lists terms by ascending exponent, e.g. `1/(1 - q)`,
//! `1 + 2*q`, `-3/2*q^2`, and parses back to the same value.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};
use crate::ratfun::{normalize, RatFun};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u64 = 10_000;

/// Source text plus an optional value for the placeholder `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprText {
    pub source: String,
    pub m_value: Option<u64>,
}

impl ExprText {
    pub fn new(source: impl Into<String>, m_value: Option<u64>) -> Self {
        ExprText {
            source: source.into(),
            m_value,
        }
    }

    pub fn parse(&self) -> Result<RatFun> {
        parse_ratfun(&self.source, self.m_value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Q,
    M,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Q => "'q'".into(),
            Tok::M => "'m'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let tok = match c {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '0'..='9' => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[start..k].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), start));
                continue;
            }
            'q' => Tok::Q,
            'm' => Tok::M,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(syntax(k, format!("unexpected character '{other}'"))),
        };
        out.push((tok, k));
        k += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

/// Intermediate value: a reduced fraction whose denominator may vanish at 0.
#[derive(Clone)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    fn poly(p: Poly) -> Frac {
        Frac { num: p, den: Poly::one() }
    }

    fn make(num: Poly, den: Poly) -> Result<Frac> {
        let (num, den) = normalize(&num, &den)?;
        Ok(Frac { num, den })
    }

    fn add(&self, o: &Frac) -> Result<Frac> {
        Frac::make(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    fn sub(&self, o: &Frac) -> Result<Frac> {
        Frac::make(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }

    fn mul(&self, o: &Frac) -> Result<Frac> {
        Frac::make(&self.num * &o.num, &self.den * &o.den)
    }

    fn div(&self, o: &Frac) -> Result<Frac> {
        if o.num.is_zero() {
            return Err(Error::DivisionByZeroRatFun);
        }
        Frac::make(&self.num * &o.den, &self.den * &o.num)
    }

    fn neg(&self) -> Frac {
        Frac { num: -&self.num, den: self.den.clone() }
    }

    fn pow(&self, mut e: u64) -> Result<Frac> {
        let mut base = self.clone();
        let mut acc = Frac::poly(Poly::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// The value as a nonnegative integer constant, if it is one.
    fn as_exponent(&self) -> Option<u64> {
        if !self.den.is_one() || self.num.degree().unwrap_or(0) > 0 {
            return None;
        }
        let c = self.num.constant_term();
        if !c.is_integer() || c.is_negative() {
            return None;
        }
        c.to_integer().to_u64()
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    m_value: Option<u64>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        syntax(self.pos(), format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn m_value(&self, pos: usize) -> Result<u64> {
        self.m_value.ok_or(Error::UnboundM { pos })
    }

    fn signed_term(&mut self) -> Result<Frac> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.term()?.neg());
        }
        self.term()
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.signed_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.signed_term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.signed_term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.factor()?)?;
                }
                Tok::Slash => {
                    self.bump();
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        base.pow(e)
    }

    fn exponent(&mut self) -> Result<u64> {
        let pos = self.pos();
        let e = match self.bump().0 {
            Tok::Int(n) => n.to_u64().unwrap_or(u64::MAX),
            Tok::M => self.m_value(pos)?,
            Tok::LParen => {
                let v = self.expr()?;
                self.close_paren()?;
                v.as_exponent()
                    .ok_or_else(|| syntax(pos, "exponent must be a nonnegative integer"))?
            }
            t => {
                return Err(syntax(pos, format!("expected exponent, found {}", t.describe())));
            }
        };
        if e > MAX_EXPONENT {
            return Err(syntax(pos, format!("exponent {e} exceeds {MAX_EXPONENT}")));
        }
        Ok(e)
    }

    fn close_paren(&mut self) -> Result<()> {
        if *self.peek() != Tok::RParen {
            return Err(self.unexpected("')'"));
        }
        self.bump();
        Ok(())
    }

    fn atom(&mut self) -> Result<Frac> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let v = self.expr()?;
                self.close_paren()?;
                Ok(v)
            }
            Tok::Q => {
                self.bump();
                Ok(Frac::poly(Poly::monomial(Rat::one(), 1)))
            }
            Tok::M => {
                self.bump();
                let m = self.m_value(pos)?;
                Ok(Frac::poly(Poly::constant(Rat::from_integer(m.into()))))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Frac::poly(Poly::constant(Rat::from_integer(n))))
            }
            _ => Err(self.unexpected("'(', 'q', 'm' or an integer")),
        }
    }
}

/// Parse and evaluate an expression.
pub fn parse_ratfun(source: &str, m_value: Option<u64>) -> Result<RatFun> {
    let mut p = Parser {
        toks: tokenize(source)?,
        at: 0,
        m_value,
    };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    RatFun::new(v.num, v.den)
}

fn push_magnitude(out: &mut String, c: &Rat) {
    out.push_str(&c.numer().abs().to_string());
    if !c.denom().is_one() {
        out.push('/');
        out.push_str(&c.denom().to_string());
    }
}

/// Ascending-order text for a polynomial; `"0"` for zero.
pub fn render_poly(p: &Poly) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let unit = c.abs().is_one();
        if k == 0 {
            push_magnitude(&mut out, c);
            continue;
        }
        if !unit {
            push_magnitude(&mut out, c);
            out.push('*');
        }
        out.push('q');
        if k > 1 {
            out.push('^');
            out.push_str(&k.to_string());
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Text form of `f` that [`parse_ratfun`] maps back to `f`.
pub fn render_ratfun(f: &RatFun) -> String {
    let num = render_poly(f.num());
    if f.den().is_one() {
        return num;
    }
    let single = f.num().coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
    let num = if single { num } else { format!("({num})") };
    format!("{num}/({})", render_poly(f.den()))
}

/// Text form of residue coefficients, e.g. `1 + 2*q`.
pub fn render_residues(v: &[u64]) -> String {
    render_poly(&Poly::new(v.iter().map(|&c| Rat::from_integer(c.into())).collect()))
}
