//! A small expression language for user-defined profiles.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | power
//! power  := atom ("^" factor)?
//! atom   := NUMBER | "pi" | "y" | "ycoth" | FUNC atom | FUNC "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, so `-y^2` is `-(y^2)`.

use std::fmt;

use super::{MetricProfile, ProfileFn};
use crate::error::{Error, Result};
use crate::numerics::Jet4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "coth" => Func::Coth,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn apply(self, x: Jet4) -> Result<Jet4> {
        match self {
            Func::Sinh => Ok(x.sinh()),
            Func::Cosh => Ok(x.cosh()),
            Func::Tanh => Ok(x.tanh()),
            Func::Coth => x.coth(),
            Func::Exp => Ok(x.exp()),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

const NEG_PREC: u8 = 3;
const ATOM_PREC: u8 = 5;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileExpr {
    Num(f64),
    Pi,
    Y,
    YCoth,
    Neg(Box<ProfileExpr>),
    Bin(BinOp, Box<ProfileExpr>, Box<ProfileExpr>),
    Call(Func, Box<ProfileExpr>),
}

impl ProfileExpr {
    /// Evaluate with `y` bound to the given jet.
    pub fn eval_jet(&self, y: &Jet4) -> Result<Jet4> {
        Ok(match self {
            ProfileExpr::Num(v) => Jet4::constant(*v),
            ProfileExpr::Pi => Jet4::constant(std::f64::consts::PI),
            ProfileExpr::Y => *y,
            ProfileExpr::YCoth => y.ycoth(),
            ProfileExpr::Neg(e) => -e.eval_jet(y)?,
            ProfileExpr::Call(f, e) => f.apply(e.eval_jet(y)?)?,
            ProfileExpr::Bin(op, l, r) => {
                let (a, b) = (l.eval_jet(y)?, r.eval_jet(y)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.try_div(&b)?,
                    BinOp::Pow => a.pow(&b)?,
                }
            }
        })
    }

    /// Evaluate a constant expression (any `y` is bound to 0).
    pub fn eval_constant(&self) -> Result<f64> {
        Ok(self.eval_jet(&Jet4::constant(0.0))?.value())
    }

    /// Whether the expression mentions `y`.
    pub fn depends_on_y(&self) -> bool {
        match self {
            ProfileExpr::Num(_) | ProfileExpr::Pi => false,
            ProfileExpr::Y | ProfileExpr::YCoth => true,
            ProfileExpr::Neg(e) | ProfileExpr::Call(_, e) => e.depends_on_y(),
            ProfileExpr::Bin(_, l, r) => l.depends_on_y() || r.depends_on_y(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ProfileExpr::Bin(op, ..) => op.precedence(),
            ProfileExpr::Neg(_) => NEG_PREC,
            _ => ATOM_PREC,
        }
    }

    pub fn into_profile(self, label: impl Into<String>) -> MetricProfile {
        MetricProfile::new(label, ExprProfile { expr: self })
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &ProfileExpr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for ProfileExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileExpr::Num(v) => write!(f, "{v}"),
            ProfileExpr::Pi => f.write_str("pi"),
            ProfileExpr::Y => f.write_str("y"),
            ProfileExpr::YCoth => f.write_str("ycoth"),
            ProfileExpr::Neg(e) => {
                f.write_str("-")?;
                write_wrapped(f, e, e.precedence() < NEG_PREC)
            }
            ProfileExpr::Call(func, e) => write!(f, "{}({e})", func.name()),
            ProfileExpr::Bin(op, l, r) => {
                let p = op.precedence();
                let (wrap_l, wrap_r) = match op {
                    // Right-associative: the left operand must bind tighter.
                    BinOp::Pow => (l.precedence() <= p, r.precedence() < NEG_PREC),
                    _ => (l.precedence() < p, r.precedence() <= p),
                };
                write_wrapped(f, l, wrap_l)?;
                write!(f, " {} ", op.symbol())?;
                write_wrapped(f, r, wrap_r)
            }
        }
    }
}

#[derive(Debug)]
struct ExprProfile {
    expr: ProfileExpr,
}

impl ProfileFn for ExprProfile {
    fn jet(&self, y: f64) -> Result<Jet4> {
        self.expr.eval_jet(&Jet4::variable(y))
    }
    fn analytic_order(&self) -> u8 {
        4
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let end = t.0 == Tok::End;
            out.push(t);
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        let start = self.pos;
        let Some(ch) = trimmed.chars().next() else {
            return Ok((Tok::End, start));
        };
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += ch.len_utf8();
            return Ok((t, start));
        }
        if ch.is_ascii_digit() || ch == '.' {
            return self.number(start);
        }
        if ch.is_ascii_alphabetic() {
            let len = trimmed.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(trimmed.len());
            self.pos += len;
            return Ok((Tok::Ident(trimmed[..len].to_string()), start));
        }
        Err(Error::Syntax { offset: start, message: format!("unexpected character `{ch}`") })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize)> {
        let b = self.src.as_bytes();
        let mut i = start;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i < b.len() && b[i] == b'.' {
            i += 1;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        }
        if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                j += 1;
            }
            if j < b.len() && b[j].is_ascii_digit() {
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = &self.src[start..i];
        let v: f64 =
            text.parse().map_err(|_| Error::Syntax { offset: start, message: format!("malformed number `{text}`") })?;
        self.pos = i;
        Ok((Tok::Num(v), start))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax { offset: self.offset(), message: format!("expected {what}") })
        }
    }

    fn expr(&mut self) -> Result<ProfileExpr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = ProfileExpr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<ProfileExpr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = ProfileExpr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<ProfileExpr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(ProfileExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.factor()?;
            return Ok(ProfileExpr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ProfileExpr> {
        let off = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(ProfileExpr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "pi" => Ok(ProfileExpr::Pi),
                "y" => Ok(ProfileExpr::Y),
                "ycoth" => Ok(ProfileExpr::YCoth),
                other => match Func::from_name(other) {
                    Some(f) => {
                        let arg = self.atom()?;
                        Ok(ProfileExpr::Call(f, Box::new(arg)))
                    }
                    None => Err(Error::UnknownIdentifier { name, offset: off }),
                },
            },
            Tok::End => Err(Error::Syntax { offset: off, message: "unexpected end of input".into() }),
            t => Err(Error::Syntax { offset: off, message: format!("unexpected token {t:?}") }),
        }
    }
}

/// Parse a profile expression.
pub fn parse_profile(text: &str) -> Result<ProfileExpr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax { offset: 0, message: "empty expression".into() });
    }
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, i: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(Error::Syntax { offset: p.offset(), message: "trailing input".into() });
    }
    Ok(e)
}
