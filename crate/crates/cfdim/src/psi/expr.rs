//! A small arithmetic language over the variable `n`, parsed by recursive
//! descent.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'n' | func '(' expr ')' | '(' expr ')'
//! func  := log | exp | sqrt | floor
//! ```

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Log,
    Exp,
    Sqrt,
    Floor,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Floor => "floor",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "log" | "ln" => Func::Log,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "floor" => Func::Floor,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Fully parenthesised form; parsing it gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Var => write!(f, "n"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

impl Expr {
    /// Evaluates at integer `n`. Any non-finite intermediate or argument
    /// outside a function's domain is an error.
    pub fn eval(&self, n: u64) -> Result<f64> {
        let domain = |reason: String| Error::Domain { n, reason };
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Var => n as f64,
            Expr::Neg(e) => -e.eval(n)?,
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval(n)?, r.eval(n)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(domain(format!("division by zero in {self}")));
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        if a < 0.0 && b.fract() != 0.0 {
                            return Err(domain(format!("negative base to fractional power in {self}")));
                        }
                        a.powf(b)
                    }
                }
            }
            Expr::Call(func, e) => {
                let x = e.eval(n)?;
                match func {
                    Func::Log if x <= 0.0 => return Err(domain(format!("log of {x} in {self}"))),
                    Func::Log => x.ln(),
                    Func::Exp => x.exp(),
                    Func::Sqrt if x < 0.0 => return Err(domain(format!("sqrt of {x} in {self}"))),
                    Func::Sqrt => x.sqrt(),
                    Func::Floor => x.floor(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain(format!("non-finite value in {self}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(x) => write!(f, "number {x}"),
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::Op(c) => write!(f, "'{c}'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn parse_err(position: usize, expected: &str, found: impl fmt::Display) -> Error {
    Error::Parse {
        position,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' | '.' => {
                while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                    i += 1;
                }
                // exponent part, only when followed by digits
                if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].1.is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].1.is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let end = chars.get(i).map_or(src.len(), |&(p, _)| p);
                let text = &src[pos..end];
                let value: f64 = text
                    .parse()
                    .map_err(|_| parse_err(pos, "a number", format!("{text:?}")))?;
                if !(value.is_finite() && value > 0.0) {
                    return Err(parse_err(pos, "a positive literal", text));
                }
                out.push((pos, Tok::Num(value)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = i;
                while end < chars.len() && (chars[end].1.is_ascii_alphanumeric() || chars[end].1 == '_') {
                    end += 1;
                }
                let stop = chars.get(end).map_or(src.len(), |&(p, _)| p);
                out.push((pos, Tok::Ident(src[pos..stop].to_string())));
                i = end;
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push((pos, Tok::Op(c)));
                i += 1;
            }
            '×' => {
                out.push((pos, Tok::Op('*')));
                i += 1;
            }
            '÷' => {
                out.push((pos, Tok::Op('/')));
                i += 1;
            }
            '−' => {
                out.push((pos, Tok::Op('-')));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            other => return Err(parse_err(pos, "an operator, number, identifier or parenthesis", format!("{other:?}"))),
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(parse_err(self.pos(), what, self.peek()))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(x) => Ok(Expr::Num(x)),
            Tok::Ident(name) if name == "n" => Ok(Expr::Var),
            Tok::Ident(name) => {
                let func = Func::from_name(&name).ok_or_else(|| {
                    parse_err(pos, "n or a function (log, exp, sqrt, floor)", format!("unknown identifier {name:?}"))
                })?;
                self.expect(Tok::LParen, "'(' after function name")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            other => Err(parse_err(pos, "a number, n, a function call or '('", other)),
        }
    }
}

/// Parses an expression in `n`.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(parse_err(p.pos(), "an operator or end of input", p.peek()));
    }
    Ok(e)
}
