//! User functions written as small arithmetic expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | atom
//! atom   := number | const | coord | call | '(' expr ')'
//! call   := ('abs' | 'sqrt' | 'sin' | 'cos' | 'exp') '(' expr ')'
//!         | ('max' | 'min') '(' expr (',' expr)+ ')'
//! const  := 'pi' | 'e'
//! coord  := 'x' digits        (x1 is the first coordinate)
//! ```
//!
//! Results that are NaN or `+inf` read as outside the domain.

use std::fmt;
use std::sync::Arc;

use subsmooth_core::{shared, FnMeta, SharedFn};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cannot parse `{src}` at column {col}: {msg}")]
pub struct ParseError {
    pub src: String,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Coord(usize),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Func {
    Abs,
    Sqrt,
    Sin,
    Cos,
    Exp,
    Max,
    Min,
}

impl Func {
    fn named(s: &str) -> Option<Func> {
        Some(match s {
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "max" => Func::Max,
            "min" => Func::Min,
            _ => return None,
        })
    }

    fn variadic(self) -> bool {
        matches!(self, Func::Max | Func::Min)
    }
}

impl Expr {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Coord(i) => x[*i],
            Expr::Neg(a) => -a.eval(x),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x), b.eval(x));
                match op {
                    Op::Add => a + b,
                    Op::Sub => a - b,
                    Op::Mul => a * b,
                    Op::Div => a / b,
                }
            }
            Expr::Call(f, args) => {
                let mut vals = args.iter().map(|a| a.eval(x));
                match f {
                    Func::Abs => vals.next().unwrap().abs(),
                    Func::Sqrt => vals.next().unwrap().sqrt(),
                    Func::Sin => vals.next().unwrap().sin(),
                    Func::Cos => vals.next().unwrap().cos(),
                    Func::Exp => vals.next().unwrap().exp(),
                    // NaN must propagate, so no f64::max here
                    Func::Max => vals.reduce(|a, b| if a.is_nan() || a >= b { a } else { b }).unwrap(),
                    Func::Min => vals.reduce(|a, b| if a.is_nan() || a <= b { a } else { b }).unwrap(),
                }
            }
        }
    }

    /// Number of coordinates referenced, i.e. the largest `k` in `xk`.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Coord(i) => i + 1,
            Expr::Neg(a) => a.arity(),
            Expr::Bin(_, a, b) => a.arity().max(b.arity()),
            Expr::Call(_, args) => args.iter().map(Expr::arity).max().unwrap_or(0),
        }
    }

    /// The expression as a function of `dim` coordinates.
    pub fn into_fn(self, dim: usize) -> SharedFn {
        let e = Arc::new(self);
        shared(dim, FnMeta::default(), move |x| e.eval(x))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Coord(i) => write!(f, "x{}", i + 1),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    Op::Add => "+",
                    Op::Sub => "-",
                    Op::Mul => "*",
                    Op::Div => "/",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Call(func, args) => {
                let name = format!("{func:?}").to_lowercase();
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{name}({})", args.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let err = |col: usize, msg: String| ParseError {
        src: src.to_string(),
        col: col + 1,
        msg,
    };
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
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
            let text = &src[start..i];
            let v = text.parse().map_err(|_| err(start, format!("bad number `{text}`")))?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(err(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let col = self.toks.get(self.pos).map_or(self.src.len(), |t| t.0) + 1;
        Err(ParseError {
            src: self.src.to_string(),
            col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                Op::Add
            } else if self.eat('-') {
                Op::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                Op::Mul
            } else if self.eat('/') {
                Op::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if let Some(func) = Func::named(&name) {
                    self.pos += 1;
                    self.expect('(')?;
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    let ok = if func.variadic() { args.len() >= 2 } else { args.len() == 1 };
                    if !ok {
                        self.pos -= 1;
                        return self.err(format!("wrong number of arguments for `{name}`"));
                    }
                    return Ok(Expr::Call(func, args));
                }
                let v = match name.as_str() {
                    "pi" => Expr::Num(std::f64::consts::PI),
                    "e" => Expr::Num(std::f64::consts::E),
                    _ => match name.strip_prefix('x').map(str::parse::<usize>) {
                        Some(Ok(k)) if k >= 1 => Expr::Coord(k - 1),
                        _ => return self.err(format!("unknown name `{name}`")),
                    },
                };
                self.pos += 1;
                Ok(v)
            }
            Some(_) => self.err("expected a number, name or `(`"),
            None => self.err("unexpected end of expression"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src,
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
