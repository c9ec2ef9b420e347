//! Formula language: decimal literals, factor names, `+ - * / ^`, unary minus,
//! parentheses and a fixed set of functions.
//!
//! Precedence from loosest to tightest: `+ -`, `* /`, unary `-`, `^`
//! (right-associative). So `-2^2 == -4` and `2^3^2 == 512`.

use std::fmt;

use crate::{Error, Result};

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
    Sin,
    Cos,
    Tan,
    Asin,
    Exp,
    Ln,
    Log10,
    Sqrt,
    Abs,
    Min,
    Max,
    Pow,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "asin" => Func::Asin,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "log10" => Func::Log10,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "pow" => Func::Pow,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Asin => "asin",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Log10 => "log10",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max | Func::Pow => 2,
            _ => 1,
        }
    }
}

/// Parsed formula. Names are resolved to factor indices by [`Expr::bind`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Name(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; reparses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Name(n) => f.write_str(n),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn parse(source: &str) -> Result<Expr> {
    let mut p = Parser { src: source, bytes: source.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.error(format!("unexpected `{}`, expected operator or end of input", p.peek_char())));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or(' ')
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat(b'^') {
            // right-associative; the exponent may carry its own unary minus
            let exp = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input, expected a number, name or `(`")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.name_or_call(),
            Some(_) => Err(self.error(format!(
                "unexpected `{}`, expected a number, name or `(`",
                self.peek_char()
            ))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.bytes.len() && p.bytes[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(self.error("malformed exponent"));
            }
        }
        let text = &self.src[start..self.pos];
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Expr::Num(v)),
            _ => {
                self.pos = start;
                Err(self.error(format!("number `{text}` is not a finite value")))
            }
        }
    }

    fn name_or_call(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        if self.peek() != Some(b'(') {
            return Ok(Expr::Name(name.to_string()));
        }
        let func = Func::lookup(name).ok_or_else(|| Error::UnknownFunction { name: name.into(), offset: start })?;
        self.pos += 1;
        let mut args = Vec::new();
        if !self.eat(b')') {
            loop {
                args.push(self.expr()?);
                if self.eat(b',') {
                    continue;
                }
                if self.eat(b')') {
                    break;
                }
                return Err(self.error("expected `,` or `)` in argument list"));
            }
        }
        if args.len() != func.arity() {
            return Err(Error::Syntax {
                offset: start,
                message: format!("{} expects {} argument(s), got {}", func.name(), func.arity(), args.len()),
            });
        }
        Ok(Expr::Call(func, args))
    }
}

/// Expression with names resolved to positions in the factor row.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundExpr {
    root: Node,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(usize, String),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

/// A math fault raised while evaluating one row.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalFault {
    /// Offending subexpression, printed.
    pub expr: String,
    pub message: String,
}

impl fmt::Display for EvalFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in `{}`", self.message, self.expr)
    }
}

impl Expr {
    /// Resolves every name against `names` (factor order).
    pub fn bind(&self, names: &[String]) -> Result<BoundExpr> {
        fn go(e: &Expr, names: &[String]) -> Result<Node> {
            Ok(match e {
                Expr::Num(v) => Node::Num(*v),
                Expr::Name(n) => {
                    let i = names.iter().position(|x| x == n).ok_or_else(|| Error::UnboundName(n.clone()))?;
                    Node::Var(i, n.clone())
                }
                Expr::Neg(x) => Node::Neg(Box::new(go(x, names)?)),
                Expr::Binary(op, l, r) => Node::Binary(*op, Box::new(go(l, names)?), Box::new(go(r, names)?)),
                Expr::Call(f, args) => Node::Call(*f, args.iter().map(|a| go(a, names)).collect::<Result<_>>()?),
            })
        }
        Ok(BoundExpr { root: go(self, names)? })
    }
}

impl Node {
    fn to_expr(&self) -> Expr {
        match self {
            Node::Num(v) => Expr::Num(*v),
            Node::Var(_, n) => Expr::Name(n.clone()),
            Node::Neg(x) => Expr::Neg(Box::new(x.to_expr())),
            Node::Binary(op, l, r) => Expr::Binary(*op, Box::new(l.to_expr()), Box::new(r.to_expr())),
            Node::Call(f, a) => Expr::Call(*f, a.iter().map(Node::to_expr).collect()),
        }
    }

    fn fault(&self, message: impl Into<String>) -> EvalFault {
        EvalFault { expr: self.to_expr().to_string(), message: message.into() }
    }

    fn eval(&self, row: &[f64]) -> std::result::Result<f64, EvalFault> {
        let v = match self {
            Node::Num(v) => return Ok(*v),
            Node::Var(i, _) => return Ok(row[*i]),
            Node::Neg(x) => -x.eval(row)?,
            Node::Binary(op, l, r) => {
                let a = l.eval(row)?;
                let b = r.eval(row)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(self.fault("division by zero"));
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            Node::Call(f, args) => {
                let a = args[0].eval(row)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => a.tan(),
                    Func::Asin => {
                        if !(-1.0..=1.0).contains(&a) {
                            return Err(self.fault(format!("asin argument {a} outside [-1, 1]")));
                        }
                        a.asin()
                    }
                    Func::Exp => a.exp(),
                    Func::Ln | Func::Log10 => {
                        if a <= 0.0 {
                            return Err(self.fault(format!("logarithm of nonpositive value {a}")));
                        }
                        if *f == Func::Ln {
                            a.ln()
                        } else {
                            a.log10()
                        }
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(self.fault(format!("square root of negative value {a}")));
                        }
                        a.sqrt()
                    }
                    Func::Abs => a.abs(),
                    Func::Min => a.min(args[1].eval(row)?),
                    Func::Max => a.max(args[1].eval(row)?),
                    Func::Pow => a.powf(args[1].eval(row)?),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.fault(format!("non-finite result {v}")))
        }
    }
}

impl BoundExpr {
    pub fn eval(&self, row: &[f64]) -> std::result::Result<f64, EvalFault> {
        self.root.eval(row)
    }

    pub fn expr(&self) -> Expr {
        self.root.to_expr()
    }
}
