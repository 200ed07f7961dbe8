//! The symbol language: a small arithmetic grammar over the vertex
//! attributes `d`, `x`, `y`, evaluated in complex double precision.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' ['-'] integer)?
//! base   := number | 'i' | 'pi' | 'd' | 'x' | 'y' | ident
//!         | func '(' args ')' | 'sum' '(' expr ',' ident ',' expr ',' expr ')'
//!         | '(' expr ')' | 'if' expr cmp expr 'then' expr 'else' expr
//! cmp    := '==' | '<' | '<=' | '>' | '>='
//! ```

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest number of terms a single `sum(...)` may expand to.
pub const MAX_SUM_TERMS: i64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attr {
    D,
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Min,
    Max,
    Floor,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "floor" => Func::Floor,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
            Func::Floor => "floor",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Imag,
    Pi,
    Attr(Attr),
    /// A variable bound by an enclosing `sum`.
    Bound(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Vec<Expr>),
    Sum {
        body: Box<Expr>,
        var: String,
        lo: Box<Expr>,
        hi: Box<Expr>,
    },
    If {
        lhs: Box<Expr>,
        cmp: Cmp,
        rhs: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = lex(src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            scope: Vec::new(),
        };
        let e = p.expr()?;
        p.expect_end()?;
        Ok(e)
    }

    /// True when the expression reads the given vertex attribute.
    pub fn uses(&self, attr: Attr) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= *e == Expr::Attr(attr));
        found
    }

    pub fn is_constant(&self) -> bool {
        !self.uses(Attr::D) && !self.uses(Attr::X) && !self.uses(Attr::Y)
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Neg(a) | Expr::Pow(a, _) => a.visit(f),
            Expr::Bin(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.visit(f)),
            Expr::Sum { body, lo, hi, .. } => {
                body.visit(f);
                lo.visit(f);
                hi.visit(f);
            }
            Expr::If {
                lhs,
                rhs,
                then,
                otherwise,
                ..
            } => {
                lhs.visit(f);
                rhs.visit(f);
                then.visit(f);
                otherwise.visit(f);
            }
            _ => {}
        }
    }

    pub fn eval(&self, env: &Env) -> std::result::Result<Complex64, String> {
        let mut bound = Vec::new();
        eval(self, env, &mut bound)
    }

    /// Evaluates a purely radial expression at `d = n`.
    pub fn eval_radial(&self, n: f64) -> std::result::Result<Complex64, String> {
        self.eval(&Env {
            d: n,
            x: None,
            y: None,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::If { .. } => 0,
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write(&self, out: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            out.write_str("(")?;
        }
        match self {
            Expr::Num(x) => write!(out, "{x}")?,
            Expr::Imag => out.write_str("i")?,
            Expr::Pi => out.write_str("pi")?,
            Expr::Attr(Attr::D) => out.write_str("d")?,
            Expr::Attr(Attr::X) => out.write_str("x")?,
            Expr::Attr(Attr::Y) => out.write_str("y")?,
            Expr::Bound(name) => out.write_str(name)?,
            Expr::Neg(a) => {
                out.write_str("-")?;
                a.write(out, 3)?;
            }
            Expr::Bin(op, a, b) => {
                let (sym, p) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                a.write(out, p)?;
                out.write_str(sym)?;
                b.write(out, p + 1)?;
            }
            Expr::Pow(a, k) => {
                a.write(out, 5)?;
                write!(out, "^{k}")?;
            }
            Expr::Call(func, args) => {
                write!(out, "{}(", func.name())?;
                for (n, a) in args.iter().enumerate() {
                    if n > 0 {
                        out.write_str(", ")?;
                    }
                    a.write(out, 0)?;
                }
                out.write_str(")")?;
            }
            Expr::Sum { body, var, lo, hi } => {
                out.write_str("sum(")?;
                body.write(out, 0)?;
                write!(out, ", {var}, ")?;
                lo.write(out, 0)?;
                out.write_str(", ")?;
                hi.write(out, 0)?;
                out.write_str(")")?;
            }
            Expr::If {
                lhs,
                cmp,
                rhs,
                then,
                otherwise,
            } => {
                let c = match cmp {
                    Cmp::Eq => "==",
                    Cmp::Lt => "<",
                    Cmp::Le => "<=",
                    Cmp::Gt => ">",
                    Cmp::Ge => ">=",
                };
                out.write_str("if ")?;
                lhs.write(out, 1)?;
                write!(out, " {c} ")?;
                rhs.write(out, 1)?;
                out.write_str(" then ")?;
                then.write(out, 0)?;
                out.write_str(" else ")?;
                otherwise.write(out, 0)?;
            }
        }
        if paren {
            out.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Vertex attributes visible to an expression.
#[derive(Debug, Clone, Copy)]
pub struct Env {
    pub d: f64,
    pub x: Option<f64>,
    pub y: Option<f64>,
}

fn real(z: Complex64, what: &str) -> std::result::Result<f64, String> {
    if z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) {
        Ok(z.re)
    } else {
        Err(format!("{what} needs a real argument, got {z}"))
    }
}

fn eval(
    e: &Expr,
    env: &Env,
    bound: &mut Vec<(String, f64)>,
) -> std::result::Result<Complex64, String> {
    let z = match e {
        Expr::Num(x) => Complex64::new(*x, 0.0),
        Expr::Imag => Complex64::i(),
        Expr::Pi => Complex64::new(std::f64::consts::PI, 0.0),
        Expr::Attr(Attr::D) => Complex64::new(env.d, 0.0),
        Expr::Attr(Attr::X) => Complex64::new(env.x.ok_or("coordinate x is not available on this graph")?, 0.0),
        Expr::Attr(Attr::Y) => Complex64::new(env.y.ok_or("coordinate y is not available on this graph")?, 0.0),
        Expr::Bound(name) => {
            let v = bound
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| format!("unbound variable {name}"))?;
            Complex64::new(v, 0.0)
        }
        Expr::Neg(a) => -eval(a, env, bound)?,
        Expr::Bin(op, a, b) => {
            let (a, b) = (eval(a, env, bound)?, eval(b, env, bound)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == Complex64::new(0.0, 0.0) {
                        return Err("division by zero".into());
                    }
                    a / b
                }
            }
        }
        Expr::Pow(a, k) => {
            let a = eval(a, env, bound)?;
            if *k < 0 && a == Complex64::new(0.0, 0.0) {
                return Err("division by zero".into());
            }
            a.powi(*k)
        }
        Expr::Call(func, args) => {
            let vals = args
                .iter()
                .map(|a| eval(a, env, bound))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let a = vals[0];
            match func {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Exp => a.exp(),
                Func::Log => {
                    if a == Complex64::new(0.0, 0.0) {
                        return Err("log of zero".into());
                    }
                    a.ln()
                }
                Func::Sqrt => a.sqrt(),
                Func::Abs => Complex64::new(a.norm(), 0.0),
                Func::Floor => Complex64::new(real(a, "floor")?.floor(), 0.0),
                Func::Min => Complex64::new(real(a, "min")?.min(real(vals[1], "min")?), 0.0),
                Func::Max => Complex64::new(real(a, "max")?.max(real(vals[1], "max")?), 0.0),
            }
        }
        Expr::Sum { body, var, lo, hi } => {
            let bound_of = |z: Complex64| -> std::result::Result<i64, String> {
                let r = real(z, "sum bound")?;
                if r.fract() != 0.0 || !r.is_finite() {
                    return Err(format!("sum bound {r} is not an integer"));
                }
                Ok(r as i64)
            };
            let lo = bound_of(eval(lo, env, bound)?)?;
            let hi = bound_of(eval(hi, env, bound)?)?;
            if hi.saturating_sub(lo) > MAX_SUM_TERMS {
                return Err(format!("sum over {lo}..={hi} has too many terms"));
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for k in lo..=hi {
                bound.push((var.clone(), k as f64));
                let term = eval(body, env, bound);
                bound.pop();
                acc += term?;
            }
            acc
        }
        Expr::If {
            lhs,
            cmp,
            rhs,
            then,
            otherwise,
        } => {
            let l = real(eval(lhs, env, bound)?, "comparison")?;
            let r = real(eval(rhs, env, bound)?, "comparison")?;
            let holds = match cmp {
                Cmp::Eq => l == r,
                Cmp::Lt => l < r,
                Cmp::Le => l <= r,
                Cmp::Gt => l > r,
                Cmp::Ge => l >= r,
            };
            if holds {
                eval(then, env, bound)?
            } else {
                eval(otherwise, env, bound)?
            }
        }
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("non-finite value {z}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(&'static str),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 14] = [
    "==", "<=", ">=", "<", ">", "+", "-", "*", "/", "^", "(", ")", ",", "=",
];

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                j += 1;
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            let text: String = chars[i..j].iter().collect();
            let value = text.parse::<f64>().map_err(|_| Error::Syntax {
                line,
                column: col,
                expected: vec!["number".into()],
                found: format!("`{text}`"),
            })?;
            out.push(Spanned {
                tok: Tok::Num(value),
                line: start.0,
                col: start.1,
            });
            col += j - i;
            i = j;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[i..j].iter().collect()),
                line: start.0,
                col: start.1,
            });
            col += j - i;
            i = j;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(*s)) {
            Some(&s) if s != "=" => {
                out.push(Spanned {
                    tok: Tok::Sym(s),
                    line,
                    col,
                });
                i += s.len();
                col += s.len();
            }
            _ => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    expected: vec!["expression".into()],
                    found: format!("`{c}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

const KEYWORDS: [&str; 9] = ["if", "then", "else", "sum", "i", "pi", "d", "x", "y"];

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let t = &self.tokens[self.pos];
        Error::Syntax {
            line: t.line,
            column: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(t) if *t == s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &'static str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{s}`")]))
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, k: &str) -> Result<()> {
        if self.eat_keyword(k) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{k}`")]))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(&["operator", "end of input"]))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                BinOp::Add
            } else if self.eat_sym("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                BinOp::Mul
            } else if self.eat_sym("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym("-") {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if !self.eat_sym("^") {
            return Ok(base);
        }
        let negative = self.eat_sym("-");
        match self.peek().clone() {
            Tok::Num(k) if k.fract() == 0.0 && k <= i32::MAX as f64 => {
                self.bump();
                let k = k as i32;
                Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
            }
            _ => Err(self.error(&["integer exponent"])),
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let t = self.tokens[self.pos].clone();
        match t.tok {
            Tok::Num(x) => {
                self.bump();
                Ok(Expr::Num(x))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if self.scope.contains(&name) {
                    self.bump();
                    return Ok(Expr::Bound(name));
                }
                match name.as_str() {
                    "i" => {
                        self.bump();
                        Ok(Expr::Imag)
                    }
                    "pi" => {
                        self.bump();
                        Ok(Expr::Pi)
                    }
                    "d" => {
                        self.bump();
                        Ok(Expr::Attr(Attr::D))
                    }
                    "x" => {
                        self.bump();
                        Ok(Expr::Attr(Attr::X))
                    }
                    "y" => {
                        self.bump();
                        Ok(Expr::Attr(Attr::Y))
                    }
                    "if" => {
                        self.bump();
                        self.conditional()
                    }
                    "sum" => {
                        self.bump();
                        self.sum()
                    }
                    _ => match Func::from_name(&name) {
                        Some(func) => {
                            self.bump();
                            self.call(func)
                        }
                        None => Err(Error::UnknownIdentifier {
                            name,
                            line: t.line,
                            column: t.col,
                        }),
                    },
                }
            }
            _ => Err(self.error(&["number", "identifier", "`(`", "`-`"])),
        }
    }

    fn call(&mut self, func: Func) -> Result<Expr> {
        self.expect_sym("(")?;
        let mut args = vec![self.expr()?];
        while args.len() < func.arity() {
            self.expect_sym(",")?;
            args.push(self.expr()?);
        }
        self.expect_sym(")")?;
        Ok(Expr::Call(func, args))
    }

    fn sum(&mut self) -> Result<Expr> {
        self.expect_sym("(")?;
        // The bound variable appears after the body, so look ahead for it.
        let var = self.sum_variable()?;
        self.scope.push(var.clone());
        let body = self.expr();
        self.scope.pop();
        let body = body?;
        self.expect_sym(",")?;
        self.bump();
        self.expect_sym(",")?;
        let lo = self.expr()?;
        self.expect_sym(",")?;
        let hi = self.expr()?;
        self.expect_sym(")")?;
        Ok(Expr::Sum {
            body: Box::new(body),
            var,
            lo: Box::new(lo),
            hi: Box::new(hi),
        })
    }

    /// Finds the identifier following the first top-level comma of a
    /// `sum(...)` argument list without consuming input.
    fn sum_variable(&self) -> Result<String> {
        let mut depth = 0usize;
        let mut j = self.pos;
        loop {
            match &self.tokens[j].tok {
                Tok::Sym("(") => depth += 1,
                Tok::Sym(")") if depth == 0 => break,
                Tok::Sym(")") => depth -= 1,
                Tok::Sym(",") if depth == 0 => {
                    let next = &self.tokens[j + 1];
                    return match &next.tok {
                        Tok::Ident(name)
                            if !KEYWORDS.contains(&name.as_str()) && Func::from_name(name).is_none() =>
                        {
                            Ok(name.clone())
                        }
                        other => Err(Error::Syntax {
                            line: next.line,
                            column: next.col,
                            expected: vec!["summation variable".into()],
                            found: other.describe(),
                        }),
                    };
                }
                Tok::End => break,
                _ => {}
            }
            j += 1;
        }
        let t = &self.tokens[j];
        Err(Error::Syntax {
            line: t.line,
            column: t.col,
            expected: vec!["`,`".into()],
            found: t.tok.describe(),
        })
    }

    fn conditional(&mut self) -> Result<Expr> {
        let lhs = self.expr()?;
        let cmp = match self.peek() {
            Tok::Sym("==") => Cmp::Eq,
            Tok::Sym("<") => Cmp::Lt,
            Tok::Sym("<=") => Cmp::Le,
            Tok::Sym(">") => Cmp::Gt,
            Tok::Sym(">=") => Cmp::Ge,
            _ => return Err(self.error(&["`==`", "`<`", "`<=`", "`>`", "`>=`"])),
        };
        self.bump();
        let rhs = self.expr()?;
        self.expect_keyword("then")?;
        let then = self.expr()?;
        self.expect_keyword("else")?;
        let otherwise = self.expr()?;
        Ok(Expr::If {
            lhs: Box::new(lhs),
            cmp,
            rhs: Box::new(rhs),
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(src: &str, d: f64) -> Complex64 {
        Expr::parse(src).unwrap().eval_radial(d).unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(at("1/(d+1)", 3.0).re, 0.25);
        assert_eq!(at("2^-2", 0.0).re, 0.25);
        assert_eq!(at("-d^2", 3.0).re, -9.0);
        assert_eq!(at("2*i*i", 0.0), Complex64::new(-2.0, 0.0));
        assert_eq!(at("min(d, 4) + max(1, 2) + floor(2.7)", 9.0).re, 8.0);
    }

    #[test]
    fn sums_and_conditionals() {
        let h = at("sum(1/k, k, 1, d)", 3.0).re;
        assert!((h - 11.0 / 6.0).abs() < 1e-15);
        assert_eq!(at("sum(k, k, 1, 0)", 0.0).re, 0.0);
        assert_eq!(at("if d==0 then 1 else sin(d)/d", 0.0).re, 1.0);
        assert_eq!(at("if d==0 then 1 else sin(d)/d", 2.0).re, 2f64.sin() / 2.0);
        // Nested sums shadow correctly.
        assert_eq!(at("sum(sum(1, j, 1, k), k, 1, d)", 4.0).re, 10.0);
    }

    #[test]
    fn errors() {
        let e = Expr::parse("1/d").unwrap().eval_radial(0.0).unwrap_err();
        assert!(e.contains("division by zero"));
        assert!(matches!(
            Expr::parse("foo(d)"),
            Err(Error::UnknownIdentifier { column: 1, .. })
        ));
        match Expr::parse("1 +\n  * 2") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Expr::parse("d^1.5"), Err(Error::Syntax { .. })));
        assert!(matches!(Expr::parse("if d then 1 else 2"), Err(Error::Syntax { .. })));
        assert!(matches!(Expr::parse("sum(k, d, 1, 2)"), Err(Error::Syntax { .. })));
        assert!(matches!(Expr::parse("k + 1"), Err(Error::UnknownIdentifier { .. })));
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "1/(d+1)",
            "if d==0 then 1 else sin(d)/d",
            "sum(1/k^2, k, 1, d+1)",
            "-(d-1)^-3 * -x",
            "(if d < 2 then 1 else 2) + 3",
            "a",
        ] {
            let Ok(ast) = Expr::parse(src) else { continue };
            let printed = ast.to_string();
            assert_eq!(Expr::parse(&printed).unwrap(), ast, "{src} -> {printed}");
        }
    }

    #[test]
    fn attributes() {
        let e = Expr::parse("x + 2*y").unwrap();
        assert!(e.uses(Attr::X) && !e.uses(Attr::D));
        let env = Env {
            d: 0.0,
            x: Some(1.0),
            y: None,
        };
        assert!(e.eval(&env).is_err());
        assert!(Expr::parse("exp(i*pi)").unwrap().is_constant());
    }
}
