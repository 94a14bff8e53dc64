//! A small arithmetic expression language for describing objectives and
//! constraints in problem config files.
//!
//! Grammar (usual precedence, `^` binds tightest and associates right):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | primary ('^' factor)?
//! primary := NUMBER | 'n' | NAME | NAME '(' expr {',' expr} ')'
//!          | 'x' '[' expr ']' | 'x' DIGITS | '(' expr ')'
//! ```
//!
//! Functions: `sin`, `cos`, `exp`, `log`, `abs`, `sqrt`, and the loop form
//! `sum(i, lo, hi, body)` which sums `body` for the loop variable `i`
//! running over the integers `lo..=hi`. Variables are `x[k]` (1-based, `k`
//! may be an expression over loop variables and `n`) or the sugar `x1`,
//! `x2`, ... Loop variables are plain names and may be used as values.

use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    /// The problem dimension.
    Dim,
    /// A loop variable (or any free name bound by the environment).
    Var(String),
    /// `x[index]`, 1-based.
    Coord(Box<Expr>),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    /// `sum(var, lo, hi, body)` over integer values of `var`.
    Sum {
        var: String,
        lo: Box<Expr>,
        hi: Box<Expr>,
        body: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub message: String,
    pub position: usize,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at offset {})", self.message, self.position)
    }
}

impl std::error::Error for ExprError {}

impl Expr {
    pub fn parse(input: &str) -> Result<Expr, ExprError> {
        let mut parser = Parser::new(input);
        let expr = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.chars.len() {
            return Err(parser.err("unexpected trailing input"));
        }
        Ok(expr)
    }

    /// Evaluates against a point; `env` binds loop variables. NaN and
    /// infinities propagate, matching the barrier semantics of evaluation.
    pub fn eval(&self, x: &[f64], env: &mut HashMap<String, f64>) -> Result<f64, String> {
        match self {
            Expr::Number(v) => Ok(*v),
            Expr::Dim => Ok(x.len() as f64),
            Expr::Var(name) => env
                .get(name)
                .copied()
                .ok_or_else(|| format!("unbound variable '{name}'")),
            Expr::Coord(idx) => {
                let raw = idx.eval(x, env)?;
                let k = raw.round();
                if (raw - k).abs() > 1e-9 {
                    return Err(format!("index expression is not an integer: {raw}"));
                }
                let k = k as i64;
                if k < 1 || k as usize > x.len() {
                    return Err(format!("index {k} out of range 1..={}", x.len()));
                }
                Ok(x[(k - 1) as usize])
            }
            Expr::Unary(op, inner) => {
                let v = inner.eval(x, env)?;
                Ok(match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Sin => v.sin(),
                    UnaryOp::Cos => v.cos(),
                    UnaryOp::Exp => v.exp(),
                    UnaryOp::Log => v.ln(),
                    UnaryOp::Abs => v.abs(),
                    UnaryOp::Sqrt => v.sqrt(),
                })
            }
            Expr::Binary(op, a, b) => {
                let a = a.eval(x, env)?;
                let b = b.eval(x, env)?;
                Ok(match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => a / b,
                    BinaryOp::Pow => a.powf(b),
                })
            }
            Expr::Sum { var, lo, hi, body } => {
                let lo = int_bound(lo.eval(x, env)?, "sum lower bound")?;
                let hi = int_bound(hi.eval(x, env)?, "sum upper bound")?;
                let shadowed = env.get(var).copied();
                let mut total = 0.0;
                for i in lo..=hi {
                    env.insert(var.clone(), i as f64);
                    total += body.eval(x, env)?;
                }
                match shadowed {
                    Some(v) => {
                        env.insert(var.clone(), v);
                    }
                    None => {
                        env.remove(var);
                    }
                }
                Ok(total)
            }
        }
    }

    /// Convenience for expressions without free loop variables.
    pub fn eval_at(&self, x: &[f64]) -> Result<f64, String> {
        self.eval(x, &mut HashMap::new())
    }
}

fn int_bound(v: f64, what: &str) -> Result<i64, String> {
    let k = v.round();
    if (v - k).abs() > 1e-9 {
        return Err(format!("{what} is not an integer: {v}"));
    }
    Ok(k as i64)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(input: &str) -> Self {
        Parser {
            chars: input.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, message: &str) -> ExprError {
        ExprError {
            message: message.to_string(),
            position: self.pos,
        }
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

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Binary(BinaryOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some('-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Binary(BinaryOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Binary(BinaryOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some('/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Binary(BinaryOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            let inner = self.factor()?;
            return Ok(Expr::Unary(UnaryOp::Neg, Box::new(inner)));
        }
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let exp = self.factor()?; // right associative
            return Ok(Expr::Binary(BinaryOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.name(),
            Some(c) => Err(self.err(&format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && matches!(self.chars[self.pos], '0'..='9' | '.') {
            self.pos += 1;
        }
        // exponent suffix: e / e+ / e- followed by digits
        if self.pos < self.chars.len() && matches!(self.chars[self.pos], 'e' | 'E') {
            let mut probe = self.pos + 1;
            if probe < self.chars.len() && matches!(self.chars[probe], '+' | '-') {
                probe += 1;
            }
            if probe < self.chars.len() && self.chars[probe].is_ascii_digit() {
                self.pos = probe;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>()
            .map(Expr::Number)
            .map_err(|_| self.err(&format!("invalid number '{text}'")))
    }

    fn name(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();

        // x[expr] and the x<digits> sugar
        if name == "x" {
            self.expect('[')?;
            let idx = self.expr()?;
            self.expect(']')?;
            return Ok(Expr::Coord(Box::new(idx)));
        }
        if let Some(rest) = name.strip_prefix('x') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let k: f64 = rest.parse().unwrap();
                return Ok(Expr::Coord(Box::new(Expr::Number(k))));
            }
        }
        if name == "n" {
            return Ok(Expr::Dim);
        }
        if name == "pi" {
            return Ok(Expr::Number(std::f64::consts::PI));
        }

        if self.peek() == Some('(') {
            self.bump();
            if name == "sum" {
                let var = self.loop_var()?;
                self.expect(',')?;
                let lo = self.expr()?;
                self.expect(',')?;
                let hi = self.expr()?;
                self.expect(',')?;
                let body = self.expr()?;
                self.expect(')')?;
                return Ok(Expr::Sum {
                    var,
                    lo: Box::new(lo),
                    hi: Box::new(hi),
                    body: Box::new(body),
                });
            }
            let op = match name.as_str() {
                "sin" => UnaryOp::Sin,
                "cos" => UnaryOp::Cos,
                "exp" => UnaryOp::Exp,
                "log" => UnaryOp::Log,
                "abs" => UnaryOp::Abs,
                "sqrt" => UnaryOp::Sqrt,
                _ => return Err(self.err(&format!("unknown function '{name}'"))),
            };
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(Expr::Unary(op, Box::new(arg)));
        }

        if name.is_empty() {
            return Err(self.err("expected a name"));
        }
        Ok(Expr::Var(name))
    }

    fn loop_var(&mut self) -> Result<String, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        if name.is_empty() || name == "x" || name == "n" {
            return Err(self.err("sum needs a fresh loop-variable name"));
        }
        Ok(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, x: &[f64]) -> f64 {
        Expr::parse(src).unwrap().eval_at(x).unwrap()
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(eval("1 + 2 * 3", &[]), 7.0);
        assert_eq!(eval("(1 + 2) * 3", &[]), 9.0);
        assert_eq!(eval("2 ^ 3 ^ 2", &[]), 512.0); // right assoc
        assert_eq!(eval("-2 ^ 2", &[]), -4.0); // minus applies after the power
        assert_eq!(eval("2 ^ -1", &[]), 0.5);
        assert_eq!(eval("6 / 3 / 2", &[]), 1.0); // left assoc
        assert_eq!(eval("1e-3 + 1.5e2", &[]), 150.001);
    }

    #[test]
    fn coordinates_both_spellings() {
        let x = [10.0, 20.0, 30.0];
        assert_eq!(eval("x[2]", &x), 20.0);
        assert_eq!(eval("x2", &x), 20.0);
        assert_eq!(eval("x[n]", &x), 30.0);
        assert_eq!(eval("x[1+1]", &x), 20.0);
    }

    #[test]
    fn functions() {
        assert!((eval("sin(0) + cos(0)", &[]) - 1.0).abs() < 1e-15);
        assert!((eval("exp(log(5))", &[]) - 5.0).abs() < 1e-12);
        assert_eq!(eval("abs(-3)", &[]), 3.0);
        assert_eq!(eval("sqrt(16)", &[]), 4.0);
    }

    #[test]
    fn sum_loop_family_one() {
        // family-1 constraint as a single summed expression
        let src = "sum(j, 1, n-2, (3 - 2*x[j+1])*x[j+1] - x[j] - 2*x[j+2] + 1)";
        let v = eval(src, &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(v, -2.0); // two terms of -1
    }

    #[test]
    fn sum_restores_shadowed_variable() {
        let src = "sum(i, 1, 2, x[i] + sum(i, 1, 2, x[i]))";
        // inner sum = x1 + x2 = 3 for each outer i; total = (1+3) + (2+3)
        assert_eq!(eval(src, &[1.0, 2.0]), 9.0);
    }

    #[test]
    fn index_errors() {
        let e = Expr::parse("x[0]").unwrap();
        assert!(e.eval_at(&[1.0]).is_err());
        let e = Expr::parse("x[1.5]").unwrap();
        assert!(e.eval_at(&[1.0, 2.0]).is_err());
        assert!(Expr::parse("x[1").is_err());
        assert!(Expr::parse("foo(1)").is_err());
        assert!(Expr::parse("1 +").is_err());
        assert!(Expr::parse("1 2").is_err());
    }

    #[test]
    fn non_finite_propagates() {
        assert!(eval("log(-1)", &[]).is_nan());
        assert!(eval("1/0", &[]).is_infinite());
    }
}
