//! Profile-expression grammar, parser, and jet evaluator.
//!
//! Expressions are closed-form functions of the single variable `t`.
//! Precedence, tightest first: `^`, unary `-`, `*` `/`, `+` `-`.
//! `^` is right-associative and its exponent must fold to a constant at
//! parse time; the other binary operators are left-associative.

use std::fmt;

use thiserror::Error;

use crate::jet::{Jet3, JetError};

/// Elementary functions admitted in profile expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FnTag {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Atan,
}

impl FnTag {
    fn from_name(name: &str) -> Option<FnTag> {
        Some(match name {
            "sin" => FnTag::Sin,
            "cos" => FnTag::Cos,
            "tan" => FnTag::Tan,
            "exp" => FnTag::Exp,
            "log" => FnTag::Log,
            "sqrt" => FnTag::Sqrt,
            "sinh" => FnTag::Sinh,
            "cosh" => FnTag::Cosh,
            "tanh" => FnTag::Tanh,
            "atan" => FnTag::Atan,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            FnTag::Sin => "sin",
            FnTag::Cos => "cos",
            FnTag::Tan => "tan",
            FnTag::Exp => "exp",
            FnTag::Log => "log",
            FnTag::Sqrt => "sqrt",
            FnTag::Sinh => "sinh",
            FnTag::Cosh => "cosh",
            FnTag::Tanh => "tanh",
            FnTag::Atan => "atan",
        }
    }

    fn apply_jet(self, u: Jet3) -> Result<Jet3, JetError> {
        Ok(match self {
            FnTag::Sin => u.sin(),
            FnTag::Cos => u.cos(),
            FnTag::Tan => u.tan()?,
            FnTag::Exp => u.exp(),
            FnTag::Log => u.log()?,
            FnTag::Sqrt => u.sqrt()?,
            FnTag::Sinh => u.sinh(),
            FnTag::Cosh => u.cosh(),
            FnTag::Tanh => u.tanh(),
            FnTag::Atan => u.atan(),
        })
    }

    fn apply_f64(self, x: f64) -> f64 {
        match self {
            FnTag::Sin => x.sin(),
            FnTag::Cos => x.cos(),
            FnTag::Tan => x.tan(),
            FnTag::Exp => x.exp(),
            FnTag::Log => x.ln(),
            FnTag::Sqrt => x.sqrt(),
            FnTag::Sinh => x.sinh(),
            FnTag::Cosh => x.cosh(),
            FnTag::Tanh => x.tanh(),
            FnTag::Atan => x.atan(),
        }
    }
}

/// Expression tree node. `Pow` keeps its exponent as a folded constant.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var,
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, f64),
    Fn(FnTag, Box<ExprAst>),
}

/// Parsed expression with the byte span it came from. Equality compares
/// structure only, so a serialized-and-reparsed tree equals the original
/// even though spans move.
#[derive(Debug, Clone)]
pub struct ExprAst {
    pub node: Node,
    pub span: (usize, usize),
}

impl PartialEq for ExprAst {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: &'static str },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent at byte {offset} does not fold to a constant")]
    NonConstantExponent { offset: usize },
}

/// Evaluation failure: the jet-level domain error plus the byte span of the
/// expression node where it happened.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{inner} (expression bytes {start}..{end})")]
pub struct EvalError {
    #[source]
    pub inner: JetError,
    pub start: usize,
    pub end: usize,
}

impl ExprAst {
    fn new(node: Node, span: (usize, usize)) -> Self {
        ExprAst { node, span }
    }

    /// Order-3 jet of the expression at t, by structural recursion.
    pub fn eval_jet(&self, t: f64) -> Result<Jet3, EvalError> {
        self.eval(Jet3::variable(t))
    }

    fn eval(&self, tj: Jet3) -> Result<Jet3, EvalError> {
        let fail = |inner: JetError| EvalError { inner, start: self.span.0, end: self.span.1 };
        match &self.node {
            Node::Const(c) => Ok(Jet3::constant(*c)),
            Node::Var => Ok(tj),
            Node::Neg(u) => Ok(-u.eval(tj)?),
            Node::Add(u, v) => Ok(u.eval(tj)? + v.eval(tj)?),
            Node::Sub(u, v) => Ok(u.eval(tj)? - v.eval(tj)?),
            Node::Mul(u, v) => Ok(u.eval(tj)? * v.eval(tj)?),
            Node::Div(u, v) => u.eval(tj)?.div(v.eval(tj)?).map_err(fail),
            Node::Pow(u, p) => u.eval(tj)?.powf(*p).map_err(fail),
            Node::Fn(tag, u) => tag.apply_jet(u.eval(tj)?).map_err(fail),
        }
    }

    /// Constant value of a variable-free subtree, if it is one.
    fn fold_const(&self) -> Option<f64> {
        match &self.node {
            Node::Const(c) => Some(*c),
            Node::Var => None,
            Node::Neg(u) => u.fold_const().map(|x| -x),
            Node::Add(u, v) => Some(u.fold_const()? + v.fold_const()?),
            Node::Sub(u, v) => Some(u.fold_const()? - v.fold_const()?),
            Node::Mul(u, v) => Some(u.fold_const()? * v.fold_const()?),
            Node::Div(u, v) => Some(u.fold_const()? / v.fold_const()?),
            Node::Pow(u, p) => Some(u.fold_const()?.powf(*p)),
            Node::Fn(tag, u) => Some(tag.apply_f64(u.fold_const()?)),
        }
    }

    fn prec(&self) -> u8 {
        match &self.node {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(..) => 3,
            Node::Pow(..) => 4,
            Node::Const(..) | Node::Var | Node::Fn(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let me = self.prec();
        if me < min {
            write!(f, "(")?;
        }
        match &self.node {
            Node::Const(c) => write!(f, "{c}")?,
            Node::Var => write!(f, "t")?,
            Node::Neg(u) => {
                write!(f, "-")?;
                u.fmt_prec(f, 3)?;
            }
            Node::Add(u, v) => {
                u.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                v.fmt_prec(f, 2)?;
            }
            Node::Sub(u, v) => {
                u.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                v.fmt_prec(f, 2)?;
            }
            Node::Mul(u, v) => {
                u.fmt_prec(f, 2)?;
                write!(f, "*")?;
                v.fmt_prec(f, 3)?;
            }
            Node::Div(u, v) => {
                u.fmt_prec(f, 2)?;
                write!(f, "/")?;
                v.fmt_prec(f, 3)?;
            }
            Node::Pow(u, p) => {
                u.fmt_prec(f, 5)?;
                if *p < 0.0 {
                    write!(f, "^({p})")?;
                } else {
                    write!(f, "^{p}")?;
                }
            }
            Node::Fn(tag, u) => {
                write!(f, "{}(", tag.name())?;
                u.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        if me < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok<'a> {
    Num(f64),
    Ident(&'a str),
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
    tok: Tok<'a>,
    tok_start: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lx = Lexer { src, pos: 0, tok: Tok::End, tok_start: 0 };
        lx.advance()?;
        Ok(lx)
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let b = self.src.as_bytes();
        while self.pos < b.len() && (b[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        if self.pos >= b.len() {
            self.tok = Tok::End;
            return Ok(());
        }
        let c = b[self.pos] as char;
        self.tok = match c {
            '+' => {
                self.pos += 1;
                Tok::Plus
            }
            '-' => {
                self.pos += 1;
                Tok::Minus
            }
            '*' => {
                self.pos += 1;
                Tok::Star
            }
            '/' => {
                self.pos += 1;
                Tok::Slash
            }
            '^' => {
                self.pos += 1;
                Tok::Caret
            }
            '(' => {
                self.pos += 1;
                Tok::LParen
            }
            ')' => {
                self.pos += 1;
                Tok::RParen
            }
            '0'..='9' | '.' => {
                let start = self.pos;
                while self.pos < b.len() && (b[self.pos] as char).is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos < b.len() && b[self.pos] == b'.' {
                    self.pos += 1;
                    while self.pos < b.len() && (b[self.pos] as char).is_ascii_digit() {
                        self.pos += 1;
                    }
                }
                if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
                    let mark = self.pos;
                    self.pos += 1;
                    if self.pos < b.len() && (b[self.pos] == b'+' || b[self.pos] == b'-') {
                        self.pos += 1;
                    }
                    if self.pos < b.len() && (b[self.pos] as char).is_ascii_digit() {
                        while self.pos < b.len() && (b[self.pos] as char).is_ascii_digit() {
                            self.pos += 1;
                        }
                    } else {
                        // Not an exponent suffix after all; leave `e` for the
                        // identifier lexer (it will be rejected there).
                        self.pos = mark;
                    }
                }
                let text = &self.src[start..self.pos];
                let val: f64 = text
                    .parse()
                    .map_err(|_| ParseError::Syntax { offset: start, expected: "a number" })?;
                Tok::Num(val)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < b.len()
                    && ((b[self.pos] as char).is_ascii_alphanumeric() || b[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Tok::Ident(&self.src[start..self.pos])
            }
            _ => {
                return Err(ParseError::Syntax {
                    offset: self.pos,
                    expected: "a number, `t`, a function name, or an operator",
                })
            }
        };
        Ok(())
    }
}

struct Parser<'a> {
    lx: Lexer<'a>,
}

impl<'a> Parser<'a> {
    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = self.lx.tok;
            if op != Tok::Plus && op != Tok::Minus {
                return Ok(lhs);
            }
            self.lx.advance()?;
            let rhs = self.term()?;
            let span = (lhs.span.0, rhs.span.1);
            let node = if op == Tok::Plus {
                Node::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = ExprAst::new(node, span);
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = self.lx.tok;
            if op != Tok::Star && op != Tok::Slash {
                return Ok(lhs);
            }
            self.lx.advance()?;
            let rhs = self.factor()?;
            let span = (lhs.span.0, rhs.span.1);
            let node = if op == Tok::Star {
                Node::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Div(Box::new(lhs), Box::new(rhs))
            };
            lhs = ExprAst::new(node, span);
        }
    }

    // factor := '-' factor | power
    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        if self.lx.tok == Tok::Minus {
            let start = self.lx.tok_start;
            self.lx.advance()?;
            let inner = self.factor()?;
            let span = (start, inner.span.1);
            return Ok(ExprAst::new(Node::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    // power := atom ('^' factor)?   with the exponent folded to a constant
    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if self.lx.tok != Tok::Caret {
            return Ok(base);
        }
        self.lx.advance()?;
        let exp_start = self.lx.tok_start;
        let exponent = self.factor()?;
        let p = exponent
            .fold_const()
            .ok_or(ParseError::NonConstantExponent { offset: exp_start })?;
        let span = (base.span.0, exponent.span.1);
        Ok(ExprAst::new(Node::Pow(Box::new(base), p), span))
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let start = self.lx.tok_start;
        match self.lx.tok {
            Tok::Num(v) => {
                let end = self.lx.pos;
                self.lx.advance()?;
                Ok(ExprAst::new(Node::Const(v), (start, end)))
            }
            Tok::Ident("t") => {
                let end = self.lx.pos;
                self.lx.advance()?;
                Ok(ExprAst::new(Node::Var, (start, end)))
            }
            Tok::Ident(name) => match FnTag::from_name(name) {
                Some(tag) => {
                    self.lx.advance()?;
                    if self.lx.tok != Tok::LParen {
                        return Err(ParseError::Syntax {
                            offset: self.lx.tok_start,
                            expected: "`(` after a function name",
                        });
                    }
                    self.lx.advance()?;
                    let arg = self.expr()?;
                    if self.lx.tok != Tok::RParen {
                        return Err(ParseError::Syntax {
                            offset: self.lx.tok_start,
                            expected: "`)` closing the function argument",
                        });
                    }
                    let end = self.lx.pos;
                    self.lx.advance()?;
                    Ok(ExprAst::new(Node::Fn(tag, Box::new(arg)), (start, end)))
                }
                None => Err(ParseError::UnknownIdentifier { offset: start, name: name.to_string() }),
            },
            Tok::LParen => {
                self.lx.advance()?;
                let inner = self.expr()?;
                if self.lx.tok != Tok::RParen {
                    return Err(ParseError::Syntax {
                        offset: self.lx.tok_start,
                        expected: "`)`",
                    });
                }
                let end = self.lx.pos;
                self.lx.advance()?;
                Ok(ExprAst::new(inner.node, (start, end)))
            }
            _ => Err(ParseError::Syntax { offset: start, expected: "an operand" }),
        }
    }
}

/// Parses a profile expression in the variable `t`.
pub fn parse_profile(source: &str) -> Result<ExprAst, ParseError> {
    let mut p = Parser { lx: Lexer::new(source)? };
    let ast = p.expr()?;
    if p.lx.tok != Tok::End {
        return Err(ParseError::Syntax {
            offset: p.lx.tok_start,
            expected: "end of input or an operator",
        });
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ast(node: Node) -> Box<ExprAst> {
        Box::new(ExprAst::new(node, (0, 0)))
    }

    #[test]
    fn parses_neg_log_cos() {
        let got = parse_profile("-log(cos(t))").unwrap();
        let want = Node::Neg(ast(Node::Fn(FnTag::Log, ast(Node::Fn(FnTag::Cos, ast(Node::Var))))));
        assert_eq!(got.node, want);
    }

    #[test]
    fn parses_with_precedence() {
        let got = parse_profile("1 + 2*t^2").unwrap();
        let want = Node::Add(
            ast(Node::Const(1.0)),
            ast(Node::Mul(ast(Node::Const(2.0)), ast(Node::Pow(ast(Node::Var), 2.0)))),
        );
        assert_eq!(got.node, want);
    }

    #[test]
    fn truncated_input_reports_offset() {
        let err = parse_profile("2*").unwrap_err();
        assert_eq!(err, ParseError::Syntax { offset: 2, expected: "an operand" });
    }

    #[test]
    fn unknown_identifier_is_named() {
        match parse_profile("2*foo(t)") {
            Err(ParseError::UnknownIdentifier { offset: 2, name }) => assert_eq!(name, "foo"),
            other => panic!("expected unknown-identifier error, got {other:?}"),
        }
    }

    #[test]
    fn exponent_must_be_constant() {
        assert_eq!(
            parse_profile("t^t"),
            Err(ParseError::NonConstantExponent { offset: 2 })
        );
        // ...but any constant-folding subtree is fine.
        let p = parse_profile("t^(6/2 - 1)").unwrap();
        assert_eq!(p.node, Node::Pow(ast(Node::Var), 2.0));
    }

    #[test]
    fn power_is_right_associative() {
        let p = parse_profile("t^3^2").unwrap();
        assert_eq!(p.node, Node::Pow(ast(Node::Var), 9.0));
    }

    #[test]
    fn eval_square() {
        let j = parse_profile("t^2").unwrap().eval_jet(1.0).unwrap();
        assert_eq!(j, Jet3::new(1.0, 2.0, 2.0, 0.0));
    }

    #[test]
    fn eval_neg_log_cos_at_zero() {
        let j = parse_profile("-log(cos(t))").unwrap().eval_jet(0.0).unwrap();
        assert!((j.c0).abs() < 1e-15);
        assert!((j.c1).abs() < 1e-15);
        assert!((j.c2 - 1.0).abs() < 1e-15);
        assert!((j.c3).abs() < 1e-15);
    }

    #[test]
    fn eval_pythagorean() {
        let j = parse_profile("sin(t)^2+cos(t)^2").unwrap().eval_jet(0.7).unwrap();
        assert!((j.c0 - 1.0).abs() < 1e-13);
        assert!(j.c1.abs() < 1e-13 && j.c2.abs() < 1e-13 && j.c3.abs() < 1e-13);
    }

    #[test]
    fn eval_error_carries_span() {
        let e = parse_profile("1 + log(t - 2)").unwrap().eval_jet(1.0).unwrap_err();
        assert_eq!((e.start, e.end), (4, 14));
        assert!(matches!(e.inner, JetError::Domain { op: "log", .. }));
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_profile("1+2 * t").unwrap();
        let b = parse_profile(" 1 + 2*t ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_integer_power_needs_positive_base() {
        let p = parse_profile("t^0.5").unwrap();
        assert!(p.eval_jet(2.0).is_ok());
        assert!(p.eval_jet(-2.0).is_err());
        // Integer exponents are fine on negative bases.
        let q = parse_profile("t^3").unwrap();
        assert_eq!(q.eval_jet(-2.0).unwrap().c0, -8.0);
    }

    // Deterministic random AST builder for the round-trip property.
    struct Gen(u64);

    impl Gen {
        fn next(&mut self) -> u64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            self.0 >> 33
        }

        fn uniform(&mut self) -> f64 {
            (self.next() % 4000) as f64 / 1000.0
        }

        fn build(&mut self, depth: u32) -> ExprAst {
            let choice = if depth == 0 { self.next() % 2 } else { self.next() % 8 };
            let node = match choice {
                0 => Node::Const(self.uniform()),
                1 => Node::Var,
                2 => Node::Neg(Box::new(self.build(depth - 1))),
                3 => Node::Add(Box::new(self.build(depth - 1)), Box::new(self.build(depth - 1))),
                4 => Node::Sub(Box::new(self.build(depth - 1)), Box::new(self.build(depth - 1))),
                5 => Node::Mul(Box::new(self.build(depth - 1)), Box::new(self.build(depth - 1))),
                6 => {
                    let p = (self.next() % 5) as f64 - 2.0;
                    Node::Pow(Box::new(self.build(depth - 1)), p)
                }
                _ => {
                    let tags = [FnTag::Sin, FnTag::Cos, FnTag::Exp, FnTag::Sinh, FnTag::Cosh, FnTag::Tanh, FnTag::Atan];
                    Node::Fn(tags[(self.next() % tags.len() as u64) as usize], Box::new(self.build(depth - 1)))
                }
            };
            ExprAst::new(node, (0, 0))
        }
    }

    #[test]
    fn print_parse_round_trip() {
        // Bitwise equality per coordinate; a structurally identical tree runs
        // the identical float program, NaNs included.
        fn same(x: Jet3, y: Jet3) -> bool {
            [x.c0, x.c1, x.c2, x.c3]
                .iter()
                .zip([y.c0, y.c1, y.c2, y.c3].iter())
                .all(|(a, b)| a.to_bits() == b.to_bits())
        }
        let mut g = Gen(0x853c49e6748fea9b);
        for _ in 0..200 {
            let a = g.build(6);
            let text = a.to_string();
            let b = parse_profile(&text).unwrap_or_else(|e| panic!("reparse failed on `{text}`: {e}"));
            assert_eq!(a, b, "round trip changed structure for `{text}`");
            for k in 0..10 {
                let t = (k as f64) * 0.17 - 0.8;
                match (a.eval_jet(t), b.eval_jet(t)) {
                    (Ok(x), Ok(y)) => assert!(same(x, y), "eval differs on `{text}` at t={t}"),
                    (Err(_), Err(_)) => {}
                    (x, y) => panic!("eval mismatch at t={t}: {x:?} vs {y:?}"),
                }
            }
        }
    }

    #[test]
    fn parser_never_panics_on_garbage() {
        let mut g = Gen(0xda3e39cb94b95bdb);
        for _ in 0..2000 {
            let len = (g.next() % 24) as usize;
            let bytes: Vec<u8> = (0..len).map(|_| (g.next() % 256) as u8).collect();
            let text = String::from_utf8_lossy(&bytes);
            let _ = parse_profile(&text);
        }
        // And on structured near-miss inputs.
        for junk in ["", "((", "1..2", "t t", "sin", "sin)", "^2", "1e", "1e+", "-", "()"] {
            assert!(parse_profile(junk).is_err(), "`{junk}` should not parse");
        }
    }
}
