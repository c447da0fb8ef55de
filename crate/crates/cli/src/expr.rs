//! Expressions over `[-1, 1]`.
//!
//! ```text
//! expr    := operand (infix operand)?
//! operand := literal | "(" expr ")" | "fold" "(" name ";" expr ("," expr)* ")"
//! infix   := "(+)" | "(*)" | "svee" | "swedge"
//! ```
//!
//! There is no precedence: `a (+) b (+) c` is rejected and must be grouped.

use std::fmt;

use bipolar_core::scale::BipolarValue;
use bipolar_core::symmetric::{
    sym_max_fold, sym_max_raw, sym_min_raw, FoldOutcome, PseudoAddition, PseudoMultiplication, UndefinedAggregate,
};

use crate::error::{CliError, CliResult};
use crate::registry::OpContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Oplus,
    Otimes,
    Svee,
    Swedge,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::Oplus, Symbol::Otimes, Symbol::Svee, Symbol::Swedge];

    pub fn token(self) -> &'static str {
        match self {
            Symbol::Oplus => "(+)",
            Symbol::Otimes => "(*)",
            Symbol::Svee => "svee",
            Symbol::Swedge => "swedge",
        }
    }

    fn from_name(name: &str) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|s| s.token() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Literal(BipolarValue),
    Binary { op: Symbol, left: Box<Ast>, right: Box<Ast> },
    Fold { op: Symbol, items: Vec<Ast> },
}

impl Ast {
    pub fn binary(op: Symbol, left: Ast, right: Ast) -> Ast {
        Ast::Binary { op, left: Box::new(left), right: Box::new(right) }
    }

    pub fn literal_count(&self) -> usize {
        match self {
            Ast::Literal(_) => 1,
            Ast::Binary { left, right, .. } => left.literal_count() + right.literal_count(),
            Ast::Fold { items, .. } => items.iter().map(Ast::literal_count).sum(),
        }
    }
}

impl fmt::Display for Ast {
    /// Prints a form that parses back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(a: &Ast, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match a {
                Ast::Binary { .. } => write!(f, "({a})"),
                _ => write!(f, "{a}"),
            }
        }
        match self {
            Ast::Literal(v) => write!(f, "{}", v.get()),
            Ast::Binary { op, left, right } => {
                operand(left, f)?;
                write!(f, " {} ", op.token())?;
                operand(right, f)
            }
            Ast::Fold { op, items } => {
                write!(f, "fold({}; ", op.token())?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(f64),
    Infix(Symbol),
    Word(String),
    Open,
    Close,
    Semi,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Number(v) => write!(f, "number {v}"),
            Tok::Infix(s) => write!(f, "operator `{}`", s.token()),
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn syntax(pos: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax { pos, message: message.into() }
}

fn lex(text: &str) -> CliResult<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                if let Some(rest) = text.get(i..i + 3) {
                    if let Some(sym) = Symbol::from_name(rest) {
                        out.push((i, Tok::Infix(sym)));
                        i += 3;
                        continue;
                    }
                    let b = rest.as_bytes();
                    if b[2] == b')' && !b[1].is_ascii_alphanumeric() && !matches!(b[1], b'(' | b')') {
                        return Err(CliError::UnknownOperator { name: rest.to_string(), pos: i });
                    }
                }
                out.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            b';' => {
                out.push((i, Tok::Semi));
                i += 1;
            }
            b',' => {
                out.push((i, Tok::Comma));
                i += 1;
            }
            b'-' | b'0'..=b'9' | b'.' => {
                let start = i;
                if c == b'-' {
                    i += 1;
                }
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let frac = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if frac == i {
                        return Err(syntax(start, "expected digits after the decimal point"));
                    }
                }
                if i == digits_start || !bytes[digits_start].is_ascii_digit() {
                    return Err(syntax(start, "malformed number"));
                }
                let v: f64 = text[start..i].parse().map_err(|_| syntax(start, "malformed number"))?;
                out.push((start, Tok::Number(v)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                match Symbol::from_name(word) {
                    Some(sym) => out.push((start, Tok::Infix(sym))),
                    None => out.push((start, Tok::Word(word.to_string()))),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(i, format!("unexpected character `{ch}`")));
            }
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(usize, Tok) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> CliResult<usize> {
        let (pos, tok) = self.next();
        if tok == want {
            Ok(pos)
        } else {
            Err(syntax(pos, format!("expected {want}, found {tok}")))
        }
    }

    fn expr(&mut self) -> CliResult<Ast> {
        let left = self.operand()?;
        let op = match self.peek().1 {
            Tok::Infix(sym) => {
                self.next();
                sym
            }
            Tok::Word(ref w) => return Err(CliError::UnknownOperator { name: w.clone(), pos: self.peek().0 }),
            _ => return Ok(left),
        };
        let right = self.operand()?;
        if let (pos, Tok::Infix(sym)) = self.peek() {
            return Err(syntax(
                *pos,
                format!("operator `{}` after a complete binary expression; group with parentheses", sym.token()),
            ));
        }
        Ok(Ast::binary(op, left, right))
    }

    fn operand(&mut self) -> CliResult<Ast> {
        let (pos, tok) = self.next();
        match tok {
            Tok::Number(v) => BipolarValue::new(v)
                .map(Ast::Literal)
                .map_err(|_| syntax(pos, format!("literal {v} outside [-1, 1]"))),
            Tok::Open => {
                let inner = self.expr()?;
                self.expect(Tok::Close)?;
                Ok(inner)
            }
            Tok::Word(w) if w == "fold" => self.fold(),
            Tok::Word(w) => Err(CliError::UnknownOperator { name: w, pos }),
            other => Err(syntax(pos, format!("expected a number, `(` or `fold`, found {other}"))),
        }
    }

    fn fold(&mut self) -> CliResult<Ast> {
        self.expect(Tok::Open)?;
        let (pos, tok) = self.next();
        let op = match tok {
            Tok::Infix(sym) => sym,
            Tok::Word(w) => return Err(CliError::UnknownOperator { name: w, pos }),
            other => return Err(syntax(pos, format!("expected an operator name, found {other}"))),
        };
        self.expect(Tok::Semi)?;
        let mut items = vec![self.expr()?];
        loop {
            let (pos, tok) = self.next();
            match tok {
                Tok::Comma => items.push(self.expr()?),
                Tok::Close => break,
                other => return Err(syntax(pos, format!("expected `,` or `)`, found {other}"))),
            }
        }
        Ok(Ast::Fold { op, items })
    }
}

pub fn parse_expression(text: &str) -> CliResult<Ast> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let ast = p.expr()?;
    match p.next() {
        (_, Tok::End) => Ok(ast),
        (pos, tok) => Err(syntax(pos, format!("expected end of input, found {tok}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvalOutcome {
    Value(BipolarValue),
    Undefined(UndefinedAggregate),
}

impl fmt::Display for EvalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalOutcome::Value(v) => write!(f, "{}", v.get()),
            EvalOutcome::Undefined(u) => write!(f, "undefined [{}, {}]", u.low, u.high),
        }
    }
}

/// Evaluates bottom-up. Folds over `svee` follow the n-ary ⊻ rule; other
/// folds are left folds.
pub fn evaluate(ast: &Ast, ctx: &OpContext) -> CliResult<EvalOutcome> {
    Evaluator { plus: ctx.pseudo_addition(), times: ctx.pseudo_multiplication() }.eval(ast)
}

struct Evaluator {
    plus: PseudoAddition,
    times: PseudoMultiplication,
}

impl Evaluator {
    fn apply(&self, op: Symbol, a: f64, b: f64) -> f64 {
        match op {
            Symbol::Oplus => self.plus.apply(a, b),
            Symbol::Otimes => self.times.apply(a, b),
            Symbol::Svee => sym_max_raw(a, b),
            Symbol::Swedge => sym_min_raw(a, b),
        }
    }

    fn eval(&self, ast: &Ast) -> CliResult<EvalOutcome> {
        let fail = |source: bipolar_core::Error| CliError::Eval { at: ast.to_string(), source };
        match ast {
            Ast::Literal(v) => Ok(EvalOutcome::Value(*v)),
            Ast::Binary { op, left, right } => {
                let l = self.operand(left)?;
                let r = self.operand(right)?;
                let v = BipolarValue::new(self.apply(*op, l, r)).map_err(|e| fail(e.into()))?;
                Ok(EvalOutcome::Value(v))
            }
            Ast::Fold { op, items } => {
                let vals: Vec<f64> = items.iter().map(|i| self.operand(i)).collect::<CliResult<_>>()?;
                if *op == Symbol::Svee {
                    let bv: Vec<BipolarValue> = vals
                        .iter()
                        .map(|&v| BipolarValue::new(v).map_err(|e| fail(e.into())))
                        .collect::<CliResult<_>>()?;
                    return Ok(match sym_max_fold(&bv).map_err(fail)? {
                        FoldOutcome::Value(v) => EvalOutcome::Value(v),
                        FoldOutcome::Undefined(u) => EvalOutcome::Undefined(u),
                    });
                }
                let folded = vals[1..].iter().fold(vals[0], |acc, &v| self.apply(*op, acc, v));
                Ok(EvalOutcome::Value(BipolarValue::new(folded).map_err(|e| fail(e.into()))?))
            }
        }
    }

    fn operand(&self, ast: &Ast) -> CliResult<f64> {
        match self.eval(ast)? {
            EvalOutcome::Value(v) => Ok(v.get()),
            EvalOutcome::Undefined(u) => Err(CliError::UndefinedOperand {
                at: ast.to_string(),
                low: u.low,
                high: u.high,
            }),
        }
    }
}
