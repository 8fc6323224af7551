//! Problem file format.
//!
//! ```text
//! # comment
//! vars: x y
//! bound: x in [0,8]
//! bound: y in [0,8]
//! maximize: x + y
//! subject to:
//!   y - x^2 == 0
//! ```
//!
//! Clauses appear in this order, one per line. Expressions are sums of
//! products of powers; a leading `-` may start any sum, `^` takes a
//! non-negative integer and does not chain, and `/` divides by a positive
//! numeric literal. `p/q` written without spaces is a single rational literal.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::MonomialPoly;
use crate::problem::{Direction, Relation, UserProblem, VarBounds};
use crate::rational::{Integer, Rational};

/// Expression tree. `Num` holds non-negative literals; `Div` divides by a
/// positive literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Num(Rational),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Rational),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn to_poly(&self, vars: &[String]) -> Result<MonomialPoly> {
        let n = vars.len();
        Ok(match self {
            Expr::Var(name) => {
                let i = vars.iter().position(|v| v == name).ok_or_else(|| Error::UnboundedVariable { name: name.clone() })?;
                MonomialPoly::var(n, i)
            }
            Expr::Num(v) => MonomialPoly::constant(n, v.clone()),
            Expr::Neg(e) => -e.to_poly(vars)?,
            Expr::Add(a, b) => a.to_poly(vars)? + b.to_poly(vars)?,
            Expr::Sub(a, b) => a.to_poly(vars)? - b.to_poly(vars)?,
            Expr::Mul(a, b) => a.to_poly(vars)? * b.to_poly(vars)?,
            Expr::Div(a, v) => a.to_poly(vars)?.scale(&v.recip()),
            Expr::Pow(a, e) => a.to_poly(vars)?.pow(*e),
        })
    }

    fn fmt_sum(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Add(a, b) => {
                a.fmt_sum(f)?;
                f.write_str(" + ")?;
                b.fmt_product(f)
            }
            Expr::Sub(a, b) => {
                a.fmt_sum(f)?;
                f.write_str(" - ")?;
                b.fmt_product(f)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_product(f)
            }
            _ => self.fmt_product(f),
        }
    }

    fn fmt_product(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Mul(a, b) => {
                a.fmt_product(f)?;
                f.write_str(" * ")?;
                b.fmt_power(f)
            }
            Expr::Div(a, v) => {
                a.fmt_product(f)?;
                write!(f, " / {v}")
            }
            _ => self.fmt_power(f),
        }
    }

    fn fmt_power(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Pow(a, e) => {
                a.fmt_atom(f)?;
                write!(f, "^{e}")
            }
            _ => self.fmt_atom(f),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(name) => f.write_str(name),
            Expr::Num(v) => write!(f, "{v}"),
            _ => {
                f.write_str("(")?;
                self.fmt_sum(f)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_sum(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundClause {
    pub var: String,
    pub lo: Integer,
    pub hi: Integer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectiveClause {
    pub direction: Direction,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintClause {
    pub lhs: Expr,
    pub relation: Relation,
    pub rhs: Expr,
}

/// Parsed problem file. Every variable is declared once and bounded once, and
/// expressions only mention declared variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub vars: Vec<String>,
    pub bounds: Vec<BoundClause>,
    pub objective: Option<ObjectiveClause>,
    pub constraints: Vec<ConstraintClause>,
}

impl ProblemFile {
    pub fn to_user_problem(&self) -> Result<UserProblem> {
        let by_name: HashMap<&str, &BoundClause> = self.bounds.iter().map(|b| (b.var.as_str(), b)).collect();
        let bounds = self
            .vars
            .iter()
            .map(|v| {
                by_name
                    .get(v.as_str())
                    .map(|b| VarBounds::closed(b.lo.clone(), b.hi.clone()))
                    .ok_or_else(|| Error::UnboundedVariable { name: v.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut up = UserProblem::feasibility(self.vars.clone(), bounds);
        if let Some(obj) = &self.objective {
            up = up.with_objective(obj.direction, obj.expr.to_poly(&self.vars)?);
        }
        for c in &self.constraints {
            up = up.with_constraint(c.lhs.to_poly(&self.vars)?, c.relation, c.rhs.to_poly(&self.vars)?);
        }
        Ok(up)
    }
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.vars.join(" "))?;
        for b in &self.bounds {
            writeln!(f, "bound: {} in [{},{}]", b.var, b.lo, b.hi)?;
        }
        if let Some(obj) = &self.objective {
            let word = match obj.direction {
                Direction::Minimize => "minimize",
                _ => "maximize",
            };
            writeln!(f, "{word}: {}", obj.expr)?;
        }
        writeln!(f, "subject to:")?;
        for c in &self.constraints {
            writeln!(f, "  {} {} {}", c.lhs, c.relation, c.rhs)?;
        }
        Ok(())
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    Parser::new(text)?.file()
}

pub fn parse_user_problem(text: &str) -> Result<UserProblem> {
    parse_problem(text)?.to_user_problem()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(v) => write!(f, "'{v}'"),
            Tok::Sym(s) => write!(f, "'{s}'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
    len: usize,
}

const KEYWORDS: &[&str] = &["vars", "bound", "in", "maximize", "minimize", "subject", "to"];
const SYMBOLS: &[&str] = &["==", "<=", ">=", "<", ">", "+", "-", "*", "/", "^", "(", ")", "[", "]", ",", ":"];

fn lex_line(line: &str, lineno: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse::<BigInt>().expect("ascii digits");
            out.push(Token { tok: Tok::Int(value), col, len: i - start });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Ident(word), col, len: i - start });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push(Token { tok: Tok::Sym(s), col, len: s.len() });
                i += s.len();
            }
            None => {
                let message = if c == '=' { "expected '==' for equality".to_string() } else { format!("unexpected character {c:?}") };
                return Err(Error::Parse { line: lineno, column: col, message });
            }
        }
    }
    Ok(out)
}

struct Line {
    number: usize,
    tokens: Vec<Token>,
    end_col: usize,
}

struct Parser {
    lines: Vec<Line>,
    line: usize,
    pos: usize,
    declared: HashMap<String, (usize, usize)>,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let tokens = lex_line(raw, i + 1)?;
            if !tokens.is_empty() {
                let end_col = raw.chars().count() + 1;
                lines.push(Line { number: i + 1, tokens, end_col });
            }
        }
        Ok(Parser { lines, line: 0, pos: 0, declared: HashMap::new() })
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Parse { line, column, message: message.into() })
    }

    fn here(&self) -> (usize, usize) {
        match self.lines.get(self.line) {
            Some(l) => match l.tokens.get(self.pos) {
                Some(t) => (l.number, t.col),
                None => (l.number, l.end_col),
            },
            None => (self.lines.last().map_or(1, |l| l.number + 1), 1),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.lines.get(self.line).and_then(|l| l.tokens.get(self.pos))
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.lines.get(self.line).and_then(|l| l.tokens.get(self.pos + offset))
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(x), .. }) if *x == s)
    }

    fn at_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(x), .. }) if x == k)
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.at_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(&format!("'{s}'"))
        }
    }

    fn expect_keyword(&mut self, k: &str) -> Result<()> {
        if self.at_keyword(k) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(&format!("'{k}'"))
        }
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        match self.peek() {
            Some(t) => self.err(format!("expected {wanted}, found {}", t.tok)),
            None => self.err(format!("expected {wanted}, found end of line")),
        }
    }

    fn end_line(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return self.unexpected("end of line");
        }
        self.line += 1;
        self.pos = 0;
        Ok(())
    }

    fn at_eof(&self) -> bool {
        self.line >= self.lines.len()
    }

    fn file(mut self) -> Result<ProblemFile> {
        if self.at_eof() {
            return self.err("expected 'vars:'");
        }
        let vars = self.vars_clause()?;

        let mut bounds: Vec<BoundClause> = Vec::new();
        let mut bound_names: HashSet<String> = HashSet::new();
        while !self.at_eof() && self.at_keyword("bound") {
            let start = self.here();
            let b = self.bound_clause()?;
            if !bound_names.insert(b.var.clone()) {
                return Err(Error::Parse { line: start.0, column: start.1, message: format!("duplicate bound for '{}'", b.var) });
            }
            bounds.push(b);
        }
        if self.at_eof() {
            return self.err("expected 'subject to:'");
        }
        for v in &vars {
            if !bound_names.contains(v) {
                let (line, column) = self.declared[v];
                return Err(Error::Parse { line, column, message: format!("variable '{v}' has no bound") });
            }
        }

        let objective = if self.at_keyword("maximize") || self.at_keyword("minimize") {
            let direction = if self.at_keyword("maximize") { Direction::Maximize } else { Direction::Minimize };
            self.pos += 1;
            self.expect_sym(":")?;
            let expr = self.sum()?;
            self.end_line()?;
            Some(ObjectiveClause { direction, expr })
        } else {
            None
        };

        if self.at_eof() {
            return self.err("expected 'subject to:'");
        }
        self.expect_keyword("subject")?;
        self.expect_keyword("to")?;
        self.expect_sym(":")?;
        let mut constraints = Vec::new();
        if self.peek().is_some() {
            constraints.push(self.constraint()?);
        }
        self.end_line()?;
        while !self.at_eof() {
            constraints.push(self.constraint()?);
            self.end_line()?;
        }
        if constraints.is_empty() {
            return self.err("expected at least one constraint");
        }
        Ok(ProblemFile { vars, bounds, objective, constraints })
    }

    fn vars_clause(&mut self) -> Result<Vec<String>> {
        self.expect_keyword("vars")?;
        self.expect_sym(":")?;
        let mut vars = Vec::new();
        while let Some(t) = self.peek().cloned() {
            let Tok::Ident(name) = t.tok else {
                return self.unexpected("a variable name");
            };
            if KEYWORDS.contains(&name.as_str()) {
                return self.err(format!("'{name}' is reserved"));
            }
            let line = self.lines[self.line].number;
            if self.declared.insert(name.clone(), (line, t.col)).is_some() {
                return self.err(format!("variable '{name}' declared twice"));
            }
            vars.push(name);
            self.pos += 1;
        }
        if vars.is_empty() {
            return self.unexpected("a variable name");
        }
        self.end_line()?;
        Ok(vars)
    }

    fn bound_clause(&mut self) -> Result<BoundClause> {
        self.expect_keyword("bound")?;
        self.expect_sym(":")?;
        let var = self.variable()?;
        self.expect_keyword("in")?;
        self.expect_sym("[")?;
        let lo_at = self.here();
        let lo = self.signed_int()?;
        self.expect_sym(",")?;
        let hi = self.signed_int()?;
        self.expect_sym("]")?;
        if lo > hi {
            return Err(Error::Parse { line: lo_at.0, column: lo_at.1, message: format!("empty interval [{lo},{hi}]") });
        }
        self.end_line()?;
        Ok(BoundClause { var, lo, hi })
    }

    fn variable(&mut self) -> Result<String> {
        match self.peek().cloned() {
            Some(Token { tok: Tok::Ident(name), .. }) => {
                if !self.declared.contains_key(&name) {
                    return self.err(format!("undeclared variable '{name}'"));
                }
                self.pos += 1;
                Ok(name)
            }
            _ => self.unexpected("a variable name"),
        }
    }

    fn signed_int(&mut self) -> Result<Integer> {
        let negative = self.at_sym("-");
        if negative {
            self.pos += 1;
        }
        match self.peek().cloned() {
            Some(Token { tok: Tok::Int(v), .. }) => {
                self.pos += 1;
                Ok(if negative { -v } else { v })
            }
            _ => self.unexpected("an integer"),
        }
    }

    fn constraint(&mut self) -> Result<ConstraintClause> {
        let lhs = self.sum()?;
        let relation = match self.peek().map(|t| &t.tok) {
            Some(Tok::Sym("==")) => Relation::Eq,
            Some(Tok::Sym("<=")) => Relation::Le,
            Some(Tok::Sym(">=")) => Relation::Ge,
            Some(Tok::Sym("<")) => Relation::Lt,
            Some(Tok::Sym(">")) => Relation::Gt,
            _ => return self.unexpected("a relation"),
        };
        self.pos += 1;
        let rhs = self.sum()?;
        Ok(ConstraintClause { lhs, relation, rhs })
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = if self.at_sym("-") {
            self.pos += 1;
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.product()?
        };
        loop {
            if self.at_sym("+") {
                self.pos += 1;
                e = Expr::Add(Box::new(e), Box::new(self.product()?));
            } else if self.at_sym("-") {
                self.pos += 1;
                e = Expr::Sub(Box::new(e), Box::new(self.product()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.power()?;
        loop {
            if self.at_sym("*") {
                self.pos += 1;
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else if self.at_sym("/") {
                self.pos += 1;
                let at = self.here();
                let Some(v) = self.literal()? else {
                    return self.unexpected("a numeric literal after '/'");
                };
                if v.is_zero() {
                    return Err(Error::Parse { line: at.0, column: at.1, message: "division by zero".into() });
                }
                e = Expr::Div(Box::new(e), v);
            } else {
                return Ok(e);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.at_sym("^") {
            return Ok(base);
        }
        self.pos += 1;
        let exponent = match self.peek().cloned() {
            Some(Token { tok: Tok::Int(v), .. }) => v,
            _ => return self.unexpected("a non-negative integer exponent"),
        };
        let Some(e) = exponent.to_u32() else {
            return self.err("exponent too large");
        };
        self.pos += 1;
        if self.at_sym("^") {
            return self.err("'^' does not chain; use parentheses");
        }
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr> {
        if let Some(v) = self.literal()? {
            return Ok(Expr::Num(v));
        }
        match self.peek().cloned() {
            Some(Token { tok: Tok::Ident(name), .. }) => {
                if !self.declared.contains_key(&name) {
                    return self.err(format!("undeclared variable '{name}'"));
                }
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some(Token { tok: Tok::Sym("("), .. }) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => self.unexpected("an operand"),
        }
    }

    /// Integer, or `p/q` when the three tokens are adjacent.
    fn literal(&mut self) -> Result<Option<Rational>> {
        let Some(Token { tok: Tok::Int(p), col, len }) = self.peek().cloned() else {
            return Ok(None);
        };
        let adjacent_rational = match (self.peek_at(1), self.peek_at(2)) {
            (Some(slash), Some(Token { tok: Tok::Int(_), col: qcol, .. })) => {
                slash.tok == Tok::Sym("/") && slash.col == col + len && *qcol == slash.col + 1
            }
            _ => false,
        };
        if !adjacent_rational {
            self.pos += 1;
            return Ok(Some(Rational::from_integer(p)));
        }
        let Some(Token { tok: Tok::Int(q), .. }) = self.peek_at(2).cloned() else { unreachable!() };
        if q.is_zero() {
            self.pos += 2;
            return self.err("zero denominator");
        }
        self.pos += 3;
        debug_assert!(!q.is_negative());
        Ok(Some(Rational::new(p, q)))
    }
}
