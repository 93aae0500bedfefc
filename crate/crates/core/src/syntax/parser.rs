use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::{BoolExpr, Process, ValueExpr};
use crate::labels::{Calculus, Channel, Value, ValueDomain};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: value {value} is not in the configured domain")]
    ValueOutOfDomain { line: usize, col: usize, value: String },
    #[error("{line}:{col}: {message} (not allowed in an asynchronous calculus)")]
    Asynchrony { line: usize, col: usize, message: String },
    #[error("{line}:{col}: operands of `+` must be guards (0, 1, prefixes or sums)")]
    NotGuard { line: usize, col: usize },
    #[error("line {line}: term is not closed, free variables: {vars}")]
    Open { line: usize, vars: String },
    #[error("line {line}: duplicate definition `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("unknown definition `{0}`")]
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Int(i64),
    Bang,
    Query,
    LParen,
    RParen,
    Dot,
    Plus,
    Bar,
    Eq,
    Quote,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, first_line: usize) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, first_line, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l, k) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '!' => Some(Tok::Bang),
            '?' => Some(Tok::Query),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            '+' => Some(Tok::Plus),
            '|' => Some(Tok::Bar),
            '=' => Some(Tok::Eq),
            '\'' => Some(Tok::Quote),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l, col: k });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| SyntaxError::Syntax {
                line: l,
                col: k,
                message: format!("integer `{s}` out of range"),
            })?;
            col += i - start;
            out.push(Spanned { tok: Tok::Int(n), line: l, col: k });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if c.is_ascii_uppercase() { Tok::Upper(s) } else { Tok::Lower(s) };
            out.push(Spanned { tok, line: l, col: k });
            continue;
        }
        return Err(SyntaxError::Syntax { line: l, col: k, message: format!("unexpected character `{c}`") });
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    calculus: Calculus,
    values: &'a ValueDomain,
}

const KEYWORDS: [&str; 7] = ["tau", "new", "rec", "if", "then", "else", "unit"];

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        let (line, col) = self.here();
        Err(SyntaxError::Syntax { line, col, message: message.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Lower(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn name(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Lower(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    fn channel(&mut self) -> Result<Channel, SyntaxError> {
        let (line, col) = self.here();
        let s = self.name()?;
        Channel::new(s).map_err(|e| SyntaxError::Syntax { line, col, message: e.to_string() })
    }

    fn literal(&self, v: Value, line: usize, col: usize) -> Result<ValueExpr, SyntaxError> {
        if self.values.contains(&v) {
            Ok(ValueExpr::Lit(v))
        } else {
            Err(SyntaxError::ValueOutOfDomain { line, col, value: v.to_string() })
        }
    }

    fn value(&mut self) -> Result<ValueExpr, SyntaxError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                self.literal(Value::Int(n), line, col)
            }
            Tok::Lower(s) if s == "unit" => {
                self.bump();
                self.literal(Value::Unit, line, col)
            }
            Tok::LParen if *self.peek_at(1) == Tok::RParen => {
                self.bump();
                self.bump();
                self.literal(Value::Unit, line, col)
            }
            Tok::Lower(_) => Ok(ValueExpr::Var(self.name()?)),
            _ => self.err("expected a value or a variable"),
        }
    }

    fn process(&mut self) -> Result<Process, SyntaxError> {
        let mut items = vec![self.sum()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            items.push(self.sum()?);
        }
        Ok(Process::par_of(items))
    }

    fn sum(&mut self) -> Result<Process, SyntaxError> {
        let start = self.here();
        let first = self.prefix()?;
        if *self.peek() != Tok::Plus {
            return Ok(first);
        }
        let mut items = vec![(start, first)];
        while *self.peek() == Tok::Plus {
            self.bump();
            let at = self.here();
            items.push((at, self.prefix()?));
        }
        for ((line, col), g) in &items {
            if !g.is_guard() {
                return Err(SyntaxError::NotGuard { line: *line, col: *col });
            }
            if self.calculus.is_asynchronous() && has_output_summand(g) {
                return Err(SyntaxError::Asynchrony {
                    line: *line,
                    col: *col,
                    message: "output used as a summand".into(),
                });
            }
        }
        Ok(Process::sum_of(items.into_iter().map(|(_, g)| g)))
    }

    fn continuation(&mut self) -> Result<Process, SyntaxError> {
        if *self.peek() == Tok::Dot {
            self.bump();
            self.prefix()
        } else {
            Ok(Process::Nil)
        }
    }

    fn output(&mut self, c: Channel, v: ValueExpr, at: (usize, usize)) -> Result<Process, SyntaxError> {
        let body = self.continuation()?;
        if self.calculus.is_asynchronous() && body != Process::Nil {
            return Err(SyntaxError::Asynchrony {
                line: at.0,
                col: at.1,
                message: format!("output on `{c}` has a continuation other than 0"),
            });
        }
        Ok(Process::Output(c, v, Box::new(body)))
    }

    fn prefix(&mut self) -> Result<Process, SyntaxError> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Int(0) => {
                self.bump();
                Ok(Process::Nil)
            }
            Tok::Int(1) => {
                self.bump();
                Ok(Process::One)
            }
            Tok::LParen => {
                self.bump();
                let p = self.process()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::Upper(x) => {
                self.bump();
                Ok(Process::Var(x))
            }
            Tok::Quote => {
                self.bump();
                if self.calculus.has_values() {
                    return self.err("`'a` shorthand is only available without value passing");
                }
                let c = self.channel()?;
                self.output(c, ValueExpr::Lit(Value::Unit), at)
            }
            Tok::Lower(kw) if kw == "tau" => {
                self.bump();
                self.expect(Tok::Dot, "`.` after tau")?;
                Ok(Process::tau(self.prefix()?))
            }
            Tok::Lower(kw) if kw == "new" => {
                self.bump();
                let c = self.channel()?;
                self.expect(Tok::Dot, "`.` after the restricted name")?;
                Ok(Process::Restrict(c, Box::new(self.prefix()?)))
            }
            Tok::Lower(kw) if kw == "rec" => {
                self.bump();
                let x = match self.bump() {
                    Tok::Upper(x) => x,
                    _ => return self.err("expected a process variable (capitalised)"),
                };
                self.expect(Tok::Dot, "`.` after the recursion variable")?;
                Ok(Process::Rec(x, Box::new(self.prefix()?)))
            }
            Tok::Lower(kw) if kw == "if" => {
                self.bump();
                let lhs = self.value()?;
                self.expect(Tok::Eq, "`=`")?;
                let rhs = self.value()?;
                self.expect_keyword("then")?;
                let then = self.process()?;
                self.expect_keyword("else")?;
                let other = self.prefix()?;
                Ok(Process::if_then_else(BoolExpr::eq(lhs, rhs), then, other))
            }
            Tok::Lower(_) => {
                let c = self.channel()?;
                match self.peek() {
                    Tok::Bang => {
                        self.bump();
                        let v = self.value()?;
                        self.output(c, v, at)
                    }
                    Tok::Query => {
                        self.bump();
                        self.expect(Tok::LParen, "`(` after `?`")?;
                        let x = self.name()?;
                        self.expect(Tok::RParen, "`)`")?;
                        self.expect(Tok::Dot, "`.` after the input binder")?;
                        Ok(Process::Input(c, x, Box::new(self.prefix()?)))
                    }
                    _ if !self.calculus.has_values() => {
                        let body = self.continuation()?;
                        Ok(Process::Input(c, "_".into(), Box::new(body)))
                    }
                    _ => self.err("expected `!` or `?` after a channel name"),
                }
            }
            Tok::Int(n) => self.err(format!("`{n}` is not a process")),
            _ => self.err("expected a process"),
        }
    }
}

fn has_output_summand(g: &Process) -> bool {
    match g {
        Process::Output(..) => true,
        Process::Sum(l, r) => has_output_summand(l) || has_output_summand(r),
        _ => false,
    }
}

fn parse_at(text: &str, calculus: Calculus, values: &ValueDomain, line: usize) -> Result<Process, SyntaxError> {
    let toks = lex(text, line)?;
    let mut parser = Parser { toks, pos: 0, calculus, values };
    let p = parser.process()?;
    if *parser.peek() != Tok::End {
        return parser.err("unexpected input after the end of the term");
    }
    let mut free: Vec<String> = p.free_value_vars().into_iter().filter(|x| x != "_").collect();
    free.extend(p.free_process_vars());
    if !free.is_empty() {
        return Err(SyntaxError::Open { line, vars: free.join(", ") });
    }
    Ok(p)
}

/// Parses one closed term of the given calculus.
pub fn parse(text: &str, calculus: Calculus, values: &ValueDomain) -> Result<Process, SyntaxError> {
    parse_at(text, calculus, values, 1)
}

/// An ordered set of named terms, as read from a definition file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Definitions {
    pub entries: Vec<(String, Process)>,
}

impl Definitions {
    pub fn get(&self, name: &str) -> Result<&Process, SyntaxError> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| SyntaxError::Unknown(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads `name = P` lines; `#` starts a comment.
pub fn parse_definitions(text: &str, calculus: Calculus, values: &ValueDomain) -> Result<Definitions, SyntaxError> {
    let mut seen = BTreeMap::new();
    let mut defs = Definitions::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some((name, term)) = body.split_once('=').filter(|(n, _)| !n.contains(['(', '?', '!'])) else {
            return Err(SyntaxError::Syntax { line, col: 1, message: "expected `name = term`".into() });
        };
        let name = name.trim();
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(SyntaxError::Syntax { line, col: 1, message: format!("invalid definition name `{name}`") });
        }
        if seen.insert(name.to_string(), line).is_some() {
            return Err(SyntaxError::Duplicate { line, name: name.to_string() });
        }
        let p = parse_at(term, calculus, values, line)?;
        defs.entries.push((name.to_string(), p));
    }
    Ok(defs)
}
