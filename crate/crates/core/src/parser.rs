//! Concrete syntax: `.pproc` specifications in, terms rendered back out.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Zero};
use thiserror::Error;

pub use crate::syntax::SourceSpan;
use crate::syntax::{
    Action, ActionSet, Declaration, Definition, Directive, Level, Name, Probability, Property,
    Relation, Sort, Spec, Term, TermKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: unexpected character {found:?}")]
    Lex { span: SourceSpan, found: char },
    #[error("{span}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        span: SourceSpan,
        expected: Vec<String>,
        found: String,
    },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Lex { span, .. } | ParseError::Syntax { span, .. } => *span,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Dot,
    Plus,
    ParOpen,
    ParClose,
    LBracket,
    RBracket,
    Backslash,
    Slash,
    LBrace,
    RBrace,
    Lt,
    Gt,
    Colon,
    Comma,
    Semi,
    Define,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Number(s) => return write!(f, "`{}`", s),
            Tok::Dot => ".",
            Tok::Plus => "+",
            Tok::ParOpen => "|[",
            Tok::ParClose => "]|",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Backslash => "\\",
            Tok::Slash => "/",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Define => ":=",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{}`", s)
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: u32,
    column: u32,
    offset: usize,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: Pos,
    len: u32,
}

impl Token {
    fn span(&self) -> SourceSpan {
        SourceSpan { line: self.start.line, column: self.start.column, length: self.len }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = Pos { line, column: col, offset: i };
        let next = chars.get(i + 1).copied();
        let (tok, n) = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j + 1 < chars.len()
                && (chars[j] == '.' || chars[j] == '/')
                && chars[j + 1].is_ascii_digit()
            {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            (Tok::Number(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else {
            match (c, next) {
                ('|', Some('[')) => (Tok::ParOpen, 2),
                (']', Some('|')) => (Tok::ParClose, 2),
                (':', Some('=')) => (Tok::Define, 2),
                ('.', _) => (Tok::Dot, 1),
                ('+', _) => (Tok::Plus, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                ('\\', _) => (Tok::Backslash, 1),
                ('/', _) => (Tok::Slash, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                (':', _) => (Tok::Colon, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                _ => {
                    return Err(ParseError::Lex {
                        span: SourceSpan { line, column: col, length: 1 },
                        found: c,
                    })
                }
            }
        };
        toks.push(Token { tok, start, len: n as u32 });
        i += n;
        col += n as u32;
    }
    toks.push(Token { tok: Tok::Eof, start: Pos { line, column: col, offset: i }, len: 0 });
    Ok(toks)
}

const KEYWORDS: [&str; 5] = ["tau", "high", "low", "check", "equiv"];

fn is_action_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase()) && !KEYWORDS.contains(&s)
}

fn is_const_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ParseError::Syntax {
            span: t.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            self.error(&[what])
        }
    }

    /// Span from token `start` up to the last consumed token.
    fn span_from(&self, start: usize) -> SourceSpan {
        let first = &self.toks[start];
        let last = &self.toks[self.pos.saturating_sub(1).max(start)];
        let length = if first.start.line == last.start.line {
            (last.start.offset + last.len as usize - first.start.offset) as u32
        } else {
            first.len
        };
        SourceSpan { line: first.start.line, column: first.start.column, length }
    }

    fn ident_where(&mut self, pred: fn(&str) -> bool, what: &str) -> PResult<(Name, SourceSpan)> {
        if let Tok::Ident(s) = self.peek() {
            if pred(s) {
                let name: Name = Arc::from(s.as_str());
                let span = self.bump().span();
                return Ok((name, span));
            }
        }
        self.error(&[what])
    }

    fn spec(&mut self) -> PResult<(Vec<Declaration>, Vec<Definition>, Vec<Directive>)> {
        let (mut decls, mut defs, mut dirs) = (Vec::new(), Vec::new(), Vec::new());
        loop {
            let start = self.pos;
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(s) if s == "high" || s == "low" => {
                    self.bump();
                    let level = if s == "high" { Level::High } else { Level::Low };
                    loop {
                        let (name, span) =
                            self.ident_where(|s| is_action_name(s) || s == "tau", "action name")?;
                        decls.push(Declaration { name, level, span: Some(span) });
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    self.expect(Tok::Semi, "`;`")?;
                }
                Tok::Ident(s) if s == "check" => {
                    self.bump();
                    let property = match self.peek() {
                        Tok::Ident(p) => Property::parse(p),
                        _ => None,
                    };
                    let Some(property) = property else {
                        return self.error(&["BSNNI", "BNDC", "SBSNNI", "PBNDC", "SBNDC"]);
                    };
                    self.bump();
                    self.expect(Tok::LBracket, "`[`")?;
                    let relation = self.relation()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    let (subject, _) = self.ident_where(is_const_name, "constant name")?;
                    self.expect(Tok::Semi, "`;`")?;
                    dirs.push(Directive::Check {
                        property,
                        relation,
                        subject,
                        span: Some(self.span_from(start)),
                    });
                }
                Tok::Ident(s) if s == "equiv" => {
                    self.bump();
                    let relation = self.relation()?;
                    let (left, _) = self.ident_where(is_const_name, "constant name")?;
                    let (right, _) = self.ident_where(is_const_name, "constant name")?;
                    self.expect(Tok::Semi, "`;`")?;
                    dirs.push(Directive::Equiv {
                        relation,
                        left,
                        right,
                        span: Some(self.span_from(start)),
                    });
                }
                Tok::Ident(s) if is_const_name(&s) => {
                    let (name, _) = self.ident_where(is_const_name, "constant name")?;
                    self.expect(Tok::Define, "`:=`")?;
                    let body = self.choice()?;
                    self.expect(Tok::Semi, "`;`")?;
                    defs.push(Definition { name, body, span: Some(self.span_from(start)) });
                }
                _ => return self.error(&["`high`", "`low`", "`check`", "`equiv`", "definition"]),
            }
        }
        Ok((decls, defs, dirs))
    }

    fn relation(&mut self) -> PResult<Relation> {
        if let Tok::Ident(s) = self.peek() {
            if let Some(r) = Relation::parse(s) {
                self.bump();
                return Ok(r);
            }
        }
        self.error(&["`pw`", "`pb`"])
    }

    fn choice(&mut self) -> PResult<Term> {
        let start = self.pos;
        let mut t = self.par()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let r = self.par()?;
            t = Term::choice(t, r).with_span(self.span_from(start));
        }
        Ok(t)
    }

    fn par(&mut self) -> PResult<Term> {
        let start = self.pos;
        let mut t = self.post()?;
        while *self.peek() == Tok::ParOpen {
            self.bump();
            let set = self.ids_until(Tok::ParClose, "`]|`")?;
            let r = self.post()?;
            t = Term::parallel(set, t, r).with_span(self.span_from(start));
        }
        Ok(t)
    }

    fn post(&mut self) -> PResult<Term> {
        let start = self.pos;
        let mut t = self.prefix()?;
        loop {
            let restrict = match self.peek() {
                Tok::Backslash => true,
                Tok::Slash => false,
                _ => break,
            };
            self.bump();
            self.expect(Tok::LBrace, "`{`")?;
            let set = self.ids_until(Tok::RBrace, "`}`")?;
            t = if restrict { Term::restrict(set, t) } else { Term::hide(set, t) }
                .with_span(self.span_from(start));
        }
        Ok(t)
    }

    fn ids_until(&mut self, close: Tok, what: &str) -> PResult<ActionSet> {
        let mut set = ActionSet::new();
        if *self.peek() == close {
            self.bump();
            return Ok(set);
        }
        loop {
            let (name, _) = self.ident_where(is_action_name, "action name")?;
            set.insert(name);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                t if *t == close => {
                    self.bump();
                    return Ok(set);
                }
                _ => return self.error(&["`,`", what]),
            }
        }
    }

    fn prefix(&mut self) -> PResult<Term> {
        let start = self.pos;
        if let Tok::Ident(s) = self.peek().clone() {
            if (is_action_name(&s) || s == "tau") && *self.peek_at(1) == Tok::Dot {
                self.bump();
                self.bump();
                let a = if s == "tau" { Action::Tau } else { Action::obs(&s) };
                let body = self.prefix()?;
                return Ok(Term::prefix(a, body).with_span(self.span_from(start)));
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Term> {
        let start = self.pos;
        match self.peek().clone() {
            Tok::Number(n) if n == "0" => {
                let span = self.bump().span();
                Ok(Term::nil().with_span(span))
            }
            Tok::Ident(s) if is_const_name(&s) => {
                let span = self.bump().span();
                Ok(Term::constant(&s).with_span(span))
            }
            Tok::Ident(s) if is_action_name(&s) || s == "tau" => {
                self.bump();
                self.error(&["`.`"])
            }
            Tok::LParen => {
                self.bump();
                let t = self.choice()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Lt => {
                self.bump();
                let mut branches = Vec::new();
                loop {
                    let w = self.weight()?;
                    self.expect(Tok::Colon, "`:`")?;
                    let body = self.choice()?;
                    branches.push((w, body));
                    match self.peek() {
                        Tok::Comma => {
                            self.bump();
                        }
                        Tok::Gt => {
                            self.bump();
                            break;
                        }
                        _ => return self.error(&["`,`", "`>`"]),
                    }
                }
                Ok(Term::prob(branches).with_span(self.span_from(start)))
            }
            _ => self.error(&["`0`", "constant", "action prefix", "`(`", "`<`"]),
        }
    }

    fn weight(&mut self) -> PResult<Probability> {
        let Tok::Number(text) = self.peek().clone() else {
            return self.error(&["weight"]);
        };
        let value = parse_number(&text);
        match value.and_then(|v| Probability::new(v).ok()) {
            Some(p) => {
                self.bump();
                Ok(p)
            }
            None => self.error(&["weight in (0, 1]"]),
        }
    }
}

fn parse_number(text: &str) -> Option<BigRational> {
    if let Some((n, d)) = text.split_once('/') {
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n.parse().ok()?, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let digits: BigInt = format!("{}{}", int, frac).parse().ok()?;
        return Some(BigRational::new(digits, scale));
    }
    Some(BigRational::from_integer(text.parse().ok()?))
}

/// Rewrites `a.N` (nondeterministic body) into `a.<1: N>`.
fn desugar(t: &Term, spec: &Spec) -> Term {
    let span = t.span();
    let out = match t.kind() {
        TermKind::Nil | TermKind::Const(_) => return t.clone(),
        TermKind::Prefix(a, body) => {
            let body = desugar(body, spec);
            if body.shallow_sort(spec) == Ok(Sort::Nondeterministic) {
                let wrapped = Term::unit(body.clone());
                let wrapped = match body.span() {
                    Some(s) => wrapped.with_span(s),
                    None => wrapped,
                };
                Term::prefix(a.clone(), wrapped)
            } else {
                Term::prefix(a.clone(), body)
            }
        }
        TermKind::Choice(l, r) => Term::choice(desugar(l, spec), desugar(r, spec)),
        TermKind::ProbChoice(bs) => {
            Term::prob(bs.iter().map(|(w, b)| (w.clone(), desugar(b, spec))).collect())
        }
        TermKind::Parallel(s, l, r) => Term::parallel(s.clone(), desugar(l, spec), desugar(r, spec)),
        TermKind::Restrict(s, b) => Term::restrict(s.clone(), desugar(b, spec)),
        TermKind::Hide(s, b) => Term::hide(s.clone(), desugar(b, spec)),
    };
    match span {
        Some(s) => out.with_span(s),
        None => out,
    }
}

/// Parses a whole specification. Shorthand prefixes are desugared using the
/// sorts of the defined constants.
pub fn parse_spec(text: &str) -> Result<Spec, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let (decls, defs, dirs) = p.spec()?;
    let raw = Spec::new(decls.clone(), defs.clone(), Vec::new());
    let defs = defs
        .into_iter()
        .map(|d| Definition { body: desugar(&d.body, &raw), ..d })
        .collect();
    Ok(Spec::new(decls, defs, dirs))
}

/// Parses a single term; constants are resolved against `spec`.
pub fn parse_term_in(text: &str, spec: &Spec) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.choice()?;
    if *p.peek() != Tok::Eof {
        return p.error(&["end of input"]);
    }
    Ok(desugar(&t, spec))
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_in(text, &Spec::default())
}

fn level(t: &Term) -> u8 {
    match t.kind() {
        TermKind::Choice(..) => 0,
        TermKind::Parallel(..) => 1,
        TermKind::Restrict(..) | TermKind::Hide(..) => 2,
        TermKind::Prefix(..) => 3,
        TermKind::Nil | TermKind::Const(_) | TermKind::ProbChoice(_) => 4,
    }
}

fn write_set(out: &mut String, set: &ActionSet) {
    let items: Vec<&str> = set.iter().map(|s| &**s).collect();
    out.push_str(&items.join(","));
}

fn render_into(t: &Term, min: u8, out: &mut String) {
    if level(t) < min {
        out.push('(');
        render_into(t, 0, out);
        out.push(')');
        return;
    }
    match t.kind() {
        TermKind::Nil => out.push('0'),
        TermKind::Const(k) => out.push_str(k),
        TermKind::Prefix(a, body) => {
            out.push_str(&a.to_string());
            out.push('.');
            match body.kind() {
                TermKind::ProbChoice(bs) if bs.len() == 1 && bs[0].0.is_one() => {
                    render_into(&bs[0].1, 3, out)
                }
                _ => render_into(body, 3, out),
            }
        }
        TermKind::Choice(l, r) => {
            render_into(l, 0, out);
            out.push_str(" + ");
            render_into(r, 1, out);
        }
        TermKind::ProbChoice(bs) => {
            out.push('<');
            for (i, (w, b)) in bs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&w.to_string());
                out.push_str(": ");
                render_into(b, 0, out);
            }
            out.push('>');
        }
        TermKind::Parallel(set, l, r) => {
            render_into(l, 1, out);
            out.push_str(" |[");
            write_set(out, set);
            out.push_str("]| ");
            render_into(r, 2, out);
        }
        TermKind::Restrict(set, b) | TermKind::Hide(set, b) => {
            render_into(b, 2, out);
            out.push_str(if matches!(t.kind(), TermKind::Restrict(..)) { " \\ {" } else { " / {" });
            write_set(out, set);
            out.push('}');
        }
    }
}

/// Renders a term with minimal parentheses; `parse_term` inverts it.
pub fn render_term(t: &Term) -> String {
    let mut out = String::new();
    render_into(t, 0, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}
