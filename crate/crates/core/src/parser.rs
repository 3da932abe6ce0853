//! Recursive-descent parser for `.csp` source files.
//!
//! ```text
//! file    := { def } [ expr ]
//! def     := NAME [ "alpha" "{" NAME { "," NAME } "}" ] "=" expr NEWLINE
//! expr    := par
//! par     := choice { ( "||" | "[" set "||" set "]" ) choice }
//! choice  := prefix { "|" prefix }
//! prefix  := event "->" prefix | atom
//! atom    := "STOP" | "SKIP" | "mu" NAME "." expr | NAME | "(" expr ")"
//! event   := NAME | "nil" | "tick"
//! ```
//!
//! `->` binds tightest and associates to the right, then `|`, then `||`
//! (left associative). A `mu` body extends as far right as possible. `#`
//! starts a comment. Newlines end a definition except inside parentheses.
//! `→`, `∥`, `μ` and `✓` are accepted for `->`, `||`, `mu` and `tick`.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::defs::{DefinitionError, Definitions};
use crate::event::{Alphabet, Event, Name};
use crate::term::{ProcessTerm, SyncAlphabets, TermError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The text does not match the grammar.
    Syntax,
    /// The text parses but names, guards or alphabets are inconsistent.
    Resolution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl core::error::Error for ParseError {}

/// A parsed and resolved source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub definitions: Definitions,
    pub main: Option<ProcessTerm>,
}

/// Parses a whole source file.
pub fn parse(input: &str) -> Result<SourceFile, ParseError> {
    let tokens = lex(input)?;
    let mut parser = Parser { tokens, index: 0, depth: 0 };
    let (raw_defs, raw_main) = parser.file()?;
    resolve_file(raw_defs, raw_main)
}

/// Parses a single expression whose names may refer to `defs`.
pub fn parse_expr(input: &str, defs: &Definitions) -> Result<ProcessTerm, ParseError> {
    let tokens = lex(input)?;
    let mut parser = Parser { tokens, index: 0, depth: 0 };
    parser.skip_newlines();
    let expr = parser.expr()?;
    parser.skip_newlines();
    parser.expect_eof()?;
    let names: BTreeSet<&str> = defs.iter().map(|(n, _)| n.as_str()).collect();
    let term = Resolver { defs: &names }.term(&expr, &mut Vec::new())?;
    term.validate().map_err(|e| term_error(e, expr.pos))?;
    defs.check_refs(&term, None).map_err(|e| resolution(expr.pos, e.to_string()))?;
    Ok(term)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

/// Names of a written alphabet, with their positions.
type NameSet = Vec<(String, Pos)>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Arrow,
    Bar,
    DoubleBar,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Equals,
    Dot,
    Mu,
    Nil,
    Tick,
    Stop,
    Skip,
    Alpha,
    Newline,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("`{n}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Bar => "`|`".into(),
            Tok::DoubleBar => "`||`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Mu => "`mu`".into(),
            Tok::Nil => "`nil`".into(),
            Tok::Tick => "`tick`".into(),
            Tok::Stop => "`STOP`".into(),
            Tok::Skip => "`SKIP`".into(),
            Tok::Alpha => "`alpha`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    let (mut line, mut column) = (1, 1);

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let mut advance = |chars: &mut core::iter::Peekable<core::str::Chars<'_>>| {
            chars.next();
            column += 1;
        };
        let single = match c {
            '\n' => {
                chars.next();
                tokens.push((Tok::Newline, pos));
                line += 1;
                column = 1;
                continue;
            }
            ' ' | '\t' | '\r' => {
                advance(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    advance(&mut chars);
                }
                continue;
            }
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Equals),
            '.' => Some(Tok::Dot),
            '→' => Some(Tok::Arrow),
            '∥' => Some(Tok::DoubleBar),
            'μ' => Some(Tok::Mu),
            '✓' => Some(Tok::Tick),
            _ => None,
        };
        if let Some(tok) = single {
            advance(&mut chars);
            tokens.push((tok, pos));
            continue;
        }
        match c {
            '-' => {
                advance(&mut chars);
                if chars.peek() == Some(&'>') {
                    advance(&mut chars);
                    tokens.push((Tok::Arrow, pos));
                } else {
                    return Err(syntax(pos, "stray `-`".into(), alloc::vec!["`->`".into()]));
                }
            }
            '|' => {
                advance(&mut chars);
                if chars.peek() == Some(&'|') {
                    advance(&mut chars);
                    tokens.push((Tok::DoubleBar, pos));
                } else {
                    tokens.push((Tok::Bar, pos));
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        advance(&mut chars);
                    } else {
                        break;
                    }
                }
                let tok = match word.as_str() {
                    "mu" => Tok::Mu,
                    "nil" => Tok::Nil,
                    "tick" => Tok::Tick,
                    "STOP" => Tok::Stop,
                    "SKIP" => Tok::Skip,
                    "alpha" => Tok::Alpha,
                    _ => Tok::Name(word),
                };
                tokens.push((tok, pos));
            }
            other => {
                return Err(syntax(pos, format!("unexpected character `{other}`"), Vec::new()));
            }
        }
    }
    tokens.push((Tok::Eof, Pos { line, column }));
    Ok(tokens)
}

fn syntax(pos: Pos, message: String, expected: Vec<String>) -> ParseError {
    ParseError { kind: ErrorKind::Syntax, line: pos.line, column: pos.column, message, expected }
}

fn resolution(pos: Pos, message: String) -> ParseError {
    ParseError { kind: ErrorKind::Resolution, line: pos.line, column: pos.column, message, expected: Vec::new() }
}

fn term_error(error: TermError, pos: Pos) -> ParseError {
    resolution(pos, error.to_string())
}

/// An expression before names are resolved.
#[derive(Debug)]
struct Expr {
    pos: Pos,
    kind: ExprKind,
}

#[derive(Debug)]
enum ExprKind {
    Prefix(Event, Box<Expr>),
    Choice(Vec<Expr>),
    Parallel(Box<Expr>, Box<Expr>, Option<(NameSet, NameSet)>),
    Mu(String, Box<Expr>),
    Name(String),
    Stop,
    Skip,
}

struct RawDef {
    name: String,
    pos: Pos,
    alphabet: Option<NameSet>,
    body: Expr,
}

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    index: usize,
    /// Parenthesis nesting; newlines are insignificant when positive.
    depth: usize,
}

const EXPR_START: [&str; 8] = ["event name", "`nil`", "`tick`", "`STOP`", "`SKIP`", "`mu`", "process name", "`(`"];

impl Parser {
    fn peek_raw(&self, offset: usize) -> &(Tok, Pos) {
        let mut i = self.index;
        let mut seen = 0;
        loop {
            let item = &self.tokens[i.min(self.tokens.len() - 1)];
            if self.depth > 0 && item.0 == Tok::Newline {
                i += 1;
                continue;
            }
            if seen == offset || item.0 == Tok::Eof {
                return item;
            }
            seen += 1;
            i += 1;
        }
    }

    fn peek(&self) -> &Tok {
        &self.peek_raw(0).0
    }

    fn pos(&self) -> Pos {
        self.peek_raw(0).1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        while self.depth > 0 && self.tokens[self.index].0 == Tok::Newline {
            self.index += 1;
        }
        let item = self.tokens[self.index].clone();
        if item.0 != Tok::Eof {
            self.index += 1;
        }
        item
    }

    fn skip_newlines(&mut self) {
        while self.tokens[self.index].0 == Tok::Newline {
            self.index += 1;
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let (tok, pos) = self.peek_raw(0);
        syntax(*pos, format!("unexpected {}", tok.describe()), expected.iter().map(|s| (*s).to_owned()).collect())
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&[&tok.describe()]))
        }
    }

    fn expect_name(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Name(n) => {
                let pos = self.bump().1;
                Ok((n, pos))
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn file(&mut self) -> Result<(Vec<RawDef>, Option<Expr>), ParseError> {
        let mut defs = Vec::new();
        self.skip_newlines();
        while self.at_definition() {
            defs.push(self.definition()?);
            self.skip_newlines();
        }
        if *self.peek() == Tok::Eof {
            return Ok((defs, None));
        }
        let main = self.expr()?;
        self.skip_newlines();
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected(&["end of input"]));
        }
        Ok((defs, Some(main)))
    }

    fn at_definition(&self) -> bool {
        matches!(self.peek(), Tok::Name(_)) && matches!(self.peek_raw(1).0, Tok::Equals | Tok::Alpha)
    }

    fn definition(&mut self) -> Result<RawDef, ParseError> {
        let (name, pos) = self.expect_name("process name")?;
        let alphabet = if *self.peek() == Tok::Alpha {
            self.bump();
            Some(self.name_set()?)
        } else {
            None
        };
        self.expect(Tok::Equals)?;
        let body = self.expr()?;
        match self.peek() {
            Tok::Newline | Tok::Eof => {}
            _ => return Err(self.unexpected(&["end of line"])),
        }
        Ok(RawDef { name, pos, alphabet, body })
    }

    fn name_set(&mut self) -> Result<NameSet, ParseError> {
        self.expect(Tok::LBrace)?;
        self.depth += 1;
        let mut names = alloc::vec![self.expect_name("event name")?];
        while *self.peek() == Tok::Comma {
            self.bump();
            names.push(self.expect_name("event name")?);
        }
        self.expect(Tok::RBrace)?;
        self.depth -= 1;
        Ok(names)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.choice()?;
        loop {
            let annotation = match self.peek() {
                Tok::DoubleBar => {
                    self.bump();
                    None
                }
                Tok::LBracket => {
                    self.bump();
                    self.depth += 1;
                    let l = self.name_set_or_empty()?;
                    self.expect(Tok::DoubleBar)?;
                    let r = self.name_set_or_empty()?;
                    self.expect(Tok::RBracket)?;
                    self.depth -= 1;
                    Some((l, r))
                }
                _ => return Ok(left),
            };
            let right = self.choice()?;
            let pos = left.pos;
            left = Expr { pos, kind: ExprKind::Parallel(Box::new(left), Box::new(right), annotation) };
        }
    }

    fn name_set_or_empty(&mut self) -> Result<NameSet, ParseError> {
        if *self.peek() == Tok::LBrace && self.peek_raw(1).0 == Tok::RBrace {
            self.bump();
            self.bump();
            return Ok(Vec::new());
        }
        self.name_set()
    }

    fn choice(&mut self) -> Result<Expr, ParseError> {
        let first = self.prefix()?;
        if *self.peek() != Tok::Bar {
            return Ok(first);
        }
        let pos = first.pos;
        let mut alternatives = alloc::vec![first];
        while *self.peek() == Tok::Bar {
            self.bump();
            alternatives.push(self.prefix()?);
        }
        Ok(Expr { pos, kind: ExprKind::Choice(alternatives) })
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let event = match self.peek().clone() {
            Tok::Nil => Some(Event::Nil),
            Tok::Tick => Some(Event::Tick),
            Tok::Name(n) if self.peek_raw(1).0 == Tok::Arrow => {
                Some(Event::Named(Name::new(n).expect("lexer yields identifiers")))
            }
            _ => None,
        };
        match event {
            Some(event) => {
                self.bump();
                self.expect(Tok::Arrow)?;
                let rest = self.prefix()?;
                Ok(Expr { pos, kind: ExprKind::Prefix(event, Box::new(rest)) })
            }
            None => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Stop => {
                self.bump();
                ExprKind::Stop
            }
            Tok::Skip => {
                self.bump();
                ExprKind::Skip
            }
            Tok::Name(n) => {
                self.bump();
                ExprKind::Name(n)
            }
            Tok::Mu => {
                self.bump();
                let (binder, _) = self.expect_name("recursion variable")?;
                self.expect(Tok::Dot)?;
                let body = self.expr()?;
                ExprKind::Mu(binder, Box::new(body))
            }
            Tok::LParen => {
                self.bump();
                self.depth += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                self.depth -= 1;
                return Ok(inner);
            }
            _ => return Err(self.unexpected(&EXPR_START)),
        };
        Ok(Expr { pos, kind })
    }
}

struct Resolver<'a> {
    defs: &'a BTreeSet<&'a str>,
}

impl Resolver<'_> {
    fn term(&self, expr: &Expr, scope: &mut Vec<String>) -> Result<ProcessTerm, ParseError> {
        Ok(match &expr.kind {
            ExprKind::Prefix(event, rest) => ProcessTerm::prefix(event.clone(), self.term(rest, scope)?),
            ExprKind::Choice(alternatives) => {
                let mut branches = Vec::with_capacity(alternatives.len());
                for alt in alternatives {
                    match &alt.kind {
                        ExprKind::Prefix(guard, rest) => {
                            branches.push((guard.clone(), self.term(rest, scope)?));
                        }
                        _ => {
                            return Err(resolution(alt.pos, "every alternative of `|` must start with an event".into()))
                        }
                    }
                }
                ProcessTerm::choice(branches).map_err(|e| term_error(e, expr.pos))?
            }
            ExprKind::Parallel(left, right, annotation) => ProcessTerm::Parallel {
                left: Box::new(self.term(left, scope)?),
                right: Box::new(self.term(right, scope)?),
                alphabets: match annotation {
                    None => None,
                    Some((l, r)) => Some(Box::new(SyncAlphabets { left: alphabet(l)?, right: alphabet(r)? })),
                },
            },
            ExprKind::Mu(binder, body) => {
                if self.defs.contains(binder.as_str()) {
                    return Err(resolution(
                        expr.pos,
                        format!("recursion variable `{binder}` clashes with a process definition"),
                    ));
                }
                scope.push(binder.clone());
                let body = self.term(body, scope);
                scope.pop();
                ProcessTerm::mu(Name::new(binder.as_str()).expect("lexer yields identifiers"), body?)
            }
            ExprKind::Name(n) => {
                let name = Name::new(n.as_str()).expect("lexer yields identifiers");
                if self.defs.contains(n.as_str()) {
                    ProcessTerm::Ref(name)
                } else if scope.iter().any(|s| s == n) {
                    ProcessTerm::Var(name)
                } else {
                    return Err(resolution(expr.pos, format!("unbound name `{n}`")));
                }
            }
            ExprKind::Stop => ProcessTerm::StopLit,
            ExprKind::Skip => ProcessTerm::SkipLit,
        })
    }
}

fn alphabet(names: &[(String, Pos)]) -> Result<Alphabet, ParseError> {
    let mut out = Alphabet::new();
    for (n, pos) in names {
        let name = Name::new(n.as_str()).map_err(|e| resolution(*pos, e.to_string()))?;
        out.insert_name(name);
    }
    Ok(out)
}

fn resolve_file(raw_defs: Vec<RawDef>, raw_main: Option<Expr>) -> Result<SourceFile, ParseError> {
    let names: BTreeSet<&str> = raw_defs.iter().map(|d| d.name.as_str()).collect();
    let resolver = Resolver { defs: &names };
    let mut definitions = Definitions::new();
    let mut positions = Vec::new();

    for raw in &raw_defs {
        let name = Name::new(raw.name.as_str()).expect("lexer yields identifiers");
        let body = resolver.term(&raw.body, &mut Vec::new())?;
        let alphabet = raw.alphabet.as_deref().map(alphabet).transpose()?;
        definitions.insert(name.clone(), alphabet, body).map_err(|e| resolution(raw.pos, e.to_string()))?;
        positions.push((name, raw.pos));
    }

    definitions.validate().map_err(|e| {
        let culprit = match &e {
            DefinitionError::Duplicate(n)
            | DefinitionError::Unresolved { definition: n, .. }
            | DefinitionError::OutsideAlphabet { definition: n, .. }
            | DefinitionError::Term { definition: n, .. } => Some(n),
            DefinitionError::UnguardedCycle(cycle) => cycle.first(),
        };
        let pos = culprit
            .and_then(|n| positions.iter().find(|(m, _)| m == n).map(|(_, p)| *p))
            .unwrap_or(Pos { line: 1, column: 1 });
        resolution(pos, e.to_string())
    })?;

    let main = match raw_main {
        None => None,
        Some(expr) => {
            let term = resolver.term(&expr, &mut Vec::new())?;
            term.validate().map_err(|e| term_error(e, expr.pos))?;
            Some(term)
        }
    };
    Ok(SourceFile { definitions, main })
}
