//! Formulas of the quantum language: abstract syntax, parser and printer.
//!
//! Concrete syntax (ASCII):
//!
//! | token | meaning                     |
//! |-------|-----------------------------|
//! | `~`   | negation                    |
//! | `&`   | conjunction                 |
//! | `&>`  | sequential conjunction      |
//! | `\|`  | disjunction                 |
//! | `->`  | implication (right assoc.)  |
//! | `1`   | always-true proposition     |
//! | `0`   | always-false proposition    |
//!
//! `&` and `&>` share a precedence level and associate to the left, but a
//! chain may not mix them without parentheses.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Words that match the identifier class but may not name a proposition.
pub const RESERVED_WORDS: &[&str] = &["V", "true", "false"];

const MAX_DEPTH: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", content = "args", rename_all = "snake_case")]
pub enum Formula {
    Elementary(String),
    Top,
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Seq(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Elementary(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn seq(l: Formula, r: Formula) -> Self {
        Formula::Seq(Box::new(l), Box::new(r))
    }

    /// Names of the elementary propositions occurring in the formula.
    pub fn elementaries(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_elementaries(&mut out);
        out
    }

    fn collect_elementaries(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Elementary(name) => {
                out.insert(name.clone());
            }
            Formula::Top | Formula::Bottom => {}
            Formula::Not(c) => c.collect_elementaries(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Seq(l, r) => {
                l.collect_elementaries(out);
                r.collect_elementaries(out);
            }
        }
    }

    /// True if a sequential conjunction occurs anywhere in the tree.
    pub fn contains_seq(&self) -> bool {
        match self {
            Formula::Seq(..) => true,
            Formula::Elementary(_) | Formula::Top | Formula::Bottom => false,
            Formula::Not(c) => c.contains_seq(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.contains_seq() || r.contains_seq()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Elementary(_) | Formula::Top | Formula::Bottom => 1,
            Formula::Not(c) => 1 + c.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Seq(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Multi-line indented tree dump, one node per line.
    pub fn tree(&self) -> String {
        let mut out = String::new();
        self.write_tree(&mut out, 0);
        out
    }

    fn write_tree(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        let (head, kids): (String, Vec<&Formula>) = match self {
            Formula::Elementary(n) => (format!("Elementary {n}"), vec![]),
            Formula::Top => ("Top".into(), vec![]),
            Formula::Bottom => ("Bottom".into(), vec![]),
            Formula::Not(c) => ("Not".into(), vec![c]),
            Formula::And(l, r) => ("And".into(), vec![l, r]),
            Formula::Or(l, r) => ("Or".into(), vec![l, r]),
            Formula::Implies(l, r) => ("Implies".into(), vec![l, r]),
            Formula::Seq(l, r) => ("Seq".into(), vec![l, r]),
        };
        out.push_str(&pad);
        out.push_str(&head);
        out.push('\n');
        for k in kids {
            k.write_tree(out, indent + 1);
        }
    }
}

// Binding strength, higher binds tighter.
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_CONJ: u8 = 3;
const PREC_UNARY: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => PREC_IMPLIES,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) | Formula::Seq(..) => PREC_CONJ,
        _ => PREC_UNARY,
    }
}

/// Prints with the fewest parentheses that still parse back to the same tree.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_wrapped(f: &Formula, wrap: bool, out: &mut String) {
    if wrap {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Elementary(n) => out.push_str(n),
        Formula::Top => out.push('1'),
        Formula::Bottom => out.push('0'),
        Formula::Not(c) => {
            out.push('~');
            write_wrapped(c, prec(c) < PREC_UNARY, out);
        }
        Formula::Implies(l, r) => {
            write_wrapped(l, prec(l) <= PREC_IMPLIES, out);
            out.push_str(" -> ");
            write_wrapped(r, false, out);
        }
        Formula::Or(l, r) => {
            write_wrapped(l, prec(l) < PREC_OR, out);
            out.push_str(" | ");
            write_wrapped(r, prec(r) <= PREC_OR, out);
        }
        Formula::And(l, r) => {
            // a left operand at conjunction level must be the same connective
            let wrap_l = prec(l) < PREC_CONJ || matches!(**l, Formula::Seq(..));
            write_wrapped(l, wrap_l, out);
            out.push_str(" & ");
            write_wrapped(r, prec(r) <= PREC_CONJ, out);
        }
        Formula::Seq(l, r) => {
            let wrap_l = prec(l) < PREC_CONJ || matches!(**l, Formula::And(..));
            write_wrapped(l, wrap_l, out);
            out.push_str(" &> ");
            write_wrapped(r, prec(r) <= PREC_CONJ, out);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected {found}, expected {expected}")]
    UnexpectedToken { found: String, expected: &'static str },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("reserved word {0:?} cannot name a proposition (use 1 or 0 for the constants)")]
    ReservedWord(String),
    #[error("mixing '&' and '&>' requires parentheses")]
    MixedConjunction,
    #[error("nesting deeper than {MAX_DEPTH} levels")]
    TooDeep,
}

/// Syntax error with the byte offset at which it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Seq,
    Or,
    Implies,
    Top,
    Bottom,
    Ident(String),
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Not => "'~'".into(),
            Tok::And => "'&'".into(),
            Tok::Seq => "'&>'".into(),
            Tok::Or => "'|'".into(),
            Tok::Implies => "'->'".into(),
            Tok::Top => "'1'".into(),
            Tok::Bottom => "'0'".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let err = |kind| ParseError { position: pos, kind };
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '~' => {
                chars.next();
                toks.push((pos, Tok::Not));
            }
            '|' => {
                chars.next();
                toks.push((pos, Tok::Or));
            }
            '(' => {
                chars.next();
                toks.push((pos, Tok::LParen));
            }
            ')' => {
                chars.next();
                toks.push((pos, Tok::RParen));
            }
            '&' => {
                chars.next();
                if matches!(chars.peek(), Some(&(_, '>'))) {
                    chars.next();
                    toks.push((pos, Tok::Seq));
                } else {
                    toks.push((pos, Tok::And));
                }
            }
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        toks.push((pos, Tok::Implies));
                    }
                    _ => return Err(err(ParseErrorKind::UnexpectedChar('-'))),
                }
            }
            '0' | '1' => {
                chars.next();
                if let Some(&(p2, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        return Err(ParseError {
                            position: p2,
                            kind: ParseErrorKind::UnexpectedChar(d),
                        });
                    }
                }
                toks.push((pos, if c == '1' { Tok::Top } else { Tok::Bottom }));
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = pos;
                while let Some(&(p, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = p + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let word = &input[pos..end];
                if RESERVED_WORDS.contains(&word) {
                    return Err(err(ParseErrorKind::ReservedWord(word.to_string())));
                }
                toks.push((pos, Tok::Ident(word.to_string())));
            }
            other => return Err(err(ParseErrorKind::UnexpectedChar(other))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((p, t)) => ParseError {
                position: *p,
                kind: ParseErrorKind::UnexpectedToken { found: t.describe(), expected },
            },
            None => ParseError { position: self.end, kind: ParseErrorKind::UnexpectedEnd { expected } },
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError { position: self.offset(), kind: ParseErrorKind::TooDeep });
        }
        Ok(())
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let lhs = self.disjunction()?;
        let out = if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            Formula::implies(lhs, rhs)
        } else {
            lhs
        };
        self.depth -= 1;
        Ok(out)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        let mut chain: Option<Tok> = None;
        while let Some(op @ (Tok::And | Tok::Seq)) = self.peek().cloned() {
            if chain.as_ref().is_some_and(|c| *c != op) {
                return Err(ParseError {
                    position: self.offset(),
                    kind: ParseErrorKind::MixedConjunction,
                });
            }
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == Tok::And { Formula::and(acc, rhs) } else { Formula::seq(acc, rhs) };
            chain = Some(op);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            self.enter()?;
            self.pos += 1;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Formula::not(inner));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        const EXPECTED: &str = "a proposition";
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Bottom) => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::Elementary(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected("')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected(EXPECTED)),
        }
    }
}

/// Parses a formula; errors carry the byte offset of the offending token.
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, end: input.len(), depth: 0 };
    let f = p.implication()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}
