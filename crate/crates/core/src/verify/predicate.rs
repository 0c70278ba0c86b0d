//! Boolean predicates over ring flags: `abelian & !rickart | (CS & C2)`.
//!
//! Operators, tightest first: `!` / `¬` / `not`, `&` / `∧` / `and`,
//! `|` / `∨` / `or`, `->` / `⇒` (right associative), `<->` / `⟺`. A chain
//! `a <-> b <-> c` means all operands agree. Flag names are checked at parse time.

use std::fmt;

use thiserror::Error;

use crate::analysis::RingReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Flag(String),
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
    Implies(Box<Predicate>, Box<Predicate>),
    /// All operands have the same value.
    Iff(Vec<Predicate>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredicateError {
    #[error("unknown flag `{name}` at column {column}")]
    UnknownFlag { name: String, column: usize },
    #[error("unexpected {found} at column {column}")]
    Unexpected { found: String, column: usize },
    #[error("empty predicate")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PredicateError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 3;
                out.push((Tok::Iff, column));
                continue;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 2;
                out.push((Tok::Implies, column));
                continue;
            }
            '⇒' | '→' => Tok::Implies,
            '⟺' | '⇔' | '↔' => Tok::Iff,
            '!' | '¬' | '~' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '(' => Tok::Open,
            ')' => Tok::Close,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push((
                    match word.as_str() {
                        "not" => Tok::Not,
                        "and" => Tok::And,
                        "or" => Tok::Or,
                        _ => Tok::Name(word),
                    },
                    start + 1,
                ));
                continue;
            }
            other => return Err(PredicateError::Unexpected { found: format!("`{other}`"), column }),
        };
        // `&&` and `||` read as one operator
        if matches!(tok, Tok::And | Tok::Or) && chars.get(i + 1) == Some(&c) {
            i += 1;
        }
        out.push((tok, column));
        i += 1;
    }
    Ok(out)
}

struct Parser<'k> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    known: &'k dyn Fn(&str) -> bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn unexpected(&self) -> PredicateError {
        match self.toks.get(self.pos) {
            Some((t, c)) => PredicateError::Unexpected { found: format!("{t:?}"), column: *c },
            None => PredicateError::Unexpected { found: "end of input".into(), column: self.end },
        }
    }

    fn iff(&mut self) -> Result<Predicate, PredicateError> {
        let first = self.implies()?;
        if self.peek() != Some(&Tok::Iff) {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            parts.push(self.implies()?);
        }
        Ok(Predicate::Iff(parts))
    }

    fn implies(&mut self) -> Result<Predicate, PredicateError> {
        let lhs = self.or()?;
        if self.peek() != Some(&Tok::Implies) {
            return Ok(lhs);
        }
        self.pos += 1;
        Ok(Predicate::Implies(Box::new(lhs), Box::new(self.implies()?)))
    }

    fn or(&mut self) -> Result<Predicate, PredicateError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Predicate::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Predicate, PredicateError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Predicate::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Predicate, PredicateError> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Not, _)) => {
                self.pos += 1;
                Ok(Predicate::Not(Box::new(self.unary()?)))
            }
            Some((Tok::Open, _)) => {
                self.pos += 1;
                let inner = self.iff()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some((Tok::Name(name), column)) => {
                if !(self.known)(&name) {
                    return Err(PredicateError::UnknownFlag { name, column });
                }
                self.pos += 1;
                Ok(Predicate::Flag(name))
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parse over the ring flag vocabulary of [`RingReport::known_flags`].
pub fn parse_predicate(text: &str) -> Result<Predicate, PredicateError> {
    let flags = RingReport::known_flags();
    parse_predicate_in(text, &|name| flags.contains(&name))
}

/// Parse with a caller-supplied vocabulary.
pub fn parse_predicate_in(text: &str, known: &dyn Fn(&str) -> bool) -> Result<Predicate, PredicateError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(PredicateError::Empty);
    }
    let mut p = Parser { toks, pos: 0, end: text.chars().count() + 1, known };
    let pred = p.iff()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(pred)
}

impl Predicate {
    /// Evaluate with `lookup`; a flag the ring does not carry (a star flag on a
    /// ring without involution) counts as false.
    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<bool>) -> bool {
        match self {
            Predicate::Flag(name) => lookup(name).unwrap_or(false),
            Predicate::Not(p) => !p.eval(lookup),
            Predicate::And(a, b) => a.eval(lookup) && b.eval(lookup),
            Predicate::Or(a, b) => a.eval(lookup) || b.eval(lookup),
            Predicate::Implies(a, b) => !a.eval(lookup) || b.eval(lookup),
            Predicate::Iff(parts) => {
                let first = parts[0].eval(lookup);
                parts[1..].iter().all(|p| p.eval(lookup) == first)
            }
        }
    }

    pub fn eval_report(&self, report: &RingReport) -> bool {
        self.eval(&|name| report.flag(name).map(|f| f.holds))
    }

    /// Flag names in order of first appearance.
    pub fn flags(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Predicate::Flag(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
            Predicate::Not(p) => p.collect(out),
            Predicate::And(a, b) | Predicate::Or(a, b) | Predicate::Implies(a, b) => {
                a.collect(out);
                b.collect(out);
            }
            Predicate::Iff(parts) => parts.iter().for_each(|p| p.collect(out)),
        }
    }

    /// True when evaluation needs an involution.
    pub fn mentions_star(&self) -> bool {
        self.flags().iter().any(|f| RingReport::is_star_flag(f))
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(p: &Predicate, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match p {
                Predicate::Flag(_) | Predicate::Not(_) => write!(f, "{p}"),
                _ => write!(f, "({p})"),
            }
        }
        match self {
            Predicate::Flag(n) => write!(f, "{n}"),
            Predicate::Not(p) => {
                write!(f, "!")?;
                atom(p, f)
            }
            Predicate::And(a, b) => {
                atom(a, f)?;
                write!(f, " & ")?;
                atom(b, f)
            }
            Predicate::Or(a, b) => {
                atom(a, f)?;
                write!(f, " | ")?;
                atom(b, f)
            }
            Predicate::Implies(a, b) => {
                atom(a, f)?;
                write!(f, " -> ")?;
                atom(b, f)
            }
            Predicate::Iff(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " <-> ")?;
                    }
                    atom(p, f)?;
                }
                Ok(())
            }
        }
    }
}
