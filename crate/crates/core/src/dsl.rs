//! The ring-spec language and the raw table file format.
//!
//! ```text
//! ring S = uppertri(gf(2), 2)
//! ring Q = matrix(gf(3), 2) with involution transpose
//! module M over S = sum(free(1), cyclic(2))
//! ```
//!
//! One statement per line (`;` also separates statements, `#` starts a comment).

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::ring::{RingError, RingTables};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown constructor `{name}` at {line}:{column}")]
    UnknownConstructor { name: String, line: usize, column: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawSource {
    /// Path to a raw-table file, relative to the including file.
    File(String),
    /// Tables held in memory (builtin members); printed as a file reference
    /// only after the catalog writer has materialized them.
    Inline(Box<RingTables>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingExpr {
    Zmod(usize),
    Gf { p: usize, k: usize },
    Matrix(Box<RingExpr>, usize),
    UpperTri(Box<RingExpr>, usize),
    Product(Box<RingExpr>, Box<RingExpr>),
    Opposite(Box<RingExpr>),
    Raw(RawSource),
    Ref(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvolutionKind {
    Identity,
    Transpose,
    Swap,
    Raw(Vec<u32>),
}

/// A ring expression plus an optional involution clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    pub expr: RingExpr,
    pub involution: Option<InvolutionKind>,
}

impl RingSpec {
    pub fn plain(expr: RingExpr) -> Self {
        RingSpec { expr, involution: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleExpr {
    Free(usize),
    /// `R / I` where `I` is the right ideal generated by these elements.
    Cyclic(Vec<usize>),
    Sum(Vec<ModuleExpr>),
    Ref(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Ring { name: String, spec: RingSpec },
    Module { name: String, ring: String, expr: ModuleExpr },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub statements: Vec<Statement>,
}

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Str(String),
    LParen,
    RParen,
    Comma,
    Eq,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

fn lex_statement(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = col0 + i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => out.push(Token { tok: Tok::LParen, line, column }),
            ')' => out.push(Token { tok: Tok::RParen, line, column }),
            ',' => out.push(Token { tok: Tok::Comma, line, column }),
            '=' => out.push(Token { tok: Tok::Eq, line, column }),
            '"' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '"' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(syntax(line, column, "unterminated string"));
                }
                out.push(Token { tok: Tok::Str(chars[start..j].iter().collect()), line, column });
                i = j + 1;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().collect();
                let value = digits
                    .parse()
                    .map_err(|_| syntax(line, column, "integer out of range"))?;
                out.push(Token { tok: Tok::Int(value), line, column });
                i = j;
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                    j += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[i..j].iter().collect()), line, column });
                i = j;
                continue;
            }
            other => return Err(syntax(line, column, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    out.push(Token { tok: Tok::End, line, column: col0 + chars.len() });
    Ok(out)
}

// ---------------------------------------------------------------- parser

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        syntax(t.line, t.column, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek().tok == want {
            self.next();
            Ok(())
        } else {
            Err(self.err_here(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.err_here(format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            _ => Err(self.err_here(format!("expected `{kw}`"))),
        }
    }

    fn int(&mut self) -> Result<usize, ParseError> {
        match self.peek().tok {
            Tok::Int(v) => {
                self.next();
                Ok(v)
            }
            _ => Err(self.err_here("expected an integer")),
        }
    }

    fn at_end(&self) -> bool {
        self.peek().tok == Tok::End
    }

    fn ring_spec(&mut self) -> Result<RingSpec, ParseError> {
        let expr = self.ring_expr()?;
        let involution = if self.at_end() {
            None
        } else {
            self.keyword("with")?;
            self.keyword("involution")?;
            Some(self.involution()?)
        };
        Ok(RingSpec { expr, involution })
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let head = self.peek().clone();
        match self.ident("`ring` or `module`")?.as_str() {
            "ring" => {
                let name = self.ident("a ring name")?;
                self.expect(Tok::Eq, "`=`")?;
                Ok(Statement::Ring { name, spec: self.ring_spec()? })
            }
            "module" => {
                let name = self.ident("a module name")?;
                self.keyword("over")?;
                let ring = self.ident("a ring name")?;
                self.expect(Tok::Eq, "`=`")?;
                let expr = self.module_expr()?;
                Ok(Statement::Module { name, ring, expr })
            }
            _ => Err(syntax(head.line, head.column, "expected `ring` or `module`")),
        }
    }

    fn ring_expr(&mut self) -> Result<RingExpr, ParseError> {
        let head = self.peek().clone();
        let name = self.ident("a ring expression")?;
        if self.peek().tok != Tok::LParen {
            return Ok(RingExpr::Ref(name));
        }
        self.next();
        let expr = match name.as_str() {
            "zmod" => RingExpr::Zmod(self.int()?),
            "gf" => {
                let p = self.int()?;
                let k = if self.peek().tok == Tok::Comma {
                    self.next();
                    self.int()?
                } else {
                    1
                };
                RingExpr::Gf { p, k }
            }
            "matrix" | "uppertri" => {
                let base = self.ring_expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let k = self.int()?;
                if name == "matrix" {
                    RingExpr::Matrix(Box::new(base), k)
                } else {
                    RingExpr::UpperTri(Box::new(base), k)
                }
            }
            "product" => {
                let a = self.ring_expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.ring_expr()?;
                RingExpr::Product(Box::new(a), Box::new(b))
            }
            "opposite" => RingExpr::Opposite(Box::new(self.ring_expr()?)),
            "raw" => match self.next().tok {
                Tok::Str(path) => RingExpr::Raw(RawSource::File(path)),
                _ => return Err(syntax(head.line, head.column, "raw expects a quoted file name")),
            },
            _ => {
                return Err(ParseError::UnknownConstructor {
                    name,
                    line: head.line,
                    column: head.column,
                })
            }
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(expr)
    }

    fn involution(&mut self) -> Result<InvolutionKind, ParseError> {
        let head = self.peek().clone();
        match self.ident("an involution kind")?.as_str() {
            "identity" => Ok(InvolutionKind::Identity),
            "transpose" => Ok(InvolutionKind::Transpose),
            "swap" => Ok(InvolutionKind::Swap),
            "raw" => {
                self.expect(Tok::LParen, "`(`")?;
                let mut table = vec![self.int()? as u32];
                while self.peek().tok == Tok::Comma {
                    self.next();
                    table.push(self.int()? as u32);
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(InvolutionKind::Raw(table))
            }
            other => Err(syntax(head.line, head.column, format!("unknown involution `{other}`"))),
        }
    }

    fn module_expr(&mut self) -> Result<ModuleExpr, ParseError> {
        let head = self.peek().clone();
        let name = self.ident("a module expression")?;
        if self.peek().tok != Tok::LParen {
            return Ok(ModuleExpr::Ref(name));
        }
        self.next();
        let expr = match name.as_str() {
            "free" => ModuleExpr::Free(self.int()?),
            "cyclic" => {
                let mut gens = Vec::new();
                if self.peek().tok != Tok::RParen {
                    gens.push(self.int()?);
                    while self.peek().tok == Tok::Comma {
                        self.next();
                        gens.push(self.int()?);
                    }
                }
                ModuleExpr::Cyclic(gens)
            }
            "sum" => {
                let mut parts = vec![self.module_expr()?];
                while self.peek().tok == Tok::Comma {
                    self.next();
                    parts.push(self.module_expr()?);
                }
                ModuleExpr::Sum(parts)
            }
            _ => {
                return Err(ParseError::UnknownConstructor {
                    name,
                    line: head.line,
                    column: head.column,
                })
            }
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(expr)
    }
}

/// Split a program into `(line, column, text)` statement fragments.
fn fragments(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    text.lines().enumerate().flat_map(|(ln, line)| {
        let line = line.split('#').next().unwrap_or("");
        let mut col = 1;
        line.split(';')
            .map(move |frag| {
                let start = col;
                col += frag.chars().count() + 1;
                (ln + 1, start, frag)
            })
            .filter(|(_, _, frag)| !frag.trim().is_empty())
            .collect::<Vec<_>>()
    })
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut statements = Vec::new();
    for (line, col, frag) in fragments(text) {
        let toks = lex_statement(frag, line, col)?;
        let mut p = Parser { toks, pos: 0 };
        let stmt = p.statement()?;
        if !p.at_end() {
            return Err(p.err_here("unexpected trailing input"));
        }
        statements.push(stmt);
    }
    Ok(Program { statements })
}

/// Parse one `ring` statement, or a bare spec (`expr [with involution kind]`).
pub fn parse_spec(text: &str) -> Result<RingSpec, ParseError> {
    let trimmed = text.trim();
    if trimmed.starts_with("ring ") || trimmed.starts_with("ring\t") {
        let program = parse_program(trimmed)?;
        match program.statements.as_slice() {
            [Statement::Ring { spec, .. }] => Ok(spec.clone()),
            _ => Err(syntax(1, 1, "expected exactly one ring statement")),
        }
    } else {
        let toks = lex_statement(trimmed, 1, 1)?;
        let mut p = Parser { toks, pos: 0 };
        let spec = p.ring_spec()?;
        if !p.at_end() {
            return Err(p.err_here("unexpected trailing input"));
        }
        Ok(spec)
    }
}

pub fn parse_expr(text: &str) -> Result<RingExpr, ParseError> {
    let toks = lex_statement(text, 1, 1)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.ring_expr()?;
    if !p.at_end() {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_module_expr(text: &str) -> Result<ModuleExpr, ParseError> {
    let toks = lex_statement(text, 1, 1)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.module_expr()?;
    if !p.at_end() {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(e)
}

// ---------------------------------------------------------------- printer

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Zmod(n) => write!(f, "zmod({n})"),
            RingExpr::Gf { p, k: 1 } => write!(f, "gf({p})"),
            RingExpr::Gf { p, k } => write!(f, "gf({p}, {k})"),
            RingExpr::Matrix(b, k) => write!(f, "matrix({b}, {k})"),
            RingExpr::UpperTri(b, k) => write!(f, "uppertri({b}, {k})"),
            RingExpr::Product(a, b) => write!(f, "product({a}, {b})"),
            RingExpr::Opposite(a) => write!(f, "opposite({a})"),
            RingExpr::Raw(RawSource::File(p)) => write!(f, "raw(\"{p}\")"),
            RingExpr::Raw(RawSource::Inline(t)) => write!(f, "raw(<inline order {}>)", t.order),
            RingExpr::Ref(name) => write!(f, "{name}"),
        }
    }
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvolutionKind::Identity => write!(f, "identity"),
            InvolutionKind::Transpose => write!(f, "transpose"),
            InvolutionKind::Swap => write!(f, "swap"),
            InvolutionKind::Raw(t) => {
                let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                write!(f, "raw({})", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)?;
        if let Some(inv) = &self.involution {
            write!(f, " with involution {inv}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleExpr::Free(k) => write!(f, "free({k})"),
            ModuleExpr::Cyclic(g) => {
                let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                write!(f, "cyclic({})", parts.join(", "))
            }
            ModuleExpr::Sum(parts) => {
                let parts: Vec<String> = parts.iter().map(|x| x.to_string()).collect();
                write!(f, "sum({})", parts.join(", "))
            }
            ModuleExpr::Ref(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Ring { name, spec } => write!(f, "ring {name} = {spec}"),
            Statement::Module { name, ring, expr } => write!(f, "module {name} over {ring} = {expr}"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- raw tables

/// Parse the raw-table format: `order n`, `add` + n rows, `mul` + n rows,
/// optionally `star` + one row.
pub fn parse_raw_tables(text: &str) -> Result<RingTables, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let ints = |ln: usize, l: &str| -> Result<Vec<u32>, String> {
        l.split_whitespace()
            .map(|w| w.parse::<u32>().map_err(|_| format!("line {ln}: bad integer `{w}`")))
            .collect()
    };
    let (ln, header) = lines.next().ok_or("empty table file")?;
    let order: usize = header
        .strip_prefix("order")
        .and_then(|r| r.trim().parse().ok())
        .ok_or(format!("line {ln}: expected `order n`"))?;
    let mut table = |name: &str| -> Result<Vec<u32>, String> {
        let (ln, l) = lines.next().ok_or(format!("missing `{name}` section"))?;
        if l != name {
            return Err(format!("line {ln}: expected `{name}`"));
        }
        let mut out = Vec::with_capacity(order * order);
        for _ in 0..order {
            let (ln, l) = lines.next().ok_or(format!("`{name}` table is truncated"))?;
            let row = ints(ln, l)?;
            if row.len() != order {
                return Err(format!("line {ln}: expected {order} entries"));
            }
            out.extend(row);
        }
        Ok(out)
    };
    let add = table("add")?;
    let mul = table("mul")?;
    let star = match lines.next() {
        None => None,
        Some((ln, "star")) => {
            let (ln2, l) = lines.next().ok_or(format!("line {ln}: missing star row"))?;
            let row = ints(ln2, l)?;
            if row.len() != order {
                return Err(format!("line {ln2}: expected {order} entries"));
            }
            Some(row)
        }
        Some((ln, _)) => return Err(format!("line {ln}: unexpected content")),
    };
    if let Some((ln, _)) = lines.next() {
        return Err(format!("line {ln}: unexpected content"));
    }
    Ok(RingTables { order, add, mul, star })
}

pub fn format_raw_tables(t: &RingTables) -> String {
    let n = t.order;
    let row = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("order {n}\nadd\n");
    for r in t.add.chunks(n) {
        out.push_str(&row(r));
        out.push('\n');
    }
    out.push_str("mul\n");
    for r in t.mul.chunks(n) {
        out.push_str(&row(r));
        out.push('\n');
    }
    if let Some(s) = &t.star {
        out.push_str("star\n");
        out.push_str(&row(s));
        out.push('\n');
    }
    out
}

pub fn read_raw_tables(path: &Path) -> Result<RingTables, RingError> {
    let text = std::fs::read_to_string(path).map_err(|e| RingError::File {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_raw_tables(&text).map_err(|message| RingError::File {
        path: path.display().to_string(),
        message,
    })
}
