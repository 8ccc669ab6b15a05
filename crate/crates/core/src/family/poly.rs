//! Sparse integer polynomials in `x1..xq, y1..yq` and the family-spec text grammar.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exponent vector over `(x1..xq, y1..yq)` mapped to a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    fn add_term(&mut self, exp: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, BigInt::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// One comparison statement from a family-spec document.
#[derive(Clone, Debug)]
pub struct Statement {
    pub lhs: Poly,
    pub op: Comparison,
    pub rhs: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

/// Splits a document into `(line, column offset, text)` statements, honoring `#` comments
/// and `;` separators.
fn statements(text: &str) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for piece in line.split(';') {
            if !piece.trim().is_empty() {
                out.push((i + 1, offset, piece));
            }
            offset += piece.len() + 1;
        }
    }
    out
}

/// Parses the header and all comparison statements.
pub fn parse_document(text: &str) -> Result<(usize, Vec<Statement>)> {
    let stmts = statements(text);
    let Some(&(line, col, head)) = stmts.first() else {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "empty document; expected `q=<int>`".into(),
        });
    };
    let q = parse_header(head).ok_or_else(|| Error::Syntax {
        line,
        column: col + 1,
        message: "expected `q=<positive int>`".into(),
    })?;
    let mut out = Vec::new();
    for &(line, col, body) in &stmts[1..] {
        let mut p = Parser::new(body, q, line, col);
        out.push(p.statement()?);
    }
    if out.is_empty() {
        return Err(Error::Syntax {
            line,
            column: col + 1,
            message: "no inequality follows the header".into(),
        });
    }
    Ok((q, out))
}

fn parse_header(s: &str) -> Option<usize> {
    let (k, v) = s.split_once('=')?;
    if k.trim() != "q" {
        return None;
    }
    let q: usize = v.trim().parse().ok()?;
    (q > 0).then_some(q)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Cmp(Comparison),
    BadVar,
    Invalid,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    nvars: usize,
    line: usize,
    col: usize,
    end_col: usize,
}

impl Parser {
    fn new(src: &str, q: usize, line: usize, col: usize) -> Self {
        let mut p = Parser {
            toks: Vec::new(),
            pos: 0,
            nvars: 2 * q,
            line,
            col,
            end_col: src.len(),
        };
        p.lex_into(src, q);
        p
    }

    fn err(&self, at: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.col + at + 1,
            message: message.into(),
        }
    }

    fn lex_into(&mut self, src: &str, q: usize) {
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let start = i;
            let tok = match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                    continue;
                }
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '>' | '<' | '=' => {
                    let next = bytes.get(i + 1).map(|&b| b as char);
                    let (op, len) = match (c, next) {
                        ('>', Some('=')) => (Comparison::Ge, 2),
                        ('<', Some('=')) => (Comparison::Le, 2),
                        ('=', Some('=')) => (Comparison::Eq, 2),
                        ('>', _) => (Comparison::Gt, 1),
                        ('<', _) => (Comparison::Lt, 1),
                        _ => {
                            self.toks.push((start, Tok::Invalid));
                            i += 1;
                            continue;
                        }
                    };
                    i += len;
                    self.toks.push((start, Tok::Cmp(op)));
                    continue;
                }
                '0'..='9' => {
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    self.toks
                        .push((start, Tok::Num(src[start..i].parse().unwrap())));
                    continue;
                }
                'x' | 'y' => {
                    i += 1;
                    let ds = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let idx: usize = src[ds..i].parse().unwrap_or(0);
                    if idx == 0 || idx > q {
                        self.toks.push((start, Tok::BadVar));
                    } else {
                        let base = if c == 'x' { 0 } else { q };
                        self.toks.push((start, Tok::Var(base + idx - 1)));
                    }
                    continue;
                }
                _ => {
                    self.toks.push((start, Tok::Invalid));
                    i += 1;
                    continue;
                }
            };
            self.toks.push((start, tok));
            i += 1;
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn statement(&mut self) -> Result<Statement> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Some(Tok::Cmp(op)) => *op,
            _ => return Err(self.err(self.at(), "expected one of >=, >, <=, <, ==")),
        };
        self.pos += 1;
        let rhs = self.expr()?;
        if self.pos < self.toks.len() {
            return Err(self.err(self.at(), "unexpected trailing input"));
        }
        Ok(Statement { lhs, op, rhs })
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                // juxtaposition such as `2x1` or `(x1)(y1)`
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let at = self.at();
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k: u32 = k
                        .try_into()
                        .ok()
                        .filter(|&k: &u32| k <= 64)
                        .ok_or_else(|| self.err(at, "exponent too large"))?;
                    Ok(base.pow(k))
                }
                _ => Err(self.err(at, "expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.at();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.nvars, n))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Poly::var(self.nvars, v))
            }
            Some(Tok::BadVar) => Err(self.err(at, "variable index out of range for this q")),
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err(self.at(), "expected `)`")),
                }
            }
            None => Err(self.err(at, "unexpected end of expression")),
            _ => Err(self.err(at, "unexpected token")),
        }
    }
}
