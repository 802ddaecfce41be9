//! The group-ring file format: a ring header followed by one term per line,
//! round-trip exact including lifts.
//!
//! ```text
//! p: 2
//! h: 1 1 1
//! term: coeff=4 exp_in_S="0" lift="0"
//! term: coeff=12 exp_in_S="w" lift="w^2+2*w+1"
//! ```
//!
//! Blank lines and `#` comments are ignored. The reader rebuilds each term
//! from its lift and rejects terms whose lift does not reduce to the stated
//! `exp_in_S` class.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use qv_core::arith::{ArithError, GroundRing, IntLaurent};
use qv_core::invariant::GroupRingElement;

#[derive(Debug, Error)]
pub enum GroupRingIoError {
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Serializes a group-ring element, terms in their sorted order.
pub fn emit_groupring(g: &GroupRingElement) -> String {
    let ring = g.ring();
    let mut out = String::new();
    writeln!(out, "p: {}", ring.p()).unwrap();
    let h: Vec<String> = ring.h_coeffs().iter().map(|c| c.to_string()).collect();
    writeln!(out, "h: {}", h.join(" ")).unwrap();
    for t in g.terms() {
        writeln!(
            out,
            "term: coeff={} exp_in_S=\"{}\" lift=\"{}\"",
            t.coeff,
            ring.element_string(&t.class),
            t.lift
        )
        .unwrap();
    }
    out
}

pub fn write_groupring(g: &GroupRingElement, path: &Path) -> Result<(), GroupRingIoError> {
    std::fs::write(path, emit_groupring(g))?;
    Ok(())
}

pub fn read_groupring(path: &Path) -> Result<GroupRingElement, GroupRingIoError> {
    let text = std::fs::read_to_string(path)?;
    read_groupring_str(&text)
}

struct Cursor<'a> {
    line: usize,
    chars: Vec<char>,
    pos: usize,
    raw: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, raw: &'a str) -> Cursor<'a> {
        Cursor {
            line,
            chars: raw.chars().collect(),
            pos: 0,
            raw,
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> GroupRingIoError {
        GroupRingIoError::Parse {
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> Result<(), GroupRingIoError> {
        let start = self.pos;
        for want in lit.chars() {
            if self.peek() != Some(want) {
                return Err(self.err(
                    start + 1,
                    format!("expected '{lit}' in '{}'", self.raw.trim_end()),
                ));
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if pred(c)) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// Reads a `"`-delimited string, returning the content and its column.
    fn quoted(&mut self) -> Result<(String, usize), GroupRingIoError> {
        self.eat("\"")?;
        let col = self.col();
        let content = self.take_while(|c| c != '"');
        if self.peek() != Some('"') {
            return Err(self.err(col, "unterminated quoted string"));
        }
        self.pos += 1;
        Ok((content, col))
    }

    fn int<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, GroupRingIoError> {
        let col = self.col();
        let tok = self.take_while(|c| c == '-' || c == '+' || c.is_ascii_digit());
        tok.parse()
            .map_err(|_| self.err(col, format!("expected {what}, found '{tok}'")))
    }

    fn at_end(&self) -> bool {
        self.chars[self.pos..].iter().all(|c| c.is_whitespace())
    }
}

/// Parses the group-ring format; see the module docs for the grammar.
pub fn read_groupring_str(text: &str) -> Result<GroupRingElement, GroupRingIoError> {
    let mut p: Option<u64> = None;
    let mut ring: Option<GroundRing> = None;
    let mut terms: Vec<(i64, IntLaurent)> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let mut cur = Cursor::new(line, raw);
        cur.skip_ws();
        let key_col = cur.col();
        let key = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        match key.as_str() {
            "p" => {
                cur.eat(":")?;
                cur.skip_ws();
                p = Some(cur.int::<u64>("a prime")?);
            }
            "h" => {
                cur.eat(":")?;
                let p = p.ok_or_else(|| cur.err(key_col, "'p' must come before 'h'"))?;
                let mut coeffs: Vec<i64> = Vec::new();
                loop {
                    cur.skip_ws();
                    if cur.at_end() {
                        break;
                    }
                    coeffs.push(cur.int::<i64>("an integer coefficient")?);
                }
                ring = Some(GroundRing::new(p, &coeffs)?);
            }
            "term" => {
                cur.eat(":")?;
                let ring = ring
                    .as_ref()
                    .ok_or_else(|| cur.err(key_col, "'p' and 'h' must come before terms"))?;
                cur.skip_ws();
                cur.eat("coeff=")?;
                let coeff = cur.int::<i64>("an integer coefficient")?;
                cur.skip_ws();
                cur.eat("exp_in_S=")?;
                let (class_str, class_col) = cur.quoted()?;
                cur.skip_ws();
                cur.eat("lift=")?;
                let (lift_str, lift_col) = cur.quoted()?;
                if !cur.at_end() {
                    cur.skip_ws();
                    return Err(cur.err(cur.col(), "unexpected trailing content"));
                }
                let class = ring
                    .parse_element(&class_str)
                    .map_err(|e| cur.err(class_col, e.to_string()))?;
                let lift = IntLaurent::parse(&lift_str)
                    .map_err(|e| cur.err(lift_col, e.to_string()))?;
                if ring.reduce_int_laurent(&lift) != class {
                    return Err(cur.err(
                        lift_col,
                        format!("lift \"{lift_str}\" does not reduce to exp_in_S \"{class_str}\""),
                    ));
                }
                terms.push((coeff, lift));
            }
            other => {
                return Err(cur.err(key_col, format!("unknown field '{other}'")));
            }
        }
    }
    let ring = ring.ok_or(GroupRingIoError::Parse {
        line: last_line + 1,
        col: 1,
        msg: "missing 'p' and 'h' header".into(),
    })?;
    Ok(GroupRingElement::from_terms(ring, terms))
}
