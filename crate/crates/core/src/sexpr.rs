//! Minimal s-expression reader shared by the PDDL and animation-profile parsers.
//!
//! Atoms keep their original spelling; callers decide what to lowercase.
//! `;` starts a comment that runs to the end of the line.

use std::fmt;

use thiserror::Error;

/// 1-based line/column position in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExprKind {
    Atom(String),
    /// Double-quoted string literal, escapes already processed.
    Str(String),
    List(Vec<SExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SExpr {
    pub kind: SExprKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError {
            pos,
            message: message.into(),
        }
    }
}

impl SExpr {
    pub fn atom(&self) -> Option<&str> {
        match &self.kind {
            SExprKind::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match &self.kind {
            SExprKind::List(items) => Some(items),
            _ => None,
        }
    }

    /// Atom lowercased, or a syntax error describing what was expected.
    pub fn expect_ident(&self, what: &str) -> Result<String, SyntaxError> {
        match &self.kind {
            SExprKind::Atom(a) => Ok(a.to_ascii_lowercase()),
            _ => Err(SyntaxError::new(self.pos, format!("expected {what}"))),
        }
    }

    pub fn expect_list(&self, what: &str) -> Result<&[SExpr], SyntaxError> {
        self.list()
            .ok_or_else(|| SyntaxError::new(self.pos, format!("expected {what}")))
    }

    /// True when this is an atom equal to `kw`, ignoring ASCII case.
    pub fn is_keyword(&self, kw: &str) -> bool {
        self.atom().is_some_and(|a| a.eq_ignore_ascii_case(kw))
    }

    /// For a list whose head is an atom, returns the lowercased head and the tail.
    pub fn head(&self) -> Option<(String, &[SExpr])> {
        let items = self.list()?;
        let first = items.first()?.atom()?;
        Some((first.to_ascii_lowercase(), &items[1..]))
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader {
            chars: src.chars().peekable(),
            pos: Pos { line: 1, col: 1 },
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<SExpr>, SyntaxError> {
        self.skip_trivia();
        let pos = self.pos;
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(SyntaxError::new(pos, "unclosed '('")),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => {
                            if let Some(e) = self.read()? {
                                items.push(e);
                            }
                        }
                    }
                }
                Ok(Some(SExpr {
                    kind: SExprKind::List(items),
                    pos,
                }))
            }
            ')' => Err(SyntaxError::new(pos, "unexpected ')'")),
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(SyntaxError::new(pos, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some(c) => s.push(c),
                            None => return Err(SyntaxError::new(pos, "unterminated string")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Ok(Some(SExpr {
                    kind: SExprKind::Str(s),
                    pos,
                }))
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' || c == '"' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Some(SExpr {
                    kind: SExprKind::Atom(s),
                    pos,
                }))
            }
        }
    }
}

/// Reads every top-level expression in `src`.
pub fn parse_all(src: &str) -> Result<Vec<SExpr>, SyntaxError> {
    let mut reader = Reader::new(src);
    let mut out = Vec::new();
    while let Some(e) = reader.read()? {
        out.push(e);
    }
    Ok(out)
}

/// Reads exactly one top-level expression.
pub fn parse_one(src: &str) -> Result<SExpr, SyntaxError> {
    let mut all = parse_all(src)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(SyntaxError::new(Pos { line: 1, col: 1 }, "empty input")),
        _ => Err(SyntaxError::new(
            all[1].pos,
            "unexpected content after the top-level form",
        )),
    }
}

/// Writes `s` as a string literal, escaping quotes and backslashes.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
