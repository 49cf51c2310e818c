//! Case-folding tokenizer for PDDL text.
//!
//! PDDL has no string literals, so the whole input is folded to lowercase.
//! `;` starts a comment that runs to the end of the line. Any character that
//! is not whitespace or a parenthesis becomes part of an atom; malformed
//! atoms are rejected later by the parser, which still has their positions.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A location in the source text. `line` and `column` are 1-based, `offset`
/// is a byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Pos {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Open,
    Close,
    Atom(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

impl Token {
    pub fn text(&self) -> &str {
        match &self.kind {
            TokenKind::Open => "(",
            TokenKind::Close => ")",
            TokenKind::Atom(s) => s,
        }
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.char_indices().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<(usize, char)> {
        self.chars.peek().copied()
    }

    fn pos(&mut self, offset: usize) -> Pos {
        Pos {
            offset,
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let next = self.chars.next();
        if let Some((_, c)) = next {
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
        next
    }
}

/// Splits `text` into parentheses and atoms, dropping whitespace and comments.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut cur = Cursor::new(text);
    let mut tokens = Vec::new();
    while let Some((offset, c)) = cur.peek() {
        match c {
            c if c.is_whitespace() => {
                cur.bump();
            }
            ';' => {
                while let Some((_, c)) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
            }
            '(' | ')' => {
                let pos = cur.pos(offset);
                cur.bump();
                let kind = if c == '(' {
                    TokenKind::Open
                } else {
                    TokenKind::Close
                };
                tokens.push(Token { kind, pos });
            }
            _ => {
                let pos = cur.pos(offset);
                let mut atom = String::new();
                while let Some((_, c)) = cur.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.extend(c.to_lowercase());
                    cur.bump();
                }
                tokens.push(Token {
                    kind: TokenKind::Atom(atom),
                    pos,
                });
            }
        }
    }
    tokens
}
