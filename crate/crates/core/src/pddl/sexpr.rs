use super::error::PddlError;
use super::lexer::{tokenize, Pos, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom { text: String, pos: Pos },
    List { items: Vec<SExpr>, pos: Pos },
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom { pos, .. } | SExpr::List { pos, .. } => *pos,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom { text, .. } => Some(text),
            SExpr::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Some(items),
            SExpr::Atom { .. } => None,
        }
    }

    /// Head atom of a list, if the list is nonempty and starts with an atom.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }
}

/// Lists nested deeper than this are rejected; the parser and `Drop` both
/// recurse over the tree.
pub const MAX_DEPTH: usize = 512;

/// Reads every top-level form in `text`.
pub fn read_all(text: &str) -> Result<Vec<SExpr>, PddlError> {
    read_tokens(&tokenize(text))
}

pub fn read_tokens(tokens: &[Token]) -> Result<Vec<SExpr>, PddlError> {
    let mut stack: Vec<(Pos, Vec<SExpr>)> = Vec::new();
    let mut top = Vec::new();
    for tok in tokens {
        match &tok.kind {
            TokenKind::Open => {
                if stack.len() >= MAX_DEPTH {
                    return Err(PddlError::syntax(
                        tok.pos,
                        format!("lists nested deeper than {MAX_DEPTH} levels"),
                    ));
                }
                stack.push((tok.pos, Vec::new()))
            }
            TokenKind::Close => {
                let (pos, items) = stack
                    .pop()
                    .ok_or_else(|| PddlError::syntax(tok.pos, "unmatched `)`"))?;
                let list = SExpr::List { items, pos };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(list),
                    None => top.push(list),
                }
            }
            TokenKind::Atom(text) => {
                let atom = SExpr::Atom {
                    text: text.clone(),
                    pos: tok.pos,
                };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(atom),
                    None => top.push(atom),
                }
            }
        }
    }
    if let Some((pos, _)) = stack.first() {
        return Err(PddlError::syntax(
            *pos,
            format!("unclosed `(` opened at {pos}"),
        ));
    }
    Ok(top)
}
