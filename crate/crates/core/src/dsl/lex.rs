//! Tokenizer with line/column tracking. Keywords are contextual: the
//! parser matches identifier text, so names like `op` stay usable where
//! the grammar allows.

use super::ast::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Colon,
    Dot,
    Slash,
    Arrow,    // ->
    DArrow,   // =>
    Eq,       // =
    Leq,      // <=
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Int(n) => write!(f, "{n}"),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Semi => write!(f, ";"),
            Tok::Comma => write!(f, ","),
            Tok::Colon => write!(f, ":"),
            Tok::Dot => write!(f, "."),
            Tok::Slash => write!(f, "/"),
            Tok::Arrow => write!(f, "->"),
            Tok::DArrow => write!(f, "=>"),
            Tok::Eq => write!(f, "="),
            Tok::Leq => write!(f, "<="),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = Span::new(line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                // Comment to end of line.
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        col = 1;
                        break;
                    }
                }
            }
            '{' => {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::LBrace, span });
            }
            '}' => {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::RBrace, span });
            }
            '(' => {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::LParen, span });
            }
            ')' => {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::RParen, span });
            }
            ';' => {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::Semi, span });
            }
            ',' => {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::Comma, span });
            }
            ':' => {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::Colon, span });
            }
            '.' => {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::Dot, span });
            }
            '/' => {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::Slash, span });
            }
            '-' => {
                chars.next();
                col += 1;
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        col += 1;
                        out.push(Token { tok: Tok::Arrow, span });
                    }
                    Some(d) if d.is_ascii_digit() => {
                        let mut n = String::from("-");
                        while let Some(&d) = chars.peek() {
                            if d.is_ascii_digit() {
                                n.push(d);
                                chars.next();
                                col += 1;
                            } else {
                                break;
                            }
                        }
                        let v: i64 = n
                            .parse()
                            .map_err(|_| Diagnostic::error(span, "integer out of range"))?;
                        out.push(Token { tok: Tok::Int(v), span });
                    }
                    _ => return Err(Diagnostic::error(span, "expected '>' after '-'")),
                }
            }
            '=' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push(Token { tok: Tok::DArrow, span });
                } else {
                    out.push(Token { tok: Tok::Eq, span });
                }
            }
            '<' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    out.push(Token { tok: Tok::Leq, span });
                } else {
                    return Err(Diagnostic::error(span, "expected '=' after '<'"));
                }
            }
            c if c.is_ascii_digit() => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let v: i64 = n
                    .parse()
                    .map_err(|_| Diagnostic::error(span, "integer out of range"))?;
                out.push(Token { tok: Tok::Int(v), span });
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Ident(s), span });
            }
            other => {
                return Err(Diagnostic::error(span, format!("unexpected character {other:?}")))
            }
        }
    }
    Ok(out)
}
