//! Shared tokenizer for the formula grammar and the line-based file formats.
//!
//! Identifiers follow `[A-Za-z_][A-Za-z0-9_]*`; anything else can be written
//! as a double-quoted name with `\"` and `\\` escapes. `#` starts a comment
//! that runs to the end of the line.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Quoted(String),
    Bang,
    Amp,
    Pipe,
    LParen,
    RParen,
    Eq,
    /// `->`
    Arrow,
    /// `--`
    DashDash,
    /// `=>`
    FatArrow,
    Newline,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Quoted(s) => write!(f, "quoted name \"{s}\""),
            TokenKind::Bang => f.write_str("`!`"),
            TokenKind::Amp => f.write_str("`&`"),
            TokenKind::Pipe => f.write_str("`|`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Eq => f.write_str("`=`"),
            TokenKind::Arrow => f.write_str("`->`"),
            TokenKind::DashDash => f.write_str("`--`"),
            TokenKind::FatArrow => f.write_str("`=>`"),
            TokenKind::Newline => f.write_str("end of line"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    UnexpectedChar(char),
    UnterminatedQuote,
    EmptyName,
    UnbalancedParen,
    Unexpected { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    DuplicateVertex(String),
    SelfReference(String),
}

/// A syntax or structure error with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::EmptyInput => f.write_str("empty input"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnterminatedQuote => f.write_str("unterminated quoted name"),
            ParseErrorKind::EmptyName => f.write_str("empty quoted name"),
            ParseErrorKind::UnbalancedParen => f.write_str("unbalanced parentheses"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "found {found}, expected {expected}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "unexpected end of input, expected {expected}")
            }
            ParseErrorKind::DuplicateVertex(v) => write!(f, "vertex `{v}` is defined twice"),
            ParseErrorKind::SelfReference(v) => {
                write!(f, "denotation of `{v}` mentions `{v}` itself (loops not allowed)")
            }
        }
    }
}

impl ParseError {
    pub fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }
}

pub fn is_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Tokenizes `text`. Newlines are emitted as tokens so line-based formats can
/// split on them; the formula parser skips them.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(c) = chars.next() {
        let (tl, tc) = (line, column);
        column += 1;
        let kind = match c {
            '\n' => {
                line += 1;
                column = 1;
                TokenKind::Newline
            }
            c if c.is_whitespace() => continue,
            '#' => {
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    chars.next();
                }
                continue;
            }
            '!' => TokenKind::Bang,
            '&' => TokenKind::Amp,
            '|' => TokenKind::Pipe,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '=' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    column += 1;
                    TokenKind::FatArrow
                } else {
                    TokenKind::Eq
                }
            }
            '-' => match chars.peek() {
                Some('>') => {
                    chars.next();
                    column += 1;
                    TokenKind::Arrow
                }
                Some('-') => {
                    chars.next();
                    column += 1;
                    TokenKind::DashDash
                }
                _ => return Err(ParseError::new(tl, tc, ParseErrorKind::UnexpectedChar('-'))),
            },
            '"' => {
                let mut name = String::new();
                loop {
                    match chars.next() {
                        None => return Err(ParseError::new(tl, tc, ParseErrorKind::UnterminatedQuote)),
                        Some('"') => {
                            column += 1;
                            break;
                        }
                        Some('\\') => {
                            column += 1;
                            match chars.next() {
                                Some(e) => {
                                    column += 1;
                                    if e == '\n' {
                                        line += 1;
                                        column = 1;
                                    }
                                    name.push(e);
                                }
                                None => return Err(ParseError::new(tl, tc, ParseErrorKind::UnterminatedQuote)),
                            }
                        }
                        Some(ch) => {
                            column += 1;
                            if ch == '\n' {
                                line += 1;
                                column = 1;
                            }
                            name.push(ch);
                        }
                    }
                }
                if name.is_empty() {
                    return Err(ParseError::new(tl, tc, ParseErrorKind::EmptyName));
                }
                TokenKind::Quoted(name)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                name.push(c);
                while let Some(&n) = chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        name.push(n);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                TokenKind::Ident(name)
            }
            other => return Err(ParseError::new(tl, tc, ParseErrorKind::UnexpectedChar(other))),
        };
        tokens.push(Token {
            kind,
            line: tl,
            column: tc,
        });
    }
    Ok(tokens)
}

/// Splits a token stream into non-empty lines.
pub fn lines(tokens: &[Token]) -> impl Iterator<Item = &[Token]> {
    tokens.split(|t| t.kind == TokenKind::Newline).filter(|l| !l.is_empty())
}
