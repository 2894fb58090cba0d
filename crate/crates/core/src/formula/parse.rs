use alloc::string::ToString;
use alloc::vec::Vec;

use super::{Formula, VarId};
use crate::lex::{tokenize, ParseError, ParseErrorKind, Token, TokenKind};

/// Parses formula source. `!` binds tighter than `&`, which binds tighter
/// than `|`; adjacent `&`/`|` chains become one n-ary node.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let tokens: Vec<Token> = tokenize(text)?
        .into_iter()
        .filter(|t| t.kind != TokenKind::Newline)
        .collect();
    if tokens.is_empty() {
        return Err(ParseError::new(1, 1, ParseErrorKind::EmptyInput));
    }
    let mut p = FormulaParser::new(&tokens, end_position(text));
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

fn end_position(text: &str) -> (usize, usize) {
    let line = text.matches('\n').count() + 1;
    let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Recursive-descent parser over an already tokenized slice.
pub(crate) struct FormulaParser<'t> {
    tokens: &'t [Token],
    pos: usize,
    end: (usize, usize),
}

impl<'t> FormulaParser<'t> {
    pub(crate) fn new(tokens: &'t [Token], end: (usize, usize)) -> Self {
        FormulaParser { tokens, pos: 0, end }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn at(&self, kind: &TokenKind) -> bool {
        self.peek().is_some_and(|t| &t.kind == kind)
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) if t.kind == TokenKind::RParen => {
                Err(ParseError::new(t.line, t.column, ParseErrorKind::UnbalancedParen))
            }
            Some(t) => Err(ParseError::new(
                t.line,
                t.column,
                ParseErrorKind::Unexpected {
                    found: t.kind.to_string(),
                    expected: "`&`, `|` or end of formula",
                },
            )),
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        let first = self.conjunction()?;
        if !self.at(&TokenKind::Pipe) {
            return Ok(first);
        }
        let mut items = alloc::vec![first];
        while self.at(&TokenKind::Pipe) {
            self.pos += 1;
            items.push(self.conjunction()?);
        }
        Ok(Formula::Or(items))
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let first = self.unary()?;
        if !self.at(&TokenKind::Amp) {
            return Ok(first);
        }
        let mut items = alloc::vec![first];
        while self.at(&TokenKind::Amp) {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(Formula::And(items))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.at(&TokenKind::Bang) {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek() else {
            let (line, column) = self.end;
            return Err(ParseError::new(
                line,
                column,
                ParseErrorKind::UnexpectedEnd { expected: "a formula" },
            ));
        };
        self.pos += 1;
        match &tok.kind {
            TokenKind::Ident(name) if name == "TRUE" => Ok(Formula::True),
            TokenKind::Ident(name) if name == "FALSE" => Ok(Formula::False),
            TokenKind::Ident(name) | TokenKind::Quoted(name) => Ok(Formula::Var(VarId::new(name))),
            TokenKind::LParen => {
                let inner = self.formula()?;
                match self.peek() {
                    Some(t) if t.kind == TokenKind::RParen => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(ParseError::new(tok.line, tok.column, ParseErrorKind::UnbalancedParen)),
                }
            }
            TokenKind::RParen => Err(ParseError::new(tok.line, tok.column, ParseErrorKind::UnbalancedParen)),
            other => Err(ParseError::new(
                tok.line,
                tok.column,
                ParseErrorKind::Unexpected {
                    found: other.to_string(),
                    expected: "a formula",
                },
            )),
        }
    }
}
