//! Recursive-descent parser for the formula grammar.
//!
//! Precedence, tightest first: prefix unary operators (`! X! X F G`),
//! then `&`, then `|`, then `U` and `R` (right-associative).

use super::{BinaryOp, LtlFormula, UnaryOp};
use crate::trace::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("formula syntax error at column {column}: {message}")]
pub struct ParseFormulaError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Unary(UnaryOp),
    Binary(BinaryOp),
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseFormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '!' | '~' | '¬' => Tok::Unary(UnaryOp::Not),
            '&' | '∧' => Tok::Binary(BinaryOp::And),
            '|' | '∨' => Tok::Binary(BinaryOp::Or),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "X" if chars.get(i) == Some(&'!') => {
                        i += 1;
                        Tok::Unary(UnaryOp::StrongNext)
                    }
                    "X" => Tok::Unary(UnaryOp::WeakNext),
                    "F" => Tok::Unary(UnaryOp::Finally),
                    "G" => Tok::Unary(UnaryOp::Globally),
                    "U" => Tok::Binary(BinaryOp::Until),
                    "R" => Tok::Binary(BinaryOp::Release),
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                toks.push((tok, col));
                continue;
            }
            other => {
                return Err(ParseFormulaError {
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        toks.push((tok, col));
        i += 1;
    }
    Ok(Lexer {
        toks,
        end: chars.len() + 1,
    })
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseFormulaError> {
        Err(ParseFormulaError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn temporal(&mut self) -> Result<LtlFormula, ParseFormulaError> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Some(Tok::Binary(op @ (BinaryOp::Until | BinaryOp::Release))) => {
                let op = *op;
                self.pos += 1;
                let rhs = self.temporal()?;
                Ok(LtlFormula::binary(op, lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<LtlFormula, ParseFormulaError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Binary(BinaryOp::Or)) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = LtlFormula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<LtlFormula, ParseFormulaError> {
        let mut lhs = self.prefix()?;
        while self.peek() == Some(&Tok::Binary(BinaryOp::And)) {
            self.pos += 1;
            let rhs = self.prefix()?;
            lhs = LtlFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<LtlFormula, ParseFormulaError> {
        if let Some(Tok::Unary(op)) = self.peek() {
            let op = *op;
            self.pos += 1;
            let inner = self.prefix()?;
            return Ok(LtlFormula::unary(op, inner));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<LtlFormula, ParseFormulaError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.temporal()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(LtlFormula::top())
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(LtlFormula::bottom())
            }
            Some(Tok::Ident(name)) => match self.alphabet.index_of(&name) {
                Some(p) => {
                    self.pos += 1;
                    Ok(LtlFormula::atom(p))
                }
                None => self.err(format!("unknown proposition `{name}`")),
            },
            Some(_) => self.err("expected a proposition, constant, unary operator or `(`"),
            None => self.err("unexpected end of formula"),
        }
    }
}

/// Parses `text` against the proposition names of `alphabet`.
pub fn parse_formula(text: &str, alphabet: &Alphabet) -> Result<LtlFormula, ParseFormulaError> {
    let lexer = lex(text)?;
    let mut p = Parser {
        toks: &lexer.toks,
        pos: 0,
        end: lexer.end,
        alphabet,
    };
    let f = p.temporal()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}
