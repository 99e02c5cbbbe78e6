//! Text-format parser for reaction networks.
//!
//! One reaction per line, `#` starts a comment:
//!
//! ```text
//! A + B -> C, k1
//! 2A -> 0, k2        # degradation of the non-0,1 complex 2A
//! A <-> B, k3        # expands to k3_f / k3_b
//! ```
//!
//! Species order is first appearance in the input; reaction order is line
//! order. A missing rate label defaults to `k<i>` for the reaction index `i`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::network::{Complex, Network, Reaction, SpeciesId};

/// Parse failure with 1-based source location.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("zero coefficient in term")]
    ZeroCoefficient,
    #[error("self-loop reaction: reactant equals product")]
    SelfLoop,
    #[error("production reaction: empty complex on the left")]
    ProductionReaction,
    #[error("duplicate rate label {0:?}")]
    DuplicateRateLabel(String),
    #[error("input contains no reactions")]
    EmptyNetwork,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Uint(u32),
    Ident(String),
    Plus,
    Comma,
    Arrow,
    BiArrow,
}

struct Lexer<'a> {
    line: usize,
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(line: usize, src: &'a str) -> Self {
        Lexer {
            line,
            chars: src.char_indices().collect(),
            pos: 0,
            src,
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col(),
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn lookahead_is(&self, expected: &str) -> bool {
        self.chars[self.pos..]
            .iter()
            .map(|&(_, c)| c)
            .take(expected.chars().count())
            .eq(expected.chars())
    }

    fn next_token(&mut self) -> Result<Option<(usize, Token)>, ParseError> {
        while matches!(self.peek_char(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
        let start_col = self.col();
        let Some(c) = self.peek_char() else {
            return Ok(None);
        };
        let token = match c {
            '+' => {
                self.pos += 1;
                Token::Plus
            }
            ',' => {
                self.pos += 1;
                Token::Comma
            }
            '-' => {
                if self.lookahead_is("->") {
                    self.pos += 2;
                    Token::Arrow
                } else {
                    return Err(self.error("expected '->'"));
                }
            }
            '<' => {
                if self.lookahead_is("<->") {
                    self.pos += 3;
                    Token::BiArrow
                } else {
                    return Err(self.error("expected '<->'"));
                }
            }
            d if d.is_ascii_digit() => {
                let mut value: u64 = 0;
                while let Some(d) = self.peek_char().filter(char::is_ascii_digit) {
                    value = value * 10 + u64::from(d as u8 - b'0');
                    if value > u64::from(u32::MAX) {
                        return Err(self.error("coefficient too large"));
                    }
                    self.pos += 1;
                }
                Token::Uint(value as u32)
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let begin = self.pos;
                while matches!(self.peek_char(), Some(c) if c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let start_byte = self.chars[begin].0;
                let end_byte = self
                    .chars
                    .get(self.pos)
                    .map_or(self.src.len(), |&(b, _)| b);
                Token::Ident(self.src[start_byte..end_byte].to_string())
            }
            other => return Err(self.error(format!("unexpected character {other:?}"))),
        };
        Ok(Some((start_col, token)))
    }
}

fn tokenize(line_no: usize, src: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut lexer = Lexer::new(line_no, src);
    let mut tokens = Vec::new();
    while let Some(tok) = lexer.next_token()? {
        tokens.push(tok);
    }
    Ok(tokens)
}

struct LineParser<'a> {
    line: usize,
    tokens: &'a [(usize, Token)],
    pos: usize,
    species: &'a mut Vec<String>,
}

impl<'a> LineParser<'a> {
    fn err_at(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    fn current_col(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or_else(|| self.end_col(), |&(c, _)| c)
    }

    fn end_col(&self) -> usize {
        self.tokens.last().map_or(1, |&(c, ref t)| {
            c + match t {
                Token::Ident(s) => s.len(),
                Token::Uint(u) => u.to_string().len(),
                Token::Arrow => 2,
                Token::BiArrow => 3,
                _ => 1,
            }
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn species_id(&mut self, name: &str) -> SpeciesId {
        if let Some(i) = self.species.iter().position(|s| s == name) {
            i
        } else {
            self.species.push(name.to_string());
            self.species.len() - 1
        }
    }

    /// complex := '0' | term ('+' term)*
    fn parse_complex(&mut self) -> Result<Complex, ParseError> {
        if matches!(self.peek(), Some(Token::Uint(0))) {
            // Lone '0' is the empty complex; '0A' is a zero coefficient.
            if matches!(self.tokens.get(self.pos + 1), Some((_, Token::Ident(_)))) {
                let col = self.current_col();
                return Err(ParseError {
                    line: self.line,
                    col,
                    kind: ParseErrorKind::ZeroCoefficient,
                });
            }
            self.pos += 1;
            return Ok(Complex::empty());
        }
        let mut pairs: Vec<(SpeciesId, u32)> = Vec::new();
        loop {
            let mut coeff = 1u32;
            if let Some(Token::Uint(u)) = self.peek() {
                coeff = *u;
                if coeff == 0 {
                    let col = self.current_col();
                    return Err(ParseError {
                        line: self.line,
                        col,
                        kind: ParseErrorKind::ZeroCoefficient,
                    });
                }
                self.pos += 1;
            }
            match self.peek() {
                Some(Token::Ident(name)) => {
                    let name = name.clone();
                    self.pos += 1;
                    let id = self.species_id(&name);
                    pairs.push((id, coeff));
                }
                _ => {
                    let col = self.current_col();
                    return Err(self.err_at(col, "expected species name"));
                }
            }
            if matches!(self.peek(), Some(Token::Plus)) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Complex::from_pairs(pairs))
    }

    /// line := complex arrow complex [',' IDENT]
    fn parse_line(&mut self) -> Result<(Complex, bool, Complex, Option<String>), ParseError> {
        let left = self.parse_complex()?;
        let reversible = match self.peek() {
            Some(Token::Arrow) => false,
            Some(Token::BiArrow) => true,
            _ => {
                let col = self.current_col();
                return Err(self.err_at(col, "expected '->' or '<->'"));
            }
        };
        self.pos += 1;
        let right = self.parse_complex()?;
        let label = if matches!(self.peek(), Some(Token::Comma)) {
            self.pos += 1;
            match self.peek() {
                Some(Token::Ident(name)) => {
                    let name = name.clone();
                    self.pos += 1;
                    Some(name)
                }
                _ => {
                    let col = self.current_col();
                    return Err(self.err_at(col, "expected rate label after ','"));
                }
            }
        } else {
            None
        };
        if self.pos != self.tokens.len() {
            let col = self.current_col();
            return Err(self.err_at(col, "trailing input after reaction"));
        }
        Ok((left, reversible, right, label))
    }
}

/// Parses the text format into a [`Network`].
///
/// `<->` lines expand into two reactions with `_f`/`_b` suffixed labels.
pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut species: Vec<String> = Vec::new();
    let mut reactions: Vec<Reaction> = Vec::new();
    let mut seen_labels: BTreeSet<String> = BTreeSet::new();

    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let content = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        if content.trim().is_empty() {
            continue;
        }
        let tokens = tokenize(line_no, content)?;
        let mut parser = LineParser {
            line: line_no,
            tokens: &tokens,
            pos: 0,
            species: &mut species,
        };
        let (left, reversible, right, label) = parser.parse_line()?;

        if left == right {
            return Err(ParseError {
                line: line_no,
                col: 1,
                kind: ParseErrorKind::SelfLoop,
            });
        }
        if left.is_empty() {
            return Err(ParseError {
                line: line_no,
                col: 1,
                kind: ParseErrorKind::ProductionReaction,
            });
        }
        if reversible && right.is_empty() {
            // The reverse direction would be a production reaction.
            return Err(ParseError {
                line: line_no,
                col: 1,
                kind: ParseErrorKind::ProductionReaction,
            });
        }

        let base = label.unwrap_or_else(|| format!("k{}", reactions.len() + 1));
        let expanded = if reversible {
            vec![
                (left.clone(), right.clone(), format!("{base}_f")),
                (right, left, format!("{base}_b")),
            ]
        } else {
            vec![(left, right, base)]
        };
        for (reactant, product, rate_label) in expanded {
            if !seen_labels.insert(rate_label.clone()) {
                return Err(ParseError {
                    line: line_no,
                    col: 1,
                    kind: ParseErrorKind::DuplicateRateLabel(rate_label),
                });
            }
            reactions.push(Reaction {
                index: reactions.len() + 1,
                reactant,
                product,
                rate_label,
            });
        }
    }

    if reactions.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            kind: ParseErrorKind::EmptyNetwork,
        });
    }
    Ok(Network::from_reactions(species, reactions))
}

/// Parses a standalone complex expression (e.g. `A + 2B` or `0`) against the
/// species of an existing network. Species not declared in `n` are rejected.
pub fn parse_complex_in(n: &Network, text: &str) -> Result<Complex, ParseError> {
    let tokens = tokenize(1, text)?;
    let mut species: Vec<String> = n.species().iter().map(|s| s.name.clone()).collect();
    let declared = species.len();
    let mut parser = LineParser {
        line: 1,
        tokens: &tokens,
        pos: 0,
        species: &mut species,
    };
    let complex = parser.parse_complex()?;
    if parser.pos != parser.tokens.len() {
        let col = parser.current_col();
        return Err(parser.err_at(col, "trailing input after complex"));
    }
    if species.len() > declared {
        return Err(ParseError {
            line: 1,
            col: 1,
            kind: ParseErrorKind::Syntax(format!(
                "unknown species {:?} in complex",
                species[declared]
            )),
        });
    }
    Ok(complex)
}
