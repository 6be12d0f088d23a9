//! Words over generators and phase letters, with a small text syntax:
//!
//! ```text
//! word := item*
//! item := label | label '^' uint | 'J' uint
//! ```
//!
//! Items may be separated by whitespace or written back to back; labels are
//! matched longest-first. `J` followed by digits is always a phase letter.

use std::fmt;

use thiserror::Error;

use crate::algebra::{CommutatorMatrix, ExponentVector, Modulus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown generator at offset {offset}: {text:?}")]
    UnknownLabel { offset: usize, text: String },
    #[error("malformed exponent at offset {offset}")]
    MalformedExponent { offset: usize },
    #[error("malformed phase letter at offset {offset}")]
    MalformedPhase { offset: usize },
    #[error("unbalanced bracket at offset {offset}")]
    Unbalanced { offset: usize },
    #[error("mismatched brackets: {open:?} closed by {close:?} at offset {offset}")]
    MismatchedBracket {
        offset: usize,
        open: char,
        close: char,
    },
    #[error("phase letters are not allowed here (offset {offset})")]
    UnexpectedPhase { offset: usize },
    #[error("empty bracketing")]
    Empty,
    #[error("empty group at offset {offset}")]
    EmptyGroup { offset: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// Index into the generator list.
    Generator(usize),
    /// The phase letter `J_k`, with `k` reduced mod `d`.
    Phase(u32),
}

/// A finite sequence of letters. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_generators(indices: &[usize]) -> Self {
        Word(indices.iter().map(|&i| Letter::Generator(i)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn is_generator_only(&self) -> bool {
        self.0.iter().all(|l| matches!(l, Letter::Generator(_)))
    }

    /// Generator indices, or `None` if a phase letter is present.
    pub fn generators(&self) -> Option<Vec<usize>> {
        self.0
            .iter()
            .map(|l| match l {
                Letter::Generator(i) => Some(*i),
                Letter::Phase(_) => None,
            })
            .collect()
    }

    /// Per-generator occurrence counts (not reduced).
    pub fn multiplicities(&self, n: usize) -> Vec<u64> {
        let mut counts = vec![0u64; n];
        for l in &self.0 {
            if let Letter::Generator(i) = l {
                counts[*i] += 1;
            }
        }
        counts
    }

    /// Occurrence counts reduced mod `d`.
    pub fn exponent_vector(&self, n: usize, modulus: Modulus) -> ExponentVector {
        let counts: Vec<i64> = self
            .multiplicities(n)
            .into_iter()
            .map(|c| c as i64)
            .collect();
        ExponentVector::from_ints(&counts, modulus)
    }

    /// Whether every letter is in range for the given matrix.
    pub fn is_valid_for(&self, mu: &CommutatorMatrix) -> bool {
        self.0.iter().all(|l| match *l {
            Letter::Generator(i) => i < mu.n(),
            Letter::Phase(k) => k < mu.modulus().get(),
        })
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Token {
    Generator { index: usize, power: u64 },
    Phase(u64),
    Open(char),
    Close(char),
}

pub(crate) struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    labels: &'a [String],
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(text: &'a str, labels: &'a [String]) -> Self {
        Lexer {
            text,
            pos: 0,
            labels,
        }
    }

    pub(crate) fn offset(&self) -> usize {
        self.pos
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn digits(&mut self) -> Option<u64> {
        let rest = &self.text[self.pos..];
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return None;
        }
        self.pos += len;
        rest[..len].parse().ok()
    }

    fn exponent(&mut self) -> Result<u64, ParseError> {
        let offset = self.pos;
        self.pos += 1; // '^'
        let braced = self.text[self.pos..].starts_with('{');
        if braced {
            self.pos += 1;
        }
        let value = self
            .digits()
            .ok_or(ParseError::MalformedExponent { offset })?;
        if braced {
            if !self.text[self.pos..].starts_with('}') {
                return Err(ParseError::MalformedExponent { offset });
            }
            self.pos += 1;
        }
        Ok(value)
    }

    pub(crate) fn next_token(&mut self) -> Option<Result<Token, ParseError>> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let c = rest.chars().next()?;
        let offset = self.pos;
        match c {
            '(' | '[' => {
                self.pos += 1;
                return Some(Ok(Token::Open(c)));
            }
            ')' | ']' => {
                self.pos += 1;
                return Some(Ok(Token::Close(c)));
            }
            _ => {}
        }
        if c == 'J' && rest[1..].starts_with(|ch: char| ch.is_ascii_digit()) {
            self.pos += 1;
            return Some(
                self.digits()
                    .map(Token::Phase)
                    .ok_or(ParseError::MalformedPhase { offset }),
            );
        }
        let best = self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| rest.starts_with(l.as_str()))
            .max_by_key(|(_, l)| l.len());
        let Some((index, label)) = best else {
            let text: String = rest
                .chars()
                .take_while(|ch| !ch.is_whitespace() && !"()[]^".contains(*ch))
                .collect();
            return Some(Err(ParseError::UnknownLabel { offset, text }));
        };
        self.pos += label.len();
        let power = if self.text[self.pos..].starts_with('^') {
            match self.exponent() {
                Ok(p) => p,
                Err(e) => return Some(Err(e)),
            }
        } else {
            1
        };
        Some(Ok(Token::Generator { index, power }))
    }
}

/// Parses a word over the generators of `mu`; phase values are reduced mod d.
pub fn parse_word(text: &str, mu: &CommutatorMatrix) -> Result<Word, ParseError> {
    let modulus = mu.modulus();
    let mut lexer = Lexer::new(text, mu.labels());
    let mut letters = Vec::new();
    while let Some(token) = lexer.next_token() {
        match token? {
            Token::Generator { index, power } => {
                letters.extend(std::iter::repeat_n(Letter::Generator(index), power as usize));
            }
            Token::Phase(k) => letters.push(Letter::Phase(modulus.reduce(k as i64))),
            Token::Open(_) | Token::Close(_) => {
                return Err(ParseError::Unbalanced {
                    offset: lexer.offset() - 1,
                })
            }
        }
    }
    Ok(Word(letters))
}

/// Canonical text: runs of one generator collapse to `label^k`, letters are
/// space separated, the empty word is the empty string.
pub fn format_word(word: &Word, labels: &[String]) -> String {
    let mut parts = Vec::new();
    let letters = word.letters();
    let mut i = 0;
    while i < letters.len() {
        match letters[i] {
            Letter::Phase(k) => {
                parts.push(format!("J{k}"));
                i += 1;
            }
            Letter::Generator(g) => {
                let run = letters[i..]
                    .iter()
                    .take_while(|&&l| l == Letter::Generator(g))
                    .count();
                let label = labels
                    .get(g)
                    .cloned()
                    .unwrap_or_else(|| format!("#{g}"));
                if run == 1 {
                    parts.push(label);
                } else {
                    parts.push(format!("{label}^{run}"));
                }
                i += run;
            }
        }
    }
    parts.join(" ")
}

/// Display adapter pairing a word with generator labels.
pub struct Labeled<'a, T>(pub &'a T, pub &'a [String]);

impl fmt::Display for Labeled<'_, Word> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(self.0, self.1))
    }
}
