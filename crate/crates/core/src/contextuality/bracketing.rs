//! Binary bracketings of generator words.
//!
//! Text syntax: a leaf is a generator label, optionally with a power
//! (`a^3`); `(..)` and `[..]` group. A group or the top level holding more
//! than two items is read as a left-nested product, so `(a b c)` is
//! `((a b) c)`, and a power `a^3` is `((a a) a)`.

use crate::algebra::CommutatorMatrix;
use crate::word::{Lexer, ParseError, Token, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bracketing {
    Leaf(usize),
    Pair(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    pub fn pair(left: Bracketing, right: Bracketing) -> Self {
        Bracketing::Pair(Box::new(left), Box::new(right))
    }

    /// `((i1 i2) i3) ...`; `None` for an empty list.
    pub fn left_fold(items: impl IntoIterator<Item = Bracketing>) -> Option<Self> {
        items.into_iter().reduce(Bracketing::pair)
    }

    /// `(i1 (i2 (i3 ...)))`; `None` for an empty list.
    pub fn right_fold(items: Vec<Bracketing>) -> Option<Self> {
        items.into_iter().rev().reduce(|acc, item| Bracketing::pair(item, acc))
    }

    /// `count` copies of `self`, right-nested.
    pub fn repeated(&self, count: usize) -> Option<Self> {
        Self::right_fold(vec![self.clone(); count])
    }

    /// The bracketed word.
    pub fn flatten(&self) -> Word {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_leaves(&mut out);
        Word::from_generators(&out)
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Bracketing::Leaf(g) => out.push(*g),
            Bracketing::Pair(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Bracketing::Leaf(_) => 1,
            Bracketing::Pair(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Replaces every leaf `g` with `f(g)`.
    pub fn substitute(&self, f: &dyn Fn(usize) -> Bracketing) -> Bracketing {
        match self {
            Bracketing::Leaf(g) => f(*g),
            Bracketing::Pair(l, r) => Bracketing::pair(l.substitute(f), r.substitute(f)),
        }
    }

    pub fn max_generator(&self) -> usize {
        match self {
            Bracketing::Leaf(g) => *g,
            Bracketing::Pair(l, r) => l.max_generator().max(r.max_generator()),
        }
    }

    /// Renders with explicit parentheses around every pair. Adjacent leaves
    /// are separated by a space unless every label is a single character.
    pub fn render(&self, labels: &[String]) -> String {
        let compact = labels.iter().all(|l| l.chars().count() == 1);
        let mut out = String::new();
        self.render_into(labels, compact, &mut out);
        out
    }

    fn render_into(&self, labels: &[String], compact: bool, out: &mut String) {
        match self {
            Bracketing::Leaf(g) => out.push_str(&labels[*g]),
            Bracketing::Pair(l, r) => {
                out.push('(');
                l.render_into(labels, compact, out);
                if !compact && matches!(**l, Bracketing::Leaf(_)) && matches!(**r, Bracketing::Leaf(_))
                {
                    out.push(' ');
                }
                r.render_into(labels, compact, out);
                out.push(')');
            }
        }
    }
}

pub fn parse_bracketing(text: &str, mu: &CommutatorMatrix) -> Result<Bracketing, ParseError> {
    let mut lexer = Lexer::new(text, mu.labels());
    let items = parse_sequence(&mut lexer, None)?;
    Bracketing::left_fold(items).ok_or(ParseError::Empty)
}

fn parse_sequence(
    lexer: &mut Lexer<'_>,
    open: Option<(char, usize)>,
) -> Result<Vec<Bracketing>, ParseError> {
    let mut items = Vec::new();
    loop {
        let offset = lexer.offset();
        let Some(token) = lexer.next_token() else {
            return match open {
                Some((_, at)) => Err(ParseError::Unbalanced { offset: at }),
                None => Ok(items),
            };
        };
        match token? {
            Token::Generator { index, power } => {
                if let Some(run) =
                    Bracketing::left_fold(std::iter::repeat_n(Bracketing::Leaf(index), power as usize))
                {
                    items.push(run);
                }
            }
            Token::Phase(_) => return Err(ParseError::UnexpectedPhase { offset }),
            Token::Open(c) => {
                let at = lexer.offset() - 1;
                let inner = parse_sequence(lexer, Some((c, at)))?;
                items.push(
                    Bracketing::left_fold(inner).ok_or(ParseError::EmptyGroup { offset: at })?,
                );
            }
            Token::Close(c) => {
                let at = lexer.offset() - 1;
                return match open {
                    None => Err(ParseError::Unbalanced { offset: at }),
                    Some((o, _)) if matching(o) != c => Err(ParseError::MismatchedBracket {
                        offset: at,
                        open: o,
                        close: c,
                    }),
                    Some(_) => Ok(items),
                };
            }
        }
    }
}

fn matching(open: char) -> char {
    match open {
        '(' => ')',
        _ => ']',
    }
}

/// The first pair node whose halves do not commute, as `(left, right)` words.
pub fn witness_failure(bracketing: &Bracketing, mu: &CommutatorMatrix) -> Option<(Word, Word)> {
    let mut failure = None;
    subtree_vector(bracketing, mu, &mut failure);
    failure
}

/// Whether every pair node joins two commuting subwords.
pub fn check_witness(bracketing: &Bracketing, mu: &CommutatorMatrix) -> bool {
    witness_failure(bracketing, mu).is_none()
}

fn subtree_vector(
    node: &Bracketing,
    mu: &CommutatorMatrix,
    failure: &mut Option<(Word, Word)>,
) -> Vec<u32> {
    match node {
        Bracketing::Leaf(g) => {
            let mut v = vec![0; mu.n()];
            v[*g] = 1;
            v
        }
        Bracketing::Pair(l, r) => {
            let lv = subtree_vector(l, mu, failure);
            let rv = subtree_vector(r, mu, failure);
            if failure.is_none() && mu.matrix().bilinear_unchecked(&lv, &rv) != 0 {
                *failure = Some((l.flatten(), r.flatten()));
            }
            let m = mu.modulus();
            lv.iter().zip(&rv).map(|(&a, &b)| m.add(a, b)).collect()
        }
    }
}
