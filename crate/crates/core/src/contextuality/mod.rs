//! Contextual words, compatible monoids, value assignments and empirical
//! models over them.

mod assignment;
mod bracketing;
mod classify;
mod closure;
mod graph;
mod sheaf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CommutatorMatrix, Scalar};
use crate::group::GroupError;
use crate::rewrite::normalize;
use crate::word::{format_word, parse_word, Letter, ParseError, Word};

pub use assignment::{
    canonical_scalar_assignment, search_left_splitting, value_assignment, AssignmentEntry,
    AssignmentViolation,
    CanonicalOutcome, CanonicalScalar, ValueAssignment, ValueOutcome,
};
pub use bracketing::{check_witness, parse_bracketing, witness_failure, Bracketing};
pub use classify::{
    classify_z2, pad_word, splitting_example, verify_splitting_example, Classification,
};
pub use closure::{
    compatible_submonoid, search_contextual_word, CompatibleMonoid, SearchOutcome, Seed, Witness,
};
pub use graph::{CompatibilityGraph, Pattern, PatternKind};
pub use sheaf::{
    full_model, glue_global_section, local_splittings, maximal_cliques, EmpiricalModel, Section,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextualityError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("bracketing flattens to {found:?}, expected {expected:?}")]
    FlattenMismatch { expected: String, found: String },
    #[error("word contains a phase letter at position {position}")]
    PhaseLetter { position: usize },
    #[error("generator index {index} out of range for {n} generators")]
    GeneratorOutOfRange { index: usize, n: usize },
    #[error("operation requires d = {expected}, matrix is over Z_{found}")]
    WrongModulus { expected: String, found: u32 },
    #[error("generator {generator} occurs {count} times, expected an even number")]
    OddMultiplicity { generator: String, count: u64 },
    #[error("clique {clique} has no local sections")]
    EmptySection { clique: usize },
    #[error("sections of cliques {first} and {second} disagree on their overlap")]
    Inconsistent { first: usize, second: usize },
    #[error("certificate failed to verify: {0}")]
    Certificate(String),
    #[error("model does not match the monoid: {0}")]
    ModelMismatch(String),
}

/// Which condition of a contextual word failed first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailedCondition {
    /// Some generator's multiplicity is not divisible by `d`.
    Multiplicity { generator: usize, count: u64 },
    /// A pair node joins two words that do not commute.
    Witness { left: Word, right: Word },
    /// Normal form is not a nonzero scalar.
    Phase { normal_form: String },
}

impl FailedCondition {
    pub fn tag(&self) -> &'static str {
        match self {
            FailedCondition::Multiplicity { .. } => "multiplicity",
            FailedCondition::Witness { .. } => "witness",
            FailedCondition::Phase { .. } => "phase",
        }
    }

    pub fn describe(&self, labels: &[String]) -> String {
        match self {
            FailedCondition::Multiplicity { generator, count } => format!(
                "generator {} occurs {count} times, not a multiple of d",
                labels[*generator]
            ),
            FailedCondition::Witness { left, right } => format!(
                "({}) and ({}) do not commute",
                format_word(left, labels),
                format_word(right, labels)
            ),
            FailedCondition::Phase { normal_form } => {
                format!("word normalizes to {normal_form}, not a nonzero phase")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Contextual(Scalar),
    Rejected(FailedCondition),
}

impl Verdict {
    pub fn phase(&self) -> Option<Scalar> {
        match self {
            Verdict::Contextual(k) => Some(*k),
            Verdict::Rejected(_) => None,
        }
    }
}

/// Checks the three conditions on `(word, bracketing)`: multiplicities,
/// commuting pair nodes, and a nonzero scalar normal form, in that order.
pub fn verify_contextual_word(
    word: &Word,
    bracketing: &Bracketing,
    mu: &CommutatorMatrix,
) -> Result<Verdict, ContextualityError> {
    if let Some(position) = word
        .letters()
        .iter()
        .position(|l| matches!(l, Letter::Phase(_)))
    {
        return Err(ContextualityError::PhaseLetter { position });
    }
    let n = mu.n();
    if let Some(index) = word
        .generators()
        .into_iter()
        .flatten()
        .chain([bracketing.max_generator()])
        .find(|&g| g >= n)
    {
        return Err(ContextualityError::GeneratorOutOfRange { index, n });
    }
    let flat = bracketing.flatten();
    if &flat != word {
        return Err(ContextualityError::FlattenMismatch {
            expected: format_word(word, mu.labels()),
            found: format_word(&flat, mu.labels()),
        });
    }
    Ok(judge(bracketing, mu))
}

fn judge(bracketing: &Bracketing, mu: &CommutatorMatrix) -> Verdict {
    let word = bracketing.flatten();
    let d = u64::from(mu.modulus().get());
    if let Some((generator, &count)) = word
        .multiplicities(mu.n())
        .iter()
        .enumerate()
        .find(|(_, &c)| c % d != 0)
    {
        return Verdict::Rejected(FailedCondition::Multiplicity { generator, count });
    }
    if let Some((left, right)) = witness_failure(bracketing, mu) {
        return Verdict::Rejected(FailedCondition::Witness { left, right });
    }
    let nf = normalize(&word, mu);
    if nf.phase.is_zero() || !nf.exponents.is_zero() {
        return Verdict::Rejected(FailedCondition::Phase {
            normal_form: nf.render(mu.labels()),
        });
    }
    Verdict::Contextual(nf.phase)
}

/// A verified contextual word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextualWord {
    word: Word,
    bracketing: Bracketing,
    phase: Scalar,
}

/// JSON shape `{"word": .., "bracketing": .., "phase": ..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextualWordRecord {
    pub word: String,
    pub bracketing: String,
    pub phase: u32,
}

impl ContextualWord {
    /// Verifies the bracketing; the word is its flattening.
    pub fn from_bracketing(
        bracketing: Bracketing,
        mu: &CommutatorMatrix,
    ) -> Result<Self, FailedCondition> {
        match judge(&bracketing, mu) {
            Verdict::Contextual(phase) => Ok(ContextualWord {
                word: bracketing.flatten(),
                bracketing,
                phase,
            }),
            Verdict::Rejected(why) => Err(why),
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn bracketing(&self) -> &Bracketing {
        &self.bracketing
    }

    pub fn phase(&self) -> Scalar {
        self.phase
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn record(&self, labels: &[String]) -> ContextualWordRecord {
        ContextualWordRecord {
            word: format_word(&self.word, labels),
            bracketing: self.bracketing.render(labels),
            phase: self.phase.value(),
        }
    }

    /// Re-verifies a serialized certificate.
    pub fn from_record(
        record: &ContextualWordRecord,
        mu: &CommutatorMatrix,
    ) -> Result<Result<Self, FailedCondition>, ContextualityError> {
        let word = parse_word(&record.word, mu)?;
        let bracketing = parse_bracketing(&record.bracketing, mu)?;
        match verify_contextual_word(&word, &bracketing, mu)? {
            Verdict::Contextual(phase) if phase.value() == record.phase => {
                Ok(Ok(ContextualWord {
                    word,
                    bracketing,
                    phase,
                }))
            }
            Verdict::Contextual(phase) => Ok(Err(FailedCondition::Phase {
                normal_form: format!("J{phase}"),
            })),
            Verdict::Rejected(why) => Ok(Err(why)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn paper_words_verify() {
        for (mu, word, bracketing) in fixtures::paper_examples() {
            let w = parse_word(word, &mu).unwrap();
            let b = parse_bracketing(bracketing, &mu).unwrap();
            let verdict = verify_contextual_word(&w, &b, &mu).unwrap();
            assert_eq!(verdict.phase().map(Scalar::value), Some(1), "{word}");
        }
    }

    #[test]
    fn squared_generator_has_trivial_phase() {
        let mu = CommutatorMatrix::new(
            &[vec![0, 1], vec![1, 0]],
            crate::algebra::Modulus::new(2).unwrap(),
            None,
        )
        .unwrap();
        let w = parse_word("x1 x1", &mu).unwrap();
        let b = parse_bracketing("(x1 x1)", &mu).unwrap();
        let verdict = verify_contextual_word(&w, &b, &mu).unwrap();
        assert!(matches!(
            verdict,
            Verdict::Rejected(FailedCondition::Phase { .. })
        ));
    }

    #[test]
    fn peres_mermin_word_verifies() {
        let mu = fixtures::peres_mermin();
        let b = parse_bracketing(fixtures::PERES_MERMIN_BRACKETING, &mu).unwrap();
        let verdict = verify_contextual_word(&b.flatten(), &b, &mu).unwrap();
        assert_eq!(verdict.phase().map(Scalar::value), Some(1));
    }

    #[test]
    fn mismatched_word_is_an_error() {
        let (mu, word, bracketing) = fixtures::paper_examples().remove(0);
        let w = parse_word(&word[1..], &mu).unwrap();
        let b = parse_bracketing(bracketing, &mu).unwrap();
        assert!(matches!(
            verify_contextual_word(&w, &b, &mu),
            Err(ContextualityError::FlattenMismatch { .. })
        ));
        let with_phase = parse_word(&format!("J1 {word}"), &mu).unwrap();
        assert!(matches!(
            verify_contextual_word(&with_phase, &b, &mu),
            Err(ContextualityError::PhaseLetter { position: 0 })
        ));
    }

    #[test]
    fn first_failed_condition_is_reported() {
        let (mu, _, _) = fixtures::paper_examples().remove(0);
        let b = parse_bracketing("(a d)(a d)", &mu).unwrap();
        match verify_contextual_word(&b.flatten(), &b, &mu).unwrap() {
            Verdict::Rejected(FailedCondition::Witness { .. }) => {}
            other => panic!("{other:?}"),
        }
        let b = parse_bracketing("(a b)", &mu).unwrap();
        match verify_contextual_word(&b.flatten(), &b, &mu).unwrap() {
            Verdict::Rejected(FailedCondition::Multiplicity { generator: 0, count: 1 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn record_round_trip() {
        let (mu, _, bracketing) = fixtures::paper_examples().remove(1);
        let cw = ContextualWord::from_bracketing(parse_bracketing(bracketing, &mu).unwrap(), &mu)
            .unwrap();
        let record = cw.record(mu.labels());
        let json = serde_json::to_string(&record).unwrap();
        let back: ContextualWordRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(ContextualWord::from_record(&back, &mu).unwrap().unwrap(), cw);
    }
}
