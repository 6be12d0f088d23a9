//! Deciding contextuality over `Z_2`, and lifting words to `Z_2k`.

use crate::algebra::{CommutatorMatrix, Scalar};
use crate::fixtures;
use crate::group::Group;
use crate::word::Word;

use super::assignment::{value_assignment, ValueAssignment, ValueOutcome};
use super::bracketing::{parse_bracketing, Bracketing};
use super::closure::{compatible_submonoid, Seed};
use super::graph::{CompatibilityGraph, Pattern, PatternKind};
use super::{verify_contextual_word, ContextualWord, ContextualityError, Verdict};

#[derive(Debug, Clone)]
pub enum Classification {
    /// A contextual word, with the induced pattern it was built from if any.
    Contextual {
        word: ContextualWord,
        pattern: Option<Pattern>,
    },
    NonContextual(ValueAssignment),
}

fn template(kind: PatternKind) -> Bracketing {
    let (mu, text) = match kind {
        PatternKind::Cherry => (fixtures::cherry(), fixtures::CHERRY_BRACKETING),
        PatternKind::Path => (fixtures::path(), fixtures::PATH_BRACKETING),
        PatternKind::Square => (fixtures::square(), fixtures::SQUARE_BRACKETING),
    };
    parse_bracketing(text, &mu).expect("templates parse")
}

/// Over `Z_2`: a contextual word if the commutation graph of `C(mu)` has an
/// induced cherry, path or square, otherwise a value assignment.
pub fn classify_z2(group: &Group, cap: u64) -> Result<Classification, ContextualityError> {
    let d = group.modulus().get();
    if d != 2 {
        return Err(ContextualityError::WrongModulus {
            expected: "2".into(),
            found: d,
        });
    }
    let monoid = compatible_submonoid(group, Seed::WithScalars, cap)?;
    let graph = CompatibilityGraph::new(monoid);
    let monoid = graph.monoid();
    let certify = |b: Bracketing| {
        ContextualWord::from_bracketing(b, group.mu())
            .map_err(|why| ContextualityError::Certificate(why.describe(group.mu().labels())))
    };

    if let Some(pattern) = graph.find_pattern() {
        let parts: Vec<Bracketing> = pattern
            .elements
            .iter()
            .map(|&i| {
                monoid
                    .witness(i)
                    .bracketing
                    .expect("non-central elements have a bracketing")
            })
            .collect();
        // An element squaring to J_1 is already a contextual word when doubled.
        for (&i, part) in pattern.elements.iter().zip(&parts) {
            let u = monoid.element(i);
            if !group.mul(&u, &u).phase.is_zero() {
                let word = certify(Bracketing::pair(part.clone(), part.clone()))?;
                return Ok(Classification::Contextual {
                    word,
                    pattern: Some(pattern),
                });
            }
        }
        let word = certify(template(pattern.kind).substitute(&|leaf| parts[leaf].clone()))?;
        return Ok(Classification::Contextual {
            word,
            pattern: Some(pattern),
        });
    }

    match value_assignment(group, cap)? {
        ValueOutcome::Assignment(l) => Ok(Classification::NonContextual(l)),
        ValueOutcome::Contextual(word) => Ok(Classification::Contextual {
            word,
            pattern: None,
        }),
    }
}

/// Appends `g^p` for each generator, with `p` bringing its multiplicity to a
/// multiple of `d`. The blocks are right-nested and paired with the input.
pub fn pad_word(
    word: &Word,
    bracketing: &Bracketing,
    embedded: &CommutatorMatrix,
) -> Result<(Word, Bracketing), ContextualityError> {
    let m = embedded.modulus();
    if !m.is_even() {
        return Err(ContextualityError::WrongModulus {
            expected: "an even modulus".into(),
            found: m.get(),
        });
    }
    let n = embedded.n();
    if let Some(index) = word
        .generators()
        .ok_or_else(|| ContextualityError::PhaseLetter {
            position: word
                .letters()
                .iter()
                .position(|l| matches!(l, crate::word::Letter::Phase(_)))
                .unwrap_or(0),
        })?
        .into_iter()
        .chain([bracketing.max_generator()])
        .find(|&g| g >= n)
    {
        return Err(ContextualityError::GeneratorOutOfRange { index, n });
    }
    if &bracketing.flatten() != word {
        return Err(ContextualityError::FlattenMismatch {
            expected: crate::word::format_word(word, embedded.labels()),
            found: crate::word::format_word(&bracketing.flatten(), embedded.labels()),
        });
    }
    let d = u64::from(m.get());
    let counts = word.multiplicities(n);
    if let Some((g, &count)) = counts.iter().enumerate().find(|(_, &c)| c % 2 != 0) {
        return Err(ContextualityError::OddMultiplicity {
            generator: embedded.label(g).to_string(),
            count,
        });
    }
    let blocks: Vec<Bracketing> = counts
        .iter()
        .enumerate()
        .filter_map(|(g, &c)| Bracketing::Leaf(g).repeated(((d - c % d) % d) as usize))
        .collect();
    let padded = match Bracketing::right_fold(blocks) {
        Some(tail) => Bracketing::pair(bracketing.clone(), tail),
        None => bracketing.clone(),
    };
    Ok((padded.flatten(), padded))
}

/// The five-generator `Z_4` matrix and its splitting word.
pub fn splitting_example() -> (CommutatorMatrix, Bracketing) {
    let mu = fixtures::splitting_matrix();
    let b = parse_bracketing(fixtures::SPLITTING_BRACKETING, &mu).expect("fixture parses");
    (mu, b)
}

/// Phase of the built-in splitting word, which must verify.
pub fn verify_splitting_example() -> Result<Scalar, ContextualityError> {
    let (mu, b) = splitting_example();
    match verify_contextual_word(&b.flatten(), &b, &mu)? {
        Verdict::Contextual(k) => Ok(k),
        Verdict::Rejected(why) => Err(ContextualityError::Certificate(why.describe(mu.labels()))),
    }
}
