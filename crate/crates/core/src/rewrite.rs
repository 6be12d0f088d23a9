//! The oriented rewrite system on words over `X ⊔ Z_d`:
//!
//! ```text
//! x y   -> J_mu(x,y) y x     (x > y)
//! J_0   -> 1
//! J_k J_k' -> J_(k+k')
//! x J_k -> J_k x
//! x^d   -> 1
//! ```
//!
//! Normal forms are `J_k x1^k1 ... xn^kn` with `0 <= ki < d`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CommutatorMatrix, ExponentVector, Scalar};
use crate::word::{format_word, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("phase letter at position {position} in a generator-only word")]
    PhaseLetter { position: usize },
}

/// Which rule a rewrite step used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `x y -> J_mu(x,y) y x` for `x > y`.
    Commute,
    /// `J_0 -> 1`.
    DropIdentityPhase,
    /// `J_k J_k' -> J_(k+k')`.
    MergePhases,
    /// `x J_k -> J_k x`.
    PhaseLeft,
    /// `x^d -> 1`.
    PowerVanishes,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Commute => "commute",
            Rule::DropIdentityPhase => "drop_j0",
            Rule::MergePhases => "merge_phases",
            Rule::PhaseLeft => "phase_left",
            Rule::PowerVanishes => "power_vanishes",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An occurrence of a rule's left-hand side inside a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Redex {
    pub position: usize,
    pub len: usize,
    pub rule: Rule,
}

/// All redexes of `word`, ordered by position then length.
pub fn redexes(word: &Word, mu: &CommutatorMatrix) -> Vec<Redex> {
    let letters = word.letters();
    let d = mu.modulus().get() as usize;
    let mut out = Vec::new();
    for p in 0..letters.len() {
        if letters[p] == Letter::Phase(0) {
            out.push(Redex {
                position: p,
                len: 1,
                rule: Rule::DropIdentityPhase,
            });
        }
        if let Some(&next) = letters.get(p + 1) {
            let rule = match (letters[p], next) {
                (Letter::Phase(_), Letter::Phase(_)) => Some(Rule::MergePhases),
                (Letter::Generator(_), Letter::Phase(_)) => Some(Rule::PhaseLeft),
                (Letter::Generator(x), Letter::Generator(y)) if x > y => Some(Rule::Commute),
                _ => None,
            };
            if let Some(rule) = rule {
                out.push(Redex {
                    position: p,
                    len: 2,
                    rule,
                });
            }
        }
        if let Letter::Generator(x) = letters[p] {
            if p + d <= letters.len() && letters[p..p + d].iter().all(|&l| l == Letter::Generator(x))
            {
                out.push(Redex {
                    position: p,
                    len: d,
                    rule: Rule::PowerVanishes,
                });
            }
        }
    }
    out.sort_by_key(|r| (r.position, r.len));
    out
}

/// Rewrites one redex. The redex must come from [`redexes`] on the same word.
pub fn rewrite_at(word: &Word, redex: Redex, mu: &CommutatorMatrix) -> Word {
    let letters = word.letters();
    let m = mu.modulus();
    let p = redex.position;
    let replacement: Vec<Letter> = match (redex.rule, &letters[p..p + redex.len]) {
        (Rule::Commute, &[Letter::Generator(x), Letter::Generator(y)]) => vec![
            Letter::Phase(mu.get(x, y)),
            Letter::Generator(y),
            Letter::Generator(x),
        ],
        (Rule::DropIdentityPhase, &[Letter::Phase(0)]) => vec![],
        (Rule::MergePhases, &[Letter::Phase(a), Letter::Phase(b)]) => {
            vec![Letter::Phase(m.add(a, b))]
        }
        (Rule::PhaseLeft, &[x @ Letter::Generator(_), k @ Letter::Phase(_)]) => vec![k, x],
        (Rule::PowerVanishes, _) => vec![],
        (rule, found) => panic!("redex {rule} does not match {found:?}"),
    };
    let mut out = Vec::with_capacity(letters.len() + 1);
    out.extend_from_slice(&letters[..p]);
    out.extend(replacement);
    out.extend_from_slice(&letters[p + redex.len..]);
    Word::new(out)
}

/// One leftmost-innermost rewrite step, or `None` if `word` is irreducible.
pub fn apply_step(word: &Word, mu: &CommutatorMatrix) -> Option<(Word, Rule)> {
    let redex = redexes(word, mu).into_iter().next()?;
    Some((rewrite_at(word, redex, mu), redex.rule))
}

/// A single traced step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub before: Word,
    pub after: Word,
}

impl Step {
    pub fn render(&self, labels: &[String]) -> String {
        format!(
            "{}: {} -> {}",
            self.rule,
            render_or_one(&self.before, labels),
            render_or_one(&self.after, labels)
        )
    }
}

fn render_or_one(word: &Word, labels: &[String]) -> String {
    if word.is_empty() {
        "1".to_string()
    } else {
        format_word(word, labels)
    }
}

/// Rewrites to the normal form one leftmost-innermost step at a time,
/// recording every step.
pub fn normalize_traced(word: &Word, mu: &CommutatorMatrix) -> (NormalForm, Vec<Step>) {
    let mut steps = Vec::new();
    let mut current = word.clone();
    while let Some((next, rule)) = apply_step(&current, mu) {
        steps.push(Step {
            rule,
            before: current,
            after: next.clone(),
        });
        current = next;
    }
    let nf = NormalForm::from_normal_word(&current, mu)
        .expect("irreducible words are normal forms");
    (nf, steps)
}

/// A normal form `J_k x1^k1 ... xn^kn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub phase: Scalar,
    pub exponents: ExponentVector,
}

impl NormalForm {
    pub fn identity(mu: &CommutatorMatrix) -> Self {
        NormalForm {
            phase: mu.modulus().zero(),
            exponents: ExponentVector::zero(mu.n(), mu.modulus()),
        }
    }

    /// The canonical word; `J_0` is omitted.
    pub fn to_word(&self) -> Word {
        let mut letters = Vec::new();
        if !self.phase.is_zero() {
            letters.push(Letter::Phase(self.phase.value()));
        }
        for (i, &k) in self.exponents.as_slice().iter().enumerate() {
            letters.extend(std::iter::repeat_n(Letter::Generator(i), k as usize));
        }
        Word::new(letters)
    }

    /// Decodes an irreducible word; `None` if the word is not of normal shape.
    pub fn from_normal_word(word: &Word, mu: &CommutatorMatrix) -> Option<Self> {
        let m = mu.modulus();
        let letters = word.letters();
        let (phase, rest) = match letters.first() {
            Some(&Letter::Phase(k)) if k != 0 => (k, &letters[1..]),
            _ => (0, letters),
        };
        let mut counts = vec![0i64; mu.n()];
        let mut last = None;
        for &l in rest {
            let Letter::Generator(g) = l else { return None };
            if last.is_some_and(|p| p > g) {
                return None;
            }
            last = Some(g);
            counts[g] += 1;
        }
        if counts.iter().any(|&c| c >= i64::from(m.get())) {
            return None;
        }
        Some(NormalForm {
            phase: m.scalar(i64::from(phase)),
            exponents: ExponentVector::from_ints(&counts, m),
        })
    }

    pub fn render(&self, labels: &[String]) -> String {
        render_or_one(&self.to_word(), labels)
    }
}

/// The normal form of `word`.
///
/// Runs the strategy that inserts each letter into an already-normal prefix:
/// a generator is moved left past every larger generator (each move a
/// `Commute` step whose phase is carried straight to the front), phases merge
/// into the leading phase, and completed `x^d` runs vanish. The prefix is kept
/// as exponent counts, so this is `O(len * n)`. Confluence makes the result
/// independent of strategy; tests compare it with [`normalize_traced`].
///
/// Panics if `word` mentions a generator outside `mu`.
pub fn normalize(word: &Word, mu: &CommutatorMatrix) -> NormalForm {
    let m = mu.modulus();
    let n = mu.n();
    let mut phase = 0u32;
    let mut counts = vec![0u32; n];
    for &letter in word.letters() {
        match letter {
            Letter::Phase(k) => phase = m.add(phase, m.reduce(i64::from(k))),
            Letter::Generator(x) => {
                assert!(x < n, "generator index {x} out of range for {n} generators");
                for (g, &c) in counts.iter().enumerate().skip(x + 1) {
                    if c != 0 {
                        phase = m.add(phase, m.mul(c, mu.get(g, x)));
                    }
                }
                counts[x] = m.add(counts[x], 1);
            }
        }
    }
    NormalForm {
        phase: m.scalar(i64::from(phase)),
        exponents: ExponentVector::from_ints(
            &counts.iter().map(|&c| i64::from(c)).collect::<Vec<_>>(),
            m,
        ),
    }
}

/// Decides `u = v` in the presented group.
pub fn words_equal(u: &Word, v: &Word, mu: &CommutatorMatrix) -> bool {
    normalize(u, mu) == normalize(v, mu)
}

/// The termination measure: (generator inversions, phase inversions, length),
/// compared lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InversionMeasure {
    pub x_inversions: u64,
    pub j_inversions: u64,
    pub length: u64,
}

pub fn inversion_measure(word: &Word) -> InversionMeasure {
    let mut x_inversions = 0u64;
    let mut j_inversions = 0u64;
    let mut generators_seen: Vec<usize> = Vec::new();
    for &letter in word.letters() {
        match letter {
            Letter::Phase(_) => j_inversions += generators_seen.len() as u64,
            Letter::Generator(y) => {
                x_inversions += generators_seen.iter().filter(|&&x| x > y).count() as u64;
                generators_seen.push(y);
            }
        }
    }
    InversionMeasure {
        x_inversions,
        j_inversions,
        length: word.len() as u64,
    }
}

fn generator_indices(word: &Word) -> Result<Vec<usize>, RewriteError> {
    word.letters()
        .iter()
        .enumerate()
        .map(|(position, l)| match *l {
            Letter::Generator(g) => Ok(g),
            Letter::Phase(_) => Err(RewriteError::PhaseLetter { position }),
        })
        .collect()
}

/// Sum of `mu(x, y)` over all inversions `x ... y`, `x > y`, of a
/// generator-only word. Equals the phase of its normal form.
pub fn inversion_sum(word: &Word, mu: &CommutatorMatrix) -> Result<Scalar, RewriteError> {
    let gens = generator_indices(word)?;
    let m = mu.modulus();
    let mut total = 0u32;
    for (i, &x) in gens.iter().enumerate() {
        for &y in &gens[i + 1..] {
            if x > y {
                total = m.add(total, mu.get(x, y));
            }
        }
    }
    Ok(m.scalar(i64::from(total)))
}

/// Sum of `mu(x, y)` over pairs with `x` in `s`, `y` in `t` and `x > y`.
pub fn inversion_sum_between(
    s: &Word,
    t: &Word,
    mu: &CommutatorMatrix,
) -> Result<Scalar, RewriteError> {
    let (s, t) = (generator_indices(s)?, generator_indices(t)?);
    let m = mu.modulus();
    let mut total = 0u32;
    for &x in &s {
        for &y in &t {
            if x > y {
                total = m.add(total, mu.get(x, y));
            }
        }
    }
    Ok(m.scalar(i64::from(total)))
}

/// The formal commutator `I(s,t) - I(t,s)`; zero iff `s` and `t` commute.
pub fn formal_commutator(s: &Word, t: &Word, mu: &CommutatorMatrix) -> Result<Scalar, RewriteError> {
    Ok(inversion_sum_between(s, t, mu)? - inversion_sum_between(t, s, mu)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Modulus;
    use crate::word::parse_word;

    fn two_gen(d: i64, a: i64) -> CommutatorMatrix {
        CommutatorMatrix::new(&[vec![0, a], vec![-a, 0]], Modulus::new(d).unwrap(), None)
            .unwrap()
    }

    fn fixpoint(word: &Word, mu: &CommutatorMatrix) -> Word {
        let mut w = word.clone();
        while let Some((next, _)) = apply_step(&w, mu) {
            w = next;
        }
        w
    }

    #[test]
    fn commute_step() {
        // mu(x2,x1) = 1 over Z_2
        let mu = two_gen(2, 1);
        let w = parse_word("x2 x1", &mu).unwrap();
        let (next, rule) = apply_step(&w, &mu).unwrap();
        assert_eq!(rule, Rule::Commute);
        assert_eq!(next, parse_word("J1 x1 x2", &mu).unwrap());
    }

    #[test]
    fn power_and_phase_steps() {
        let mu = two_gen(2, 1);
        let (next, rule) = apply_step(&parse_word("x1 x1", &mu).unwrap(), &mu).unwrap();
        assert_eq!((next, rule), (Word::empty(), Rule::PowerVanishes));
        let (next, rule) = apply_step(&parse_word("x1 J1", &mu).unwrap(), &mu).unwrap();
        assert_eq!(rule, Rule::PhaseLeft);
        assert_eq!(next, parse_word("J1 x1", &mu).unwrap());
        let (next, rule) = apply_step(&parse_word("J1 J1", &mu).unwrap(), &mu).unwrap();
        assert_eq!((next, rule), (Word::new(vec![Letter::Phase(0)]), Rule::MergePhases));
        assert!(apply_step(&parse_word("J1 x1 x2", &mu).unwrap(), &mu).is_none());
    }

    #[test]
    fn zero_commutator_still_emits_identity_phase() {
        let mu = two_gen(3, 0);
        let (next, _) = apply_step(&parse_word("x2 x1", &mu).unwrap(), &mu).unwrap();
        assert_eq!(next.letters()[0], Letter::Phase(0));
        assert_eq!(normalize(&next, &mu), normalize(&parse_word("x1 x2", &mu).unwrap(), &mu));
    }

    #[test]
    fn faithfulness_example() {
        // y x y^(d-1) x^(d-1) = J_((d-1) a) = J_(-a)
        for a in 0..3 {
            let mu = two_gen(3, a);
            let w = parse_word("x2 x1 x2^2 x1^2", &mu).unwrap();
            let nf = normalize(&w, &mu);
            assert_eq!(nf.phase.value(), Modulus::new(3).unwrap().reduce(-a));
            assert!(nf.exponents.is_zero());
            assert_eq!(nf.to_word(), fixpoint(&w, &mu));
        }
    }

    #[test]
    fn empty_word_normalizes_to_identity() {
        let mu = two_gen(4, 1);
        assert_eq!(normalize(&Word::empty(), &mu), NormalForm::identity(&mu));
        let (nf, steps) = normalize_traced(&Word::empty(), &mu);
        assert_eq!(nf, NormalForm::identity(&mu));
        assert!(steps.is_empty());
    }

    #[test]
    fn measure_examples() {
        let mu = two_gen(2, 1);
        let m = |s| inversion_measure(&parse_word(s, &mu).unwrap());
        assert_eq!(
            m("x2 x1"),
            InversionMeasure {
                x_inversions: 1,
                j_inversions: 0,
                length: 2
            }
        );
        assert_eq!(m("J1 x1 x2").x_inversions, 0);
        assert_eq!(m("J1 x1 x2").j_inversions, 0);
        assert_eq!(m("x1 J1 x2").j_inversions, 1);
    }

    #[test]
    fn word_problem_examples() {
        let mu = two_gen(3, 2);
        let w = |s| parse_word(s, &mu).unwrap();
        assert!(words_equal(&w("J0"), &w(""), &mu));
        // x1 x2 = J_mu(x1,x2) x2 x1
        assert!(words_equal(&w("x1 x2"), &w("J2 x2 x1"), &mu));
        assert!(!words_equal(&w("J1"), &w("J2"), &mu));
    }

    #[test]
    fn trace_ends_at_normal_form() {
        let mu = two_gen(3, 1);
        let w = parse_word("x2 J1 x1 x2 x1", &mu).unwrap();
        let (nf, steps) = normalize_traced(&w, &mu);
        assert_eq!(nf, normalize(&w, &mu));
        assert_eq!(steps.first().unwrap().before, w);
        for pair in steps.windows(2) {
            assert_eq!(pair[0].after, pair[1].before);
        }
        assert!(steps[0].render(mu.labels()).starts_with("phase_left: x2 J1"));
    }

    #[test]
    fn inversion_sum_examples() {
        let mu = two_gen(5, 3);
        let w = |s| parse_word(s, &mu).unwrap();
        assert!(inversion_sum(&w("x1 x1 x2"), &mu).unwrap().is_zero());
        assert_eq!(inversion_sum(&w("x2 x1"), &mu).unwrap().value(), mu.get(1, 0));
        assert_eq!(
            inversion_sum(&w("x1 J1"), &mu),
            Err(RewriteError::PhaseLetter { position: 1 })
        );
        let s = w("x1 x2 x2");
        assert!(formal_commutator(&s, &s, &mu).unwrap().is_zero());
    }
}
