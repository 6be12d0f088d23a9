use std::time::{Duration, Instant};

use proptest::prelude::*;

use commgroup::algebra::{bilinear, ExponentVector};
use commgroup::contextuality::{
    check_witness, compatible_submonoid, search_contextual_word, Bracketing, SearchOutcome, Seed,
};
use commgroup::darboux::{darboux_form, darboux_matrix, decide_darboux, standard_form, Decision};
use commgroup::group::DEFAULT_ENUMERATION_CAP;
use commgroup::representation::{compose_weyl, to_dense, WeylOperator, DEFAULT_DENSE_CAP, TOLERANCE};
use commgroup::rewrite::{
    formal_commutator, inversion_measure, inversion_sum, redexes, rewrite_at,
};
use commgroup::{normalize, CommutatorMatrix, Group, Letter, Modulus, Word};

fn matrix(d: i64, n: usize, lower: &[i64]) -> CommutatorMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    let mut it = lower.iter().cycle();
    for i in 0..n {
        for j in 0..i {
            let v = *it.next().unwrap_or(&0);
            rows[i][j] = v;
            rows[j][i] = -v;
        }
    }
    CommutatorMatrix::new(&rows, Modulus::new(d).unwrap(), None).unwrap()
}

fn mu_strategy(moduli: &'static [i64], max_n: usize) -> impl Strategy<Value = CommutatorMatrix> {
    (prop::sample::select(moduli), 1..=max_n, prop::collection::vec(0i64..64, 1..16))
        .prop_map(|(d, n, lower)| matrix(d, n, &lower))
}

fn mixed_word(n: usize, d: u32, len: std::ops::Range<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(
        prop_oneof![3 => (0..n).prop_map(Letter::Generator), 1 => (0..d).prop_map(Letter::Phase)],
        len,
    )
    .prop_map(Word::new)
}

fn mu_and_word(
    moduli: &'static [i64],
    max_n: usize,
    len: std::ops::Range<usize>,
) -> impl Strategy<Value = (CommutatorMatrix, Word)> {
    mu_strategy(moduli, max_n).prop_flat_map(move |mu| {
        let w = mixed_word(mu.n(), mu.modulus().get(), len.clone());
        (Just(mu), w)
    })
}

/// A binary tree over the leaves, with split points drawn from `cuts`.
fn tree(leaves: &[usize], cuts: &mut impl Iterator<Item = usize>) -> Bracketing {
    if leaves.len() == 1 {
        return Bracketing::Leaf(leaves[0]);
    }
    let at = 1 + cuts.next().unwrap_or(0) % (leaves.len() - 1);
    Bracketing::pair(tree(&leaves[..at], cuts), tree(&leaves[at..], cuts))
}

fn nodes(b: &Bracketing, out: &mut Vec<(Word, Word)>) {
    if let Bracketing::Pair(l, r) = b {
        out.push((l.flatten(), r.flatten()));
        nodes(l, out);
        nodes(r, out);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matrix_is_lower_minus_its_transpose(mu in mu_strategy(&[2, 3, 4, 6, 12], 6)) {
        let lower = mu.lower_part();
        let m = mu.modulus();
        for i in 0..mu.n() {
            for j in 0..mu.n() {
                prop_assert_eq!(mu.get(i, j), m.sub(lower.get(i, j), lower.get(j, i)));
            }
        }
    }

    #[test]
    fn bilinear_form_is_additive(
        mu in mu_strategy(&[2, 5, 6, 12], 5),
        seed in prop::collection::vec(0i64..100, 15),
    ) {
        let (n, m) = (mu.n(), mu.modulus());
        let v = |k: usize| ExponentVector::from_ints(&seed[k * 5..k * 5 + n], m);
        let (a, b, c) = (v(0), v(1), v(2));
        let form = mu.lower_part();
        let f = |x: &ExponentVector, y: &ExponentVector| bilinear(form.matrix(), x, y).unwrap();
        prop_assert_eq!(f(&a.add(&b), &c), f(&a, &c) + f(&b, &c));
        prop_assert_eq!(f(&a, &b.add(&c)), f(&a, &b) + f(&a, &c));
    }

    #[test]
    fn every_rewrite_step_decreases_the_measure(
        (mu, w) in mu_and_word(&[2, 3, 4, 5], 4, 0..14),
        picks in prop::collection::vec(any::<usize>(), 200),
    ) {
        let mut current = w;
        for pick in picks.iter().cycle() {
            let found = redexes(&current, &mu);
            if found.is_empty() {
                break;
            }
            let next = rewrite_at(&current, found[pick % found.len()], &mu);
            prop_assert!(inversion_measure(&next) < inversion_measure(&current));
            current = next;
        }
        prop_assert!(redexes(&current, &mu).is_empty());
        prop_assert_eq!(
            normalize(&current, &mu).to_word(),
            current
        );
    }

    #[test]
    fn normalisation_is_associative(
        (mu, u) in mu_and_word(&[2, 3, 4, 6], 4, 0..8),
        v in mixed_word(4, 2, 0..8),
        w in mixed_word(4, 2, 0..8),
    ) {
        let n = mu.n();
        let clip = |x: &Word| Word::new(x.letters().iter().map(|&l| match l {
            Letter::Generator(g) => Letter::Generator(g % n),
            p => p,
        }).collect());
        let (v, w) = (clip(&v), clip(&w));
        let theta = |x: &Word| normalize(x, &mu).to_word();
        let whole = theta(&u.concat(&v).concat(&w));
        prop_assert_eq!(&theta(&theta(&u.concat(&v)).concat(&w)), &whole);
        prop_assert_eq!(&theta(&u.concat(&theta(&v.concat(&w)))), &whole);
    }

    #[test]
    fn word_and_reversal_inversions_sum_to_pair_counts(
        mu in mu_strategy(&[2, 3, 4, 6, 12], 5),
        raw in prop::collection::vec(0usize..5, 0..20),
    ) {
        let n = mu.n();
        let w = Word::from_generators(&raw.iter().map(|g| g % n).collect::<Vec<_>>());
        let counts = w.multiplicities(n);
        let m = mu.modulus();
        let mut expected = m.zero();
        for x in 0..n {
            for y in x + 1..n {
                let times = (counts[x] * counts[y]) % u64::from(m.get());
                expected += m.scalar(times as i64) * mu.entry(y, x);
            }
        }
        let total = inversion_sum(&w, &mu).unwrap() + inversion_sum(&w.reversed(), &mu).unwrap();
        prop_assert_eq!(total, expected);
    }

    #[test]
    fn bracket_commutators_sum_to_inversion_difference(
        mu in mu_strategy(&[2, 3, 4, 6], 5),
        raw in prop::collection::vec(0usize..5, 1..16),
        cuts in prop::collection::vec(any::<usize>(), 16),
    ) {
        let n = mu.n();
        let leaves: Vec<usize> = raw.iter().map(|g| g % n).collect();
        let b = tree(&leaves, &mut cuts.into_iter());
        let mut pairs = Vec::new();
        nodes(&b, &mut pairs);
        let m = mu.modulus();
        let lhs = pairs
            .iter()
            .fold(m.zero(), |acc, (s, t)| acc + formal_commutator(s, t, &mu).unwrap());
        let s = b.flatten();
        let rhs = inversion_sum(&s, &mu).unwrap() - inversion_sum(&s.reversed(), &mu).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_form_agrees_with_group_product(
        (mu, w) in mu_and_word(&[2, 3, 4, 5, 6], 5, 0..24),
    ) {
        let g = Group::new(mu.clone());
        prop_assert_eq!(g.from_normal_form(&normalize(&w, &mu)), g.evaluate(&w));
    }

    #[test]
    fn cogredient_results_are_verified(mu in mu_strategy(&[2, 3, 4, 6, 8, 12], 6)) {
        for r in [standard_form(&mu), darboux_form(&mu)] {
            prop_assert!(r.base.is_invertible());
            prop_assert!(r.verify(&mu));
        }
    }

    #[test]
    fn dense_composition_matches_symbolic(
        d in prop::sample::select(&[2i64, 3, 4, 5][..]),
        n in 1usize..=3,
        raw in prop::collection::vec(0i64..20, 14),
    ) {
        let m = Modulus::new(d).unwrap();
        let op = |o: usize| WeylOperator {
            phase: m.scalar(raw[o]),
            shift: ExponentVector::from_ints(&raw[o + 1..o + 1 + n], m),
            clock: ExponentVector::from_ints(&raw[o + 4..o + 4 + n], m),
        };
        let (p, q) = (op(0), op(7));
        let lhs = to_dense(&compose_weyl(&p, &q).unwrap(), DEFAULT_DENSE_CAP).unwrap();
        let dp = to_dense(&p, DEFAULT_DENSE_CAP).unwrap();
        let rhs = dp.mul(&to_dense(&q, DEFAULT_DENSE_CAP).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, TOLERANCE));
        prop_assert!(dp.is_monomial(m.get(), TOLERANCE));
        prop_assert!(dp.is_unitary(TOLERANCE));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn odd_modulus_witnessed_words_share_phases(mu in mu_strategy(&[3, 5], 4)) {
        let group = Group::new(mu.clone());
        let monoid = compatible_submonoid(&group, Seed::GeneratorsOnly, DEFAULT_ENUMERATION_CAP).unwrap();
        let mut phase_of = std::collections::HashMap::new();
        for i in 0..monoid.len() {
            let w = monoid.witness(i);
            let Some(b) = w.bracketing else { continue };
            prop_assert!(check_witness(&b, &mu));
            let word = b.flatten();
            let nf = normalize(&word, &mu);
            let key: Vec<u64> = word
                .multiplicities(mu.n())
                .iter()
                .map(|c| c % u64::from(mu.modulus().get()))
                .collect();
            if let Some(prior) = phase_of.insert(key, nf.phase) {
                prop_assert_eq!(prior, nf.phase);
            }
        }
    }

    #[test]
    fn contextual_words_have_phase_half_the_modulus(mu in mu_strategy(&[2, 4, 6], 4)) {
        let group = Group::new(mu.clone());
        if let SearchOutcome::Found(w) = search_contextual_word(&group, 10) {
            let d = mu.modulus().get();
            prop_assert_eq!(w.phase().value() * 2, d);
            prop_assert!((w.phase() + w.phase()).is_zero());
        }
    }

    #[test]
    fn block_decision_agrees_with_search(
        d in prop::sample::select(&[2i64, 4, 6][..]),
        lambdas in prop::collection::vec(0i64..6, 1..=2),
        extra in 0usize..=1,
    ) {
        let extra = if lambdas.len() == 2 { 0 } else { extra };
        let mu = darboux_matrix(&lambdas, extra, Modulus::new(d).unwrap()).unwrap();
        let decision = decide_darboux(&mu).unwrap();
        if let Decision::Contextual { word, .. } = &decision {
            prop_assert_eq!(i64::from(word.phase().value()) * 2, d);
        }
        if let SearchOutcome::Found(_) = search_contextual_word(&Group::new(mu.clone()), 12) {
            let contextual = matches!(decision, Decision::Contextual { .. });
            prop_assert!(contextual);
        }
    }
}

#[test]
fn commutator_value_is_antisymmetric() {
    for d in 2..=3 {
        for n in 1..=3 {
            let lower: Vec<i64> = (0..6).map(|i| (i * 7 + d) % d).collect();
            let mu = matrix(d, n, &lower);
            let g = Group::new(mu.clone());
            let vectors: Vec<ExponentVector> = g
                .enumerate(DEFAULT_ENUMERATION_CAP)
                .unwrap()
                .filter(|e| e.phase.is_zero())
                .map(|e| e.vector)
                .collect();
            for k in &vectors {
                for l in &vectors {
                    let a = mu.commutator_value(k, l).unwrap();
                    let b = mu.commutator_value(l, k).unwrap();
                    assert_eq!(a, -b);
                }
            }
        }
    }
}

#[test]
fn group_axioms_hold_exhaustively() {
    for d in 2..=3 {
        for n in 1..=2 {
            for entry in 0..d {
                let mu = matrix(d, n, &[entry]);
                let g = Group::new(mu);
                let all: Vec<_> = g.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().collect();
                let e = g.identity();
                for a in &all {
                    assert_eq!(g.multiply(a, &e).unwrap(), *a);
                    assert_eq!(g.multiply(&e, a).unwrap(), *a);
                    let inv = g.inverse(a).unwrap();
                    assert_eq!(g.multiply(a, &inv).unwrap(), e);
                    assert_eq!(g.multiply(&inv, a).unwrap(), e);
                    for k in 0..d {
                        assert!(g.commutes(&g.scalar(k), a));
                    }
                    for b in &all {
                        let ab = g.multiply(a, b).unwrap();
                        for c in &all {
                            assert_eq!(
                                g.multiply(&ab, c).unwrap(),
                                g.multiply(a, &g.multiply(b, c).unwrap()).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn nonabelian_group_has_no_left_splitting() {
    let mu = matrix(2, 2, &[1]);
    let g = Group::new(mu);
    let all: Vec<_> = g.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().collect();
    let codes: Vec<u64> = all.iter().map(|x| g.encode(x)).collect();
    let mut found = 0;
    for map in 0u32..(1 << all.len()) {
        let value = |x: &commgroup::GroupElement| {
            let i = codes.iter().position(|&c| c == g.encode(x)).unwrap();
            (map >> i) & 1
        };
        let fixes_scalars = (0..2).all(|k| value(&g.scalar(k)) == k as u32);
        let additive = all.iter().all(|a| {
            all.iter()
                .all(|b| value(&g.multiply(a, b).unwrap()) == (value(a) + value(b)) % 2)
        });
        if fixes_scalars && additive {
            found += 1;
        }
    }
    assert_eq!(found, 0);
}

#[test]
fn long_words_normalise_quickly() {
    let mu = matrix(6, 8, &[1, 5, 2, 0, 3, 4, 1]);
    let letters: Vec<usize> = (0..20_000).map(|i| (i * 7 + i / 3) % 8).collect();
    let w = Word::from_generators(&letters);
    let start = Instant::now();
    let nf = normalize(&w, &mu);
    let elapsed = start.elapsed();
    assert_eq!(Group::new(mu.clone()).from_normal_form(&nf), Group::new(mu).evaluate(&w));
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
}
