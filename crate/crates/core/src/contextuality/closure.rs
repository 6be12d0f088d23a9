//! Commuting-product closures of the generators.
//!
//! The closure without scalars is grown breadth-first by witness length: an
//! element first reached as a product of witnesses of lengths `a` and `b`
//! gets length `a + b`, and the first witness found is kept. Since scalars
//! are central, adding them to the seed just multiplies every element of the
//! scalar-free closure by each `J_k`, which is how the full closure is built.

use std::collections::HashMap;

use crate::algebra::{CommutatorMatrix, Modulus, Scalar};
use crate::group::{Group, GroupElement, GroupError};
use crate::word::{Letter, Word};

use super::bracketing::Bracketing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Seed {
    /// Generators and every scalar `J_k`.
    WithScalars,
    /// Generators only.
    GeneratorsOnly,
}

/// Elements with their vectors, phases and the row vectors used to test
/// commutation and form products in `O(n)` without allocating.
#[derive(Debug, Clone)]
pub(crate) struct Table {
    modulus: Modulus,
    n: usize,
    phases: Vec<u32>,
    vectors: Vec<u32>,
    mu_rows: Vec<u32>,
    lower_rows: Vec<u32>,
    index: HashMap<Box<[u32]>, usize>,
}

impl Table {
    pub(crate) fn new(modulus: Modulus, n: usize) -> Self {
        Table {
            modulus,
            n,
            phases: Vec::new(),
            vectors: Vec::new(),
            mu_rows: Vec::new(),
            lower_rows: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.phases.len()
    }

    pub(crate) fn phase(&self, i: usize) -> u32 {
        self.phases[i]
    }

    pub(crate) fn vector(&self, i: usize) -> &[u32] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }

    fn dot(&self, row: &[u32], v: &[u32]) -> u32 {
        let d = u64::from(self.modulus.get());
        let mut acc = 0u64;
        for (&a, &b) in row.iter().zip(v) {
            acc += u64::from(a) * u64::from(b);
            if acc >= 1 << 62 {
                acc %= d;
            }
        }
        (acc % d) as u32
    }

    pub(crate) fn commutes(&self, i: usize, j: usize) -> bool {
        self.dot(&self.mu_rows[i * self.n..(i + 1) * self.n], self.vector(j)) == 0
    }

    /// Writes `phase, vector` of the product `i * j` into `key`.
    pub(crate) fn product_key(&self, i: usize, j: usize, key: &mut Vec<u32>) {
        let m = self.modulus;
        let cocycle = self.dot(&self.lower_rows[i * self.n..(i + 1) * self.n], self.vector(j));
        key.clear();
        key.push(m.add(m.add(self.phases[i], self.phases[j]), cocycle));
        key.extend(
            self.vector(i)
                .iter()
                .zip(self.vector(j))
                .map(|(&a, &b)| m.add(a, b)),
        );
    }

    pub(crate) fn lookup(&self, key: &[u32]) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Index of the product `i * j` if it is present.
    pub(crate) fn product(&self, i: usize, j: usize, scratch: &mut Vec<u32>) -> Option<usize> {
        self.product_key(i, j, scratch);
        self.lookup(scratch)
    }

    /// Appends `key = [phase, vector..]`; the caller ensures it is absent.
    pub(crate) fn push(&mut self, group: &Group, key: &[u32]) -> usize {
        let idx = self.len();
        let v = &key[1..];
        self.phases.push(key[0]);
        self.vectors.extend_from_slice(v);
        self.mu_rows
            .extend(group.mu().matrix().left_apply(v));
        self.lower_rows
            .extend(group.lower().matrix().left_apply(v));
        self.index.insert(key.into(), idx);
        idx
    }

    pub(crate) fn key_of(g: &GroupElement) -> Vec<u32> {
        let mut key = Vec::with_capacity(g.vector.len() + 1);
        key.push(g.phase.value());
        key.extend_from_slice(g.vector.as_slice());
        key
    }

    pub(crate) fn element(&self, group: &Group, i: usize) -> GroupElement {
        let m = self.modulus;
        let mut k: Vec<i64> = vec![i64::from(self.phases[i])];
        k.extend(self.vector(i).iter().map(|&x| i64::from(x)));
        let g = group
            .element(k[0], &k[1..])
            .expect("table entries belong to the group");
        debug_assert_eq!(g.phase.modulus(), m);
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Identity,
    Generator(usize),
    Product(usize, usize),
    /// `J_k` times a scalar-free element.
    Scaled(u32, usize),
}

/// Membership proof for an element: `J_phase` times the bracketed word, or
/// just `J_phase` when there is no bracketing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub phase: Scalar,
    pub bracketing: Option<Bracketing>,
}

impl Witness {
    pub fn word(&self) -> Word {
        let mut letters = Vec::new();
        if !self.phase.is_zero() {
            letters.push(Letter::Phase(self.phase.value()));
        }
        if let Some(b) = &self.bracketing {
            letters.extend(b.flatten().into_letters());
        }
        Word::new(letters)
    }

    pub fn render(&self, labels: &[String]) -> String {
        match (&self.bracketing, self.phase.is_zero()) {
            (None, true) => "1".to_string(),
            (None, false) => format!("J{}", self.phase),
            (Some(b), true) => b.render(labels),
            (Some(b), false) => format!("J{} {}", self.phase, b.render(labels)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StopOn {
    Never,
    NonzeroScalar,
    VectorConflict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Halt {
    Complete,
    Bound,
    Scalar(usize),
    /// A new element and an earlier one with the same vector.
    Conflict(usize, usize),
}

struct Closure {
    table: Table,
    origins: Vec<Origin>,
    lengths: Vec<usize>,
    halt: Halt,
}

fn close(group: &Group, max_len: Option<usize>, stop: StopOn) -> Closure {
    let m = group.modulus();
    let n = group.n();
    let mut table = Table::new(m, n);
    let mut origins = Vec::new();
    let mut lengths = Vec::new();
    let mut by_vector: HashMap<Box<[u32]>, usize> = HashMap::new();

    let mut key = vec![0u32; n + 1];
    table.push(group, &key);
    origins.push(Origin::Identity);
    lengths.push(0);
    by_vector.insert(vec![0u32; n].into(), 0);

    let mut buckets: Vec<Vec<usize>> = vec![vec![0], Vec::new()];
    if max_len.is_none_or(|b| b >= 1) {
        for i in 0..n {
            key.iter_mut().for_each(|x| *x = 0);
            key[1 + i] = 1;
            let idx = table.push(group, &key);
            by_vector.insert(key[1..].into(), idx);
            origins.push(Origin::Generator(i));
            lengths.push(1);
            buckets[1].push(idx);
        }
    }

    let starved = n > 0 && max_len == Some(0);
    let mut longest = if n > 0 { 1 } else { 0 };
    let mut target = 2;
    let halt = loop {
        if starved {
            break Halt::Bound;
        }
        if target > 2 * longest {
            break Halt::Complete;
        }
        if max_len.is_some_and(|b| target > b) {
            break Halt::Bound;
        }
        let mut fresh = Vec::new();
        let mut found = None;
        'outer: for a in 1..=target / 2 {
            let b = target - a;
            for (pos, &u) in buckets[a].iter().enumerate() {
                let partners = if a == b { &buckets[b][pos..] } else { &buckets[b][..] };
                for &v in partners {
                    if !table.commutes(u, v) {
                        continue;
                    }
                    table.product_key(u, v, &mut key);
                    if table.lookup(&key).is_some() {
                        continue;
                    }
                    let idx = table.push(group, &key);
                    origins.push(Origin::Product(u, v));
                    lengths.push(target);
                    fresh.push(idx);
                    match stop {
                        StopOn::Never => {}
                        StopOn::NonzeroScalar => {
                            if key[0] != 0 && key[1..].iter().all(|&x| x == 0) {
                                found = Some(Halt::Scalar(idx));
                                break 'outer;
                            }
                        }
                        StopOn::VectorConflict => {
                            let prior = *by_vector.entry(key[1..].into()).or_insert(idx);
                            if prior != idx {
                                found = Some(Halt::Conflict(idx, prior));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        if let Some(h) = found {
            break h;
        }
        if !fresh.is_empty() {
            longest = target;
        }
        buckets.push(fresh);
        target += 1;
    };
    Closure {
        table,
        origins,
        lengths,
        halt,
    }
}

/// A compatible submonoid with a witness for each element.
#[derive(Debug, Clone)]
pub struct CompatibleMonoid {
    group: Group,
    seed: Seed,
    table: Table,
    origins: Vec<Origin>,
    lengths: Vec<usize>,
    /// Number of leading elements that form the scalar-free closure.
    core: usize,
}

/// `C(mu)` for [`Seed::WithScalars`], `C'(mu)` for [`Seed::GeneratorsOnly`].
pub fn compatible_submonoid(
    group: &Group,
    seed: Seed,
    cap: u64,
) -> Result<CompatibleMonoid, GroupError> {
    group.check_cap(cap)?;
    let closure = close(group, None, StopOn::Never);
    Ok(CompatibleMonoid::from_closure(group, seed, closure))
}

impl CompatibleMonoid {
    fn from_closure(group: &Group, seed: Seed, closure: Closure) -> Self {
        let Closure {
            table,
            origins,
            lengths,
            ..
        } = closure;
        let core = CompatibleMonoid {
            group: group.clone(),
            seed: Seed::GeneratorsOnly,
            core: table.len(),
            table,
            origins,
            lengths,
        };
        match seed {
            Seed::GeneratorsOnly => core,
            Seed::WithScalars => core.with_scalars(),
        }
    }

    /// The monoid generated by this one and the scalars.
    pub fn with_scalars(&self) -> CompatibleMonoid {
        let mut out = self.clone();
        if self.seed == Seed::WithScalars {
            return out;
        }
        out.seed = Seed::WithScalars;
        let m = self.group.modulus();
        let mut key = Vec::with_capacity(self.group.n() + 1);
        for base in 0..self.core {
            for k in 1..m.get() {
                key.clear();
                key.push(m.add(self.table.phase(base), k));
                key.extend_from_slice(self.table.vector(base));
                if out.table.lookup(&key).is_none() {
                    out.table.push(&self.group, &key);
                    out.origins.push(Origin::Scaled(k, base));
                    out.lengths.push(self.lengths[base] + 1);
                }
            }
        }
        out
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn mu(&self) -> &CommutatorMatrix {
        self.group.mu()
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.len() == 0
    }

    /// Elements in the order they were reached; the identity comes first.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.len()).map(|i| self.element(i)).collect()
    }

    pub fn element(&self, i: usize) -> GroupElement {
        self.table.element(&self.group, i)
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        if self.group.check(g).is_err() {
            return None;
        }
        self.table.lookup(&Table::key_of(g))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index_of(g).is_some()
    }

    /// `i ⊙ j`.
    pub fn compatible(&self, i: usize, j: usize) -> bool {
        self.table.commutes(i, j)
    }

    /// Index of the product `i * j`, if it lies in the monoid.
    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        let mut scratch = Vec::new();
        self.table.product(i, j, &mut scratch)
    }

    pub(crate) fn table(&self) -> &Table {
        &self.table
    }

    /// Whether the element was reached without adding a scalar.
    pub fn is_scalar_free(&self, i: usize) -> bool {
        i < self.core
    }

    /// Number of generator letters in the element's witness.
    pub fn witness_length(&self, i: usize) -> usize {
        match self.origins[i] {
            Origin::Scaled(_, base) => self.lengths[base],
            _ => self.lengths[i],
        }
    }

    pub fn witness(&self, i: usize) -> Witness {
        let m = self.group.modulus();
        match self.origins[i] {
            Origin::Scaled(k, base) => Witness {
                phase: m.scalar(i64::from(k)),
                bracketing: bracketing_of(&self.origins, base),
            },
            _ => Witness {
                phase: m.zero(),
                bracketing: bracketing_of(&self.origins, i),
            },
        }
    }
}

fn bracketing_of(origins: &[Origin], i: usize) -> Option<Bracketing> {
    match origins[i] {
        Origin::Identity => None,
        Origin::Generator(g) => Some(Bracketing::Leaf(g)),
        Origin::Product(u, v) => Some(Bracketing::pair(
            bracketing_of(origins, u)?,
            bracketing_of(origins, v)?,
        )),
        Origin::Scaled(_, base) => bracketing_of(origins, base),
    }
}

/// Result of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(super::ContextualWord),
    /// Nothing up to `max_len`. `complete` is set when the whole closure was
    /// explored before reaching the bound.
    Exhausted {
        max_len: usize,
        explored: usize,
        complete: bool,
    },
}

/// Breadth-first search over commuting products for a nonzero scalar with a
/// witness of at most `max_len` letters.
pub fn search_contextual_word(group: &Group, max_len: usize) -> SearchOutcome {
    let closure = close(group, Some(max_len), StopOn::NonzeroScalar);
    match closure.halt {
        Halt::Scalar(idx) => {
            let b = bracketing_of(&closure.origins, idx).expect("scalar reached by a product");
            SearchOutcome::Found(
                super::ContextualWord::from_bracketing(b, group.mu())
                    .expect("closure scalars are contextual words"),
            )
        }
        halt => SearchOutcome::Exhausted {
            max_len,
            explored: closure.table.len(),
            complete: halt == Halt::Complete,
        },
    }
}

/// The scalar-free closure, or the two witnesses of a scalar conflict.
pub(crate) enum CoreClosure {
    Consistent(CompatibleMonoid),
    /// Bracketings of `g` and `h` (possibly absent for the identity) with
    /// equal vectors and different phases, plus the order of `h`.
    Conflict {
        g: Bracketing,
        h: Option<Bracketing>,
        h_element: GroupElement,
    },
}

pub(crate) fn core_closure(group: &Group, cap: u64) -> Result<CoreClosure, GroupError> {
    group.check_cap(cap)?;
    let closure = close(group, None, StopOn::VectorConflict);
    match closure.halt {
        Halt::Conflict(g, h) => Ok(CoreClosure::Conflict {
            g: bracketing_of(&closure.origins, g).expect("new elements are products"),
            h: bracketing_of(&closure.origins, h),
            h_element: closure.table.element(group, h),
        }),
        _ => Ok(CoreClosure::Consistent(CompatibleMonoid::from_closure(
            group,
            Seed::GeneratorsOnly,
            closure,
        ))),
    }
}
