//! Value assignments (left splittings) on compatible monoids.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{ExponentVector, Modulus, Scalar};
use crate::group::{ElementRecord, Group, GroupElement};

use super::bracketing::Bracketing;
use super::closure::{core_closure, CompatibleMonoid, CoreClosure};
use super::{ContextualWord, ContextualityError};

/// The scalar `s(v)` of the unique scalar-free closure element with vector `v`.
#[derive(Debug, Clone)]
pub struct CanonicalScalar {
    map: HashMap<ExponentVector, Scalar>,
}

impl CanonicalScalar {
    pub fn get(&self, v: &ExponentVector) -> Option<Scalar> {
        self.map.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExponentVector, &Scalar)> {
        self.map.iter()
    }
}

#[derive(Debug, Clone)]
pub enum CanonicalOutcome {
    /// `s` is well defined; the scalar-free closure is returned with it.
    Consistent {
        monoid: CompatibleMonoid,
        scalar: CanonicalScalar,
    },
    Conflict(ContextualWord),
}

/// Builds `s` over the scalar-free closure, or extracts a contextual word from
/// the first two elements found with equal vectors and different phases.
pub fn canonical_scalar_assignment(
    group: &Group,
    cap: u64,
) -> Result<CanonicalOutcome, ContextualityError> {
    match core_closure(group, cap)? {
        CoreClosure::Consistent(monoid) => {
            let map = (0..monoid.len())
                .map(|i| {
                    let g = monoid.element(i);
                    (g.vector, g.phase)
                })
                .collect();
            Ok(CanonicalOutcome::Consistent {
                monoid,
                scalar: CanonicalScalar { map },
            })
        }
        CoreClosure::Conflict { g, h, h_element } => {
            // g h^(o-1) = g h^-1 is a nonzero scalar.
            let bracketing = match h {
                None => g,
                Some(h) => {
                    let order = group.element_order(&h_element) as usize;
                    match h.repeated(order - 1) {
                        Some(tail) => Bracketing::pair(g, tail),
                        None => g,
                    }
                }
            };
            ContextualWord::from_bracketing(bracketing, group.mu())
                .map(CanonicalOutcome::Conflict)
                .map_err(|why| {
                    ContextualityError::Certificate(why.describe(group.mu().labels()))
                })
        }
    }
}

/// A map from a compatible monoid to `Z_d`.
#[derive(Debug, Clone)]
pub struct ValueAssignment {
    monoid: CompatibleMonoid,
    values: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssignmentViolation {
    ScalarNotFixed { element: GroupElement, value: Scalar },
    NotClosed { g: GroupElement, h: GroupElement },
    NotAdditive { g: GroupElement, h: GroupElement },
}

/// JSON entry `{"element": {"k": .., "vec": [..]}, "value": ..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentEntry {
    pub element: ElementRecord,
    pub value: u32,
}

impl ValueAssignment {
    /// Pairs each monoid element (by index) with a value; lengths must agree.
    pub fn new(monoid: CompatibleMonoid, values: Vec<Scalar>) -> Result<Self, ContextualityError> {
        if values.len() != monoid.len() {
            return Err(ContextualityError::ModelMismatch(format!(
                "{} values for {} elements",
                values.len(),
                monoid.len()
            )));
        }
        Ok(ValueAssignment { monoid, values })
    }

    pub fn monoid(&self) -> &CompatibleMonoid {
        &self.monoid
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn get(&self, g: &GroupElement) -> Option<Scalar> {
        self.monoid.index_of(g).map(|i| self.values[i])
    }

    /// Checks `l(k, 0) = k` and `l(gh) = l(g) + l(h)` over every commuting
    /// pair of the domain.
    pub fn validate(&self) -> Result<(), AssignmentViolation> {
        let table = self.monoid.table();
        let n = self.monoid.len();
        for i in 0..n {
            if table.vector(i).iter().all(|&x| x == 0) && self.values[i].value() != table.phase(i)
            {
                return Err(AssignmentViolation::ScalarNotFixed {
                    element: self.monoid.element(i),
                    value: self.values[i],
                });
            }
        }
        let mut scratch = Vec::new();
        for i in 0..n {
            for j in i..n {
                if !table.commutes(i, j) {
                    continue;
                }
                let Some(p) = table.product(i, j, &mut scratch) else {
                    return Err(AssignmentViolation::NotClosed {
                        g: self.monoid.element(i),
                        h: self.monoid.element(j),
                    });
                };
                if self.values[p] != self.values[i] + self.values[j] {
                    return Err(AssignmentViolation::NotAdditive {
                        g: self.monoid.element(i),
                        h: self.monoid.element(j),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> Vec<AssignmentEntry> {
        (0..self.monoid.len())
            .map(|i| AssignmentEntry {
                element: self.monoid.element(i).record(),
                value: self.values[i].value(),
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub enum ValueOutcome {
    Assignment(ValueAssignment),
    Contextual(ContextualWord),
}

/// `l(k, v) = k - s(v)` on the full closure, validated exhaustively.
pub fn value_assignment(group: &Group, cap: u64) -> Result<ValueOutcome, ContextualityError> {
    let (core, scalar) = match canonical_scalar_assignment(group, cap)? {
        CanonicalOutcome::Conflict(word) => return Ok(ValueOutcome::Contextual(word)),
        CanonicalOutcome::Consistent { monoid, scalar } => (monoid, scalar),
    };
    let monoid = core.with_scalars();
    let values = (0..monoid.len())
        .map(|i| {
            let g = monoid.element(i);
            let s = scalar
                .get(&g.vector)
                .expect("every vector of the closure has a canonical scalar");
            g.phase - s
        })
        .collect();
    let assignment = ValueAssignment::new(monoid, values)?;
    assignment
        .validate()
        .map_err(|v| ContextualityError::Certificate(format!("{v:?}")))?;
    Ok(ValueOutcome::Assignment(assignment))
}

/// Exhaustive backtracking search for any left splitting of `monoid`, with
/// constraint propagation. Independent of the canonical construction.
pub fn search_left_splitting(monoid: &CompatibleMonoid) -> Option<Vec<Scalar>> {
    let members: Vec<usize> = (0..monoid.len()).collect();
    let mut solver = Propagator::new(monoid, &members)?;
    let m = monoid.group().modulus();
    solver
        .solutions(Some(1))
        .pop()
        .map(|values| values.into_iter().map(|v| m.scalar(i64::from(v))).collect())
}

/// Additivity constraints `l(p) = l(i) + l(j)` over the commuting pairs of a
/// set of monoid elements, with scalars fixed.
pub(super) struct Propagator {
    modulus: Modulus,
    constraints: Vec<[usize; 3]>,
    watch: Vec<Vec<usize>>,
    values: Vec<Option<u32>>,
    trail: Vec<usize>,
    consistent: bool,
}

impl Propagator {
    /// `None` if some commuting product leaves `members`.
    pub(super) fn new(monoid: &CompatibleMonoid, members: &[usize]) -> Option<Self> {
        let table = monoid.table();
        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(l, &g)| (g, l)).collect();
        let n = members.len();
        let mut constraints: Vec<[usize; 3]> = Vec::new();
        let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut scratch = Vec::new();
        for i in 0..n {
            for j in i..n {
                if !table.commutes(members[i], members[j]) {
                    continue;
                }
                let p = *local.get(&table.product(members[i], members[j], &mut scratch)?)?;
                let id = constraints.len();
                constraints.push([i, j, p]);
                for v in [i, j, p] {
                    if watch[v].last() != Some(&id) {
                        watch[v].push(id);
                    }
                }
            }
        }
        let mut solver = Propagator {
            modulus: monoid.group().modulus(),
            constraints,
            watch,
            values: vec![None; n],
            trail: Vec::new(),
            consistent: true,
        };
        for (l, &g) in members.iter().enumerate() {
            if table.vector(g).iter().all(|&x| x == 0) && !solver.assign(l, table.phase(g)) {
                solver.consistent = false;
            }
        }
        solver.trail.clear();
        Some(solver)
    }

    fn assign(&mut self, var: usize, value: u32) -> bool {
        let m = self.modulus;
        let mut queue = vec![(var, value)];
        while let Some((v, x)) = queue.pop() {
            match self.values[v] {
                Some(y) if y == x => continue,
                Some(_) => return false,
                None => {
                    self.values[v] = Some(x);
                    self.trail.push(v);
                }
            }
            for &c in &self.watch[v] {
                let [i, j, p] = self.constraints[c];
                match (self.values[i], self.values[j], self.values[p]) {
                    (Some(a), Some(b), Some(c)) => {
                        if m.add(a, b) != c {
                            return false;
                        }
                    }
                    (Some(a), Some(b), None) => queue.push((p, m.add(a, b))),
                    (Some(a), None, Some(c)) if i != j => queue.push((j, m.sub(c, a))),
                    (None, Some(b), Some(c)) if i != j => queue.push((i, m.sub(c, b))),
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.values[v] = None;
        }
    }

    /// Every complete consistent assignment, up to `limit` of them.
    pub(super) fn solutions(&mut self, limit: Option<usize>) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if self.consistent {
            self.enumerate(limit, &mut out);
        }
        out
    }

    fn enumerate(&mut self, limit: Option<usize>, out: &mut Vec<Vec<u32>>) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        let Some(var) = self.values.iter().position(Option::is_none) else {
            out.push(self.values.iter().map(|v| v.expect("complete")).collect());
            return;
        };
        for value in 0..self.modulus.get() {
            let mark = self.trail.len();
            if self.assign(var, value) {
                self.enumerate(limit, out);
            }
            self.undo(mark);
            if limit.is_some_and(|l| out.len() >= l) {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{CommutatorMatrix, Modulus};
    use crate::contextuality::closure::{compatible_submonoid, Seed};
    use crate::fixtures;
    use crate::group::DEFAULT_ENUMERATION_CAP;

    const CAP: u64 = DEFAULT_ENUMERATION_CAP;

    #[test]
    fn square_conflict_extracts_a_contextual_word() {
        let g = Group::new(fixtures::square());
        match canonical_scalar_assignment(&g, CAP).unwrap() {
            CanonicalOutcome::Conflict(word) => assert_eq!(word.phase().value(), 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            value_assignment(&g, CAP).unwrap(),
            ValueOutcome::Contextual(_)
        ));
    }

    #[test]
    fn zero_matrix_assigns_phase() {
        let g = Group::new(CommutatorMatrix::zero(2, Modulus::new(3).unwrap()));
        let ValueOutcome::Assignment(l) = value_assignment(&g, CAP).unwrap() else {
            panic!("zero matrix is not contextual");
        };
        for (i, g) in l.monoid().elements().into_iter().enumerate() {
            assert_eq!(l.values()[i], g.phase);
        }
    }

    #[test]
    fn odd_pair_assignment_is_additive_by_brute_force() {
        let g = Group::new(
            CommutatorMatrix::new(&[vec![0, 1], vec![2, 0]], Modulus::new(3).unwrap(), None)
                .unwrap(),
        );
        let ValueOutcome::Assignment(l) = value_assignment(&g, CAP).unwrap() else {
            panic!("odd d is never contextual");
        };
        let elements = l.monoid().elements();
        for a in &elements {
            for b in &elements {
                if g.commutes(a, b) {
                    let ab = g.multiply(a, b).unwrap();
                    assert_eq!(
                        l.get(&ab).unwrap(),
                        l.get(a).unwrap() + l.get(b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn canonical_scalar_is_additive() {
        let g = Group::new(
            CommutatorMatrix::new(
                &[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]],
                Modulus::new(3).unwrap(),
                None,
            )
            .unwrap(),
        );
        let CanonicalOutcome::Consistent { scalar, .. } = canonical_scalar_assignment(&g, CAP).unwrap()
        else {
            panic!("odd d is never contextual");
        };
        let zero = ExponentVector::zero(3, g.modulus());
        assert!(scalar.get(&zero).unwrap().is_zero());
        let lower = g.lower().matrix();
        for (v, &sv) in scalar.iter() {
            for (w, &sw) in scalar.iter() {
                if g.mu().matrix().bilinear_unchecked(v.as_slice(), w.as_slice()) == 0 {
                    let c = g.modulus().scalar(i64::from(
                        lower.bilinear_unchecked(v.as_slice(), w.as_slice()),
                    ));
                    assert_eq!(scalar.get(&v.add(w)), Some(sv + sw + c));
                }
            }
        }
    }

    #[test]
    fn exhaustive_search_agrees_with_construction() {
        let pair = CommutatorMatrix::new(&[vec![0, 1], vec![1, 0]], Modulus::new(2).unwrap(), None)
            .unwrap();
        let g = Group::new(pair);
        let c = compatible_submonoid(&g, Seed::WithScalars, CAP).unwrap();
        let values = search_left_splitting(&c).expect("single pair is non-contextual");
        let l = ValueAssignment::new(c, values).unwrap();
        assert_eq!(l.validate(), Ok(()));

        for (mu, _, _) in fixtures::paper_examples() {
            let g = Group::new(mu);
            let c = compatible_submonoid(&g, Seed::WithScalars, CAP).unwrap();
            assert!(search_left_splitting(&c).is_none());
        }
    }

    #[test]
    fn validation_catches_bad_values() {
        let g = Group::new(CommutatorMatrix::zero(1, Modulus::new(3).unwrap()));
        let c = compatible_submonoid(&g, Seed::WithScalars, CAP).unwrap();
        let zeros = vec![g.modulus().zero(); c.len()];
        let l = ValueAssignment::new(c, zeros).unwrap();
        assert!(matches!(
            l.validate(),
            Err(AssignmentViolation::ScalarNotFixed { .. })
        ));
    }
}
