//! Empirical models over the maximal commuting sets of a compatible monoid,
//! and the search for global sections.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::Scalar;

use super::assignment::{Propagator, ValueAssignment};
use super::closure::CompatibleMonoid;
use super::graph::CompatibilityGraph;
use super::ContextualityError;

/// Values on the elements of one clique, in clique order.
pub type Section = Vec<Scalar>;

/// Maximal sets of pairwise commuting elements, as sorted monoid indices.
///
/// Elements with equal vectors are interchangeable, so the search runs on
/// one representative per vector and expands at the end.
pub fn maximal_cliques(monoid: &CompatibleMonoid) -> Vec<Vec<usize>> {
    let table = monoid.table();
    let mut reps: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut by_vector: HashMap<&[u32], usize> = HashMap::new();
    for i in 0..monoid.len() {
        let class = *by_vector.entry(table.vector(i)).or_insert_with(|| {
            reps.push(i);
            members.push(Vec::new());
            reps.len() - 1
        });
        members[class].push(i);
    }
    let k = reps.len();
    let adj: Vec<BTreeSet<usize>> = (0..k)
        .map(|a| {
            (0..k)
                .filter(|&b| b != a && table.commutes(reps[a], reps[b]))
                .collect()
        })
        .collect();

    let mut found = Vec::new();
    bron_kerbosch(
        &adj,
        &mut Vec::new(),
        (0..k).collect(),
        BTreeSet::new(),
        &mut found,
    );
    let mut cliques: Vec<Vec<usize>> = found
        .into_iter()
        .map(|classes| {
            let mut c: Vec<usize> = classes
                .into_iter()
                .flat_map(|x| members[x].iter().copied())
                .collect();
            c.sort_unstable();
            c
        })
        .collect();
    cliques.sort();
    cliques
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    current: &mut Vec<usize>,
    mut candidates: BTreeSet<usize>,
    mut excluded: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    let pivot = candidates
        .union(&excluded)
        .max_by_key(|&&u| adj[u].intersection(&candidates).count())
        .copied()
        .expect("nonempty");
    let branch: Vec<usize> = candidates.difference(&adj[pivot]).copied().collect();
    for v in branch {
        current.push(v);
        bron_kerbosch(
            adj,
            current,
            candidates.intersection(&adj[v]).copied().collect(),
            excluded.intersection(&adj[v]).copied().collect(),
            out,
        );
        current.pop();
        candidates.remove(&v);
        excluded.insert(v);
    }
}

/// Every homomorphism from the clique to `Z_d` fixing the scalars.
pub fn local_splittings(monoid: &CompatibleMonoid, clique: &[usize]) -> Vec<Section> {
    let m = monoid.group().modulus();
    let Some(mut solver) = Propagator::new(monoid, clique) else {
        return Vec::new();
    };
    solver
        .solutions(None)
        .into_iter()
        .map(|s| s.into_iter().map(|v| m.scalar(i64::from(v))).collect())
        .collect()
}

/// A non-empty set of local sections for each maximal clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalModel {
    pub cliques: Vec<Vec<usize>>,
    pub sections: Vec<Vec<Section>>,
}

/// Every clique paired with all of its local splittings.
pub fn full_model(monoid: &CompatibleMonoid) -> EmpiricalModel {
    let cliques = maximal_cliques(monoid);
    let sections = cliques
        .iter()
        .map(|c| local_splittings(monoid, c))
        .collect();
    EmpiricalModel { cliques, sections }
}

impl EmpiricalModel {
    fn check_shape(&self, monoid: &CompatibleMonoid) -> Result<(), ContextualityError> {
        if self.cliques.len() != self.sections.len() {
            return Err(ContextualityError::ModelMismatch(format!(
                "{} cliques but {} section sets",
                self.cliques.len(),
                self.sections.len()
            )));
        }
        for (c, (clique, sections)) in self.cliques.iter().zip(&self.sections).enumerate() {
            if let Some(&bad) = clique.iter().find(|&&i| i >= monoid.len()) {
                return Err(ContextualityError::ModelMismatch(format!(
                    "clique {c} names element {bad}, monoid has {}",
                    monoid.len()
                )));
            }
            if sections.is_empty() {
                return Err(ContextualityError::EmptySection { clique: c });
            }
            if sections.iter().any(|s| s.len() != clique.len()) {
                return Err(ContextualityError::ModelMismatch(format!(
                    "a section of clique {c} has the wrong length"
                )));
            }
        }
        Ok(())
    }

    /// Restrictions of clique `c`'s sections to the given elements.
    fn restrictions(&self, c: usize, onto: &[usize]) -> BTreeSet<Vec<u32>> {
        let pos: HashMap<usize, usize> = self.cliques[c]
            .iter()
            .enumerate()
            .map(|(p, &g)| (g, p))
            .collect();
        self.sections[c]
            .iter()
            .map(|s| onto.iter().map(|g| s[pos[g]].value()).collect())
            .collect()
    }

    fn overlap(&self, a: usize, b: usize) -> Vec<usize> {
        let other: BTreeSet<usize> = self.cliques[b].iter().copied().collect();
        self.cliques[a]
            .iter()
            .copied()
            .filter(|g| other.contains(g))
            .collect()
    }

    /// Every pair of cliques restricts to the same set of sections on its
    /// overlap.
    pub fn check_consistency(&self, monoid: &CompatibleMonoid) -> Result<(), ContextualityError> {
        self.check_shape(monoid)?;
        for a in 0..self.cliques.len() {
            for b in a + 1..self.cliques.len() {
                let shared = self.overlap(a, b);
                if self.restrictions(a, &shared) != self.restrictions(b, &shared) {
                    return Err(ContextualityError::Inconsistent {
                        first: a,
                        second: b,
                    });
                }
            }
        }
        Ok(())
    }
}

/// A value assignment on the whole monoid restricting into every clique's
/// section set, or `None` if there is none.
///
/// On a cluster graph the sections are chosen clique by clique to agree with
/// the first clique on the centre; otherwise every compatible family is
/// searched.
pub fn glue_global_section(
    monoid: &CompatibleMonoid,
    model: &EmpiricalModel,
) -> Result<Option<ValueAssignment>, ContextualityError> {
    model.check_consistency(monoid)?;
    let graph = CompatibilityGraph::new(monoid.clone());
    let glued = match graph.clusters() {
        Some(_) => glue_over_centre(monoid, model, graph.centre()),
        None => None,
    };
    let values = match glued {
        Some(values) => Some(values),
        None => search_family(monoid, model),
    };
    match values {
        None => Ok(None),
        Some(values) => {
            let m = monoid.group().modulus();
            let values = values.into_iter().map(|v| m.scalar(i64::from(v))).collect();
            Ok(Some(ValueAssignment::new(monoid.clone(), values)?))
        }
    }
}

/// Constructive gluing when distinct cliques meet exactly in the centre.
fn glue_over_centre(
    monoid: &CompatibleMonoid,
    model: &EmpiricalModel,
    centre: &[usize],
) -> Option<Vec<u32>> {
    let centre_set: BTreeSet<usize> = centre.iter().copied().collect();
    for a in 0..model.cliques.len() {
        for b in a + 1..model.cliques.len() {
            let shared: BTreeSet<usize> = model.overlap(a, b).into_iter().collect();
            if shared != centre_set {
                return None;
            }
        }
    }
    let mut values: Vec<Option<u32>> = vec![None; monoid.len()];
    let mut on_centre: Option<Vec<u32>> = None;
    for (clique, sections) in model.cliques.iter().zip(&model.sections) {
        let pos: HashMap<usize, usize> = clique.iter().enumerate().map(|(p, &g)| (g, p)).collect();
        let chosen = sections.iter().find(|s| match &on_centre {
            None => true,
            Some(z) => centre.iter().zip(z).all(|(g, &v)| s[pos[g]].value() == v),
        })?;
        if on_centre.is_none() {
            on_centre = Some(centre.iter().map(|g| chosen[pos[g]].value()).collect());
        }
        for (&g, v) in clique.iter().zip(chosen) {
            values[g] = Some(v.value());
        }
    }
    values.into_iter().collect()
}

/// Backtracking over one section per clique, keeping agreement on overlaps.
fn search_family(monoid: &CompatibleMonoid, model: &EmpiricalModel) -> Option<Vec<u32>> {
    fn go(model: &EmpiricalModel, c: usize, values: &mut Vec<Option<u32>>) -> bool {
        if c == model.cliques.len() {
            return true;
        }
        let clique = &model.cliques[c];
        for s in &model.sections[c] {
            let fits = clique
                .iter()
                .zip(s)
                .all(|(&g, v)| values[g].is_none_or(|x| x == v.value()));
            if !fits {
                continue;
            }
            let fresh: Vec<usize> = clique.iter().copied().filter(|&g| values[g].is_none()).collect();
            for (&g, v) in clique.iter().zip(s) {
                values[g] = Some(v.value());
            }
            if go(model, c + 1, values) {
                return true;
            }
            for g in fresh {
                values[g] = None;
            }
        }
        false
    }
    let mut values = vec![None; monoid.len()];
    if !go(model, 0, &mut values) {
        return None;
    }
    values.into_iter().collect()
}
