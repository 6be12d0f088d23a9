//! The commutation graph on the non-central part of a compatible monoid.
//!
//! Adjacency only depends on vectors, so the graph is handled through its
//! vector classes: elements sharing a vector are pairwise adjacent and have
//! the same neighbours.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::group::{Group, GroupError};

use super::closure::{compatible_submonoid, CompatibleMonoid, Seed};

/// The three induced four-vertex graphs `(a, b, c, d)` with `a` adjacent to
/// `b` and `c`, `b` not adjacent to `c`, and `a` not adjacent to `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    /// `d` is adjacent to neither `b` nor `c`.
    Cherry,
    /// `d` is adjacent to `c` only.
    Path,
    /// `d` is adjacent to both `b` and `c`.
    Square,
}

impl PatternKind {
    pub fn tag(self) -> &'static str {
        match self {
            PatternKind::Cherry => "cherry",
            PatternKind::Path => "path",
            PatternKind::Square => "square",
        }
    }
}

/// Monoid indices of `(a, b, c, d)`; all are scalar-free elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pattern {
    pub kind: PatternKind,
    pub elements: [usize; 4],
}

#[derive(Debug, Clone)]
pub struct CompatibilityGraph {
    monoid: CompatibleMonoid,
    vertices: Vec<usize>,
    centre: Vec<usize>,
    /// First monoid index carrying each non-central vector.
    classes: Vec<usize>,
    class_of: HashMap<usize, usize>,
    adjacency: Vec<Vec<bool>>,
}

impl CompatibilityGraph {
    /// The graph on `C(mu)`.
    pub fn of_group(group: &Group, cap: u64) -> Result<Self, GroupError> {
        Ok(Self::new(compatible_submonoid(group, Seed::WithScalars, cap)?))
    }

    pub fn new(monoid: CompatibleMonoid) -> Self {
        let table = monoid.table();
        let mut first: HashMap<&[u32], usize> = HashMap::new();
        let mut reps = Vec::new();
        let mut rep_of = Vec::with_capacity(monoid.len());
        for i in 0..monoid.len() {
            let next = reps.len();
            let r = *first.entry(table.vector(i)).or_insert(next);
            if r == next {
                reps.push(i);
            }
            rep_of.push(r);
        }
        let central: Vec<bool> = reps
            .iter()
            .map(|&u| reps.iter().all(|&v| table.commutes(u, v)))
            .collect();

        let mut classes = Vec::new();
        let mut class_index: HashMap<usize, usize> = HashMap::new();
        for (r, &u) in reps.iter().enumerate() {
            if !central[r] {
                class_index.insert(r, classes.len());
                classes.push(u);
            }
        }
        let mut vertices = Vec::new();
        let mut centre = Vec::new();
        let mut class_of = HashMap::new();
        for (i, &r) in rep_of.iter().enumerate() {
            match class_index.get(&r) {
                Some(&c) => {
                    vertices.push(i);
                    class_of.insert(i, c);
                }
                None => centre.push(i),
            }
        }
        let adjacency = classes
            .iter()
            .map(|&u| classes.iter().map(|&v| table.commutes(u, v)).collect())
            .collect();
        CompatibilityGraph {
            monoid,
            vertices,
            centre,
            classes,
            class_of,
            adjacency,
        }
    }

    pub fn monoid(&self) -> &CompatibleMonoid {
        &self.monoid
    }

    /// Monoid indices of the non-central elements.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Monoid indices of the central elements.
    pub fn centre(&self) -> &[usize] {
        &self.centre
    }

    /// Whether two monoid elements commute.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.monoid.compatible(i, j)
    }

    pub fn edge_count(&self) -> usize {
        let mut count = 0;
        for (a, &i) in self.vertices.iter().enumerate() {
            for &j in &self.vertices[a + 1..] {
                if self.adjacent(i, j) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Adjacency is transitive on the non-central vertices.
    pub fn is_cluster_graph(&self) -> bool {
        let k = self.classes.len();
        (0..k).all(|a| {
            (0..k).all(|b| !self.adjacency[a][b] || self.adjacency[a] == self.adjacency[b])
        })
    }

    /// Groups of mutually adjacent vertices when the graph is a cluster graph.
    pub fn clusters(&self) -> Option<Vec<Vec<usize>>> {
        if !self.is_cluster_graph() {
            return None;
        }
        let mut cluster_of_class: Vec<Option<usize>> = vec![None; self.classes.len()];
        let mut count = 0;
        for a in 0..self.classes.len() {
            if cluster_of_class[a].is_some() {
                continue;
            }
            for b in 0..self.classes.len() {
                if self.adjacency[a][b] {
                    cluster_of_class[b] = Some(count);
                }
            }
            count += 1;
        }
        let mut out = vec![Vec::new(); count];
        for &v in &self.vertices {
            out[cluster_of_class[self.class_of[&v]].expect("every class is assigned")].push(v);
        }
        Some(out)
    }

    /// An induced cherry, path or square, if the graph is not a cluster graph.
    pub fn find_pattern(&self) -> Option<Pattern> {
        let adj = &self.adjacency;
        let k = self.classes.len();
        for a in 0..k {
            let nbrs: Vec<usize> = (0..k).filter(|&x| x != a && adj[a][x]).collect();
            for (p, &b) in nbrs.iter().enumerate() {
                for &c in &nbrs[p + 1..] {
                    if adj[b][c] {
                        continue;
                    }
                    let Some(d) = (0..k).find(|&x| !adj[a][x]) else {
                        continue;
                    };
                    let (b, c, kind) = match (adj[b][d], adj[c][d]) {
                        (false, false) => (b, c, PatternKind::Cherry),
                        (false, true) => (b, c, PatternKind::Path),
                        (true, false) => (c, b, PatternKind::Path),
                        (true, true) => (b, c, PatternKind::Square),
                    };
                    return Some(Pattern {
                        kind,
                        elements: [a, b, c, d].map(|x| self.classes[x]),
                    });
                }
            }
        }
        None
    }

    /// Graphviz text; vertices are labelled by normal forms.
    pub fn to_dot(&self) -> String {
        let labels = self.monoid.mu().labels();
        let mut out = String::from("graph compatibility {\n");
        for &v in &self.vertices {
            let nf = self.monoid.group().to_normal_form(&self.monoid.element(v));
            let text = nf.render(labels);
            let _ = writeln!(out, "  v{v} [label=\"{}\"];", text.replace('"', "\\\""));
        }
        for (a, &i) in self.vertices.iter().enumerate() {
            for &j in &self.vertices[a + 1..] {
                if self.adjacent(i, j) {
                    let _ = writeln!(out, "  v{i} -- v{j};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{CommutatorMatrix, Modulus};
    use crate::fixtures;
    use crate::group::DEFAULT_ENUMERATION_CAP;

    fn graph(mu: CommutatorMatrix) -> CompatibilityGraph {
        CompatibilityGraph::of_group(&Group::new(mu), DEFAULT_ENUMERATION_CAP).unwrap()
    }

    #[test]
    fn zero_matrix_has_no_vertices() {
        let g = graph(CommutatorMatrix::zero(3, Modulus::new(2).unwrap()));
        assert!(g.vertices().is_empty());
        assert!(g.is_cluster_graph());
        assert!(g.find_pattern().is_none());
    }

    #[test]
    fn fixtures_realise_their_patterns() {
        for (mu, kind) in [
            (fixtures::square(), PatternKind::Square),
            (fixtures::path(), PatternKind::Path),
            (fixtures::cherry(), PatternKind::Cherry),
        ] {
            let g = graph(mu);
            assert!(!g.is_cluster_graph());
            let p = g.find_pattern().unwrap();
            let el: Vec<_> = p.elements.iter().map(|&i| g.monoid().element(i)).collect();
            let grp = g.monoid().group();
            assert!(grp.commutes(&el[0], &el[1]));
            assert!(grp.commutes(&el[0], &el[2]));
            assert!(!grp.commutes(&el[1], &el[2]));
            assert!(!grp.commutes(&el[0], &el[3]));
            let expected = match p.kind {
                PatternKind::Cherry => (false, false),
                PatternKind::Path => (false, true),
                PatternKind::Square => (true, true),
            };
            assert_eq!(
                (grp.commutes(&el[1], &el[3]), grp.commutes(&el[2], &el[3])),
                expected
            );
            assert_eq!(p.kind, kind);
            let gens: Vec<_> = (0..4).map(|i| grp.generator(i)).collect();
            assert_eq!(el, gens);
        }
    }

    /// Transitivity checked over every vertex triple.
    fn brute_force_cluster(g: &CompatibilityGraph) -> bool {
        let v = g.vertices();
        v.iter().all(|&a| {
            v.iter().all(|&b| {
                v.iter()
                    .all(|&c| !(g.adjacent(a, b) && g.adjacent(b, c)) || g.adjacent(a, c))
            })
        })
    }

    #[test]
    fn single_pair_is_a_cluster_graph() {
        for d in [2, 3] {
            let g = graph(
                CommutatorMatrix::new(&[vec![0, 1], vec![-1, 0]], Modulus::new(d).unwrap(), None)
                    .unwrap(),
            );
            assert!(!g.vertices().is_empty());
            assert!(g.is_cluster_graph());
            assert!(brute_force_cluster(&g));
            assert_eq!(g.clusters().unwrap().len(), 2);
        }
        let g = graph(fixtures::square());
        assert!(!brute_force_cluster(&g));
    }

    #[test]
    fn dot_lists_vertices_and_edges() {
        let g = graph(
            CommutatorMatrix::new(&[vec![0, 1], vec![1, 0]], Modulus::new(2).unwrap(), None)
                .unwrap(),
        );
        let dot = g.to_dot();
        assert!(dot.starts_with("graph compatibility {"));
        assert_eq!(dot.matches("[label=").count(), g.vertices().len());
        assert_eq!(dot.matches(" -- ").count(), g.edge_count());
    }
}
