//! Finite labeled directed multigraphs over an alphabet.
//!
//! A [`LabeledGraph`] carries two sofic subshifts per vertex: `B_v`, the
//! right-infinite sequences read along paths starting at `v`, and `F_v`, the
//! left-infinite sequences read along paths ending at `v`. Everything in this
//! module is combinatorial; measures live in [`crate::measure`].

mod condensation;
mod transform;

use std::collections::{BTreeMap, HashMap, HashSet};

pub use condensation::{scc_decompose, Condensation};
pub use transform::{
    determinize_forward, determinize_forward_with_cap, expand_word_labels, label_product, reverse,
    Determinized, LabelProduct, DEFAULT_DETERMINIZE_CAP,
};

use crate::alphabet::{Alphabet, Letter, ProbabilityVector, Word};
use crate::error::{Error, Result};
use crate::rational::Rat;

/// A collapsed edge: `multiplicity` parallel copies of `from -label-> to`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Word,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    /// Sorted by `(from, label, to)`.
    edges: Vec<Edge>,
    /// `edges[out_start[v]..out_start[v + 1]]` are the edges leaving `v`.
    out_start: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Resolving {
    NotRightResolving,
    RightResolving,
    StrictlyRightResolving,
}

impl Resolving {
    pub fn is_right_resolving(self) -> bool {
        self != Resolving::NotRightResolving
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Resolving::NotRightResolving => "not_right_resolving",
            Resolving::RightResolving => "right_resolving",
            Resolving::StrictlyRightResolving => "strictly_right_resolving",
        }
    }
}

impl LabeledGraph {
    /// Builds a graph from named vertices and `(from, to, label)` edges.
    /// Vertices are stored in lexicographic order; identical edges are
    /// collapsed and counted.
    pub fn new<V, E>(alphabet: Alphabet, vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = String>,
        E: IntoIterator<Item = (String, String, Word)>,
    {
        let names: Vec<String> = vertices.into_iter().collect();
        let mut pos = HashMap::with_capacity(names.len());
        for (i, v) in names.iter().enumerate() {
            if pos.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |v: &str| pos.get(v).copied().ok_or_else(|| Error::UnknownVertex(v.to_string()));
        let indexed = edges
            .into_iter()
            .map(|(f, t, w)| Ok((lookup(&f)?, lookup(&t)?, w, 1)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(alphabet, names, indexed)
    }

    /// Builds from index-based edges `(from, to, label, multiplicity)` over
    /// `names`, which must be distinct but need not be sorted.
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        names: Vec<String>,
        edges: Vec<(usize, usize, Word, u32)>,
    ) -> Result<Self> {
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut remap = vec![0usize; names.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let vertices: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }

        let mut counted: BTreeMap<(usize, Word, usize), u32> = BTreeMap::new();
        for (f, t, label, mult) in edges {
            if label.is_empty() {
                return Err(Error::EmptyLabel {
                    from: names[f].clone(),
                    to: names[t].clone(),
                });
            }
            if let Some(&x) = label.iter().find(|&&x| x >= alphabet.len()) {
                return Err(Error::UnknownLetter(format!("#{x}")));
            }
            *counted.entry((remap[f], label, remap[t])).or_insert(0) += mult;
        }
        let edges: Vec<Edge> = counted
            .into_iter()
            .map(|((from, label, to), multiplicity)| Edge {
                from,
                to,
                label,
                multiplicity,
            })
            .collect();
        let mut out_start = vec![0usize; vertices.len() + 1];
        for e in &edges {
            out_start[e.from + 1] += 1;
        }
        for v in 0..vertices.len() {
            out_start[v + 1] += out_start[v];
        }
        Ok(LabeledGraph {
            alphabet,
            vertices,
            index,
            edges,
            out_start,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[Edge] {
        &self.edges[self.out_start[v]..self.out_start[v + 1]]
    }

    pub fn is_letter_labeled(&self) -> bool {
        self.edges.iter().all(|e| e.label.len() == 1)
    }

    /// Successor table `[v][x]` of a letter-labeled graph: the sorted,
    /// deduplicated endpoints of `x`-edges leaving `v`.
    pub fn successors(&self) -> Result<Vec<Vec<Vec<usize>>>> {
        if !self.is_letter_labeled() {
            return Err(Error::NotLetterLabeled);
        }
        let mut table = vec![vec![Vec::new(); self.alphabet.len()]; self.vertex_count()];
        for e in &self.edges {
            table[e.from][e.label[0]].push(e.to);
        }
        for row in &mut table {
            for t in row.iter_mut() {
                t.sort_unstable();
                t.dedup();
            }
        }
        Ok(table)
    }

    /// Subgraph induced by `keep` (edges with both ends kept).
    pub fn induced(&self, keep: &[usize]) -> LabeledGraph {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let names = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| local[e.from] != usize::MAX && local[e.to] != usize::MAX)
            .map(|e| (local[e.from], local[e.to], e.label.clone(), e.multiplicity))
            .collect();
        LabeledGraph::from_parts(self.alphabet.clone(), names, edges)
            .expect("induced subgraph of a valid graph is valid")
    }

    /// Edge multiset as `(from, to, label)` name triples, each repeated by
    /// multiplicity. Used for serialization and structural comparisons.
    pub fn edge_triples(&self) -> Vec<(String, String, Word)> {
        let mut out = Vec::new();
        for e in &self.edges {
            for _ in 0..e.multiplicity {
                out.push((
                    self.vertices[e.from].clone(),
                    self.vertices[e.to].clone(),
                    e.label.clone(),
                ));
            }
        }
        out
    }
}

/// Classifies `g`. For word labels, right-resolving means no outgoing label
/// of a vertex is a prefix of another outgoing label of the same vertex
/// (parallel copies of one edge count as two labels). Strictness means the
/// outgoing labels at every vertex form a complete prefix code, which for
/// letter labels is exactly one outgoing edge per letter.
pub fn check_resolving(g: &LabeledGraph) -> Resolving {
    let m = g.alphabet().len() as u128;
    let mut strict = true;
    for v in 0..g.vertex_count() {
        let out = g.out_edges(v);
        if out.iter().any(|e| e.multiplicity > 1) {
            return Resolving::NotRightResolving;
        }
        // Edges are sorted by label, so a prefix relation, if any, shows up
        // between some label and its immediate successor in that order.
        for pair in out.windows(2) {
            let (a, b) = (&pair[0].label, &pair[1].label);
            if b.starts_with(a) {
                return Resolving::NotRightResolving;
            }
        }
        if strict {
            strict = is_complete_prefix_code(out.iter().map(|e| e.label.as_slice()), m);
        }
    }
    if strict {
        Resolving::StrictlyRightResolving
    } else {
        Resolving::RightResolving
    }
}

/// Kraft equality for a prefix-free code over `m` letters: Σ m^(-|w|) == 1.
fn is_complete_prefix_code<'a>(labels: impl Iterator<Item = &'a [Letter]>, m: u128) -> bool {
    let m = Rat::from_integer(m.into());
    let mut total = crate::rational::zero();
    let mut any = false;
    for w in labels {
        any = true;
        let mut t = crate::rational::one();
        for _ in 0..w.len() {
            t /= &m;
        }
        total += t;
    }
    any && total == crate::rational::one()
}

/// Exact transition matrix `T_p`: entry `(v, u)` is the sum, over edges
/// `v -> u`, of the product of the letter weights of the label (times the
/// edge multiplicity).
pub fn transition_matrix(g: &LabeledGraph, p: &ProbabilityVector) -> Result<Vec<Vec<Rat>>> {
    p.check_alphabet(g.alphabet())?;
    let n = g.vertex_count();
    let mut t = vec![vec![crate::rational::zero(); n]; n];
    for e in g.edges() {
        t[e.from][e.to] += p.word_weight(&e.label) * Rat::from_integer(e.multiplicity.into());
    }
    Ok(t)
}

/// Adjacency matrix: number of edges from `v` to `u`.
pub fn adjacency_matrix(g: &LabeledGraph) -> Vec<Vec<u64>> {
    let n = g.vertex_count();
    let mut a = vec![vec![0u64; n]; n];
    for e in g.edges() {
        a[e.from][e.to] += u64::from(e.multiplicity);
    }
    a
}

/// Returns `candidate`, or `candidate` followed by enough `'` marks to avoid
/// every name in `taken`.
pub(crate) fn fresh_name(candidate: String, taken: &HashSet<String>) -> String {
    let mut name = candidate;
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::rat;

    #[test]
    fn classification_examples() {
        assert_eq!(check_resolving(&full_loop()), Resolving::StrictlyRightResolving);
        assert_eq!(check_resolving(&gamma()), Resolving::NotRightResolving);
        let words = graph(&["0", "1"], &["a", "b"], &[("a", "b", "01"), ("a", "b", "00")]);
        assert_eq!(check_resolving(&words), Resolving::RightResolving);
        let prefix = graph(&["0", "1"], &["a", "b"], &[("a", "b", "0"), ("a", "a", "01")]);
        assert_eq!(check_resolving(&prefix), Resolving::NotRightResolving);
        let complete = graph(&["0", "1"], &["a"], &[("a", "a", "1"), ("a", "a", "00"), ("a", "a", "01")]);
        assert_eq!(check_resolving(&complete), Resolving::StrictlyRightResolving);
        assert_eq!(check_resolving(&loop0()), Resolving::RightResolving);
    }

    #[test]
    fn parallel_copies_are_counted_and_not_resolving() {
        let g = graph(&["0", "1"], &["a"], &[("a", "a", "0"), ("a", "a", "0"), ("a", "a", "1")]);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.edges()[0].multiplicity, 2);
        assert_eq!(adjacency_matrix(&g), vec![vec![3]]);
        assert_eq!(check_resolving(&g), Resolving::NotRightResolving);
    }

    #[test]
    fn vertices_are_sorted() {
        let g = graph(&["0"], &["z", "a", "m"], &[("z", "a", "0")]);
        assert_eq!(g.vertices(), &["a", "m", "z"]);
        assert_eq!(g.edges()[0].from, 2);
    }

    #[test]
    fn rejects_bad_input() {
        let a = Alphabet::new(["0"]).unwrap();
        let e = LabeledGraph::new(a.clone(), ["a".to_string()], [("a".into(), "b".into(), vec![0])]);
        assert!(matches!(e, Err(Error::UnknownVertex(_))));
        let e = LabeledGraph::new(a.clone(), ["a".to_string()], [("a".into(), "a".into(), vec![])]);
        assert!(matches!(e, Err(Error::EmptyLabel { .. })));
        let e = LabeledGraph::new(a, ["a".to_string(), "a".to_string()], []);
        assert!(matches!(e, Err(Error::DuplicateVertex(_))));
    }

    #[test]
    fn transition_matrix_examples() {
        let a = Alphabet::new(["0", "1"]).unwrap();
        let u = ProbabilityVector::uniform(&a);
        assert_eq!(transition_matrix(&loop0(), &u).unwrap(), vec![vec![rat(1, 2)]]);
        let w = graph(&["0", "1"], &["a", "b"], &[("a", "b", "01")]);
        assert_eq!(transition_matrix(&w, &u).unwrap()[0][1], rat(1, 4));
        for g in [gamma1(), gamma2(), full_loop()] {
            for row in transition_matrix(&g, &u).unwrap() {
                assert_eq!(row.iter().sum::<Rat>(), rat(1, 1));
            }
        }
        assert_eq!(
            transition_matrix(&gamma1(), &u).unwrap(),
            transition_matrix(&gamma2(), &u).unwrap()
        );
    }
}
