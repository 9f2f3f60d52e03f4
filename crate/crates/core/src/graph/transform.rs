use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::{fresh_name, LabeledGraph};
use crate::alphabet::Word;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Replaces word labels by letter paths. Outgoing labels of a vertex are laid
/// out as a trie, so labels sharing a prefix share the intermediate vertices
/// for that prefix; this keeps a prefix-free vertex right-resolving after
/// expansion. Intermediate vertices are named `v/prefix`. Letter-labeled
/// graphs come back unchanged.
pub fn expand_word_labels(g: &LabeledGraph) -> LabeledGraph {
    if g.is_letter_labeled() {
        return g.clone();
    }
    let mut names: Vec<String> = g.vertices().to_vec();
    let mut taken: HashSet<String> = names.iter().cloned().collect();
    let mut node: HashMap<(usize, Word), usize> = HashMap::new();
    let mut trie_edges: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let mut edges: Vec<(usize, usize, Word, u32)> = Vec::new();

    for e in g.edges() {
        if e.label.len() == 1 {
            edges.push((e.from, e.to, e.label.clone(), e.multiplicity));
            continue;
        }
        let mut at = e.from;
        for i in 1..e.label.len() {
            let prefix = e.label[..i].to_vec();
            let next = *node.entry((e.from, prefix)).or_insert_with(|| {
                let candidate = format!(
                    "{}/{}",
                    g.vertex_name(e.from),
                    g.alphabet().format_word(&e.label[..i])
                );
                let name = fresh_name(candidate, &taken);
                taken.insert(name.clone());
                names.push(name);
                names.len() - 1
            });
            trie_edges.insert((at, next, e.label[i - 1]));
            at = next;
        }
        edges.push((at, e.to, vec![*e.label.last().expect("nonempty label")], e.multiplicity));
    }
    edges.extend(trie_edges.into_iter().map(|(f, t, x)| (f, t, vec![x], 1)));
    LabeledGraph::from_parts(g.alphabet().clone(), names, edges)
        .expect("expansion of a valid graph is valid")
}

/// Reverses every edge and every label. `F_v` of `g` is, read backwards, `B_v`
/// of the reversal.
pub fn reverse(g: &LabeledGraph) -> LabeledGraph {
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            let mut w = e.label.clone();
            w.reverse();
            (e.to, e.from, w, e.multiplicity)
        })
        .collect();
    LabeledGraph::from_parts(g.alphabet().clone(), g.vertices().to_vec(), edges)
        .expect("reversal of a valid graph is valid")
}

/// Label product of two letter-labeled graphs.
#[derive(Debug, Clone)]
pub struct LabelProduct {
    pub graph: LabeledGraph,
    /// `pair[v][u]` is the product vertex `(v, u)`.
    pub pair: Vec<Vec<usize>>,
}

/// Vertices are pairs `(v, u)`; an `x`-edge `(v, u) -> (v', u')` exists for every
/// `x`-edge `v -> v'` of `g1` and `x`-edge `u -> u'` of `g2`. Then
/// `B_(v,u) = B_v ∩ B_u` and `F_(v,u) = F_v ∩ F_u`.
pub fn label_product(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<LabelProduct> {
    if g1.alphabet() != g2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if !g1.is_letter_labeled() || !g2.is_letter_labeled() {
        return Err(Error::NotLetterLabeled);
    }
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    let mut taken = HashSet::new();
    let mut names = Vec::with_capacity(n1 * n2);
    for v in 0..n1 {
        for u in 0..n2 {
            let name = fresh_name(format!("({},{})", g1.vertex_name(v), g2.vertex_name(u)), &taken);
            taken.insert(name.clone());
            names.push(name);
        }
    }
    let id = |v: usize, u: usize| v * n2 + u;
    let mut edges = Vec::new();
    for e1 in g1.edges() {
        for e2 in g2.edges().iter().filter(|e2| e2.label == e1.label) {
            edges.push((
                id(e1.from, e2.from),
                id(e1.to, e2.to),
                e1.label.clone(),
                e1.multiplicity * e2.multiplicity,
            ));
        }
    }
    let graph = LabeledGraph::from_parts(g1.alphabet().clone(), names.clone(), edges)?;
    let pair = (0..n1)
        .map(|v| {
            (0..n2)
                .map(|u| graph.vertex_index(&names[id(v, u)]).expect("pair vertex exists"))
                .collect()
        })
        .collect();
    Ok(LabelProduct { graph, pair })
}

pub const DEFAULT_DETERMINIZE_CAP: usize = 1 << 20;

/// Output of [`determinize_forward`].
#[derive(Debug, Clone)]
pub struct Determinized {
    pub graph: LabeledGraph,
    /// `embed[v]` is the vertex `{v}` of `graph`.
    pub embed: Vec<usize>,
    /// Members (original vertex indices) of each vertex of `graph`.
    pub members: Vec<Vec<usize>>,
}

pub fn determinize_forward(g: &LabeledGraph) -> Result<Determinized> {
    determinize_forward_with_cap(g, DEFAULT_DETERMINIZE_CAP)
}

/// Subset construction seeded from every singleton. Vertices are the nonempty
/// subsets reachable under `S ↦ S·x`, named `{a,b,...}`; the result is
/// right-resolving and `B_{v}` in it equals `B_v` in `g`.
pub fn determinize_forward_with_cap(g: &LabeledGraph, cap: usize) -> Result<Determinized> {
    let delta = g.successors()?;
    let n = g.vertex_count();
    let m = g.alphabet().len();
    let mut states: Vec<VertexSet> = Vec::new();
    let mut seen: HashMap<VertexSet, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut push = |s: VertexSet, states: &mut Vec<VertexSet>, queue: &mut VecDeque<usize>| -> Result<usize> {
        if let Some(&i) = seen.get(&s) {
            return Ok(i);
        }
        if states.len() >= cap {
            return Err(Error::Cap {
                what: "determinization subset states",
                cap,
            });
        }
        let i = states.len();
        seen.insert(s.clone(), i);
        states.push(s);
        queue.push_back(i);
        Ok(i)
    };

    let mut embed_raw = Vec::with_capacity(n);
    for v in 0..n {
        embed_raw.push(push(VertexSet::singleton(n, v), &mut states, &mut queue)?);
    }
    let mut edges = Vec::new();
    while let Some(i) = queue.pop_front() {
        for x in 0..m {
            let mut next = VertexSet::empty(n);
            for v in states[i].iter() {
                for &t in &delta[v][x] {
                    next.insert(t);
                }
            }
            if next.is_empty() {
                continue;
            }
            let j = push(next, &mut states, &mut queue)?;
            edges.push((i, j, vec![x], 1));
        }
    }

    let mut taken = HashSet::new();
    let names: Vec<String> = states
        .iter()
        .map(|s| {
            let inner: Vec<&str> = s.iter().map(|v| g.vertex_name(v)).collect();
            let name = fresh_name(format!("{{{}}}", inner.join(",")), &taken);
            taken.insert(name.clone());
            name
        })
        .collect();
    let graph = LabeledGraph::from_parts(g.alphabet().clone(), names.clone(), edges)?;
    let embed = embed_raw
        .iter()
        .map(|&i| graph.vertex_index(&names[i]).expect("seed exists"))
        .collect();
    let mut members = vec![Vec::new(); graph.vertex_count()];
    for (i, s) in states.iter().enumerate() {
        members[graph.vertex_index(&names[i]).expect("state exists")] = s.iter().collect();
    }
    Ok(Determinized {
        graph,
        embed,
        members,
    })
}
