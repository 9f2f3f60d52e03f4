use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use super::LabeledGraph;
use crate::scc::tarjan;

/// Strongly connected components of a graph in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    /// Components in topological order (edges only go forward), ties broken
    /// by smallest member vertex. Members are sorted.
    pub components: Vec<Vec<usize>>,
    /// `component_of[v]` indexes `components`.
    pub component_of: Vec<usize>,
    /// Distinct edges between different components.
    pub edges: BTreeSet<(usize, usize)>,
    /// No edge leaves the component.
    pub terminal: Vec<bool>,
}

pub fn scc_decompose(g: &LabeledGraph) -> Condensation {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| g.out_edges(v).iter().map(|e| e.to).collect())
        .collect();
    let raw = tarjan(n, &adj);
    let mut raw_of = vec![0usize; n];
    for (c, comp) in raw.iter().enumerate() {
        for &v in comp {
            raw_of[v] = c;
        }
    }
    let k = raw.len();
    let mut raw_edges = BTreeSet::new();
    for e in g.edges() {
        let (a, b) = (raw_of[e.from], raw_of[e.to]);
        if a != b {
            raw_edges.insert((a, b));
        }
    }

    // Kahn's algorithm keyed by the smallest member.
    let mut indeg = vec![0usize; k];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b) in &raw_edges {
        indeg[b] += 1;
        out[a].push(b);
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..k)
        .filter(|&c| indeg[c] == 0)
        .map(|c| Reverse((raw[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, c))) = heap.pop() {
        order.push(c);
        for &d in &out[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                heap.push(Reverse((raw[d][0], d)));
            }
        }
    }
    let mut rank = vec![0usize; k];
    for (i, &c) in order.iter().enumerate() {
        rank[c] = i;
    }

    let components: Vec<Vec<usize>> = order.iter().map(|&c| raw[c].clone()).collect();
    let component_of = raw_of.iter().map(|&c| rank[c]).collect();
    let edges: BTreeSet<(usize, usize)> = raw_edges.iter().map(|&(a, b)| (rank[a], rank[b])).collect();
    let mut terminal = vec![true; k];
    for &(a, _) in &edges {
        terminal[a] = false;
    }
    Condensation {
        components,
        component_of,
        edges,
        terminal,
    }
}
