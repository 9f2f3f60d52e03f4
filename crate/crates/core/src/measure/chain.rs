use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Letter, ProbabilityVector, Word};
use crate::error::{Error, Result};
use crate::graph::{check_resolving, LabeledGraph};
use crate::linalg::{self, solve_fixed_point};
use crate::rational::{one, zero, Rat};
use crate::scc::tarjan;
use crate::vertex_set::VertexSet;

pub const DEFAULT_CHAIN_CAP: usize = 1 << 20;

/// The deterministic dynamics `S ↦ S·x` on vertex subsets, explored from the
/// full vertex set. `S·x` is the set of endpoints of `x`-edges leaving `S`, so
/// the state reached by a word `w` is `V(w)`, the set of vertices at which a
/// path labeled `w` can end.
///
/// States are numbered in breadth-first order with letters tried in alphabet
/// order; state 0 is the full set.
#[derive(Debug, Clone)]
pub struct SubsetChain {
    n: usize,
    states: Vec<VertexSet>,
    next: Vec<Vec<usize>>,
    parent: Vec<Option<(usize, Letter)>>,
    closed_classes: Vec<Vec<usize>>,
}

impl SubsetChain {
    /// Requires a letter-labeled right-resolving graph.
    pub fn build(g: &LabeledGraph) -> Result<Self> {
        Self::build_with_cap(g, DEFAULT_CHAIN_CAP)
    }

    pub fn build_with_cap(g: &LabeledGraph, cap: usize) -> Result<Self> {
        if !g.is_letter_labeled() {
            return Err(Error::NotLetterLabeled);
        }
        if !check_resolving(g).is_right_resolving() {
            return Err(Error::NotRightResolving);
        }
        Self::explore(g, cap)
    }

    /// Same exploration without the right-resolving requirement.
    pub(crate) fn explore(g: &LabeledGraph, cap: usize) -> Result<Self> {
        let delta = g.successors()?;
        let n = g.vertex_count();
        let m = g.alphabet().len();
        let mut states = vec![VertexSet::full(n)];
        let mut index: HashMap<VertexSet, usize> = HashMap::new();
        index.insert(states[0].clone(), 0);
        let mut parent = vec![None];
        let mut next: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let mut row = Vec::with_capacity(m);
            for x in 0..m {
                let mut s = VertexSet::empty(n);
                for v in states[i].iter() {
                    for &t in &delta[v][x] {
                        s.insert(t);
                    }
                }
                let j = match index.get(&s) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= cap {
                            return Err(Error::Cap {
                                what: "subset chain states",
                                cap,
                            });
                        }
                        let j = states.len();
                        index.insert(s.clone(), j);
                        states.push(s);
                        parent.push(Some((i, x)));
                        queue.push_back(j);
                        j
                    }
                };
                row.push(j);
            }
            // BFS pops states in creation order, so rows line up with states.
            next.push(row);
        }

        let comps = tarjan(states.len(), &next);
        let mut comp_of = vec![0usize; states.len()];
        for (c, comp) in comps.iter().enumerate() {
            for &s in comp {
                comp_of[s] = c;
            }
        }
        let closed_classes = comps
            .iter()
            .enumerate()
            .filter(|(c, comp)| comp.iter().all(|&s| next[s].iter().all(|&t| comp_of[t] == *c)))
            .map(|(_, comp)| comp.clone())
            .collect();
        Ok(SubsetChain {
            n,
            states,
            next,
            parent,
            closed_classes,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &VertexSet {
        &self.states[i]
    }

    pub fn states(&self) -> &[VertexSet] {
        &self.states
    }

    /// `step(i, x)` is the state index of `states[i]·x`.
    pub fn step(&self, i: usize, x: Letter) -> usize {
        self.next[i][x]
    }

    /// Closed communicating classes, each a sorted list of state indices.
    pub fn closed_classes(&self) -> &[Vec<usize>] {
        &self.closed_classes
    }

    /// Shortest word leading from the full set to state `i`; among shortest
    /// words, the lexicographically smallest.
    pub fn word_to(&self, mut i: usize) -> Word {
        let mut w = Vec::new();
        while let Some((p, x)) = self.parent[i] {
            w.push(x);
            i = p;
        }
        w.reverse();
        w
    }

    /// Smallest state cardinality and the first (in BFS order) state that
    /// attains it.
    pub fn min_state(&self) -> (usize, usize) {
        let mut best = (usize::MAX, 0);
        for (i, s) in self.states.iter().enumerate() {
            let k = s.len();
            if k < best.0 {
                best = (k, i);
            }
        }
        best
    }

    /// Limit law of the chain driven by i.i.d. letters with law `p`.
    pub fn limit(&self, p: &ProbabilityVector) -> Result<ChainLimit> {
        let m = p.len();
        let mut class_of = vec![usize::MAX; self.len()];
        for (c, class) in self.closed_classes.iter().enumerate() {
            for &s in class {
                class_of[s] = c;
            }
        }
        let succ: Vec<Vec<(usize, Rat)>> = self
            .next
            .iter()
            .map(|row| {
                let mut agg: Vec<(usize, Rat)> = Vec::new();
                for (x, &t) in row.iter().enumerate().take(m) {
                    match agg.iter_mut().find(|(s, _)| *s == t) {
                        Some((_, w)) => *w += p.weight(x),
                        None => agg.push((t, p.weight(x).clone())),
                    }
                }
                agg
            })
            .collect();

        let stationary = self
            .closed_classes
            .iter()
            .map(|class| stationary(class, &succ))
            .collect::<Result<Vec<_>>>()?;

        // A state that can reach only one closed class is absorbed there with
        // probability one, so only states that see several classes are solved.
        let k = self.closed_classes.len();
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (s, row) in self.next.iter().enumerate() {
            for &t in row {
                pred[t].push(s);
            }
        }
        let mut only: Vec<Option<usize>> = vec![None; self.len()];
        let mut several = vec![false; self.len()];
        for (c, class) in self.closed_classes.iter().enumerate() {
            let mut seen = vec![false; self.len()];
            let mut stack = class.clone();
            for &s in class {
                seen[s] = true;
            }
            while let Some(s) = stack.pop() {
                match only[s] {
                    None => only[s] = Some(c),
                    Some(_) => several[s] = true,
                }
                for &q in &pred[s] {
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        let mut values: Vec<Option<Vec<Rat>>> = (0..self.len())
            .map(|s| {
                (class_of[s] != usize::MAX || !several[s]).then(|| {
                    let mut row = vec![zero(); k];
                    row[only[s].expect("every state reaches a closed class")] = one();
                    row
                })
            })
            .collect();
        solve_fixed_point(&succ, &mut values, k)
            .map_err(|_| Error::Internal("transient part of the subset chain is singular".into()))?;
        let absorption = values[0].take().expect("start state solved");
        Ok(ChainLimit {
            absorption,
            stationary,
        })
    }
}

/// Stationary law of an irreducible closed class.
fn stationary(class: &[usize], succ: &[Vec<(usize, Rat)>]) -> Result<Vec<Rat>> {
    let r = class.len();
    if r == 1 {
        return Ok(vec![one()]);
    }
    let local: HashMap<usize, usize> = class.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    // Rows 0..r-1: Σ_i π_i (δ_ij - P_ij) = 0 for j < r-1; last row: Σ π_i = 1.
    let mut a = vec![vec![zero(); r]; r];
    for (i, &s) in class.iter().enumerate() {
        a[i][i] += one();
        for (t, w) in &succ[s] {
            let j = local[t];
            a[j][i] -= w;
        }
    }
    a[r - 1] = vec![one(); r];
    let mut b = vec![vec![zero()]; r];
    b[r - 1][0] = one();
    let x = linalg::solve(&a, &b)
        .map_err(|_| Error::Internal("closed class has no unique stationary law".into()))?;
    Ok(x.into_iter().map(|mut row| row.swap_remove(0)).collect())
}

/// Absorption probabilities from the full set and stationary laws of the
/// closed classes of a [`SubsetChain`].
#[derive(Debug, Clone)]
pub struct ChainLimit {
    /// Indexed like [`SubsetChain::closed_classes`].
    pub absorption: Vec<Rat>,
    /// `stationary[c][i]` is the weight of `closed_classes()[c][i]`.
    pub stationary: Vec<Vec<Rat>>,
}

impl ChainLimit {
    /// `lim_n P(all of vs ∈ S_n)` for the chain started at the full set.
    pub fn joint_membership(&self, chain: &SubsetChain, vs: &[usize]) -> Rat {
        let mut total = zero();
        for (c, class) in chain.closed_classes().iter().enumerate() {
            if self.absorption[c] == zero() {
                continue;
            }
            let mass: Rat = class
                .iter()
                .zip(&self.stationary[c])
                .filter(|(&s, _)| vs.iter().all(|&v| chain.state(s).contains(v)))
                .map(|(_, w)| w.clone())
                .sum();
            total += &self.absorption[c] * mass;
        }
        total
    }
}
