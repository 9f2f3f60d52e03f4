//! Generators and brute-force references shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use sofic_tiles::graph::LabeledGraph;
use sofic_tiles::linalg;
use sofic_tiles::zn::{intmat, AffinePair};
use sofic_tiles::{Alphabet, ProbabilityVector, Rat};

pub const LETTERS: [&str; 3] = ["0", "1", "2"];

fn build(n: usize, m: usize, edges: Vec<(usize, usize, usize)>) -> LabeledGraph {
    let alphabet = Alphabet::new(LETTERS[..m].iter().copied()).unwrap();
    LabeledGraph::new(
        alphabet,
        (0..n).map(|i| format!("v{i}")),
        edges
            .into_iter()
            .map(|(f, t, x)| (format!("v{f}"), format!("v{t}"), vec![x])),
    )
    .unwrap()
}

/// Right-resolving letter-labeled graphs with at most 5 vertices and 3
/// letters; each (vertex, letter) slot is filled with probability 5/6.
pub fn rr_graph() -> impl Strategy<Value = LabeledGraph> {
    (1usize..=5, 1usize..=3).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::option::weighted(5.0 / 6.0, 0..n), n * m).prop_map(move |slots| {
            let edges = slots
                .iter()
                .enumerate()
                .filter_map(|(i, t)| t.map(|t| (i / m, t, i % m)))
                .collect();
            build(n, m, edges)
        })
    })
}

/// Arbitrary letter-labeled graphs with at most 5 vertices and 3 letters.
pub fn any_graph() -> impl Strategy<Value = LabeledGraph> {
    (1usize..=5, 1usize..=3).prop_flat_map(|(n, m)| {
        prop::collection::vec(0u32..(1 << n), n * m).prop_map(move |masks| {
            let mut edges = Vec::new();
            for (i, mask) in masks.iter().enumerate() {
                for t in 0..n {
                    if mask >> t & 1 == 1 {
                        edges.push((i / m, t, i % m));
                    }
                }
            }
            build(n, m, edges)
        })
    })
}

/// Probability vectors with weights `k_i / Σ k` for `k_i ∈ 1..=9`.
pub fn weights(m: usize) -> impl Strategy<Value = ProbabilityVector> {
    prop::collection::vec(1i64..=9, m).prop_map(|ks| {
        let total: i64 = ks.iter().sum();
        ProbabilityVector::new(ks.iter().map(|&k| Rat::new(k.into(), total.into())).collect()).unwrap()
    })
}

/// `succ[v][x]` as a bitmask of targets.
fn successor_masks(g: &LabeledGraph) -> Vec<Vec<u32>> {
    let m = g.alphabet().len();
    let mut succ = vec![vec![0u32; m]; g.vertex_count()];
    for e in g.edges() {
        succ[e.from][e.label[0]] |= 1 << e.to;
    }
    succ
}

fn step(succ: &[Vec<u32>], s: u32, x: usize) -> u32 {
    let mut out = 0;
    for (v, row) in succ.iter().enumerate() {
        if s >> v & 1 == 1 {
            out |= row[x];
        }
    }
    out
}

/// `min |V(w)|` by breadth-first search over subsets reachable from the
/// full vertex set.
pub fn brute_measure_number(g: &LabeledGraph) -> u32 {
    let succ = successor_masks(g);
    let m = g.alphabet().len();
    let full = (1u32 << g.vertex_count()) - 1;
    let mut seen = HashSet::from([full]);
    let mut queue = VecDeque::from([full]);
    let mut best = full.count_ones();
    while let Some(s) = queue.pop_front() {
        best = best.min(s.count_ones());
        for x in 0..m {
            let t = step(&succ, s, x);
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    best
}

/// `P(v ∈ V(w))` for a random word `w` of length `depth`, for every vertex,
/// by pushing the exact law of `V(w)` forward one letter at a time.
pub fn cylinder_upper_bounds(g: &LabeledGraph, p: &ProbabilityVector, depth: usize) -> Vec<Rat> {
    let succ = successor_masks(g);
    let m = g.alphabet().len();
    let n = g.vertex_count();
    let mut law: BTreeMap<u32, Rat> = BTreeMap::from([((1u32 << n) - 1, Rat::one())]);
    for _ in 0..depth {
        let mut next: BTreeMap<u32, Rat> = BTreeMap::new();
        for (s, w) in &law {
            for x in 0..m {
                *next.entry(step(&succ, *s, x)).or_insert_with(Rat::zero) += w * p.weight(x);
            }
        }
        law = next;
    }
    (0..n)
        .map(|v| law.iter().filter(|(s, _)| *s >> v & 1 == 1).map(|(_, w)| w.clone()).sum())
        .collect()
}

/// `μ_p(B_v)` as the probability that the forward subset walk from `{v}`
/// never dies, from an exact absorption computation on that walk.
pub fn b_by_absorption(g: &LabeledGraph, p: &ProbabilityVector) -> Vec<Rat> {
    let succ = successor_masks(g);
    let m = g.alphabet().len();
    (0..g.vertex_count())
        .map(|v| {
            let start = 1u32 << v;
            let mut index = HashMap::from([(start, 0usize)]);
            let mut states = vec![start];
            let mut i = 0;
            while i < states.len() {
                for x in 0..m {
                    let t = step(&succ, states[i], x);
                    if !index.contains_key(&t) {
                        index.insert(t, states.len());
                        states.push(t);
                    }
                }
                i += 1;
            }
            let k = states.len();
            let Some(&dead) = index.get(&0) else {
                return Rat::one();
            };
            // States from which the dead state is reachable.
            let mut can_die = vec![false; k];
            can_die[dead] = true;
            loop {
                let mut changed = false;
                for s in 0..k {
                    if !can_die[s] && (0..m).any(|x| can_die[index[&step(&succ, states[s], x)]]) {
                        can_die[s] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            if !can_die[0] {
                return Rat::one();
            }
            // h(s) = P(die | s) on the states that can die; h = 0 elsewhere.
            let live: Vec<usize> = (0..k).filter(|&s| can_die[s] && s != dead).collect();
            let pos: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let r = live.len();
            let mut a = vec![vec![Rat::zero(); r]; r];
            let mut b = vec![vec![Rat::zero()]; r];
            for (i, &s) in live.iter().enumerate() {
                a[i][i] += Rat::one();
                for x in 0..m {
                    let t = index[&step(&succ, states[s], x)];
                    if t == dead {
                        b[i][0] += p.weight(x);
                    } else if let Some(&j) = pos.get(&t) {
                        a[i][j] -= p.weight(x);
                    }
                }
            }
            let h = linalg::solve(&a, &b).expect("absorption system is regular");
            Rat::one() - &h[pos[&0]][0]
        })
        .collect()
}

/// A random valid pair in dimension 1 or 2 with `2 ≤ |det A| ≤ 4`. Each digit
/// is drawn from the coset representatives whose max-norm is within `spread`
/// of the shortest one; short digits keep the nucleus small.
pub fn random_pair<R: Rng>(rng: &mut R) -> AffinePair {
    let n = rng.gen_range(1..=2usize);
    let spread = rng.gen_range(0..=1u32);
    loop {
        let matrix: Vec<Vec<BigInt>> = (0..n)
            .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect())
            .collect();
        let det = intmat::det(&matrix);
        let d = det.magnitude().clone();
        if d < 2u32.into() || d > 4u32.into() {
            continue;
        }
        // Group the candidate digits by coset and pick one per coset.
        let adj = intmat::adjugate(&matrix);
        let mut classes: BTreeMap<Vec<BigInt>, Vec<Vec<BigInt>>> = BTreeMap::new();
        let range: Vec<i64> = (-4..=4).collect();
        let candidates: Vec<Vec<BigInt>> = if n == 1 {
            range.iter().map(|&a| vec![BigInt::from(a)]).collect()
        } else {
            range
                .iter()
                .flat_map(|&a| range.iter().map(move |&b| vec![BigInt::from(a), BigInt::from(b)]))
                .collect()
        };
        for c in candidates {
            let key = intmat::residue(&intmat::apply(&adj, &c), &det);
            classes.entry(key).or_default().push(c);
        }
        let digits: Vec<Vec<BigInt>> = classes
            .values()
            .map(|members| {
                let norm = |c: &Vec<BigInt>| c.iter().map(|x| x.magnitude().clone()).max().unwrap();
                let best = members.iter().map(norm).min().unwrap() + spread;
                let short: Vec<_> = members.iter().filter(|c| norm(c) <= best).collect();
                short[rng.gen_range(0..short.len())].clone()
            })
            .collect();
        let pair = AffinePair::new(matrix, digits);
        if pair.validate().is_empty() {
            return pair;
        }
    }
}

/// `V(w)` as a bitmask: the vertices at which a path labeled `w` can end.
pub fn ending_set(g: &LabeledGraph, w: &[usize]) -> u32 {
    let succ = successor_masks(g);
    w.iter().fold((1u32 << g.vertex_count()) - 1, |s, &x| step(&succ, s, x))
}

/// Whether the subset walk from the full vertex set never dies.
pub fn brute_full_shift(g: &LabeledGraph) -> bool {
    let succ = successor_masks(g);
    let full = (1u32 << g.vertex_count()) - 1;
    let mut seen = HashSet::from([full]);
    let mut queue = VecDeque::from([full]);
    while let Some(s) = queue.pop_front() {
        if s == 0 {
            return false;
        }
        for x in 0..g.alphabet().len() {
            let t = step(&succ, s, x);
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    true
}
