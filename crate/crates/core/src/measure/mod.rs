//! Bernoulli measures of the sofic sets `F_v`, `B_v` of a labeled graph.
//!
//! For right-resolving graphs almost every left-infinite sequence ends at the
//! same number of vertices; that integer is the measure number and equals
//! `Σ_v μ_p(F_v)` for every Bernoulli measure `μ_p`. The `F`-measures are
//! computed as limits of the [`SubsetChain`]: the events `v ∈ V(w_n)` decrease
//! in `n` and their intersection is `F_v`, so `μ_p(F_v) = lim P(v ∈ S_n)`,
//! which is an absorption-weighted stationary average. The `B`-measures solve
//! `x = T_p x` with boundary values on the terminal components.

mod chain;

pub use chain::{ChainLimit, SubsetChain, DEFAULT_CHAIN_CAP};

use crate::alphabet::{ProbabilityVector, Word};
use crate::error::{Error, Result};
use crate::graph::{
    check_resolving, determinize_forward, expand_word_labels, reverse, scc_decompose, transition_matrix,
    LabeledGraph, Resolving,
};
use crate::linalg::solve_fixed_point;
use crate::rational::{one, zero, Rat};

/// Exact measure per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureVector {
    pub vertices: Vec<String>,
    pub values: Vec<Rat>,
}

impl MeasureVector {
    pub fn get(&self, vertex: &str) -> Option<&Rat> {
        self.vertices
            .iter()
            .position(|v| v == vertex)
            .map(|i| &self.values[i])
    }

    pub fn sum(&self) -> Rat {
        self.values.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rat)> {
        self.vertices.iter().map(String::as_str).zip(&self.values)
    }
}

/// Measure number of a right-resolving letter-labeled graph with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureNumber {
    pub value: u64,
    /// A shortest word `w` with `|V(w)| = value`, lexicographically first.
    pub witness: Word,
}

pub fn measure_number(g: &LabeledGraph) -> Result<MeasureNumber> {
    let chain = SubsetChain::build(g)?;
    Ok(measure_number_of(&chain))
}

fn measure_number_of(chain: &SubsetChain) -> MeasureNumber {
    let (value, state) = chain.min_state();
    MeasureNumber {
        value: value as u64,
        witness: chain.word_to(state),
    }
}

/// `μ_p(F_v)` for every vertex of a right-resolving letter-labeled graph.
pub fn mu_f(g: &LabeledGraph, p: &ProbabilityVector) -> Result<MeasureVector> {
    p.check_alphabet(g.alphabet())?;
    let chain = SubsetChain::build(g)?;
    let limit = chain.limit(p)?;
    Ok(f_vector(g, &chain, &limit))
}

fn f_vector(g: &LabeledGraph, chain: &SubsetChain, limit: &ChainLimit) -> MeasureVector {
    MeasureVector {
        vertices: g.vertices().to_vec(),
        values: (0..g.vertex_count())
            .map(|v| limit.joint_membership(chain, &[v]))
            .collect(),
    }
}

/// `μ_p(B_v)` for every vertex of a right-resolving letter-labeled graph.
///
/// Terminal components get 1 if they are strictly right-resolving on their
/// own and 0 otherwise; every other vertex satisfies
/// `μ(B_v) = Σ_u t_vu μ(B_u)`, which has a unique solution because the
/// non-terminal part of `T_p` is strictly substochastic.
pub fn mu_b(g: &LabeledGraph, p: &ProbabilityVector) -> Result<MeasureVector> {
    if !g.is_letter_labeled() {
        return Err(Error::NotLetterLabeled);
    }
    if !check_resolving(g).is_right_resolving() {
        return Err(Error::NotRightResolving);
    }
    p.check_alphabet(g.alphabet())?;
    let n = g.vertex_count();
    let m = g.alphabet().len();
    let cond = scc_decompose(g);
    let mut values: Vec<Option<Vec<Rat>>> = vec![None; n];
    for (c, comp) in cond.components.iter().enumerate() {
        if !cond.terminal[c] {
            continue;
        }
        let strict = comp.iter().all(|&v| g.out_edges(v).len() == m);
        let b = if strict { one() } else { zero() };
        for &v in comp {
            values[v] = Some(vec![b.clone()]);
        }
    }
    let t = transition_matrix(g, p)?;
    let succ: Vec<Vec<(usize, Rat)>> = t
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|(_, w)| *w != zero())
                .collect()
        })
        .collect();
    solve_fixed_point(&succ, &mut values, 1)
        .map_err(|_| Error::Internal("non-terminal part of T_p is singular".into()))?;
    Ok(MeasureVector {
        vertices: g.vertices().to_vec(),
        values: values
            .into_iter()
            .map(|v| v.expect("all vertices solved").swap_remove(0))
            .collect(),
    })
}

/// `μ_p(F_v)` for an arbitrary finite labeled graph: expand word labels,
/// reverse, determinize from singletons, and read off `μ_p(B_{v})` there.
pub fn mu_f_general(g: &LabeledGraph, p: &ProbabilityVector) -> Result<MeasureVector> {
    let r = reverse(&expand_word_labels(g));
    b_through_determinization(g, &r, p)
}

/// `μ_p(B_v)` for an arbitrary finite labeled graph via determinization.
pub fn mu_b_general(g: &LabeledGraph, p: &ProbabilityVector) -> Result<MeasureVector> {
    let e = expand_word_labels(g);
    b_through_determinization(g, &e, p)
}

fn b_through_determinization(
    original: &LabeledGraph,
    letter_graph: &LabeledGraph,
    p: &ProbabilityVector,
) -> Result<MeasureVector> {
    p.check_alphabet(original.alphabet())?;
    let d = determinize_forward(letter_graph)?;
    let b = mu_b(&d.graph, p)?;
    let values = original
        .vertices()
        .iter()
        .map(|name| {
            let v = letter_graph.vertex_index(name)?;
            Ok(b.values[d.embed[v]].clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureVector {
        vertices: original.vertices().to_vec(),
        values,
    })
}

/// Whether every finite word labels some path, i.e. `ℬ = X^ω` (equivalently
/// `ℱ = X^{-ω}`). Works for any graph; word labels are expanded first.
pub fn is_full_shift(g: &LabeledGraph) -> Result<bool> {
    let e = expand_word_labels(g);
    if e.vertex_count() == 0 {
        return Ok(false);
    }
    let chain = SubsetChain::explore(&e, DEFAULT_CHAIN_CAP)?;
    Ok(chain.states().iter().all(|s| !s.is_empty()))
}

/// `μ_p(F_v1 ∩ F_v2)` for a right-resolving letter-labeled graph.
///
/// In the label product of `g` with itself the chain state reached by a word
/// is `V(w) × V(w)`, so this is the limit probability that both vertices lie
/// in the chain state.
pub fn intersection_measure_f(g: &LabeledGraph, v1: &str, v2: &str, p: &ProbabilityVector) -> Result<Rat> {
    let a = g.vertex_index(v1)?;
    let b = g.vertex_index(v2)?;
    p.check_alphabet(g.alphabet())?;
    let chain = SubsetChain::build(g)?;
    let limit = chain.limit(p)?;
    Ok(limit.joint_membership(&chain, &[a, b]))
}

/// One strongly connected component in a [`MeasureReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentMeasure {
    pub vertices: Vec<String>,
    pub terminal: bool,
    pub strictly_right_resolving: bool,
    /// Measure number of the component as a standalone graph, when it is
    /// strictly right-resolving.
    pub measure_number: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureReport {
    pub measure_number: u64,
    pub witness: Word,
    pub f: MeasureVector,
    pub b: MeasureVector,
    pub components: Vec<ComponentMeasure>,
}

/// Everything about a right-resolving letter-labeled graph at once. Checks
/// `measure_number = Σ_v μ_p(F_v)` and the fixed-vector identities before
/// returning.
pub fn measure_report(g: &LabeledGraph, p: &ProbabilityVector) -> Result<MeasureReport> {
    p.check_alphabet(g.alphabet())?;
    let chain = SubsetChain::build(g)?;
    let limit = chain.limit(p)?;
    let number = measure_number_of(&chain);
    let f = f_vector(g, &chain, &limit);
    let b = mu_b(g, p)?;

    if f.sum() != Rat::from_integer(number.value.into()) {
        return Err(Error::Internal(format!(
            "Σ μ(F_v) = {} differs from measure number {}",
            f.sum(),
            number.value
        )));
    }
    let t = transition_matrix(g, p)?;
    if crate::linalg::vec_mat(&f.values, &t) != f.values {
        return Err(Error::Internal("F-vector is not a left fixed vector of T_p".into()));
    }
    if crate::linalg::mat_vec(&t, &b.values) != b.values {
        return Err(Error::Internal("B-vector is not a right fixed vector of T_p".into()));
    }

    let cond = scc_decompose(g);
    let components = cond
        .components
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let sub = g.induced(comp);
            let strict = check_resolving(&sub) == Resolving::StrictlyRightResolving;
            let measure_number = if strict {
                Some(measure_number(&sub)?.value)
            } else {
                None
            };
            Ok(ComponentMeasure {
                vertices: comp.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
                terminal: cond.terminal[c],
                strictly_right_resolving: strict,
                measure_number,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(MeasureReport {
        measure_number: number.value,
        witness: number.witness,
        f,
        b,
        components,
    })
}
