//! The self-similar action of `Z^n` given by an expanding integer matrix `A`
//! and a digit transversal `D`: `g` reads digit `d`, writes the digit `d'`
//! with `g + d - d' ∈ A·Z^n` and restricts to `A^{-1}(g + d - d')`.

pub mod intmat;
mod moore;
mod nucleus;
mod pair;

pub use moore::{diagonal_graph, input_projection, open_set_condition, MooreDiagram, Transition};
pub use nucleus::{
    canonical_cmp, compute_nucleus, compute_nucleus_from, element_name, max_norm, parse_element, NucleusCaps,
    ZnNucleus, DEFAULT_CANDIDATE_CAP, DEFAULT_ROUND_CAP,
};
pub use pair::{AffinePair, ExpandingSystem, PairIssue, MAX_CONTRACTION_POWER};
