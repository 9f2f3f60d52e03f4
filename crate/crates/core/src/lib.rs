//! Exact Bernoulli measures of sofic subshifts given by finite labeled
//! graphs, and their application to the Lebesgue measure of integral
//! self-affine tiles through the nucleus of the associated `Z^n` action.

pub mod alphabet;
pub mod error;
pub mod graph;
pub mod json;
pub mod linalg;
pub mod measure;
pub mod oracle;
pub mod rational;
pub mod scc;
pub mod tile;
pub mod vertex_set;
pub mod zn;

pub use alphabet::{Alphabet, Letter, ProbabilityVector, Word};
pub use error::{Error, ErrorKind, Result};
pub use graph::LabeledGraph;
pub use rational::Rat;
