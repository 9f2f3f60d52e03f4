use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::intmat::{self, IntMatrix, IntVector};
use crate::error::{Error, Result};
use crate::rational::{to_f64, Rat};

/// Largest power of `A^{-1}` tried when certifying contraction.
pub const MAX_CONTRACTION_POWER: u32 = 64;
const SPECTRAL_MARGIN: f64 = 1e-9;

/// Expanding integer matrix with a digit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePair {
    pub matrix: IntMatrix,
    pub digits: Vec<IntVector>,
}

/// One reason an [`AffinePair`] is unusable.
#[derive(Debug, Clone, PartialEq)]
pub enum PairIssue {
    Shape(String),
    Singular,
    DigitCount { det: BigInt, digits: usize },
    TooFewDigits,
    DuplicateResidue { first: usize, second: usize },
    NotExpanding { min_modulus: f64 },
    NoContractingPower,
}

impl fmt::Display for PairIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairIssue::Shape(s) => write!(f, "shape: {s}"),
            PairIssue::Singular => write!(f, "matrix is singular"),
            PairIssue::DigitCount { det, digits } => {
                write!(f, "|det A| = {} but {digits} digits were given", det.abs())
            }
            PairIssue::TooFewDigits => write!(f, "|det A| must be at least 2"),
            PairIssue::DuplicateResidue { first, second } => {
                write!(f, "digits {first} and {second} lie in the same coset of A·Z^n")
            }
            PairIssue::NotExpanding { min_modulus } => {
                write!(f, "matrix is not expanding (smallest eigenvalue modulus {min_modulus:.6})")
            }
            PairIssue::NoContractingPower => {
                write!(f, "no power A^-k with k <= {MAX_CONTRACTION_POWER} has sup-norm below 1")
            }
        }
    }
}

impl AffinePair {
    pub fn new(matrix: IntMatrix, digits: Vec<IntVector>) -> Self {
        AffinePair { matrix, digits }
    }

    pub fn from_i64(matrix: &[&[i64]], digits: &[&[i64]]) -> Self {
        let conv = |r: &&[i64]| r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        AffinePair {
            matrix: matrix.iter().map(conv).collect(),
            digits: digits.iter().map(conv).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    /// Every problem with the pair, or an empty list.
    pub fn validate(&self) -> Vec<PairIssue> {
        let n = self.matrix.len();
        let mut issues = Vec::new();
        if n == 0 {
            issues.push(PairIssue::Shape("matrix is empty".into()));
            return issues;
        }
        if self.matrix.iter().any(|r| r.len() != n) {
            issues.push(PairIssue::Shape("matrix is not square".into()));
            return issues;
        }
        if let Some(i) = self.digits.iter().position(|d| d.len() != n) {
            issues.push(PairIssue::Shape(format!("digit {i} does not have dimension {n}")));
            return issues;
        }
        let det = intmat::det(&self.matrix);
        if det.is_zero() {
            issues.push(PairIssue::Singular);
            return issues;
        }
        if det.abs() < BigInt::from(2) {
            issues.push(PairIssue::TooFewDigits);
        }
        if BigInt::from(self.digits.len()) != det.abs() {
            issues.push(PairIssue::DigitCount {
                det: det.clone(),
                digits: self.digits.len(),
            });
        }
        let adj = intmat::adjugate(&self.matrix);
        let mut seen: HashMap<IntVector, usize> = HashMap::new();
        for (i, d) in self.digits.iter().enumerate() {
            let key = intmat::residue(&intmat::apply(&adj, d), &det);
            if let Some(&j) = seen.get(&key) {
                issues.push(PairIssue::DuplicateResidue { first: j, second: i });
            } else {
                seen.insert(key, i);
            }
        }
        let roots = intmat::poly_roots(&intmat::char_poly(&self.matrix));
        let min_modulus = roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);
        if min_modulus <= 1.0 + SPECTRAL_MARGIN {
            issues.push(PairIssue::NotExpanding { min_modulus });
        }
        if contracting_power(&adj, &det).is_none() {
            issues.push(PairIssue::NoContractingPower);
        }
        issues
    }
}

/// Smallest `k ≤ 64` with `‖A^{-k}‖∞ < 1`, decided exactly as
/// `‖adj^k‖∞ < |det|^k`.
fn contracting_power(adj: &IntMatrix, det: &BigInt) -> Option<u32> {
    let d = det.abs();
    let mut p = adj.clone();
    let mut dk = d.clone();
    for k in 1..=MAX_CONTRACTION_POWER {
        if intmat::inf_norm(&p) < dk {
            return Some(k);
        }
        p = intmat::mul(&p, adj);
        dk *= &d;
    }
    None
}

/// A validated pair together with the data needed to run the action.
#[derive(Debug, Clone)]
pub struct ExpandingSystem {
    pair: AffinePair,
    det: BigInt,
    adj: IntMatrix,
    digit_of_residue: HashMap<IntVector, usize>,
}

impl ExpandingSystem {
    pub fn new(pair: AffinePair) -> Result<Self> {
        let issues = pair.validate();
        if !issues.is_empty() {
            return Err(Error::InvalidPair(issues));
        }
        let det = intmat::det(&pair.matrix);
        let adj = intmat::adjugate(&pair.matrix);
        let digit_of_residue = pair
            .digits
            .iter()
            .enumerate()
            .map(|(i, d)| (intmat::residue(&intmat::apply(&adj, d), &det), i))
            .collect();
        Ok(ExpandingSystem {
            pair,
            det,
            adj,
            digit_of_residue,
        })
    }

    pub fn pair(&self) -> &AffinePair {
        &self.pair
    }

    pub fn dimension(&self) -> usize {
        self.pair.dimension()
    }

    pub fn digit_count(&self) -> usize {
        self.pair.digits.len()
    }

    pub fn digit(&self, i: usize) -> &IntVector {
        &self.pair.digits[i]
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// Index of the digit congruent to `y` modulo `A·Z^n`.
    pub fn digit_of(&self, y: &[BigInt]) -> usize {
        let key = intmat::residue(&intmat::apply(&self.adj, y), &self.det);
        self.digit_of_residue[&key]
    }

    /// Action of `g` on the first letter: returns the output digit index and
    /// the restriction `A^{-1}(g + d_in - d_out)`.
    pub fn digit_transition(&self, g: &[BigInt], d_in: usize) -> (usize, IntVector) {
        let y: IntVector = g.iter().zip(&self.pair.digits[d_in]).map(|(a, b)| a + b).collect();
        let out = self.digit_of(&y);
        let z: IntVector = y.iter().zip(&self.pair.digits[out]).map(|(a, b)| a - b).collect();
        let next = intmat::apply(&self.adj, &z)
            .into_iter()
            .map(|v| {
                debug_assert!((&v % &self.det).is_zero());
                v / &self.det
            })
            .collect();
        (out, next)
    }

    /// Exact `‖A^{-k}‖∞`.
    pub fn inverse_power_norm(&self, k: u32) -> Rat {
        let mut p = intmat::identity(self.dimension());
        for _ in 0..k {
            p = intmat::mul(&p, &self.adj);
        }
        Rat::new(intmat::inf_norm(&p), self.det.abs().pow(k))
    }

    /// Upper bound for `C = Σ_{i≥1} ‖A^{-i}‖∞`: for the best `k ≤ 64` with
    /// `q = ‖A^{-k}‖ < 1`, `C ≤ (Σ_{i≤k} ‖A^{-i}‖) / (1 - q)`.
    pub fn contraction_constant(&self) -> f64 {
        let d = self.det.abs();
        let mut p = self.adj.clone();
        let mut dk = d.clone();
        let mut partial = Rat::zero();
        let mut best = f64::INFINITY;
        for _ in 1..=MAX_CONTRACTION_POWER {
            let q = Rat::new(intmat::inf_norm(&p), dk.clone());
            partial += &q;
            if q < Rat::one() {
                let bound = to_f64(&(&partial / (Rat::one() - &q)));
                best = best.min(bound);
            }
            p = intmat::mul(&p, &self.adj);
            dk *= &d;
        }
        best * (1.0 + 1e-12)
    }

    /// `max ‖d - d'‖∞` over pairs of digits.
    pub fn digit_spread(&self) -> BigInt {
        let mut best = BigInt::zero();
        for a in &self.pair.digits {
            for b in &self.pair.digits {
                let diff: IntVector = a.iter().zip(b).map(|(x, y)| x - y).collect();
                best = best.max(intmat::vec_inf_norm(&diff));
            }
        }
        best
    }

    /// Bound on the sup-norm of every nucleus element.
    pub fn nucleus_norm_bound(&self) -> f64 {
        self.contraction_constant() * self.digit_spread().to_f64().unwrap_or(f64::INFINITY)
    }

    /// `A^{-1}` in floating point, row-major.
    pub fn inverse_f64(&self) -> Vec<Vec<f64>> {
        let det = self.det.to_f64().unwrap_or(f64::NAN);
        self.adj
            .iter()
            .map(|row| row.iter().map(|x| x.to_f64().unwrap_or(f64::NAN) / det).collect())
            .collect()
    }
}
