use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::intmat::{self, IntVector};
use super::moore::{MooreDiagram, Transition};
use super::pair::ExpandingSystem;
use crate::error::{Error, Result};
use crate::scc::tarjan;

/// Largest set handled in one closure round.
pub const DEFAULT_CANDIDATE_CAP: usize = 1_000_000;
/// Largest number of sumset rounds.
pub const DEFAULT_ROUND_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NucleusCaps {
    pub candidates: usize,
    pub rounds: usize,
}

impl Default for NucleusCaps {
    fn default() -> Self {
        NucleusCaps {
            candidates: DEFAULT_CANDIDATE_CAP,
            rounds: DEFAULT_ROUND_CAP,
        }
    }
}

/// The nucleus of the `Z^n` action together with its diagram. State `i` of
/// the diagram is `elements[i]`; state 0 is the identity.
#[derive(Debug, Clone)]
pub struct ZnNucleus {
    pub elements: Vec<IntVector>,
    pub diagram: MooreDiagram,
}

impl ZnNucleus {
    pub fn index_of(&self, g: &[BigInt]) -> Option<usize> {
        self.elements.iter().position(|h| h.as_slice() == g)
    }
}

/// Display name of a group element: `3` in dimension 1, `(1,0)` otherwise.
pub fn element_name(g: &[BigInt]) -> String {
    if g.len() == 1 {
        g[0].to_string()
    } else {
        let parts: Vec<String> = g.iter().map(BigInt::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// Inverse of [`element_name`].
pub fn parse_element(s: &str, n: usize) -> Result<IntVector> {
    let body = s.trim();
    let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body);
    let v = body
        .split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::Schema(format!("bad group element `{s}`"))))
        .collect::<Result<IntVector>>()?;
    if v.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: v.len(),
        });
    }
    Ok(v)
}

/// Canonical order: by `l1` norm, then coordinates in decreasing order, so
/// `0, 1, -1, 2, -2, ...` in dimension 1.
pub fn canonical_cmp(a: &IntVector, b: &IntVector) -> Ordering {
    let l1 = |v: &IntVector| v.iter().map(|x| x.abs()).sum::<BigInt>();
    l1(a).cmp(&l1(b)).then_with(|| b.cmp(a))
}

pub fn compute_nucleus(sys: &ExpandingSystem) -> Result<ZnNucleus> {
    let n = sys.dimension();
    let mut seeds = vec![vec![BigInt::zero(); n]];
    for i in 0..n {
        for s in [1, -1] {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(s);
            seeds.push(e);
        }
    }
    compute_nucleus_from(sys, seeds, NucleusCaps::default())
}

/// Runs the sumset iteration from arbitrary seeds (the identity is always
/// added).
pub fn compute_nucleus_from(sys: &ExpandingSystem, seeds: Vec<IntVector>, caps: NucleusCaps) -> Result<ZnNucleus> {
    let n = sys.dimension();
    if let Some(s) = seeds.iter().find(|s| s.len() != n) {
        return Err(Error::Dimension {
            expected: n,
            found: s.len(),
        });
    }
    let mut start: BTreeSet<IntVector> = seeds.into_iter().collect();
    start.insert(vec![BigInt::zero(); n]);
    let mut current = eventual(sys, start, caps.candidates)?;
    let mut rounds = 0;
    loop {
        let elems: Vec<&IntVector> = current.iter().collect();
        if elems.len().saturating_mul(elems.len()) > caps.candidates.saturating_mul(4) {
            return Err(Error::Cap {
                what: "nucleus sumset candidates",
                cap: caps.candidates,
            });
        }
        let mut sums = BTreeSet::new();
        for a in &elems {
            for b in &elems {
                sums.insert(a.iter().zip(b.iter()).map(|(x, y)| x + y).collect::<IntVector>());
            }
        }
        let next = eventual(sys, sums, caps.candidates)?;
        if next == current {
            break;
        }
        current = next;
        rounds += 1;
        if rounds >= caps.rounds {
            return Err(Error::Cap {
                what: "nucleus sumset rounds",
                cap: caps.rounds,
            });
        }
    }
    build(sys, current)
}

/// Closes `set` under restriction and keeps the states on a cycle of the
/// restriction digraph or reachable from one.
fn eventual(sys: &ExpandingSystem, set: BTreeSet<IntVector>, cap: usize) -> Result<BTreeSet<IntVector>> {
    let mut elems: Vec<IntVector> = Vec::new();
    let mut index: HashMap<IntVector, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for g in set {
        index.insert(g.clone(), elems.len());
        queue.push_back(elems.len());
        elems.push(g);
    }
    let m = sys.digit_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); elems.len()];
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(m);
        for x in 0..m {
            let (_, h) = sys.digit_transition(&elems[i], x);
            let j = match index.get(&h) {
                Some(&j) => j,
                None => {
                    if elems.len() >= cap {
                        return Err(Error::Cap {
                            what: "nucleus closure candidates",
                            cap,
                        });
                    }
                    let j = elems.len();
                    index.insert(h.clone(), j);
                    elems.push(h);
                    adj.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            row.push(j);
        }
        adj[i] = row;
    }

    let mut reached = vec![false; elems.len()];
    let mut queue = VecDeque::new();
    for comp in tarjan(elems.len(), &adj) {
        let cyclic = comp.len() > 1 || adj[comp[0]].contains(&comp[0]);
        if cyclic {
            for &s in &comp {
                reached[s] = true;
                queue.push_back(s);
            }
        }
    }
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i] {
            if !reached[j] {
                reached[j] = true;
                queue.push_back(j);
            }
        }
    }
    Ok(elems
        .into_iter()
        .zip(reached)
        .filter_map(|(g, r)| r.then_some(g))
        .collect())
}

fn build(sys: &ExpandingSystem, set: BTreeSet<IntVector>) -> Result<ZnNucleus> {
    let mut elements: Vec<IntVector> = set.into_iter().collect();
    elements.sort_by(canonical_cmp);
    let index: HashMap<&IntVector, usize> = elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let m = sys.digit_count();
    let mut transitions = Vec::with_capacity(elements.len());
    for g in &elements {
        let mut row = Vec::with_capacity(m);
        for x in 0..m {
            let (out, h) = sys.digit_transition(g, x);
            let next = *index
                .get(&h)
                .ok_or_else(|| Error::Internal(format!("nucleus is not closed at {}", element_name(g))))?;
            row.push(Transition { out, next });
        }
        transitions.push(row);
    }
    let names = elements.iter().map(|g| element_name(g)).collect();
    let diagram = MooreDiagram::new(m, names, 0, transitions)?;
    Ok(ZnNucleus { elements, diagram })
}

/// Largest sup-norm among the elements.
pub fn max_norm(elements: &[IntVector]) -> f64 {
    elements
        .iter()
        .map(|g| intmat::vec_inf_norm(g).to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}
