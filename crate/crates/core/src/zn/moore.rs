use std::collections::{HashMap, VecDeque};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

/// Output letter and next state of one transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub out: usize,
    pub next: usize,
}

/// Automaton of a nucleus: state `g` reads `x`, writes `g(x)` and moves to
/// `g|_x`. Letters are `0..letters`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreDiagram {
    letters: usize,
    states: Vec<String>,
    identity: usize,
    transitions: Vec<Vec<Transition>>,
}

impl MooreDiagram {
    /// Checks that state names are distinct, transitions are total and in
    /// range, every state permutes the letters and the identity acts
    /// trivially.
    pub fn new(letters: usize, states: Vec<String>, identity: usize, transitions: Vec<Vec<Transition>>) -> Result<Self> {
        if letters == 0 {
            return Err(Error::Nucleus("letter count must be positive".into()));
        }
        let mut seen = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if seen.insert(s.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(s.clone()));
            }
        }
        if transitions.len() != states.len() {
            return Err(Error::Nucleus("transition table does not match the state list".into()));
        }
        if identity >= states.len() {
            return Err(Error::MissingIdentity(format!("#{identity}")));
        }
        for (g, row) in transitions.iter().enumerate() {
            if row.len() != letters {
                return Err(Error::Nucleus(format!(
                    "state `{}` has {} transitions, expected {letters}",
                    states[g],
                    row.len()
                )));
            }
            let mut hit = vec![false; letters];
            for t in row {
                if t.out >= letters {
                    return Err(Error::Nucleus(format!("state `{}` outputs letter {} out of range", states[g], t.out)));
                }
                if t.next >= states.len() {
                    return Err(Error::UndeclaredState {
                        from: states[g].clone(),
                        to: format!("#{}", t.next),
                    });
                }
                hit[t.out] = true;
            }
            if hit.contains(&false) {
                return Err(Error::Nucleus(format!("state `{}` does not permute the letters", states[g])));
            }
        }
        for (x, t) in transitions[identity].iter().enumerate() {
            if t.out != x || t.next != identity {
                return Err(Error::IdentityNotTrivial(x));
            }
        }
        Ok(MooreDiagram {
            letters,
            states,
            identity,
            transitions,
        })
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn transition(&self, g: usize, x: usize) -> Transition {
        self.transitions[g][x]
    }

    pub fn transitions(&self, g: usize) -> &[Transition] {
        &self.transitions[g]
    }

    fn graph_with(&self, edge: impl Fn(usize, usize, Transition) -> usize) -> LabeledGraph {
        let edges = (0..self.states.len())
            .flat_map(|g| {
                self.transitions[g]
                    .iter()
                    .enumerate()
                    .map(move |(x, &t)| (g, x, t))
            })
            .map(|(g, x, t)| (g, edge(g, x, t), vec![x], 1))
            .collect();
        LabeledGraph::from_parts(Alphabet::indexed(self.letters), self.states.clone(), edges)
            .expect("diagram was validated")
    }
}

/// `Γ_𝒩`: the diagram with each label `(x, y)` replaced by `x`.
pub fn input_projection(nuc: &MooreDiagram) -> LabeledGraph {
    nuc.graph_with(|_, _, t| t.next)
}

/// Edges labeled `(x, x)` keep their target; edges labeled `(x, y)` with
/// `x ≠ y` are redirected to the identity.
pub fn diagonal_graph(nuc: &MooreDiagram) -> LabeledGraph {
    nuc.graph_with(|_, x, t| if t.out == x { t.next } else { nuc.identity })
}

/// Every state restricts to the identity along some word.
pub fn open_set_condition(nuc: &MooreDiagram) -> bool {
    let n = nuc.states.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for g in 0..n {
        for t in &nuc.transitions[g] {
            pred[t.next].push(g);
        }
    }
    let mut reached = vec![false; n];
    reached[nuc.identity] = true;
    let mut queue = VecDeque::from([nuc.identity]);
    while let Some(h) = queue.pop_front() {
        for &g in &pred[h] {
            if !reached[g] {
                reached[g] = true;
                queue.push_back(g);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::{check_resolving, Resolving};
    use crate::measure::measure_number;

    fn t(out: usize, next: usize) -> Transition {
        Transition { out, next }
    }

    /// States `0, 1, -1` of the binary adding machine.
    pub(crate) fn adding_machine() -> MooreDiagram {
        MooreDiagram::new(
            2,
            vec!["0".into(), "1".into(), "-1".into()],
            0,
            vec![
                vec![t(0, 0), t(1, 0)],
                vec![t(1, 0), t(0, 1)],
                vec![t(1, 2), t(0, 0)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn adding_machine_projection() {
        let nuc = adding_machine();
        let g = input_projection(&nuc);
        assert_eq!(check_resolving(&g), Resolving::StrictlyRightResolving);
        assert_eq!(g.vertex_count(), 3);
        let one = g.vertex_index("1").unwrap();
        let targets: Vec<(usize, &str)> = g.out_edges(one).iter().map(|e| (e.label[0], g.vertex_name(e.to))).collect();
        assert_eq!(targets, vec![(0, "0"), (1, "1")]);
        assert!(open_set_condition(&nuc));
        assert_eq!(measure_number(&g).unwrap().value, 1);
    }

    #[test]
    fn adding_machine_diagonal() {
        let nuc = adding_machine();
        let d = diagonal_graph(&nuc);
        // every edge of ±1 is twisted
        for v in ["1", "-1"] {
            let i = d.vertex_index(v).unwrap();
            assert!(d.out_edges(i).iter().all(|e| d.vertex_name(e.to) == "0"));
        }
        assert_eq!(measure_number(&d).unwrap().value, 1);
    }

    #[test]
    fn trivial_nucleus() {
        let nuc = MooreDiagram::new(3, vec!["e".into()], 0, vec![vec![t(0, 0), t(1, 0), t(2, 0)]]).unwrap();
        let g = input_projection(&nuc);
        assert_eq!(check_resolving(&g), Resolving::StrictlyRightResolving);
        assert!(open_set_condition(&nuc));
        assert_eq!(measure_number(&diagonal_graph(&nuc)).unwrap().value, 1);
    }

    #[test]
    fn osc_fails_without_path_to_identity() {
        // state "s" swaps the letters and stays put
        let nuc = MooreDiagram::new(
            2,
            vec!["e".into(), "s".into()],
            0,
            vec![vec![t(0, 0), t(1, 0)], vec![t(1, 1), t(0, 1)]],
        )
        .unwrap();
        assert!(!open_set_condition(&nuc));
        assert_eq!(measure_number(&input_projection(&nuc)).unwrap().value, 2);
    }

    #[test]
    fn rejects_bad_diagrams() {
        let bad_identity = MooreDiagram::new(2, vec!["e".into()], 0, vec![vec![t(1, 0), t(0, 0)]]);
        assert!(matches!(bad_identity, Err(Error::IdentityNotTrivial(0))));
        let dangling = MooreDiagram::new(2, vec!["e".into()], 0, vec![vec![t(0, 0), t(1, 3)]]);
        assert!(matches!(dangling, Err(Error::UndeclaredState { .. })));
        let not_perm = MooreDiagram::new(
            2,
            vec!["e".into(), "s".into()],
            0,
            vec![vec![t(0, 0), t(1, 0)], vec![t(0, 0), t(0, 0)]],
        );
        assert!(matches!(not_perm, Err(Error::Nucleus(_))));
    }
}
