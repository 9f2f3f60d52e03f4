//! JSON documents: graphs, affine pairs and nucleus diagrams as input, and
//! the reports built from them. Rationals are always `"num/den"` strings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Number, Value};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::graph::{Determinized, LabeledGraph};
use crate::measure::{MeasureNumber, MeasureReport, MeasureVector};
use crate::oracle::Estimate;
use crate::rational::format_rat;
use crate::tile::TileReport;
use crate::zn::{AffinePair, MooreDiagram, Transition};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub alphabet: Vec<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub label: LabelDoc,
}

/// A label is a string (split into characters unless it names a letter) or
/// an explicit array of letter tokens.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum LabelDoc {
    Text(String),
    Letters(Vec<String>),
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<LabeledGraph> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let label = match &e.label {
                    LabelDoc::Text(s) => alphabet.parse_word(s)?,
                    LabelDoc::Letters(ls) => ls.iter().map(|l| alphabet.letter(l)).collect::<Result<_>>()?,
                };
                if label.is_empty() {
                    return Err(Error::EmptyLabel {
                        from: e.from.clone(),
                        to: e.to.clone(),
                    });
                }
                Ok((e.from.clone(), e.to.clone(), label))
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledGraph::new(alphabet, self.vertices.iter().cloned(), edges)
    }

    /// Canonical document; parallel edges are repeated.
    pub fn from_graph(g: &LabeledGraph) -> Self {
        let a = g.alphabet();
        let single = a.letters().iter().all(|l| l.chars().count() == 1);
        let mut edges = Vec::new();
        for e in g.edges() {
            let label = if single || e.label.len() == 1 {
                LabelDoc::Text(a.format_word(&e.label))
            } else {
                LabelDoc::Letters(e.label.iter().map(|&x| a.token(x).to_string()).collect())
            };
            for _ in 0..e.multiplicity {
                edges.push(EdgeDoc {
                    from: g.vertex_name(e.from).to_string(),
                    to: g.vertex_name(e.to).to_string(),
                    label: label.clone(),
                });
            }
        }
        GraphDoc {
            alphabet: a.letters().to_vec(),
            vertices: g.vertices().to_vec(),
            edges,
        }
    }
}

fn schema_err(e: serde_json::Error) -> Error {
    Error::Schema(e.to_string())
}

pub fn parse_graph(text: &str) -> Result<LabeledGraph> {
    serde_json::from_str::<GraphDoc>(text).map_err(schema_err)?.to_graph()
}

pub fn graph_to_value(g: &LabeledGraph) -> Value {
    serde_json::to_value(GraphDoc::from_graph(g)).expect("graph documents serialize")
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDoc {
    matrix: Vec<Vec<Number>>,
    digits: Vec<Vec<Number>>,
}

fn integer(n: &Number) -> Result<BigInt> {
    n.to_string()
        .parse()
        .map_err(|_| Error::Schema(format!("`{n}` is not an integer")))
}

/// Parses a pair document; validity is checked separately.
pub fn parse_pair(text: &str) -> Result<AffinePair> {
    let doc: PairDoc = serde_json::from_str(text).map_err(schema_err)?;
    let conv = |rows: &[Vec<Number>]| {
        rows.iter()
            .map(|r| r.iter().map(integer).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
    };
    Ok(AffinePair::new(conv(&doc.matrix)?, conv(&doc.digits)?))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    #[serde(rename = "in")]
    input: usize,
    out: usize,
    next: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MooreDoc {
    letters: usize,
    states: Vec<String>,
    identity: String,
    transitions: Map<String, Value>,
}

/// Reads and validates a nucleus diagram.
pub fn parse_nucleus(text: &str) -> Result<MooreDiagram> {
    let doc: MooreDoc = serde_json::from_str(text).map_err(schema_err)?;
    let m = doc.letters;
    let index = |name: &str| doc.states.iter().position(|s| s == name);
    let identity = index(&doc.identity).ok_or_else(|| Error::MissingIdentity(doc.identity.clone()))?;
    if let Some(key) = doc.transitions.keys().find(|k| index(k).is_none()) {
        return Err(Error::Nucleus(format!("transitions given for undeclared state `{key}`")));
    }
    let mut table = Vec::with_capacity(doc.states.len());
    for state in &doc.states {
        let raw = doc
            .transitions
            .get(state)
            .ok_or_else(|| Error::Nucleus(format!("state `{state}` has no transitions")))?;
        let rows: Vec<TransitionDoc> = serde_json::from_value(raw.clone()).map_err(schema_err)?;
        let mut row: Vec<Option<Transition>> = vec![None; m];
        for t in rows {
            if t.input >= m {
                return Err(Error::Nucleus(format!("state `{state}` reads letter {} out of range", t.input)));
            }
            if row[t.input].is_some() {
                return Err(Error::Nucleus(format!("state `{state}` has two transitions on letter {}", t.input)));
            }
            let next = index(&t.next).ok_or_else(|| Error::UndeclaredState {
                from: state.clone(),
                to: t.next.clone(),
            })?;
            row[t.input] = Some(Transition { out: t.out, next });
        }
        let row = row
            .into_iter()
            .enumerate()
            .map(|(x, t)| t.ok_or_else(|| Error::Nucleus(format!("state `{state}` has no transition on letter {x}"))))
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    MooreDiagram::new(m, doc.states, identity, table)
}

pub fn nucleus_to_value(nuc: &MooreDiagram) -> Value {
    let mut transitions = Map::new();
    for (g, name) in nuc.states().iter().enumerate() {
        let rows: Vec<Value> = nuc
            .transitions(g)
            .iter()
            .enumerate()
            .map(|(x, t)| json!({"in": x, "out": t.out, "next": nuc.states()[t.next]}))
            .collect();
        transitions.insert(name.clone(), Value::Array(rows));
    }
    json!({
        "letters": nuc.letters(),
        "states": nuc.states(),
        "identity": nuc.states()[nuc.identity()],
        "transitions": transitions,
    })
}

pub fn vector_to_value(v: &MeasureVector) -> Value {
    Value::Object(
        v.iter()
            .map(|(name, r)| (name.to_string(), Value::String(format_rat(r))))
            .collect(),
    )
}

pub fn measure_number_to_value(g: &LabeledGraph, m: &MeasureNumber) -> Value {
    json!({
        "measure_number": m.value,
        "witness": g.alphabet().format_word(&m.witness),
    })
}

pub fn measure_report_to_value(g: &LabeledGraph, r: &MeasureReport) -> Value {
    let components: Vec<Value> = r
        .components
        .iter()
        .map(|c| {
            json!({
                "vertices": c.vertices,
                "terminal": c.terminal,
                "strictly_right_resolving": c.strictly_right_resolving,
                "measure_number": c.measure_number,
            })
        })
        .collect();
    json!({
        "measure_number": r.measure_number,
        "witness": g.alphabet().format_word(&r.witness),
        "F": vector_to_value(&r.f),
        "B": vector_to_value(&r.b),
        "components": components,
    })
}

pub fn determinized_to_value(original: &LabeledGraph, d: &Determinized) -> Value {
    let embed: Map<String, Value> = d
        .embed
        .iter()
        .enumerate()
        .map(|(v, &s)| (original.vertex_name(v).to_string(), Value::String(d.graph.vertex_name(s).to_string())))
        .collect();
    json!({
        "graph": graph_to_value(&d.graph),
        "embed": embed,
    })
}

pub fn tile_report_to_value(r: &TileReport) -> Value {
    let mut obj = Map::new();
    obj.insert("tile_measure".into(), json!(r.tile_measure));
    obj.insert("osc".into(), json!(r.osc));
    obj.insert("neighbors".into(), json!(r.neighbors));
    if let Some(rows) = &r.intersections {
        let table: Map<String, Value> = rows
            .iter()
            .map(|(a, v)| (a.clone(), Value::String(format_rat(v))))
            .collect();
        obj.insert("intersections".into(), Value::Object(table));
    }
    Value::Object(obj)
}

pub fn estimate_to_value(e: &Estimate) -> Value {
    json!({
        "estimate": e.estimate,
        "box_count": e.box_count,
        "cell": e.cell,
        "piece_diameter_bound": e.piece_diameter_bound,
        "level": e.level,
        "points": e.points,
        "cells": e.cells,
        "interior_cells": e.interior_cells,
    })
}
