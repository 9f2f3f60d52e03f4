//! Tile quantities read off a nucleus: the integer measure of the tile, the
//! open set condition, the neighbors and, for `Z^n` pairs, the exact measures
//! of the overlaps `T ∩ (T + a)`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::alphabet::ProbabilityVector;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::measure::{measure_number, ChainLimit, SubsetChain};
use crate::rational::Rat;
use crate::zn::{
    compute_nucleus, element_name, input_projection, open_set_condition, ExpandingSystem, MooreDiagram, ZnNucleus,
};

/// `meas(Γ_𝒩)`, the Lebesgue measure of the tile in lattice units.
pub fn tile_measure(nuc: &MooreDiagram) -> Result<u64> {
    Ok(measure_number(&input_projection(nuc))?.value)
}

/// Non-identity states in diagram order.
pub fn neighbor_set(nuc: &MooreDiagram) -> Vec<String> {
    nuc.states()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != nuc.identity())
        .map(|(_, s)| s.clone())
        .collect()
}

/// Subset-chain data of `Γ_𝒩` reused across intersection queries.
pub struct Intersections<'a> {
    nucleus: &'a ZnNucleus,
    graph: LabeledGraph,
    /// `vertex[i]` is the graph vertex of `nucleus.elements[i]`.
    vertex: Vec<usize>,
    chain: SubsetChain,
    limit: ChainLimit,
}

impl<'a> Intersections<'a> {
    pub fn new(nucleus: &'a ZnNucleus) -> Result<Self> {
        let graph = input_projection(&nucleus.diagram);
        let vertex = nucleus
            .diagram
            .states()
            .iter()
            .map(|s| graph.vertex_index(s))
            .collect::<Result<Vec<_>>>()?;
        let chain = SubsetChain::build(&graph)?;
        let limit = chain.limit(&ProbabilityVector::uniform(graph.alphabet()))?;
        Ok(Intersections {
            nucleus,
            graph,
            vertex,
            chain,
            limit,
        })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    /// `μ(F_h)` for nucleus element `i`.
    pub fn f_measure(&self, i: usize) -> Rat {
        self.limit.joint_membership(&self.chain, &[self.vertex[i]])
    }

    /// `μ(T ∩ (T + a)) = Σ_{h, h-a ∈ 𝒩} μ(F_h ∩ F_{h-a})`.
    pub fn at(&self, a: &[BigInt]) -> Result<Rat> {
        let n = self.nucleus.elements.first().map_or(0, Vec::len);
        if a.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: a.len(),
            });
        }
        let mut total = Rat::zero();
        for (i, h) in self.nucleus.elements.iter().enumerate() {
            let k: Vec<BigInt> = h.iter().zip(a).map(|(x, y)| x - y).collect();
            if let Some(j) = self.nucleus.index_of(&k) {
                total += self.limit.joint_membership(&self.chain, &[self.vertex[i], self.vertex[j]]);
            }
        }
        Ok(total)
    }
}

/// `μ(T ∩ (T + a))` for a nucleus computed from a pair.
pub fn tile_intersection(nucleus: &ZnNucleus, a: &[BigInt]) -> Result<Rat> {
    Intersections::new(nucleus)?.at(a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileReport {
    pub tile_measure: u64,
    pub osc: bool,
    pub neighbors: Vec<String>,
    /// Overlap measure for the identity and every neighbor, in diagram
    /// order. Only available for nuclei computed from a pair.
    pub intersections: Option<Vec<(String, Rat)>>,
}

/// Computes the nucleus of a pair and reports on its tile.
pub fn tile_report(sys: &ExpandingSystem) -> Result<TileReport> {
    tile_report_for(&compute_nucleus(sys)?)
}

pub fn tile_report_for(nucleus: &ZnNucleus) -> Result<TileReport> {
    let mut report = diagram_report(&nucleus.diagram)?;
    let table = Intersections::new(nucleus)?;
    let mut rows = Vec::with_capacity(nucleus.elements.len());
    for g in &nucleus.elements {
        rows.push((element_name(g), table.at(g)?));
    }
    let total: Rat = rows.iter().map(|(_, r)| r).sum();
    let square = Rat::from_integer(BigInt::from(report.tile_measure).pow(2));
    if total != square {
        return Err(Error::Internal(format!(
            "overlap measures sum to {total}, expected {square}"
        )));
    }
    report.intersections = Some(rows);
    Ok(report)
}

/// Report for a diagram without group structure: measure, open set
/// condition and neighbors.
pub fn diagram_report(nuc: &MooreDiagram) -> Result<TileReport> {
    let tile_measure = tile_measure(nuc)?;
    let osc = open_set_condition(nuc);
    if osc != (tile_measure == 1) {
        return Err(Error::Internal(format!(
            "open set condition is {osc} but the tile measure is {tile_measure}"
        )));
    }
    Ok(TileReport {
        tile_measure,
        osc,
        neighbors: neighbor_set(nuc),
        intersections: None,
    })
}
