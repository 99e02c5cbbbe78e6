//! The network hypergraph: one reactant/product vertex pair per reaction,
//! one hyperedge per species, one two-vertex edge per reaction (empty for
//! degradations), plus the 0/1 vertex-edge incidence matrix.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde_json::json;
use thiserror::Error;

use crate::massaction::RatePolynomial;
use crate::network::{Network, SpeciesId};

/// A hypergraph vertex: the reactant (`u_i`) or product (`v_i`) side of a
/// reaction. The same complex in different reactions yields distinct vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexId {
    /// `u_i` for reaction `i` (1-based).
    Reactant(usize),
    /// `v_i` for reaction `i` (1-based); present even when the product is empty.
    Product(usize),
}

impl VertexId {
    pub fn reaction(&self) -> usize {
        match self {
            VertexId::Reactant(i) | VertexId::Product(i) => *i,
        }
    }

    pub fn is_reactant(&self) -> bool {
        matches!(self, VertexId::Reactant(_))
    }
}

// Canonical vertex order is u1, v1, u2, v2, ...
impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |v: &VertexId| (v.reaction(), u8::from(!v.is_reactant()));
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Reactant(i) => write!(f, "u{i}"),
            VertexId::Product(i) => write!(f, "v{i}"),
        }
    }
}

impl FromStr for VertexId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, rest) = s.split_at(1.min(s.len()));
        let index: usize = rest
            .parse()
            .map_err(|_| format!("invalid vertex id {s:?} (expected u<i> or v<i>)"))?;
        match head {
            "u" => Ok(VertexId::Reactant(index)),
            "v" => Ok(VertexId::Product(index)),
            _ => Err(format!("invalid vertex id {s:?} (expected u<i> or v<i>)")),
        }
    }
}

/// A hyperedge: the species edge `E_s` or the reaction edge `E_i`.
///
/// The derived order (species edges in species order, then reaction edges in
/// reaction order) is the canonical column order of incidence matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeId {
    Species(SpeciesId),
    Reaction(usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("operation requires a 0,1-network")]
    NotZeroOne,
}

/// The network hypergraph of a reaction network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkHypergraph {
    vertices: Vec<VertexId>,
    /// Indexed by species id; `E_s` covers `u_i`/`v_i` when `s` is in the
    /// support of the matching side.
    species_edges: Vec<BTreeSet<VertexId>>,
    /// Indexed by reaction (0-based storage); empty iff the product is empty.
    reaction_edges: Vec<BTreeSet<VertexId>>,
    species_names: Vec<String>,
    /// Complex label for each vertex, e.g. `u1 = 2A`.
    vertex_labels: BTreeMap<VertexId, String>,
}

/// Constructs the network hypergraph with deterministic vertex and edge order.
pub fn build_hypergraph(n: &Network) -> NetworkHypergraph {
    let mut vertices = Vec::new();
    let mut vertex_labels = BTreeMap::new();
    for r in n.reactions() {
        let u = VertexId::Reactant(r.index);
        let v = VertexId::Product(r.index);
        vertices.push(u);
        vertices.push(v);
        vertex_labels.insert(u, n.render_complex(&r.reactant));
        vertex_labels.insert(v, n.render_complex(&r.product));
    }
    let mut species_edges = vec![BTreeSet::new(); n.species().len()];
    let mut reaction_edges = vec![BTreeSet::new(); n.reactions().len()];
    for r in n.reactions() {
        for s in r.reactant.support() {
            species_edges[s].insert(VertexId::Reactant(r.index));
        }
        for s in r.product.support() {
            species_edges[s].insert(VertexId::Product(r.index));
        }
        if !r.product.is_empty() {
            reaction_edges[r.index - 1].insert(VertexId::Reactant(r.index));
            reaction_edges[r.index - 1].insert(VertexId::Product(r.index));
        }
    }
    NetworkHypergraph {
        vertices,
        species_edges,
        reaction_edges,
        species_names: n.species().iter().map(|s| s.name.clone()).collect(),
        vertex_labels,
    }
}

impl NetworkHypergraph {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        let i = v.reaction();
        i >= 1 && i <= self.reaction_edges.len()
    }

    pub fn vertex_label(&self, v: VertexId) -> Option<&str> {
        self.vertex_labels.get(&v).map(String::as_str)
    }

    pub fn num_species(&self) -> usize {
        self.species_edges.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reaction_edges.len()
    }

    /// All edges in canonical order, including empty reaction edges.
    pub fn edges(&self) -> Vec<EdgeId> {
        let species = (0..self.species_edges.len()).map(EdgeId::Species);
        let reactions = (1..=self.reaction_edges.len()).map(EdgeId::Reaction);
        species.chain(reactions).collect()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        match e {
            EdgeId::Species(s) => s < self.species_edges.len(),
            EdgeId::Reaction(i) => i >= 1 && i <= self.reaction_edges.len(),
        }
    }

    pub fn edge_members(&self, e: EdgeId) -> Option<&BTreeSet<VertexId>> {
        match e {
            EdgeId::Species(s) => self.species_edges.get(s),
            EdgeId::Reaction(i) => self.reaction_edges.get(i.checked_sub(1)?),
        }
    }

    pub fn edge_covers(&self, e: EdgeId, v: VertexId) -> bool {
        self.edge_members(e).is_some_and(|m| m.contains(&v))
    }

    /// Canonical edge name: `E_<species>` or `E_r<i>`.
    pub fn edge_name(&self, e: EdgeId) -> String {
        match e {
            EdgeId::Species(s) => format!("E_{}", self.species_names[s]),
            EdgeId::Reaction(i) => format!("E_r{i}"),
        }
    }

    /// Parses `E_<species>` / `E_r<i>` back into an edge id.
    pub fn parse_edge(&self, name: &str) -> Result<EdgeId, HypergraphError> {
        let unknown = || HypergraphError::UnknownEdge(name.to_string());
        let rest = name.strip_prefix("E_").ok_or_else(unknown)?;
        if let Some(digits) = rest.strip_prefix('r') {
            if let Ok(i) = digits.parse::<usize>() {
                let e = EdgeId::Reaction(i);
                if self.contains_edge(e) {
                    return Ok(e);
                }
                return Err(unknown());
            }
        }
        let s = self
            .species_names
            .iter()
            .position(|n| n == rest)
            .ok_or_else(unknown)?;
        Ok(EdgeId::Species(s))
    }

    pub fn to_json(&self) -> String {
        let vertices: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("{v} = {}", self.vertex_labels[v]))
            .collect();
        let species_edges: BTreeMap<String, Vec<String>> = (0..self.species_edges.len())
            .map(|s| {
                (
                    self.edge_name(EdgeId::Species(s)),
                    self.species_edges[s].iter().map(|v| v.to_string()).collect(),
                )
            })
            .collect();
        let reaction_edges: BTreeMap<String, Vec<String>> = (1..=self.reaction_edges.len())
            .map(|i| {
                (
                    self.edge_name(EdgeId::Reaction(i)),
                    self.reaction_edges[i - 1]
                        .iter()
                        .map(|v| v.to_string())
                        .collect(),
                )
            })
            .collect();
        serde_json::to_string_pretty(&json!({
            "vertices": vertices,
            "species_edges": species_edges,
            "reaction_edges": reaction_edges,
        }))
        .expect("hypergraph serialization cannot fail")
    }

    /// DOT rendering: species hyperedges become colored star nodes joined to
    /// their member vertices, reaction edges plain segments.
    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 8] = [
            "gold", "skyblue", "palegreen", "salmon", "orchid", "orange", "turquoise", "khaki",
        ];
        let mut out = String::from("graph hypergraph {\n  node [fontname=\"Helvetica\"];\n");
        for v in &self.vertices {
            out.push_str(&format!(
                "  \"{v}\" [shape=point, xlabel=\"{v} = {}\"];\n",
                self.vertex_labels[v]
            ));
        }
        for (s, members) in self.species_edges.iter().enumerate() {
            let name = self.edge_name(EdgeId::Species(s));
            let color = PALETTE[s % PALETTE.len()];
            out.push_str(&format!(
                "  \"{name}\" [shape=ellipse, style=filled, fillcolor={color}];\n"
            ));
            for v in members {
                out.push_str(&format!("  \"{name}\" -- \"{v}\" [color={color}];\n"));
            }
        }
        for (idx, members) in self.reaction_edges.iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let i = idx + 1;
            out.push_str(&format!(
                "  \"u{i}\" -- \"v{i}\" [label=\"E_r{i}\"];\n"
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// 0/1 incidence matrix over the non-forbidden, nonempty edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub rows: Vec<VertexId>,
    pub cols: Vec<EdgeId>,
    /// Row-major entries; `data[r][c] = 1` iff vertex `r` lies on edge `c`.
    pub data: Vec<Vec<u8>>,
}

impl IncidenceMatrix {
    pub fn row_of(&self, v: VertexId) -> Option<usize> {
        self.rows.iter().position(|&r| r == v)
    }
}

/// Builds the incidence matrix of `h`, dropping forbidden edges and empty
/// reaction edges (zero columns never matter for balance detection).
pub fn incidence_matrix(
    h: &NetworkHypergraph,
    forbidden: &BTreeSet<EdgeId>,
) -> Result<IncidenceMatrix, HypergraphError> {
    for e in forbidden {
        if !h.contains_edge(*e) {
            return Err(HypergraphError::UnknownEdge(format!("{e:?}")));
        }
    }
    let rows = h.vertices().to_vec();
    let cols: Vec<EdgeId> = h
        .edges()
        .into_iter()
        .filter(|e| !forbidden.contains(e))
        .filter(|e| h.edge_members(*e).is_some_and(|m| !m.is_empty()))
        .collect();
    let data = rows
        .iter()
        .map(|&v| {
            cols.iter()
                .map(|&e| u8::from(h.edge_covers(e, v)))
                .collect()
        })
        .collect();
    Ok(IncidenceMatrix { rows, cols, data })
}

/// The species-edge form of the steady-state polynomial for a 0,1-network:
/// `sum_{v_i in E_s} kappa_i x^{y_i} - sum_{u_i in E_s} kappa_i x^{y_i}`.
pub fn species_edge_polynomial(
    n: &Network,
    h: &NetworkHypergraph,
    s: SpeciesId,
) -> Result<RatePolynomial, HypergraphError> {
    if !n.is_zero_one() {
        return Err(HypergraphError::NotZeroOne);
    }
    let members = h
        .edge_members(EdgeId::Species(s))
        .ok_or_else(|| HypergraphError::UnknownEdge(format!("species {s}")))?;
    let mut poly = RatePolynomial::zero();
    for v in members {
        let r = n
            .reaction(v.reaction())
            .expect("hypergraph vertex references a reaction of its network");
        let sign = if v.is_reactant() { -1 } else { 1 };
        poly.add_term(r.index, r.reactant.clone(), sign);
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_network;

    fn branched_reversible() -> Network {
        parse_network("A -> B, k1\nB -> A, k2\nA -> C, k3").unwrap()
    }

    fn members(h: &NetworkHypergraph, e: EdgeId) -> Vec<String> {
        h.edge_members(e)
            .unwrap()
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    #[test]
    fn branched_reversible_edges() {
        let n = branched_reversible();
        let h = build_hypergraph(&n);
        assert_eq!(members(&h, EdgeId::Species(0)), ["u1", "v2", "u3"]);
        assert_eq!(members(&h, EdgeId::Species(1)), ["v1", "u2"]);
        assert_eq!(members(&h, EdgeId::Species(2)), ["v3"]);
        assert_eq!(members(&h, EdgeId::Reaction(1)), ["u1", "v1"]);
        assert_eq!(members(&h, EdgeId::Reaction(2)), ["u2", "v2"]);
        assert_eq!(members(&h, EdgeId::Reaction(3)), ["u3", "v3"]);
    }

    #[test]
    fn degradation_reaction_edge_is_empty() {
        let n = parse_network("A -> 0, k1").unwrap();
        let h = build_hypergraph(&n);
        assert_eq!(h.vertices().len(), 2);
        assert_eq!(members(&h, EdgeId::Species(0)), ["u1"]);
        assert!(h.edge_members(EdgeId::Reaction(1)).unwrap().is_empty());
        // The isolated product vertex is retained.
        assert!(h.vertices().contains(&VertexId::Product(1)));
    }

    #[test]
    fn pairwise_assembly_species_edges() {
        let n = parse_network("A + B -> D, k1\nA + C -> D, k2\nB + C -> D, k3").unwrap();
        let h = build_hypergraph(&n);
        assert_eq!(members(&h, EdgeId::Species(0)), ["u1", "u2"]);
        assert_eq!(members(&h, EdgeId::Species(1)), ["u1", "u3"]);
        assert_eq!(members(&h, EdgeId::Species(3)), ["u2", "u3"]);
        assert_eq!(members(&h, EdgeId::Species(2)), ["v1", "v2", "v3"]);
    }

    #[test]
    fn incidence_matrix_shape_and_columns() {
        let n = branched_reversible();
        let h = build_hypergraph(&n);
        let m = incidence_matrix(&h, &BTreeSet::new()).unwrap();
        assert_eq!(m.rows.len(), 6);
        assert_eq!(m.cols.len(), 6);
        // Column E_A has ones exactly at u1, v2, u3.
        let col = m.cols.iter().position(|&e| e == EdgeId::Species(0)).unwrap();
        let ones: Vec<String> = m
            .rows
            .iter()
            .enumerate()
            .filter(|&(r, _)| m.data[r][col] == 1)
            .map(|(_, v)| v.to_string())
            .collect();
        assert_eq!(ones, ["u1", "v2", "u3"]);

        let forbidden: BTreeSet<EdgeId> = [EdgeId::Species(1)].into();
        let m2 = incidence_matrix(&h, &forbidden).unwrap();
        assert_eq!(m2.cols.len(), 5);
    }

    #[test]
    fn incidence_matrix_drops_empty_edges() {
        let n = parse_network("A -> 0, k1").unwrap();
        let h = build_hypergraph(&n);
        let m = incidence_matrix(&h, &BTreeSet::new()).unwrap();
        assert_eq!(m.rows.len(), 2);
        assert_eq!(m.cols, vec![EdgeId::Species(0)]);
        // The degradation product vertex has an all-zero row.
        let row = m.row_of(VertexId::Product(1)).unwrap();
        assert!(m.data[row].iter().all(|&x| x == 0));
    }

    #[test]
    fn reaction_edge_column_is_sum_of_endpoint_rows() {
        let n = branched_reversible();
        let h = build_hypergraph(&n);
        let m = incidence_matrix(&h, &BTreeSet::new()).unwrap();
        for i in 1..=3 {
            let col = m
                .cols
                .iter()
                .position(|&e| e == EdgeId::Reaction(i))
                .unwrap();
            for (r, &v) in m.rows.iter().enumerate() {
                let expected = u8::from(v == VertexId::Reactant(i) || v == VertexId::Product(i));
                assert_eq!(m.data[r][col], expected);
            }
        }
    }

    #[test]
    fn unknown_forbidden_edge_errors() {
        let n = branched_reversible();
        let h = build_hypergraph(&n);
        let forbidden: BTreeSet<EdgeId> = [EdgeId::Reaction(9)].into();
        assert!(matches!(
            incidence_matrix(&h, &forbidden),
            Err(HypergraphError::UnknownEdge(_))
        ));
    }

    #[test]
    fn species_edge_polynomial_on_reversible_branch() {
        let n = branched_reversible();
        let h = build_hypergraph(&n);
        let p = species_edge_polynomial(&n, &h, 0).unwrap();
        assert_eq!(p.render(&n), "-k1*x_A + k2*x_B - k3*x_A");
    }

    #[test]
    fn species_edge_polynomial_product_only_species() {
        let n = parse_network("A + B -> D, k1\nA + C -> D, k2\nB + C -> D, k3").unwrap();
        let h = build_hypergraph(&n);
        let d = n.species_index("D").unwrap();
        let p = species_edge_polynomial(&n, &h, d).unwrap();
        assert_eq!(p.render(&n), "k1*x_A*x_B + k2*x_A*x_C + k3*x_B*x_C");
    }

    #[test]
    fn species_edge_polynomial_rejects_non_zero_one() {
        let n = parse_network("2A -> A + B, k1").unwrap();
        let h = build_hypergraph(&n);
        assert_eq!(
            species_edge_polynomial(&n, &h, 0),
            Err(HypergraphError::NotZeroOne)
        );
    }

    #[test]
    fn edge_names_round_trip() {
        let n = branched_reversible();
        let h = build_hypergraph(&n);
        for e in h.edges() {
            assert_eq!(h.parse_edge(&h.edge_name(e)).unwrap(), e);
        }
        assert!(h.parse_edge("E_Z").is_err());
        assert!(h.parse_edge("u1").is_err());
    }
}
