//! Almost-balanced vertex detection, certificates, and structural
//! obstructions.
//!
//! A vertex `v` is almost balanced when some 2-colored edge multiset gives
//! `v` a positive red-minus-blue degree excess while every other vertex is
//! exactly balanced. Writing signed multiplicities `z` (positive = red,
//! negative = blue), that is `A z = k e_v` with `k > 0` over the incidence
//! matrix `A`. Since multiplicities are unbounded, detection is exactly
//! rational feasibility of `A z = e_v`: any rational solution scales to an
//! integer one and back.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::json;
use thiserror::Error;

use crate::hypergraph::{
    build_hypergraph, incidence_matrix, EdgeId, HypergraphError, NetworkHypergraph, VertexId,
};
use crate::linalg::solve_exact;
use crate::massaction::{minimal_reactants, steady_state_system, RatePolynomial};
use crate::network::{Complex, Network};

/// A 2-colored edge multiset witnessing that `vertex` is almost balanced
/// with excess `k`. Red and blue supports are disjoint (reduced form).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceCertificate {
    pub vertex: VertexId,
    pub red: BTreeMap<EdgeId, u64>,
    pub blue: BTreeMap<EdgeId, u64>,
    pub k: u64,
}

impl BalanceCertificate {
    pub fn degree(&self, h: &NetworkHypergraph, v: VertexId, red: bool) -> u64 {
        let side = if red { &self.red } else { &self.blue };
        side.iter()
            .filter(|(e, _)| h.edge_covers(**e, v))
            .map(|(_, &m)| m)
            .sum()
    }

    /// Edges used by the certificate, regardless of color.
    pub fn support(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.red.keys().chain(self.blue.keys()).copied()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BalanceError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("operation requires a 0,1-network")]
    NotZeroOne,
    #[error("certificate colors edge {0} both red and blue")]
    OverlappingColors(String),
    #[error("degree condition violated at vertex {0}")]
    DegreeCondition(String),
    #[error("residual is not a single rate-monomial term: got {0}")]
    ResidualNotSingleTerm(String),
    #[error("brute-force search exceeded the node cap of {0}")]
    SearchCapExceeded(u64),
    #[error("certificate multiplicities do not fit in 64 bits")]
    MultiplicityOverflow,
}

/// Decides almost-balancedness of `v` using only non-forbidden edges, by
/// exact rational feasibility of `A z = e_v` over the incidence matrix.
///
/// The rational solution (free variables zero, deterministic pivoting) is
/// scaled to integers and reduced by the common gcd; positive entries become
/// red multiplicities, negative ones blue.
pub fn find_certificate(
    h: &NetworkHypergraph,
    v: VertexId,
    forbidden: &BTreeSet<EdgeId>,
) -> Result<Option<BalanceCertificate>, BalanceError> {
    if !h.contains_vertex(v) {
        return Err(BalanceError::UnknownVertex(v.to_string()));
    }
    let m = incidence_matrix(h, forbidden)?;
    let row = m.row_of(v).expect("vertex checked above");

    let a: Vec<Vec<BigRational>> = m
        .data
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut b = vec![BigRational::zero(); m.rows.len()];
    b[row] = BigRational::from_integer(1.into());

    let Some(z) = solve_exact(&a, &b) else {
        return Ok(None);
    };

    // Clear denominators: A (L z) = L e_v, so the excess is L.
    let mut scale = BigInt::from(1);
    for q in &z {
        scale = scale.lcm(q.denom());
    }
    let mut entries: Vec<BigInt> = z
        .iter()
        .map(|q| (q * BigRational::from_integer(scale.clone())).to_integer())
        .collect();
    let mut k = scale;

    let mut g = k.clone();
    for e in &entries {
        g = g.gcd(e);
    }
    if !g.is_zero() {
        for e in &mut entries {
            *e /= &g;
        }
        k /= &g;
    }

    let to_u64 = |x: &BigInt| -> Result<u64, BalanceError> {
        u64::try_from(x.abs()).map_err(|_| BalanceError::MultiplicityOverflow)
    };
    let mut red = BTreeMap::new();
    let mut blue = BTreeMap::new();
    for (col, value) in entries.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        let mult = to_u64(value)?;
        if value.is_positive() {
            red.insert(m.cols[col], mult);
        } else {
            blue.insert(m.cols[col], mult);
        }
    }
    Ok(Some(BalanceCertificate {
        vertex: v,
        red,
        blue,
        k: to_u64(&k)?,
    }))
}

/// The verified content of a certificate: the single surviving term
/// `k * kappa_j * x^{y_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateCheck {
    pub k: u64,
    pub reaction: usize,
    pub rate_label: String,
    pub monomial: Complex,
}

/// Verifies a certificate symbolically against the mass-action system.
///
/// For a reactant vertex `u_j` the weighted sum
/// `sum_blue m_s dx_s - sum_red m_s dx_s` must collapse to exactly
/// `k * kappa_j * x^{y_j}`; for a product vertex the colors swap sides.
/// Only species edges carry polynomials; reaction-edge multiplicities affect
/// the degree conditions alone.
pub fn verify_certificate(
    n: &Network,
    cert: &BalanceCertificate,
) -> Result<CertificateCheck, BalanceError> {
    if !n.is_zero_one() {
        return Err(BalanceError::NotZeroOne);
    }
    let h = build_hypergraph(n);
    if !h.contains_vertex(cert.vertex) {
        return Err(BalanceError::UnknownVertex(cert.vertex.to_string()));
    }
    for e in cert.support() {
        if !h.contains_edge(e) {
            return Err(BalanceError::Hypergraph(HypergraphError::UnknownEdge(
                format!("{e:?}"),
            )));
        }
    }
    for e in cert.red.keys() {
        if cert.blue.contains_key(e) {
            return Err(BalanceError::OverlappingColors(h.edge_name(*e)));
        }
    }

    // Degree conditions of the definition.
    if cert.k == 0 {
        return Err(BalanceError::DegreeCondition(cert.vertex.to_string()));
    }
    for &w in h.vertices() {
        let excess = i128::from(cert.degree(&h, w, true)) - i128::from(cert.degree(&h, w, false));
        let expected = if w == cert.vertex {
            i128::from(cert.k)
        } else {
            0
        };
        if excess != expected {
            return Err(BalanceError::DegreeCondition(w.to_string()));
        }
    }

    // Weighted species-edge sum, sign depending on the vertex side.
    let sys = steady_state_system(n);
    let mut result = RatePolynomial::zero();
    let signed = |red_side: bool| -> i64 {
        let reactant_target = cert.vertex.is_reactant();
        match (reactant_target, red_side) {
            (true, true) | (false, false) => -1,
            (true, false) | (false, true) => 1,
        }
    };
    for (side, red_side) in [(&cert.red, true), (&cert.blue, false)] {
        for (e, &mult) in side {
            if let EdgeId::Species(s) = e {
                let mult = i64::try_from(mult).map_err(|_| BalanceError::MultiplicityOverflow)?;
                result = result.add(&sys.polynomial_for(*s).scale(signed(red_side) * mult));
            }
        }
    }

    let j = cert.vertex.reaction();
    let reaction = n.reaction(j).expect("vertex checked above");
    let mut terms = result.terms();
    let single = terms.next();
    let extra = terms.next();
    let expected_coeff = i64::try_from(cert.k).map_err(|_| BalanceError::MultiplicityOverflow)?;
    match (single, extra) {
        (Some((i, mono, coeff)), None)
            if i == j && *mono == reaction.reactant && coeff == expected_coeff =>
        {
            Ok(CertificateCheck {
                k: cert.k,
                reaction: j,
                rate_label: reaction.rate_label.clone(),
                monomial: reaction.reactant.clone(),
            })
        }
        _ => Err(BalanceError::ResidualNotSingleTerm(result.render(n))),
    }
}

/// Default node cap for the exhaustive search.
pub const BRUTE_FORCE_DEFAULT_CAP: u64 = 50_000_000;

/// Independent oracle for almost-balancedness: exhaustively searches signed
/// multiplicity vectors `z` with entries in `[-bound, bound]` for
/// `A z = k e_v`, `k > 0`.
///
/// Vectors are visited in order of increasing total multiplicity, ties in
/// lexicographic edge order, so the first hit is the smallest witness.
pub fn brute_force_certificate(
    h: &NetworkHypergraph,
    v: VertexId,
    bound: u32,
) -> Result<Option<BalanceCertificate>, BalanceError> {
    brute_force_certificate_capped(h, v, bound, BRUTE_FORCE_DEFAULT_CAP)
}

/// [`brute_force_certificate`] with an explicit search-node cap.
pub fn brute_force_certificate_capped(
    h: &NetworkHypergraph,
    v: VertexId,
    bound: u32,
    cap: u64,
) -> Result<Option<BalanceCertificate>, BalanceError> {
    assert!(bound >= 1, "bound must be positive");
    if !h.contains_vertex(v) {
        return Err(BalanceError::UnknownVertex(v.to_string()));
    }
    let m = incidence_matrix(h, &BTreeSet::new())?;
    let target_row = m.row_of(v).expect("vertex checked above");
    let ncols = m.cols.len();
    let bound = i64::from(bound);

    // A vertex covered by no edge can never accumulate a positive excess.
    if m.data[target_row].iter().all(|&x| x == 0) {
        return Ok(None);
    }

    // Rows become fully determined once their last covering column is
    // assigned; checking them there prunes dead branches early.
    let mut finalized_at: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (r, row) in m.data.iter().enumerate() {
        if let Some(last) = (0..ncols).rev().find(|&c| row[c] == 1) {
            finalized_at[last].push(r);
        }
    }

    struct Search<'a> {
        data: &'a [Vec<u8>],
        cols: &'a [EdgeId],
        finalized_at: &'a [Vec<usize>],
        target_row: usize,
        bound: i64,
        visited: u64,
        cap: u64,
        z: Vec<i64>,
    }

    impl Search<'_> {
        fn solution_k(&self, sums: &[i64]) -> Option<i64> {
            let k = sums[self.target_row];
            if k <= 0 {
                return None;
            }
            for (r, &s) in sums.iter().enumerate() {
                if r != self.target_row && s != 0 {
                    return None;
                }
            }
            Some(k)
        }

        /// Depth-first over coordinates; `remaining` is the multiplicity
        /// still to distribute to reach the target norm.
        fn dfs(
            &mut self,
            col: usize,
            remaining: i64,
            sums: &mut Vec<i64>,
        ) -> Result<Option<i64>, BalanceError> {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(BalanceError::SearchCapExceeded(self.cap));
            }
            if col == self.cols.len() {
                if remaining == 0 {
                    return Ok(self.solution_k(sums));
                }
                return Ok(None);
            }
            let slots_left = (self.cols.len() - col - 1) as i64;
            'values: for value in -self.bound..=self.bound {
                let used = value.abs();
                if used > remaining || remaining - used > slots_left * self.bound {
                    continue;
                }
                if value != 0 {
                    for (r, row) in self.data.iter().enumerate() {
                        sums[r] += value * i64::from(row[col]);
                    }
                }
                for &r in &self.finalized_at[col] {
                    let ok = if r == self.target_row {
                        sums[r] > 0
                    } else {
                        sums[r] == 0
                    };
                    if !ok {
                        if value != 0 {
                            for (r, row) in self.data.iter().enumerate() {
                                sums[r] -= value * i64::from(row[col]);
                            }
                        }
                        continue 'values;
                    }
                }
                self.z[col] = value;
                let hit = self.dfs(col + 1, remaining - used, sums)?;
                if hit.is_some() {
                    return Ok(hit);
                }
                if value != 0 {
                    for (r, row) in self.data.iter().enumerate() {
                        sums[r] -= value * i64::from(row[col]);
                    }
                }
                self.z[col] = 0;
            }
            Ok(None)
        }
    }

    let mut search = Search {
        data: &m.data,
        cols: &m.cols,
        finalized_at: &finalized_at,
        target_row,
        bound,
        visited: 0,
        cap,
        z: vec![0; ncols],
    };
    let max_norm = bound * ncols as i64;
    for norm in 1..=max_norm {
        let mut sums = vec![0i64; m.rows.len()];
        if let Some(k) = search.dfs(0, norm, &mut sums)? {
            let mut red = BTreeMap::new();
            let mut blue = BTreeMap::new();
            for (col, &value) in search.z.iter().enumerate() {
                if value > 0 {
                    red.insert(m.cols[col], value as u64);
                } else if value < 0 {
                    blue.insert(m.cols[col], value.unsigned_abs());
                }
            }
            return Ok(Some(BalanceCertificate {
                vertex: v,
                red,
                blue,
                k: k as u64,
            }));
        }
    }
    Ok(None)
}

/// A structural reason why a vertex cannot be almost balanced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// The vertex's reaction has its reverse in the network.
    ReversiblePair { reaction: usize, reverse: usize },
    /// The vertex's reaction lies on a directed cycle of at least three
    /// distinct complexes; the witness lists the cycle in order.
    ReactionCycle { complexes: Vec<Complex> },
    /// Every reaction of the network stays inside a strongly connected
    /// component of the complex digraph.
    WeaklyReversible,
}

fn complex_digraph(n: &Network) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let node_of = |c: &Complex| -> usize {
        n.complexes()
            .iter()
            .position(|x| x == c)
            .expect("reaction complexes appear in the complex list")
    };
    let arcs: Vec<(usize, usize)> = n
        .reactions()
        .iter()
        .map(|r| (node_of(&r.reactant), node_of(&r.product)))
        .collect();
    let mut adj = vec![Vec::new(); n.complexes().len()];
    for &(a, b) in &arcs {
        adj[a].push(b);
    }
    (arcs, adj)
}

/// Shortest path `from -> ... -> to` of length >= 2, if any (the direct arc
/// is excluded). Returns the intermediate node sequence including endpoints.
fn path_avoiding_direct_arc(adj: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev: Vec<Option<usize>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(node) = queue.pop_front() {
        for &next in &adj[node] {
            if node == from && next == to {
                continue; // skip the direct arc; length-2 cycles are reversible pairs
            }
            if !seen[next] {
                seen[next] = true;
                prev[next] = Some(node);
                if next == to {
                    let mut path = vec![to];
                    let mut at = to;
                    while let Some(p) = prev[at] {
                        path.push(p);
                        at = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(next);
            }
        }
    }
    None
}

fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    // Iterative post-order.
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < adj[node].len() {
                let child = adj[node][*next];
                *next += 1;
                if !seen[child] {
                    seen[child] = true;
                    stack.push((child, 0));
                }
            } else {
                order.push(node);
                stack.pop();
            }
        }
    }
    let mut radj = vec![Vec::new(); n];
    for (a, outs) in adj.iter().enumerate() {
        for &b in outs {
            radj[b].push(a);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut current = 0;
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = current;
        while let Some(node) = stack.pop() {
            for &p in &radj[node] {
                if comp[p] == usize::MAX {
                    comp[p] = current;
                    stack.push(p);
                }
            }
        }
        current += 1;
    }
    comp
}

/// True when every reaction starts and ends in the same strongly connected
/// component of the complex digraph.
pub fn is_weakly_reversible(n: &Network) -> bool {
    let (arcs, adj) = complex_digraph(n);
    let comp = strongly_connected_components(&adj);
    arcs.iter().all(|&(a, b)| comp[a] == comp[b])
}

/// Lists every structural reason the vertex cannot be almost balanced:
/// reversible pair membership, a reaction cycle through the vertex's
/// reaction, and global weak reversibility.
pub fn structural_obstructions(
    n: &Network,
    v: VertexId,
) -> Result<Vec<Obstruction>, BalanceError> {
    let i = v.reaction();
    let Some(reaction) = n.reaction(i) else {
        return Err(BalanceError::UnknownVertex(v.to_string()));
    };
    let mut out = Vec::new();

    if let Some(rev) = n.reactions().iter().find(|r| {
        r.index != i && r.reactant == reaction.product && r.product == reaction.reactant
    }) {
        out.push(Obstruction::ReversiblePair {
            reaction: i,
            reverse: rev.index,
        });
    }

    let (arcs, adj) = complex_digraph(n);
    let (from, to) = arcs[i - 1];
    if let Some(path) = path_avoiding_direct_arc(&adj, to, from) {
        // path = product .. reactant; rotate so the cycle starts at the reactant.
        let mut complexes = vec![n.complexes()[from].clone()];
        complexes.extend(
            path[..path.len() - 1]
                .iter()
                .map(|&node| n.complexes()[node].clone()),
        );
        out.push(Obstruction::ReactionCycle { complexes });
    }

    if is_weakly_reversible(n) {
        out.push(Obstruction::WeaklyReversible);
    }
    Ok(out)
}

/// Applies the minimal-reactant criterion: when every minimal reactant has an
/// almost-balanced reactant or product vertex, the steady-state ideal equals
/// the monomial ideal generated by the minimal reactants, and one certificate
/// per minimal reactant is returned. `None` is inconclusive, not a proof of
/// non-monomiality.
pub fn monomial_ideal_certificate(
    n: &Network,
) -> Result<Option<Vec<(Complex, BalanceCertificate)>>, BalanceError> {
    if !n.is_zero_one() {
        return Err(BalanceError::NotZeroOne);
    }
    let h = build_hypergraph(n);
    let none: BTreeSet<EdgeId> = BTreeSet::new();
    let mut out = Vec::new();
    'reactants: for y in minimal_reactants(n) {
        for r in n.reactions().iter().filter(|r| r.reactant == y) {
            for v in [VertexId::Reactant(r.index), VertexId::Product(r.index)] {
                if let Some(cert) = find_certificate(&h, v, &none)? {
                    out.push((y.clone(), cert));
                    continue 'reactants;
                }
            }
        }
        return Ok(None);
    }
    Ok(Some(out))
}

/// Renders a verified certificate as JSON, including the certified monomial
/// and rate label.
pub fn certificate_json(
    n: &Network,
    h: &NetworkHypergraph,
    cert: &BalanceCertificate,
) -> Result<serde_json::Value, BalanceError> {
    let check = verify_certificate(n, cert)?;
    let color = |side: &BTreeMap<EdgeId, u64>| -> BTreeMap<String, u64> {
        side.iter().map(|(e, &m)| (h.edge_name(*e), m)).collect()
    };
    Ok(json!({
        "vertex": cert.vertex.to_string(),
        "red": color(&cert.red),
        "blue": color(&cert.blue),
        "k": cert.k,
        "monomial": n.render_monomial(&check.monomial),
        "rate": check.rate_label,
    }))
}
