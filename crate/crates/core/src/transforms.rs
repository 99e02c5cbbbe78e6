//! The three ideal-preserving network rewrites, with full precondition
//! checking and auditable transcripts.
//!
//! Each operation requires an almost-balanced vertex whose certificate avoids
//! a named edge of the *input* hypergraph; the certificate is recorded in the
//! transcript so the rewrite can be audited after the fact.

use std::collections::BTreeSet;

use serde_json::json;
use thiserror::Error;

use crate::balance::{find_certificate, BalanceCertificate, BalanceError};
use crate::hypergraph::{build_hypergraph, EdgeId, NetworkHypergraph, VertexId};
use crate::network::{Network, Reaction, SpeciesId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    AddSpeciesToProduct,
    AddSpeciesToReactant,
    AddDegradation,
}

impl TransformKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TransformKind::AddSpeciesToProduct => "add_product_species",
            TransformKind::AddSpeciesToReactant => "add_reactant_species",
            TransformKind::AddDegradation => "add_degradation",
        }
    }
}

/// Audit record of one applied rewrite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub op: TransformKind,
    pub reaction: usize,
    pub species: Option<String>,
    /// The auxiliary reaction whose reactant divides the rewritten one.
    pub via_reaction: Option<usize>,
    pub certificate: BalanceCertificate,
    pub new_rate: String,
}

impl Transcript {
    pub fn to_json(&self, h: &NetworkHypergraph) -> serde_json::Value {
        let color = |side: &std::collections::BTreeMap<EdgeId, u64>| {
            side.iter()
                .map(|(e, &m)| (h.edge_name(*e), m))
                .collect::<std::collections::BTreeMap<String, u64>>()
        };
        json!({
            "op": self.op.as_str(),
            "reaction": self.reaction,
            "species": self.species,
            "via_reaction": self.via_reaction,
            "certificate": {
                "vertex": self.certificate.vertex.to_string(),
                "red": color(&self.certificate.red),
                "blue": color(&self.certificate.blue),
                "k": self.certificate.k,
            },
            "new_rate": self.new_rate,
        })
    }
}

/// A rewritten network together with its transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformResult {
    pub network: Network,
    pub transcript: Transcript,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("operation requires a 0,1-network")]
    NotZeroOne,
    #[error("unknown reaction {0}")]
    UnknownReaction(usize),
    #[error("unknown species {0:?}")]
    UnknownSpecies(String),
    #[error("species {species:?} already in the product of reaction {reaction}")]
    SpeciesAlreadyInProduct { reaction: usize, species: String },
    #[error("species {species:?} already in the reactant of reaction {reaction}")]
    SpeciesAlreadyInReactant { reaction: usize, species: String },
    #[error("auxiliary reaction must differ from the rewritten reaction")]
    SameReaction,
    #[error("reactant of reaction {via} does not divide the reactant of reaction {target}")]
    NotDivisible { via: usize, target: usize },
    #[error("vertex {0} is not almost balanced")]
    NotAlmostBalanced(String),
    #[error("vertex {vertex} has no certificate avoiding edge {edge}")]
    NoCertificateAvoidingEdge { vertex: String, edge: String },
    #[error("degradation of that reactant is already present (reaction {0})")]
    DuplicateDegradation(usize),
    #[error("rewriting reaction {0} would create a self-loop")]
    CreatesSelfLoop(usize),
    #[error(transparent)]
    Balance(#[from] BalanceError),
}

/// Finds a certificate for `v` avoiding `edge`, distinguishing "not almost
/// balanced at all" from "no certificate avoiding the named edge".
fn certificate_avoiding(
    h: &NetworkHypergraph,
    v: VertexId,
    edge: EdgeId,
) -> Result<BalanceCertificate, TransformError> {
    let forbidden: BTreeSet<EdgeId> = [edge].into();
    if let Some(cert) = find_certificate(h, v, &forbidden)? {
        return Ok(cert);
    }
    if find_certificate(h, v, &BTreeSet::new())?.is_none() {
        Err(TransformError::NotAlmostBalanced(v.to_string()))
    } else {
        Err(TransformError::NoCertificateAvoidingEdge {
            vertex: v.to_string(),
            edge: h.edge_name(edge),
        })
    }
}

fn check_species(n: &Network, s: SpeciesId) -> Result<(), TransformError> {
    if s < n.species().len() {
        Ok(())
    } else {
        Err(TransformError::UnknownSpecies(format!("#{s}")))
    }
}

fn fresh_suffixed_label(n: &Network, base: &str) -> String {
    let mut label = format!("{base}_p");
    while n.reactions().iter().any(|r| r.rate_label == label) {
        label.push_str("_p");
    }
    label
}

fn fresh_numbered_label(n: &Network) -> String {
    let mut m = n.reactions().len() + 1;
    loop {
        let label = format!("k{m}");
        if !n.reactions().iter().any(|r| r.rate_label == label) {
            return label;
        }
        m += 1;
    }
}

fn rebuild(n: &Network, reactions: Vec<Reaction>) -> Network {
    Network::from_reactions(
        n.species().iter().map(|s| s.name.clone()).collect(),
        reactions,
    )
}

/// Replaces `y_i -> y_i'` by `y_i -> y_i' + s` under a fresh rate label.
///
/// Requires a 0,1-network, `s` outside the product support, and a certificate
/// for the reactant vertex `u_i` avoiding `E_s`.
pub fn add_species_to_product(
    n: &Network,
    i: usize,
    s: SpeciesId,
) -> Result<TransformResult, TransformError> {
    if !n.is_zero_one() {
        return Err(TransformError::NotZeroOne);
    }
    let reaction = n.reaction(i).ok_or(TransformError::UnknownReaction(i))?;
    check_species(n, s)?;
    if reaction.product.contains(s) {
        return Err(TransformError::SpeciesAlreadyInProduct {
            reaction: i,
            species: n.species_name(s).to_string(),
        });
    }
    if reaction.product.plus_species(s) == reaction.reactant {
        return Err(TransformError::CreatesSelfLoop(i));
    }
    let h = build_hypergraph(n);
    let cert = certificate_avoiding(&h, VertexId::Reactant(i), EdgeId::Species(s))?;

    let new_rate = fresh_suffixed_label(n, &reaction.rate_label);
    let reactions = n
        .reactions()
        .iter()
        .map(|r| {
            if r.index == i {
                Reaction {
                    index: r.index,
                    reactant: r.reactant.clone(),
                    product: r.product.plus_species(s),
                    rate_label: new_rate.clone(),
                }
            } else {
                r.clone()
            }
        })
        .collect();
    Ok(TransformResult {
        network: rebuild(n, reactions),
        transcript: Transcript {
            op: TransformKind::AddSpeciesToProduct,
            reaction: i,
            species: Some(n.species_name(s).to_string()),
            via_reaction: None,
            certificate: cert,
            new_rate,
        },
    })
}

/// Replaces `y_i -> y_i'` by `y_i + s -> y_i'` under a fresh rate label.
///
/// Requires distinct reactions `i != j` with `y_j | y_i`, `s` outside the
/// reactant support of `i`, and a certificate for `u_j` avoiding `E_s`.
pub fn add_species_to_reactant(
    n: &Network,
    i: usize,
    s: SpeciesId,
    j: usize,
) -> Result<TransformResult, TransformError> {
    if !n.is_zero_one() {
        return Err(TransformError::NotZeroOne);
    }
    if i == j {
        return Err(TransformError::SameReaction);
    }
    let target = n.reaction(i).ok_or(TransformError::UnknownReaction(i))?;
    let via = n.reaction(j).ok_or(TransformError::UnknownReaction(j))?;
    check_species(n, s)?;
    if !via.reactant.divides(&target.reactant) {
        return Err(TransformError::NotDivisible { via: j, target: i });
    }
    if target.reactant.contains(s) {
        return Err(TransformError::SpeciesAlreadyInReactant {
            reaction: i,
            species: n.species_name(s).to_string(),
        });
    }
    if target.reactant.plus_species(s) == target.product {
        return Err(TransformError::CreatesSelfLoop(i));
    }
    let h = build_hypergraph(n);
    let cert = certificate_avoiding(&h, VertexId::Reactant(j), EdgeId::Species(s))?;

    let new_rate = fresh_suffixed_label(n, &target.rate_label);
    let reactions = n
        .reactions()
        .iter()
        .map(|r| {
            if r.index == i {
                Reaction {
                    index: r.index,
                    reactant: r.reactant.plus_species(s),
                    product: r.product.clone(),
                    rate_label: new_rate.clone(),
                }
            } else {
                r.clone()
            }
        })
        .collect();
    Ok(TransformResult {
        network: rebuild(n, reactions),
        transcript: Transcript {
            op: TransformKind::AddSpeciesToReactant,
            reaction: i,
            species: Some(n.species_name(s).to_string()),
            via_reaction: Some(j),
            certificate: cert,
            new_rate,
        },
    })
}

/// Appends the degradation `y_i -> 0` under a fresh rate label.
///
/// Requires a certificate for the product vertex `v_i` avoiding the reaction
/// edge `E_i`, and that the degradation is not already present.
pub fn add_degradation(n: &Network, i: usize) -> Result<TransformResult, TransformError> {
    if !n.is_zero_one() {
        return Err(TransformError::NotZeroOne);
    }
    let reaction = n.reaction(i).ok_or(TransformError::UnknownReaction(i))?;
    if n.contains_reaction(&reaction.reactant, &crate::network::Complex::empty()) {
        return Err(TransformError::DuplicateDegradation(i));
    }
    let h = build_hypergraph(n);
    let cert = certificate_avoiding(&h, VertexId::Product(i), EdgeId::Reaction(i))?;

    let new_rate = fresh_numbered_label(n);
    let mut reactions = n.reactions().to_vec();
    reactions.push(Reaction {
        index: reactions.len() + 1,
        reactant: reaction.reactant.clone(),
        product: crate::network::Complex::empty(),
        rate_label: new_rate.clone(),
    });
    Ok(TransformResult {
        network: rebuild(n, reactions),
        transcript: Transcript {
            op: TransformKind::AddDegradation,
            reaction: i,
            species: None,
            via_reaction: None,
            certificate: cert,
            new_rate,
        },
    })
}

/// One step of a transform script, with species referenced by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformRequest {
    AddToProduct { reaction: usize, species: String },
    AddToReactant { reaction: usize, species: String, via: usize },
    AddDegradation { reaction: usize },
}

/// Script failure: the 1-based step that violated its precondition.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("script step {step}: {source}")]
pub struct ScriptError {
    pub step: usize,
    #[source]
    pub source: TransformError,
}

/// Applies transform requests in order, failing atomically at the first
/// violated precondition (the input network is never modified).
pub fn apply_script(
    n: &Network,
    ops: &[TransformRequest],
) -> Result<(Network, Vec<TransformResult>), ScriptError> {
    let mut current = n.clone();
    let mut results = Vec::new();
    for (pos, op) in ops.iter().enumerate() {
        let step = pos + 1;
        let fail = |source: TransformError| ScriptError { step, source };
        let species_id = |net: &Network, name: &str| -> Result<SpeciesId, ScriptError> {
            net.species_index(name)
                .ok_or_else(|| fail(TransformError::UnknownSpecies(name.to_string())))
        };
        let result = match op {
            TransformRequest::AddToProduct { reaction, species } => {
                let s = species_id(&current, species)?;
                add_species_to_product(&current, *reaction, s).map_err(fail)?
            }
            TransformRequest::AddToReactant {
                reaction,
                species,
                via,
            } => {
                let s = species_id(&current, species)?;
                add_species_to_reactant(&current, *reaction, s, *via).map_err(fail)?
            }
            TransformRequest::AddDegradation { reaction } => {
                add_degradation(&current, *reaction).map_err(fail)?
            }
        };
        current = result.network.clone();
        results.push(result);
    }
    Ok((current, results))
}
