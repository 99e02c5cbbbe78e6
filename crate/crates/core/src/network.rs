//! Core data model: species, complexes, reactions, networks, and ring contexts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a species in a network's canonical order.
pub type SpeciesId = usize;

/// A chemical species, identified by name and position in the canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    pub name: String,
    pub index: SpeciesId,
}

/// A complex: a sparse vector of nonnegative stoichiometric coefficients.
///
/// Only strictly positive exponents are stored; the empty map is the empty
/// complex `0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Complex {
    exponents: BTreeMap<SpeciesId, u32>,
}

impl Complex {
    pub fn empty() -> Self {
        Complex::default()
    }

    /// Builds a complex from (species, exponent) pairs, summing duplicates
    /// and dropping zero entries.
    pub fn from_pairs<I: IntoIterator<Item = (SpeciesId, u32)>>(pairs: I) -> Self {
        let mut exponents: BTreeMap<SpeciesId, u32> = BTreeMap::new();
        for (s, e) in pairs {
            if e > 0 {
                *exponents.entry(s).or_insert(0) += e;
            }
        }
        Complex { exponents }
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, s: SpeciesId) -> u32 {
        self.exponents.get(&s).copied().unwrap_or(0)
    }

    /// The support: species with a strictly positive exponent.
    pub fn support(&self) -> impl Iterator<Item = SpeciesId> + '_ {
        self.exponents.keys().copied()
    }

    pub fn contains(&self, s: SpeciesId) -> bool {
        self.exponents.contains_key(&s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SpeciesId, u32)> + '_ {
        self.exponents.iter().map(|(&s, &e)| (s, e))
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    /// True when every exponent is at most one.
    pub fn is_zero_one(&self) -> bool {
        self.exponents.values().all(|&e| e <= 1)
    }

    /// Divisibility of the associated monomials: `self | other` iff every
    /// exponent of `self` is bounded by the matching exponent of `other`.
    pub fn divides(&self, other: &Complex) -> bool {
        self.exponents
            .iter()
            .all(|(&s, &e)| e <= other.exponent(s))
    }

    /// The complex with one extra copy of `s`.
    pub fn plus_species(&self, s: SpeciesId) -> Complex {
        let mut exponents = self.exponents.clone();
        *exponents.entry(s).or_insert(0) += 1;
        Complex { exponents }
    }
}

/// Divisibility of complexes as monomials: `y | y2` iff `x^y | x^{y2}`.
pub fn complex_divides(y: &Complex, y2: &Complex) -> bool {
    y.divides(y2)
}

/// A directed reaction between two complexes, with a symbolic rate label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reaction {
    /// 1-based reaction number, in input order.
    pub index: usize,
    pub reactant: Complex,
    pub product: Complex,
    pub rate_label: String,
}

/// A chemical reaction network: species, reactions, and the derived complex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    species: Vec<Species>,
    reactions: Vec<Reaction>,
    complexes: Vec<Complex>,
}

impl Network {
    /// Assembles a network from named species and reactions, deriving the
    /// complex list (deduplicated, in order of first appearance).
    ///
    /// No structural validation happens here; see [`validate_network`].
    pub fn from_reactions(species_names: Vec<String>, reactions: Vec<Reaction>) -> Network {
        let species = species_names
            .into_iter()
            .enumerate()
            .map(|(index, name)| Species { name, index })
            .collect();
        let mut complexes: Vec<Complex> = Vec::new();
        for r in &reactions {
            for c in [&r.reactant, &r.product] {
                if !complexes.contains(c) {
                    complexes.push(c.clone());
                }
            }
        }
        Network {
            species,
            reactions,
            complexes,
        }
    }

    /// Assembles a network with an explicit complex list, bypassing derivation.
    /// Intended for constructing deliberately malformed networks in tests.
    pub fn with_parts(
        species_names: Vec<String>,
        reactions: Vec<Reaction>,
        complexes: Vec<Complex>,
    ) -> Network {
        let species = species_names
            .into_iter()
            .enumerate()
            .map(|(index, name)| Species { name, index })
            .collect();
        Network {
            species,
            reactions,
            complexes,
        }
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    /// Looks up a reaction by its 1-based index.
    pub fn reaction(&self, index: usize) -> Option<&Reaction> {
        if index == 0 {
            return None;
        }
        self.reactions.get(index - 1)
    }

    pub fn species_index(&self, name: &str) -> Option<SpeciesId> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn species_name(&self, id: SpeciesId) -> &str {
        &self.species[id].name
    }

    /// True when every complex of the network has all exponents in `{0,1}`.
    pub fn is_zero_one(&self) -> bool {
        self.complexes.iter().all(Complex::is_zero_one)
    }

    pub fn contains_reaction(&self, reactant: &Complex, product: &Complex) -> bool {
        self.reactions
            .iter()
            .any(|r| &r.reactant == reactant && &r.product == product)
    }

    /// Renders a complex in the text grammar, e.g. `2A + B` or `0`.
    pub fn render_complex(&self, c: &Complex) -> String {
        if c.is_empty() {
            return "0".to_string();
        }
        c.iter()
            .map(|(s, e)| {
                if e == 1 {
                    self.species[s].name.clone()
                } else {
                    format!("{}{}", e, self.species[s].name)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Renders the monomial `x^c`, e.g. `x_A^2*x_B` or `1`.
    pub fn render_monomial(&self, c: &Complex) -> String {
        if c.is_empty() {
            return "1".to_string();
        }
        c.iter()
            .map(|(s, e)| {
                if e == 1 {
                    format!("x_{}", self.species[s].name)
                } else {
                    format!("x_{}^{}", self.species[s].name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Serializes to the line-oriented text format accepted by the parser.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reactions {
            out.push_str(&format!(
                "{} -> {}, {}\n",
                self.render_complex(&r.reactant),
                self.render_complex(&r.product),
                r.rate_label
            ));
        }
        out
    }
}

/// JSON mirror of [`Network`], with complexes keyed by species name.
#[derive(Debug, Serialize, Deserialize)]
struct NetworkJson {
    species: Vec<String>,
    reactions: Vec<ReactionJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReactionJson {
    reactant: BTreeMap<String, u32>,
    product: BTreeMap<String, u32>,
    rate: String,
}

/// Errors from JSON (de)serialization of networks.
#[derive(Debug, Error)]
pub enum NetworkJsonError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("reaction {reaction} references unknown species {name:?}")]
    UnknownSpecies { reaction: usize, name: String },
}

impl Network {
    pub fn to_json(&self) -> String {
        let mirror = NetworkJson {
            species: self.species.iter().map(|s| s.name.clone()).collect(),
            reactions: self
                .reactions
                .iter()
                .map(|r| ReactionJson {
                    reactant: self.complex_to_named(&r.reactant),
                    product: self.complex_to_named(&r.product),
                    rate: r.rate_label.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&mirror).expect("network serialization cannot fail")
    }

    fn complex_to_named(&self, c: &Complex) -> BTreeMap<String, u32> {
        c.iter()
            .map(|(s, e)| (self.species[s].name.clone(), e))
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Network, NetworkJsonError> {
        let mirror: NetworkJson = serde_json::from_str(text)?;
        let index: BTreeMap<&str, usize> = mirror
            .species
            .iter()
            .enumerate()
            .map(|(i, name)| (name.as_str(), i))
            .collect();
        let mut reactions = Vec::new();
        for (pos, r) in mirror.reactions.iter().enumerate() {
            let resolve = |m: &BTreeMap<String, u32>| -> Result<Complex, NetworkJsonError> {
                let mut pairs = Vec::new();
                for (name, &e) in m {
                    let id = *index.get(name.as_str()).ok_or_else(|| {
                        NetworkJsonError::UnknownSpecies {
                            reaction: pos + 1,
                            name: name.clone(),
                        }
                    })?;
                    pairs.push((id, e));
                }
                Ok(Complex::from_pairs(pairs))
            };
            reactions.push(Reaction {
                index: pos + 1,
                reactant: resolve(&r.reactant)?,
                product: resolve(&r.product)?,
                rate_label: r.rate.clone(),
            });
        }
        Ok(Network::from_reactions(mirror.species, reactions))
    }
}

/// A single violated network-definition clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationFinding {
    /// A reaction whose reactant equals its product.
    SelfLoop { reaction: usize },
    /// A reaction with empty reactant.
    ProductionReaction { reaction: usize },
    /// A complex in the complex list used by no reaction.
    OrphanComplex { complex: String },
    /// A species appearing in no complex support.
    UncoveredSpecies { species: String },
}

impl fmt::Display for ValidationFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFinding::SelfLoop { reaction } => {
                write!(f, "self-loop: reaction {reaction} has equal reactant and product")
            }
            ValidationFinding::ProductionReaction { reaction } => {
                write!(f, "production reaction: reaction {reaction} has empty reactant")
            }
            ValidationFinding::OrphanComplex { complex } => {
                write!(f, "orphan complex: {complex} belongs to no reaction")
            }
            ValidationFinding::UncoveredSpecies { species } => {
                write!(f, "uncovered species: {species} appears in no complex")
            }
        }
    }
}

/// Outcome of structural validation; empty iff the network is well-formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<ValidationFinding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Checks the definitional clauses of a reaction network: no self-loops, no
/// production reactions, every complex in some reaction, every species in
/// some complex support.
pub fn validate_network(n: &Network) -> ValidationReport {
    let mut findings = Vec::new();
    for r in n.reactions() {
        if r.reactant == r.product {
            findings.push(ValidationFinding::SelfLoop { reaction: r.index });
        }
        if r.reactant.is_empty() {
            findings.push(ValidationFinding::ProductionReaction { reaction: r.index });
        }
    }
    for c in n.complexes() {
        let used = n
            .reactions()
            .iter()
            .any(|r| &r.reactant == c || &r.product == c);
        if !used {
            findings.push(ValidationFinding::OrphanComplex {
                complex: n.render_complex(c),
            });
        }
    }
    let mut covered: BTreeSet<SpeciesId> = BTreeSet::new();
    for c in n.complexes() {
        covered.extend(c.support());
    }
    for s in n.species() {
        if !covered.contains(&s.index) {
            findings.push(ValidationFinding::UncoveredSpecies {
                species: s.name.clone(),
            });
        }
    }
    ValidationReport { findings }
}

/// Shared variable/rate-label ordering for embedding one or two networks in a
/// common polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingContext {
    variables: Vec<String>,
    rate_labels: Vec<String>,
}

/// Error raised when a network mentions a name missing from a ring context.
#[derive(Debug, Error)]
#[error("name {0:?} is not part of this ring context")]
pub struct UnknownName(pub String);

impl RingContext {
    pub fn for_network(n: &Network) -> RingContext {
        RingContext {
            variables: n.species().iter().map(|s| s.name.clone()).collect(),
            rate_labels: n.reactions().iter().map(|r| r.rate_label.clone()).collect(),
        }
    }

    /// Union context: first network's names in order, then the second's
    /// not already present, in its order.
    pub fn union(n1: &Network, n2: &Network) -> RingContext {
        let mut variables: Vec<String> = n1.species().iter().map(|s| s.name.clone()).collect();
        for s in n2.species() {
            if !variables.contains(&s.name) {
                variables.push(s.name.clone());
            }
        }
        let mut rate_labels: Vec<String> =
            n1.reactions().iter().map(|r| r.rate_label.clone()).collect();
        for r in n2.reactions() {
            if !rate_labels.contains(&r.rate_label) {
                rate_labels.push(r.rate_label.clone());
            }
        }
        RingContext {
            variables,
            rate_labels,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn rate_labels(&self) -> &[String] {
        &self.rate_labels
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Maps each species index of `n` to its variable index in this context.
    pub fn species_map(&self, n: &Network) -> Result<Vec<usize>, UnknownName> {
        n.species()
            .iter()
            .map(|s| {
                self.var_index(&s.name)
                    .ok_or_else(|| UnknownName(s.name.clone()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_network;

    #[test]
    fn complex_divides_examples() {
        let a = Complex::from_pairs([(0, 1)]);
        let ab = Complex::from_pairs([(0, 1), (1, 1)]);
        let aa = Complex::from_pairs([(0, 2)]);
        assert!(complex_divides(&a, &ab));
        assert!(!complex_divides(&aa, &a));
        assert!(complex_divides(&ab, &ab));
        assert!(complex_divides(&Complex::empty(), &a));
    }

    #[test]
    fn zero_one_detection() {
        // 2A -> A+B, 2A -> 2B, A+B -> 2B: not a 0,1-network.
        let dimer = parse_network("2A -> A + B, k1\n2A -> 2B, k2\nA + B -> 2B, k3").unwrap();
        assert!(!dimer.is_zero_one());

        let n1 = parse_network("A -> B, k1\nC -> D, k2\nC -> B, k3").unwrap();
        assert!(n1.is_zero_one());

        let deg = parse_network("A -> 0, k1").unwrap();
        assert!(deg.is_zero_one());
    }

    #[test]
    fn validate_parsed_network_is_clean() {
        let n1 = parse_network("A -> B, k1\nC -> D, k2\nC -> B, k3").unwrap();
        assert!(validate_network(&n1).is_valid());
    }

    #[test]
    fn validate_flags_orphan_complex() {
        let mut n = parse_network("A -> B, k1").unwrap();
        let orphan = Complex::from_pairs([(0, 1), (1, 1)]);
        let mut complexes = n.complexes().to_vec();
        complexes.push(orphan);
        n = Network::with_parts(
            n.species().iter().map(|s| s.name.clone()).collect(),
            n.reactions().to_vec(),
            complexes,
        );
        let report = validate_network(&n);
        assert_eq!(
            report.findings,
            vec![ValidationFinding::OrphanComplex {
                complex: "A + B".to_string()
            }]
        );
    }

    #[test]
    fn validate_flags_injected_self_loop() {
        let n = parse_network("A -> B, k1").unwrap();
        let a = Complex::from_pairs([(0, 1)]);
        let mut reactions = n.reactions().to_vec();
        reactions.push(Reaction {
            index: 2,
            reactant: a.clone(),
            product: a,
            rate_label: "k2".to_string(),
        });
        let bad = Network::from_reactions(
            n.species().iter().map(|s| s.name.clone()).collect(),
            reactions,
        );
        let report = validate_network(&bad);
        assert_eq!(
            report.findings,
            vec![ValidationFinding::SelfLoop { reaction: 2 }]
        );
    }

    #[test]
    fn json_round_trip() {
        let n = parse_network("2A -> A + B, k1\nA + B -> 0, k2").unwrap();
        let back = Network::from_json(&n.to_json()).unwrap();
        assert_eq!(n, back);
    }

    #[test]
    fn union_context_orders_names() {
        let n1 = parse_network("A -> B, k1").unwrap();
        let n2 = parse_network("C -> B, k2\nA -> C, k1").unwrap();
        let ctx = RingContext::union(&n1, &n2);
        assert_eq!(ctx.variables(), ["A", "B", "C"]);
        assert_eq!(ctx.rate_labels(), ["k1", "k2"]);
    }
}
