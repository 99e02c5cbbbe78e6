//! Tools for deciding when two mass-action reaction networks share a
//! steady-state ideal.
//!
//! The crate builds steady-state polynomial systems, constructs network
//! hypergraphs, finds and verifies almost-balanced-vertex certificates,
//! applies the three ideal-preserving network rewrites, and cross-checks
//! everything with an exact Groebner-basis oracle under randomized rate
//! specialization.

pub mod balance;
pub mod groebner;
pub mod hypergraph;
pub mod linalg;
pub mod massaction;
pub mod network;
pub mod parse;
pub mod transforms;

pub use balance::{
    brute_force_certificate, find_certificate, monomial_ideal_certificate,
    structural_obstructions, verify_certificate, BalanceCertificate, Obstruction,
};
pub use hypergraph::{
    build_hypergraph, incidence_matrix, species_edge_polynomial, EdgeId, NetworkHypergraph,
    VertexId,
};
pub use massaction::{
    minimal_reactants, reactant_support_generators, steady_state_system, RatePolynomial,
    SteadyStateSystem,
};
pub use network::{
    complex_divides, validate_network, Complex, Network, Reaction, RingContext, Species,
    ValidationReport,
};
pub use parse::parse_network;
