//! Cross-module invariants checked over seeded random networks and
//! property-tested algebra.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::random_zero_one_network;
use crn_core::balance::{find_certificate, verify_certificate};
use crn_core::groebner::{
    contains_monomial, ideal_equal, is_groebner_basis, normal_form, reactant_ideal_basis,
    specialized_generators, Answer, MonomialOrder,
};
use crn_core::hypergraph::{build_hypergraph, species_edge_polynomial, VertexId};
use crn_core::massaction::{minimal_reactants, reactant_support_generators, steady_state_system};
use crn_core::network::{complex_divides, validate_network, Complex, RingContext};
use crn_core::parse::parse_network;
use crn_core::transforms::{add_degradation, add_species_to_product};

const ORDER: MonomialOrder = MonomialOrder::DegRevLex;

#[test]
fn parse_serialize_round_trip() {
    for seed in 0..60 {
        let n = random_zero_one_network(seed, 5, 6);
        let again = parse_network(&n.to_text()).expect("serialized network parses");
        assert_eq!(n, again, "round trip failed for seed {seed}");
    }
}

#[test]
fn generated_networks_validate_cleanly() {
    for seed in 0..60 {
        let n = random_zero_one_network(seed, 5, 6);
        assert!(validate_network(&n).is_valid(), "seed {seed}");
    }
}

#[test]
fn steady_state_coefficients_are_net_changes() {
    for seed in 0..40 {
        let n = random_zero_one_network(seed, 5, 6);
        let sys = steady_state_system(&n);
        for r in n.reactions() {
            for s in 0..n.species().len() {
                let gamma =
                    i64::from(r.product.exponent(s)) - i64::from(r.reactant.exponent(s));
                assert_eq!(
                    sys.polynomial_for(s).coefficient(r.index, &r.reactant),
                    gamma,
                    "seed {seed}, reaction {}, species {s}",
                    r.index
                );
            }
        }
    }
}

#[test]
fn minimal_reactants_divide_and_are_minimal() {
    for seed in 0..60 {
        let n = random_zero_one_network(seed, 5, 6);
        let reactants = reactant_support_generators(&n);
        let minimal = minimal_reactants(&n);
        for y in &reactants {
            assert!(
                minimal.iter().any(|m| m.divides(y)),
                "seed {seed}: reactant not divisible by any minimal reactant"
            );
        }
        for m in &minimal {
            for y in &reactants {
                if y != m {
                    assert!(
                        !y.divides(m),
                        "seed {seed}: non-minimal reactant divides a minimal one"
                    );
                }
            }
        }
    }
}

// Reactants generate the support of the whole ideal: every specialized
// generator reduces to zero against the reactant-monomial ideal.
#[test]
fn ideal_lies_in_reactant_monomial_ideal() {
    for seed in 0..30 {
        let n = random_zero_one_network(seed, 4, 5);
        let ctx = RingContext::for_network(&n);
        let basis = reactant_ideal_basis(&n, &ctx, ORDER).unwrap();
        let verdict = contains_monomial(
            &n,
            &reactant_support_generators(&n)[0],
            1,
            seed,
            ORDER,
        );
        // Draw an assignment through the public oracle machinery.
        let assignment = verdict.unwrap().assignments[0].clone();
        let gens = specialized_generators(&n, &assignment, &ctx, ORDER).unwrap();
        for g in &gens {
            assert!(
                normal_form(g, &basis).is_zero(),
                "seed {seed}: generator escapes the reactant ideal"
            );
        }
    }
}

#[test]
fn species_edge_equation_matches_mass_action() {
    for seed in 0..100 {
        let n = random_zero_one_network(seed, 6, 8);
        let h = build_hypergraph(&n);
        let sys = steady_state_system(&n);
        for s in 0..n.species().len() {
            let from_edges = species_edge_polynomial(&n, &h, s).unwrap();
            assert_eq!(
                &from_edges,
                sys.polynomial_for(s),
                "seed {seed}, species {s}"
            );
        }
    }
}

#[test]
fn specialized_systems_yield_groebner_bases() {
    for seed in 0..15 {
        let n = random_zero_one_network(seed, 4, 5);
        let ctx = RingContext::for_network(&n);
        let assignment = contains_monomial(&n, &reactant_support_generators(&n)[0], 1, seed, ORDER)
            .unwrap()
            .assignments[0]
            .clone();
        let gens = specialized_generators(&n, &assignment, &ctx, ORDER).unwrap();
        let gb = crn_core::groebner::reduced_groebner_basis(&gens, ORDER).unwrap();
        assert!(is_groebner_basis(&gb), "seed {seed}");
        for g in &gens {
            assert!(normal_form(g, &gb).is_zero(), "seed {seed}");
        }
        // Normal form is idempotent against the basis.
        for g in &gens {
            let once = normal_form(g, &gb);
            assert_eq!(normal_form(&once, &gb), once, "seed {seed}");
        }
    }
}

#[test]
fn certificates_are_reduced_and_sound() {
    let none: BTreeSet<crn_core::hypergraph::EdgeId> = BTreeSet::new();
    for seed in 200..240 {
        let n = random_zero_one_network(seed, 5, 6);
        let h = build_hypergraph(&n);
        for r in n.reactions() {
            for v in [VertexId::Reactant(r.index), VertexId::Product(r.index)] {
                let Some(cert) = find_certificate(&h, v, &none).unwrap() else {
                    continue;
                };
                assert!(cert.k >= 1);
                assert!(
                    cert.red.keys().all(|e| !cert.blue.contains_key(e)),
                    "seed {seed}: overlapping colors"
                );
                let check = verify_certificate(&n, &cert).unwrap();
                assert_eq!(check.k, cert.k);
                assert_eq!(check.monomial, r.reactant);
            }
        }
    }
}

#[test]
fn successful_transforms_preserve_the_ideal() {
    let mut successes = 0;
    for seed in 0..40 {
        let n = random_zero_one_network(seed, 4, 4);
        let mut candidates = Vec::new();
        for r in n.reactions() {
            candidates.push(add_degradation(&n, r.index));
            for s in 0..n.species().len() {
                candidates.push(add_species_to_product(&n, r.index, s));
            }
        }
        for result in candidates.into_iter().flatten().take(2) {
            successes += 1;
            assert!(result.network.is_zero_one());
            assert!(validate_network(&result.network).is_valid());
            // The recorded certificate survives on the output hypergraph.
            verify_certificate(&result.network, &result.transcript.certificate).unwrap();
            let verdict = ideal_equal(&n, &result.network, 2, 0, ORDER).unwrap();
            assert_eq!(verdict.answer, Answer::Equal, "seed {seed}");
        }
    }
    assert!(successes > 10, "transform sample too small: {successes}");
}

proptest! {
    #[test]
    fn divides_is_reflexive(exps in proptest::collection::btree_map(0usize..5, 1u32..4, 0..4)) {
        let y = Complex::from_pairs(exps);
        prop_assert!(complex_divides(&y, &y));
    }

    #[test]
    fn divides_is_antisymmetric(
        a in proptest::collection::btree_map(0usize..5, 1u32..4, 0..4),
        b in proptest::collection::btree_map(0usize..5, 1u32..4, 0..4),
    ) {
        let y = Complex::from_pairs(a);
        let z = Complex::from_pairs(b);
        if complex_divides(&y, &z) && complex_divides(&z, &y) {
            prop_assert_eq!(y, z);
        }
    }

    #[test]
    fn divides_is_transitive(
        a in proptest::collection::btree_map(0usize..4, 1u32..3, 0..3),
        b in proptest::collection::btree_map(0usize..4, 1u32..3, 0..3),
        c in proptest::collection::btree_map(0usize..4, 1u32..3, 0..3),
    ) {
        let x = Complex::from_pairs(a);
        let y = Complex::from_pairs(b);
        let z = Complex::from_pairs(c);
        if complex_divides(&x, &y) && complex_divides(&y, &z) {
            prop_assert!(complex_divides(&x, &z));
        }
    }

    #[test]
    fn divides_matches_monomial_divisibility(
        a in proptest::collection::btree_map(0usize..4, 1u32..4, 0..4),
        b in proptest::collection::btree_map(0usize..4, 1u32..4, 0..4),
    ) {
        // y | y2 in the complex order iff exponentwise <=.
        let y = Complex::from_pairs(a.clone());
        let z = Complex::from_pairs(b.clone());
        let expected = (0..5).all(|s| {
            a.get(&s).copied().unwrap_or(0) <= b.get(&s).copied().unwrap_or(0)
        });
        prop_assert_eq!(complex_divides(&y, &z), expected);
    }
}
