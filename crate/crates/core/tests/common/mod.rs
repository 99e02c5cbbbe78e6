//! Shared test helpers: a seeded generator of valid 0,1-networks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crn_core::network::Network;
use crn_core::parse::parse_network;

const NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

/// Deterministically generates a valid 0,1-network with at most
/// `max_species` species and `max_reactions` reactions.
///
/// Reversible pairs are inserted with some probability so that obstruction
/// properties get exercised; degradations appear as empty products.
pub fn random_zero_one_network(seed: u64, max_species: usize, max_reactions: usize) -> Network {
    assert!(max_species >= 2 && max_species <= NAMES.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let n_species = rng.gen_range(2..=max_species);
    let n_reactions = rng.gen_range(1..=max_reactions);

    let mut sides: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    while sides.len() < n_reactions {
        // Occasionally reverse an earlier reaction to create reversible
        // pairs and short cycles.
        if !sides.is_empty() && rng.gen_bool(0.3) {
            let (reactant, product) = sides[rng.gen_range(0..sides.len())].clone();
            if !product.is_empty() {
                sides.push((product, reactant));
                continue;
            }
        }
        let reactant = random_support(&mut rng, n_species, 1);
        let product_size = [0, 1, 1, 2][rng.gen_range(0..4)];
        let product = if product_size == 0 {
            Vec::new()
        } else {
            random_support(&mut rng, n_species, product_size)
        };
        if reactant == product {
            continue;
        }
        sides.push((reactant, product));
    }

    let render = |support: &[usize]| -> String {
        if support.is_empty() {
            "0".to_string()
        } else {
            support
                .iter()
                .map(|&s| NAMES[s].to_string())
                .collect::<Vec<_>>()
                .join(" + ")
        }
    };
    let text: String = sides
        .iter()
        .enumerate()
        .map(|(i, (reactant, product))| {
            format!("{} -> {}, k{}\n", render(reactant), render(product), i + 1)
        })
        .collect();
    parse_network(&text).expect("generated network is syntactically valid")
}

fn random_support(rng: &mut ChaCha8Rng, n_species: usize, min_size: usize) -> Vec<usize> {
    let max_size = 2.min(n_species);
    let size = rng.gen_range(min_size..=max_size.max(min_size));
    let mut out: Vec<usize> = Vec::new();
    while out.len() < size {
        let s = rng.gen_range(0..n_species);
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out.sort_unstable();
    out
}
