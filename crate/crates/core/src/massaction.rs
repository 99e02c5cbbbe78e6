//! Mass-action steady-state polynomials and reactant structure.
//!
//! Every generator of the steady-state ideal is an integer-linear combination
//! of terms `kappa_i * x^{y_i}` where `y_i` is the reactant of reaction `i`;
//! [`RatePolynomial`] represents exactly this fragment, keeping rate constants
//! symbolic and coefficients exact.

use std::collections::BTreeMap;

use crate::network::{Complex, Network, SpeciesId};

/// An integer-linear combination of `kappa_i * x^mono` terms.
///
/// Keys are `(reaction index, monomial)`; values are the (nonzero) integer
/// coefficients. For a steady-state polynomial the coefficient stored at
/// `(i, y_i)` is the net stoichiometric change of the species in reaction `i`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RatePolynomial {
    terms: BTreeMap<(usize, Complex), i64>,
}

impl RatePolynomial {
    pub fn zero() -> Self {
        RatePolynomial::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * kappa_i * x^mono`, dropping the entry if it cancels.
    pub fn add_term(&mut self, reaction: usize, mono: Complex, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry((reaction, mono));
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + coeff;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Complex, i64)> + '_ {
        self.terms.iter().map(|((i, m), &c)| (*i, m, c))
    }

    pub fn coefficient(&self, reaction: usize, mono: &Complex) -> i64 {
        self.terms
            .get(&(reaction, mono.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &RatePolynomial) -> RatePolynomial {
        let mut out = self.clone();
        for ((i, m), &c) in &other.terms {
            out.add_term(*i, m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &RatePolynomial) -> RatePolynomial {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, factor: i64) -> RatePolynomial {
        let mut out = RatePolynomial::zero();
        for ((i, m), &c) in &self.terms {
            out.add_term(*i, m.clone(), c * factor);
        }
        out
    }

    /// Renders with terms in reaction order, signs inline, e.g.
    /// `-k1*x_A^2 - 2*k2*x_A^2 - k3*x_A*x_B`.
    pub fn render(&self, n: &Network) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (pos, ((i, mono), &coeff)) in self.terms.iter().enumerate() {
            let magnitude = coeff.unsigned_abs();
            if pos == 0 {
                if coeff < 0 {
                    out.push('-');
                }
            } else if coeff < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if magnitude != 1 {
                out.push_str(&format!("{magnitude}*"));
            }
            let rate = &n
                .reaction(*i)
                .expect("rate polynomial references a reaction of its network")
                .rate_label;
            out.push_str(rate);
            if !mono.is_empty() {
                out.push('*');
                out.push_str(&n.render_monomial(mono));
            }
        }
        out
    }
}

/// The steady-state polynomial system: one generator per species.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteadyStateSystem {
    entries: Vec<RatePolynomial>,
}

impl SteadyStateSystem {
    pub fn polynomial_for(&self, s: SpeciesId) -> &RatePolynomial {
        &self.entries[s]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SpeciesId, &RatePolynomial)> + '_ {
        self.entries.iter().enumerate()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Builds the mass-action system: for each species `s`,
/// `dx_s = sum_i kappa_i x^{y_i} (y'_{i,s} - y_{i,s})`.
///
/// Species whose net change vanishes in every reaction keep an explicit zero
/// entry, so the system always has one generator per species.
pub fn steady_state_system(n: &Network) -> SteadyStateSystem {
    let mut entries = vec![RatePolynomial::zero(); n.species().len()];
    for r in n.reactions() {
        for (s, entry) in entries.iter_mut().enumerate() {
            let gamma = i64::from(r.product.exponent(s)) - i64::from(r.reactant.exponent(s));
            entry.add_term(r.index, r.reactant.clone(), gamma);
        }
    }
    SteadyStateSystem { entries }
}

/// Deduplicated reactant complexes, in order of first appearance.
pub fn reactant_support_generators(n: &Network) -> Vec<Complex> {
    let mut out: Vec<Complex> = Vec::new();
    for r in n.reactions() {
        if !out.contains(&r.reactant) {
            out.push(r.reactant.clone());
        }
    }
    out
}

/// Reactant complexes divisible by no other reactant, in canonical order.
pub fn minimal_reactants(n: &Network) -> Vec<Complex> {
    let reactants = reactant_support_generators(n);
    reactants
        .iter()
        .filter(|y| {
            !reactants
                .iter()
                .any(|other| *other != **y && other.divides(y))
        })
        .cloned()
        .collect()
}
