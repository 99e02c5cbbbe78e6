//! Buchberger's algorithm with the normal selection strategy and both
//! pair-elimination criteria, plus reduction to the unique reduced basis.

use thiserror::Error;

use super::poly::{
    monomial_div, monomial_divides, monomial_lcm, normal_form, Exponents, MonomialOrder,
    QPolynomial,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("generators live in different rings (variable counts {0} vs {1})")]
    MixedContexts(usize, usize),
    #[error("generators carry different monomial orders")]
    MixedOrders,
}

fn s_polynomial(f: &QPolynomial, g: &QPolynomial) -> QPolynomial {
    let (f_mono, f_coeff) = f.leading_term().expect("nonzero");
    let (g_mono, g_coeff) = g.leading_term().expect("nonzero");
    let lcm = monomial_lcm(f_mono, g_mono);
    let mut s = QPolynomial::zero(f.nvars(), f.order());
    s.add_scaled_shifted(
        f,
        &monomial_div(&lcm, f_mono),
        &(num_rational::BigRational::from_integer(1.into()) / f_coeff),
    );
    s.add_scaled_shifted(
        g,
        &monomial_div(&lcm, g_mono),
        &(-(num_rational::BigRational::from_integer(1.into()) / g_coeff)),
    );
    s
}

/// Computes the unique reduced Groebner basis of the ideal generated by
/// `gens` under `order`: monic, auto-reduced, sorted by leading monomial.
///
/// Zero generators are ignored; the zero ideal yields the empty basis.
pub fn reduced_groebner_basis(
    gens: &[QPolynomial],
    order: MonomialOrder,
) -> Result<Vec<QPolynomial>, GroebnerError> {
    let mut basis: Vec<QPolynomial> = Vec::new();
    for g in gens {
        if g.order() != order {
            return Err(GroebnerError::MixedOrders);
        }
        if let Some(first) = gens.iter().find(|p| !p.is_zero()) {
            if g.nvars() != first.nvars() {
                return Err(GroebnerError::MixedContexts(first.nvars(), g.nvars()));
            }
        }
        if !g.is_zero() {
            basis.push(g.clone());
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    // Pair queue with cached lcm of leading monomials.
    let mut pairs: Vec<(usize, usize, Exponents)> = Vec::new();
    let lt = |b: &[QPolynomial], i: usize| -> Exponents {
        b[i].leading_term().expect("basis is nonzero").0.clone()
    };
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.push((i, j, monomial_lcm(&lt(&basis, i), &lt(&basis, j))));
        }
    }

    let coprime = |a: &[u32], b: &[u32]| a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0);

    while !pairs.is_empty() {
        // Normal selection: smallest lcm under the order.
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, (_, _, a)), (_, (_, _, b))| order.cmp(a, b))
            .map(|(idx, _)| idx)
            .expect("nonempty");
        let (i, j, lcm) = pairs.swap_remove(best);

        // First criterion: coprime leading monomials reduce to zero.
        if coprime(&lt(&basis, i), &lt(&basis, j)) {
            continue;
        }
        // Chain criterion: skip when some other basis element's leading
        // monomial divides the lcm and both its pairs are already handled.
        let chained = (0..basis.len()).any(|l| {
            l != i
                && l != j
                && monomial_divides(&lt(&basis, l), &lcm)
                && !pairs.iter().any(|&(a, b, _)| {
                    (a == l.min(i) && b == l.max(i)) || (a == l.min(j) && b == l.max(j))
                })
        });
        if chained {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j]);
        let reduced = normal_form(&s, &basis);
        if !reduced.is_zero() {
            let new_index = basis.len();
            for l in 0..new_index {
                pairs.push((
                    l,
                    new_index,
                    monomial_lcm(&lt(&basis, l), reduced.leading_term().expect("nonzero").0),
                ));
            }
            basis.push(reduced);
        }
    }

    Ok(reduce_basis(basis, order))
}

/// Minimizes and auto-reduces a Groebner basis into the reduced basis.
fn reduce_basis(mut basis: Vec<QPolynomial>, order: MonomialOrder) -> Vec<QPolynomial> {
    // Minimal: drop elements whose leading monomial is divisible by another's.
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let lt_i = basis[i].leading_term().expect("nonzero").0.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lt_j = basis[j].leading_term().expect("nonzero").0;
            if monomial_divides(lt_j, &lt_i) && (lt_j != &lt_i || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    basis = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();

    // Reduced: every element in normal form against the others, monic.
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            let others: Vec<QPolynomial> = basis
                .iter()
                .enumerate()
                .filter_map(|(j, g)| (j != i).then(|| g.clone()))
                .collect();
            let reduced = normal_form(&basis[i], &others).monic();
            if reduced != basis[i] {
                basis[i] = reduced;
                changed = true;
            }
        }
        basis.retain(|g| !g.is_zero());
        if !changed {
            break;
        }
    }
    // Present largest leading monomial first.
    basis.sort_by(|a, b| {
        let la = a.leading_term().expect("nonzero").0;
        let lb = b.leading_term().expect("nonzero").0;
        order.cmp(lb, la)
    });
    basis
}

/// Checks the Buchberger criterion directly: every S-polynomial of the family
/// reduces to zero against it.
pub fn is_groebner_basis(basis: &[QPolynomial]) -> bool {
    let nonzero: Vec<&QPolynomial> = basis.iter().filter(|g| !g.is_zero()).collect();
    for i in 0..nonzero.len() {
        for j in (i + 1)..nonzero.len() {
            let s = s_polynomial(nonzero[i], nonzero[j]);
            if !normal_form(&s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn poly(nvars: usize, order: MonomialOrder, terms: &[(&[u32], i64)]) -> QPolynomial {
        QPolynomial::from_terms(
            nvars,
            order,
            terms.iter().map(|(m, c)| (m.to_vec(), q(*c))),
        )
    }

    #[test]
    fn chain_generators_reduce_to_monomials() {
        // Specialized at kappa = 1: {-x_A, x_A + x_C, -2 x_C, x_C} -> {x_A, x_C}.
        let ord = MonomialOrder::DegRevLex;
        let gens = vec![
            poly(4, ord, &[(&[1, 0, 0, 0], -1)]),
            poly(4, ord, &[(&[1, 0, 0, 0], 1), (&[0, 0, 1, 0], 1)]),
            poly(4, ord, &[(&[0, 0, 1, 0], -2)]),
            poly(4, ord, &[(&[0, 0, 1, 0], 1)]),
        ];
        let gb = reduced_groebner_basis(&gens, ord).unwrap();
        assert_eq!(
            gb,
            vec![
                poly(4, ord, &[(&[1, 0, 0, 0], 1)]),
                poly(4, ord, &[(&[0, 0, 1, 0], 1)]),
            ]
        );
        assert!(is_groebner_basis(&gb));
    }

    #[test]
    fn containment_collapses() {
        let ord = MonomialOrder::DegRevLex;
        let gens = vec![
            poly(1, ord, &[(&[2], 1)]),
            poly(1, ord, &[(&[1], 1)]),
        ];
        let gb = reduced_groebner_basis(&gens, ord).unwrap();
        assert_eq!(gb, vec![poly(1, ord, &[(&[1], 1)])]);
    }

    #[test]
    fn zero_ideal_gives_empty_basis() {
        let gb = reduced_groebner_basis(&[], MonomialOrder::DegRevLex).unwrap();
        assert!(gb.is_empty());
        assert!(is_groebner_basis(&gb));
    }

    #[test]
    fn textbook_lex_basis() {
        // {x^2 - y, x^3 - z} under lex contains the relation y^3 - z^2.
        let ord = MonomialOrder::Lex;
        let gens = vec![
            poly(3, ord, &[(&[2, 0, 0], 1), (&[0, 1, 0], -1)]),
            poly(3, ord, &[(&[3, 0, 0], 1), (&[0, 0, 1], -1)]),
        ];
        let gb = reduced_groebner_basis(&gens, ord).unwrap();
        assert!(is_groebner_basis(&gb));
        let twisted_cubic_relation = poly(3, ord, &[(&[0, 3, 0], 1), (&[0, 0, 2], -1)]);
        assert!(normal_form(&twisted_cubic_relation, &gb).is_zero());
        // Every input generator reduces to zero against the basis.
        for g in &gens {
            assert!(normal_form(g, &gb).is_zero());
        }
    }

    #[test]
    fn deterministic_across_reruns() {
        let ord = MonomialOrder::DegRevLex;
        let gens = vec![
            poly(3, ord, &[(&[1, 1, 0], 1), (&[0, 0, 1], -1)]),
            poly(3, ord, &[(&[0, 1, 1], 1), (&[1, 0, 0], -1)]),
            poly(3, ord, &[(&[1, 0, 1], 1), (&[0, 1, 0], -1)]),
        ];
        let gb1 = reduced_groebner_basis(&gens, ord).unwrap();
        let gb2 = reduced_groebner_basis(&gens, ord).unwrap();
        assert_eq!(gb1, gb2);
        assert!(is_groebner_basis(&gb1));
    }

    #[test]
    fn mixed_orders_error() {
        let a = poly(1, MonomialOrder::DegRevLex, &[(&[1], 1)]);
        assert!(matches!(
            reduced_groebner_basis(&[a], MonomialOrder::Lex),
            Err(GroebnerError::MixedOrders)
        ));
    }
}
