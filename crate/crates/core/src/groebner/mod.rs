//! Exact Groebner-basis machinery and the randomized specialization oracle.

mod buchberger;
mod oracle;
mod poly;

pub use buchberger::{is_groebner_basis, reduced_groebner_basis, GroebnerError};
pub use oracle::{
    contains_monomial, embed_complex, ideal_equal, is_monomial_ideal, reactant_ideal_basis,
    specialize, specialized_basis, specialized_generators, Answer, OracleError, Verdict, Witness,
};
pub use poly::{normal_form, Exponents, MonomialOrder, QPolynomial};
