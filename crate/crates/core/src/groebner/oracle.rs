//! Randomized rate-constant specialization oracle for ideal equality,
//! membership, and monomiality.
//!
//! Claims about steady-state ideals live over the rational-function field in
//! the rate constants. The oracle draws exact positive rationals for every
//! rate label from a seeded generator, computes reduced Groebner bases of
//! the specialized ideals, and reports a verdict only when every trial
//! agrees. Verdicts are randomized-oracle answers, not proofs; cross-trial
//! disagreement is surfaced as an error, never resolved silently.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use super::buchberger::{reduced_groebner_basis, GroebnerError};
use super::poly::{normal_form, Exponents, MonomialOrder, QPolynomial};
use crate::massaction::{reactant_support_generators, steady_state_system, RatePolynomial};
use crate::network::{Complex, Network, RingContext, UnknownName};

/// Largest numerator/denominator drawn for a specialized rate constant.
const RATE_DENOMINATOR_BOUND: u32 = 997;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("missing rate assignment for label {0:?}")]
    MissingLabel(String),
    #[error("rate constant {0:?} specialized to zero")]
    ZeroRate(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    UnknownName(#[from] UnknownName),
    #[error(
        "unlucky specialization: trials disagree ({0} vs {1}); rerun with more trials or a \
         different seed"
    )]
    TrialDisagreement(String, String),
    #[error("trials must be at least 1")]
    NoTrials,
}

/// Oracle answers across the three query kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Equal,
    NotEqual,
    Member,
    NotMember,
    Monomial,
    NotMonomial,
}

impl Answer {
    pub fn as_str(&self) -> &'static str {
        match self {
            Answer::Equal => "EQUAL",
            Answer::NotEqual => "NOT_EQUAL",
            Answer::Member => "MEMBER",
            Answer::NotMember => "NOT_MEMBER",
            Answer::Monomial => "MONOMIAL",
            Answer::NotMonomial => "NOT_MONOMIAL",
        }
    }

    /// Affirmative answers exit 0 at the command line.
    pub fn is_affirmative(&self) -> bool {
        matches!(self, Answer::Equal | Answer::Member | Answer::Monomial)
    }
}

/// A witnessed negative answer: the polynomial that failed membership and
/// its nonzero normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub trial: u32,
    pub polynomial: String,
    pub normal_form: String,
}

/// Oracle outcome plus the trial metadata needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub trials: u32,
    pub seed: u64,
    /// Per-trial rate assignments, in trial order.
    pub assignments: Vec<BTreeMap<String, BigRational>>,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn to_json(&self) -> serde_json::Value {
        let assignments: Vec<BTreeMap<String, String>> = self
            .assignments
            .iter()
            .map(|a| {
                a.iter()
                    .map(|(label, value)| (label.clone(), value.to_string()))
                    .collect()
            })
            .collect();
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "trial": w.trial,
                "polynomial": w.polynomial,
                "normal_form": w.normal_form,
            })
        });
        json!({
            "answer": self.answer.as_str(),
            "trials": self.trials,
            "seed": self.seed,
            "assignments": assignments,
            "witness": witness,
        })
    }
}

/// Substitutes exact rational values for the rate labels of `p`, collecting
/// like monomials over the context variables.
pub fn specialize(
    n: &Network,
    p: &RatePolynomial,
    assignment: &BTreeMap<String, BigRational>,
    ctx: &RingContext,
    order: MonomialOrder,
) -> Result<QPolynomial, OracleError> {
    use num_traits::Zero;
    let map = ctx.species_map(n)?;
    let mut out = QPolynomial::zero(ctx.num_vars(), order);
    for (i, mono, coeff) in p.terms() {
        let label = &n
            .reaction(i)
            .expect("rate polynomial references a reaction of its network")
            .rate_label;
        let value = assignment
            .get(label)
            .ok_or_else(|| OracleError::MissingLabel(label.clone()))?;
        if value.is_zero() {
            return Err(OracleError::ZeroRate(label.clone()));
        }
        let mut exponents: Exponents = vec![0; ctx.num_vars()];
        for (s, e) in mono.iter() {
            exponents[map[s]] = e;
        }
        out.add_term(
            &exponents,
            &(value * BigRational::from_integer(coeff.into())),
        );
    }
    Ok(out)
}

/// Embeds a complex into the context as an exponent vector.
pub fn embed_complex(
    n: &Network,
    c: &Complex,
    ctx: &RingContext,
) -> Result<Exponents, OracleError> {
    let map = ctx.species_map(n)?;
    let mut exponents = vec![0; ctx.num_vars()];
    for (s, e) in c.iter() {
        exponents[map[s]] = e;
    }
    Ok(exponents)
}

/// Uniform positive rational in `(0, 1]` with denominator at most 997.
fn draw_rate(rng: &mut ChaCha8Rng) -> BigRational {
    let den = rng.gen_range(1..=RATE_DENOMINATOR_BOUND);
    let num = rng.gen_range(1..=den);
    BigRational::new(num.into(), den.into())
}

fn draw_assignment(
    rng: &mut ChaCha8Rng,
    labels: &[String],
) -> BTreeMap<String, BigRational> {
    labels
        .iter()
        .map(|label| (label.clone(), draw_rate(rng)))
        .collect()
}

/// Specialized generators of the steady-state ideal of `n` inside `ctx`.
pub fn specialized_generators(
    n: &Network,
    assignment: &BTreeMap<String, BigRational>,
    ctx: &RingContext,
    order: MonomialOrder,
) -> Result<Vec<QPolynomial>, OracleError> {
    let sys = steady_state_system(n);
    sys.iter()
        .map(|(_, p)| specialize(n, p, assignment, ctx, order))
        .collect()
}

fn merge_trials(
    answers: Vec<(Answer, Option<Witness>)>,
    trials: u32,
    seed: u64,
    assignments: Vec<BTreeMap<String, BigRational>>,
) -> Result<Verdict, OracleError> {
    let first = answers[0].0;
    for (a, _) in &answers {
        if *a != first {
            return Err(OracleError::TrialDisagreement(
                first.as_str().to_string(),
                a.as_str().to_string(),
            ));
        }
    }
    let witness = answers.into_iter().find_map(|(_, w)| w);
    Ok(Verdict {
        answer: first,
        trials,
        seed,
        assignments,
        witness,
    })
}

/// Decides whether two networks generate the same steady-state ideal in the
/// union ring, by randomized specialization.
pub fn ideal_equal(
    n1: &Network,
    n2: &Network,
    trials: u32,
    seed: u64,
    order: MonomialOrder,
) -> Result<Verdict, OracleError> {
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    let ctx = RingContext::union(n1, n2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut answers = Vec::new();
    let mut assignments = Vec::new();
    for trial in 0..trials {
        let assignment = draw_assignment(&mut rng, ctx.rate_labels());
        let gens1 = specialized_generators(n1, &assignment, &ctx, order)?;
        let gens2 = specialized_generators(n2, &assignment, &ctx, order)?;
        let gb1 = reduced_groebner_basis(&gens1, order)?;
        let gb2 = reduced_groebner_basis(&gens2, order)?;

        let mut witness = None;
        'check: for (gens, gb) in [(&gens1, &gb2), (&gens2, &gb1)] {
            for g in gens.iter() {
                let nf = normal_form(g, gb);
                if !nf.is_zero() {
                    witness = Some(Witness {
                        trial,
                        polynomial: g.render(ctx.variables()),
                        normal_form: nf.render(ctx.variables()),
                    });
                    break 'check;
                }
            }
        }
        let answer = if witness.is_none() {
            Answer::Equal
        } else {
            Answer::NotEqual
        };
        answers.push((answer, witness));
        assignments.push(assignment);
    }
    merge_trials(answers, trials, seed, assignments)
}

/// Decides membership of the monomial `x^m` in the steady-state ideal of `n`.
pub fn contains_monomial(
    n: &Network,
    m: &Complex,
    trials: u32,
    seed: u64,
    order: MonomialOrder,
) -> Result<Verdict, OracleError> {
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    let ctx = RingContext::for_network(n);
    let exponents = embed_complex(n, m, &ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut answers = Vec::new();
    let mut assignments = Vec::new();
    for trial in 0..trials {
        let assignment = draw_assignment(&mut rng, ctx.rate_labels());
        let gens = specialized_generators(n, &assignment, &ctx, order)?;
        let gb = reduced_groebner_basis(&gens, order)?;
        let target = QPolynomial::monomial(ctx.num_vars(), order, exponents.clone());
        let nf = normal_form(&target, &gb);
        if nf.is_zero() {
            answers.push((Answer::Member, None));
        } else {
            answers.push((
                Answer::NotMember,
                Some(Witness {
                    trial,
                    polynomial: target.render(ctx.variables()),
                    normal_form: nf.render(ctx.variables()),
                }),
            ));
        }
        assignments.push(assignment);
    }
    merge_trials(answers, trials, seed, assignments)
}

/// The reduced basis of the monomial ideal generated by the reactants.
pub fn reactant_ideal_basis(
    n: &Network,
    ctx: &RingContext,
    order: MonomialOrder,
) -> Result<Vec<QPolynomial>, OracleError> {
    let gens: Vec<QPolynomial> = reactant_support_generators(n)
        .iter()
        .map(|y| {
            embed_complex(n, y, ctx)
                .map(|e| QPolynomial::monomial(ctx.num_vars(), order, e))
        })
        .collect::<Result<_, _>>()?;
    Ok(reduced_groebner_basis(&gens, order)?)
}

/// Decides whether the steady-state ideal is monomial: every trial's reduced
/// basis must consist of monomials and coincide with the reduced basis of
/// the reactant-monomial ideal.
pub fn is_monomial_ideal(
    n: &Network,
    trials: u32,
    seed: u64,
    order: MonomialOrder,
) -> Result<Verdict, OracleError> {
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    let ctx = RingContext::for_network(n);
    let reactant_basis = reactant_ideal_basis(n, &ctx, order)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut answers = Vec::new();
    let mut assignments = Vec::new();
    for trial in 0..trials {
        let assignment = draw_assignment(&mut rng, ctx.rate_labels());
        let gens = specialized_generators(n, &assignment, &ctx, order)?;
        let gb = reduced_groebner_basis(&gens, order)?;
        let all_monomials = gb.iter().all(QPolynomial::is_term);
        if all_monomials && gb == reactant_basis {
            answers.push((Answer::Monomial, None));
        } else {
            let culprit = gb
                .iter()
                .find(|g| !g.is_term())
                .or_else(|| gb.first())
                .map(|g| g.render(ctx.variables()))
                .unwrap_or_else(|| "0".to_string());
            answers.push((
                Answer::NotMonomial,
                Some(Witness {
                    trial,
                    polynomial: culprit,
                    normal_form: String::new(),
                }),
            ));
        }
        assignments.push(assignment);
    }
    merge_trials(answers, trials, seed, assignments)
}

/// Reduced basis of the specialized steady-state ideal for one trial, along
/// with the assignment used; exposed for basis inspection and self-checks.
pub fn specialized_basis(
    n: &Network,
    trial: u32,
    seed: u64,
    order: MonomialOrder,
) -> Result<(BTreeMap<String, BigRational>, Vec<QPolynomial>), OracleError> {
    let ctx = RingContext::for_network(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = draw_assignment(&mut rng, ctx.rate_labels());
    for _ in 0..trial {
        assignment = draw_assignment(&mut rng, ctx.rate_labels());
    }
    let gens = specialized_generators(n, &assignment, &ctx, order)?;
    let gb = reduced_groebner_basis(&gens, order)?;
    Ok((assignment, gb))
}
