//! Sparse multivariate polynomials over the rationals, with monomial orders
//! and multivariate division.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exponent vector over the ring context's variables, dense.
pub type Exponents = Vec<u32>;

/// Supported monomial orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic: total degree first, ties broken by the
    /// last differing exponent, smaller exponent winning.
    #[default]
    DegRevLex,
    /// Pure lexicographic in variable order.
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => {
                let da: u64 = a.iter().map(|&x| u64::from(x)).sum();
                let db: u64 = b.iter().map(|&x| u64::from(x)).sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        match x.cmp(y) {
                            Ordering::Equal => continue,
                            Ordering::Less => return Ordering::Greater,
                            Ordering::Greater => return Ordering::Less,
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::DegRevLex => "degrevlex",
            MonomialOrder::Lex => "lex",
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degrevlex" => Ok(MonomialOrder::DegRevLex),
            "lex" => Ok(MonomialOrder::Lex),
            other => Err(format!("unknown monomial order {other:?}")),
        }
    }
}

/// A polynomial with exact rational coefficients and a tagged monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    terms: BTreeMap<Exponents, BigRational>,
    order: MonomialOrder,
    nvars: usize,
}

impl QPolynomial {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        QPolynomial {
            terms: BTreeMap::new(),
            order,
            nvars,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, BigRational)>>(
        nvars: usize,
        order: MonomialOrder,
        terms: I,
    ) -> Self {
        let mut p = QPolynomial::zero(nvars, order);
        for (mono, coeff) in terms {
            p.add_term(&mono, &coeff);
        }
        p
    }

    /// The monomial `x^exponents` with coefficient one.
    pub fn monomial(nvars: usize, order: MonomialOrder, exponents: Exponents) -> Self {
        QPolynomial::from_terms(nvars, order, [(exponents, BigRational::one())])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> + '_ {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mono: &[u32], coeff: &BigRational) {
        debug_assert_eq!(mono.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(mono) {
            Some(existing) => {
                *existing += coeff;
                if existing.is_zero() {
                    self.terms.remove(mono);
                }
            }
            None => {
                self.terms.insert(mono.to_vec(), coeff.clone());
            }
        }
    }

    /// Leading term under the tagged order.
    pub fn leading_term(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| self.order.cmp(a, b))
    }

    pub fn add(&self, other: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.add_term(mono, coeff);
        }
        out
    }

    pub fn sub(&self, other: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.add_term(mono, &-coeff.clone());
        }
        out
    }

    /// Adds `coeff * x^shift * other` into `self`.
    pub fn add_scaled_shifted(&mut self, other: &QPolynomial, shift: &[u32], coeff: &BigRational) {
        for (mono, c) in other.terms.clone() {
            let shifted: Exponents = mono.iter().zip(shift).map(|(a, b)| a + b).collect();
            self.add_term(&shifted, &(&c * coeff));
        }
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> QPolynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, lc)) => {
                let lc = lc.clone();
                let mut out = QPolynomial::zero(self.nvars, self.order);
                for (mono, coeff) in &self.terms {
                    out.terms.insert(mono.clone(), coeff / &lc);
                }
                out
            }
        }
    }

    /// True when the polynomial is a single term.
    pub fn is_term(&self) -> bool {
        self.terms.len() == 1
    }

    /// Renders against variable names, terms in descending order.
    pub fn render(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut monos: Vec<&Exponents> = self.terms.keys().collect();
        monos.sort_by(|a, b| self.order.cmp(b, a));
        let mut out = String::new();
        for (pos, mono) in monos.iter().enumerate() {
            let coeff = &self.terms[*mono];
            let negative = coeff < &BigRational::zero();
            let magnitude = if negative { -coeff.clone() } else { coeff.clone() };
            if pos == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono_str = render_monomial(mono, vars);
            if magnitude.is_one() {
                out.push_str(&mono_str);
            } else {
                let coeff_str = if magnitude.is_integer() {
                    magnitude.numer().to_string()
                } else {
                    format!("({}/{})", magnitude.numer(), magnitude.denom())
                };
                if mono_str == "1" {
                    out.push_str(&coeff_str);
                } else {
                    out.push_str(&format!("{coeff_str}*{mono_str}"));
                }
            }
        }
        out
    }
}

fn render_monomial(mono: &[u32], vars: &[String]) -> String {
    let parts: Vec<String> = mono
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x_{}", vars[i])
            } else {
                format!("x_{}^{}", vars[i], e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

pub(crate) fn monomial_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn monomial_div(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn monomial_lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Remainder of multivariate division of `f` by the family `gb`.
///
/// When `gb` is a Groebner basis under the shared order, the remainder is
/// the normal form: zero iff `f` lies in the generated ideal.
pub fn normal_form(f: &QPolynomial, gb: &[QPolynomial]) -> QPolynomial {
    let divisors: Vec<&QPolynomial> = gb.iter().filter(|g| !g.is_zero()).collect();
    let mut remainder = QPolynomial::zero(f.nvars(), f.order());
    let mut p = f.clone();
    'outer: while let Some((lt_mono, lt_coeff)) = p.leading_term() {
        let lt_mono = lt_mono.clone();
        let lt_coeff = lt_coeff.clone();
        for g in &divisors {
            let (g_mono, g_coeff) = g.leading_term().expect("nonzero divisor");
            if monomial_divides(g_mono, &lt_mono) {
                let shift = monomial_div(&lt_mono, g_mono);
                let factor = -(&lt_coeff / g_coeff);
                p.add_scaled_shifted(g, &shift, &factor);
                continue 'outer;
            }
        }
        remainder.add_term(&lt_mono, &lt_coeff);
        p.add_term(&lt_mono, &-lt_coeff);
    }
    remainder
}
