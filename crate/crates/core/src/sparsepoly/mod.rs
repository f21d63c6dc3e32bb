//! Sparse univariate integer polynomials.
//!
//! A [`SparsePoly`] is a list of `(coefficient, exponent)` terms with
//! nonzero coefficients and strictly increasing exponents. Exponents are
//! [`BigUint`], so `x^(2^100) - 3` is a two-term polynomial like any other;
//! nothing in this module ever materializes a dense coefficient vector
//! except the explicitly capped routines in [`dense`].

pub mod dense;
mod format;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bigmod::{ceil_log2, reduce};
use crate::error::{Error, Result};

pub use dense::{gcd_dense, resultant_dense, squarefree_part, DEFAULT_DEGREE_CAP};
pub use format::{parse_expr, PolyFile};

/// Default cap on intermediate term counts in [`SparsePoly::exact_div`].
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigInt,
    pub exp: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparsePoly {
    terms: Vec<Term>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, BigUint::zero())
    }

    /// `c * x^e`.
    pub fn monomial(c: impl Into<BigInt>, e: impl Into<BigUint>) -> Self {
        let coeff = c.into();
        if coeff.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: vec![Term {
                coeff,
                exp: e.into(),
            }],
        }
    }

    /// `x^m - 1`.
    pub fn x_pow_minus_one(m: impl Into<BigUint>) -> Self {
        Self::monomial(1, m) - Self::one()
    }

    /// Builds a polynomial from terms in any order, merging equal exponents
    /// and dropping zero coefficients.
    pub fn from_terms<C, E>(terms: impl IntoIterator<Item = (C, E)>) -> Self
    where
        C: Into<BigInt>,
        E: Into<BigUint>,
    {
        let mut acc: BTreeMap<BigUint, BigInt> = BTreeMap::new();
        for (c, e) in terms {
            *acc.entry(e.into()).or_default() += c.into();
        }
        Self::from_map(acc)
    }

    fn from_map(map: BTreeMap<BigUint, BigInt>) -> Self {
        SparsePoly {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(exp, coeff)| Term { coeff, exp })
                .collect(),
        }
    }

    /// Builds from terms already sorted by strictly increasing exponent with
    /// nonzero coefficients.
    pub(crate) fn from_sorted_unchecked(terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].exp < w[1].exp));
        debug_assert!(terms.iter().all(|t| !t.coeff.is_zero()));
        SparsePoly { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<&BigUint> {
        self.terms.last().map(|t| &t.exp)
    }

    /// Smallest exponent present, i.e. the multiplicity of the root 0.
    pub fn low_degree(&self) -> Option<&BigUint> {
        self.terms.first().map(|t| &t.exp)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.last().map(|t| &t.coeff)
    }

    pub fn constant_term(&self) -> BigInt {
        match self.terms.first() {
            Some(t) if t.exp.is_zero() => t.coeff.clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn coeff_of(&self, e: &BigUint) -> BigInt {
        self.terms
            .binary_search_by(|t| t.exp.cmp(e))
            .map(|i| self.terms[i].coeff.clone())
            .unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * c,
                    exp: t.exp.clone(),
                })
                .collect(),
        }
    }

    /// Multiplies by `x^e`.
    pub fn shift(&self, e: &BigUint) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.clone(),
                    exp: &t.exp + e,
                })
                .collect(),
        }
    }

    /// Divides out the largest power of `x` dividing the polynomial,
    /// returning that power and the quotient.
    pub fn strip_x_power(&self) -> (BigUint, SparsePoly) {
        match self.low_degree() {
            None => (BigUint::zero(), Self::zero()),
            Some(low) => {
                let low = low.clone();
                let terms = self
                    .terms
                    .iter()
                    .map(|t| Term {
                        coeff: t.coeff.clone(),
                        exp: &t.exp - &low,
                    })
                    .collect();
                (low, SparsePoly { terms })
            }
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms
            .iter()
            .fold(BigInt::zero(), |g, t| g.gcd(&t.coeff))
    }

    /// Divides by the content and normalizes the leading coefficient to be
    /// positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_some_and(|lc| lc.is_negative()) {
            c = -c;
        }
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff / &c,
                    exp: t.exp.clone(),
                })
                .collect(),
        }
    }

    /// `f(x) mod m`, each term by modular powering.
    pub fn eval_mod(&self, x: &BigInt, m: &BigUint) -> Result<BigUint> {
        if *m < BigUint::from(2u32) {
            return Err(Error::InvalidModulus(m.to_string()));
        }
        let base = reduce(x, m);
        let mut acc = BigUint::zero();
        for t in &self.terms {
            let c = reduce(&t.coeff, m);
            acc += c * base.modpow(&t.exp, m);
        }
        Ok(acc % m)
    }

    /// Exact evaluation at an integer point. Only sensible for small degrees.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |acc, t| {
            let e = u32::try_from(&t.exp).expect("exponent too large for exact evaluation");
            acc + &t.coeff * x.pow(e)
        })
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|t| !t.exp.is_zero())
                .map(|t| Term {
                    coeff: &t.coeff * BigInt::from_biguint(Sign::Plus, t.exp.clone()),
                    exp: &t.exp - 1u32,
                })
                .collect(),
        }
    }

    /// `x^deg(f) * f(1/x)`.
    pub fn reverse(&self) -> Result<Self> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial)?.clone();
        Ok(SparsePoly {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|t| Term {
                    coeff: t.coeff.clone(),
                    exp: &deg - &t.exp,
                })
                .collect(),
        })
    }

    /// Exact quotient `self / divisor` with the default term cap.
    pub fn exact_div(&self, divisor: &SparsePoly) -> Result<SparsePoly> {
        self.exact_div_capped(divisor, DEFAULT_TERM_CAP)
    }

    /// Sparse long division from the top term. Fails with
    /// [`Error::InexactDivision`] on a nonzero remainder or non-integral
    /// quotient coefficient, and with [`Error::TermCapExceeded`] if the
    /// working remainder or quotient grows past `term_cap` terms.
    pub fn exact_div_capped(&self, divisor: &SparsePoly, term_cap: usize) -> Result<SparsePoly> {
        let (lead_exp, lead_coeff) = match divisor.terms.last() {
            None => return Err(Error::DivisionByZero),
            Some(t) => (&t.exp, &t.coeff),
        };
        let mut rem: BTreeMap<BigUint, BigInt> = self
            .terms
            .iter()
            .map(|t| (t.exp.clone(), t.coeff.clone()))
            .collect();
        let mut quotient: Vec<Term> = Vec::new();
        while let Some((exp, coeff)) = rem.pop_last() {
            if exp < *lead_exp {
                return Err(Error::InexactDivision);
            }
            let (q, r) = coeff.div_rem(lead_coeff);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            let shift = &exp - lead_exp;
            for t in &divisor.terms[..divisor.terms.len() - 1] {
                let delta = &q * &t.coeff;
                match rem.entry(&t.exp + &shift) {
                    Entry::Occupied(mut slot) => {
                        *slot.get_mut() -= delta;
                        if slot.get().is_zero() {
                            slot.remove();
                        }
                    }
                    Entry::Vacant(slot) => {
                        slot.insert(-delta);
                    }
                }
            }
            quotient.push(Term {
                coeff: q,
                exp: shift,
            });
            if rem.len() > term_cap || quotient.len() > term_cap {
                return Err(Error::TermCapExceeded(term_cap));
            }
        }
        quotient.reverse();
        Ok(SparsePoly { terms: quotient })
    }

    /// Sparse bit size: sum over terms of
    /// `1 + ceil(log2(2 + |c|)) + ceil(log2(2 + e))`.
    pub fn size(&self) -> u64 {
        self.terms
            .iter()
            .map(|t| 1 + ceil_log2(&(t.coeff.magnitude() + 2u32)) + ceil_log2(&(&t.exp + 2u32)))
            .sum()
    }

    /// [`Self::size`] plus `ceil(log2(2 + p))`.
    pub fn size_p(&self, p: &BigUint) -> u64 {
        self.size() + ceil_log2(&(p + 2u32))
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let (a, b) = (&self.terms[i], &rhs.terms[j]);
            match a.exp.cmp(&b.exp) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a.coeff + &b.coeff;
                    if !c.is_zero() {
                        out.push(Term {
                            coeff: c,
                            exp: a.exp.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        SparsePoly { terms: out }
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        self.scale(&BigInt::from(-1))
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;

    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;

    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut acc: BTreeMap<BigUint, BigInt> = BTreeMap::new();
        for a in &self.terms {
            for b in &rhs.terms {
                *acc.entry(&a.exp + &b.exp).or_default() += &a.coeff * &b.coeff;
            }
        }
        SparsePoly::from_map(acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for SparsePoly {
            type Output = SparsePoly;

            fn $method(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        -&self
    }
}

impl fmt::Display for SparsePoly {
    /// Highest-degree term first, e.g. `3*x^50 - 2*x^3 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().rev().enumerate() {
            let mag = t.coeff.magnitude();
            if i == 0 {
                if t.coeff.is_negative() {
                    f.write_str("-")?;
                }
            } else if t.coeff.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if t.exp.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if t.exp.is_one() {
                f.write_str("x")?;
            } else {
                write!(f, "x^{}", t.exp)?;
            }
        }
        Ok(())
    }
}
