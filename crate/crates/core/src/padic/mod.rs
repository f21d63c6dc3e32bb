//! p-adic root decisions.
//!
//! A polynomial `f` has a root in `Q_p` of valuation `v` iff the rescaled
//! polynomial `f_v(y) = p^(-m) f(p^v y)` (with `m` chosen to make `f_v`
//! primitive at `p`) has a root in `Z_p^*`. Every decision here reduces to
//! that form and is certified by Hensel's lemma.

mod binomial;
mod hensel;
mod oracle;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use binomial::{decide_binomial, decide_binomial_with, BINOMIAL_WITNESS_LIMIT};
pub use hensel::{hensel_lift, hensel_lift_traced, HenselLift, HenselSeed};
pub use oracle::{bruteforce_decision, decide_bruteforce_qp, newton_valuations, OracleCaps};

use crate::bigmod::{self, is_prime, FactorBudget, Modulus};
use crate::error::{Error, Result};
use crate::sparsepoly::{gcd_dense, SparsePoly, Term};

/// The branch of a decision procedure that produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `x = 0` is a root (or `f` is identically zero).
    ZeroRoot,
    /// No valuation is compatible with the coefficient valuations.
    ValuationMismatch,
    /// Solvability of `x^d = alpha` in the cyclic group `(Z/p^ell)^*`.
    CyclicOrder,
    /// Solvability in `(Z/2^ell)^* = {+-1} x <5>`.
    TwoAdic,
    /// A residue satisfying the Hensel condition was found.
    HenselCertified,
    /// The residue tree was exhausted up to the resultant bound.
    Exhausted,
    /// `f` is a nonzero constant.
    Constant,
}

/// A certificate `(r, p^ell, v)`: `r` satisfies the Hensel condition for
/// `f_v` modulo `p^ell`, so `f` has a root `p^v * zeta` with
/// `zeta = r (mod p^(ell - ord_p f_v'(r)))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "crate::decimal::big")]
    pub residue: BigUint,
    pub modulus: Modulus,
    #[serde(with = "crate::decimal::big")]
    pub valuation_shift: BigInt,
}

impl Witness {
    /// Checks the certificate against `f`.
    pub fn verify(&self, f: &SparsePoly) -> Result<bool> {
        let (p, ell) = (self.modulus.p(), self.modulus.ell());
        let fv = rescale_at_valuation(f, p, &self.valuation_shift, Some(ell))?;
        if (&self.residue % p).is_zero() {
            return Ok(false);
        }
        Ok(HenselSeed::new(&fv, p, self.residue.clone(), ell).is_ok())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicDecision {
    pub feasible: bool,
    pub rule: Rule,
    pub witness: Option<Witness>,
}

impl PadicDecision {
    pub(crate) fn without_witness(feasible: bool, rule: Rule) -> Self {
        PadicDecision {
            feasible,
            rule,
            witness: None,
        }
    }
}

/// `p^(-m) f(p^v y)` with `m` the least valuation among its coefficients.
///
/// With `ell = Some(l)` terms whose coefficient is divisible by `p^l` are
/// dropped, which gives the image modulo `p^l` without ever forming huge
/// powers of `p`.
pub fn rescale_at_valuation(
    f: &SparsePoly,
    p: &BigUint,
    v: &BigInt,
    ell: Option<u32>,
) -> Result<SparsePoly> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let split: Vec<(BigInt, BigInt, &BigUint)> = f
        .terms()
        .iter()
        .map(|t| {
            let (k, unit) = bigmod::split_p_power(&t.coeff, p);
            let total = BigInt::from(k) + v * BigInt::from_biguint(Sign::Plus, t.exp.clone());
            (unit, total, &t.exp)
        })
        .collect();
    let m = split
        .iter()
        .map(|(_, k, _)| k)
        .min()
        .expect("nonempty")
        .clone();
    let mut terms = Vec::with_capacity(split.len());
    for (unit, k, e) in split {
        let gap = &k - &m;
        if let Some(l) = ell {
            if gap >= BigInt::from(l) {
                continue;
            }
        }
        let gap = gap
            .to_u32()
            .ok_or_else(|| Error::InstanceTooLarge(format!("p-power {gap} in rescaling")))?;
        terms.push(Term {
            coeff: unit * BigInt::from_biguint(Sign::Plus, p.pow(gap)),
            exp: e.clone(),
        });
    }
    Ok(SparsePoly::from_sorted_unchecked(terms))
}

/// Largest list [`roots_of_unity_mod_p`] will materialize.
pub const ROOT_LIST_CAP: u64 = 1 << 24;

/// An element of exact multiplicative order `m` in `F_p^*`, for `m | p - 1`.
///
/// Candidates `c = 2, 3, ...` are raised to `(p - 1) / m` and accepted once
/// no `omega^(m/q)` with `q | m` prime is 1.
pub fn primitive_root_of_unity(p: &BigUint, m: &BigUint) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let group = p - 1u32;
    if m.is_zero() || !group.is_multiple_of(m) {
        return Err(Error::NotDividingGroupOrder {
            m: m.to_string(),
            p_minus_one: group.to_string(),
        });
    }
    if m.is_one() {
        return Ok(BigUint::one());
    }
    let primes: Vec<BigUint> = bigmod::factor_with(m, &FactorBudget::default())?
        .primes()
        .cloned()
        .collect();
    let cofactor = &group / m;
    let mut c = BigUint::from(2u32);
    loop {
        let omega = c.modpow(&cofactor, p);
        if primes.iter().all(|q| !omega.modpow(&(m / q), p).is_one()) {
            return Ok(omega);
        }
        c += 1u32;
    }
}

/// All `m` residues `r` with `r^m = 1 (mod p)`, listed as `omega^0, omega^1,
/// ..., omega^(m-1)` for the element `omega` of [`primitive_root_of_unity`].
pub fn roots_of_unity_mod_p(p: &BigUint, m: &BigUint) -> Result<Vec<BigUint>> {
    let omega = primitive_root_of_unity(p, m)?;
    let count = m
        .to_u64()
        .filter(|&c| c <= ROOT_LIST_CAP)
        .ok_or_else(|| Error::InstanceTooLarge(format!("{m} roots of unity")))?;
    let mut out = Vec::with_capacity(count as usize);
    let mut r = BigUint::one();
    for _ in 0..count {
        out.push(r.clone());
        r = (r * &omega) % p;
    }
    Ok(out)
}

/// `f^2`: every root of `f` becomes a root of multiplicity at least two.
pub fn degenerate_reduction(f: &SparsePoly) -> SparsePoly {
    f.square()
}

/// Whether `f` is divisible by the square of a linear polynomial over
/// `Q_p`, i.e. whether `gcd(f, f')` has a root in `Q_p`.
pub fn has_degenerate_root_qp(f: &SparsePoly, p: &BigUint, caps: &OracleCaps) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let g = gcd_dense(f, &f.derivative(), caps.degree)?;
    if g.degree().is_none_or(|d| d.is_zero()) {
        return Ok(false);
    }
    decide_bruteforce_qp(&g, p, caps)
}

/// Decides feasibility of any sparse polynomial: binomials and monomials go
/// through [`decide_binomial`] (any degree), everything else through the
/// brute-force oracle under `caps`.
pub fn decide_sparse(f: &SparsePoly, p: &BigUint, caps: &OracleCaps) -> Result<PadicDecision> {
    let terms = f.terms();
    let signed = |e: &BigUint| BigInt::from_biguint(Sign::Plus, e.clone());
    match terms.len() {
        0 => {
            if !is_prime(p) {
                return Err(Error::NotPrime(p.to_string()));
            }
            Ok(PadicDecision::without_witness(true, Rule::ZeroRoot))
        }
        1 => decide_binomial(
            &terms[0].coeff,
            &signed(&terms[0].exp),
            &BigInt::zero(),
            &BigInt::zero(),
            p,
        ),
        2 => decide_binomial(
            &terms[1].coeff,
            &signed(&terms[1].exp),
            &terms[0].coeff,
            &signed(&terms[0].exp),
            p,
        ),
        _ => bruteforce_decision(f, p, caps),
    }
}
