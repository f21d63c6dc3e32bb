use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{PadicDecision, Rule, Witness};
use crate::bigmod::{
    decompose_2adic_unit, is_prime, mod_inverse, ord_p_unchecked, order_mod_prime_power,
    solvable_in_cyclic, split_p_power, ClassicalOrder, FactorBudget, Modulus, OrderBackend,
};
use crate::error::{Error, Result};

/// Witnesses are searched for by enumeration only when `p^ell` is at most
/// this large.
pub const BINOMIAL_WITNESS_LIMIT: u64 = 1 << 16;

/// Decides whether `c1 x^a1 + c2 x^a2` has a root in `Q_p`, using the
/// classical order backend and the default factoring budget.
pub fn decide_binomial(
    c1: &BigInt,
    a1: &BigInt,
    c2: &BigInt,
    a2: &BigInt,
    p: &BigUint,
) -> Result<PadicDecision> {
    decide_binomial_with(&ClassicalOrder, &FactorBudget::default(), c1, a1, c2, a2, p)
}

pub fn decide_binomial_with(
    backend: &dyn OrderBackend,
    budget: &FactorBudget,
    c1: &BigInt,
    a1: &BigInt,
    c2: &BigInt,
    a2: &BigInt,
    p: &BigUint,
) -> Result<PadicDecision> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if a1.is_negative() || a2.is_negative() {
        return Err(Error::Precondition("exponents must be non-negative".into()));
    }
    // Collapse to at most two distinct nonzero terms, highest exponent first.
    let mut terms: Vec<(BigInt, BigInt)> = Vec::new();
    for (c, a) in [(c1, a1), (c2, a2)] {
        if c.is_zero() {
            continue;
        }
        match terms.iter_mut().find(|(_, e)| e == a) {
            Some(t) => t.0 += c,
            None => terms.push((c.clone(), a.clone())),
        }
    }
    terms.retain(|(c, _)| !c.is_zero());
    terms.sort_by(|x, y| y.1.cmp(&x.1));
    let (hi, lo) = match terms.as_slice() {
        [] => return Ok(PadicDecision::without_witness(true, Rule::ZeroRoot)),
        [(_, a)] => {
            return Ok(if a.is_zero() {
                PadicDecision::without_witness(false, Rule::Constant)
            } else {
                PadicDecision::without_witness(true, Rule::ZeroRoot)
            })
        }
        [hi, lo] => (hi, lo),
        _ => unreachable!("at most two terms"),
    };
    if !lo.1.is_zero() {
        return Ok(PadicDecision::without_witness(true, Rule::ZeroRoot));
    }
    let d = hi.1.magnitude().clone();
    let (c1, c2) = (&hi.0, &lo.0);

    // A root x = p^v u with u a unit needs d v = ord_p(-c2 / c1).
    let (k1, u1) = split_p_power(c1, p);
    let (k2, u2) = split_p_power(c2, p);
    let diff = BigInt::from(k2) - BigInt::from(k1);
    let d_signed = BigInt::from_biguint(Sign::Plus, d.clone());
    let (v, r) = diff.div_rem(&d_signed);
    if !r.is_zero() {
        return Ok(PadicDecision::without_witness(
            false,
            Rule::ValuationMismatch,
        ));
    }

    let ord_d = ord_p_unchecked(&d_signed, p).finite().expect("d > 0");
    let ell = u32::try_from(1 + 2 * ord_d).expect("valuation of an exponent fits");
    let modulus = Modulus::new(p.clone(), ell)?;
    let pl = modulus.value();
    let u1_inv = mod_inverse(&u1, pl).expect("unit");
    let alpha = crate::bigmod::reduce(&(-&u2 * BigInt::from(u1_inv)), pl);
    let alpha_signed = BigInt::from_biguint(Sign::Plus, alpha.clone());

    let two = BigUint::from(2u32);
    let (feasible, rule) = if *p == two && ell >= 3 {
        let (a, b) = decompose_2adic_unit(&alpha_signed, ell)?;
        let cyclic = BigUint::one() << (ell - 2);
        let order_of_power = &cyclic / b.gcd(&cyclic);
        let feasible =
            d.is_odd() || (a == 0 && solvable_in_cyclic(&order_of_power, &d_signed, &cyclic));
        (feasible, Rule::TwoAdic)
    } else {
        let group = p.pow(ell - 1) * (p - 1u32);
        let order = if group.is_one() {
            BigUint::one()
        } else {
            order_mod_prime_power(backend, &alpha_signed, p, ell, budget)?
        };
        (
            solvable_in_cyclic(&order, &d_signed, &group),
            Rule::CyclicOrder,
        )
    };

    let witness = if feasible {
        find_unit_root(&alpha, &d, &modulus).map(|residue| Witness {
            residue,
            modulus: modulus.clone(),
            valuation_shift: v,
        })
    } else {
        None
    };
    Ok(PadicDecision {
        feasible,
        rule,
        witness,
    })
}

/// A unit `y` with `y^d = alpha (mod p^ell)`, by enumeration when the
/// modulus is small.
fn find_unit_root(alpha: &BigUint, d: &BigUint, modulus: &Modulus) -> Option<BigUint> {
    let pl = modulus.value();
    if *pl > BigUint::from(BINOMIAL_WITNESS_LIMIT) {
        return None;
    }
    let p = modulus.p();
    let group = pl / p * (p - 1u32);
    let e = d % &group;
    let mut y = BigUint::one();
    while y < *pl {
        if !(&y % p).is_zero() && y.modpow(&e, pl) == *alpha {
            return Some(y);
        }
        y += 1u32;
    }
    None
}
