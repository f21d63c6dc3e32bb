//! Multiplicative order computation behind a pluggable backend.
//!
//! The decision procedures only ever ask "what is the order of `a` modulo
//! `m`, given a known multiple of it". [`ClassicalOrder`] answers by
//! stripping prime factors off the multiple; other backends (for example a
//! simulated period-finding circuit) can implement [`OrderBackend`] and be
//! passed wherever an order is needed.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};

use super::factor::{factor_with, FactorBudget, Factorization};
use crate::error::{Error, Result};

/// Source of multiplicative orders in `(Z/mZ)^*`.
pub trait OrderBackend: Sync {
    /// Order of the unit `a` modulo `m`. `multiple` is the factorization of
    /// some integer known to be divisible by the order, usually `#(Z/mZ)^*`.
    fn order(&self, a: &BigUint, m: &BigUint, multiple: &Factorization) -> Result<BigUint>;
}

/// Order finding by prime stripping: start from the known multiple and
/// divide out each prime while the power stays the identity.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassicalOrder;

impl OrderBackend for ClassicalOrder {
    fn order(&self, a: &BigUint, m: &BigUint, multiple: &Factorization) -> Result<BigUint> {
        if *m < BigUint::from(2u32) {
            return Err(Error::InvalidModulus(m.to_string()));
        }
        let a = a % m;
        if !a.gcd(m).is_one() {
            return Err(Error::NotCoprime {
                a: a.to_string(),
                m: m.to_string(),
            });
        }
        let one = BigUint::one();
        let mut t = multiple.value();
        if !a.modpow(&t, m).is_one() && !m.is_one() {
            return Err(Error::Precondition(format!(
                "{t} is not a multiple of the order of {a} mod {m}"
            )));
        }
        for (q, e) in multiple.iter() {
            for _ in 0..*e {
                let candidate = &t / q;
                if a.modpow(&candidate, m) == one {
                    t = candidate;
                } else {
                    break;
                }
            }
        }
        Ok(t)
    }
}

/// Least `t >= 1` with `a^t = 1 (mod m)`, computed with the classical
/// backend and the default factoring budget.
pub fn multiplicative_order(a: &BigInt, m: &BigUint) -> Result<BigUint> {
    multiplicative_order_with(&ClassicalOrder, a, m, &FactorBudget::default())
}

pub fn multiplicative_order_with(
    backend: &dyn OrderBackend,
    a: &BigInt,
    m: &BigUint,
    budget: &FactorBudget,
) -> Result<BigUint> {
    if *m < BigUint::from(2u32) {
        return Err(Error::InvalidModulus(m.to_string()));
    }
    let residue = super::reduce(a, m);
    if !residue.gcd(m).is_one() {
        return Err(Error::NotCoprime {
            a: a.to_string(),
            m: m.to_string(),
        });
    }
    let group = factor_with(m, budget)?.totient(budget)?;
    backend.order(&residue, m, &group)
}

/// Order of `a` in `(Z/p^ell Z)^*` for a prime `p`, avoiding a factorization
/// of `p^ell` itself.
pub fn order_mod_prime_power(
    backend: &dyn OrderBackend,
    a: &BigInt,
    p: &BigUint,
    ell: u32,
    budget: &FactorBudget,
) -> Result<BigUint> {
    let m = p.pow(ell);
    let residue = super::reduce(a, &m);
    if (&residue % p) == BigUint::from(0u32) {
        return Err(Error::NotCoprime {
            a: a.abs().to_string(),
            m: m.to_string(),
        });
    }
    let group = Factorization::from_pairs([(p.clone(), ell)]).totient(budget)?;
    backend.order(&residue, &m, &group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmod::mod_pow;
    use num_traits::ToPrimitive;

    fn brute_order(a: u64, m: u64) -> u64 {
        let mut x = a % m;
        let mut t = 1;
        while x != 1 {
            x = x * a % m;
            t += 1;
        }
        t
    }

    #[test]
    fn known_values() {
        assert_eq!(
            multiplicative_order(&2.into(), &7u32.into()).unwrap(),
            3u32.into()
        );
        assert_eq!(
            multiplicative_order(&5.into(), &8u32.into()).unwrap(),
            2u32.into()
        );
        assert_eq!(
            multiplicative_order(&1.into(), &97u32.into()).unwrap(),
            1u32.into()
        );
    }

    #[test]
    fn rejects_non_units() {
        assert!(matches!(
            multiplicative_order(&6.into(), &9u32.into()),
            Err(Error::NotCoprime { .. })
        ));
        assert!(multiplicative_order(&1.into(), &1u32.into()).is_err());
    }

    #[test]
    fn negative_base_is_reduced() {
        // -1 mod 7 = 6 has order 2.
        assert_eq!(
            multiplicative_order(&(-1).into(), &7u32.into()).unwrap(),
            2u32.into()
        );
    }

    #[test]
    fn exhaustive_small_moduli() {
        for m in 2..=1000u64 {
            let mb = BigUint::from(m);
            for a in 1..m {
                if a.gcd(&m) != 1 {
                    continue;
                }
                let t = multiplicative_order(&BigInt::from(a), &mb).unwrap();
                let tv = t.to_u64().unwrap();
                assert_eq!(mod_pow(&a.into(), &t, &mb).unwrap(), BigUint::one());
                // The least exponent found by brute force is the order, so
                // no proper divisor can give the identity.
                assert_eq!(tv, brute_order(a, m), "a={a} m={m}");
            }
        }
    }

    #[test]
    fn prime_power_orders() {
        let p = BigUint::from(7u32);
        for a in [2i64, 3, 10, 48] {
            let t =
                order_mod_prime_power(&ClassicalOrder, &a.into(), &p, 2, &FactorBudget::default())
                    .unwrap();
            assert_eq!(t.to_u64().unwrap(), brute_order(a as u64, 49));
        }
    }
}
