//! Integer factorization under an explicit budget: trial division by the
//! cached prime table, then Pollard rho (Brent's cycle detection) on the
//! remaining composite cofactors.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::prime::{is_prime, small_primes};
use crate::error::{Error, Result};

/// Resource limits for [`factor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division covers every prime up to this bound (at most 10^6).
    pub trial_bound: u64,
    /// Total Pollard rho iterations allowed across all cofactors.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 1 << 22,
        }
    }
}

/// Prime factorization as `(prime, exponent)` pairs, sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a factorization from arbitrary `(prime, exponent)` pairs,
    /// merging repeats. The caller vouches for primality of the bases.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (BigUint, u32)>) -> Self {
        let mut out = Factorization::new();
        for (p, e) in pairs {
            out.push(p, e);
        }
        out
    }

    pub fn push(&mut self, p: BigUint, e: u32) {
        if e == 0 {
            return;
        }
        match self.factors.binary_search_by(|(q, _)| q.cmp(&p)) {
            Ok(i) => self.factors[i].1 += e,
            Err(i) => self.factors.insert(i, (p, e)),
        }
    }

    pub fn merge(&mut self, other: &Factorization) {
        for (p, e) in &other.factors {
            self.push(p.clone(), *e);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &(BigUint, u32)> {
        self.factors.iter()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The integer this factorization represents.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Factorization of Euler's totient of [`Self::value`].
    pub fn totient(&self, budget: &FactorBudget) -> Result<Factorization> {
        let mut out = Factorization::new();
        for (p, e) in &self.factors {
            out.push(p.clone(), e - 1);
            let p_minus_one = p - 1u32;
            if p_minus_one > BigUint::one() {
                out.merge(&factor_with(&p_minus_one, budget)?);
            }
        }
        Ok(out)
    }
}

/// Factors `n >= 2` with the default budget.
pub fn factor(n: &BigUint) -> Result<Factorization> {
    factor_with(n, &FactorBudget::default())
}

/// Factors `n >= 2`; fails with [`Error::FactorBudgetExceeded`] rather than
/// returning a partial or wrong answer.
pub fn factor_with(n: &BigUint, budget: &FactorBudget) -> Result<Factorization> {
    if *n < BigUint::from(2u32) {
        return Err(Error::Precondition(format!(
            "factor requires n >= 2, got {n}"
        )));
    }
    let mut out = Factorization::new();
    let mut rest = n.clone();
    let bound = budget.trial_bound.min(super::prime::SMALL_PRIME_BOUND);
    for &p in small_primes() {
        let p = p as u64;
        if p > bound {
            break;
        }
        if let Some(r) = rest.to_u64() {
            if p * p > r {
                break;
            }
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push(BigUint::from(p), e);
        }
    }
    if rest.is_one() {
        return Ok(out);
    }

    let mut remaining = budget.rho_iterations;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            out.push(m, 1);
            continue;
        }
        if let Some((root, k)) = perfect_power(&m) {
            for _ in 0..k {
                stack.push(root.clone());
            }
            continue;
        }
        let d = pollard_rho(&m, &mut remaining)
            .ok_or_else(|| Error::FactorBudgetExceeded(m.to_string()))?;
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    Ok(out)
}

/// Detects `m = r^k` with `k >= 2`, returning the smallest-base representation.
fn perfect_power(m: &BigUint) -> Option<(BigUint, u32)> {
    let bits = m.bits() as u32;
    for k in (2..=bits).rev() {
        let r = m.nth_root(k);
        if r > BigUint::one() && &r.pow(k) == m {
            return Some((r, k));
        }
    }
    None
}

/// Finds a nontrivial divisor of composite `n` with Brent's variant of
/// Pollard rho, spending at most `*remaining` iterations.
fn pollard_rho(n: &BigUint, remaining: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    const BATCH: u64 = 64;
    let one = BigUint::one();
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    for c in 1u32.. {
        let c = BigUint::from(c);
        let step = |v: &BigUint| (v * v + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            if *remaining < r {
                return None;
            }
            *remaining -= r;
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = BATCH.min(r - k);
                if *remaining < m {
                    return None;
                }
                *remaining -= m;
                for _ in 0..m {
                    y = step(&y);
                    q = (q * abs_diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            // The batched product hit every factor at once; replay singly.
            loop {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                ys = step(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect()
    }

    #[test]
    fn known_values() {
        assert_eq!(
            pairs(&factor(&30u32.into()).unwrap()),
            vec![(2, 1), (3, 1), (5, 1)]
        );
        assert_eq!(
            pairs(&factor(&30031u32.into()).unwrap()),
            vec![(59, 1), (509, 1)]
        );
        assert_eq!(pairs(&factor(&1024u32.into()).unwrap()), vec![(2, 10)]);
    }

    #[test]
    fn rejects_small_inputs() {
        assert!(factor(&1u32.into()).is_err());
        assert!(factor(&0u32.into()).is_err());
    }

    #[test]
    fn recomposes_exhaustively() {
        for n in 2..5000u32 {
            let f = factor(&n.into()).unwrap();
            assert_eq!(f.value(), BigUint::from(n));
            assert!(f.primes().all(is_prime));
        }
    }

    #[test]
    fn splits_products_of_large_primes() {
        // Both factors are above the trial-division table.
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(998_244_353u64);
        let n = &p * &q * &q;
        let f = factor(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.iter().cloned().collect::<Vec<_>>(), vec![(p, 1), (q, 2)]);

        let m61 = (BigUint::one() << 61) - 1u32;
        let big = &m61 * BigUint::from(4_294_967_311u64);
        assert_eq!(factor(&big).unwrap().value(), big);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let p = (BigUint::one() << 61) - 1u32;
        let q = (BigUint::one() << 89) - 1u32;
        let budget = FactorBudget {
            trial_bound: 1000,
            rho_iterations: 100,
        };
        match factor_with(&(p * q), &budget) {
            Err(Error::FactorBudgetExceeded(_)) => {}
            other => panic!("expected budget failure, got {other:?}"),
        }
    }

    #[test]
    fn totient_factorization() {
        let f = factor(&BigUint::from(360u32)).unwrap();
        // phi(360) = 96 = 2^5 * 3
        let t = f.totient(&FactorBudget::default()).unwrap();
        assert_eq!(t.value(), BigUint::from(96u32));
    }
}
