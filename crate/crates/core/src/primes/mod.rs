//! Primes `p = 1 + k Q_n`, and sieve-based prime counts in residue classes.

mod density;

use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use density::{
    logarithmic_integral, prime_density_experiment, prime_residue_counts, DensityReport,
    DEFAULT_SIEVE_CAP,
};

use crate::bigmod::{is_prime, primorial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeStrategy {
    /// Uniform `k` in `1..=2^(n^C)`, at most `9 n^C'` draws.
    FphSample,
    /// `k = 1, 2, ...` up to `k_max`.
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSearch {
    pub strategy: PrimeStrategy,
    pub fph_c: u32,
    pub fph_c_prime: u32,
    pub k_max: u64,
}

impl Default for PrimeSearch {
    fn default() -> Self {
        PrimeSearch {
            strategy: PrimeStrategy::FphSample,
            fph_c: 2,
            fph_c_prime: 2,
            k_max: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionPrime {
    pub n: usize,
    #[serde(with = "crate::decimal::big")]
    pub q_n: BigUint,
    #[serde(with = "crate::decimal::big")]
    pub k: BigUint,
    #[serde(with = "crate::decimal::big")]
    pub p: BigUint,
    pub trials_used: u64,
}

impl ProgressionPrime {
    /// Rechecks `p = 1 + k Q_n` and primality.
    pub fn is_valid(&self) -> bool {
        self.q_n == primorial(self.n) && self.p == &self.k * &self.q_n + 1u32 && is_prime(&self.p)
    }
}

/// Finds a prime `p = 1 + k Q_n`.
pub fn find_prime_in_progression<R: Rng + ?Sized>(
    n: usize,
    search: &PrimeSearch,
    rng: &mut R,
) -> Result<ProgressionPrime> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let q = primorial(n);
    let found = |k: BigUint, trials: u64| {
        let p = &k * &q + 1u32;
        is_prime(&p).then(|| ProgressionPrime {
            n,
            q_n: q.clone(),
            k,
            p,
            trials_used: trials,
        })
    };
    match search.strategy {
        PrimeStrategy::Scan => {
            for k in 1..=search.k_max {
                if let Some(hit) = found(BigUint::from(k), k) {
                    return Ok(hit);
                }
            }
            Err(Error::PrimeSearchExhausted {
                trials: search.k_max,
            })
        }
        PrimeStrategy::FphSample => {
            let exponent = (n as u64)
                .checked_pow(search.fph_c)
                .ok_or_else(|| Error::InstanceTooLarge(format!("n^C with n = {n}")))?;
            let trials = (n as u64)
                .checked_pow(search.fph_c_prime)
                .and_then(|t| t.checked_mul(9))
                .ok_or_else(|| Error::InstanceTooLarge(format!("9 n^C' with n = {n}")))?;
            let upper = (BigUint::one() << exponent) + 1u32;
            let one = BigUint::one();
            for t in 1..=trials {
                let k = rng.gen_biguint_range(&one, &upper);
                if let Some(hit) = found(k, t) {
                    return Ok(hit);
                }
            }
            Err(Error::PrimeSearchExhausted { trials })
        }
    }
}
