//! Primality testing: trial division by a cached prime table, then
//! Miller-Rabin with a fixed deterministic witness set extended by
//! pseudo-random witnesses for large inputs.

use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Upper bound of the cached prime table used for trial division.
pub const SMALL_PRIME_BOUND: u64 = 1_000_000;

/// First thirteen primes: a deterministic Miller-Rabin witness set for every
/// n < 3_317_044_064_679_887_385_961_981.
const DETERMINISTIC_WITNESSES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Number of extra pseudo-random witnesses above the deterministic range.
/// Each composite survives a random witness with probability at most 1/4,
/// so 32 extra rounds keep the error below 2^-64.
const EXTRA_WITNESSES: usize = 32;

fn deterministic_limit() -> &'static BigUint {
    static LIMIT: OnceLock<BigUint> = OnceLock::new();
    LIMIT.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

/// Primes up to [`SMALL_PRIME_BOUND`], sieved once.
pub fn small_primes() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| sieve_up_to(SMALL_PRIME_BOUND as usize))
}

/// Plain sieve of Eratosthenes, returning all primes `<= n`.
pub fn sieve_up_to(n: usize) -> Vec<u32> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u32);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Returns true iff `n` is prime.
///
/// Exact below the deterministic witness threshold (about 3.3e24); above it
/// the error probability is below 2^-64. The extra witnesses are derived
/// from `n` itself so the answer is a pure function of the input.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        if small <= SMALL_PRIME_BOUND {
            return small_primes().binary_search(&(small as u32)).is_ok();
        }
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }

    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;

    let is_witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                return false;
            }
            if x == one {
                return true;
            }
        }
        true
    };

    if DETERMINISTIC_WITNESSES
        .iter()
        .any(|&a| is_witness(&BigUint::from(a)))
    {
        return false;
    }
    if n < deterministic_limit() {
        return true;
    }

    let mut seed = [0u8; 32];
    for (slot, byte) in seed.iter_mut().zip(n.to_bytes_le()) {
        *slot ^= byte;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let two = BigUint::from(2u32);
    (0..EXTRA_WITNESSES).all(|_| {
        let a = rng.gen_biguint_range(&two, &n_minus_one);
        !is_witness(&a)
    })
}

/// Returns the smallest prime strictly greater than `n`.
pub fn next_prime(n: &BigUint) -> BigUint {
    let mut candidate = n + 1u32;
    if candidate <= BigUint::from(2u32) {
        return BigUint::from(2u32);
    }
    if candidate.is_even() {
        candidate += 1u32;
    }
    while !is_prime(&candidate) {
        candidate += 2u32;
    }
    candidate
}
