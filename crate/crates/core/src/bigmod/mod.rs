//! Arbitrary-precision integer and modular arithmetic.
//!
//! Integers are [`num_bigint::BigInt`] (signed) and [`num_bigint::BigUint`]
//! (moduli, residues, exponents and orders). Every function here is a pure
//! function of its inputs; randomized ones take the RNG explicitly.

mod factor;
mod order;
mod prime;

use std::fmt;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub use factor::{factor, factor_with, FactorBudget, Factorization};
pub use order::{
    multiplicative_order, multiplicative_order_with, order_mod_prime_power, ClassicalOrder,
    OrderBackend,
};
pub use prime::{is_prime, next_prime, sieve_up_to, small_primes};

use crate::error::{Error, Result};

/// p-adic valuation of an integer: finite, or infinite for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("infinity"),
        }
    }
}

/// A prime-power modulus `p^ell`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: BigUint,
    ell: u32,
    value: BigUint,
}

impl Modulus {
    pub fn new(p: BigUint, ell: u32) -> Result<Self> {
        if !is_prime(&p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if ell == 0 {
            return Err(Error::Precondition(
                "modulus exponent must be positive".into(),
            ));
        }
        let value = p.pow(ell);
        Ok(Modulus { p, ell, value })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ModulusRepr {
    #[serde(with = "crate::decimal::big")]
    p: BigUint,
    ell: u32,
}

impl serde::Serialize for Modulus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModulusRepr {
            p: self.p.clone(),
            ell: self.ell,
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Modulus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ModulusRepr::deserialize(d)?;
        Modulus::new(repr.p, repr.ell).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.ell)
    }
}

/// `a mod m` as a residue in `[0, m)`.
pub fn reduce(a: &BigInt, m: &BigUint) -> BigUint {
    let m_signed = BigInt::from_biguint(Sign::Plus, m.clone());
    a.mod_floor(&m_signed).magnitude().clone()
}

fn check_prime(p: &BigUint) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

/// Largest `v` with `p^v | n`; infinite for `n = 0`.
pub fn ord_p(n: &BigInt, p: &BigUint) -> Result<Valuation> {
    check_prime(p)?;
    Ok(ord_p_unchecked(n, p))
}

pub(crate) fn ord_p_unchecked(n: &BigInt, p: &BigUint) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let mut m = n.magnitude().clone();
    if let Some(2) = p.to_u32() {
        return Valuation::Finite(m.trailing_zeros().unwrap_or(0));
    }
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        m = q;
        v += 1;
    }
}

/// Valuation of a nonzero integer, together with its `p`-free part.
pub(crate) fn split_p_power(n: &BigInt, p: &BigUint) -> (u64, BigInt) {
    let v = ord_p_unchecked(n, p).finite().expect("nonzero input");
    let unit = n / BigInt::from_biguint(Sign::Plus, p.pow(v as u32));
    (v, unit)
}

/// `b^e mod m` by binary exponentiation, as a residue in `[0, m)`.
pub fn mod_pow(b: &BigInt, e: &BigUint, m: &BigUint) -> Result<BigUint> {
    if *m < BigUint::from(2u32) {
        return Err(Error::InvalidModulus(m.to_string()));
    }
    Ok(reduce(b, m).modpow(e, m))
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigUint) -> Option<BigUint> {
    let m_signed = BigInt::from_biguint(Sign::Plus, m.clone());
    let ext = reduce(a, m).to_bigint_signed().extended_gcd(&m_signed);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(reduce(&ext.x, m))
}

trait ToSigned {
    fn to_bigint_signed(&self) -> BigInt;
}

impl ToSigned for BigUint {
    fn to_bigint_signed(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.clone())
    }
}

/// The first `n` primes, in increasing order.
pub fn first_primes(n: usize) -> Vec<u64> {
    let mut bound = 16usize;
    loop {
        let primes = sieve_up_to(bound);
        if primes.len() >= n {
            return primes.into_iter().take(n).map(u64::from).collect();
        }
        bound *= 2;
    }
}

/// The primorial `Q_n`: product of the first `n` primes (`Q_0 = 1`).
pub fn primorial(n: usize) -> BigUint {
    first_primes(n)
        .into_iter()
        .fold(BigUint::one(), |acc, p| acc * p)
}

/// Draws a quadratic non-residue modulo the odd prime `p`.
///
/// Candidates are drawn two at a time, uniformly from `[1, p)`, and checked
/// with Euler's criterion; the loop repeats until a pair contains one.
pub fn find_qnr<R: Rng + ?Sized>(p: &BigUint, rng: &mut R) -> Result<BigUint> {
    if *p == BigUint::from(2u32) {
        return Err(Error::NoQnrForTwo);
    }
    check_prime(p)?;
    let half = (p - 1u32) >> 1;
    let minus_one = p - 1u32;
    let one = BigUint::one();
    loop {
        let pair = [
            rng.gen_biguint_range(&one, p),
            rng.gen_biguint_range(&one, p),
        ];
        if let Some(a) = pair.into_iter().find(|a| a.modpow(&half, p) == minus_one) {
            return Ok(a);
        }
    }
}

/// Whether `x^d = a` is solvable in a cyclic group of order `group_order`,
/// given the order of `a`: iff `ord(a) | #G / gcd(d, #G)`.
pub fn solvable_in_cyclic(order_a: &BigUint, d: &BigInt, group_order: &BigUint) -> bool {
    let g = d.magnitude().gcd(group_order);
    if g.is_zero() {
        return order_a.is_one();
    }
    (group_order / g).is_multiple_of(order_a)
}

/// Writes an odd residue as `(-1)^a * 5^b (mod 2^ell)` with `ell >= 3`,
/// `a` in `{0, 1}` and `0 <= b < 2^(ell - 2)`.
///
/// `b` is the discrete log of `(-1)^a * alpha` to base 5 in the cyclic
/// 2-group generated by 5, recovered one bit at a time (Pohlig-Hellman).
pub fn decompose_2adic_unit(alpha: &BigInt, ell: u32) -> Result<(u8, BigUint)> {
    if ell < 3 {
        return Err(Error::Precondition(format!(
            "ell must be at least 3, got {ell}"
        )));
    }
    if alpha.is_even() {
        return Err(Error::EvenUnit(alpha.to_string()));
    }
    let modulus = BigUint::one() << ell;
    let residue = reduce(alpha, &modulus);
    let a: u8 = if (&residue % 4u32).is_one() { 0 } else { 1 };
    let mut current = if a == 0 { residue } else { &modulus - residue };

    let one = BigUint::one();
    let inverse_five = mod_inverse(&BigInt::from(5), &modulus).expect("5 is odd");
    // inverse_five^(2^k) as k advances
    let mut inverse_power = inverse_five;
    let mut b = BigUint::zero();
    for k in 0..(ell - 2) {
        let probe_exponent = BigUint::one() << (ell - 3 - k);
        if current.modpow(&probe_exponent, &modulus) != one {
            b.set_bit(k as u64, true);
            current = (&current * &inverse_power) % &modulus;
        }
        inverse_power = (&inverse_power * &inverse_power) % &modulus;
    }
    debug_assert!(current.is_one());
    Ok((a, b))
}

/// `ceil(log2(v))` for `v >= 1`.
pub fn ceil_log2(v: &BigUint) -> u64 {
    if v.is_zero() {
        return 0;
    }
    (v - 1u32).bits()
}

/// Integer square root test helper: true iff `n` is a perfect square.
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.magnitude().sqrt();
    &r * &r == *n.magnitude()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn nat(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn ord_p_examples() {
        assert_eq!(ord_p(&big(8), &nat(2)).unwrap(), Valuation::Finite(3));
        assert_eq!(ord_p(&big(10), &nat(3)).unwrap(), Valuation::Finite(0));
        assert_eq!(ord_p(&big(0), &nat(5)).unwrap(), Valuation::Infinite);
        assert_eq!(ord_p(&big(-250), &nat(5)).unwrap(), Valuation::Finite(3));
        assert!(matches!(ord_p(&big(8), &nat(4)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(&big(3), &(nat(1) << 20), &nat(7)).unwrap(), nat(4));
        assert_eq!(mod_pow(&big(5), &nat(0), &nat(13)).unwrap(), nat(1));
        assert_eq!(mod_pow(&big(2), &nat(10), &nat(1024)).unwrap(), nat(0));
        assert_eq!(mod_pow(&big(-2), &nat(3), &nat(11)).unwrap(), nat(3));
        assert!(matches!(
            mod_pow(&big(2), &nat(3), &nat(1)),
            Err(Error::InvalidModulus(_))
        ));
    }

    #[test]
    fn mod_pow_matches_naive() {
        for m in 2..40u64 {
            for b in -10..10i64 {
                let mut acc = 1i64;
                for e in 0..20u64 {
                    assert_eq!(
                        mod_pow(&big(b), &nat(e), &nat(m)).unwrap(),
                        nat(acc.rem_euclid(m as i64) as u64)
                    );
                    acc = (acc * b).rem_euclid(m as i64);
                }
            }
        }
    }

    #[test]
    fn primorial_examples() {
        assert_eq!(primorial(3), nat(30));
        assert_eq!(primorial(5), nat(2310));
        assert_eq!(primorial(0), nat(1));
        assert_eq!(primorial(8), nat(9_699_690));
    }

    #[test]
    fn qnr_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = find_qnr(&nat(7), &mut rng).unwrap();
            assert!([3u64, 5, 6].contains(&a.to_u64().unwrap()));
            assert_eq!(find_qnr(&nat(3), &mut rng).unwrap(), nat(2));
            let b = find_qnr(&nat(5), &mut rng).unwrap();
            assert!([2u64, 3].contains(&b.to_u64().unwrap()));
        }
        assert!(matches!(
            find_qnr(&nat(2), &mut rng),
            Err(Error::NoQnrForTwo)
        ));
        assert!(matches!(
            find_qnr(&nat(9), &mut rng),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn qnr_euler_criterion_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in sieve_up_to(200).into_iter().skip(1) {
            let p = p as u64;
            let a = find_qnr(&nat(p), &mut rng).unwrap();
            let half = nat((p - 1) / 2);
            assert_eq!(
                mod_pow(&a.clone().into(), &half, &nat(p)).unwrap(),
                nat(p - 1)
            );
            // Square-free counting: exactly (p-1)/2 residues are non-squares.
            let squares: std::collections::HashSet<u64> = (1..p).map(|x| x * x % p).collect();
            let non_residues = (1..p)
                .filter(|&r| mod_pow(&big(r as i64), &half, &nat(p)).unwrap() == nat(p - 1))
                .count() as u64;
            assert_eq!(non_residues, (p - 1) / 2);
            assert_eq!(squares.len() as u64, (p - 1) / 2);
            assert!(!squares.contains(&a.to_u64().unwrap()));
        }
    }

    #[test]
    fn solvable_examples() {
        assert!(solvable_in_cyclic(&nat(3), &big(2), &nat(6)));
        assert!(!solvable_in_cyclic(&nat(6), &big(2), &nat(6)));
        for d in -5..20 {
            for g in 1..30u64 {
                assert!(solvable_in_cyclic(&nat(1), &big(d), &nat(g)));
            }
        }
    }

    #[test]
    fn solvable_matches_brute_force() {
        // Cyclic groups (Z/mZ)^* for odd prime powers m <= 500.
        let moduli: Vec<u64> = (3..=500u64)
            .filter(|&m| {
                let f = factor(&nat(m)).unwrap();
                f.len() == 1 && m % 2 == 1
            })
            .collect();
        for m in moduli {
            let units: Vec<u64> = (1..m).filter(|a| a.gcd(&m) == 1).collect();
            let group_order = nat(units.len() as u64);
            for d in 0..12u64 {
                let powers: std::collections::HashSet<u64> = units
                    .iter()
                    .map(|&x| {
                        mod_pow(&big(x as i64), &nat(d), &nat(m))
                            .unwrap()
                            .to_u64()
                            .unwrap()
                    })
                    .collect();
                for &a in &units {
                    let order = multiplicative_order(&big(a as i64), &nat(m)).unwrap();
                    assert_eq!(
                        solvable_in_cyclic(&order, &big(d as i64), &group_order),
                        powers.contains(&a),
                        "m={m} d={d} a={a}"
                    );
                }
            }
        }
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose_2adic_unit(&big(1), 3).unwrap(), (0, nat(0)));
        assert_eq!(decompose_2adic_unit(&big(7), 3).unwrap(), (1, nat(0)));
        assert_eq!(decompose_2adic_unit(&big(5), 3).unwrap(), (0, nat(1)));
        assert!(matches!(
            decompose_2adic_unit(&big(4), 5),
            Err(Error::EvenUnit(_))
        ));
        assert!(decompose_2adic_unit(&big(3), 2).is_err());
    }

    #[test]
    fn decompose_is_a_bijection() {
        for ell in 3..=10u32 {
            let modulus = 1u64 << ell;
            let mut seen = std::collections::HashSet::new();
            for alpha in (1..modulus).step_by(2) {
                let (a, b) = decompose_2adic_unit(&big(alpha as i64), ell).unwrap();
                let b = b.to_u64().unwrap();
                assert!(b < 1 << (ell - 2));
                let sign = if a == 1 { modulus - 1 } else { 1 };
                let five_b = mod_pow(&big(5), &nat(b), &nat(modulus))
                    .unwrap()
                    .to_u64()
                    .unwrap();
                assert_eq!(sign * five_b % modulus, alpha);
                assert!(seen.insert((a, b)));
            }
            assert_eq!(seen.len() as u64, modulus / 2);
        }
    }

    #[test]
    fn modulus_checks() {
        let m = Modulus::new(nat(7), 2).unwrap();
        assert_eq!(m.value(), &nat(49));
        assert!(Modulus::new(nat(8), 1).is_err());
        assert!(Modulus::new(nat(7), 0).is_err());
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(&nat(1)), 0);
        assert_eq!(ceil_log2(&nat(2)), 1);
        assert_eq!(ceil_log2(&nat(3)), 2);
        assert_eq!(ceil_log2(&nat(4)), 2);
        assert_eq!(ceil_log2(&nat(7)), 3);
    }
}
