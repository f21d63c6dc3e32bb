use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bigmod::reduce;
use crate::error::{Error, Result};
use crate::sparsepoly::SparsePoly;

/// `f` reduced modulo `p` and `x^q - 1`: coefficients in `[0, p)`, exponents
/// in `[0, q)`. Evaluating at `omega^t` only needs the table of powers of
/// `omega`.
pub(crate) struct CyclicImage {
    terms: Vec<(BigUint, u64)>,
}

impl CyclicImage {
    pub(crate) fn new(f: &SparsePoly, p: &BigUint, q: u64) -> Self {
        let mut acc: HashMap<u64, BigUint> = HashMap::new();
        for t in f.terms() {
            let e = (&t.exp % q).to_u64().expect("below q");
            let slot = acc.entry(e).or_default();
            *slot = (&*slot + reduce(&t.coeff, p)) % p;
        }
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (c, e))
            .collect();
        terms.sort_by_key(|&(_, e)| e);
        CyclicImage { terms }
    }

    /// Whether the polynomial vanishes mod `p` at `powers[t]`, where
    /// `powers[j] = omega^j` for a primitive `q`-th root `omega`.
    pub(crate) fn vanishes_at(&self, t: u64, powers: &[BigUint], p: &BigUint) -> bool {
        let q = powers.len() as u64;
        let sum = self.terms.iter().fold(BigUint::zero(), |acc, (c, e)| {
            let idx = ((*e as u128 * t as u128) % q as u128) as usize;
            (acc + c * &powers[idx]) % p
        });
        sum.is_zero()
    }
}

/// First `t` in `0..q` (in increasing order) at which every image vanishes.
pub(crate) fn first_common_zero(
    images: &[CyclicImage],
    powers: &[BigUint],
    p: &BigUint,
) -> Option<u64> {
    (0..powers.len())
        .into_par_iter()
        .position_first(|t| images.iter().all(|f| f.vanishes_at(t as u64, powers, p)))
        .map(|i| i as u64)
}

/// All `t` in `0..q` at which `image` vanishes, in increasing order.
pub(crate) fn zeros(image: &CyclicImage, powers: &[BigUint], p: &BigUint) -> Vec<u64> {
    (0..powers.len() as u64)
        .into_par_iter()
        .filter(|&t| image.vanishes_at(t, powers, p))
        .collect()
}

/// Order of `omega^t` when `omega` has order `q`.
pub(crate) fn order_of_power(t: u64, q: u64) -> u64 {
    q / t.gcd(&q)
}

fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Dense coefficients of `Phi_m`, low degree first.
///
/// Built from `Phi_1 = x - 1` by `Phi_{mq}(x) = Phi_m(x^q)` when `q | m` and
/// `Phi_{mq}(x) = Phi_m(x^q) / Phi_m(x)` otherwise.
pub fn cyclotomic_dense(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    let mut phi = vec![BigInt::from(-1), BigInt::from(1)];
    let mut built = 1u64;
    let mut rest = m;
    for q in prime_divisors(m) {
        let mut first = true;
        while rest.is_multiple_of(q) {
            rest /= q;
            let mut stretched = vec![BigInt::zero(); (phi.len() - 1) * q as usize + 1];
            for (i, c) in phi.iter().enumerate() {
                stretched[i * q as usize] = c.clone();
            }
            phi = if first && !built.is_multiple_of(q) {
                divide_monic(&stretched, &phi).0
            } else {
                stretched
            };
            first = false;
            built *= q;
        }
    }
    phi
}

/// `Phi_m` as a sparse polynomial.
pub fn cyclotomic_poly(m: u64) -> SparsePoly {
    SparsePoly::from_terms(
        cyclotomic_dense(m)
            .into_iter()
            .enumerate()
            .map(|(i, c)| (c, BigUint::from(i))),
    )
}

/// Quotient and remainder of `a / b` for monic `b`, dense low-first.
fn divide_monic(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![], a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (db..a.len()).rev() {
        let c = std::mem::take(&mut rem[i]);
        if c.is_zero() {
            continue;
        }
        for j in 0..db {
            if !b[j].is_zero() {
                rem[i - db + j] -= &c * &b[j];
            }
        }
        quot[i - db] = c;
    }
    rem.truncate(db);
    (quot, rem)
}

/// Caches `Phi_m` and answers whether it divides a fixed list of
/// polynomials over `Q`.
pub(crate) struct CyclotomicTest<'a> {
    polys: &'a [SparsePoly],
    cap: u64,
    verdicts: HashMap<u64, bool>,
}

impl<'a> CyclotomicTest<'a> {
    pub(crate) fn new(polys: &'a [SparsePoly], cap: u64) -> Self {
        CyclotomicTest {
            polys,
            cap,
            verdicts: HashMap::new(),
        }
    }

    /// Whether `Phi_m` divides every polynomial, i.e. whether the primitive
    /// `m`-th roots of unity are exact common roots.
    pub(crate) fn divides_all(&mut self, m: u64) -> Result<bool> {
        if let Some(&v) = self.verdicts.get(&m) {
            return Ok(v);
        }
        if m > self.cap {
            return Err(Error::DegreeCapExceeded {
                degree: m.to_string(),
                cap: self.cap,
            });
        }
        let phi = cyclotomic_dense(m);
        let verdict = self.polys.iter().all(|g| {
            // Phi_m | x^m - 1, so reducing mod x^m - 1 first is harmless.
            let mut folded = vec![BigInt::zero(); m as usize];
            for t in g.terms() {
                folded[(&t.exp % m).to_usize().expect("below m")] += &t.coeff;
            }
            divide_monic(&folded, &phi).1.iter().all(Zero::is_zero)
        });
        self.verdicts.insert(m, verdict);
        Ok(verdict)
    }
}
