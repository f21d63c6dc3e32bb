use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigmod::{factor, sieve_up_to};
use crate::error::{Error, Result};

/// Default largest `x` the sieve accepts.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

const SEGMENT: u64 = 1 << 18;
const MAX_MODULUS: u64 = 1 << 20;

/// `Li(x) = integral from 2 to x of dt / ln t`, by adaptive Simpson
/// quadrature of `e^u / u` over `u` in `[ln 2, ln x]`.
pub fn logarithmic_integral(x: f64) -> Result<f64> {
    if x.is_nan() || x < 2.0 || !x.is_finite() {
        return Err(Error::Precondition(format!("Li needs x >= 2, got {x}")));
    }
    let (a, b) = (2f64.ln(), x.ln());
    if b <= a {
        return Ok(0.0);
    }
    let f = |u: f64| u.exp() / u;
    let (fa, fb, fm) = (f(a), f(b), f((a + b) / 2.0));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Ok(simpson(
        &f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        1e-10 * whole.abs().max(1.0),
        48,
    ))
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = (a + b) / 2.0;
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Number of primes `p <= x` in each residue class modulo `m`, by a
/// segmented sieve of Eratosthenes. Segments are sieved in parallel and
/// their counts summed.
pub fn prime_residue_counts(x: u64, m: u64, cap: u64) -> Result<Vec<u64>> {
    if x > cap {
        return Err(Error::SieveCapExceeded { x, cap });
    }
    if m == 0 || m > MAX_MODULUS {
        return Err(Error::Precondition(format!(
            "modulus must be in 1..={MAX_MODULUS}, got {m}"
        )));
    }
    let empty = vec![0u64; m as usize];
    if x < 2 {
        return Ok(empty);
    }
    let root = (x as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = sieve_up_to(root as usize)
        .into_iter()
        .map(u64::from)
        .collect();
    let segments = x.div_ceil(SEGMENT);
    Ok((0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = s * SEGMENT;
            let hi = (lo + SEGMENT).min(x + 1);
            let mut composite = vec![false; (hi - lo) as usize];
            for &q in &base {
                if q * q >= hi {
                    break;
                }
                let mut j = (q * q).max(lo.div_ceil(q) * q);
                while j < hi {
                    composite[(j - lo) as usize] = true;
                    j += q;
                }
            }
            let mut counts = vec![0u64; m as usize];
            for (i, &c) in composite.iter().enumerate() {
                let v = lo + i as u64;
                if v >= 2 && !c {
                    counts[(v % m) as usize] += 1;
                }
            }
            counts
        })
        .reduce(
            || empty.clone(),
            |mut acc, part| {
                for (a, b) in acc.iter_mut().zip(part) {
                    *a += b;
                }
                acc
            },
        ))
}

/// `pi(x, M)` against the prediction `Li(x) / phi(M)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub m: u64,
    pub x: u64,
    pub count: u64,
    pub phi_m: u64,
    pub predicted: f64,
    pub ratio: f64,
    pub note: String,
}

/// Counts primes `p <= x` with `p = 1 (mod m)` and compares with
/// `Li(x) / phi(m)`. An empirical consistency check only.
pub fn prime_density_experiment(m: u64, x: u64, cap: u64) -> Result<DensityReport> {
    if x < 2 {
        return Err(Error::Precondition(format!(
            "x must be at least 2, got {x}"
        )));
    }
    let counts = prime_residue_counts(x, m, cap)?;
    let count = counts[(1 % m) as usize];
    let phi_m = if m == 1 {
        1
    } else {
        factor(&BigUint::from(m))?
            .totient(&Default::default())?
            .value()
            .to_u64()
            .expect("phi(m) <= m")
    };
    let predicted = logarithmic_integral(x as f64)? / phi_m as f64;
    Ok(DensityReport {
        m,
        x,
        count,
        phi_m,
        predicted,
        ratio: count as f64 / predicted,
        note: "empirical consistency check of the predicted density, not a verification of GRH"
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_brute(m: u64) -> u64 {
        (1..=m)
            .filter(|a| num_integer::Integer::gcd(a, &m) == 1)
            .count() as u64
    }

    /// `li(x) = gamma + ln ln x + sqrt(x) * sum_n (-1)^(n-1) (ln x)^n /
    /// (n! 2^(n-1)) * sum_{k <= (n-1)/2} 1 / (2k + 1)`; the constant cancels
    /// in `li(x) - li(2)`.
    fn ramanujan_li_without_gamma(x: f64) -> f64 {
        let l = x.ln();
        let mut sum = 0.0;
        let mut term = 1.0; // (ln x)^n / (n! 2^(n-1)) built incrementally
        let mut inner = 0.0;
        for n in 1..200 {
            term *= l / n as f64;
            if n > 1 {
                term /= 2.0;
            }
            if (n - 1) % 2 == 0 {
                inner += 1.0 / (n as f64);
            }
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * term * inner;
        }
        l.ln() + x.sqrt() * sum
    }

    fn trapezoid(x: f64, steps: usize) -> f64 {
        let h = (x - 2.0) / steps as f64;
        let f = |t: f64| 1.0 / t.ln();
        let mut acc = (f(2.0) + f(x)) / 2.0;
        for i in 1..steps {
            acc += f(2.0 + i as f64 * h);
        }
        acc * h
    }

    #[test]
    fn li_examples() {
        assert_eq!(logarithmic_integral(2.0).unwrap(), 0.0);
        assert!(logarithmic_integral(1.5).is_err());
        assert!(logarithmic_integral(f64::NAN).is_err());
        let li4 = logarithmic_integral(1e4).unwrap();
        assert!(logarithmic_integral(1e5).unwrap() > li4);
        let fine = trapezoid(1e4, 2_000_000);
        assert!(((li4 - fine) / fine).abs() < 1e-6, "{li4} vs {fine}");
        for x in [10.0, 1e3, 1e4, 1e6, 1e8] {
            let series = ramanujan_li_without_gamma(x) - ramanujan_li_without_gamma(2.0);
            let quad = logarithmic_integral(x).unwrap();
            assert!(
                ((quad - series) / series).abs() < 1e-8,
                "x={x}: {quad} vs {series}"
            );
        }
    }

    #[test]
    fn prime_counts() {
        assert_eq!(
            prime_residue_counts(10_000, 1, DEFAULT_SIEVE_CAP).unwrap(),
            vec![1229]
        );
        assert_eq!(
            prime_residue_counts(10_000, 2, DEFAULT_SIEVE_CAP).unwrap()[1],
            1228
        );
        assert_eq!(
            prime_residue_counts(1, 1, DEFAULT_SIEVE_CAP).unwrap(),
            vec![0]
        );
        assert_eq!(
            prime_residue_counts(2, 1, DEFAULT_SIEVE_CAP).unwrap(),
            vec![1]
        );
        // Segment boundaries: pi(SEGMENT * 3 + 5) against the plain sieve.
        let x = SEGMENT * 3 + 5;
        assert_eq!(
            prime_residue_counts(x, 1, DEFAULT_SIEVE_CAP).unwrap()[0],
            sieve_up_to(x as usize).len() as u64
        );
        assert!(matches!(
            prime_residue_counts(1000, 1, 999),
            Err(Error::SieveCapExceeded { .. })
        ));
    }

    #[test]
    fn residue_partition() {
        for m in [6u64, 30] {
            let x = 100_000;
            let counts = prime_residue_counts(x, m, DEFAULT_SIEVE_CAP).unwrap();
            let coprime: u64 = (0..m)
                .filter(|a| num_integer::Integer::gcd(a, &m) == 1)
                .map(|a| counts[a as usize])
                .sum();
            let dividing = sieve_up_to(m as usize)
                .iter()
                .filter(|&&q| m % q as u64 == 0)
                .count() as u64;
            assert_eq!(coprime + dividing, 9592);
        }
    }

    #[test]
    fn density_report() {
        let r = prime_density_experiment(1, 10_000, DEFAULT_SIEVE_CAP).unwrap();
        assert_eq!(r.count, 1229);
        let r = prime_density_experiment(30, 1_000_000, DEFAULT_SIEVE_CAP).unwrap();
        assert_eq!(r.phi_m, phi_brute(30));
        assert!((0.9..=1.1).contains(&r.ratio), "{}", r.ratio);
        assert_eq!(
            prime_density_experiment(210, 1000, DEFAULT_SIEVE_CAP)
                .unwrap()
                .phi_m,
            48
        );
    }
}
