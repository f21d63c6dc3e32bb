use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::bigmod::{is_prime, mod_inverse, ord_p_unchecked, Valuation};
use crate::error::{Error, Result};
use crate::sparsepoly::SparsePoly;

/// An approximate root `x0` with `f(x0) = 0 (mod p^ell)` and
/// `ord_p f'(x0) = vprime < ell / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HenselSeed {
    pub x0: BigUint,
    pub ell: u32,
    pub vprime: u32,
}

/// Result of a traced lift: the root and the precision reached after each
/// Newton step (starting with the seed precision).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HenselLift {
    pub root: BigUint,
    pub precisions: Vec<u32>,
}

/// `ord_p(v mod p^ell)`, capped at `ell` when the residue vanishes.
fn residue_valuation(v: &BigUint, p: &BigUint, ell: u32) -> u32 {
    match ord_p_unchecked(&BigInt::from(v.clone()), p) {
        Valuation::Infinite => ell,
        Valuation::Finite(k) => (k as u32).min(ell),
    }
}

impl HenselSeed {
    /// Validates `x0` as a seed for `f` at precision `ell`, computing
    /// `vprime` along the way.
    pub fn new(f: &SparsePoly, p: &BigUint, x0: BigUint, ell: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if ell == 0 {
            return Err(Error::InvalidSeed("precision must be positive".into()));
        }
        let m = p.pow(ell);
        let x = BigInt::from(x0.clone());
        if !f.eval_mod(&x, &m)?.is_zero() {
            return Err(Error::InvalidSeed(format!(
                "f({x0}) is not 0 mod {p}^{ell}"
            )));
        }
        let vprime = residue_valuation(&f.derivative().eval_mod(&x, &m)?, p, ell);
        if 2 * vprime >= ell {
            return Err(Error::InvalidSeed(format!(
                "ord_p f'({x0}) = {vprime} is not below {ell}/2"
            )));
        }
        Ok(HenselSeed {
            x0: x0 % m,
            ell,
            vprime,
        })
    }
}

/// Lifts a certified approximate root to a root modulo `p^target_ell`.
///
/// The output `r` satisfies `f(r) = 0 (mod p^target_ell)`,
/// `r = x0 (mod p^(ell - vprime))` and `ord_p f'(r) = vprime`.
pub fn hensel_lift(
    f: &SparsePoly,
    seed: &HenselSeed,
    p: &BigUint,
    target_ell: u32,
) -> Result<BigUint> {
    hensel_lift_traced(f, seed, p, target_ell).map(|lift| lift.root)
}

/// [`hensel_lift`], also reporting the precision after every Newton step.
/// Each step takes precision `ell` to `min(2 ell - 2 vprime, target)`.
pub fn hensel_lift_traced(
    f: &SparsePoly,
    seed: &HenselSeed,
    p: &BigUint,
    target_ell: u32,
) -> Result<HenselLift> {
    let checked = HenselSeed::new(f, p, seed.x0.clone(), seed.ell)?;
    if checked.vprime != seed.vprime {
        return Err(Error::InvalidSeed(format!(
            "seed claims vprime = {} but ord_p f'(x0) = {}",
            seed.vprime, checked.vprime
        )));
    }
    let vprime = seed.vprime;
    let df = f.derivative();
    let mut x = checked.x0;
    let mut ell = seed.ell;
    let mut precisions = vec![ell];
    if target_ell <= ell {
        return Ok(HenselLift {
            root: x % p.pow(target_ell.max(1)),
            precisions,
        });
    }
    let p_vprime = p.pow(vprime);
    while ell < target_ell {
        let next = (2 * ell - 2 * vprime).min(target_ell);
        let work = p.pow(next + vprime);
        let next_mod = p.pow(next);
        let xi = BigInt::from(x.clone());
        let fx = f.eval_mod(&xi, &work)?;
        let dfx = df.eval_mod(&xi, &work)?;
        // f(x) is divisible by p^ell and f'(x) = p^vprime * unit.
        let unit = (&dfx / &p_vprime) % &next_mod;
        let unit_inv = mod_inverse(&BigInt::from(unit), &next_mod)
            .expect("derivative valuation is exactly vprime");
        let step = ((&fx / &p_vprime) * unit_inv) % &next_mod;
        x = (&x % &next_mod + &next_mod - step) % &next_mod;
        ell = next;
        precisions.push(ell);
    }
    Ok(HenselLift {
        root: x,
        precisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, u64)]) -> SparsePoly {
        SparsePoly::from_terms(terms.iter().map(|&(c, e)| (c, e)))
    }

    #[test]
    fn sqrt_two_mod_49() {
        let f = poly(&[(1, 2), (-2, 0)]);
        let p = BigUint::from(7u32);
        let seed = HenselSeed::new(&f, &p, 3u32.into(), 1).unwrap();
        assert_eq!(seed.vprime, 0);
        assert_eq!(hensel_lift(&f, &seed, &p, 2).unwrap(), BigUint::from(10u32));
    }

    #[test]
    fn exact_linear_root() {
        let f = poly(&[(1, 1), (-5, 0)]);
        let p = BigUint::from(3u32);
        let seed = HenselSeed::new(&f, &p, 2u32.into(), 1).unwrap();
        for t in 1..12 {
            let r = hensel_lift(&f, &seed, &p, t).unwrap();
            assert_eq!(r, BigUint::from(5u32) % p.pow(t));
        }
    }

    #[test]
    fn two_adic_sqrt_17() {
        let f = poly(&[(1, 2), (-17, 0)]);
        let p = BigUint::from(2u32);
        let seed = HenselSeed::new(&f, &p, 1u32.into(), 3).unwrap();
        assert_eq!(seed.vprime, 1);
        let r = hensel_lift(&f, &seed, &p, 4).unwrap();
        // Oracle: the odd residues mod 16 squaring to 17 = 1 (mod 16).
        let roots: Vec<u32> = (1..16u32).step_by(2).filter(|r| r * r % 16 == 1).collect();
        assert!(roots.contains(&(u32::try_from(&r).unwrap())));
        assert_eq!(&r % 4u32, BigUint::from(1u32));
        let deep = hensel_lift_traced(&f, &seed, &p, 40).unwrap();
        assert_eq!(deep.precisions, vec![3, 4, 6, 10, 18, 34, 40]);
        let m = p.pow(40);
        assert!(f.eval_mod(&deep.root.clone().into(), &m).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_seeds() {
        let f = poly(&[(1, 2), (-2, 0)]);
        let p = BigUint::from(7u32);
        assert!(matches!(
            HenselSeed::new(&f, &p, 2u32.into(), 1),
            Err(Error::InvalidSeed(_))
        ));
        // x^2 - 17 at x0 = 1 mod 4: ord f'(1) = 1 is not below 2/2.
        let g = poly(&[(1, 2), (-17, 0)]);
        assert!(HenselSeed::new(&g, &2u32.into(), 1u32.into(), 2).is_err());
        // x^2 - 9 at x0 = 3 over Q_3 has vprime = 1; a seed claiming 0 is refused.
        let h = poly(&[(1, 2), (-9, 0)]);
        let honest = HenselSeed {
            x0: 3u32.into(),
            ell: 3,
            vprime: 1,
        };
        assert!(hensel_lift(&h, &honest, &3u32.into(), 5).is_ok());
        let forged = HenselSeed {
            x0: 3u32.into(),
            ell: 3,
            vprime: 0,
        };
        assert!(hensel_lift(&h, &forged, &3u32.into(), 5).is_err());
    }

    #[test]
    fn huge_exponent_root() {
        // x^(2^70 + 3) - 3 over Q_5: the exponent is prime to 5 and to
        // 4 = #F_5^*, so a simple root exists mod 5 and lifts.
        let d: BigUint = (BigUint::from(1u32) << 70) + 3u32;
        let f = SparsePoly::monomial(1, d.clone()) - SparsePoly::constant(3);
        let p = BigUint::from(5u32);
        let x0 = (1..5u32)
            .map(BigUint::from)
            .find(|x| f.eval_mod(&x.clone().into(), &p).unwrap().is_zero())
            .unwrap();
        let seed = HenselSeed::new(&f, &p, x0, 1).unwrap();
        let r = hensel_lift(&f, &seed, &p, 30).unwrap();
        assert!(f.eval_mod(&r.into(), &p.pow(30)).unwrap().is_zero());
    }
}
