use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bigmod::find_qnr;
use crate::error::{Error, Result};
use crate::sparsepoly::SparsePoly;

/// Coefficient vectors drawn from `{1, ..., N}^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Combination {
    #[serde(with = "crate::decimal::big")]
    pub bound: BigUint,
    #[serde(with = "crate::decimal::big_vec")]
    pub a: Vec<BigUint>,
    #[serde(with = "crate::decimal::big_vec")]
    pub b: Vec<BigUint>,
}

/// `N = 18 d k^2` with `d` the largest degree (at least 1).
pub fn combination_bound(fs: &[SparsePoly]) -> BigUint {
    let d = fs
        .iter()
        .filter_map(|f| f.degree())
        .max()
        .cloned()
        .unwrap_or_default()
        .max(BigUint::one());
    let k = BigUint::from(fs.len());
    BigUint::from(18u32) * d * &k * &k
}

/// `sum a_i f_i`.
pub fn apply_combination(fs: &[SparsePoly], coeffs: &[BigUint]) -> SparsePoly {
    fs.iter()
        .zip(coeffs)
        .fold(SparsePoly::zero(), |acc, (f, c)| {
            &acc + &f.scale(&BigInt::from_biguint(Sign::Plus, c.clone()))
        })
}

/// Replaces `k >= 3` polynomials by two random combinations `g1 = sum a_i
/// f_i`, `g2 = sum b_i f_i` with coefficients uniform in `{1, ..., N}`.
/// For `k <= 2` the inputs pass through (`g1 = g2 = f_1` when `k = 1`, both
/// zero when `k = 0`) and no coefficients are drawn.
pub fn random_combine<R: Rng + ?Sized>(
    fs: &[SparsePoly],
    rng: &mut R,
) -> Result<(SparsePoly, SparsePoly, Option<Combination>)> {
    if fs.iter().any(SparsePoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    match fs {
        [] => return Ok((SparsePoly::zero(), SparsePoly::zero(), None)),
        [f] => return Ok((f.clone(), f.clone(), None)),
        [f, g] => return Ok((f.clone(), g.clone(), None)),
        _ => {}
    }
    let bound = combination_bound(fs);
    let (low, high) = (BigUint::one(), &bound + 1u32);
    let mut draw = || -> Vec<BigUint> {
        (0..fs.len())
            .map(|_| rng.gen_biguint_range(&low, &high))
            .collect()
    };
    let a = draw();
    let b = draw();
    let g1 = apply_combination(fs, &a);
    let g2 = apply_combination(fs, &b);
    Ok((g1, g2, Some(Combination { bound, a, b })))
}

/// `f^2 - a g^2` for a non-residue `a`, or `f^2 + f g + g^2` when `a` is
/// absent (the form used for `p = 2`). Both forms vanish over `Q_p` only at
/// `(0, 0)`.
pub fn quadratic_collapse(f: &SparsePoly, g: &SparsePoly, a: Option<&BigUint>) -> SparsePoly {
    match a {
        Some(a) => {
            &f.square()
                - &g.square()
                    .scale(&BigInt::from_biguint(Sign::Plus, a.clone()))
        }
        None => &(&f.square() + &(f * g)) + &g.square(),
    }
}

/// Collapses the pair `(f, g)` to one polynomial with the same `Q_p` roots,
/// drawing the non-residue from `rng` for odd `p`.
pub fn pair_to_single<R: Rng + ?Sized>(
    f: &SparsePoly,
    g: &SparsePoly,
    p: &BigUint,
    rng: &mut R,
) -> Result<(SparsePoly, Option<BigUint>)> {
    if *p == BigUint::from(2u32) {
        return Ok((quadratic_collapse(f, g, None), None));
    }
    let a = find_qnr(p, rng)?;
    Ok((quadratic_collapse(f, g, Some(&a)), Some(a)))
}
