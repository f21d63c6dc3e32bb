//! Brute-force `Q_p` root oracle.
//!
//! Independent of the binomial procedure: it sees only a dense integer
//! polynomial. Candidate root valuations come from the Newton polygon; for
//! each one the rescaled polynomial is searched for unit roots by refining
//! residues modulo `p, p^2, ...` until one meets the Hensel condition or the
//! precision passes `1 + 2 ord_p Res(h, h')`, beyond which every true root
//! would have been certified.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use super::{rescale_at_valuation, PadicDecision, Rule, Witness};
use crate::bigmod::{is_prime, ord_p_unchecked, Modulus, Valuation};
use crate::error::{Error, Result};
use crate::sparsepoly::{resultant_dense, squarefree_part, SparsePoly};

/// Resource limits for the oracle. Exceeding any of them is an error, never
/// a guessed verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    /// Largest degree expanded densely.
    pub degree: u64,
    /// Largest precision `ell` the residue tree may reach.
    pub precision: u32,
    /// Largest number of live residues at any level.
    pub candidates: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            degree: 512,
            precision: 512,
            candidates: 100_000,
        }
    }
}

/// True iff `f` has a root in `Q_p`.
pub fn decide_bruteforce_qp(f: &SparsePoly, p: &BigUint, caps: &OracleCaps) -> Result<bool> {
    bruteforce_decision(f, p, caps).map(|d| d.feasible)
}

/// [`decide_bruteforce_qp`] with the deciding rule. A `hensel-certified`
/// witness refers to the square-free part of `f / x^k`.
pub fn bruteforce_decision(
    f: &SparsePoly,
    p: &BigUint,
    caps: &OracleCaps,
) -> Result<PadicDecision> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if f.is_zero() {
        return Ok(PadicDecision::without_witness(true, Rule::ZeroRoot));
    }
    let (shift, g) = f.strip_x_power();
    if !shift.is_zero() {
        return Ok(PadicDecision::without_witness(true, Rule::ZeroRoot));
    }
    if g.degree().is_some_and(|d| d.is_zero()) {
        return Ok(PadicDecision::without_witness(false, Rule::Constant));
    }
    let g = squarefree_part(&g, caps.degree)?;
    let valuations = newton_valuations(&g, p)?;
    if valuations.is_empty() {
        return Ok(PadicDecision::without_witness(
            false,
            Rule::ValuationMismatch,
        ));
    }
    for v in valuations {
        let v = BigInt::from(v);
        let h = rescale_at_valuation(&g, p, &v, None)?;
        if let Some((residue, ell)) = unit_root_search(&h, p, caps)? {
            return Ok(PadicDecision {
                feasible: true,
                rule: Rule::HenselCertified,
                witness: Some(Witness {
                    residue,
                    modulus: Modulus::new(p.clone(), ell)?,
                    valuation_shift: v,
                }),
            });
        }
    }
    Ok(PadicDecision::without_witness(false, Rule::Exhausted))
}

/// Integer slopes of the lower Newton polygon of `f` (with `f(0) != 0`),
/// negated: the valuations a root of `f` in `Q_p` can have.
pub fn newton_valuations(f: &SparsePoly, p: &BigUint) -> Result<Vec<i64>> {
    let mut points: Vec<(i64, i64)> = Vec::with_capacity(f.term_count());
    for t in f.terms() {
        let e = t
            .exp
            .to_i64()
            .ok_or_else(|| Error::InstanceTooLarge(format!("exponent {}", t.exp)))?;
        let k = match ord_p_unchecked(&t.coeff, p) {
            Valuation::Finite(k) => k as i64,
            Valuation::Infinite => unreachable!("stored coefficients are nonzero"),
        };
        points.push((e, k));
    }
    // Lower convex hull, left to right.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as i128 * (pt.1 - a.1) as i128
                - (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    Ok(hull
        .windows(2)
        .filter_map(|w| {
            let (run, fall) = (w[1].0 - w[0].0, w[0].1 - w[1].1);
            (fall % run == 0).then_some(fall / run)
        })
        .collect())
}

/// Searches for a unit root of the square-free `h`, returning a residue
/// meeting the Hensel condition and its precision.
fn unit_root_search(
    h: &SparsePoly,
    p: &BigUint,
    caps: &OracleCaps,
) -> Result<Option<(BigUint, u32)>> {
    let dh = h.derivative();
    let res = resultant_dense(h, &dh, caps.degree)?;
    let bound = ord_p_unchecked(&res, p)
        .finite()
        .expect("square-free input has nonzero discriminant");
    let ell_max = 1 + 2 * bound;
    if ell_max > caps.precision as u64 {
        return Err(Error::PrecisionCapExceeded {
            required: ell_max.to_string(),
            cap: caps.precision,
        });
    }
    let ell_max = ell_max as u32;

    let small_p = p.to_u64().filter(|&q| q as usize <= caps.candidates);
    let Some(p_small) = small_p else {
        return Err(Error::CandidateCapExceeded(caps.candidates));
    };
    let mut level: Vec<BigUint> = (1..p_small)
        .map(BigUint::from)
        .filter(|x| is_root_mod(h, x, p))
        .collect();
    let mut ell = 1u32;
    let mut pl = p.clone();
    loop {
        for x in &level {
            let slope = dh.eval_mod(&signed(x), &pl)?;
            let k = ord_p_unchecked(&signed(&slope), p)
                .finite()
                .unwrap_or(ell as u64);
            if 2 * k < ell as u64 {
                return Ok(Some((x.clone(), ell)));
            }
        }
        if ell >= ell_max || level.is_empty() {
            return Ok(None);
        }
        let next = &pl * p;
        let mut children = Vec::new();
        for x in &level {
            for j in 0..p_small {
                let child = x + &pl * j;
                if is_root_mod(h, &child, &next) {
                    children.push(child);
                    if children.len() > caps.candidates {
                        return Err(Error::CandidateCapExceeded(caps.candidates));
                    }
                }
            }
        }
        level = children;
        pl = next;
        ell += 1;
    }
}

fn signed(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

fn is_root_mod(h: &SparsePoly, x: &BigUint, m: &BigUint) -> bool {
    h.eval_mod(&signed(x), m)
        .expect("modulus at least 2")
        .is_zero()
}
