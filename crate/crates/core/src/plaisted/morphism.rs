use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Assignment, Clause, Cnf3, Literal};
use crate::bigmod::{first_primes, is_prime, mod_inverse, primorial};
use crate::error::{Error, Result};
use crate::sparsepoly::SparsePoly;

/// `prod (x^m - 1)^(e_m)` over divisors `m` of `Q_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialProduct {
    pub n: usize,
    #[serde(with = "crate::decimal::big")]
    pub q_n: BigUint,
    #[serde(with = "factor_list")]
    pub factors: BTreeMap<BigUint, i64>,
}

mod factor_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &BTreeMap<BigUint, i64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        v.iter()
            .map(|(m, e)| (m.to_string(), *e))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<BigUint, i64>, D::Error> {
        Vec::<(String, i64)>::deserialize(d)?
            .into_iter()
            .map(|(m, e)| {
                m.parse()
                    .map(|m| (m, e))
                    .map_err(|_| serde::de::Error::custom(format!("bad divisor {m:?}")))
            })
            .collect()
    }
}

impl BinomialProduct {
    fn new(n: usize, factors: BTreeMap<BigUint, i64>) -> Self {
        BinomialProduct {
            n,
            q_n: primorial(n),
            factors: factors.into_iter().filter(|(_, e)| *e != 0).collect(),
        }
    }

    /// Degree of the expansion.
    pub fn degree(&self) -> BigInt {
        self.factors
            .iter()
            .map(|(m, e)| BigInt::from(m.clone()) * e)
            .sum()
    }
}

fn check_var(var: usize, n: usize) -> Result<()> {
    if var == 0 || var > n {
        return Err(Error::VariableOutOfRange {
            index: var,
            num_vars: n,
        });
    }
    Ok(())
}

/// `X_i -> x^(Q_n/p_i) - 1` and `~X_i -> (x^Q_n - 1) / (x^(Q_n/p_i) - 1)`.
pub fn literal_poly(lit: Literal, n: usize) -> Result<BinomialProduct> {
    check_var(lit.var, n)?;
    let q = primorial(n);
    let p = BigUint::from(first_primes(n)[lit.var - 1]);
    let mut factors = BTreeMap::new();
    factors.insert(&q / &p, if lit.negated { -1 } else { 1 });
    if lit.negated {
        factors.insert(q, 1);
    }
    Ok(BinomialProduct::new(n, factors))
}

/// The square-free divisor of `x^Q_n - 1` vanishing exactly at the roots of
/// unity whose assignment satisfies `clause`.
///
/// For the clause's distinct variables `V`, a root of unity of order `d`
/// has local pattern `U = {s in V : p_s does not divide d}` (the variables
/// it sets true), and it is a root of `x^(m_S) - 1`, `m_S = Q_n / prod_S p_s`,
/// iff `S` is a subset of `U`. Möbius inversion over subsets of `V` then
/// gives exponents `e_S` whose multiplicities sum to 1 exactly on the
/// satisfying patterns.
pub fn clause_poly(clause: &Clause, n: usize) -> Result<BinomialProduct> {
    for l in &clause.literals {
        check_var(l.var, n)?;
    }
    let vars = clause.variables();
    let primes = first_primes(n);
    let q = primorial(n);
    let width = vars.len();
    let satisfied: Vec<bool> = (0..1usize << width)
        .map(|u| {
            clause.literals.iter().any(|l| {
                let slot = vars.iter().position(|&v| v == l.var).expect("own variable");
                (u >> slot & 1 == 1) != l.negated
            })
        })
        .collect();
    let mut factors = BTreeMap::new();
    for s in 0..1usize << width {
        let mut e = 0i64;
        // Subsets u of s, including s and 0.
        let mut u = s;
        loop {
            if satisfied[u] {
                let parity = (s.count_ones() - u.count_ones()) % 2;
                e += if parity == 0 { 1 } else { -1 };
            }
            if u == 0 {
                break;
            }
            u = (u - 1) & s;
        }
        if e != 0 {
            let divisor: BigUint = (0..width)
                .filter(|i| s >> i & 1 == 1)
                .map(|i| BigUint::from(primes[vars[i] - 1]))
                .product();
            factors.insert(&q / divisor, e);
        }
    }
    Ok(BinomialProduct::new(n, factors))
}

/// Multiplies the positive-exponent binomials in increasing `m`, then
/// divides exactly by the negative-exponent ones.
pub fn expand(b: &BinomialProduct) -> Result<SparsePoly> {
    let mut out = SparsePoly::one();
    for (m, &e) in &b.factors {
        if !b.q_n.is_multiple_of(m) {
            return Err(Error::Precondition(format!(
                "{m} does not divide Q_{}",
                b.n
            )));
        }
        for _ in 0..e.max(0) {
            out = &out * &SparsePoly::x_pow_minus_one(m.clone());
        }
    }
    for (m, &e) in &b.factors {
        for _ in 0..(-e).max(0) {
            out = out.exact_div(&SparsePoly::x_pow_minus_one(m.clone()))?;
        }
    }
    Ok(out)
}

/// Factored clause polynomials, one per clause.
pub fn encode_system_factored(cnf: &Cnf3) -> Result<Vec<BinomialProduct>> {
    cnf.clauses
        .par_iter()
        .map(|c| clause_poly(c, cnf.num_vars))
        .collect()
}

/// Expanded clause polynomials, one per clause.
pub fn encode_system(cnf: &Cnf3) -> Result<Vec<SparsePoly>> {
    cnf.clauses
        .par_iter()
        .map(|c| expand(&clause_poly(c, cnf.num_vars)?))
        .collect()
}

/// The exponent `t mod Q_n` with `t = 0 (mod p_i)` where `A_i = 1` and
/// `t = 1 (mod p_i)` elsewhere, so that `omega^t` encodes `A` for any
/// primitive `Q_n`-th root of unity `omega`.
pub fn assignment_to_root(a: &Assignment, n: usize) -> Result<BigUint> {
    if a.len() != n {
        return Err(Error::Precondition(format!(
            "assignment has {} bits, expected {n}",
            a.len()
        )));
    }
    let q = primorial(n);
    let mut t = BigUint::zero();
    for (bit, p) in a.bits.iter().zip(first_primes(n)) {
        if *bit {
            continue;
        }
        let p = BigUint::from(p);
        let cofactor = &q / &p;
        let inv = mod_inverse(&BigInt::from(cofactor.clone()), &p).expect("distinct primes");
        t += cofactor * inv;
    }
    Ok(t % q)
}

/// Decodes a `Q_n`-th root of unity mod `p`: `A_i = 1` iff
/// `r^(Q_n/p_i) = 1 (mod p)`.
pub fn root_to_assignment(r: &BigUint, p: &BigUint, n: usize) -> Result<Assignment> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let q = primorial(n);
    if !(p - 1u32).is_multiple_of(&q) {
        return Err(Error::NotDividingGroupOrder {
            m: q.to_string(),
            p_minus_one: (p - 1u32).to_string(),
        });
    }
    if !r.modpow(&q, p).is_one() {
        return Err(Error::Precondition(format!("{r}^{q} is not 1 mod {p}")));
    }
    Ok(Assignment {
        bits: first_primes(n)
            .into_iter()
            .map(|pi| r.modpow(&(&q / BigUint::from(pi)), p).is_one())
            .collect(),
    })
}
