//! Dense polynomial routines used only as test oracles and by the
//! brute-force root oracle: gcd over the rationals, resultants and
//! square-free parts. Every entry point enforces a degree cap so that a
//! sparse input with a huge exponent fails loudly instead of allocating.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use super::{SparsePoly, Term};
use crate::error::{Error, Result};

/// Default degree cap for dense expansions.
pub const DEFAULT_DEGREE_CAP: u64 = 100_000;

/// Coefficients from degree 0 upwards, without trailing zeros.
fn to_dense<F: Num + Clone + From<BigInt>>(f: &SparsePoly, cap: u64) -> Result<Vec<F>> {
    let degree = match f.degree() {
        None => return Ok(Vec::new()),
        Some(d) => d,
    };
    let d = degree
        .to_u64()
        .filter(|&d| d <= cap)
        .ok_or_else(|| Error::DegreeCapExceeded {
            degree: degree.to_string(),
            cap,
        })? as usize;
    let mut out = vec![F::zero(); d + 1];
    for t in f.terms() {
        let e = t.exp.to_usize().expect("bounded by degree");
        out[e] = F::from(t.coeff.clone());
    }
    Ok(out)
}

fn trim<F: Num>(v: &mut Vec<F>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Remainder of `a` by nonzero `b` over a field.
fn rem<F: Num + Clone>(mut a: Vec<F>, b: &[F]) -> Vec<F> {
    let lead = b.last().expect("nonzero divisor").clone();
    let db = b.len() - 1;
    trim(&mut a);
    while a.len() > db {
        let top = a.len() - 1;
        let q = a[top].clone() / lead.clone();
        let shift = top - db;
        for (i, c) in b.iter().enumerate() {
            a[shift + i] = a[shift + i].clone() - q.clone() * c.clone();
        }
        trim(&mut a);
    }
    a
}

/// Euclidean gcd over a field, normalized to be monic (empty if both are zero).
fn gcd_field<F: Num + Clone>(mut a: Vec<F>, mut b: Vec<F>) -> Vec<F> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in a.iter_mut() {
            *c = c.clone() / lead.clone();
        }
    }
    a
}

/// Clears denominators and returns the primitive integer associate with a
/// positive leading coefficient.
fn rational_to_primitive(v: &[BigRational]) -> SparsePoly {
    let denominators = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let terms: Vec<Term> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| Term {
            coeff: c.numer() * (&denominators / c.denom()),
            exp: BigUint::from(i),
        })
        .collect();
    SparsePoly::from_sorted_unchecked(terms).primitive_part()
}

/// Gcd of `f` and `g` over the rationals, as the primitive integer
/// polynomial with positive leading coefficient (equal to the monic gcd
/// whenever that has integer coefficients). `gcd(0, 0) = 0`.
pub fn gcd_dense(f: &SparsePoly, g: &SparsePoly, degree_cap: u64) -> Result<SparsePoly> {
    let a: Vec<BigRational> = to_dense(f, degree_cap)?;
    let b: Vec<BigRational> = to_dense(g, degree_cap)?;
    Ok(rational_to_primitive(&gcd_field(a, b)))
}

/// Square-free part `f / gcd(f, f')`, primitive with positive leading
/// coefficient. Same roots as `f`, each with multiplicity one.
pub fn squarefree_part(f: &SparsePoly, degree_cap: u64) -> Result<SparsePoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = gcd_dense(f, &f.derivative(), degree_cap)?;
    if g.is_zero() {
        // f is a nonzero constant.
        return Ok(f.primitive_part());
    }
    Ok(f.exact_div(&g)?.primitive_part())
}

/// Resultant `Res(f, g)` as the determinant of the Sylvester matrix,
/// computed with fraction-free (Bareiss) elimination.
pub fn resultant_dense(f: &SparsePoly, g: &SparsePoly, degree_cap: u64) -> Result<BigInt> {
    let a: Vec<BigInt> = to_dense(f, degree_cap)?;
    let b: Vec<BigInt> = to_dense(g, degree_cap)?;
    if a.is_empty() || b.is_empty() {
        return Ok(BigInt::zero());
    }
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 {
        return Ok(a[0].pow(n as u32));
    }
    if n == 0 {
        return Ok(b[0].pow(m as u32));
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // Rows hold coefficients from the leading one down.
    for row in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    Ok(bareiss_determinant(mat))
}

fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if sign.is_negative() {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, u64)]) -> SparsePoly {
        SparsePoly::from_terms(terms.iter().map(|&(c, e)| (c, e)))
    }

    #[test]
    fn gcd_examples() {
        let f = SparsePoly::x_pow_minus_one(15u32);
        let g = SparsePoly::x_pow_minus_one(10u32);
        assert_eq!(
            gcd_dense(&f, &g, 100).unwrap(),
            SparsePoly::x_pow_minus_one(5u32)
        );

        let h = poly(&[(3, 2), (-6, 0)]);
        assert_eq!(
            gcd_dense(&h, &SparsePoly::zero(), 100).unwrap(),
            poly(&[(1, 2), (-2, 0)])
        );

        let x1 = poly(&[(1, 1), (-1, 0)]);
        let a = &x1 * &poly(&[(1, 1), (-2, 0)]);
        let b = &x1 * &poly(&[(1, 1), (-3, 0)]);
        assert_eq!(gcd_dense(&a, &b, 100).unwrap(), x1);
        assert!(gcd_dense(&SparsePoly::zero(), &SparsePoly::zero(), 10)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn gcd_of_binomials_exhaustive() {
        for a in 1..=60u32 {
            for b in 1..=60u32 {
                let g = gcd_dense(
                    &SparsePoly::x_pow_minus_one(a),
                    &SparsePoly::x_pow_minus_one(b),
                    100,
                )
                .unwrap();
                assert_eq!(g, SparsePoly::x_pow_minus_one(a.gcd(&b)), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn degree_cap_enforced() {
        let f = SparsePoly::x_pow_minus_one(1000u32);
        assert!(matches!(
            gcd_dense(&f, &f, 999),
            Err(Error::DegreeCapExceeded { .. })
        ));
        let huge = SparsePoly::monomial(1, BigUint::one() << 80);
        assert!(resultant_dense(&huge, &f, DEFAULT_DEGREE_CAP).is_err());
    }

    #[test]
    fn resultant_values() {
        // Res(x^2 - 2, 2x) = 2^2 * (-2) = -8 (leading coeff 1, product of g at roots).
        let f = poly(&[(1, 2), (-2, 0)]);
        assert_eq!(
            resultant_dense(&f, &f.derivative(), 10).unwrap(),
            BigInt::from(-8)
        );
        // Res(x - a, x - b) = a - b... with sign: Res(x-1, x-3) = (1 - 3) = -2.
        assert_eq!(
            resultant_dense(&poly(&[(1, 1), (-1, 0)]), &poly(&[(1, 1), (-3, 0)]), 10).unwrap(),
            BigInt::from(-2)
        );
        // Common root gives zero.
        let x1 = poly(&[(1, 1), (-1, 0)]);
        assert!(resultant_dense(&(&x1 * &f), &x1, 10).unwrap().is_zero());
        // Constants.
        assert_eq!(
            resultant_dense(&SparsePoly::constant(3), &f, 10).unwrap(),
            BigInt::from(9)
        );
    }

    #[test]
    fn resultant_matches_product_over_roots() {
        // f = (x-1)(x-2)(x+3), g = x^2 + 5: Res(f, g) = prod g(root of f).
        let f = &(&poly(&[(1, 1), (-1, 0)]) * &poly(&[(1, 1), (-2, 0)])) * &poly(&[(1, 1), (3, 0)]);
        let g = poly(&[(1, 2), (5, 0)]);
        let expected: i64 = [1i64, 2, -3].iter().map(|r| r * r + 5).product();
        assert_eq!(resultant_dense(&f, &g, 10).unwrap(), BigInt::from(expected));
    }

    #[test]
    fn squarefree() {
        let x1 = poly(&[(1, 1), (-1, 0)]);
        let x2 = poly(&[(1, 1), (2, 0)]);
        let f = (&(&x1 * &x1) * &x1) * (&x2 * &x2).scale(&BigInt::from(6));
        assert_eq!(squarefree_part(&f, 100).unwrap(), &x1 * &x2);
        assert_eq!(
            squarefree_part(&SparsePoly::constant(-4), 10).unwrap(),
            SparsePoly::one()
        );
    }
}
