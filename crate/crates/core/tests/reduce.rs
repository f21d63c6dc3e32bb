use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use padicfeas::bigmod::{find_qnr, small_primes};
use padicfeas::padic::{decide_bruteforce_qp, OracleCaps};
use padicfeas::plaisted::Cnf3;
use padicfeas::reduce::{
    pair_to_single, pipeline, quadratic_collapse, random_combine, verify_transcript, Mode,
    ReduceConfig, DEFAULT_CYCLOTOMIC_CAP,
};
use padicfeas::sparsepoly::{gcd_dense, parse_expr};
use padicfeas::SparsePoly;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dense(coeffs: &[i64]) -> SparsePoly {
    SparsePoly::from_terms(coeffs.iter().enumerate().map(|(e, &c)| (c, e as u64)))
}

#[test]
fn collapse_without_common_root() {
    // (x - 1)^2 = 3 (x - 2)^2 would need 3 to be a square mod 7.
    let f = parse_expr("x - 1").unwrap();
    let g = parse_expr("x - 2").unwrap();
    let h = quadratic_collapse(&f, &g, Some(&BigUint::from(3u32)));
    assert!(!decide_bruteforce_qp(&h, &BigUint::from(7u32), &OracleCaps::default()).unwrap());
    let same = quadratic_collapse(&f, &f, Some(&BigUint::from(3u32)));
    assert!(decide_bruteforce_qp(&same, &BigUint::from(7u32), &OracleCaps::default()).unwrap());
}

#[test]
fn anisotropic_forms_mod_small_primes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for &p in small_primes().iter().filter(|&&p| (3..=13).contains(&p)) {
        let big_p = BigUint::from(p);
        let a = find_qnr(&big_p, &mut rng).unwrap();
        let a = u64::try_from(&a).unwrap();
        for u in 0..p as u64 {
            for v in 0..p as u64 {
                let q = (u * u + (p as u64 - a) * v % p as u64 * v) % p as u64;
                assert_eq!(q == 0, u == 0 && v == 0, "p={p} a={a} ({u},{v})");
            }
        }
    }
    for m in [2u64, 4] {
        for u in 0..m {
            for v in 0..m {
                let q = (u * u + u * v + v * v) % m;
                assert_eq!(q == 0, u % 2 == 0 && v % 2 == 0, "mod {m}: ({u},{v})");
            }
        }
    }
}

#[test]
fn collapse_vanishes_exactly_at_common_roots_mod_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [3u32, 5, 7, 11, 13] {
        let big_p = BigUint::from(p);
        for fc in 0..27i64 {
            let f = dense(&[fc % 3 - 1, fc / 3 % 3 - 1, fc / 9 - 1]);
            for gc in 0..9i64 {
                let g = dense(&[gc % 3 - 1, gc / 3 - 1, 1]);
                let (h, _) = pair_to_single(&f, &g, &big_p, &mut rng).unwrap();
                for r in 0..p {
                    let r = BigInt::from(r);
                    let at = |q: &SparsePoly| q.eval_mod(&r, &big_p).unwrap().is_zero();
                    assert_eq!(at(&h), at(&f) && at(&g), "p={p} f={f} g={g} r={r}");
                }
            }
        }
    }
}

fn poly_strategy() -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(-10i64..=10, 2..=6)
        .prop_map(|c| dense(&c))
        .prop_filter("nonconstant", |f| f.degree().is_some_and(|d| !d.is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalar_multiples_keep_their_zero_set(
        f in poly_strategy(),
        scales in prop::collection::vec((1i64..=9, any::<bool>()), 3..=5),
        seed in any::<u64>(),
    ) {
        let fs: Vec<SparsePoly> = scales
            .iter()
            .map(|&(s, neg)| f.scale(&BigInt::from(if neg { -s } else { s })))
            .collect();
        let (g1, g2, _) = random_combine(&fs, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let expected = gcd_dense(&f, &f, 64).unwrap();
        // A combination may cancel to zero; the zero set is then everything,
        // which only happens when the signs disagree.
        for g in [&g1, &g2] {
            if !g.is_zero() {
                prop_assert_eq!(gcd_dense(g, g, 64).unwrap(), expected.clone());
            }
        }
        if scales.iter().all(|&(_, neg)| !neg) {
            prop_assert!(!g1.is_zero() && !g2.is_zero());
        }
    }

    #[test]
    fn transcripts_replay(seed in any::<u64>(), n in 1usize..=4, k in 0usize..=6, det in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cnf = Cnf3::random(n, k, &mut rng);
        let config = ReduceConfig {
            mode: if det { Mode::Deterministic } else { Mode::Randomized },
            ..ReduceConfig::default()
        };
        let t = pipeline(&cnf, &config, seed, 0).unwrap();
        let check = verify_transcript(&t, DEFAULT_CYCLOTOMIC_CAP).unwrap();
        prop_assert!(check.ok, "{:?}", check.failures);
        if t.verdict {
            prop_assert_eq!(t.witness_satisfies, Some(true));
        }
        if det {
            prop_assert_eq!(t.verdict, cnf.is_satisfiable().unwrap());
        }
    }
}
