//! From a 3CNF formula to a single sparse polynomial over `Q_p`.
//!
//! The pipeline encodes every clause as a divisor of `x^Q_n - 1`, picks a
//! prime `p = 1 + k Q_n` so that all `Q_n`-th roots of unity live in `Q_p`,
//! collapses the clause system to two polynomials by random linear
//! combination, and then to one polynomial through an anisotropic quadratic
//! form. Every intermediate value is kept in a [`ReductionTranscript`] that
//! [`verify_transcript`] can replay without the random source.

mod combine;
mod scan;

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use combine::{
    apply_combination, combination_bound, pair_to_single, quadratic_collapse, random_combine,
    Combination,
};
pub use scan::{cyclotomic_dense, cyclotomic_poly};

use crate::bigmod::{is_prime, primorial};
use crate::error::{Error, Result};
use crate::padic::roots_of_unity_mod_p;
use crate::plaisted::{encode_system, root_to_assignment, Assignment, Cnf3};
use crate::primes::{find_prime_in_progression, PrimeSearch, ProgressionPrime};
use crate::sparsepoly::SparsePoly;
use scan::{first_common_zero, order_of_power, zeros, CyclicImage, CyclotomicTest};

/// Largest cyclotomic index the exact confirmation step will build.
pub const DEFAULT_CYCLOTOMIC_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Combine, collapse, then scan the roots of unity for zeros of `h`.
    Randomized,
    /// Scan the roots of unity for common zeros of all clause polynomials.
    Deterministic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceConfig {
    pub mode: Mode,
    pub max_vars: usize,
    pub repeats: u32,
    pub prime: PrimeSearch,
    pub cyclotomic_cap: u64,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig {
            mode: Mode::Randomized,
            max_vars: 6,
            repeats: 5,
            prime: PrimeSearch::default(),
            cyclotomic_cap: DEFAULT_CYCLOTOMIC_CAP,
        }
    }
}

/// Everything one pipeline run produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTranscript {
    pub cnf: Cnf3,
    pub n: usize,
    #[serde(with = "crate::decimal::big")]
    pub q_n: BigUint,
    pub seed: u64,
    pub stream: u64,
    pub mode: Mode,
    pub prime: ProgressionPrime,
    pub k: usize,
    pub clause_polys: Vec<SparsePoly>,
    pub combination: Option<Combination>,
    #[serde(with = "crate::decimal::big_opt")]
    pub qnr: Option<BigUint>,
    pub g1: Option<SparsePoly>,
    pub g2: Option<SparsePoly>,
    pub h: Option<SparsePoly>,
    /// Primitive `Q_n`-th root of unity mod `p` used to order the scan.
    #[serde(with = "crate::decimal::big")]
    pub omega: BigUint,
    pub verdict: bool,
    /// Exponent `t` of the root `omega^t` found, if any.
    pub root_exponent: Option<u64>,
    #[serde(with = "crate::decimal::big_opt")]
    pub root: Option<BigUint>,
    pub witness: Option<Assignment>,
    pub witness_satisfies: Option<bool>,
}

impl ReductionTranscript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcripts serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

struct Scan {
    verdict: bool,
    root_exponent: Option<u64>,
}

/// Powers `omega^0, ..., omega^(q-1)`, with `omega` the generator chosen by
/// [`roots_of_unity_mod_p`].
fn root_table(p: &BigUint, q: &BigUint) -> Result<Vec<BigUint>> {
    roots_of_unity_mod_p(p, q)
}

/// Deterministic mode: the first `t` with every clause polynomial zero at
/// `omega^t` mod `p`. Clause polynomials divide the separable `x^Q - 1`, so
/// a zero mod `p` lifts to an exact common root.
fn scan_deterministic(clause_polys: &[SparsePoly], p: &BigUint, powers: &[BigUint]) -> Scan {
    let q = powers.len() as u64;
    let images: Vec<_> = clause_polys
        .iter()
        .map(|f| CyclicImage::new(f, p, q))
        .collect();
    let t = first_common_zero(&images, powers, p);
    Scan {
        verdict: t.is_some(),
        root_exponent: t,
    }
}

/// Randomized mode: candidates are the `t` with `h(omega^t) = 0` mod `p`
/// (equivalently `g1` and `g2` both vanish there). A candidate of order `M`
/// is accepted when `Phi_M` divides both `g1` and `g2` over `Q`.
fn scan_randomized(
    g1: &SparsePoly,
    g2: &SparsePoly,
    h: &SparsePoly,
    p: &BigUint,
    powers: &[BigUint],
    cap: u64,
) -> Result<Scan> {
    let q = powers.len() as u64;
    let image = CyclicImage::new(h, p, q);
    let pair = [g1.clone(), g2.clone()];
    let mut test = CyclotomicTest::new(&pair, cap);
    for t in zeros(&image, powers, p) {
        if test.divides_all(order_of_power(t, q))? {
            return Ok(Scan {
                verdict: true,
                root_exponent: Some(t),
            });
        }
    }
    Ok(Scan {
        verdict: false,
        root_exponent: None,
    })
}

fn check_size(cnf: &Cnf3, config: &ReduceConfig) -> Result<()> {
    if cnf.num_vars == 0 {
        return Err(Error::Precondition(
            "the pipeline needs at least one variable".into(),
        ));
    }
    if cnf.num_vars > config.max_vars {
        return Err(Error::InstanceTooLarge(format!(
            "{} variables, max_vars = {}",
            cnf.num_vars, config.max_vars
        )));
    }
    Ok(())
}

/// One run of the reduction, drawing from `ChaCha8(seed)` on `stream`.
pub fn pipeline(
    cnf: &Cnf3,
    config: &ReduceConfig,
    seed: u64,
    stream: u64,
) -> Result<ReductionTranscript> {
    check_size(cnf, config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let n = cnf.num_vars;
    let clause_polys = encode_system(cnf)?;
    let prime = find_prime_in_progression(n, &config.prime, &mut rng)?;
    let p = prime.p.clone();
    let q = prime.q_n.clone();
    let powers = root_table(&p, &q)?;

    let (combination, qnr, g1, g2, h, scan) = match config.mode {
        Mode::Deterministic => {
            let scan = scan_deterministic(&clause_polys, &p, &powers);
            (None, None, None, None, None, scan)
        }
        Mode::Randomized => {
            let (g1, g2, combination) = random_combine(&clause_polys, &mut rng)?;
            let (h, qnr) = pair_to_single(&g1, &g2, &p, &mut rng)?;
            let scan = scan_randomized(&g1, &g2, &h, &p, &powers, config.cyclotomic_cap)?;
            (combination, qnr, Some(g1), Some(g2), Some(h), scan)
        }
    };

    let root = scan.root_exponent.map(|t| powers[t as usize].clone());
    let witness = root
        .as_ref()
        .map(|r| root_to_assignment(r, &p, n))
        .transpose()?;
    let witness_satisfies = witness.as_ref().map(|a| cnf.satisfied_by(a));
    Ok(ReductionTranscript {
        cnf: cnf.clone(),
        n,
        q_n: q,
        seed,
        stream,
        mode: config.mode,
        k: clause_polys.len(),
        clause_polys,
        combination,
        qnr,
        g1,
        g2,
        h,
        omega: powers.get(1).cloned().unwrap_or_else(BigUint::one),
        verdict: scan.verdict,
        root_exponent: scan.root_exponent,
        root,
        witness,
        witness_satisfies,
        prime,
    })
}

/// Majority vote over independent runs on streams `0..repeats`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorityReport {
    /// True when strictly more than half of the runs were feasible.
    pub verdict: bool,
    pub feasible_votes: u32,
    pub repeats: u32,
    pub transcripts: Vec<ReductionTranscript>,
}

pub fn pipeline_majority(cnf: &Cnf3, config: &ReduceConfig, seed: u64) -> Result<MajorityReport> {
    if config.repeats == 0 {
        return Err(Error::Precondition("repeats must be at least 1".into()));
    }
    let transcripts = (0..config.repeats as u64)
        .into_par_iter()
        .map(|s| pipeline(cnf, config, seed, s))
        .collect::<Result<Vec<_>>>()?;
    let feasible_votes = transcripts.iter().filter(|t| t.verdict).count() as u32;
    Ok(MajorityReport {
        verdict: 2 * feasible_votes > config.repeats,
        feasible_votes,
        repeats: config.repeats,
        transcripts,
    })
}

/// Outcome of replaying a transcript.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptCheck {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Recomputes every deterministic step of a transcript and checks the
/// random choices against their stated distributions' supports.
pub fn verify_transcript(t: &ReductionTranscript, cyclotomic_cap: u64) -> Result<TranscriptCheck> {
    let mut failures = Vec::new();

    if t.n != t.cnf.num_vars || t.n == 0 {
        failures.push(format!("n = {} does not match the formula", t.n));
    }
    if t.q_n != primorial(t.n) {
        failures.push("q_n is not the primorial of n".into());
    }
    if !t.prime.is_valid() || t.prime.n != t.n {
        failures.push("recorded prime is not 1 + k Q_n or not prime".into());
    }
    let clause_polys = encode_system(&t.cnf)?;
    if clause_polys != t.clause_polys {
        failures.push("clause polynomials differ from the encoding".into());
    }
    if t.k != clause_polys.len() {
        failures.push(format!(
            "k = {} but the formula has {} clauses",
            t.k,
            clause_polys.len()
        ));
    }
    if !failures.is_empty() {
        return Ok(TranscriptCheck {
            ok: false,
            failures,
        });
    }

    let p = &t.prime.p;
    let powers = root_table(p, &t.q_n)?;
    let omega = powers.get(1).cloned().unwrap_or_else(BigUint::one);
    if omega != t.omega {
        failures.push("omega is not the canonical primitive root of unity".into());
    }

    let scan = match t.mode {
        Mode::Deterministic => {
            if t.combination.is_some()
                || t.qnr.is_some()
                || t.g1.is_some()
                || t.g2.is_some()
                || t.h.is_some()
            {
                failures.push("deterministic transcript carries randomized-stage data".into());
            }
            scan_deterministic(&clause_polys, p, &powers)
        }
        Mode::Randomized => {
            let (Some(g1), Some(g2), Some(h)) = (&t.g1, &t.g2, &t.h) else {
                failures.push("randomized transcript is missing g1, g2 or h".into());
                return Ok(TranscriptCheck {
                    ok: false,
                    failures,
                });
            };
            check_combination(t, &clause_polys, g1, g2, &mut failures);
            check_collapse(p, t.qnr.as_ref(), g1, g2, h, &mut failures);
            scan_randomized(g1, g2, h, p, &powers, cyclotomic_cap)?
        }
    };
    if scan.verdict != t.verdict {
        failures.push(format!(
            "verdict {} does not replay (got {})",
            t.verdict, scan.verdict
        ));
    }
    if scan.root_exponent != t.root_exponent {
        failures.push("root exponent does not replay".into());
    }
    let root = scan.root_exponent.map(|e| powers[e as usize].clone());
    if root != t.root {
        failures.push("root does not replay".into());
    }
    let witness = root
        .as_ref()
        .map(|r| root_to_assignment(r, p, t.n))
        .transpose()?;
    if witness != t.witness {
        failures.push("witness does not decode from the root".into());
    }
    let satisfies = witness.as_ref().map(|a| t.cnf.satisfied_by(a));
    if satisfies != t.witness_satisfies {
        failures.push("witness_satisfies does not match the formula".into());
    }
    Ok(TranscriptCheck {
        ok: failures.is_empty(),
        failures,
    })
}

fn check_combination(
    t: &ReductionTranscript,
    fs: &[SparsePoly],
    g1: &SparsePoly,
    g2: &SparsePoly,
    failures: &mut Vec<String>,
) {
    match (&t.combination, fs.len()) {
        (None, 0) => {
            if !g1.is_zero() || !g2.is_zero() {
                failures.push("empty system must give g1 = g2 = 0".into());
            }
        }
        (None, 1) => {
            if *g1 != fs[0] || *g2 != fs[0] {
                failures.push("single clause must pass through".into());
            }
        }
        (None, 2) => {
            if *g1 != fs[0] || *g2 != fs[1] {
                failures.push("two clauses must pass through".into());
            }
        }
        (Some(c), k) if k >= 3 => {
            if c.bound != combination_bound(fs) {
                failures.push(format!("N = {} is not 18 d k^2", c.bound));
            }
            let in_range = |v: &Vec<BigUint>| {
                v.len() == k && v.iter().all(|x| *x >= BigUint::one() && *x <= c.bound)
            };
            if !in_range(&c.a) || !in_range(&c.b) {
                failures.push("combination coefficients outside {1, ..., N}^k".into());
            }
            if apply_combination(fs, &c.a) != *g1 || apply_combination(fs, &c.b) != *g2 {
                failures.push("g1 or g2 is not the recorded combination".into());
            }
        }
        _ => failures.push("combination presence does not match the clause count".into()),
    }
}

fn check_collapse(
    p: &BigUint,
    qnr: Option<&BigUint>,
    g1: &SparsePoly,
    g2: &SparsePoly,
    h: &SparsePoly,
    failures: &mut Vec<String>,
) {
    let two = BigUint::from(2u32);
    match qnr {
        Some(a) if *p != two && is_prime(p) => {
            if *a >= *p || a.modpow(&((p - 1u32) >> 1), p) != p - 1u32 {
                failures.push(format!("{a} is not a quadratic non-residue mod {p}"));
            }
        }
        None if *p == two => {}
        _ => failures.push("qnr presence does not match p".into()),
    }
    if quadratic_collapse(g1, g2, qnr) != *h {
        failures.push("h is not the quadratic collapse of g1 and g2".into());
    }
}
