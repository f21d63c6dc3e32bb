//! `padicfeas`: p-adic feasibility of sparse polynomials and the 3CNF
//! reduction pipeline from the command line.
//!
//! Reports are JSON on standard output; a one-line summary and the
//! effective configuration go to standard error. Exit codes: 0 feasible or
//! true, 1 infeasible or false, 2 input error, 3 a cap or budget was hit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use padicfeas::padic::{
    decide_binomial, decide_sparse, degenerate_reduction, has_degenerate_root_qp, OracleCaps,
};
use padicfeas::plaisted::Cnf3;
use padicfeas::primes::{
    find_prime_in_progression, prime_density_experiment, PrimeSearch, PrimeStrategy,
};
use padicfeas::reduce::{
    pipeline, pipeline_majority, verify_transcript, MajorityReport, Mode, ReduceConfig,
    ReductionTranscript,
};
use padicfeas::sparsepoly::parse_expr;
use padicfeas::SparsePoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "padicfeas",
    version,
    about = "Decide p-adic feasibility of sparse polynomials"
)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "PADICFEAS_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide c1 x^a1 + c2 x^a2 over Q_p.
    #[command(allow_negative_numbers = true)]
    DecideBinomial {
        c1: BigInt,
        a1: BigInt,
        c2: BigInt,
        a2: BigInt,
        #[arg(long)]
        prime: BigUint,
    },
    /// Decide whether a polynomial has a root in Q_p.
    Decide {
        #[command(flatten)]
        poly: PolyInput,
        #[arg(long)]
        prime: BigUint,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Decide whether a polynomial has a degenerate (repeated) root in Q_p.
    Degenerate {
        #[command(flatten)]
        poly: PolyInput,
        #[arg(long)]
        prime: BigUint,
        /// Square the input first, turning every root into a degenerate one.
        #[arg(long)]
        square: bool,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Find a prime p = 1 + k Q_n.
    FindPrime {
        n: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Count primes p = 1 (mod M) up to x against Li(x) / phi(M).
    Density {
        /// Pairs written M:x, e.g. 30:1000000.
        #[arg(required = true, value_parser = parse_pair)]
        pairs: Vec<(u64, u64)>,
        #[arg(long, default_value_t = padicfeas::primes::DEFAULT_SIEVE_CAP)]
        sieve_cap: u64,
    },
    /// Run the 3CNF reduction on a DIMACS file.
    Reduce {
        cnf: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Randomized)]
        mode: ModeArg,
        /// Independent runs combined by majority vote.
        #[arg(long, default_value_t = 5)]
        repeats: u32,
        #[arg(long, default_value_t = 6)]
        max_vars: usize,
        #[command(flatten)]
        search: SearchArgs,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a transcript (or majority report) written by `reduce`.
    VerifyTranscript { file: PathBuf },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PolyInput {
    /// Polynomial file: {"terms":[["c","e"], ...]}.
    file: Option<PathBuf>,
    /// Inline expression such as "x^100 - 3x + 2".
    #[arg(long)]
    expr: Option<String>,
}

#[derive(Args, Debug)]
struct CapArgs {
    #[arg(long, default_value_t = OracleCaps::default().degree)]
    max_degree: u64,
    #[arg(long, default_value_t = OracleCaps::default().precision)]
    max_precision: u32,
    #[arg(long, default_value_t = OracleCaps::default().candidates)]
    max_candidates: usize,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::FphSample)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = PrimeSearch::default().fph_c)]
    fph_c: u32,
    #[arg(long, default_value_t = PrimeSearch::default().fph_c_prime)]
    fph_c_prime: u32,
    #[arg(long, default_value_t = PrimeSearch::default().k_max)]
    k_max: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StrategyArg {
    FphSample,
    Scan,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Randomized,
    Deterministic,
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (m, x) = s
        .split_once(':')
        .ok_or_else(|| format!("expected M:x, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<u64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(m)?, parse(x)?))
}

impl CapArgs {
    fn caps(&self) -> OracleCaps {
        OracleCaps {
            degree: self.max_degree,
            precision: self.max_precision,
            candidates: self.max_candidates,
        }
    }
}

impl SearchArgs {
    fn search(&self) -> PrimeSearch {
        PrimeSearch {
            strategy: match self.strategy {
                StrategyArg::FphSample => PrimeStrategy::FphSample,
                StrategyArg::Scan => PrimeStrategy::Scan,
            },
            fph_c: self.fph_c,
            fph_c_prime: self.fph_c_prime,
            k_max: self.k_max,
        }
    }
}

enum Failure {
    Input(String),
    Cap(String),
}

impl From<padicfeas::Error> for Failure {
    fn from(e: padicfeas::Error) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_poly(input: &PolyInput) -> Result<SparsePoly, Failure> {
    match (&input.file, &input.expr) {
        (Some(path), _) => Ok(SparsePoly::from_json(&read(path)?)?),
        (None, Some(expr)) => Ok(parse_expr(expr)?),
        (None, None) => Err(Failure::Input("give a polynomial file or --expr".into())),
    }
}

/// What a subcommand produced: the JSON report, a summary line and the
/// yes/no answer that selects the exit code.
struct Report {
    body: Value,
    summary: String,
    answer: bool,
}

fn log_config(name: &str, config: Value) {
    eprintln!("config {name}: {config}");
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::DecideBinomial {
            c1,
            a1,
            c2,
            a2,
            prime,
        } => {
            log_config("decide-binomial", json!({ "prime": prime.to_string() }));
            let d = decide_binomial(c1, a1, c2, a2, prime)?;
            Ok(Report {
                summary: format!(
                    "{c1} x^{a1} + {c2} x^{a2} over Q_{prime}: {} ({:?})",
                    if d.feasible { "feasible" } else { "infeasible" },
                    d.rule
                ),
                answer: d.feasible,
                body: json!(d),
            })
        }
        Command::Decide { poly, prime, caps } => {
            let caps = caps.caps();
            log_config(
                "decide",
                json!({ "prime": prime.to_string(), "caps": caps_json(&caps) }),
            );
            let f = load_poly(poly)?;
            let d = decide_sparse(&f, prime, &caps)?;
            Ok(Report {
                summary: format!(
                    "{f} over Q_{prime}: {} ({:?})",
                    if d.feasible { "feasible" } else { "infeasible" },
                    d.rule
                ),
                answer: d.feasible,
                body: json!(d),
            })
        }
        Command::Degenerate {
            poly,
            prime,
            square,
            caps,
        } => {
            let caps = caps.caps();
            log_config(
                "degenerate",
                json!({ "prime": prime.to_string(), "square": square, "caps": caps_json(&caps) }),
            );
            let mut f = load_poly(poly)?;
            if *square {
                f = degenerate_reduction(&f);
            }
            let found = has_degenerate_root_qp(&f, prime, &caps)?;
            Ok(Report {
                summary: format!("degenerate Q_{prime} root: {found}"),
                answer: found,
                body: json!({ "polynomial": f, "prime": prime.to_string(), "degenerate_root": found }),
            })
        }
        Command::FindPrime { n, search } => {
            let search = search.search();
            log_config("find-prime", json!({ "seed": cli.seed, "search": search }));
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let hit = find_prime_in_progression(*n, &search, &mut rng)?;
            Ok(Report {
                summary: format!(
                    "p = {} = 1 + {} * {} after {} trials",
                    hit.p, hit.k, hit.q_n, hit.trials_used
                ),
                answer: true,
                body: json!(hit),
            })
        }
        Command::Density { pairs, sieve_cap } => {
            log_config("density", json!({ "sieve_cap": sieve_cap }));
            let reports = pairs
                .iter()
                .map(|&(m, x)| prime_density_experiment(m, x, *sieve_cap))
                .collect::<padicfeas::Result<Vec<_>>>()?;
            let summary = reports
                .iter()
                .map(|r| {
                    format!(
                        "M={} x={}: {} vs {:.1} (ratio {:.4})",
                        r.m, r.x, r.count, r.predicted, r.ratio
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            Ok(Report {
                summary,
                answer: true,
                body: json!(reports),
            })
        }
        Command::Reduce {
            cnf,
            mode,
            repeats,
            max_vars,
            search,
            out,
        } => {
            let config = ReduceConfig {
                mode: match mode {
                    ModeArg::Randomized => Mode::Randomized,
                    ModeArg::Deterministic => Mode::Deterministic,
                },
                max_vars: *max_vars,
                repeats: *repeats,
                prime: search.search(),
                ..ReduceConfig::default()
            };
            log_config("reduce", json!({ "seed": cli.seed, "reduce": config }));
            let formula = Cnf3::from_dimacs(&read(cnf)?)?;
            let report = reduce(&formula, &config, cli.seed)?;
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&report.body).expect("reports serialize");
                fs::write(path, text + "\n")
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            Ok(report)
        }
        Command::VerifyTranscript { file } => {
            log_config("verify-transcript", json!({}));
            verify(&read(file)?)
        }
    }
}

fn caps_json(caps: &OracleCaps) -> Value {
    json!({ "degree": caps.degree, "precision": caps.precision, "candidates": caps.candidates })
}

/// Checks a decoded witness against the formula before it is reported.
fn witness_note(cnf: &Cnf3, t: &ReductionTranscript) -> String {
    match &t.witness {
        Some(a) if cnf.satisfied_by(a) => {
            let bits: String = a.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            format!("witness {bits} satisfies the formula")
        }
        Some(_) => "witness does NOT satisfy the formula".into(),
        None => "no witness".into(),
    }
}

fn reduce(cnf: &Cnf3, config: &ReduceConfig, seed: u64) -> Result<Report, Failure> {
    if config.repeats <= 1 {
        let t = pipeline(cnf, config, seed, 0)?;
        return Ok(Report {
            summary: format!(
                "p = {}: {}; {}",
                t.prime.p,
                if t.verdict { "feasible" } else { "infeasible" },
                witness_note(cnf, &t)
            ),
            answer: t.verdict,
            body: json!(t),
        });
    }
    let m = pipeline_majority(cnf, config, seed)?;
    let witness = m
        .transcripts
        .iter()
        .find(|t| t.verdict == m.verdict && t.witness.is_some())
        .map(|t| witness_note(cnf, t))
        .unwrap_or_else(|| "no witness".into());
    Ok(Report {
        summary: format!(
            "{}/{} runs feasible: {}; {witness}",
            m.feasible_votes,
            m.repeats,
            if m.verdict { "feasible" } else { "infeasible" }
        ),
        answer: m.verdict,
        body: json!(m),
    })
}

fn verify(text: &str) -> Result<Report, Failure> {
    let parse_err =
        |e: serde_json::Error| Failure::Input(format!("not a transcript or majority report: {e}"));
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    let transcripts = if value.get("transcripts").is_some() {
        let m: MajorityReport = serde_json::from_value(value).map_err(parse_err)?;
        let votes = m.transcripts.iter().filter(|t| t.verdict).count() as u32;
        let mut failures = Vec::new();
        if m.transcripts.len() != m.repeats as usize
            || votes != m.feasible_votes
            || m.verdict != (2 * votes > m.repeats)
            || m.transcripts
                .iter()
                .enumerate()
                .any(|(i, t)| t.stream != i as u64)
        {
            failures.push("majority tally does not match the transcripts".to_string());
        }
        (m.transcripts, failures)
    } else {
        let t: ReductionTranscript = serde_json::from_value(value).map_err(parse_err)?;
        (vec![t], Vec::new())
    };
    let (transcripts, mut failures) = transcripts;
    for t in &transcripts {
        let check = verify_transcript(t, padicfeas::reduce::DEFAULT_CYCLOTOMIC_CAP)?;
        failures.extend(
            check
                .failures
                .into_iter()
                .map(|f| format!("stream {}: {f}", t.stream)),
        );
    }
    let ok = failures.is_empty();
    Ok(Report {
        summary: if ok {
            format!("{} transcript(s) replay exactly", transcripts.len())
        } else {
            format!("verification failed: {}", failures.join("; "))
        },
        answer: ok,
        body: json!({ "ok": ok, "failures": failures }),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report.body).expect("reports serialize");
            // A closed pipe downstream is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            eprintln!("{}", report.summary);
            ExitCode::from(if report.answer { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("cap exceeded: {msg}");
            ExitCode::from(3)
        }
    }
}
