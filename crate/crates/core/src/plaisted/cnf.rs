use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    fn from_dimacs(v: i64) -> Self {
        Literal {
            var: v.unsigned_abs() as usize,
            negated: v < 0,
        }
    }

    fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn holds(self, a: &Assignment) -> bool {
        a.bits[self.var - 1] != self.negated
    }
}

/// A disjunction of one to three literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Self> {
        if literals.is_empty() || literals.len() > 3 {
            return Err(Error::Parse(format!(
                "clauses need 1 to 3 literals, got {}",
                literals.len()
            )));
        }
        if literals.iter().any(|l| l.var == 0) {
            return Err(Error::Parse("variable indices start at 1".into()));
        }
        Ok(Clause { literals })
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.literals.iter().any(|l| l.holds(a))
    }

    /// The distinct variables of the clause, sorted.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self.literals.iter().map(|l| l.var).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" v ")?;
            }
            if l.negated {
                f.write_str("~")?;
            }
            write!(f, "X{}", l.var)?;
        }
        Ok(())
    }
}

/// Every clause over `X_1..X_n` with one to three distinct variables, in
/// increasing variable order, under every sign pattern.
pub fn clause_shapes(n: usize) -> Vec<Clause> {
    let mut out = Vec::new();
    let mut push = |vars: &[usize]| {
        for signs in 0..1usize << vars.len() {
            let literals = vars
                .iter()
                .enumerate()
                .map(|(i, &var)| Literal {
                    var,
                    negated: signs >> i & 1 == 1,
                })
                .collect();
            out.push(Clause { literals });
        }
    };
    for i in 1..=n {
        push(&[i]);
        for j in i + 1..=n {
            push(&[i, j]);
            for k in j + 1..=n {
                push(&[i, j, k]);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    /// The assignment whose bit `i` is bit `i` of `mask`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Assignment {
            bits: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// A conjunction of clauses over variables `X_1, ..., X_n`.
///
/// Serialized as `{"num_vars": n, "clauses": [[1, -2, 3], ...]}` with
/// DIMACS-signed literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "CnfRepr", try_from = "CnfRepr")]
pub struct Cnf3 {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CnfRepr {
    num_vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl From<Cnf3> for CnfRepr {
    fn from(cnf: Cnf3) -> Self {
        CnfRepr {
            num_vars: cnf.num_vars,
            clauses: cnf
                .clauses
                .iter()
                .map(|c| c.literals.iter().map(|l| l.to_dimacs()).collect())
                .collect(),
        }
    }
}

impl TryFrom<CnfRepr> for Cnf3 {
    type Error = Error;

    fn try_from(repr: CnfRepr) -> Result<Self> {
        let clauses = repr
            .clauses
            .into_iter()
            .map(|c| Clause::new(c.into_iter().map(Literal::from_dimacs).collect()))
            .collect::<Result<Vec<_>>>()?;
        Cnf3::new(repr.num_vars, clauses)
    }
}

/// Largest variable count [`Cnf3::satisfying_assignment`] will enumerate.
pub const TRUTH_TABLE_MAX_VARS: usize = 24;

impl Cnf3 {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for c in &clauses {
            for l in &c.literals {
                if l.var == 0 || l.var > num_vars {
                    return Err(Error::VariableOutOfRange {
                        index: l.var,
                        num_vars,
                    });
                }
            }
        }
        Ok(Cnf3 { num_vars, clauses })
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(a))
    }

    /// First satisfying assignment in truth-table order, if any.
    pub fn satisfying_assignment(&self) -> Result<Option<Assignment>> {
        if self.num_vars > TRUTH_TABLE_MAX_VARS {
            return Err(Error::InstanceTooLarge(format!(
                "truth table over {} variables",
                self.num_vars
            )));
        }
        Ok((0..1u64 << self.num_vars)
            .map(|m| Assignment::from_mask(m, self.num_vars))
            .find(|a| self.satisfied_by(a)))
    }

    pub fn is_satisfiable(&self) -> Result<bool> {
        Ok(self.satisfying_assignment()?.is_some())
    }

    /// `num_clauses` clauses, each with a uniform width in `1..=3` (capped
    /// by `num_vars`), distinct variables and uniform signs.
    pub fn random<R: Rng + ?Sized>(num_vars: usize, num_clauses: usize, rng: &mut R) -> Self {
        assert!(num_vars >= 1, "need at least one variable");
        let clauses = (0..num_clauses)
            .map(|_| {
                let width = rng.gen_range(1..=3.min(num_vars));
                let literals = sample(rng, num_vars, width)
                    .into_iter()
                    .map(|v| Literal {
                        var: v + 1,
                        negated: rng.gen(),
                    })
                    .collect();
                Clause { literals }
            })
            .collect();
        Cnf3 { num_vars, clauses }
    }

    /// Parses DIMACS CNF. Clauses may span lines; `c` lines are comments and
    /// a `%` line ends the input.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('%') {
                break;
            }
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(Error::Parse("duplicate header".into()));
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                let parsed = match fields.as_slice() {
                    ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                    _ => None,
                };
                header = Some(parsed.ok_or_else(|| Error::Parse(format!("bad header {line:?}")))?);
                continue;
            }
            if header.is_none() {
                return Err(Error::Parse("clause before header".into()));
            }
            for tok in line.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad literal {tok:?}")))?;
                if v == 0 {
                    clauses.push(Clause::new(std::mem::take(&mut current))?);
                } else {
                    current.push(Literal::from_dimacs(v));
                    if current.len() > 3 {
                        return Err(Error::Parse(format!(
                            "clause {} has more than 3 literals",
                            clauses.len() + 1
                        )));
                    }
                }
            }
        }
        let (num_vars, num_clauses) =
            header.ok_or_else(|| Error::Parse("missing header".into()))?;
        if !current.is_empty() {
            return Err(Error::Parse("last clause not terminated by 0".into()));
        }
        if clauses.len() != num_clauses {
            return Err(Error::Parse(format!(
                "header announces {num_clauses} clauses, found {}",
                clauses.len()
            )));
        }
        Cnf3::new(num_vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in &c.literals {
                out.push_str(&l.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for Cnf3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("true");
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "({c})")?;
        }
        Ok(())
    }
}
