//! 3CNF formulas and their encoding as divisors of `x^Q_n - 1`.
//!
//! Variable `X_i` is attached to the `i`-th prime `p_i`. An assignment `A`
//! corresponds to the `Q_n`-th roots of unity `zeta` whose order is prime
//! to `p_i` exactly when `A_i = 1`; a clause becomes the square-free
//! polynomial vanishing at exactly the roots of unity whose assignment
//! satisfies it.

mod cnf;
mod morphism;

pub use cnf::{clause_shapes, Assignment, Clause, Cnf3, Literal, TRUTH_TABLE_MAX_VARS};
pub use morphism::{
    assignment_to_root, clause_poly, encode_system, encode_system_factored, expand, literal_poly,
    root_to_assignment, BinomialProduct,
};
