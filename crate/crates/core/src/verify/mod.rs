//! Independent checks: measure predicates, a brute-force integral oracle,
//! random instance generators, equality witnesses and the bound fuzzer.

pub mod fuzz;
pub mod generate;
pub mod oracle;
pub mod predicates;
pub mod witness;

pub use fuzz::{fuzz, Counterexample, FuzzConfig, FuzzReport};
pub use generate::MeasureKind;
pub use oracle::oracle_integral;
pub use predicates::{Predicate, PredicateResult};
pub use witness::attainability_witness;
