//! Exact combinatorics of syzygy bundles of monomial families.
//!
//! The crate decides whether the syzygy bundle of a family of monomials on
//! projective N-space is stable, strictly semistable, or unstable, using only
//! integer arithmetic on exponent vectors. On top of the checker it provides
//! explicit constructors that produce, for every admissible parameter triple
//! (N, d, n), a family of n degree-d monomials with the expected verdict,
//! exact moduli-space invariants (rank, Chern classes, slope, dimensions,
//! cohomology table), and a sweep/census harness for exhaustive verification.
//!
//! All public operations are pure and deterministic; nothing uses floating
//! point.

pub mod combin;
pub mod construct;
pub mod harness;
pub mod moduli;
pub mod monomial;
pub mod stability;

pub use construct::{construct_family, ConstructError, ConstructionResult};
pub use harness::{census, sweep, CensusReport, HarnessError, SweepReport};
pub use moduli::{
    bundle_numerics, moduli_report, slope, BundleNumerics, ModuliError, ModuliReport,
};
pub use monomial::{enumerate_monomials, gcd_closure, Family, FamilyError, Monomial};
pub use stability::{
    classify, classify_bruteforce, Classification, ClassifyError, SubsetWitness, Verdict,
};
