//! Computational verification of primitive completely normal (PCN) elements
//! in finite field extensions `F_{q^n} / F_q`.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: integer number theory and factorization of `q^n - 1`;
//! * [`gf`]: prime fields, extension fields `F_p[x]/(f)`, Frobenius maps and
//!   subfield embeddings;
//! * [`factor`]: polynomial factorization over finite fields, cyclotomic
//!   polynomials and unit counting;
//! * [`structure`]: essential divisor sets, regularity predicates and the
//!   finest agreeable cyclotomic decomposition;
//! * [`criteria`]: the numeric sufficient-existence cascade;
//! * [`search`]: element predicates and the search for absolute PCN polynomials;
//! * [`enumeration`]: exact CN/PCN counts and a brute-force oracle.

pub mod arith;
pub mod criteria;
pub mod enumeration;
pub mod error;
pub mod factor;
pub mod gf;
pub mod search;
pub mod structure;

pub use arith::FactoredInteger;
pub use criteria::{run_criteria, CriteriaReport, Flag, Prefilter};
pub use enumeration::{count_cn, count_pcn, EnumerationOptions, EnumerationRecord, Quintuple};
pub use error::{PcnError, Result};
pub use gf::{FieldCtx, FieldElement, FiniteField, PolyModP, PrimeField};
pub use search::{search_absolute_pcn, verify_absolute_pcn};
pub use structure::{CyclotomicPair, Decomposition, ExtensionModel, PrimePowerPair};
