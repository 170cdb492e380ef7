//! Structure of complete normality: essential divisor sets, regularity
//! predicates, cyclotomic decompositions and the field model used by the
//! element tests.

mod decomposition;
mod model;
mod pair;

pub use decomposition::{dct_split, finest_agreeable_decomposition, finest_with_order, CyclotomicPair, Decomposition};
pub use model::{ExtensionModel, IntermediateField, OrderTest};
pub use pair::{
    build_cn_digraph, essential_set, is_completely_basic, is_regular_pair, is_universally_regular, CnDigraph,
    PrimePowerPair,
};
