//! Bivariate Stern polynomials `s_n(x, y)`, hyperbinary expansions, and
//! range checkers for the digit-reversal symmetry `s_n = s_{n^R}`.

pub mod bipoly;
pub mod cli;
pub mod digits;
pub mod error;
pub mod hyperbinary;
pub mod stern;
pub mod verify;

pub use bipoly::{BiPoly, Monomial};
pub use digits::{
    bit_length, bits, continuant_numerator, is_power_of_two, reverse, runs, BinaryWord, RunProfile,
};
pub use error::{Error, Result};
pub use hyperbinary::{
    enumerate_expansions, expansion_value, h_counts_enum, h_counts_recurrence, HCount, HCountTable,
    HyperExpansion,
};
pub use stern::{
    stern_pair, stern_poly, stern_poly_matrix, stern_poly_matrix_with, stern_value,
    transition_matrix, PolyMatrix2, PolyVec2, SternPair, SternTable, Transitions,
};
