//! Cycle codes of graphs: exact maximum-likelihood decoding, the
//! non-backtracking spectrum that governs their decoding thresholds, and
//! Monte Carlo machinery to compare the closed-form bounds with simulation.

pub mod bounds;
pub mod cli;
pub mod decoder;
pub mod fraction;
pub mod graph;
pub mod harness;
pub mod nonbacktracking;
pub mod percolation;

pub use fraction::Fraction;
pub use graph::{CodeParameters, Girth, Graph};
pub use nonbacktracking::{Arc, NbOperator, PerronData};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/walks.md")]
    mod walks {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/decoding.md")]
    mod decoding {}
    #[doc = include_str!("../../../book/src/percolation.md")]
    mod percolation {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
