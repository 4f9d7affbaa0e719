//! Exact tools for one-row Gomory–Johnson cut-generating functions:
//! minimality, move closures, perturbation spaces and extremality.

pub mod catalog;
pub mod closure;
pub mod complex2d;
pub mod error;
pub mod exactnum;
pub mod gridoracle;
pub mod linalg;
pub mod moves;
pub mod perturbation;
pub mod presentation;
pub mod pwl;

pub use error::{Error, Result};
pub use exactnum::{IntervalUnion, OpenInterval, Rat};
pub use pwl::{Node, PerturbationFn, PwlFunction, Side};
