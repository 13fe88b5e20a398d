//! Exact enumeration and verification toolkit for colored lattice models whose
//! rows move left or right, their Yang-Baxter equations, their crystal limit and
//! the combinatorics of Gelfand-Tsetlin patterns attached to them.

pub mod algebra;
pub mod coxeter;
pub mod duality;
pub mod error;
pub mod gt;
pub mod lattice;
pub mod report;
pub mod suites;
pub mod weights;
pub mod ybe;

pub use algebra::{LaurentPoly, Registry};
pub use coxeter::{FlagTable, HighlightPattern, MonoidElement};
pub use duality::DualityReport;
pub use error::{Error, Result};
pub use gt::{GTPattern, ShortPattern, Ssyt};
pub use lattice::{LatticeKind, State, SystemSpec};
pub use report::Report;
pub use weights::{RKind, RowType, Spin, TwistData, WeightRegime};
pub use ybe::{LinearMap, Weights, YbeReport};
