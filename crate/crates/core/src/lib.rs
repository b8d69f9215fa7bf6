//! Exact tooling for unit circles spanned by points on three unit circles.
//!
//! Given three unit circles `C1, C2, C3` and finite point sets on each, the
//! library counts the unit circles spanned by trichromatic triples, builds the
//! resultant curves `gamma_{a,b}` in the parameter plane of `C2 x C2`, counts
//! point/curve incidences, and checks the double-counting inequalities
//! relating them. Counting is exact over rationals; the explicit center
//! constructions (which need square roots) run in `f64`.

pub mod cli;
pub mod config;
pub mod configgen;
pub mod counting;
pub mod curves;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod phi;

pub use error::{Error, Result};
pub use exact::{Rational, UniPoly};
pub use geometry::{OrientationParam, Point};
