//! Exact construction, detection and extraction of grid structures in
//! point-line arrangements.
//!
//! All geometry is carried out over the rationals, so incidence, orientation
//! and containment tests are decided without tolerances. The crate covers:
//!
//! * [`geom`]: rational points, canonical integer lines and planar predicates;
//! * [`arrangement`]: point-line arrangements, incidence graphs and counting;
//! * [`sidon`]: Sidon and k-fold Sidon sets with exhaustive certification;
//! * [`constructions`]: extremal arrangement generators and bound formulas;
//! * [`grid_detect`]: t×t grid and natural grid detection with witnesses;
//! * [`grid_extract`]: the constructive machinery that extracts natural grids.

pub mod arrangement;
pub mod constructions;
pub mod error;
mod fastkey;
pub mod format;
pub mod geom;
pub mod grid_detect;
pub mod grid_extract;
pub mod rational;
pub mod sidon;

pub use arrangement::{Arrangement, CountStrategy, IncidenceGraph};
pub use error::{Error, ParseError, Result};
pub use geom::{Line, Point};
pub use rational::Rational;
