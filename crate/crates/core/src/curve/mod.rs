//! Curves, places, divisors, and the two data backends.
//!
//! [`hyper`] is the full geometric backend: an explicit hyperelliptic model
//! with an etale double cover, valuations, section spaces, and a certified
//! divisor class group.  [`synthetic`] carries only a place table with
//! character signs, enough for the zeta and twist layers.  Everything
//! downstream consumes the [`PlaceTable`] view; [`spec`] is the file format
//! that selects a backend.

pub mod divisor;
pub mod enumerate;
pub mod hyper;
pub mod jacobian;
pub mod spec;
pub mod synthetic;

pub use divisor::{Divisor, Place, PlaceId};
pub use hyper::{CurveFn, HyperCover, ModelError};
pub use jacobian::{Jacobian, PicClass};
pub use spec::{curve_from_spec, load_curve, CurveData, CurveSpec};
pub use synthetic::PlaceTable;
