//! Exact arithmetic substrate: finite fields, polynomials, factorization,
//! Laurent polynomials over Q, rational-coefficient polynomial tools, dyadic
//! ball arithmetic, and integer linear algebra.

pub mod ball;
pub mod factor;
pub mod gf;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod qpoly;
pub mod quadext;

pub use ball::RealBall;
pub use gf::GfField;
pub use laurent::LaurentQ;
pub use poly::Poly;
pub use quadext::QuadExt;
