//! Exact arithmetic for quadratic covers of curves over finite fields.
//!
//! The library computes, for an etale double cover of a hyperelliptic curve,
//! both sides of a family of orbital/spectral identities: L-functions of the
//! quadratic twist character, regularized orbital integrals of Hecke elements
//! in two independent geometries, Eisenstein-ideal kernels, spectral Taylor
//! expansions, and certified positivity reports for central derivatives.
//!
//! Everything downstream of the curve model is exact (rationals or Laurent
//! polynomials in `q^s`); floating point appears only inside certified ball
//! arithmetic in [`positivity`].

pub mod arith;
pub mod curve;
pub mod hecke;
pub mod lfunc;
pub mod rtf;
pub mod spectral;
// Remaining layers land as they are built; lfunc, hecke, rtf, spectral,
// positivity are added below in dependency order.
