//! Computational stochastic geometry for beta* polytopes and their
//! hyperbolic counterparts (Poisson zero cells, typical Poisson-Voronoi
//! cells).
//!
//! The crate has two halves that check each other:
//!
//! * [`analytic`] evaluates every closed-form or quadrature-form
//!   expectation (f-vectors, T-functionals, intrinsic volumes, external
//!   and internal angle sums, asymptotics), built on [`specfun`] and
//!   [`quadrature`];
//! * [`sampling`] perfectly simulates the same random polytopes, with
//!   [`geometry`] providing hulls and derived functionals and
//!   [`harness`] running analytic-vs-empirical verification.

pub mod analytic;
pub mod geometry;
pub mod harness;
pub mod quadrature;
pub mod sampling;
pub mod specfun;
