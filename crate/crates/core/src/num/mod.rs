//! Shared numerics: quadrature, bracketed root finding, ODE stepping.

pub mod ode;
pub mod quad;
pub mod roots;
