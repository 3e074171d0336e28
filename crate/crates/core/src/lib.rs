//! Eigenenergies of quartic and sextic anharmonic oscillators.
//!
//! The regular solution at the origin and the recessive solution at
//! infinity are expanded in series; their Wronskian has a closed form in
//! terms of Gamma functions and the coefficients `gamma_k`. Eigenvalues are
//! its zeros as a function of the energy.

pub mod potential;
pub mod real;
pub mod series;
pub mod wronskian;
pub mod exec;
pub mod solver;
pub mod oracle;
pub mod expr;
pub mod reference;
pub mod tables;
