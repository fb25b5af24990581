//! Casimir pressure between graphene-coated dielectric plates.
//!
//! The crate evaluates the graphene polarization tensor on the real and
//! imaginary frequency axes with full spatial dispersion, builds reflection
//! coefficients for coated or bare half-spaces, and integrates them into
//! equilibrium and out-of-equilibrium Casimir pressures.

pub mod config;
pub mod constants;
pub mod dielectric;
pub mod fresnel;
pub mod graphene;
pub mod pressure;
pub mod units;
